#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "mlqm/io.hpp"
#include "mlqm/potentials.hpp"
#include "mlqm/version.hpp"

namespace {

using mlqm::cli::OutputFormat;
using mlqm::cli::PotentialKind;
using mlqm::cli::RunConfig;

struct CommonOpts {
  std::string potential = "delta";
  std::string format = "json";
  std::string out;
  std::string config_path;
  RunConfig cfg;  // numeric defaults live here
  bool no_timestamp = false;

  CLI::Option* o_potential = nullptr;
  CLI::Option* o_u0 = nullptr;
  CLI::Option* o_a = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_A = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_m = nullptr;
  CLI::Option* o_hbar = nullptr;
  CLI::Option* o_grid = nullptr;
  CLI::Option* o_n_states = nullptr;
  CLI::Option* o_format = nullptr;
  CLI::Option* o_out = nullptr;
};

void attach_common(CLI::App* sub, CommonOpts& o) {
  o.o_potential =
      sub->add_option("--potential", o.potential,
                      "potential: delta | double-delta | coulomb");
  o.o_u0 = sub->add_option("--u0", o.cfg.u0, "well coupling U0");
  o.o_a = sub->add_option("--a", o.cfg.a, "double-delta half separation");
  o.o_alpha = sub->add_option("--alpha", o.cfg.alpha, "Coulomb coupling");
  o.o_A = sub->add_option("--A", o.cfg.A,
                          "inverse-coordinate extension parameter (inf/-inf "
                          "select the endpoint spectra)");
  o.o_beta = sub->add_option("--beta", o.cfg.beta, "deformation parameter");
  o.o_m = sub->add_option("--m", o.cfg.m, "mass");
  o.o_hbar = sub->add_option("--hbar", o.cfg.hbar, "Planck constant");
  o.o_grid = sub->add_option("--grid", o.cfg.grid, "quadrature order");
  o.o_n_states = sub->add_option("--n-states", o.cfg.n_states,
                                 "number of states to report");
  sub->add_option("--root-tol", o.cfg.root_tol, "root-finding tolerance");
  sub->add_option("--quad-tol", o.cfg.quad_tol, "quadrature tolerance");
  o.o_format = sub->add_option("--format", o.format, "output: json | csv");
  o.o_out = sub->add_option("--out", o.out, "output path (default stdout)");
  sub->add_option("--config", o.config_path,
                  "JSON config file; CLI flags take precedence");
  sub->add_flag("--no-timestamp", o.no_timestamp,
                "omit wall-time fields for byte-identical reruns");
}

// CLI flags override config-file values override built-in defaults.
void merge_config_file(CommonOpts& o) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw std::invalid_argument("cannot open config file: " + o.config_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed config file: ") + e.what());
  }
  auto take_d = [&](const char* key, CLI::Option* opt, double& dst) {
    if (j.contains(key) && (!opt || opt->count() == 0)) dst = j[key].get<double>();
  };
  auto take_i = [&](const char* key, CLI::Option* opt, int& dst) {
    if (j.contains(key) && (!opt || opt->count() == 0)) dst = j[key].get<int>();
  };
  auto take_s = [&](const char* key, CLI::Option* opt, std::string& dst) {
    if (j.contains(key) && (!opt || opt->count() == 0)) dst = j[key].get<std::string>();
  };
  take_s("potential", o.o_potential, o.potential);
  take_d("u0", o.o_u0, o.cfg.u0);
  take_d("a", o.o_a, o.cfg.a);
  take_d("alpha", o.o_alpha, o.cfg.alpha);
  take_d("A", o.o_A, o.cfg.A);
  take_d("beta", o.o_beta, o.cfg.beta);
  take_d("m", o.o_m, o.cfg.m);
  take_d("hbar", o.o_hbar, o.cfg.hbar);
  take_i("grid", o.o_grid, o.cfg.grid);
  take_i("n_states", o.o_n_states, o.cfg.n_states);
  take_s("format", o.o_format, o.format);
  take_s("out", o.o_out, o.out);
}

RunConfig finalize(CommonOpts& o) {
  merge_config_file(o);
  RunConfig cfg = o.cfg;
  if (o.potential == "delta") cfg.potential = PotentialKind::Delta;
  else if (o.potential == "double-delta") cfg.potential = PotentialKind::DoubleDelta;
  else if (o.potential == "coulomb") cfg.potential = PotentialKind::Coulomb;
  else throw std::invalid_argument("unknown potential: " + o.potential);
  if (o.format == "json") cfg.format = OutputFormat::Json;
  else if (o.format == "csv") cfg.format = OutputFormat::Csv;
  else throw std::invalid_argument("unknown format: " + o.format);
  cfg.out_path = o.out;
  cfg.timestamp = !o.no_timestamp;
  if (cfg.grid < 2) throw std::invalid_argument("--grid must be >= 2");
  if (cfg.n_states < 1) throw std::invalid_argument("--n-states must be >= 1");
  (void)cfg.params();  // validates m, hbar
  (void)cfg.deformation();
  return cfg;
}

void emit(const mlqm::cli::ResultRecord& rec) {
  const std::string text = rec.config.format == OutputFormat::Json
                               ? mlqm::cli::to_json(rec)
                               : mlqm::cli::to_csv(rec);
  if (rec.config.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(rec.config.out_path);
    if (!out)
      throw std::invalid_argument("cannot write output file: " +
                                  rec.config.out_path);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mlqm: bound states of one-dimensional wells in deformed space with a "
      "minimal length"};
  app.set_version_flag("--version", mlqm::kVersion);
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "closed-form bound states");
  CommonOpts so;
  attach_common(solve, so);

  auto* orac = app.add_subcommand(
      "oracle", "Nystroem eigensolver alongside the closed forms (beta > 0)");
  CommonOpts oo;
  attach_common(orac, oo);

  auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
  CommonOpts wo;
  attach_common(sweep, wo);
  mlqm::cli::SweepRequest req;
  sweep->add_option("--sweep-param", req.param,
                    "parameter to sweep: beta | u0 | a | alpha | A")
      ->required();
  sweep->add_option("--from", req.from, "range start")->required();
  sweep->add_option("--to", req.to, "range end")->required();
  sweep->add_option("--points", req.points, "number of points")->required();
  sweep->add_flag("--log", req.log_spaced, "log-spaced points");
  sweep->add_flag("--fit", req.fit,
                  "fit E = c0 + c1 sqrt(beta) + c2 beta (delta beta-sweeps)");

  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  bool quick = false;
  std::string fault;
  validate->add_flag("--quick", quick, "fast subset (under ten seconds)");
  validate->add_option("--inject-fault", fault)->group("");  // test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) {
      emit(mlqm::cli::run_solve(finalize(so), false));
    } else if (orac->parsed()) {
      emit(mlqm::cli::run_solve(finalize(oo), true));
    } else if (sweep->parsed()) {
      emit(mlqm::cli::run_sweep(finalize(wo), req));
    } else if (validate->parsed()) {
      if (fault == "kernel-sign") {
        mlqm::testing::set_kernel_sign_flip(true);
      } else if (fault == "step-asymmetry") {
        mlqm::testing::set_step_asymmetry(true);
      } else if (!fault.empty()) {
        throw std::invalid_argument("unknown fault: " + fault);
      }
      return mlqm::cli::run_validation(quick, std::cout) == 0 ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
