#include "mlqm/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mlqm/analytic.hpp"
#include "mlqm/oracle.hpp"
#include "mlqm/version.hpp"

namespace mlqm::cli {

PhysicalParams RunConfig::params() const { return PhysicalParams(m, hbar); }

Deformation RunConfig::deformation() const { return Deformation(beta); }

PotentialSpec RunConfig::make_potential() const {
  switch (potential) {
    case PotentialKind::Delta: return DeltaPotential(u0);
    case PotentialKind::DoubleDelta: return DoubleDeltaPotential(u0, a);
    case PotentialKind::Coulomb: return CoulombLikePotential(alpha, A);
  }
  throw std::invalid_argument("unknown potential kind");
}

std::string RunConfig::potential_name() const {
  switch (potential) {
    case PotentialKind::Delta: return "delta";
    case PotentialKind::DoubleDelta: return "double-delta";
    case PotentialKind::Coulomb: return "coulomb";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Minimal JSON writer with a fixed key order and %.17g numbers, so equal
// configs produce byte-identical output.
class JsonWriter {
 public:
  void begin_obj() { sep(); os_ << '{'; fresh_ = true; }
  void end_obj() { os_ << '}'; fresh_ = false; }
  void begin_arr() { sep(); os_ << '['; fresh_ = true; }
  void end_arr() { os_ << ']'; fresh_ = false; }
  void key(const std::string& k) {
    sep();
    write_string(k);
    os_ << ':';
    fresh_ = true;
  }
  void value(double v) {
    sep();
    if (std::isfinite(v)) os_ << format_double(v);
    else os_ << "null";
    fresh_ = false;
  }
  void value(int v) { sep(); os_ << v; fresh_ = false; }
  void value(const std::string& s) { sep(); write_string(s); fresh_ = false; }
  std::string str() const { return os_.str(); }

 private:
  void sep() {
    if (!fresh_) os_ << ',';
    fresh_ = true;
  }
  void write_string(const std::string& s) {
    os_ << '"';
    for (char c : s) {
      switch (c) {
        case '"': os_ << "\\\""; break;
        case '\\': os_ << "\\\\"; break;
        case '\n': os_ << "\\n"; break;
        case '\t': os_ << "\\t"; break;
        default: os_ << c;
      }
    }
    os_ << '"';
  }
  std::ostringstream os_;
  bool fresh_ = true;
};

void write_config(JsonWriter& w, const RunConfig& c) {
  w.key("config");
  w.begin_obj();
  w.key("potential"); w.value(c.potential_name());
  switch (c.potential) {
    case PotentialKind::Delta:
      w.key("u0"); w.value(c.u0);
      break;
    case PotentialKind::DoubleDelta:
      w.key("u0"); w.value(c.u0);
      w.key("a"); w.value(c.a);
      break;
    case PotentialKind::Coulomb:
      w.key("alpha"); w.value(c.alpha);
      w.key("A"); w.value(c.A);
      break;
  }
  w.key("beta"); w.value(c.beta);
  w.key("m"); w.value(c.m);
  w.key("hbar"); w.value(c.hbar);
  w.key("grid"); w.value(c.grid);
  w.key("n_states"); w.value(c.n_states);
  w.end_obj();
}

void write_states(JsonWriter& w, const std::vector<StateRecord>& states) {
  w.begin_arr();
  for (const auto& s : states) {
    w.begin_obj();
    w.key("label"); w.value(s.label);
    w.key("energy"); w.value(s.energy);
    w.key("q"); w.value(s.q);
    w.key("residual"); w.value(s.residual);
    if (s.oracle_energy) { w.key("oracle_energy"); w.value(*s.oracle_energy); }
    if (s.deviation) { w.key("deviation"); w.value(*s.deviation); }
    w.end_obj();
  }
  w.end_arr();
}

}  // namespace

std::string to_json(const ResultRecord& r) {
  JsonWriter w;
  w.begin_obj();
  write_config(w, r.config);
  if (r.sweep_param) {
    w.key("sweep_param");
    w.value(*r.sweep_param);
    w.key("sweep");
    w.begin_arr();
    for (const auto& pt : r.sweep) {
      w.begin_obj();
      w.key("value"); w.value(pt.value);
      w.key("states");
      write_states(w, pt.states);
      w.end_obj();
    }
    w.end_arr();
  } else {
    w.key("states");
    write_states(w, r.states);
  }
  if (r.fit) {
    w.key("fit");
    w.begin_obj();
    w.key("c0"); w.value((*r.fit)[0]);
    w.key("c1"); w.value((*r.fit)[1]);
    w.key("c2"); w.value((*r.fit)[2]);
    w.end_obj();
  }
  w.key("meta");
  w.begin_obj();
  w.key("version"); w.value(std::string(kVersion));
  w.key("grid"); w.value(r.grid_used);
  if (r.config.timestamp) {
    w.key("seconds"); w.value(r.seconds);
    w.key("timestamp"); w.value(r.timestamp_utc);
  }
  w.end_obj();
  w.end_obj();
  std::string out = w.str();
  out.push_back('\n');
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += "\"\"";
    else q.push_back(c);
  }
  q.push_back('"');
  return q;
}

void csv_row(std::ostringstream& os, const std::string& param,
             const std::string& value, const StateRecord& s) {
  os << csv_field(param) << ',' << value << ',' << csv_field(s.label) << ','
     << format_double(s.energy) << ',' << format_double(s.q) << ','
     << format_double(s.residual) << ','
     << (s.oracle_energy ? format_double(*s.oracle_energy) : "") << ','
     << (s.deviation ? format_double(*s.deviation) : "") << '\n';
}

}  // namespace

std::string to_csv(const ResultRecord& r) {
  std::ostringstream os;
  os << "param,param_value,label,energy,q,residual,oracle_energy,deviation\n";
  if (r.sweep_param) {
    for (const auto& pt : r.sweep)
      for (const auto& s : pt.states)
        csv_row(os, *r.sweep_param, format_double(pt.value), s);
  } else {
    for (const auto& s : r.states) csv_row(os, "", "", s);
  }
  if (r.fit) {
    const char* names[3] = {"c0", "c1", "c2"};
    for (int k = 0; k < 3; ++k) {
      StateRecord s;
      s.label = names[k];
      s.energy = (*r.fit)[k];
      os << "fit,," << csv_field(s.label) << ',' << format_double(s.energy)
         << ",,,,\n";
    }
  }
  return os.str();
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<StateRecord> analytic_states(const RunConfig& cfg) {
  std::vector<StateRecord> out;
  const auto d = cfg.deformation();
  const auto params = cfg.params();
  switch (cfg.potential) {
    case PotentialKind::Delta: {
      const auto sol = analytic::solve_delta(cfg.u0, d, params, cfg.grid);
      out.push_back({sol.state.label.str(), sol.state.energy, sol.state.q,
                     sol.state.residual, std::nullopt, std::nullopt});
      break;
    }
    case PotentialKind::DoubleDelta: {
      const auto sol =
          analytic::solve_double_delta(cfg.u0, cfg.a, d, params, cfg.grid);
      for (const auto& s : sol.states)
        out.push_back({s.label.str(), s.energy, s.q, s.residual, std::nullopt,
                       std::nullopt});
      break;
    }
    case PotentialKind::Coulomb: {
      const auto sol = analytic::solve_coulomb(cfg.alpha, cfg.A, cfg.n_states,
                                               d, params, cfg.grid);
      for (const auto& s : sol.states)
        out.push_back({s.label.str(), s.energy, s.q, s.residual, std::nullopt,
                       std::nullopt});
      break;
    }
  }
  return out;
}

bool has_attractive_coupling(const RunConfig& cfg) {
  if (cfg.potential == PotentialKind::Coulomb) return cfg.alpha > 0.0;
  return cfg.u0 > 0.0;
}

}  // namespace

ResultRecord run_solve(const RunConfig& cfg, bool with_oracle) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord rec;
  rec.config = cfg;
  rec.grid_used = cfg.grid;
  rec.timestamp_utc = utc_now();

  if (with_oracle) {
    const auto H = oracle::build_hamiltonian(cfg.make_potential(),
                                             cfg.deformation(), cfg.params(),
                                             cfg.grid);
    const auto spec = oracle::bound_states(H, cfg.n_states);
    std::vector<StateRecord> analytic;
    if (has_attractive_coupling(cfg)) analytic = analytic_states(cfg);
    std::sort(analytic.begin(), analytic.end(),
              [](const StateRecord& a, const StateRecord& b) {
                return a.energy < b.energy;
              });
    const size_t rows =
        std::max(analytic.size(), spec.bound_states.size());
    for (size_t k = 0; k < rows && k < static_cast<size_t>(cfg.n_states); ++k) {
      StateRecord s;
      if (k < analytic.size()) s = analytic[k];
      else s.label = "oracle-only";
      if (k < spec.bound_states.size()) {
        s.oracle_energy = spec.bound_states[k].energy;
        if (k < analytic.size())
          s.deviation = std::abs(*s.oracle_energy - s.energy) /
                        std::abs(s.energy);
        if (!(k < analytic.size())) {
          s.energy = *s.oracle_energy;
          s.q = std::sqrt(std::max(0.0, -2.0 * cfg.m * s.energy));
          s.residual = spec.bound_states[k].convergence_estimate;
        }
      }
      rec.states.push_back(std::move(s));
    }
  } else {
    rec.states = analytic_states(cfg);
  }
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

namespace {

RunConfig with_param(RunConfig cfg, const std::string& param, double v) {
  if (param == "beta") cfg.beta = v;
  else if (param == "u0") cfg.u0 = v;
  else if (param == "a") cfg.a = v;
  else if (param == "alpha") cfg.alpha = v;
  else if (param == "A") cfg.A = v;
  else throw std::invalid_argument("unknown sweep parameter: " + param);
  return cfg;
}

}  // namespace

ResultRecord run_sweep(const RunConfig& cfg, const SweepRequest& req) {
  if (req.points < 2)
    throw std::invalid_argument("sweep needs at least two points");
  if (req.log_spaced && !(req.from > 0.0 && req.to > 0.0))
    throw std::invalid_argument("log-spaced sweep needs positive endpoints");
  if (req.fit &&
      (req.param != "beta" || cfg.potential != PotentialKind::Delta))
    throw std::invalid_argument(
        "fit mode estimates the delta-well expansion and needs a beta sweep "
        "of the delta potential");
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> values(req.points);
  for (int k = 0; k < req.points; ++k) {
    const double t = req.points == 1 ? 0.0 : double(k) / (req.points - 1);
    values[k] = req.log_spaced
                    ? std::exp(std::log(req.from) +
                               t * (std::log(req.to) - std::log(req.from)))
                    : req.from + t * (req.to - req.from);
  }

  // evaluate points concurrently, collect in input order
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(req.points));
  std::vector<std::future<std::vector<StateRecord>>> futures;
  futures.reserve(req.points);
  for (int k = 0; k < req.points; ++k) {
    const RunConfig point_cfg = with_param(cfg, req.param, values[k]);
    futures.push_back(std::async(
        workers > 1 ? std::launch::async : std::launch::deferred,
        [point_cfg] { return analytic_states(point_cfg); }));
  }

  ResultRecord rec;
  rec.config = cfg;
  rec.grid_used = cfg.grid;
  rec.sweep_param = req.param;
  rec.timestamp_utc = utc_now();
  for (int k = 0; k < req.points; ++k)
    rec.sweep.push_back({values[k], futures[k].get()});

  if (req.fit) {
    std::vector<double> s, e;
    for (const auto& pt : rec.sweep) {
      if (pt.states.empty()) continue;
      s.push_back(std::sqrt(pt.value));
      e.push_back(pt.states.front().energy);
    }
    // cubic-augmented basis: the sqrt(beta)^3 term is one order beyond the
    // reported expansion and absorbs the truncation bias that would
    // otherwise leak into the beta coefficient
    const int degree = s.size() >= 6 ? 3 : 2;
    const auto c = numerics::polyfit(s, e, degree);
    rec.fit = std::array<double, 3>{c[0], c[1], c[2]};
  }
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

}  // namespace mlqm::cli
