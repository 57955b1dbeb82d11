#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mlqm/core.hpp"
#include "mlqm/potentials.hpp"

namespace mlqm::cli {

enum class PotentialKind { Delta, DoubleDelta, Coulomb };
enum class OutputFormat { Json, Csv };

/// Validated run configuration; CLI flags override config-file values
/// override these defaults.
struct RunConfig {
  PotentialKind potential = PotentialKind::Delta;
  double u0 = 1.0;
  double a = 0.0;
  double alpha = 1.0;
  double A = 0.0;
  double beta = 0.0;
  double m = 1.0;
  double hbar = 1.0;
  int grid = 2000;
  int n_states = 5;
  double root_tol = 1e-12;
  double quad_tol = 1e-10;
  OutputFormat format = OutputFormat::Json;
  std::string out_path;    // empty: standard output
  bool timestamp = true;

  PhysicalParams params() const;
  Deformation deformation() const;
  PotentialSpec make_potential() const;
  std::string potential_name() const;
};

struct StateRecord {
  std::string label;
  double energy = 0.0;
  double q = 0.0;
  double residual = 0.0;
  std::optional<double> oracle_energy;
  std::optional<double> deviation;  // |E_oracle - E| / |E|
};

struct SweepPoint {
  double value = 0.0;
  std::vector<StateRecord> states;
};

struct ResultRecord {
  RunConfig config;
  std::vector<StateRecord> states;          // solve / oracle modes
  std::optional<std::string> sweep_param;   // sweep mode
  std::vector<SweepPoint> sweep;
  std::optional<std::array<double, 3>> fit;  // c0 + c1 sqrt(beta) + c2 beta
  int grid_used = 0;
  double seconds = 0.0;
  std::string timestamp_utc;  // empty when suppressed
};

/// Doubles are rendered with 17 significant digits so that parsing the
/// text recovers the exact binary value.
std::string format_double(double v);

std::string to_json(const ResultRecord& r);
std::string to_csv(const ResultRecord& r);

/// Runs the solver for the configured potential (analytic only, or with
/// the Nystroem oracle alongside when with_oracle is set).
ResultRecord run_solve(const RunConfig& cfg, bool with_oracle);

struct SweepRequest {
  std::string param;  // beta | u0 | a | alpha | A
  double from = 0.0;
  double to = 0.0;
  int points = 0;
  bool log_spaced = false;
  bool fit = false;
};

/// Evaluates the sweep (points may run concurrently; output order is
/// input order) and optionally fits the small-deformation expansion.
ResultRecord run_sweep(const RunConfig& cfg, const SweepRequest& req);

/// Full invariant suite: one pass/fail line per check with the measured
/// defect. Returns the number of failed checks. quick restricts to the
/// fast subset.
int run_validation(bool quick, std::ostream& os);

}  // namespace mlqm::cli
