#include <cmath>
#include <complex>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <vector>

#include "mlqm/analytic.hpp"
#include "mlqm/io.hpp"
#include "mlqm/oracle.hpp"

namespace mlqm::cli {

namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;

struct Check {
  const char* name;
  bool quick;
  double tolerance;
  std::function<double()> defect;  // measured defect, pass iff <= tolerance
};

double delta_closed_form_beta0() {
  const auto sol =
      analytic::solve_delta(1.0, Deformation(), PhysicalParams());
  return std::abs(sol.state.energy + 2.0 * kPi * kPi) / (2.0 * kPi * kPi);
}

double delta_condition_residual() {
  double worst = 0.0;
  for (double beta : {0.0, 1e-4, 1e-2, 0.1, 1.0, 10.0})
    for (double u0 : {0.1, 1.0, 10.0}) {
      const auto sol = analytic::solve_delta(u0, Deformation(beta),
                                             PhysicalParams(), 64);
      worst = std::max(worst, sol.state.residual);
    }
  return worst;
}

double wavefunction_norms() {
  double worst = 0.0;
  auto push = [&](const Wavefunction& wf) {
    worst = std::max(worst, std::abs(wf.sampled_norm() - 1.0));
  };
  push(analytic::solve_delta(1.0, Deformation(), PhysicalParams(), 1500)
           .wavefunction);
  push(analytic::solve_delta(1.0, Deformation(0.01), PhysicalParams(), 1500)
           .wavefunction);
  const Deformation dd(0.04);
  for (const auto& wf :
       analytic::solve_double_delta(1.0, 2.0 * dd.sqrt_beta(), dd,
                                    PhysicalParams(), 1500)
           .wavefunctions)
    push(wf);
  for (const auto& wf : analytic::solve_coulomb(1.0, 0.0, 3, Deformation(0.02),
                                                PhysicalParams(), 1500)
                            .wavefunctions)
    push(wf);
  return worst;
}

double double_delta_parity() {
  const Deformation d(0.04);
  const auto sol = analytic::solve_double_delta(1.0, 2.0 * d.sqrt_beta(), d,
                                                PhysicalParams(), 800);
  double worst = 0.0;
  for (size_t k = 0; k < sol.states.size(); ++k) {
    const auto& wf = sol.wavefunctions[k];
    const double sign =
        sol.states[k].label.kind == QuantumLabel::Kind::Even ? 1.0 : -1.0;
    for (size_t i = 0; i < wf.amplitudes.size(); ++i) {
      const size_t j = wf.amplitudes.size() - 1 - i;
      worst = std::max(worst,
                       std::abs(wf.amplitudes[i] - sign * wf.amplitudes[j]));
    }
  }
  return worst;
}

double kernel_hermiticity() {
  const Deformation d(0.04);
  const PhysicalParams params;
  const auto grid = numerics::gauss_legendre(-d.p_max * 0.999, d.p_max * 0.999, 11);
  double worst = 0.0;
  std::vector<PotentialSpec> specs;
  specs.emplace_back(DeltaPotential(1.0));
  specs.emplace_back(DoubleDeltaPotential(1.0, 0.5));
  for (double A : {-0.7, 0.0, 0.7, 3.0})
    specs.emplace_back(CoulombLikePotential(1.0, A));
  for (const auto& s : specs)
    worst = std::max(worst, hermiticity_defect(s, grid.nodes, d, params));
  return worst;
}

double g_identities() {
  double worst = 0.0;
  for (double beta : {0.25, 1.0}) {
    const Deformation d(beta);
    for (double q : {0.3, 1.0, 3.0}) {
      for (int n = 0; n <= 4; ++n) {
        const double closed = analytic::g_function_closed(n, q, d);
        const double numeric =
            analytic::g_function_numeric(n * d.sqrt_beta(), q, d);
        worst = std::max(worst, std::abs(numeric - closed) /
                                    std::max(1e-30, std::abs(closed)));
      }
    }
  }
  return worst;
}

double coulomb_energy_identity() {
  double worst = 0.0;
  for (double beta : {0.005, 0.02, 0.1})
    for (double A : {-2.0, 0.0, 1.0})
      for (int n = 0; n < 3; ++n) {
        const auto pt = analytic::coulomb_closed_form_energy_check(
            1.0, A, Deformation(beta), PhysicalParams(), n);
        worst = std::max(worst, pt.rel_diff_squared);
        if (!pt.sign_flagged) worst = std::max(worst, 1.0);
      }
  return worst;
}

double coulomb_delta_param() {
  double worst = std::abs(analytic::extension_delta(0.0) - 0.5);
  const double inf = std::numeric_limits<double>::infinity();
  worst = std::max(worst, std::abs(analytic::extension_delta(inf)));
  worst = std::max(worst, std::abs(analytic::extension_delta(-inf) - 1.0));
  double prev = 1.0;
  for (double A = -10.0; A <= 10.0; A += 0.5) {
    const double del = analytic::extension_delta(A);
    if (!(del > 0.0 && del < 1.0 && del < prev)) worst = std::max(worst, 1.0);
    prev = del;
  }
  return worst;
}

double cumulative_total() {
  const auto grid = numerics::gauss_legendre(-kPi / 2.0, kPi / 2.0, 120);
  std::vector<Complex> ones(grid.order(), Complex{1.0, 0.0});
  std::vector<Complex> odd(grid.order());
  for (int i = 0; i < grid.order(); ++i)
    odd[i] = Complex{grid.nodes[i], 0.0};
  const auto c1 = numerics::cumulative_integral(grid, ones);
  const auto c2 = numerics::cumulative_integral(grid, odd);
  double worst = std::abs(c1.back() - Complex{kPi, 0.0});
  worst = std::max(worst, std::abs(c2.back()));
  return worst;
}

double eigh_sanity() {
  using numerics::HermitianMatrix;
  auto H = HermitianMatrix::zero(2);
  H.at(0, 1) = Complex{0.0, -1.0};
  H.at(1, 0) = Complex{0.0, 1.0};
  const auto sol = numerics::eigh(H);
  return std::max(std::abs(sol.values[0] + 1.0), std::abs(sol.values[1] - 1.0));
}

double oracle_delta_agreement(int n) {
  double worst = 0.0;
  for (double beta : {1e-2, 0.1}) {
    const Deformation d(beta);
    const auto sol = analytic::solve_delta(1.0, d, PhysicalParams(), 64);
    const auto H =
        oracle::build_hamiltonian(DeltaPotential(1.0), d, PhysicalParams(), n);
    const auto spec = oracle::bound_states(H, 2, false);
    if (spec.bound_states.size() != 1) return 1.0;
    worst = std::max(worst, std::abs(spec.bound_states[0].energy -
                                     sol.state.energy) /
                                std::abs(sol.state.energy));
  }
  return worst;
}

double oracle_double_delta_agreement(int n) {
  const Deformation d(0.04);
  const auto sol = analytic::solve_double_delta(1.0, 2.0 * d.sqrt_beta(), d,
                                                PhysicalParams(), 256);
  const auto H = oracle::build_hamiltonian(
      DoubleDeltaPotential(1.0, 2.0 * d.sqrt_beta()), d, PhysicalParams(), n);
  const auto spec = oracle::bound_states(H, 4, false);
  if (spec.bound_states.size() != sol.states.size()) return 1.0;
  double worst = 0.0;
  for (size_t k = 0; k < sol.states.size(); ++k) {
    worst = std::max(worst, std::abs(spec.bound_states[k].energy -
                                     sol.states[k].energy) /
                                std::abs(sol.states[k].energy));
    const bool even =
        sol.states[k].label.kind == QuantumLabel::Kind::Even;
    if ((spec.bound_states[k].parity == oracle::ParityEstimate::Even) != even)
      worst = std::max(worst, 1.0);
  }
  return worst;
}

double oracle_coulomb_agreement(int n) {
  const Deformation d(0.02);
  const auto sol =
      analytic::solve_coulomb(1.0, 0.0, 3, d, PhysicalParams(), 256);
  const auto H = oracle::build_hamiltonian(CoulombLikePotential(1.0, 0.0), d,
                                           PhysicalParams(), n);
  const auto spec = oracle::bound_states(H, 3, false);
  if (spec.bound_states.size() < 3) return 1.0;
  double worst = 0.0;
  for (int k = 0; k < 3; ++k)
    worst = std::max(worst, std::abs(spec.bound_states[k].energy -
                                     sol.states[k].energy) /
                                std::abs(sol.states[k].energy));
  return worst;
}

double inverse_x_identity(int n) {
  const Deformation d(0.02);
  const PhysicalParams params;
  const auto sol = analytic::solve_coulomb(1.0, 0.0, 2, d, params, n);
  double worst = 0.0;
  for (const auto& wf : sol.wavefunctions) {
    const auto xinv = analytic::apply_inverse_X(wf, 0.0, d, params);
    const auto both = analytic::apply_X(xinv, params);
    double err2 = 0.0;
    for (size_t i = 0; i < wf.amplitudes.size(); ++i)
      err2 += wf.grid.weights[i] *
              std::norm(both.amplitudes[i] - wf.amplitudes[i]);
    worst = std::max(worst, std::sqrt(err2));
  }
  return worst;
}

}  // namespace

int run_validation(bool quick, std::ostream& os) {
  const int n_full = 1200, n_quick = 400;
  const int n = quick ? n_quick : n_full;
  std::vector<Check> checks = {
      {"delta_closed_form_beta0", true, 1e-12, delta_closed_form_beta0},
      {"delta_condition_residual", true, 1e-12, delta_condition_residual},
      {"wavefunction_norms", true, 1e-8, wavefunction_norms},
      {"double_delta_parity", true, 1e-12, double_delta_parity},
      {"kernel_hermiticity", true, 1e-13, kernel_hermiticity},
      {"g_function_identities", true, 1e-8, g_identities},
      {"coulomb_energy_identity", true, 1e-12, coulomb_energy_identity},
      {"coulomb_delta_param", true, 1e-15, coulomb_delta_param},
      {"cumulative_total", true, 1e-12, cumulative_total},
      {"eigh_sanity", true, 1e-12, eigh_sanity},
      {"oracle_delta_agreement", true, 1e-6, [n] { return oracle_delta_agreement(n); }},
      {"oracle_double_delta_agreement", false, 1e-6,
       [n] { return oracle_double_delta_agreement(n); }},
      {"oracle_coulomb_agreement", false, 1e-4,
       [n] { return oracle_coulomb_agreement(n); }},
      {"inverse_x_identity", false, 1e-6, [n] { return inverse_x_identity(n); }},
  };

  int failures = 0;
  for (const auto& c : checks) {
    if (quick && !c.quick) continue;
    double defect;
    bool threw = false;
    try {
      defect = c.defect();
    } catch (const std::exception& e) {
      defect = std::numeric_limits<double>::infinity();
      threw = true;
      os << "[FAIL] " << c.name << ": exception: " << e.what() << "\n";
    }
    const bool ok = !threw && defect <= c.tolerance;
    if (!threw)
      os << (ok ? "[PASS] " : "[FAIL] ") << c.name
         << ": measured=" << format_double(defect)
         << " tolerance=" << format_double(c.tolerance) << "\n";
    if (!ok) ++failures;
  }
  os << (failures == 0 ? "all checks passed\n"
                       : std::to_string(failures) + " check(s) failed\n");
  return failures;
}

}  // namespace mlqm::cli
