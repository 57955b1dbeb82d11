#include "mlqm/potentials.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace mlqm {

namespace {
std::atomic<bool> g_sign_flip{false};
std::atomic<bool> g_step_asymmetry{false};
}  // namespace

namespace testing {
void set_kernel_sign_flip(bool on) { g_sign_flip.store(on); }
void set_step_asymmetry(bool on) { g_step_asymmetry.store(on); }
bool kernel_sign_flip() { return g_sign_flip.load(); }
bool step_asymmetry() { return g_step_asymmetry.load(); }
}  // namespace testing

DeltaPotential::DeltaPotential(double u0_) : u0(u0_) {
  if (!(u0 >= 0.0) || !std::isfinite(u0))
    throw std::invalid_argument(
        "delta coupling must be attractive (U0 >= 0); repulsive wells have no "
        "bound states");
}

DoubleDeltaPotential::DoubleDeltaPotential(double u0_, double a_)
    : u0(u0_), a(a_) {
  if (!(u0 >= 0.0) || !std::isfinite(u0))
    throw std::invalid_argument(
        "double-delta coupling must be attractive (U0 >= 0)");
  if (!(a >= 0.0) || !std::isfinite(a))
    throw std::invalid_argument("half-separation a must be >= 0");
}

CoulombLikePotential::CoulombLikePotential(double alpha_, double A_)
    : alpha(alpha_), A(A_) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument(
        "Coulomb coupling must be attractive (alpha >= 0)");
  if (std::isnan(A))
    throw std::invalid_argument("extension parameter A must not be NaN");
}

namespace {

void check_domain(double p, double p_prime, const Deformation& d) {
  if (!d.deformed()) return;
  if (!(std::abs(p) < d.p_max) || !(std::abs(p_prime) < d.p_max))
    throw std::domain_error("kernel argument outside the momentum interval");
}

double heaviside(double x) {
  if (g_step_asymmetry.load()) return x >= 0.0 ? 1.0 : 0.0;
  if (x > 0.0) return 1.0;
  if (x < 0.0) return 0.0;
  return 0.5;
}

}  // namespace

std::complex<double> kernel(const PotentialSpec& spec, double p,
                            double p_prime, const Deformation& d,
                            const PhysicalParams& params) {
  check_domain(p, p_prime, d);
  const double sign = g_sign_flip.load() ? -1.0 : 1.0;
  if (const auto* dp = std::get_if<DeltaPotential>(&spec))
    return {-sign * dp->u0, 0.0};
  if (const auto* dd = std::get_if<DoubleDeltaPotential>(&spec))
    return {-sign * dd->u0 * std::cos(dd->a / params.hbar * (p - p_prime)),
            0.0};
  const auto& cl = std::get<CoulombLikePotential>(spec);
  if (!std::isfinite(cl.A))
    throw std::invalid_argument(
        "Coulomb-like kernel needs finite A; the A = +-inf endpoint spectra "
        "are analytic-only");
  const std::complex<double> i{0.0, 1.0};
  return -sign * cl.alpha / (2.0 * params.hbar) *
         (2.0 * i * heaviside(p_prime - p) - i + cl.A);
}

double hermiticity_defect(const PotentialSpec& spec,
                          std::span<const double> grid_nodes,
                          const Deformation& d, const PhysicalParams& params) {
  double defect = 0.0;
  for (size_t i = 0; i < grid_nodes.size(); ++i)
    for (size_t j = i; j < grid_nodes.size(); ++j) {
      const auto u = kernel(spec, grid_nodes[i], grid_nodes[j], d, params);
      const auto v = kernel(spec, grid_nodes[j], grid_nodes[i], d, params);
      defect = std::max(defect, std::abs(u - std::conj(v)));
    }
  return defect;
}

}  // namespace mlqm
