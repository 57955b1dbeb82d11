#include "mlqm/core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mlqm {

PhysicalParams::PhysicalParams(double mass, double hbar_) : m(mass), hbar(hbar_) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw std::invalid_argument("mass must be positive and finite");
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw std::invalid_argument("hbar must be positive and finite");
}

Deformation::Deformation(double beta_) : beta(beta_) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("deformation parameter beta must be >= 0");
  p_max = beta > 0.0 ? std::numbers::pi / (2.0 * std::sqrt(beta))
                     : std::numeric_limits<double>::infinity();
}

double Deformation::sqrt_beta() const { return std::sqrt(beta); }

bool Interval::bounded() const {
  return std::isfinite(lo) && std::isfinite(hi);
}

Interval momentum_domain(const Deformation& d) {
  return {-d.p_max, d.p_max};
}

double deformed_kinetic(double p, const Deformation& d,
                        const PhysicalParams& params) {
  if (!d.deformed()) return p * p / (2.0 * params.m);
  if (!(std::abs(p) < d.p_max))
    throw std::domain_error("momentum outside the open interval (-p_max, p_max)");
  const double clamp = d.p_max * (1.0 - 1e-12);
  const double pc = std::clamp(p, -clamp, clamp);
  const double t = std::tan(d.sqrt_beta() * pc);
  return t * t / (2.0 * params.m * d.beta);
}

std::string QuantumLabel::str() const {
  switch (kind) {
    case Kind::Single: return "single";
    case Kind::Even: return "even";
    case Kind::Odd: return "odd";
    case Kind::Level: return "n=" + std::to_string(n);
  }
  return "?";
}

double Wavefunction::sampled_norm() const {
  double s = 0.0;
  for (size_t i = 0; i < amplitudes.size(); ++i)
    s += grid.weights[i] * std::norm(amplitudes[i]);
  return std::sqrt(s);
}

}  // namespace mlqm
