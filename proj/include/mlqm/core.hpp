#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mlqm/numerics.hpp"

namespace mlqm {

/// Mass and Planck constant, both strictly positive. Defaults give the
/// dimensionless units used throughout the test values.
struct PhysicalParams {
  double m = 1.0;
  double hbar = 1.0;

  PhysicalParams() = default;
  PhysicalParams(double mass, double hbar_);
};

/// Deformation parameter of the algebra [X,P] = i hbar (1 + beta P^2).
/// For beta > 0 the auxiliary momentum lives on (-p_max, p_max) with
/// p_max = pi / (2 sqrt(beta)); beta = 0 is the undeformed algebra and is
/// handled by branch everywhere, never by taking limits.
struct Deformation {
  double beta = 0.0;
  double p_max = std::numeric_limits<double>::infinity();

  Deformation() = default;  // undeformed
  explicit Deformation(double beta_);

  bool deformed() const { return beta > 0.0; }
  double sqrt_beta() const;
};

struct Interval {
  double lo;
  double hi;
  bool bounded() const;
};

/// Momentum interval: (-pi/(2 sqrt(beta)), pi/(2 sqrt(beta))) when
/// deformed, the whole real line otherwise.
Interval momentum_domain(const Deformation& d);

/// Kinetic energy tan^2(sqrt(beta) p) / (2 m beta) for beta > 0,
/// p^2 / (2m) for beta = 0. Throws std::domain_error for |p| >= p_max.
/// Evaluation is clamped to |p| <= p_max (1 - 1e-12) to keep tan finite.
double deformed_kinetic(double p, const Deformation& d,
                        const PhysicalParams& params);

/// Quantum label of a bound state: the single delta level, a parity
/// branch, or a Coulomb principal number.
struct QuantumLabel {
  enum class Kind { Single, Even, Odd, Level };
  Kind kind = Kind::Single;
  int n = -1;  // meaningful for Kind::Level

  static QuantumLabel single() { return {Kind::Single, -1}; }
  static QuantumLabel even() { return {Kind::Even, -1}; }
  static QuantumLabel odd() { return {Kind::Odd, -1}; }
  static QuantumLabel level(int n) { return {Kind::Level, n}; }
  std::string str() const;
};

/// Bound state with E < 0 and decay parameter q = sqrt(-2 m E).
/// `residual` is the dimensionless defect of the defining quantization
/// condition at the returned q.
struct BoundState {
  double energy = 0.0;
  double q = 0.0;
  QuantumLabel label;
  double residual = 0.0;
};

/// Momentum-space eigenfunction: an evaluator valid on the open momentum
/// domain plus samples on a quadrature grid. Normalization is unit L2
/// norm over the domain.
struct Wavefunction {
  std::function<std::complex<double>(double)> evaluator;
  numerics::QuadratureGrid grid;
  std::vector<std::complex<double>> amplitudes;  // evaluator at grid nodes
  double norm_constant = 0.0;  // the constant C (or A, B) in front

  std::complex<double> operator()(double p) const { return evaluator(p); }
  /// sqrt(sum_i w_i |amplitude_i|^2), should be 1 for returned states
  double sampled_norm() const;
};

}  // namespace mlqm
