#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "mlqm/core.hpp"

namespace mlqm::analytic {

struct DeltaSolution {
  BoundState state;
  Wavefunction wavefunction;
};

/// Single attractive delta well. The decay parameter solves
/// q (1 + sqrt(beta) q) = 2 pi m U0; the negative quadratic root is
/// discarded. Exactly one bound state exists for every u0 > 0.
DeltaSolution solve_delta(double u0, const Deformation& d,
                          const PhysicalParams& params, int grid_order = 2000);

/// Coefficients (c0, c1, c2) of E = c0 + c1 sqrt(beta) + c2 beta for the
/// delta well at small deformation.
std::array<double, 3> delta_energy_expansion(double u0,
                                             const PhysicalParams& params);

/// Closed forms of the double-delta overlap integral at alpha =
/// sqrt(beta) n:
///   g(0) = pi / (beta q (1 + sqrt(beta) q))
///   g(sqrt(beta) n) = pi (1-sqrt(beta) q)^(n-1) / (beta q (1+sqrt(beta) q)^(n+1))
/// Defined only for beta > 0.
double g_function_closed(int n, double q, const Deformation& d);

/// g(alpha) = integral of cos(2 alpha p) / (tan^2(sqrt(beta) p) + beta q^2)
/// over the momentum interval, by adaptive quadrature to the given
/// absolute tolerance. Throws on non-convergence, reporting the achieved
/// error estimate.
double g_function_numeric(double alpha, double q, const Deformation& d,
                          double abs_tol = 1e-10);

struct VarphiPair {
  std::complex<double> plus;
  std::complex<double> minus;
};

struct DoubleDeltaSolution {
  std::vector<BoundState> states;          // strongest binding first
  std::vector<Wavefunction> wavefunctions;  // aligned with states
  std::vector<VarphiPair> varphi;           // phi~_+ = +- phi~_- per state
  std::optional<int> integer_separation;    // n when a = n hbar sqrt(beta)
};

/// Symmetric pair of delta wells at +-a. Even/odd branches solve
/// 1/(beta m U0) - g(0) = +- g(a/hbar). Integer separations use the
/// closed forms of g, other separations numerical quadrature. For
/// beta = 0 solves the undeformed q = pi m U0 (1 +- exp(-2 q a / hbar)).
/// A missing odd root (shallow well) is reported by its absence, not an
/// error.
DoubleDeltaSolution solve_double_delta(double u0, double a,
                                       const Deformation& d,
                                       const PhysicalParams& params,
                                       int grid_order = 2000);

/// delta = arccot(A)/pi on the (0, pi) branch; the endpoints 0 and 1 are
/// reached only through A = +inf and A = -inf.
double extension_delta(double A);

struct CoulombSolution {
  std::vector<BoundState> states;           // label n ascending
  std::vector<Wavefunction> wavefunctions;  // aligned with states
  double delta = 0.0;                       // arccot(A)/pi
  double alpha0 = 0.0;                      // 2 m beta alpha / hbar
  std::vector<double> phi0;                 // pi m alpha / (hbar q (1+sqrt(beta) q))
};

/// Coulomb-like potential -alpha/x with extension parameter A. Levels
/// solve m alpha / (hbar q (1 + sqrt(beta) q)) = n + delta; n = 0 is
/// excluded when delta = 0 (its energy diverges and the eigenfunction
/// vanishes). Returns n_max states.
CoulombSolution solve_coulomb(double alpha, double A, int n_max,
                              const Deformation& d,
                              const PhysicalParams& params,
                              int grid_order = 2000);

/// Comparison of the quantization-derived energy with the closed-form
/// display. The printed first-power form has the wrong sign for bound
/// states; squaring the bracket reproduces -q_n^2/(2m) exactly.
struct CoulombEnergyCheckPoint {
  int n = 0;
  double quantization_energy = 0.0;  // -q_n^2 / (2m)
  double printed_form = 0.0;         // -(1/8 m beta)(1 - sqrt(1+x))
  double squared_form = 0.0;         // -(1/8 m beta)(1 - sqrt(1+x))^2
  double rel_diff_squared = 0.0;     // |quantization - squared| / |quantization|
  bool sign_flagged = false;         // printed form not a bound-state energy
};

CoulombEnergyCheckPoint coulomb_closed_form_energy_check(
    double alpha, double A, const Deformation& d, const PhysicalParams& params,
    int n);

/// Position operator X = i hbar d/dp applied on the sample grid by
/// seventh-point (sixth-order) finite differences.
Wavefunction apply_X(const Wavefunction& wf, const PhysicalParams& params);

/// Inverse position operator
///   (1/X) phi(p) = -(i/hbar) int_{lo}^{p} phi + c[phi],
///   c[phi] = ((i+A)/(2 hbar)) int phi,
/// computed by cumulative quadrature on the sample grid.
Wavefunction apply_inverse_X(const Wavefunction& wf, double A,
                             const Deformation& d,
                             const PhysicalParams& params);

/// Grid used to sample Coulomb-like eigenfunctions: node density raised
/// near p = 0 where weakly bound states concentrate.
numerics::QuadratureGrid coulomb_sample_grid(const Deformation& d,
                                             int grid_order);

}  // namespace mlqm::analytic
