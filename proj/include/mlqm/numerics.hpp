#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mlqm::numerics {

using Complex = std::complex<double>;

/// Quadrature rule on a finite interval (lo, hi). Nodes are strictly
/// increasing and strictly interior; weights are positive. The rule is
/// produced by mapping Gauss-Legendre points on [-1, 1] through a smooth
/// monotone map; the standard abscissae and the map Jacobian are kept so
/// that spectrally accurate cumulative integrals can be formed later.
struct QuadratureGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> nodes;        // physical nodes, ascending
  std::vector<double> weights;      // physical weights, positive
  std::vector<double> std_nodes;    // Gauss-Legendre abscissae on [-1,1]
  std::vector<double> std_weights;  // Gauss-Legendre weights on [-1,1]
  std::vector<double> jacobians;    // dp/dx at each node

  int order() const { return static_cast<int>(nodes.size()); }
  double length() const { return hi - lo; }
};

/// Standard Gauss-Legendre rule mapped affinely onto (lo, hi).
/// Exact for polynomials of degree <= 2n-1. Endpoints are never nodes.
QuadratureGrid gauss_legendre(double lo, double hi, int n);

/// Gauss-Legendre rule pushed through the odd cubic map
///   psi(x) = x * (lambda + (1 - lambda) x^2),
/// which raises the node density near the interval midpoint by 1/lambda.
/// lambda = 1 reduces to the affine rule. Used when eigenfunctions are
/// much narrower than the full momentum interval.
QuadratureGrid clustered_gauss_legendre(double lo, double hi, int n,
                                        double lambda);

/// Rule for integrals over the whole real line: p = scale * tan(pi x / 2)
/// applied to the Gauss-Legendre points. Suitable for integrands that
/// decay at least as fast as 1/p^2; `scale` should match the integrand
/// width.
QuadratureGrid tan_mapped_infinite_grid(double scale, int n);

/// Brent root search on a bracketing interval. Returns std::nullopt when
/// f(lo) and f(hi) have the same sign ("no root in bracket"); never
/// evaluates f outside [lo, hi]. Deterministic.
std::optional<double> find_root_bracketed(
    const std::function<double(double)>& f, double lo, double hi,
    double tol = 1e-12);

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration to an absolute tolerance.
/// Non-convergence is reported through the result, not by throwing.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f,
                                     double lo, double hi, double abs_tol,
                                     int max_depth = 30);

/// Cumulative integral of grid samples. Entry k (k < N) approximates
/// the integral from `lo` to node k, obtained by integrating the Legendre
/// interpolant of the mapped integrand exactly. Entry N is the integral
/// over the whole interval and equals the plain quadrature sum.
std::vector<Complex> cumulative_integral(const QuadratureGrid& grid,
                                         std::span<const Complex> samples);

/// Dense matrix version of cumulative_integral restricted to the node
/// entries: (S f)_i = integral from lo to node i of the interpolant of f.
/// Row-major N x N. It satisfies W S + S^T W = w w^T exactly for
/// Gauss-Legendre-derived grids, which keeps cumulative-form Hamiltonians
/// Hermitian.
std::vector<double> cumulative_matrix(const QuadratureGrid& grid);

/// First derivative of sampled data by local polynomial (Fornberg)
/// stencils of the given width; interior stencils are centered. Width 7
/// gives sixth-order accuracy on smooth data.
std::vector<Complex> grid_derivative(const QuadratureGrid& grid,
                                     std::span<const Complex> samples,
                                     int stencil = 7);

/// Least-squares polynomial fit: returns coefficients c_0..c_degree of
/// sum c_k x^k minimizing the residual over the points.
std::vector<double> polyfit(std::span<const double> x,
                            std::span<const double> y, int degree);

/// Dense complex matrix stored row-major, expected Hermitian.
struct HermitianMatrix {
  int n = 0;
  std::vector<Complex> a;  // n*n entries, a[i*n + j]

  static HermitianMatrix zero(int n) {
    return HermitianMatrix{n, std::vector<Complex>(static_cast<size_t>(n) * n)};
  }
  Complex& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const Complex& at(int i, int j) const {
    return a[static_cast<size_t>(i) * n + j];
  }
  /// max_ij |a_ij - conj(a_ji)|
  double hermiticity_defect() const;
  /// replaces the matrix by (H + H^dagger)/2
  void symmetrize();
  bool is_real(double tol = 0.0) const;
};

struct EigenSolution {
  int n = 0;           // matrix dimension
  int found = 0;       // number of eigenpairs returned
  std::vector<double> values;    // ascending
  std::vector<Complex> vectors;  // row-major n x found, column k = eigvec k

  Complex vec(int i, int k) const {
    return vectors[static_cast<size_t>(i) * found + k];
  }
  std::vector<Complex> column(int k) const;
};

/// Full eigendecomposition of a Hermitian matrix. The input is
/// symmetrized via (H + H^dagger)/2 after the defect check; matrices with
/// defect above `defect_tol` are rejected with the measured defect.
/// Purely real matrices take the real-symmetric LAPACK path.
EigenSolution eigh(const HermitianMatrix& H, double defect_tol = 1e-12);

/// Same contract, but only eigenpairs with eigenvalue < upper are
/// computed (LAPACK range drivers); much faster when a few bound states
/// are wanted from a large matrix.
EigenSolution eigh_below(const HermitianMatrix& H, double upper,
                         double defect_tol = 1e-12);

}  // namespace mlqm::numerics
