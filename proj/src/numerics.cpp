#include "mlqm/numerics.hpp"

#include <algorithm>
#include <cblas.h>
#include <cmath>
#include <cstdlib>
#include <lapacke.h>
#include <numbers>
#include <stdexcept>

namespace mlqm::numerics {

namespace {

// Gauss-Legendre abscissae/weights on [-1, 1] by Newton iteration on the
// Legendre recurrence, seeded with the Chebyshev-like asymptotic guess.
void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int l = 0; l < n; ++l) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * l + 1.0) * z * p1 - l * p2) / (l + 1.0);
      }
      // p0 = P_n(z); derivative from the standard identity
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

void require_grid_size(int n) {
  if (n < 2) throw std::invalid_argument("quadrature rule needs n >= 2");
}

void require_finite_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::invalid_argument("quadrature domain must be finite with lo < hi");
}

}  // namespace

QuadratureGrid gauss_legendre(double lo, double hi, int n) {
  require_grid_size(n);
  require_finite_interval(lo, hi);
  QuadratureGrid g;
  g.lo = lo;
  g.hi = hi;
  legendre_rule(n, g.std_nodes, g.std_weights);
  const double mid = 0.5 * (lo + hi);
  const double hw = 0.5 * (hi - lo);
  g.nodes.resize(n);
  g.weights.resize(n);
  g.jacobians.assign(n, hw);
  for (int i = 0; i < n; ++i) {
    g.nodes[i] = mid + hw * g.std_nodes[i];
    g.weights[i] = hw * g.std_weights[i];
  }
  return g;
}

QuadratureGrid clustered_gauss_legendre(double lo, double hi, int n,
                                        double lambda) {
  require_grid_size(n);
  require_finite_interval(lo, hi);
  if (!(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("clustering parameter must be in (0, 1]");
  QuadratureGrid g;
  g.lo = lo;
  g.hi = hi;
  legendre_rule(n, g.std_nodes, g.std_weights);
  const double mid = 0.5 * (lo + hi);
  const double hw = 0.5 * (hi - lo);
  g.nodes.resize(n);
  g.weights.resize(n);
  g.jacobians.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = g.std_nodes[i];
    const double psi = x * (lambda + (1.0 - lambda) * x * x);
    const double dpsi = lambda + 3.0 * (1.0 - lambda) * x * x;
    g.nodes[i] = mid + hw * psi;
    g.jacobians[i] = hw * dpsi;
    g.weights[i] = hw * dpsi * g.std_weights[i];
  }
  return g;
}

QuadratureGrid tan_mapped_infinite_grid(double scale, int n) {
  require_grid_size(n);
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("tan-mapped grid needs a positive finite scale");
  QuadratureGrid g;
  g.lo = -std::numeric_limits<double>::infinity();
  g.hi = std::numeric_limits<double>::infinity();
  legendre_rule(n, g.std_nodes, g.std_weights);
  g.nodes.resize(n);
  g.weights.resize(n);
  g.jacobians.resize(n);
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (int i = 0; i < n; ++i) {
    const double u = half_pi * g.std_nodes[i];
    const double c = std::cos(u);
    g.nodes[i] = scale * std::tan(u);
    g.jacobians[i] = scale * half_pi / (c * c);
    g.weights[i] = g.jacobians[i] * g.std_weights[i];
  }
  return g;
}

std::optional<double> find_root_bracketed(
    const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("root bracket needs lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("root tolerance must be positive");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;

  // Brent's method: inverse quadratic / secant steps guarded by bisection.
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

namespace {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
constexpr double kKronrodX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGaussW[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(mid + hw * kKronrodX[i]);
    kron += kKronrodW[i] * v;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * v;
  }
  kron *= hw;
  gauss *= hw;
  const double diff = std::abs(kron - gauss);
  // standard QUADPACK-style sharpened estimate
  const double err = diff * std::min(1.0, std::pow(200.0 * diff, 1.5));
  return {kron, err > 0.0 ? err : diff};
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol, int depth, int max_depth, double& value, double& err,
           bool& converged) {
  const PanelResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= max_depth) {
    value += r.value;
    err += r.error;
    if (r.error > tol) converged = false;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, tol / 2.0, depth + 1, max_depth, value, err, converged);
  adapt(f, mid, b, tol / 2.0, depth + 1, max_depth, value, err, converged);
}

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f,
                                     double lo, double hi, double abs_tol,
                                     int max_depth) {
  require_finite_interval(lo, hi);
  IntegrationResult out;
  out.converged = true;
  adapt(f, lo, hi, abs_tol, 0, max_depth, out.value, out.error_estimate,
        out.converged);
  return out;
}

namespace {

void require_provenance(const QuadratureGrid& grid) {
  if (grid.std_nodes.size() != grid.nodes.size() ||
      grid.jacobians.size() != grid.nodes.size())
    throw std::invalid_argument("grid lacks standard-abscissa provenance");
}

}  // namespace

std::vector<Complex> cumulative_integral(const QuadratureGrid& grid,
                                         std::span<const Complex> samples) {
  require_provenance(grid);
  const int n = grid.order();
  if (static_cast<int>(samples.size()) != n)
    throw std::invalid_argument("sample count does not match grid order");

  // Legendre analysis of the mapped integrand g(x) = f(p(x)) dp/dx:
  //   c_l = (2l+1)/2 sum_i w_i g_i P_l(x_i)
  std::vector<Complex> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = samples[i] * grid.jacobians[i];

  std::vector<Complex> coeff(n, Complex{0.0, 0.0});
  {
    std::vector<double> pm1(n, 1.0), p(n), tmp(n);
    for (int i = 0; i < n; ++i) p[i] = grid.std_nodes[i];
    for (int i = 0; i < n; ++i) coeff[0] += grid.std_weights[i] * g[i];
    coeff[0] *= 0.5;
    if (n > 1) {
      Complex c1{0.0, 0.0};
      for (int i = 0; i < n; ++i) c1 += grid.std_weights[i] * g[i] * p[i];
      coeff[1] = 1.5 * c1;
    }
    for (int l = 2; l < n; ++l) {
      for (int i = 0; i < n; ++i) {
        const double x = grid.std_nodes[i];
        tmp[i] = ((2.0 * l - 1.0) * x * p[i] - (l - 1.0) * pm1[i]) / l;
      }
      std::swap(pm1, p);
      std::swap(p, tmp);
      Complex cl{0.0, 0.0};
      for (int i = 0; i < n; ++i) cl += grid.std_weights[i] * g[i] * p[i];
      coeff[l] = (2.0 * l + 1.0) / 2.0 * cl;
    }
  }

  // Synthesis of the antiderivative:
  //   F(x) = c_0 (x+1) + sum_{l>=1} c_l (P_{l+1}(x) - P_{l-1}(x)) / (2l+1)
  std::vector<Complex> out(n + 1, Complex{0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    const double x = grid.std_nodes[i];
    Complex acc = coeff[0] * (x + 1.0);
    double pm1 = 1.0, p = x;
    for (int l = 1; l < n; ++l) {
      const double pp1 = ((2.0 * l + 1.0) * x * p - l * pm1) / (l + 1.0);
      acc += coeff[l] * (pp1 - pm1) / (2.0 * l + 1.0);
      pm1 = p;
      p = pp1;
    }
    out[i] = acc;
  }
  // Final entry: whole-interval integral == plain quadrature sum.
  Complex total{0.0, 0.0};
  for (int i = 0; i < n; ++i) total += grid.weights[i] * samples[i];
  out[n] = total;
  return out;
}

std::vector<double> cumulative_matrix(const QuadratureGrid& grid) {
  require_provenance(grid);
  const int n = grid.order();
  // S = M1 * M2 with
  //   M1[i][l] = integral_{-1}^{x_i} P_l,
  //   M2[l][j] = (2l+1)/2 w_j P_l(x_j) * jac_j
  std::vector<double> m1(static_cast<size_t>(n) * n);
  std::vector<double> m2(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.std_nodes[i];
    m1[static_cast<size_t>(i) * n + 0] = x + 1.0;
    double pm1 = 1.0, p = x;
    for (int l = 1; l < n; ++l) {
      const double pp1 = ((2.0 * l + 1.0) * x * p - l * pm1) / (l + 1.0);
      m1[static_cast<size_t>(i) * n + l] = (pp1 - pm1) / (2.0 * l + 1.0);
      pm1 = p;
      p = pp1;
    }
  }
  for (int j = 0; j < n; ++j) {
    const double x = grid.std_nodes[j];
    const double wj = grid.std_weights[j] * grid.jacobians[j];
    double pm1 = 1.0, p = x;
    m2[0 * static_cast<size_t>(n) + j] = 0.5 * wj;
    if (n > 1) m2[1 * static_cast<size_t>(n) + j] = 1.5 * x * wj;
    for (int l = 2; l < n; ++l) {
      const double pp1 = ((2.0 * l - 1.0) * x * p - (l - 1.0) * pm1) / l;
      pm1 = p;
      p = pp1;
      m2[static_cast<size_t>(l) * n + j] = (2.0 * l + 1.0) / 2.0 * p * wj;
    }
  }
  std::vector<double> s(static_cast<size_t>(n) * n);
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0,
              m1.data(), n, m2.data(), n, 0.0, s.data(), n);
  return s;
}

namespace {

// Fornberg's algorithm: weights for the m-th derivative at x0 on the
// given nodes.
std::vector<double> fornberg_weights(double x0, std::span<const double> xs,
                                     int m) {
  const int n = static_cast<int>(xs.size());
  std::vector<double> c(static_cast<size_t>(n) * (m + 1), 0.0);
  auto C = [&](int i, int k) -> double& {
    return c[static_cast<size_t>(i) * (m + 1) + k];
  };
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  C(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = C(i, m);
  return out;
}

}  // namespace

std::vector<Complex> grid_derivative(const QuadratureGrid& grid,
                                     std::span<const Complex> samples,
                                     int stencil) {
  const int n = grid.order();
  if (static_cast<int>(samples.size()) != n)
    throw std::invalid_argument("sample count does not match grid order");
  if (stencil < 3 || stencil > n)
    throw std::invalid_argument("derivative stencil width out of range");
  const int half = stencil / 2;
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) {
    int lo = std::clamp(i - half, 0, n - stencil);
    std::span<const double> xs(grid.nodes.data() + lo,
                               static_cast<size_t>(stencil));
    const auto w = fornberg_weights(grid.nodes[i], xs, 1);
    Complex acc{0.0, 0.0};
    for (int k = 0; k < stencil; ++k) acc += w[k] * samples[lo + k];
    out[i] = acc;
  }
  return out;
}

std::vector<double> polyfit(std::span<const double> x,
                            std::span<const double> y, int degree) {
  const int m = static_cast<int>(x.size());
  const int nc = degree + 1;
  if (m < nc) throw std::invalid_argument("polyfit needs at least degree+1 points");
  if (y.size() != x.size())
    throw std::invalid_argument("polyfit point count mismatch");
  // Column scaling keeps the Vandermonde system well conditioned for the
  // tiny sqrt(beta) abscissae this is used with.
  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::abs(v));
  if (xmax == 0.0) xmax = 1.0;
  std::vector<double> a(static_cast<size_t>(m) * nc);
  std::vector<double> b(y.begin(), y.end());
  for (int i = 0; i < m; ++i) {
    double t = 1.0;
    for (int k = 0; k < nc; ++k) {
      a[static_cast<size_t>(i) * nc + k] = t;
      t *= x[i] / xmax;
    }
  }
  const lapack_int info =
      LAPACKE_dgels(LAPACK_ROW_MAJOR, 'N', m, nc, 1, a.data(), nc, b.data(), 1);
  if (info != 0) throw std::runtime_error("polyfit: dgels failed");
  std::vector<double> coeff(nc);
  double scale = 1.0;
  for (int k = 0; k < nc; ++k) {
    coeff[k] = b[k] / scale;
    scale *= xmax;
  }
  return coeff;
}

double HermitianMatrix::hermiticity_defect() const {
  double defect = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      defect = std::max(defect, std::abs(at(i, j) - std::conj(at(j, i))));
  return defect;
}

void HermitianMatrix::symmetrize() {
  for (int i = 0; i < n; ++i) {
    at(i, i) = Complex{at(i, i).real(), 0.0};
    for (int j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (at(i, j) + std::conj(at(j, i)));
      at(i, j) = v;
      at(j, i) = std::conj(v);
    }
  }
}

bool HermitianMatrix::is_real(double tol) const {
  for (const Complex& v : a)
    if (std::abs(v.imag()) > tol) return false;
  return true;
}

std::vector<Complex> EigenSolution::column(int k) const {
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) out[i] = vec(i, k);
  return out;
}

namespace {

HermitianMatrix checked_copy(const HermitianMatrix& H, double defect_tol) {
  if (H.n <= 0 || H.a.size() != static_cast<size_t>(H.n) * H.n)
    throw std::invalid_argument("malformed Hermitian matrix");
  const double defect = H.hermiticity_defect();
  if (defect > defect_tol)
    throw std::invalid_argument("matrix is not Hermitian: defect " +
                                std::to_string(defect) + " exceeds tolerance " +
                                std::to_string(defect_tol));
  HermitianMatrix M = H;
  M.symmetrize();
  return M;
}

EigenSolution solve_real(const HermitianMatrix& M, bool ranged, double upper) {
  const int n = M.n;
  std::vector<double> a(static_cast<size_t>(n) * n);
  for (size_t k = 0; k < a.size(); ++k) a[k] = M.a[k].real();
  EigenSolution sol;
  sol.n = n;
  if (!ranged) {
    std::vector<double> w(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', n, a.data(), n, w.data());
    if (info != 0) throw std::runtime_error("dsyevd failed to converge");
    sol.found = n;
    sol.values = std::move(w);
    sol.vectors.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        sol.vectors[static_cast<size_t>(i) * n + k] =
            Complex{a[static_cast<size_t>(i) * n + k], 0.0};
    return sol;
  }
  std::vector<double> w(n), z(static_cast<size_t>(n) * n);
  std::vector<lapack_int> isuppz(2 * static_cast<size_t>(std::max(1, n)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_ROW_MAJOR, 'V', 'V', 'U', n, a.data(), n,
      -std::numeric_limits<double>::max(), upper, 0, 0,
      2.0 * LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0) throw std::runtime_error("dsyevr failed to converge");
  sol.found = found;
  sol.values.assign(w.begin(), w.begin() + found);
  sol.vectors.resize(static_cast<size_t>(n) * found);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < found; ++k)
      sol.vectors[static_cast<size_t>(i) * found + k] =
          Complex{z[static_cast<size_t>(i) * n + k], 0.0};
  return sol;
}

EigenSolution solve_complex(HermitianMatrix M, bool ranged, double upper) {
  const int n = M.n;
  auto* a = reinterpret_cast<lapack_complex_double*>(M.a.data());
  EigenSolution sol;
  sol.n = n;
  if (!ranged) {
    std::vector<double> w(n);
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', n, a, n, w.data());
    if (info != 0) throw std::runtime_error("zheevd failed to converge");
    sol.found = n;
    sol.values = std::move(w);
    sol.vectors = std::move(M.a);
    return sol;
  }
  std::vector<double> w(n);
  std::vector<Complex> z(static_cast<size_t>(n) * n);
  std::vector<lapack_int> isuppz(2 * static_cast<size_t>(std::max(1, n)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_ROW_MAJOR, 'V', 'V', 'U', n, a, n,
      -std::numeric_limits<double>::max(), upper, 0, 0,
      2.0 * LAPACKE_dlamch('S'), &found, w.data(),
      reinterpret_cast<lapack_complex_double*>(z.data()), n, isuppz.data());
  if (info != 0) throw std::runtime_error("zheevr failed to converge");
  sol.found = found;
  sol.values.assign(w.begin(), w.begin() + found);
  sol.vectors.resize(static_cast<size_t>(n) * found);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < found; ++k)
      sol.vectors[static_cast<size_t>(i) * found + k] =
          z[static_cast<size_t>(i) * n + k];
  return sol;
}

}  // namespace

EigenSolution eigh(const HermitianMatrix& H, double defect_tol) {
  HermitianMatrix M = checked_copy(H, defect_tol);
  if (M.is_real()) return solve_real(M, false, 0.0);
  return solve_complex(std::move(M), false, 0.0);
}

EigenSolution eigh_below(const HermitianMatrix& H, double upper,
                         double defect_tol) {
  HermitianMatrix M = checked_copy(H, defect_tol);
  if (M.is_real()) return solve_real(M, true, upper);
  return solve_complex(std::move(M), true, upper);
}

}  // namespace mlqm::numerics
