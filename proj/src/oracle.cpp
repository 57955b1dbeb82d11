#include "mlqm/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlqm/analytic.hpp"

namespace mlqm::oracle {

namespace {

using Complex = std::complex<double>;
constexpr double kClusterLambda = 0.25;

bool needs_clustered_grid(const PotentialSpec& spec) {
  return std::holds_alternative<CoulombLikePotential>(spec);
}

void assemble_pointwise(DiscretizedHamiltonian& H) {
  const int n = H.grid.order();
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(H.grid.weights[i]);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex u = kernel(H.potential, H.grid.nodes[i], H.grid.nodes[j],
                               H.deformation, H.params);
      H.matrix.at(i, j) = sw[i] * u * sw[j];
    }
    H.matrix.at(i, i) +=
        deformed_kinetic(H.grid.nodes[i], H.deformation, H.params);
  }
}

// The Coulomb-like kernel is a step function; pointwise quadrature of it
// converges too slowly for eigenvalues. The same operator in the paper's
// cumulative form,
//   (K phi)(p) = -(alpha/2hbar) [ (i+A) Int phi - 2i Int_{lo}^{p} phi ],
// is assembled with the exact cumulative-integration matrix S, which
// satisfies W S + S^T W = w w^T and so keeps the weighted matrix
// Hermitian to rounding.
void assemble_coulomb(DiscretizedHamiltonian& H) {
  const auto& cl = std::get<CoulombLikePotential>(H.potential);
  if (!std::isfinite(cl.A))
    throw std::invalid_argument(
        "oracle needs finite A; endpoint spectra are analytic-only");
  const int n = H.grid.order();
  const auto S = numerics::cumulative_matrix(H.grid);
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(H.grid.weights[i]);
  const Complex i_unit{0.0, 1.0};
  const double sign = mlqm::testing::kernel_sign_flip() ? -1.0 : 1.0;
  const Complex pref = -sign * cl.alpha / (2.0 * H.params.hbar);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex smooth = (i_unit + cl.A) * sw[i] * sw[j];
      const Complex cum =
          -2.0 * i_unit * sw[i] * S[static_cast<size_t>(i) * n + j] / sw[j];
      H.matrix.at(i, j) = pref * (smooth + cum);
    }
    H.matrix.at(i, i) +=
        deformed_kinetic(H.grid.nodes[i], H.deformation, H.params);
  }
  H.matrix.symmetrize();
}

}  // namespace

DiscretizedHamiltonian build_hamiltonian(const PotentialSpec& spec,
                                         const Deformation& d,
                                         const PhysicalParams& params, int n,
                                         double edge_margin) {
  if (!d.deformed())
    throw std::invalid_argument(
        "oracle needs beta > 0 (finite momentum interval); use the analytic "
        "undeformed formulas instead");
  if (n < 16) throw std::invalid_argument("oracle grid order must be >= 16");
  if (!(edge_margin > 0.0) || !(edge_margin < 0.1))
    throw std::invalid_argument("edge margin must lie in (0, 0.1)");

  DiscretizedHamiltonian H;
  H.potential = spec;
  H.deformation = d;
  H.params = params;
  const double J = d.p_max * (1.0 - edge_margin);
  H.grid = needs_clustered_grid(spec)
               ? numerics::clustered_gauss_legendre(-J, J, n, kClusterLambda)
               : numerics::gauss_legendre(-J, J, n);
  H.matrix = numerics::HermitianMatrix::zero(n);
  if (needs_clustered_grid(spec))
    assemble_coulomb(H);
  else
    assemble_pointwise(H);
  return H;
}

namespace {

OracleSpectrum solve_spectrum(const DiscretizedHamiltonian& H, int k) {
  OracleSpectrum out;
  out.grid_order = H.grid.order();
  const auto sol = numerics::eigh_below(H.matrix, -1e-12);
  const int count = std::min<int>(k, sol.found);
  const int n = H.grid.order();
  for (int s = 0; s < count; ++s) {
    OracleState st;
    st.energy = sol.values[s];
    st.eigenvector = sol.column(s);
    double de = 0.0, doo = 0.0;
    for (int i = 0; i < n; ++i) {
      const Complex a = st.eigenvector[i];
      const Complex b = st.eigenvector[n - 1 - i];
      de += std::norm(a - b);
      doo += std::norm(a + b);
    }
    de = std::sqrt(de);
    doo = std::sqrt(doo);
    if (std::min(de, doo) < 1e-6 * std::max(1.0, std::max(de, doo)))
      st.parity = de < doo ? ParityEstimate::Even : ParityEstimate::Odd;
    else
      st.parity = ParityEstimate::None;
    st.parity_defect = std::min(de, doo);
    st.convergence_estimate = std::numeric_limits<double>::infinity();
    out.bound_states.push_back(std::move(st));
  }
  return out;
}

}  // namespace

OracleSpectrum bound_states(const DiscretizedHamiltonian& H, int k,
                            bool convergence_study) {
  if (k < 1) throw std::invalid_argument("state count must be >= 1");
  OracleSpectrum spec = solve_spectrum(H, k);
  if (convergence_study && H.grid.order() >= 32) {
    const double margin = 1.0 - H.grid.hi / H.deformation.p_max;
    const auto coarse = build_hamiltonian(
        H.potential, H.deformation, H.params, H.grid.order() / 2, margin);
    const auto ref = solve_spectrum(coarse, k);
    for (size_t s = 0; s < spec.bound_states.size(); ++s)
      if (s < ref.bound_states.size())
        spec.bound_states[s].convergence_estimate =
            std::abs(spec.bound_states[s].energy - ref.bound_states[s].energy);
  }
  return spec;
}

double residual(const DiscretizedHamiltonian& H, const Wavefunction& wf,
                double energy) {
  const int n = H.grid.order();
  std::vector<Complex> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = std::sqrt(H.grid.weights[i]) * wf.evaluator(H.grid.nodes[i]);
  double nrm2 = 0.0;
  for (const auto& x : v) nrm2 += std::norm(x);
  const double nrm = std::sqrt(nrm2);
  if (nrm == 0.0) return 0.0;
  double r2 = 0.0;
  for (int i = 0; i < n; ++i) {
    Complex acc{0.0, 0.0};
    const Complex* row = &H.matrix.a[static_cast<size_t>(i) * n];
    for (int j = 0; j < n; ++j) acc += row[j] * v[j];
    acc -= energy * v[i];
    r2 += std::norm(acc);
  }
  return std::sqrt(r2) / nrm;
}

}  // namespace mlqm::oracle
