#pragma once

#include <complex>
#include <vector>

#include "mlqm/core.hpp"
#include "mlqm/potentials.hpp"

namespace mlqm::oracle {

/// Finite-dimensional image of the deformed integral Schroedinger
/// equation. For smooth kernels the matrix is the weight-symmetrized
/// Nystroem form H_ij = T(p_i) delta_ij + sqrt(w_i) U(p_i, p_j) sqrt(w_j);
/// the Coulomb-like problem is assembled from its cumulative-integral
/// form with an exact integration matrix instead (see build notes).
struct DiscretizedHamiltonian {
  numerics::QuadratureGrid grid;
  numerics::HermitianMatrix matrix;
  PotentialSpec potential;
  Deformation deformation;
  PhysicalParams params;
};

/// Assembles the discrete Hamiltonian on a Gauss-Legendre grid covering
/// (-p_max (1-edge_margin), +p_max (1-edge_margin)). The margin caps the
/// kinetic diagonal (which otherwise grows like N^4/beta at the outermost
/// nodes and destroys small eigenvalues through the eigensolver's
/// eps * ||H|| error floor) while perturbing bound states only through
/// the eigenfunction tails that decay like 1/tan^2.
/// Requires beta > 0, n >= 16, and finite A for Coulomb-like potentials.
DiscretizedHamiltonian build_hamiltonian(const PotentialSpec& spec,
                                         const Deformation& d,
                                         const PhysicalParams& params, int n,
                                         double edge_margin = 1e-3);

enum class ParityEstimate { Even, Odd, None };

struct OracleState {
  double energy = 0.0;
  std::vector<std::complex<double>> eigenvector;  // weighted, unit l2
  ParityEstimate parity = ParityEstimate::None;
  double parity_defect = 0.0;          // min reflection-symmetry defect
  double convergence_estimate = 0.0;   // |E(N) - E(N/2)|, inf if unmatched
};

struct OracleSpectrum {
  std::vector<OracleState> bound_states;  // energies ascending
  int grid_order = 0;
};

/// Up to k negative eigenvalues with eigenvectors. Wavefunction samples
/// relate to eigenvector entries by phi_i = v_i / sqrt(w_i). When
/// convergence_study is set the problem is re-solved at half the grid
/// order and per-state |E(N) - E(N/2)| estimates are attached.
OracleSpectrum bound_states(const DiscretizedHamiltonian& H, int k,
                            bool convergence_study = true);

/// Weighted-norm residual ||(H - E) v|| / ||v|| of an analytic eigenpair
/// sampled on the oracle grid.
double residual(const DiscretizedHamiltonian& H, const Wavefunction& wf,
                double energy);

}  // namespace mlqm::oracle
