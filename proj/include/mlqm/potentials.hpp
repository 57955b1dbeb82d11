#pragma once

#include <complex>
#include <span>
#include <variant>

#include "mlqm/core.hpp"

namespace mlqm {

/// V(x) = -2 pi hbar U0 delta(x): constant kernel -U0 in momentum space.
struct DeltaPotential {
  double u0;
  explicit DeltaPotential(double u0_);
};

/// V(x) = -pi hbar U0 (delta(x-a) + delta(x+a)): cosine kernel
/// -U0 cos((a/hbar)(p - p')). Per-well strength is half the single-delta
/// convention, so a -> 0 reproduces DeltaPotential{u0} exactly.
struct DoubleDeltaPotential {
  double u0;
  double a;
  DoubleDeltaPotential(double u0_, double a_);
};

/// V(x) = -alpha / x with 1/x = v.p. 1/x + A pi delta(x). The extension
/// parameter A may be +-infinity, selecting the endpoint spectra; the
/// kernel itself is only evaluable for finite A.
struct CoulombLikePotential {
  double alpha;
  double A;
  CoulombLikePotential(double alpha_, double A_);
};

using PotentialSpec =
    std::variant<DeltaPotential, DoubleDeltaPotential, CoulombLikePotential>;

/// Momentum-space kernel U(p, p') of the potential energy operator,
/// assumed unchanged by the deformation. The Heaviside step in the
/// Coulomb-like kernel uses theta(0) = 1/2, which makes the diagonal
/// value -(alpha/2hbar) A and the kernel exactly Hermitian.
/// Throws std::domain_error when either argument is outside the open
/// momentum interval.
std::complex<double> kernel(const PotentialSpec& spec, double p,
                            double p_prime, const Deformation& d,
                            const PhysicalParams& params);

/// max over node pairs of |U(p, p') - conj(U(p', p))|.
double hermiticity_defect(const PotentialSpec& spec,
                          std::span<const double> grid_nodes,
                          const Deformation& d, const PhysicalParams& params);

namespace testing {
/// Fault-injection hooks for negative-control tests: flip the overall
/// kernel sign (destroys bound states) or evaluate the Coulomb step
/// one-sidedly (destroys hermiticity). Not for production use.
void set_kernel_sign_flip(bool on);
void set_step_asymmetry(bool on);
bool kernel_sign_flip();
bool step_asymmetry();
}  // namespace testing

}  // namespace mlqm
