#pragma once

#include "choiexcl/matop.hpp"
#include "choiexcl/quantum.hpp"

namespace choiexcl::majorization {

using matop::Tolerance;

/// Eigenvalues of a state sorted descending, with entries below the rank
/// cutoff clipped to zero. sum_residual records |sum - 1| before clipping.
struct StateSpectrum {
  RealVector values;
  double sum_residual = 0.0;
};

StateSpectrum spectrum(const quantum::DensityMatrix& rho, const Tolerance& tol = {});

/// x majorizes y: equal sums and every descending prefix sum of x dominates.
bool majorizes(const RealVector& x, const RealVector& y);

/// Number of components above the eig_zero cutoff.
int supp_count(const RealVector& v, const Tolerance& tol = {});

struct MonotonicityVerdict {
  bool holds = false;
  bool majorization_holds = false;
  bool rank_monotone = false;
  int rank_in = 0;
  int rank_out = 0;
  double unitality_residual = 0.0;
};

/// For unital E: lambda(rho) majorizes lambda(E(rho)) and rank cannot drop.
MonotonicityVerdict unital_monotonicity_check(const quantum::KrausChannel& e,
                                              const quantum::DensityMatrix& rho,
                                              const Tolerance& tol = {});

}  // namespace choiexcl::majorization
