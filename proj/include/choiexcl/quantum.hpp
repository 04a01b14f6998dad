#pragma once

#include <vector>

#include "choiexcl/matop.hpp"

namespace choiexcl::quantum {

using matop::HermitianMatrix;
using matop::Tolerance;

/// Frobenius-norm budget for channel completeness (sum K^dagger K = I) and
/// POVM completeness checks.
inline constexpr double kCompletenessTol = 1e-8;
inline constexpr double kTraceOneTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-10;

/// PSD, unit-trace operator state.
class DensityMatrix {
 public:
  explicit DensityMatrix(const HermitianMatrix& m, const Tolerance& tol = {});
  explicit DensityMatrix(const ComplexMatrix& m, const Tolerance& tol = {});

  int dim() const { return hermitian_.dim(); }
  const HermitianMatrix& hermitian() const { return hermitian_; }
  const ComplexMatrix& matrix() const { return hermitian_.matrix(); }

 private:
  HermitianMatrix hermitian_;
};

class PureState {
 public:
  explicit PureState(const ComplexVector& amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  DensityMatrix to_density() const;

 private:
  ComplexVector amplitudes_;
};

/// Channel in Kraus form; construction enforces trace preservation,
/// sum_x K_x^dagger K_x = I, within kCompletenessTol in Frobenius norm.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
  int kraus_count() const { return static_cast<int>(ops_.size()); }

  /// True iff sum_x K_x K_x^dagger = I within kCompletenessTol (unital channel).
  bool is_unital() const;
  double unitality_residual() const;

  /// Channel whose Kraus operators are the entrywise transposes K_x^t.
  KrausChannel transpose_channel() const;

 private:
  int dim_in_ = 0;
  int dim_out_ = 0;
  std::vector<ComplexMatrix> ops_;
};

/// Choi state of a channel on a d-dimensional system: a PSD unit-trace
/// operator on the d^2-dimensional AB space. The rank under default
/// tolerances is computed once at construction.
class ChoiState {
 public:
  ChoiState(int local_dim, const HermitianMatrix& m, const Tolerance& tol = {});

  int local_dim() const { return d_; }
  int total_dim() const { return d_ * d_; }
  const HermitianMatrix& hermitian() const { return mat_; }
  const ComplexMatrix& matrix() const { return mat_.matrix(); }
  int cached_rank() const { return cached_rank_; }

 private:
  int d_;
  HermitianMatrix mat_;
  int cached_rank_;
};

/// Index (a, b) of a Heisenberg-Weyl operator on a d-dimensional space,
/// with phase root Omega = exp(2*pi*i/d).
struct WeylIndex {
  int a = 0;
  int b = 0;
  int d = 2;
};

/// |Phi+> = sum_i |ii> / sqrt(d), amplitudes on flat indices i*d + i.
PureState max_entangled(int d);

/// W_{a,b} = sum_n Omega^{b n} |n+a mod d><n|.
ComplexMatrix weyl(const WeylIndex& idx);

/// (I (x) W_{a,b}) |Phi+>; the d^2 of them form an orthonormal basis of AB.
PureState bell_state(int d, int a, int b);

ChoiState kraus_to_choi(const KrausChannel& ch);

/// Minimal Kraus form read off the Choi eigendecomposition; produces exactly
/// choi_rank operators and round-trips through kraus_to_choi.
KrausChannel choi_to_kraus(const ChoiState& j, const Tolerance& tol = {});

DensityMatrix apply_kraus(const KrausChannel& ch, const DensityMatrix& rho);

/// Recover the channel action from the Choi state:
/// N(rho) = d * tr_B[(I (x) rho^t) J].
DensityMatrix apply_via_choi(const ChoiState& j, const DensityMatrix& rho, const Tolerance& tol = {});

int choi_rank(const ChoiState& j, const Tolerance& tol = {});

struct CptpVerdict {
  bool cptp = false;
  bool psd_ok = false;
  bool marginal_ok = false;
  double min_eigenvalue = 0.0;      ///< smallest Choi eigenvalue
  double marginal_residual = 0.0;   ///< ||tr_A J - I/d||_F
};

/// A Choi matrix describes a channel iff it is PSD and tr_A J = I/d.
CptpVerdict is_cptp(const ChoiState& j, const Tolerance& tol = {});

/// D_p(rho) = p rho + (1-p) tr[rho] I/d, realized as the Weyl twirl
/// {sqrt(q_ab) W_ab} with q_00 = p + (1-p)/d^2 and q_ab = (1-p)/d^2 otherwise.
KrausChannel make_depolarizing(int d, double p);

/// D^ph_p(rho) = p rho + (1-p) sum_n |n><n| rho |n><n|.
KrausChannel make_dephasing(int d, double p);

KrausChannel make_unitary_channel(const ComplexMatrix& u);

}  // namespace choiexcl::quantum
