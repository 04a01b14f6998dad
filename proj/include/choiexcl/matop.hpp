#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace choiexcl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace matop {

/// Largest entrywise |H - H^dagger| accepted when constructing a
/// HermitianMatrix; anything beyond this is rejected rather than averaged away.
inline constexpr double kHermitianAbsTol = 1e-12;

/// Numerical cutoffs shared across the library. Rank and support decisions use
/// eig_zero relative to max(1, lambda_max); PSD tests allow a dip of psd_slack
/// below zero; trace_zero decides when an overlap tr[T rho] counts as zero.
struct Tolerance {
  double eig_zero = 1e-9;
  double psd_slack = 1e-9;
  double trace_zero = 1e-9;
};

bool operator==(const Tolerance& a, const Tolerance& b);

/// Rejects tolerances outside (0, 1e-3).
void check_tolerance(const Tolerance& tol);

/// Square complex matrix that is Hermitian by construction: inputs are
/// symmetrized as (H + H^dagger)/2 after the asymmetry check.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }

  static HermitianMatrix identity(int dim);
  static HermitianMatrix zero(int dim);

 private:
  ComplexMatrix mat_;
};

struct Spectrum {
  RealVector eigenvalues;              ///< sorted descending
  std::optional<double> min_positive;  ///< smallest eigenvalue above the default rank cutoff
};

struct EigenDecomposition {
  Spectrum spectrum;
  ComplexMatrix eigenvectors;  ///< column i pairs with spectrum.eigenvalues[i]
};

EigenDecomposition eig_hermitian(const HermitianMatrix& h);

/// Count of eigenvalues above eig_zero * max(1, lambda_max). Rejects inputs
/// with an eigenvalue below -psd_slack.
int numerical_rank(const HermitianMatrix& h, const Tolerance& tol = {});

/// Orthogonal projector onto the range of a PSD matrix.
HermitianMatrix support_projector(const HermitianMatrix& h, const Tolerance& tol = {});

/// Identity minus the support projector.
HermitianMatrix kernel_projector(const HermitianMatrix& h, const Tolerance& tol = {});

/// Kronecker product; basis element |i>_A |j>_B maps to flat index i*dim_B + j.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { A, B };

/// Trace out one factor of a (dim_a * dim_b)-dimensional bipartite operator.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep, int dim_a, int dim_b);

/// Plain transpose in the fixed computational basis (no conjugation).
ComplexMatrix transpose_in_basis(const ComplexMatrix& m);

/// True iff B - A is PSD up to psd_slack (Loewner order A <= B).
bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, const Tolerance& tol = {});

}  // namespace matop
}  // namespace choiexcl
