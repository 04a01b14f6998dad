#include "choiexcl/matop.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace choiexcl::matop {

namespace {

double rank_cutoff(const RealVector& descending, double eig_zero) {
  const double lambda_max = descending.size() > 0 ? descending(0) : 0.0;
  return eig_zero * std::max(1.0, lambda_max);
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

bool operator==(const Tolerance& a, const Tolerance& b) {
  return a.eig_zero == b.eig_zero && a.psd_slack == b.psd_slack && a.trace_zero == b.trace_zero;
}

void check_tolerance(const Tolerance& tol) {
  for (double v : {tol.eig_zero, tol.psd_slack, tol.trace_zero}) {
    if (!(v > 0.0 && v < 1e-3)) {
      std::ostringstream os;
      os << "tolerance values must lie in (0, 1e-3), got " << v;
      fail(os.str());
    }
  }
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) fail("HermitianMatrix requires a square matrix");
  if (m.rows() == 0) fail("HermitianMatrix requires a nonempty matrix");
  if (!m.allFinite()) fail("HermitianMatrix requires finite entries");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianAbsTol) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |H - H^dagger| = " << asym;
    fail(os.str());
  }
  mat_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

EigenDecomposition eig_hermitian(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) fail("Hermitian eigendecomposition failed to converge");

  const int n = h.dim();
  // Eigen returns ascending order; flip to descending.
  RealVector values(n);
  ComplexMatrix vectors(n, n);
  for (int i = 0; i < n; ++i) {
    values(i) = solver.eigenvalues()(n - 1 - i);
    vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }

  Spectrum spectrum;
  spectrum.eigenvalues = values;
  const double cutoff = rank_cutoff(values, Tolerance{}.eig_zero);
  for (int i = n - 1; i >= 0; --i) {
    if (values(i) > cutoff) {
      spectrum.min_positive = values(i);
      break;
    }
  }
  return {std::move(spectrum), std::move(vectors)};
}

int numerical_rank(const HermitianMatrix& h, const Tolerance& tol) {
  check_tolerance(tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail("Hermitian eigendecomposition failed to converge");
  const RealVector& asc = solver.eigenvalues();
  if (asc(0) < -tol.psd_slack) {
    std::ostringstream os;
    os << "expected a PSD matrix, found eigenvalue " << asc(0);
    fail(os.str());
  }
  const double cutoff = tol.eig_zero * std::max(1.0, asc(asc.size() - 1));
  int rank = 0;
  for (int i = 0; i < asc.size(); ++i) {
    if (asc(i) > cutoff) ++rank;
  }
  return rank;
}

HermitianMatrix support_projector(const HermitianMatrix& h, const Tolerance& tol) {
  check_tolerance(tol);
  const auto eig = eig_hermitian(h);
  const RealVector& values = eig.spectrum.eigenvalues;
  if (values(values.size() - 1) < -tol.psd_slack) {
    std::ostringstream os;
    os << "expected a PSD matrix, found eigenvalue " << values(values.size() - 1);
    fail(os.str());
  }
  const double cutoff = rank_cutoff(values, tol.eig_zero);
  int rank = 0;
  while (rank < values.size() && values(rank) > cutoff) ++rank;

  const auto basis = eig.eigenvectors.leftCols(rank);
  ComplexMatrix proj = basis * basis.adjoint();
  return HermitianMatrix(0.5 * (proj + proj.adjoint()));
}

HermitianMatrix kernel_projector(const HermitianMatrix& h, const Tolerance& tol) {
  const auto support = support_projector(h, tol);
  return HermitianMatrix(ComplexMatrix::Identity(h.dim(), h.dim()) - support.matrix());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep, int dim_a, int dim_b) {
  if (dim_a < 1 || dim_b < 1) fail("partial_trace requires positive subsystem dimensions");
  const Eigen::Index total = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (m.rows() != total || m.cols() != total) {
    std::ostringstream os;
    os << "partial_trace size mismatch: matrix is " << m.rows() << "x" << m.cols()
       << ", expected " << total << "x" << total;
    fail(os.str());
  }

  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int k = 0; k < dim_a; ++k)
        for (int j = 0; j < dim_b; ++j)
          out(i, k) += m(i * dim_b + j, k * dim_b + j);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (int j = 0; j < dim_b; ++j)
    for (int l = 0; l < dim_b; ++l)
      for (int i = 0; i < dim_a; ++i)
        out(j, l) += m(i * dim_b + j, i * dim_b + l);
  return out;
}

ComplexMatrix transpose_in_basis(const ComplexMatrix& m) { return m.transpose(); }

bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, const Tolerance& tol) {
  check_tolerance(tol);
  if (a.dim() != b.dim()) fail("loewner_leq requires matrices of equal dimension");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(b.matrix() - a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail("Hermitian eigendecomposition failed to converge");
  return solver.eigenvalues()(0) >= -tol.psd_slack;
}

}  // namespace choiexcl::matop
