#pragma once

// Shared random generators and independent oracles for the test suites. The
// oracles here deliberately avoid the library code paths they are used to
// check.

#include <random>
#include <vector>

#include "choiexcl/exclusion.hpp"
#include "choiexcl/matop.hpp"
#include "choiexcl/quantum.hpp"

namespace testsupport {

using choiexcl::Complex;
using choiexcl::ComplexMatrix;
using choiexcl::ComplexVector;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

inline ComplexMatrix random_hermitian(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

// PSD with known rank r, built as A A^dagger for a d x r tall matrix.
inline ComplexMatrix random_psd_of_rank(int d, int r, std::mt19937_64& rng) {
  const ComplexMatrix a = ginibre(d, r, rng);
  return a * a.adjoint();
}

inline ComplexMatrix random_unitary(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  // Fix the phase convention so the distribution is Haar.
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    if (std::abs(diag) > 0) q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

inline choiexcl::quantum::DensityMatrix random_density(int d, int rank, std::mt19937_64& rng) {
  ComplexMatrix m = random_psd_of_rank(d, rank, rng);
  m /= m.trace();
  return choiexcl::quantum::DensityMatrix(choiexcl::matop::HermitianMatrix(m));
}

// Random CPTP channel with (at most) m Kraus operators: stack m Ginibre
// blocks, orthonormalize the columns, slice the isometry back into blocks.
inline choiexcl::quantum::KrausChannel random_cptp(int d, int m, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(m * d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix q = ComplexMatrix(qr.householderQ()).leftCols(d);
  std::vector<ComplexMatrix> ops;
  ops.reserve(m);
  for (int i = 0; i < m; ++i) ops.push_back(q.block(i * d, 0, d, d));
  return choiexcl::quantum::KrausChannel(std::move(ops));
}

// Random POVM with n effects: normalize random PSD pieces by the inverse
// square root of their sum.
inline choiexcl::exclusion::Povm random_povm(int d, int n, std::mt19937_64& rng) {
  std::vector<ComplexMatrix> pieces;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    pieces.push_back(random_psd_of_rank(d, d, rng));
    sum += pieces.back();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sum);
  const ComplexMatrix inv_sqrt = eig.operatorInverseSqrt();
  std::vector<choiexcl::matop::HermitianMatrix> effects;
  for (const auto& piece : pieces) {
    const ComplexMatrix t = inv_sqrt * piece * inv_sqrt;
    effects.emplace_back(ComplexMatrix(0.5 * (t + t.adjoint())));
  }
  return choiexcl::exclusion::Povm(d, std::move(effects));
}

// Random unital channel: a convex mixture of Weyl unitaries.
inline choiexcl::quantum::KrausChannel random_weyl_mixture(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> weights;
  double total = 0.0;
  for (int i = 0; i < d * d; ++i) {
    weights.push_back(uniform(rng) + 1e-3);
    total += weights.back();
  }
  std::vector<ComplexMatrix> ops;
  int i = 0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      ops.push_back(std::sqrt(weights[i++] / total) * choiexcl::quantum::weyl({a, b, d}));
  return choiexcl::quantum::KrausChannel(std::move(ops));
}

// Modified Gram-Schmidt projector onto the span of the given vectors; the
// column-space oracle used against support_projector.
inline ComplexMatrix gram_schmidt_projector(const std::vector<ComplexVector>& vectors) {
  std::vector<ComplexVector> basis;
  for (ComplexVector v : vectors) {
    for (const auto& b : basis) v -= b.dot(v) * b;
    if (v.norm() > 1e-10) basis.push_back(v / v.norm());
  }
  const int d = static_cast<int>(vectors.front().size());
  ComplexMatrix proj = ComplexMatrix::Zero(d, d);
  for (const auto& b : basis) proj += b * b.adjoint();
  return proj;
}

}  // namespace testsupport
