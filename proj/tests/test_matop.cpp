#include <doctest.h>

#include "choiexcl/matop.hpp"
#include "support.hpp"

using namespace choiexcl;
using namespace choiexcl::matop;
using testsupport::make_rng;

namespace {

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("hermitian construction symmetrizes and rejects") {
  auto rng = make_rng(11);
  const ComplexMatrix h = testsupport::random_hermitian(4, rng);
  ComplexMatrix bumped = h;
  bumped(1, 2) += Complex(5e-13, -5e-13);
  const HermitianMatrix wrapped(bumped);
  CHECK((wrapped.matrix() - wrapped.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);

  ComplexMatrix bad = h;
  bad(0, 1) += 1e-6;
  CHECK_THROWS_WITH_AS((HermitianMatrix(bad)), doctest::Contains("not Hermitian"),
                       std::invalid_argument);
}

TEST_CASE("eig_hermitian identity and diagonal cases") {
  const auto id = eig_hermitian(HermitianMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id.spectrum.eigenvalues(i) == doctest::Approx(1.0));
  CHECK(id.spectrum.min_positive.value() == doctest::Approx(1.0));

  const auto diag = eig_hermitian(HermitianMatrix(diag2(2.0, -1.0)));
  CHECK(diag.spectrum.eigenvalues(0) == doctest::Approx(2.0));
  CHECK(diag.spectrum.eigenvalues(1) == doctest::Approx(-1.0));
  CHECK(diag.spectrum.min_positive.value() == doctest::Approx(2.0));
}

TEST_CASE("eig_hermitian reconstruction oracle over random inputs") {
  auto rng = make_rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 15);
    const HermitianMatrix h(testsupport::random_hermitian(d, rng));
    const auto eig = eig_hermitian(h);
    const ComplexMatrix v = eig.eigenvectors;
    const ComplexMatrix rebuilt =
        v * eig.spectrum.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
    const double scale = std::max(1.0, h.matrix().norm());
    REQUIRE((rebuilt - h.matrix()).norm() <= 1e-9 * scale);
    REQUIRE((v.adjoint() * v - ComplexMatrix::Identity(d, d)).norm() <= 1e-9);
    for (int i = 0; i + 1 < d; ++i) {
      REQUIRE(eig.spectrum.eigenvalues(i) >= eig.spectrum.eigenvalues(i + 1));
    }
  }
}

TEST_CASE("numerical_rank basics and known-rank oracle") {
  CHECK(numerical_rank(HermitianMatrix::zero(4)) == 0);

  // Projector of trace r.
  ComplexMatrix proj = ComplexMatrix::Zero(5, 5);
  proj(0, 0) = proj(3, 3) = 1.0;
  CHECK(numerical_rank(HermitianMatrix(proj)) == 2);

  auto rng = make_rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 7);
    const int r = 1 + static_cast<int>(rng() % d);
    CHECK(numerical_rank(HermitianMatrix(testsupport::random_psd_of_rank(d, r, rng))) == r);
  }

  ComplexMatrix negative = diag2(1.0, -0.5);
  CHECK_THROWS_WITH_AS(numerical_rank(HermitianMatrix(negative)),
                       doctest::Contains("PSD"), std::invalid_argument);
}

TEST_CASE("numerical_rank is scale invariant") {
  auto rng = make_rng(123);
  const ComplexMatrix base = testsupport::random_psd_of_rank(6, 3, rng);
  for (double scale : {1e-3, 1.0, 1e3}) {
    CHECK(numerical_rank(HermitianMatrix(scale * base)) == 3);
  }
}

TEST_CASE("support_projector matches the Gram-Schmidt span oracle") {
  // Pure state.
  ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK((support_projector(HermitianMatrix(pure)).matrix() - pure).norm() <= 1e-10);

  // Full-rank state.
  const ComplexMatrix mixed = 0.5 * ComplexMatrix::Identity(2, 2);
  CHECK((support_projector(HermitianMatrix(mixed)).matrix() - ComplexMatrix::Identity(2, 2)).norm() <=
        1e-10);

  auto rng = make_rng(2024);
  const ComplexMatrix a = testsupport::ginibre(4, 2, rng);
  const HermitianMatrix h(ComplexMatrix(a * a.adjoint()));
  const HermitianMatrix pi = support_projector(h);
  CHECK(pi.trace() == doctest::Approx(2.0));
  CHECK((pi.matrix() * pi.matrix() - pi.matrix()).norm() <= 1e-8);
  CHECK((pi.matrix() * h.matrix() * pi.matrix() - h.matrix()).norm() <= 1e-8);

  const ComplexMatrix oracle =
      testsupport::gram_schmidt_projector({ComplexVector(a.col(0)), ComplexVector(a.col(1))});
  CHECK((pi.matrix() - oracle).norm() <= 1e-8);
}

TEST_CASE("kernel_projector complements the support") {
  ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(1, 1) = 1.0;
  CHECK((kernel_projector(HermitianMatrix(pure)).matrix() - expected).norm() <= 1e-10);

  const ComplexMatrix full = 0.25 * ComplexMatrix::Identity(4, 4);
  CHECK(kernel_projector(HermitianMatrix(full)).matrix().norm() <= 1e-10);

  auto rng = make_rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + static_cast<int>(rng() % 5);
    const int r = 1 + static_cast<int>(rng() % (d - 1));
    const HermitianMatrix h(testsupport::random_psd_of_rank(d, r, rng));
    const HermitianMatrix ker = kernel_projector(h);
    const HermitianMatrix sup = support_projector(h);
    CHECK(ker.trace() == doctest::Approx(d - r));
    CHECK((ker.matrix() + sup.matrix() - ComplexMatrix::Identity(d, d)).norm() <= 1e-8);
  }
}

TEST_CASE("tensor product convention and mixed-product oracle") {
  CHECK((tensor(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) -
         ComplexMatrix::Identity(4, 4))
            .norm() == 0.0);

  const ComplexMatrix left = diag2(1.0, 2.0);
  const ComplexMatrix right = diag2(3.0, 4.0);
  const ComplexMatrix product = tensor(left, right);
  CHECK(product(0, 0) == Complex(3.0, 0.0));
  CHECK(product(1, 1) == Complex(4.0, 0.0));
  CHECK(product(2, 2) == Complex(6.0, 0.0));
  CHECK(product(3, 3) == Complex(8.0, 0.0));

  auto rng = make_rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    const ComplexMatrix a = testsupport::ginibre(2, 2, rng);
    const ComplexMatrix b = testsupport::ginibre(2, 2, rng);
    const ComplexMatrix c = testsupport::ginibre(2, 2, rng);
    const ComplexMatrix d = testsupport::ginibre(2, 2, rng);
    CHECK((tensor(a, b) * tensor(c, d) - tensor(a * c, b * d)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("partial_trace on products, entangled states, and via the index-sum oracle") {
  auto rng = make_rng(31);
  const ComplexMatrix rho = testsupport::random_hermitian(2, rng);
  const ComplexMatrix sigma = testsupport::random_hermitian(3, rng);
  const ComplexMatrix prod = tensor(rho, sigma);
  CHECK((partial_trace(prod, Subsystem::A, 2, 3) - rho * sigma.trace()).norm() <= 1e-12);
  CHECK((partial_trace(prod, Subsystem::B, 2, 3) - sigma * rho.trace()).norm() <= 1e-12);

  // tr_A of the maximally entangled projector is I/d.
  const int d = 3;
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  const ComplexMatrix bell = phi * phi.adjoint();
  CHECK((partial_trace(bell, Subsystem::B, d, d) - ComplexMatrix::Identity(d, d) / d).norm() <=
        1e-12);

  // Independent index-sum oracle on a random 4x4 matrix.
  const ComplexMatrix m = testsupport::ginibre(4, 4, rng);
  ComplexMatrix keep_a = ComplexMatrix::Zero(2, 2);
  ComplexMatrix keep_b = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j) {
        keep_a(i, k) += m(2 * i + j, 2 * k + j);
        keep_b(i, k) += m(2 * j + i, 2 * j + k);
      }
  CHECK((partial_trace(m, Subsystem::A, 2, 2) - keep_a).norm() <= 1e-12);
  CHECK((partial_trace(m, Subsystem::B, 2, 2) - keep_b).norm() <= 1e-12);
  CHECK(std::abs(partial_trace(m, Subsystem::A, 2, 2).trace() - m.trace()) <= 1e-12);

  CHECK_THROWS_WITH_AS(partial_trace(m, Subsystem::A, 3, 2), doctest::Contains("size mismatch"),
                       std::invalid_argument);
}

TEST_CASE("transpose_in_basis does not conjugate") {
  ComplexMatrix hop = ComplexMatrix::Zero(2, 2);
  hop(0, 1) = Complex(0.0, 1.0);  // i |0><1|
  const ComplexMatrix t = transpose_in_basis(hop);
  CHECK(t(1, 0) == Complex(0.0, 1.0));
  CHECK(t(0, 1) == Complex(0.0, 0.0));

  auto rng = make_rng(71);
  const ComplexMatrix sym = testsupport::random_hermitian(3, rng).real().cast<Complex>();
  CHECK((transpose_in_basis(sym) - sym).norm() <= 1e-12);
}

TEST_CASE("loewner_leq orders") {
  const HermitianMatrix zero = HermitianMatrix::zero(3);
  const HermitianMatrix id = HermitianMatrix::identity(3);
  CHECK(loewner_leq(zero, id));
  CHECK_FALSE(loewner_leq(HermitianMatrix(ComplexMatrix(2.0 * ComplexMatrix::Identity(2, 2))),
                          HermitianMatrix::identity(2)));
  CHECK_THROWS_AS(loewner_leq(zero, HermitianMatrix::identity(2)), std::invalid_argument);
}

TEST_CASE("loewner_leq is reflexive and transitive on random chains") {
  auto rng = make_rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const HermitianMatrix a(testsupport::random_hermitian(d, rng));
    const HermitianMatrix b(
        ComplexMatrix(a.matrix() + testsupport::random_psd_of_rank(d, d, rng)));
    const HermitianMatrix c(
        ComplexMatrix(b.matrix() + testsupport::random_psd_of_rank(d, d, rng)));
    CHECK(loewner_leq(a, a));
    CHECK(loewner_leq(a, b));
    CHECK(loewner_leq(b, c));
    CHECK(loewner_leq(a, c));
  }
}

TEST_CASE("tolerance validation") {
  CHECK_THROWS_AS(check_tolerance(Tolerance{0.0, 1e-9, 1e-9}), std::invalid_argument);
  CHECK_THROWS_AS(check_tolerance(Tolerance{1e-9, 1e-2, 1e-9}), std::invalid_argument);
  CHECK_NOTHROW(check_tolerance(Tolerance{}));
}
