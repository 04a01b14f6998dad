#include <doctest.h>

#include "choiexcl/quantum.hpp"
#include "support.hpp"

using namespace choiexcl;
using namespace choiexcl::quantum;
using matop::HermitianMatrix;
using testsupport::make_rng;

namespace {

ComplexMatrix bell_projector(int d, int a, int b) {
  const ComplexVector v = bell_state(d, a, b).amplitudes();
  return v * v.adjoint();
}

DensityMatrix plus_state() {
  ComplexMatrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return DensityMatrix(HermitianMatrix(m));
}

}  // namespace

TEST_CASE("state type invariants") {
  ComplexMatrix bad_trace = 0.7 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_WITH_AS((DensityMatrix(HermitianMatrix(bad_trace))), doctest::Contains("unit trace"),
                       std::invalid_argument);

  ComplexMatrix not_psd(2, 2);
  not_psd << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_WITH_AS((DensityMatrix(HermitianMatrix(not_psd))), doctest::Contains("not PSD"),
                       std::invalid_argument);

  ComplexVector unnormalized(2);
  unnormalized << 1.0, 1.0;
  CHECK_THROWS_AS((PureState(unnormalized)), std::invalid_argument);

  // Non-trace-preserving Kraus set.
  CHECK_THROWS_WITH_AS((KrausChannel({ComplexMatrix(0.6 * ComplexMatrix::Identity(2, 2))})),
                       doctest::Contains("trace preserving"), std::invalid_argument);
}

TEST_CASE("max_entangled amplitudes and marginals") {
  const PureState phi = max_entangled(2);
  CHECK(phi.amplitudes()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(phi.amplitudes()(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(phi.amplitudes()(1)) == 0.0);
  CHECK(std::abs(phi.amplitudes()(2)) == 0.0);

  const PureState phi3 = max_entangled(3);
  const ComplexMatrix proj = phi3.amplitudes() * phi3.amplitudes().adjoint();
  CHECK((matop::partial_trace(proj, matop::Subsystem::B, 3, 3) -
         ComplexMatrix::Identity(3, 3) / 3.0)
            .norm() <= 1e-12);

  const Complex overlap = bell_state(3, 0, 0).amplitudes().dot(phi3.amplitudes());
  CHECK(std::abs(overlap) == doctest::Approx(1.0));

  CHECK_THROWS_AS(max_entangled(1), std::invalid_argument);
}

TEST_CASE("weyl operators evaluate to the shift/phase matrices") {
  CHECK((weyl({0, 0, 3}) - ComplexMatrix::Identity(3, 3)).norm() <= 1e-15);

  ComplexMatrix pauli_x(2, 2), pauli_z(2, 2);
  pauli_x << 0, 1, 1, 0;
  pauli_z << 1, 0, 0, -1;
  CHECK((weyl({1, 0, 2}) - pauli_x).norm() <= 1e-15);
  CHECK((weyl({0, 1, 2}) - pauli_z).norm() <= 1e-15);
}

TEST_CASE("weyl identities: unitarity, composition, transpose") {
  for (int d : {2, 3, 5}) {
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const ComplexMatrix w = weyl({a, b, d});
        CHECK((w.adjoint() * w - ComplexMatrix::Identity(d, d)).norm() <= 1e-12);

        // W_{a,b}^t = Omega^{-ab} W_{-a,b}
        const ComplexMatrix lhs = matop::transpose_in_basis(w);
        const ComplexMatrix rhs =
            std::pow(omega, -a * b) * weyl({(d - a) % d, b, d});
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);

        // W_{a,b} W_{n,m} = Omega^{bn} W_{a+n, b+m}
        for (int n = 0; n < d; ++n) {
          for (int m = 0; m < d; ++m) {
            const ComplexMatrix prod = w * weyl({n, m, d});
            const ComplexMatrix expected =
                std::pow(omega, b * n) * weyl({(a + n) % d, (b + m) % d, d});
            CHECK((prod - expected).cwiseAbs().maxCoeff() <= 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("bell states form an orthonormal basis") {
  const ComplexVector expected_01 = [] {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = 1.0 / std::sqrt(2.0);
    v(3) = -1.0 / std::sqrt(2.0);
    return v;
  }();
  CHECK((bell_state(2, 0, 1).amplitudes() - expected_01).norm() <= 1e-12);
  CHECK((bell_state(2, 0, 0).amplitudes() - max_entangled(2).amplitudes()).norm() == 0.0);

  for (int d : {2, 3}) {
    std::vector<ComplexVector> basis;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) basis.push_back(bell_state(d, a, b).amplitudes());
    for (size_t i = 0; i < basis.size(); ++i) {
      for (size_t j = 0; j < basis.size(); ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(std::abs(basis[i].dot(basis[j])) - expected) <= 1e-10);
      }
    }
  }
}

TEST_CASE("kraus_to_choi on the standard channels") {
  const ChoiState id = kraus_to_choi(make_unitary_channel(ComplexMatrix::Identity(2, 2)));
  CHECK((id.matrix() - bell_projector(2, 0, 0)).norm() <= 1e-12);

  // Dephasing Choi in the Bell basis: alpha |Phi_00><Phi_00| + (1-p)/d on each
  // |Phi_0c><Phi_0c| with c > 0; at d=2 alpha = (1+p)/2.
  for (double p : {0.2, 0.5, 0.9}) {
    const ChoiState j = kraus_to_choi(make_dephasing(2, p));
    const ComplexMatrix expected =
        0.5 * (1.0 + p) * bell_projector(2, 0, 0) + 0.5 * (1.0 - p) * bell_projector(2, 0, 1);
    CHECK((j.matrix() - expected).norm() <= 1e-12);
  }

  const ChoiState depol = kraus_to_choi(make_depolarizing(3, 0.0));
  CHECK((depol.matrix() - ComplexMatrix::Identity(9, 9) / 9.0).norm() <= 1e-12);
}

TEST_CASE("choi_to_kraus returns minimal Kraus sets") {
  auto rng = make_rng(42);
  const ComplexMatrix u = testsupport::random_unitary(3, rng);
  const KrausChannel recovered = choi_to_kraus(kraus_to_choi(make_unitary_channel(u)));
  CHECK(recovered.kraus_count() == 1);
  const ComplexMatrix& k = recovered.kraus_ops().front();
  CHECK((k.adjoint() * k - ComplexMatrix::Identity(3, 3)).norm() <= 1e-8);

  CHECK(choi_to_kraus(kraus_to_choi(make_dephasing(3, 0.5))).kraus_count() == 3);

  // Five Ginibre-derived Kraus operators collapse to at most d^2 = 4.
  const KrausChannel overcomplete = testsupport::random_cptp(2, 5, rng);
  const ChoiState j = kraus_to_choi(overcomplete);
  const KrausChannel minimal = choi_to_kraus(j);
  CHECK(minimal.kraus_count() <= 4);
  CHECK((kraus_to_choi(minimal).matrix() - j.matrix()).norm() <= 1e-8);
}

TEST_CASE("apply_kraus matches closed forms") {
  auto rng = make_rng(7);
  const DensityMatrix rho = testsupport::random_density(2, 2, rng);
  const KrausChannel identity = make_unitary_channel(ComplexMatrix::Identity(2, 2));
  CHECK((apply_kraus(identity, rho).matrix() - rho.matrix()).norm() <= 1e-12);

  const DensityMatrix dephased = apply_kraus(make_dephasing(2, 0.0), plus_state());
  CHECK((dephased.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)).norm() <= 1e-12);

  const DensityMatrix in3 = testsupport::random_density(3, 2, rng);
  for (double p : {0.0, 0.3, 1.0}) {
    const DensityMatrix out = apply_kraus(make_depolarizing(3, p), in3);
    const ComplexMatrix expected = p * in3.matrix() + (1.0 - p) * ComplexMatrix::Identity(3, 3) / 3.0;
    CHECK((out.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }

  CHECK_THROWS_WITH_AS(apply_kraus(make_dephasing(3, 0.5), rho), doctest::Contains("dimension"),
                       std::invalid_argument);
}

TEST_CASE("apply_via_choi recovers the channel action") {
  auto rng = make_rng(19);
  const DensityMatrix rho = testsupport::random_density(2, 2, rng);
  const ChoiState id = kraus_to_choi(make_unitary_channel(ComplexMatrix::Identity(2, 2)));
  CHECK((apply_via_choi(id, rho).matrix() - rho.matrix()).norm() <= 1e-10);

  const ChoiState deph = kraus_to_choi(make_dephasing(2, 0.5));
  const DensityMatrix out = apply_via_choi(deph, plus_state());
  CHECK(out.matrix()(0, 1).real() == doctest::Approx(0.25));
  CHECK(out.matrix()(0, 0).real() == doctest::Approx(0.5));

  // Cross-representation oracle.
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const KrausChannel ch = testsupport::random_cptp(d, 1 + static_cast<int>(rng() % (d * d)), rng);
    const DensityMatrix state = testsupport::random_density(d, 1 + static_cast<int>(rng() % d), rng);
    const DensityMatrix via_choi = apply_via_choi(kraus_to_choi(ch), state);
    const DensityMatrix via_kraus = apply_kraus(ch, state);
    REQUIRE((via_choi.matrix() - via_kraus.matrix()).norm() <= 1e-9);
  }
}

TEST_CASE("choi_rank on the benchmark channels") {
  auto rng = make_rng(55);
  CHECK(choi_rank(kraus_to_choi(make_unitary_channel(testsupport::random_unitary(2, rng)))) == 1);
  CHECK(choi_rank(kraus_to_choi(make_unitary_channel(testsupport::random_unitary(4, rng)))) == 1);

  for (double p : {0.0, 0.3, 0.99}) {
    CHECK(choi_rank(kraus_to_choi(make_depolarizing(2, p))) == 4);
  }
  for (int d : {2, 3, 4}) {
    CHECK(choi_rank(kraus_to_choi(make_dephasing(d, 0.5))) == d);
  }
}

TEST_CASE("is_cptp verdicts and diagnostics") {
  CHECK(is_cptp(kraus_to_choi(make_unitary_channel(ComplexMatrix::Identity(2, 2)))).cptp);

  const ChoiState mixed(2, HermitianMatrix(ComplexMatrix(ComplexMatrix::Identity(4, 4) / 4.0)));
  CHECK(is_cptp(mixed).cptp);

  // Unbalance the diagonal so tr_A != I/d while staying a valid state.
  ComplexMatrix skew = ComplexMatrix::Zero(4, 4);
  skew(0, 0) = 0.6;
  skew(3, 3) = 0.4;
  const auto verdict = is_cptp(ChoiState(2, HermitianMatrix(skew)));
  CHECK_FALSE(verdict.cptp);
  CHECK(verdict.psd_ok);
  CHECK_FALSE(verdict.marginal_ok);
  CHECK(verdict.marginal_residual == doctest::Approx(0.1 * std::sqrt(2.0)));
}

TEST_CASE("builders behave at the parameter extremes") {
  auto rng = make_rng(99);
  const DensityMatrix rho = testsupport::random_density(2, 2, rng);
  const DensityMatrix unchanged = apply_kraus(make_dephasing(2, 1.0), rho);
  CHECK((unchanged.matrix() - rho.matrix()).norm() <= 1e-12);

  const DensityMatrix constant = apply_kraus(make_depolarizing(3, 0.0), testsupport::random_density(3, 3, rng));
  CHECK((constant.matrix() - ComplexMatrix::Identity(3, 3) / 3.0).norm() <= 1e-12);

  CHECK_THROWS_AS(make_dephasing(2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_depolarizing(2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_unitary_channel(ComplexMatrix(2.0 * ComplexMatrix::Identity(2, 2))),
                  std::invalid_argument);
}

TEST_CASE("representation round trip holds on random channels") {
  auto rng = make_rng(2718);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const int m = 1 + static_cast<int>(rng() % (d * d + 1));
    const KrausChannel ch = testsupport::random_cptp(d, m, rng);
    const ChoiState j = kraus_to_choi(ch);
    REQUIRE(is_cptp(j).cptp);
    const KrausChannel minimal = choi_to_kraus(j);
    REQUIRE(minimal.kraus_count() == choi_rank(j));
    const ChoiState back = kraus_to_choi(minimal);
    REQUIRE(is_cptp(back).cptp);
    REQUIRE((back.matrix() - j.matrix()).norm() <= 1e-8);
  }

  // Builder outputs are accepted as channels.
  CHECK(is_cptp(kraus_to_choi(make_dephasing(4, 0.25))).cptp);
  CHECK(is_cptp(kraus_to_choi(make_depolarizing(3, 0.7))).cptp);
}

TEST_CASE("unital channel detection") {
  CHECK(make_dephasing(3, 0.4).is_unital());
  CHECK(make_depolarizing(2, 0.4).is_unital());

  // Amplitude damping is not unital.
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(0.5);
  k1 << 0, std::sqrt(0.5), 0, 0;
  const KrausChannel damping({k0, k1});
  CHECK_FALSE(damping.is_unital());
  CHECK_THROWS_WITH_AS(damping.transpose_channel(), doctest::Contains("unital"),
                       std::invalid_argument);
}
