#include "choiexcl/quantum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace choiexcl::quantum {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

Complex phase_root(int d, long long exponent) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(exponent) / d;
  return std::polar(1.0, angle);
}

int mod(int value, int d) {
  const int r = value % d;
  return r < 0 ? r + d : r;
}

}  // namespace

DensityMatrix::DensityMatrix(const HermitianMatrix& m, const Tolerance& tol) : hermitian_(m) {
  matop::check_tolerance(tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues()(0);
  if (min_eig < -tol.psd_slack) {
    std::ostringstream os;
    os << "density matrix is not PSD: min eigenvalue " << min_eig;
    fail(os.str());
  }
  const double tr = m.trace();
  if (std::abs(tr - 1.0) > kTraceOneTol) {
    std::ostringstream os;
    os << "density matrix must have unit trace, got " << tr;
    fail(os.str());
  }
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m, const Tolerance& tol)
    : DensityMatrix(HermitianMatrix(m), tol) {}

PureState::PureState(const ComplexVector& amplitudes) : amplitudes_(amplitudes) {
  if (amplitudes_.size() == 0) fail("pure state requires a nonempty amplitude vector");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kTraceOneTol) {
    std::ostringstream os;
    os << "pure state amplitudes must have unit norm, got " << norm;
    fail(os.str());
  }
}

DensityMatrix PureState::to_density() const {
  ComplexMatrix m = amplitudes_ * amplitudes_.adjoint();
  return DensityMatrix(HermitianMatrix(m));
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) fail("a channel needs at least one Kraus operator");
  dim_out_ = static_cast<int>(ops_.front().rows());
  dim_in_ = static_cast<int>(ops_.front().cols());
  if (dim_in_ < 1 || dim_out_ < 1) fail("Kraus operators must be nonempty");
  for (const auto& k : ops_) {
    if (k.rows() != dim_out_ || k.cols() != dim_in_) {
      fail("all Kraus operators must share the same shape");
    }
  }
  ComplexMatrix sum = ComplexMatrix::Zero(dim_in_, dim_in_);
  for (const auto& k : ops_) sum += k.adjoint() * k;
  const double residual = (sum - ComplexMatrix::Identity(dim_in_, dim_in_)).norm();
  if (residual > kCompletenessTol) {
    std::ostringstream os;
    os << "Kraus operators are not trace preserving: ||sum K^dag K - I||_F = " << residual;
    fail(os.str());
  }
}

double KrausChannel::unitality_residual() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim_out_, dim_out_);
  for (const auto& k : ops_) sum += k * k.adjoint();
  return (sum - ComplexMatrix::Identity(dim_out_, dim_out_)).norm();
}

bool KrausChannel::is_unital() const { return unitality_residual() <= kCompletenessTol; }

KrausChannel KrausChannel::transpose_channel() const {
  if (!is_unital()) {
    std::ostringstream os;
    os << "transpose channel is trace preserving only for unital channels; "
       << "unitality residual " << unitality_residual();
    fail(os.str());
  }
  std::vector<ComplexMatrix> transposed;
  transposed.reserve(ops_.size());
  for (const auto& k : ops_) transposed.push_back(k.transpose());
  return KrausChannel(std::move(transposed));
}

ChoiState::ChoiState(int local_dim, const HermitianMatrix& m, const Tolerance& tol)
    : d_(local_dim), mat_(m), cached_rank_(0) {
  matop::check_tolerance(tol);
  if (d_ < 2) fail("Choi state requires local dimension >= 2");
  if (mat_.dim() != d_ * d_) {
    std::ostringstream os;
    os << "Choi state for local dimension " << d_ << " must be " << d_ * d_ << "-dimensional, got "
       << mat_.dim();
    fail(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(mat_.matrix(), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues()(0);
  if (min_eig < -tol.psd_slack) {
    std::ostringstream os;
    os << "Choi state is not PSD: min eigenvalue " << min_eig;
    fail(os.str());
  }
  const double tr = mat_.trace();
  if (std::abs(tr - 1.0) > kTraceOneTol) {
    std::ostringstream os;
    os << "Choi state must have unit trace, got " << tr;
    fail(os.str());
  }
  cached_rank_ = matop::numerical_rank(mat_, Tolerance{});
}

PureState max_entangled(int d) {
  if (d < 2) fail("maximally entangled state requires dimension >= 2");
  ComplexVector amp = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) amp(static_cast<Eigen::Index>(i) * d + i) = w;
  return PureState(amp);
}

ComplexMatrix weyl(const WeylIndex& idx) {
  if (idx.d < 2) fail("Weyl operator requires dimension >= 2");
  if (idx.a < 0 || idx.a >= idx.d || idx.b < 0 || idx.b >= idx.d) {
    fail("Weyl index out of range");
  }
  ComplexMatrix w = ComplexMatrix::Zero(idx.d, idx.d);
  for (int n = 0; n < idx.d; ++n) {
    w(mod(n + idx.a, idx.d), n) = phase_root(idx.d, static_cast<long long>(idx.b) * n);
  }
  return w;
}

PureState bell_state(int d, int a, int b) {
  const ComplexMatrix w = weyl({a, b, d});
  const PureState phi = max_entangled(d);
  ComplexVector amp = ComplexVector::Zero(phi.dim());
  // (I (x) W)|Phi+>: amplitude Omega^{b i}/sqrt(d) at flat index i*d + (i+a mod d).
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) {
    amp(static_cast<Eigen::Index>(i) * d + mod(i + a, d)) = scale * phase_root(d, static_cast<long long>(b) * i);
  }
  return PureState(amp);
}

ChoiState kraus_to_choi(const KrausChannel& ch) {
  if (ch.dim_in() != ch.dim_out()) fail("Choi construction requires a square channel");
  const int d = ch.dim_in();
  const ComplexVector phi = max_entangled(d).amplitudes();
  const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
  ComplexMatrix j = ComplexMatrix::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  for (const auto& k : ch.kraus_ops()) {
    const ComplexVector v = matop::tensor(k, eye) * phi;
    j += v * v.adjoint();
  }
  return ChoiState(d, HermitianMatrix(j));
}

KrausChannel choi_to_kraus(const ChoiState& j, const Tolerance& tol) {
  const auto verdict = is_cptp(j, tol);
  if (!verdict.cptp) {
    std::ostringstream os;
    os << "Choi state is not CPTP: min eigenvalue " << verdict.min_eigenvalue
       << ", marginal residual " << verdict.marginal_residual;
    fail(os.str());
  }
  const int d = j.local_dim();
  const auto eig = matop::eig_hermitian(j.hermitian());
  const RealVector& values = eig.spectrum.eigenvalues;
  const double cutoff = tol.eig_zero * std::max(1.0, values(0));

  std::vector<ComplexMatrix> ops;
  for (int i = 0; i < values.size(); ++i) {
    if (values(i) <= cutoff) break;
    const ComplexVector v = eig.eigenvectors.col(i);
    const double scale = std::sqrt(d * values(i));
    ComplexMatrix k(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) k(r, c) = scale * v(static_cast<Eigen::Index>(r) * d + c);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

DensityMatrix apply_kraus(const KrausChannel& ch, const DensityMatrix& rho) {
  if (ch.dim_in() != rho.dim()) {
    std::ostringstream os;
    os << "channel input dimension " << ch.dim_in() << " does not match state dimension "
       << rho.dim();
    fail(os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus_ops()) out += k * rho.matrix() * k.adjoint();
  return DensityMatrix(HermitianMatrix(out));
}

DensityMatrix apply_via_choi(const ChoiState& j, const DensityMatrix& rho, const Tolerance& tol) {
  const int d = j.local_dim();
  if (rho.dim() != d) {
    std::ostringstream os;
    os << "Choi state local dimension " << d << " does not match state dimension " << rho.dim();
    fail(os.str());
  }
  const auto verdict = is_cptp(j, tol);
  if (!verdict.cptp) {
    std::ostringstream os;
    os << "Choi state is not CPTP: min eigenvalue " << verdict.min_eigenvalue
       << ", marginal residual " << verdict.marginal_residual;
    fail(os.str());
  }
  const ComplexMatrix lifted =
      matop::tensor(ComplexMatrix::Identity(d, d), rho.matrix().transpose());
  ComplexMatrix out = static_cast<double>(d) *
                      matop::partial_trace(lifted * j.matrix(), matop::Subsystem::A, d, d);
  return DensityMatrix(HermitianMatrix(0.5 * (out + out.adjoint())));
}

int choi_rank(const ChoiState& j, const Tolerance& tol) {
  if (tol == Tolerance{}) return j.cached_rank();
  return matop::numerical_rank(j.hermitian(), tol);
}

CptpVerdict is_cptp(const ChoiState& j, const Tolerance& tol) {
  matop::check_tolerance(tol);
  CptpVerdict verdict;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(j.matrix(), Eigen::EigenvaluesOnly);
  verdict.min_eigenvalue = solver.eigenvalues()(0);
  verdict.psd_ok = verdict.min_eigenvalue >= -tol.psd_slack;

  const int d = j.local_dim();
  const ComplexMatrix marginal = matop::partial_trace(j.matrix(), matop::Subsystem::B, d, d);
  verdict.marginal_residual =
      (marginal - ComplexMatrix::Identity(d, d) / static_cast<double>(d)).norm();
  verdict.marginal_ok = verdict.marginal_residual <= kCompletenessTol;
  verdict.cptp = verdict.psd_ok && verdict.marginal_ok;
  return verdict;
}

KrausChannel make_depolarizing(int d, double p) {
  if (d < 2) fail("depolarizing channel requires dimension >= 2");
  if (p < 0.0 || p > 1.0) fail("depolarizing parameter must lie in [0, 1]");
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<size_t>(d) * d);
  const double uniform = (1.0 - p) / (d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const double weight = (a == 0 && b == 0) ? p + uniform : uniform;
      ops.push_back(std::sqrt(weight) * weyl({a, b, d}));
    }
  }
  return KrausChannel(std::move(ops));
}

KrausChannel make_dephasing(int d, double p) {
  if (d < 2) fail("dephasing channel requires dimension >= 2");
  if (p < 0.0 || p > 1.0) fail("dephasing parameter must lie in [0, 1]");
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<size_t>(d) + 1);
  ops.push_back(std::sqrt(p) * ComplexMatrix::Identity(d, d));
  for (int n = 0; n < d; ++n) {
    ComplexMatrix k = ComplexMatrix::Zero(d, d);
    k(n, n) = std::sqrt(1.0 - p);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel make_unitary_channel(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() < 1) fail("unitary channel requires a square matrix");
  const double residual =
      (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
  if (residual > kUnitaryTol) {
    std::ostringstream os;
    os << "matrix is not unitary: ||U^dag U - I||_F = " << residual;
    fail(os.str());
  }
  return KrausChannel({u});
}

}  // namespace choiexcl::quantum
