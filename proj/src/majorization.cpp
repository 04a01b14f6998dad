#include "choiexcl/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace choiexcl::majorization {

namespace {

constexpr double kPrefixSlack = 1e-9;

RealVector sorted_descending(const RealVector& v) {
  RealVector out = v;
  std::sort(out.data(), out.data() + out.size(), std::greater<double>());
  return out;
}

}  // namespace

StateSpectrum spectrum(const quantum::DensityMatrix& rho, const Tolerance& tol) {
  matop::check_tolerance(tol);
  const auto eig = matop::eig_hermitian(rho.hermitian());
  RealVector values = eig.spectrum.eigenvalues;
  StateSpectrum result;
  result.sum_residual = std::abs(values.sum() - 1.0);
  const double cutoff = tol.eig_zero * std::max(1.0, values(0));
  for (int i = 0; i < values.size(); ++i) {
    if (values(i) <= cutoff) values(i) = 0.0;
  }
  result.values = std::move(values);
  return result;
}

bool majorizes(const RealVector& x, const RealVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("majorization requires equal lengths");
  if (std::abs(x.sum() - y.sum()) > 1e-9) {
    std::ostringstream os;
    os << "majorization requires equal sums, got " << x.sum() << " and " << y.sum();
    throw std::invalid_argument(os.str());
  }
  const RealVector xd = sorted_descending(x);
  const RealVector yd = sorted_descending(y);
  double px = 0.0, py = 0.0;
  for (int i = 0; i < xd.size(); ++i) {
    px += xd(i);
    py += yd(i);
    if (px < py - kPrefixSlack) return false;
  }
  return true;
}

int supp_count(const RealVector& v, const Tolerance& tol) {
  matop::check_tolerance(tol);
  int count = 0;
  for (int i = 0; i < v.size(); ++i) {
    if (v(i) > tol.eig_zero) ++count;
  }
  return count;
}

MonotonicityVerdict unital_monotonicity_check(const quantum::KrausChannel& e,
                                              const quantum::DensityMatrix& rho,
                                              const Tolerance& tol) {
  MonotonicityVerdict verdict;
  verdict.unitality_residual = e.unitality_residual();
  if (verdict.unitality_residual > quantum::kCompletenessTol) {
    std::ostringstream os;
    os << "channel is not unital: ||sum K K^dag - I||_F = " << verdict.unitality_residual;
    throw std::invalid_argument(os.str());
  }
  const auto in = spectrum(rho, tol);
  const auto out = spectrum(quantum::apply_kraus(e, rho), tol);
  verdict.rank_in = supp_count(in.values, tol);
  verdict.rank_out = supp_count(out.values, tol);
  verdict.rank_monotone = verdict.rank_out >= verdict.rank_in;
  verdict.majorization_holds = majorizes(in.values, out.values);
  verdict.holds = verdict.rank_monotone && verdict.majorization_holds;
  return verdict;
}

}  // namespace choiexcl::majorization
