#include "choiexcl/exclusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace choiexcl::exclusion {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

double overlap(const HermitianMatrix& effect, const DensityMatrix& rho) {
  return (effect.matrix() * rho.matrix()).trace().real();
}

bool is_sorted_subset(const std::vector<int>& y, const std::vector<int>& super) {
  return std::includes(super.begin(), super.end(), y.begin(), y.end());
}

}  // namespace

std::string label_to_string(const Label& label) {
  if (std::holds_alternative<int>(label)) return std::to_string(std::get<int>(label));
  const auto& subset = std::get<std::vector<int>>(label);
  std::string out = "{";
  for (size_t i = 0; i < subset.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(subset[i]);
  }
  return out + "}";
}

Povm::Povm(int dim, std::vector<HermitianMatrix> effects, std::vector<Label> labels)
    : dim_(dim), effects_(std::move(effects)), labels_(std::move(labels)) {
  if (dim_ < 1) fail("POVM dimension must be positive");
  if (effects_.empty()) fail("POVM needs at least one effect");
  for (const auto& t : effects_) {
    if (t.dim() != dim_) fail("POVM effect dimension mismatch");
  }
  if (labels_.empty()) {
    labels_.reserve(effects_.size());
    for (int a = 0; a < static_cast<int>(effects_.size()); ++a) labels_.emplace_back(a);
  }
  if (labels_.size() != effects_.size()) fail("POVM labels must match effects one-to-one");
  for (auto& label : labels_) {
    if (auto* subset = std::get_if<std::vector<int>>(&label)) {
      std::sort(subset->begin(), subset->end());
    }
  }
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label_to_string(label)).second) {
      fail("POVM labels must be unique, duplicate " + label_to_string(label));
    }
  }
}

PovmVerdict verify_povm(const Povm& p, const Tolerance& tol) {
  matop::check_tolerance(tol);
  PovmVerdict verdict;
  verdict.min_effect_eigenvalue = std::numeric_limits<double>::infinity();
  ComplexMatrix sum = ComplexMatrix::Zero(p.dim(), p.dim());
  for (const auto& t : p.effects()) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(t.matrix(), Eigen::EigenvaluesOnly);
    verdict.min_effect_eigenvalue = std::min(verdict.min_effect_eigenvalue, solver.eigenvalues()(0));
    sum += t.matrix();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> residual(
      sum - ComplexMatrix::Identity(p.dim(), p.dim()), Eigen::EigenvaluesOnly);
  verdict.completeness_residual = residual.eigenvalues().cwiseAbs().maxCoeff();
  verdict.valid = verdict.min_effect_eigenvalue >= -tol.psd_slack &&
                  verdict.completeness_residual <= quantum::kCompletenessTol;
  return verdict;
}

ExclusionEnsemble::ExclusionEnsemble(std::vector<DensityMatrix> states, std::vector<double> priors,
                                     const Tolerance& tol)
    : states_(std::move(states)), priors_(std::move(priors)) {
  matop::check_tolerance(tol);
  if (states_.size() < 2) fail("exclusion ensemble needs at least two states");
  dim_ = states_.front().dim();
  for (const auto& rho : states_) {
    if (rho.dim() != dim_) fail("ensemble states must share one dimension");
  }
  if (priors_.empty()) {
    priors_.assign(states_.size(), 1.0 / static_cast<double>(states_.size()));
  }
  if (priors_.size() != states_.size()) fail("priors must match states one-to-one");
  double sum = 0.0;
  for (double p : priors_) {
    if (p < 0.0) fail("priors must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "priors must sum to 1, got " << sum;
    fail(os.str());
  }
  projectors_.reserve(states_.size());
  for (const auto& rho : states_) {
    projectors_.push_back(matop::support_projector(rho.hermitian(), tol));
  }
}

HermitianMatrix ExclusionEnsemble::projector_sum() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& pi : projectors_) sum += pi.matrix();
  return HermitianMatrix(sum);
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

SubsetFamily SubsetFamily::make(int n, int k) {
  if (n < 1 || k < 1 || k > n) fail("subset family requires 1 <= k <= n");
  SubsetFamily family;
  family.n = n;
  family.k = k;
  std::vector<int> current(k);
  std::iota(current.begin(), current.end(), 0);
  while (true) {
    family.subsets.push_back(current);
    int i = k - 1;
    while (i >= 0 && current[i] == n - k + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  family.member_index.assign(n, {});
  for (int l = 0; l < static_cast<int>(family.subsets.size()); ++l) {
    for (int x : family.subsets[l]) family.member_index[x].push_back(l);
  }
  return family;
}

ExclusionTable exclusion_table(const Povm& p, const ExclusionEnsemble& e, const Tolerance& tol) {
  matop::check_tolerance(tol);
  if (p.dim() != e.dim()) {
    std::ostringstream os;
    os << "POVM dimension " << p.dim() << " does not match ensemble dimension " << e.dim();
    fail(os.str());
  }
  ExclusionTable table;
  table.excluded.resize(p.size());
  table.outcome_weight.assign(p.size(), 0.0);
  table.zero_probability.assign(p.size(), false);
  for (int a = 0; a < p.size(); ++a) {
    for (int x = 0; x < e.size(); ++x) {
      const double value = overlap(p.effects()[a], e.states()[x]);
      table.outcome_weight[a] += value;
      if (value <= tol.trace_zero) table.excluded[a].push_back(x);
    }
    table.zero_probability[a] = table.outcome_weight[a] <= tol.trace_zero;
  }
  return table;
}

namespace {

double max_residual_over_excluded(const Povm& p, const ExclusionEnsemble& e,
                                  const ExclusionTable& table) {
  double worst = 0.0;
  for (int a = 0; a < p.size(); ++a) {
    for (int x : table.excluded[a]) {
      worst = std::max(worst, overlap(p.effects()[a], e.states()[x]));
    }
  }
  return worst;
}

std::vector<std::pair<Label, std::vector<int>>> make_witness(const Povm& p,
                                                             const ExclusionTable& table) {
  std::vector<std::pair<Label, std::vector<int>>> witness;
  witness.reserve(p.size());
  for (int a = 0; a < p.size(); ++a) witness.emplace_back(p.labels()[a], table.excluded[a]);
  return witness;
}

}  // namespace

ExclusionVerdict check_k_exclusion(const Povm& p, const ExclusionEnsemble& e, int k,
                                   ExclusionMode mode, const Tolerance& tol) {
  const int n = e.size();
  if (k < 1 || k > n - 1) fail("k-exclusion requires 1 <= k <= N-1");
  const ExclusionTable table = exclusion_table(p, e, tol);

  ExclusionVerdict verdict;
  verdict.mode = mode;
  verdict.max_excluded_residual = max_residual_over_excluded(p, e, table);

  const bool subset_labeled = std::any_of(
      p.labels().begin(), p.labels().end(),
      [](const Label& l) { return std::holds_alternative<std::vector<int>>(l); });

  if (mode == ExclusionMode::weak) {
    for (int a = 0; a < p.size(); ++a) {
      if (table.zero_probability[a]) continue;
      if (static_cast<int>(table.excluded[a].size()) < k) {
        verdict.feasible = false;
        std::ostringstream os;
        os << "outcome " << label_to_string(p.labels()[a]) << " occurs but excludes only "
           << table.excluded[a].size() << " of the required " << k << " states";
        verdict.reason = os.str();
        return verdict;
      }
    }
    verdict.feasible = true;
    verdict.witness = make_witness(p, table);
    return verdict;
  }

  // Strong mode.
  if (subset_labeled) {
    // Labels must be exactly the (N, k) subset family, one effect per subset.
    const SubsetFamily family = SubsetFamily::make(n, k);
    if (p.size() != static_cast<int>(family.subsets.size())) {
      fail("strong-mode POVM must carry one effect per k-subset, expected " +
           std::to_string(family.subsets.size()) + " got " + std::to_string(p.size()));
    }
    std::set<std::vector<int>> expected(family.subsets.begin(), family.subsets.end());
    for (const auto& label : p.labels()) {
      const auto* subset = std::get_if<std::vector<int>>(&label);
      if (subset == nullptr || expected.erase(*subset) == 0) {
        fail("strong-mode POVM label " + label_to_string(label) +
             " does not belong to the (N, k) subset family");
      }
    }
    for (int a = 0; a < p.size(); ++a) {
      const auto& subset = std::get<std::vector<int>>(p.labels()[a]);
      if (table.zero_probability[a]) {
        verdict.reason = "outcome " + label_to_string(p.labels()[a]) + " has zero probability";
        return verdict;
      }
      if (!is_sorted_subset(subset, table.excluded[a])) {
        verdict.reason = "outcome " + label_to_string(p.labels()[a]) +
                         " does not exclude every state in its own subset";
        return verdict;
      }
    }
    verdict.feasible = true;
    verdict.witness = make_witness(p, table);
    return verdict;
  }

  // Generic (index-labeled) strong mode: no outcome may be silent, every
  // outcome must exclude a full k-subset, and every k-subset must be
  // excludable by some outcome.
  for (int a = 0; a < p.size(); ++a) {
    if (table.zero_probability[a]) {
      verdict.reason = "outcome " + label_to_string(p.labels()[a]) + " has zero probability";
      return verdict;
    }
    if (static_cast<int>(table.excluded[a].size()) < k) {
      verdict.reason = "outcome " + label_to_string(p.labels()[a]) + " excludes fewer than k states";
      return verdict;
    }
  }
  const SubsetFamily family = SubsetFamily::make(n, k);
  for (const auto& subset : family.subsets) {
    bool covered = false;
    for (int a = 0; a < p.size() && !covered; ++a) {
      covered = is_sorted_subset(subset, table.excluded[a]);
    }
    if (!covered) {
      std::ostringstream os;
      os << "no outcome excludes the subset {";
      for (size_t i = 0; i < subset.size(); ++i) os << (i ? "," : "") << subset[i];
      os << "}";
      verdict.reason = os.str();
      return verdict;
    }
  }
  verdict.feasible = true;
  verdict.witness = make_witness(p, table);
  return verdict;
}

Lemma1Verdict lemma1_feasible(const ExclusionEnsemble& e, int k, const Tolerance& tol) {
  matop::check_tolerance(tol);
  const int n = e.size();
  if (k < 1 || k > n - 1) fail("k-exclusion requires 1 <= k <= N-1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(e.projector_sum().matrix(),
                                                      Eigen::EigenvaluesOnly);
  Lemma1Verdict verdict;
  verdict.max_eigenvalue = solver.eigenvalues()(e.dim() - 1);
  verdict.bound = static_cast<double>(n - k);
  verdict.feasible = verdict.max_eigenvalue <= verdict.bound + tol.psd_slack;
  return verdict;
}

int lemma1_max_k(const ExclusionEnsemble& e, const Tolerance& tol) {
  matop::check_tolerance(tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(e.projector_sum().matrix(),
                                                      Eigen::EigenvaluesOnly);
  const double lambda_max = solver.eigenvalues()(e.dim() - 1);
  const double k_real = static_cast<double>(e.size()) - lambda_max + tol.psd_slack;
  const int k = static_cast<int>(std::floor(k_real));
  return std::clamp(k, 0, e.size() - 1);
}

double d_max(const DensityMatrix& psi, const DensityMatrix& sigma, const Tolerance& tol) {
  matop::check_tolerance(tol);
  if (psi.dim() != sigma.dim()) fail("d_max requires states of equal dimension");
  const auto eig = matop::eig_hermitian(sigma.hermitian());
  const RealVector& values = eig.spectrum.eigenvalues;
  const double cutoff = tol.eig_zero * std::max(1.0, values(0));

  int rank = 0;
  while (rank < values.size() && values(rank) > cutoff) ++rank;
  const auto basis = eig.eigenvectors.leftCols(rank);

  // Support containment: any weight of psi outside supp(sigma) makes every
  // lambda infeasible.
  const ComplexMatrix proj = basis * basis.adjoint();
  const double leak = 1.0 - (proj * psi.matrix()).trace().real();
  if (leak > tol.trace_zero) return std::numeric_limits<double>::infinity();

  RealVector inv_sqrt(rank);
  for (int i = 0; i < rank; ++i) inv_sqrt(i) = 1.0 / std::sqrt(values(i));
  const ComplexMatrix sigma_inv_sqrt = basis * inv_sqrt.asDiagonal() * basis.adjoint();
  const ComplexMatrix x = sigma_inv_sqrt * psi.matrix() * sigma_inv_sqrt;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (x + x.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  const double lambda = solver.eigenvalues()(psi.dim() - 1);
  return std::log2(std::max(1.0, lambda));
}

CorollaryBound corollary1_bounds(const ExclusionEnsemble& e, const Tolerance& tol) {
  matop::check_tolerance(tol);
  const HermitianMatrix sum = e.projector_sum();
  const double alpha = sum.trace();
  const int d = e.dim();
  const int n = e.size();

  DensityMatrix omega(HermitianMatrix(sum.matrix() / alpha), tol);
  DensityMatrix maximally_mixed(
      HermitianMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d)), tol);
  const double dmax = d_max(omega, maximally_mixed, tol);

  const double k_first_real =
      static_cast<double>(n) - std::exp2(dmax) * alpha / static_cast<double>(d) + tol.psd_slack;
  CorollaryBound bound{alpha, std::move(omega), dmax, 0, 0};
  bound.k_first = std::max(0, static_cast<int>(std::floor(k_first_real)));
  bound.k_second = std::max(0, static_cast<int>((static_cast<long long>(n) * (d - 1)) / d));
  return bound;
}

ExclusionEnsemble reformulate_k_to_1(const ExclusionEnsemble& e, int k, long long cap) {
  const int n = e.size();
  if (k < 1 || k > n - 1) fail("k-exclusion requires 1 <= k <= N-1");
  const long long count = binomial(n, k);
  if (count > cap) {
    std::ostringstream os;
    os << "reformulation would produce C(" << n << "," << k << ") = " << count
       << " states, above the cap of " << cap;
    fail(os.str());
  }
  const SubsetFamily family = SubsetFamily::make(n, k);
  std::vector<DensityMatrix> states;
  states.reserve(family.subsets.size());
  for (const auto& subset : family.subsets) {
    ComplexMatrix r = ComplexMatrix::Zero(e.dim(), e.dim());
    for (int y : subset) r += e.states()[y].matrix();
    states.emplace_back(HermitianMatrix(r / static_cast<double>(k)));
  }
  return ExclusionEnsemble(std::move(states));
}

Povm saturation_povm(const ExclusionEnsemble& e, int k, const Tolerance& tol) {
  matop::check_tolerance(tol);
  const int n = e.size();
  if (k < 1 || k > n - 1) fail("k-exclusion requires 1 <= k <= N-1");
  const HermitianMatrix sum = e.projector_sum();
  const double residual =
      (sum.matrix() -
       static_cast<double>(n - k) * ComplexMatrix::Identity(e.dim(), e.dim()))
          .norm();
  if (residual > quantum::kCompletenessTol) {
    std::ostringstream os;
    os << "saturation POVM requires sum_x Pi_x = (N-k) I; residual " << residual;
    fail(os.str());
  }
  std::vector<HermitianMatrix> effects;
  std::vector<Label> labels;
  effects.reserve(n);
  for (int x = 0; x < n; ++x) {
    effects.emplace_back(
        (ComplexMatrix::Identity(e.dim(), e.dim()) - e.projectors()[x].matrix()) /
        static_cast<double>(k));
    labels.emplace_back(x);
  }
  return Povm(e.dim(), std::move(effects), std::move(labels));
}

ExclusionEnsemble subset_projector_ensemble(int d, int r) {
  if (d < 2) fail("subset projector ensemble requires dimension >= 2");
  if (r < 1 || r > d - 1) fail("subset projector ensemble requires 1 <= r <= d-1");
  const SubsetFamily family = SubsetFamily::make(d, r);
  std::vector<DensityMatrix> states;
  states.reserve(family.subsets.size());
  for (const auto& subset : family.subsets) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int i : subset) m(i, i) = 1.0 / static_cast<double>(r);
    states.emplace_back(HermitianMatrix(m));
  }
  return ExclusionEnsemble(std::move(states));
}

}  // namespace choiexcl::exclusion
