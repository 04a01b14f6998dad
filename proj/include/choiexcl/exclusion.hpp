#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "choiexcl/matop.hpp"
#include "choiexcl/quantum.hpp"

namespace choiexcl::exclusion {

using matop::HermitianMatrix;
using matop::Tolerance;
using quantum::DensityMatrix;

/// Outcome label: a plain index, or the subset of state indices the outcome
/// is declared to exclude (subset labels are kept sorted).
using Label = std::variant<int, std::vector<int>>;

std::string label_to_string(const Label& label);

/// Finite set of PSD effects summing to the identity.
class Povm {
 public:
  Povm(int dim, std::vector<HermitianMatrix> effects, std::vector<Label> labels = {});

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(effects_.size()); }
  const std::vector<HermitianMatrix>& effects() const { return effects_; }
  const std::vector<Label>& labels() const { return labels_; }

 private:
  int dim_;
  std::vector<HermitianMatrix> effects_;
  std::vector<Label> labels_;
};

struct PovmVerdict {
  bool valid = false;
  double min_effect_eigenvalue = 0.0;  ///< most negative eigenvalue over all effects
  double completeness_residual = 0.0;  ///< max |eigenvalue| of (sum T_a - I)
};

/// Labeled states {rho_x} with priors and cached support projectors. Priors
/// are carried for sampling only; the exclusion conditions are prior-free.
class ExclusionEnsemble {
 public:
  ExclusionEnsemble(std::vector<DensityMatrix> states, std::vector<double> priors = {},
                    const Tolerance& tol = {});

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<DensityMatrix>& states() const { return states_; }
  const std::vector<double>& priors() const { return priors_; }
  const std::vector<HermitianMatrix>& projectors() const { return projectors_; }

  /// Sum of the support projectors, the left-hand side of the feasibility test.
  HermitianMatrix projector_sum() const;

 private:
  int dim_;
  std::vector<DensityMatrix> states_;
  std::vector<double> priors_;
  std::vector<HermitianMatrix> projectors_;
};

/// All k-subsets of {0,...,n-1} in lexicographic order, plus for each x the
/// positions of the subsets containing it.
struct SubsetFamily {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> subsets;
  std::vector<std::vector<int>> member_index;

  static SubsetFamily make(int n, int k);
  long long size() const { return static_cast<long long>(subsets.size()); }
};

long long binomial(int n, int k);

enum class ExclusionMode { weak, strong };

struct ExclusionVerdict {
  bool feasible = false;
  ExclusionMode mode = ExclusionMode::weak;
  /// Per-outcome excluded state indices; present iff feasible.
  std::optional<std::vector<std::pair<Label, std::vector<int>>>> witness;
  /// Max tr[T_a rho_x] over the pairs claimed excluded.
  double max_excluded_residual = 0.0;
  std::string reason;
};

struct ExclusionTable {
  std::vector<std::vector<int>> excluded;   ///< per outcome, sorted state indices with tr <= trace_zero
  std::vector<double> outcome_weight;       ///< sum_x tr[T_a rho_x]
  std::vector<bool> zero_probability;       ///< outcome_weight <= trace_zero
};

struct Lemma1Verdict {
  bool feasible = false;
  double max_eigenvalue = 0.0;  ///< lambda_max of sum_x Pi_x
  double bound = 0.0;           ///< N - k
};

struct CorollaryBound {
  double alpha = 0.0;   ///< tr[sum_x Pi_x]
  DensityMatrix omega;  ///< sum_x Pi_x / alpha
  double dmax = 0.0;    ///< D_max(omega || I/d)
  int k_first = 0;
  int k_second = 0;
};

PovmVerdict verify_povm(const Povm& p, const Tolerance& tol = {});

/// Per-outcome excluded sets {x : tr[T_a rho_x] <= trace_zero}, plus the
/// zero-probability flags for the nonzero-outcome condition.
ExclusionTable exclusion_table(const Povm& p, const ExclusionEnsemble& e, const Tolerance& tol = {});

/// Conclusive k-state exclusion check. Weak: every outcome that can occur
/// excludes at least k states. Strong, with subset labels: the labels must be
/// exactly the k-subset family and each effect must exclude its own subset.
/// Strong, with plain labels: additionally to weak, every outcome must have
/// nonzero probability and every k-subset must be excludable by some outcome.
ExclusionVerdict check_k_exclusion(const Povm& p, const ExclusionEnsemble& e, int k,
                                   ExclusionMode mode, const Tolerance& tol = {});

/// Necessary condition sum_x Pi_x <= (N - k) I for conclusive k-exclusion.
Lemma1Verdict lemma1_feasible(const ExclusionEnsemble& e, int k, const Tolerance& tol = {});

/// Largest k passing the necessary condition, floored at 0.
int lemma1_max_k(const ExclusionEnsemble& e, const Tolerance& tol = {});

/// Max relative entropy D_max(psi || sigma) = log2 min{lambda >= 1 : psi <= lambda sigma},
/// clamped at lambda >= 1. Returns +infinity when supp(psi) leaks outside supp(sigma).
double d_max(const DensityMatrix& psi, const DensityMatrix& sigma, const Tolerance& tol = {});

/// k <= N - 2^{D_max(omega || I/d)} alpha / d <= N (d-1)/d.
CorollaryBound corollary1_bounds(const ExclusionEnsemble& e, const Tolerance& tol = {});

/// Recast k-exclusion as 1-exclusion: one state (sum_{y in Y} rho_y)/k per
/// k-subset Y, uniform priors, subset labels in lexicographic order.
ExclusionEnsemble reformulate_k_to_1(const ExclusionEnsemble& e, int k, long long cap = 10000);

/// The POVM {(I - Pi_x)/k}; requires the feasibility inequality to be
/// saturated, sum_x Pi_x = (N - k) I.
Povm saturation_povm(const ExclusionEnsemble& e, int k, const Tolerance& tol = {});

/// N = C(d, r) states rho_x = Pi_x / r, one per r-subset of the computational
/// basis, each maximally mixed on its support.
ExclusionEnsemble subset_projector_ensemble(int d, int r);

}  // namespace choiexcl::exclusion
