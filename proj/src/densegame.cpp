#include "choiexcl/densegame.hpp"

#include "choiexcl/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace choiexcl::densegame {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Stream splitting: each trial owns a generator derived from (seed, trial),
/// so chunked parallel execution reproduces the serial transcript.
std::mt19937_64 trial_rng(std::uint64_t seed, long long trial) {
  std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(trial + 1));
  const std::uint64_t a = splitmix64(state);
  const std::uint64_t b = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

int sample_cumulative(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const int idx = static_cast<int>(it - cumulative.begin());
  return std::min(idx, static_cast<int>(cumulative.size()) - 1);
}

}  // namespace

std::string channel_kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::dephasing: return "dephasing";
    case ChannelKind::depolarizing: return "depolarizing";
    case ChannelKind::unitary: return "unitary";
    case ChannelKind::custom: return "custom";
  }
  return "custom";
}

ChoiState validate_config(const GameConfig& cfg, const Tolerance& tol) {
  matop::check_tolerance(tol);
  if (cfg.d < 2) fail("game requires local dimension >= 2");
  if (cfg.encodings.size() < 2) fail("game requires at least two encodings");
  if (cfg.trials < 0) fail("trial count must be nonnegative");

  for (size_t x = 0; x < cfg.encodings.size(); ++x) {
    const auto& enc = cfg.encodings[x];
    if (enc.dim_in() != cfg.d || enc.dim_out() != cfg.d) {
      fail("encoding " + std::to_string(x) + " does not act on dimension " + std::to_string(cfg.d));
    }
    if (enc.kraus_count() == 1) {
      const ComplexMatrix& u = enc.kraus_ops().front();
      const double residual =
          (u.adjoint() * u - ComplexMatrix::Identity(cfg.d, cfg.d)).norm();
      if (residual > quantum::kUnitaryTol) {
        std::ostringstream os;
        os << "encoding " << x << " is not unitary: residual " << residual;
        fail(os.str());
      }
    } else if (!enc.is_unital()) {
      std::ostringstream os;
      os << "encoding " << x << " is not unital: residual " << enc.unitality_residual();
      fail(os.str());
    }
  }
  if (!cfg.priors.empty()) {
    if (cfg.priors.size() != cfg.encodings.size()) fail("priors must match encodings one-to-one");
    double sum = 0.0;
    for (double p : cfg.priors) {
      if (p < 0.0) fail("priors must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) fail("priors must sum to 1");
  }

  if (std::holds_alternative<std::monostate>(cfg.channel)) fail("game config has no channel");
  ChoiState j = std::holds_alternative<KrausChannel>(cfg.channel)
                    ? quantum::kraus_to_choi(std::get<KrausChannel>(cfg.channel))
                    : std::get<ChoiState>(cfg.channel);
  if (j.local_dim() != cfg.d) {
    fail("channel local dimension does not match the game dimension");
  }
  const auto verdict = quantum::is_cptp(j, tol);
  if (!verdict.cptp) {
    std::ostringstream os;
    os << "game channel is not CPTP: min eigenvalue " << verdict.min_eigenvalue
       << ", marginal residual " << verdict.marginal_residual;
    fail(os.str());
  }
  return j;
}

exclusion::ExclusionEnsemble build_game_states(const GameConfig& cfg, const Tolerance& tol) {
  const ChoiState j = validate_config(cfg, tol);
  const int d = cfg.d;
  const ComplexMatrix eye = ComplexMatrix::Identity(d, d);

  std::vector<quantum::DensityMatrix> states;
  states.reserve(cfg.encodings.size());
  for (const auto& enc : cfg.encodings) {
    // rho^{x|N} = (I (x) E_x^t)(J): encoding before the channel on the A side
    // ricochets onto the B side of the Choi state.
    ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
    for (const auto& k : enc.kraus_ops()) {
      const ComplexMatrix lifted = matop::tensor(eye, k.transpose());
      out += lifted * j.matrix() * lifted.adjoint();
    }
    states.emplace_back(matop::HermitianMatrix(0.5 * (out + out.adjoint())), tol);
  }
  return exclusion::ExclusionEnsemble(std::move(states), cfg.priors, tol);
}

int theorem1_bound(int n, int d, int choi_rank) {
  if (n < 1 || d < 2) fail("theorem1_bound requires N >= 1, d >= 2");
  const long long d2 = static_cast<long long>(d) * d;
  if (choi_rank < 1 || choi_rank > d2) fail("Choi rank must lie in [1, d^2]");
  return static_cast<int>((static_cast<long long>(n) * (d2 - choi_rank)) / d2);
}

std::vector<KrausChannel> weyl_encodings(int d) {
  if (d < 2) fail("Weyl encodings require dimension >= 2");
  std::vector<KrausChannel> encodings;
  encodings.reserve(static_cast<size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) encodings.push_back(quantum::make_unitary_channel(quantum::weyl({a, b, d})));
  return encodings;
}

exclusion::Povm bell_povm(int d) {
  if (d < 2) fail("Bell POVM requires dimension >= 2");
  std::vector<matop::HermitianMatrix> effects;
  std::vector<exclusion::Label> labels;
  effects.reserve(static_cast<size_t>(d) * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const ComplexVector v = quantum::bell_state(d, a, b).amplitudes();
      effects.emplace_back(ComplexMatrix(v * v.adjoint()));
      labels.emplace_back(a * d + b);
    }
  }
  return exclusion::Povm(d * d, std::move(effects), std::move(labels));
}

DecoderTable exclusion_decoder(const exclusion::Povm& povm, const exclusion::ExclusionEnsemble& e,
                               const Tolerance& tol) {
  return exclusion::exclusion_table(povm, e, tol).excluded;
}

DecoderTable decoder_table(const GameConfig& cfg, const Tolerance& tol) {
  if (cfg.channel_kind != ChannelKind::dephasing) {
    fail("decoder_table requires a dephasing channel, got " + channel_kind_name(cfg.channel_kind));
  }
  if (!(cfg.channel_param >= 0.0 && cfg.channel_param < 1.0)) {
    fail("decoder_table requires dephasing parameter p in [0, 1)");
  }
  const int d = cfg.d;
  if (static_cast<int>(cfg.encodings.size()) != d * d) {
    fail("decoder_table requires the full set of d^2 Weyl encodings");
  }
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const auto& enc = cfg.encodings[a * d + b];
      if (enc.kraus_count() != 1 ||
          (enc.kraus_ops().front() - quantum::weyl({a, b, d})).cwiseAbs().maxCoeff() > 1e-12) {
        fail("decoder_table requires Weyl encodings in lexicographic order");
      }
    }
  }

  const auto ensemble = build_game_states(cfg, tol);
  DecoderTable table = exclusion_decoder(bell_povm(d), ensemble, tol);

  // The dephasing structure pins the table: d^2 - d exclusions per outcome,
  // identical across the phase index s of the outcome (r, s).
  for (int r = 0; r < d; ++r) {
    for (int s = 0; s < d; ++s) {
      const auto& row = table[r * d + s];
      if (static_cast<int>(row.size()) != d * d - d) {
        std::ostringstream os;
        os << "outcome (" << r << "," << s << ") excludes " << row.size() << " labels, expected "
           << d * d - d;
        fail(os.str());
      }
      if (row != table[r * d]) {
        std::ostringstream os;
        os << "outcome (" << r << "," << s << ") disagrees with (" << r << ",0); "
           << "excluded sets must depend only on the shift index";
        fail(os.str());
      }
    }
  }
  return table;
}

GameReport run_game(const GameConfig& cfg, const exclusion::Povm& povm,
                    const DecoderTable& decoder, int threads, const Tolerance& tol) {
  const ChoiState j = validate_config(cfg, tol);
  const auto povm_verdict = exclusion::verify_povm(povm, tol);
  if (!povm_verdict.valid) {
    std::ostringstream os;
    os << "invalid POVM: min effect eigenvalue " << povm_verdict.min_effect_eigenvalue
       << ", completeness residual " << povm_verdict.completeness_residual;
    fail(os.str());
  }
  if (static_cast<int>(decoder.size()) != povm.size()) {
    std::ostringstream os;
    os << "decoder gap: " << decoder.size() << " entries for " << povm.size() << " outcomes";
    fail(os.str());
  }

  const auto ensemble = build_game_states(cfg, tol);
  const int n = ensemble.size();
  const int outcomes = povm.size();

  GameReport report;
  report.seed = cfg.seed;
  report.choi_rank_used = quantum::choi_rank(j, tol);
  report.theorem1_k = theorem1_bound(n, cfg.d, report.choi_rank_used);
  report.per_outcome_excluded = decoder;

  std::vector<std::vector<int>> sorted_decoder = decoder;
  int achieved = outcomes > 0 ? n : 0;
  for (auto& row : sorted_decoder) {
    std::sort(row.begin(), row.end());
    achieved = std::min(achieved, static_cast<int>(row.size()));
  }
  report.achieved_k = achieved;

  // Born table q[x][a] = tr[T_a rho_x], and the analytic certificate over the
  // decoder's excluded pairs.
  std::vector<std::vector<double>> born(n, std::vector<double>(outcomes, 0.0));
  double certificate = 0.0;
  for (int x = 0; x < n; ++x) {
    double total = 0.0;
    for (int a = 0; a < outcomes; ++a) {
      const double value =
          (povm.effects()[a].matrix() * ensemble.states()[x].matrix()).trace().real();
      born[x][a] = std::max(0.0, value);
      total += born[x][a];
      if (std::binary_search(sorted_decoder[a].begin(), sorted_decoder[a].end(), x)) {
        certificate = std::max(certificate, value);
      }
    }
    if (std::abs(total - 1.0) > quantum::kCompletenessTol) {
      std::ostringstream os;
      os << "Born probabilities for state " << x << " sum to " << total;
      fail(os.str());
    }
    for (int a = 0; a < outcomes; ++a) born[x][a] /= total;
  }
  report.max_excluded_trace = certificate;

  std::vector<double> prior_cdf(n, 0.0);
  {
    double acc = 0.0;
    for (int x = 0; x < n; ++x) {
      acc += ensemble.priors()[x];
      prior_cdf[x] = acc;
    }
    prior_cdf[n - 1] = 1.0;
  }
  std::vector<std::vector<double>> born_cdf(n, std::vector<double>(outcomes, 0.0));
  for (int x = 0; x < n; ++x) {
    double acc = 0.0;
    for (int a = 0; a < outcomes; ++a) {
      acc += born[x][a];
      born_cdf[x][a] = acc;
    }
    born_cdf[x][outcomes - 1] = 1.0;
  }

  const auto run_range = [&](long long lo, long long hi) {
    long long range_failures = 0;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (long long t = lo; t < hi; ++t) {
      auto rng = trial_rng(cfg.seed, t);
      const int x = sample_cumulative(prior_cdf, uniform(rng));
      const int a = sample_cumulative(born_cdf[x], uniform(rng));
      if (std::binary_search(sorted_decoder[a].begin(), sorted_decoder[a].end(), x)) {
        ++range_failures;
      }
    }
    return range_failures;
  };

  const long long trials = cfg.trials;
  threads = std::max(1, threads);
  if (threads == 1 || trials < 2 * threads) {
    report.failures = run_range(0, trials);
  } else {
    std::vector<long long> partial(threads, 0);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long long chunk = (trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const long long lo = w * chunk;
      const long long hi = std::min(trials, lo + chunk);
      pool.emplace_back([&partial, &run_range, w, lo, hi] { partial[w] = run_range(lo, hi); });
    }
    for (auto& th : pool) th.join();
    for (long long f : partial) report.failures += f;
  }
  report.trials_run = trials;
  return report;
}

UnitalCheckVerdict unital_extension_check(const GameConfig& cfg, const Tolerance& tol) {
  const ChoiState j = validate_config(cfg, tol);
  const auto ensemble = build_game_states(cfg, tol);

  UnitalCheckVerdict verdict;
  verdict.choi_rank = quantum::choi_rank(j, tol);
  verdict.theorem1_k = theorem1_bound(ensemble.size(), cfg.d, verdict.choi_rank);
  verdict.lemma1_k = exclusion::lemma1_max_k(ensemble, tol);

  bool ranks_ok = true;
  verdict.state_ranks.reserve(ensemble.size());
  for (const auto& rho : ensemble.states()) {
    const auto spec = majorization::spectrum(rho, tol);
    const int rank = majorization::supp_count(spec.values, tol);
    verdict.state_ranks.push_back(rank);
    ranks_ok = ranks_ok && rank >= verdict.choi_rank;
  }
  verdict.holds = ranks_ok && verdict.lemma1_k <= verdict.theorem1_k;
  return verdict;
}

}  // namespace choiexcl::densegame
