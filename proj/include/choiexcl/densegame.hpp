#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "choiexcl/exclusion.hpp"
#include "choiexcl/quantum.hpp"

namespace choiexcl::densegame {

using matop::Tolerance;
using quantum::ChoiState;
using quantum::KrausChannel;

/// What the channel was built from; decoder construction needs to know.
enum class ChannelKind { dephasing, depolarizing, unitary, custom };

std::string channel_kind_name(ChannelKind kind);

/// Setup of the entanglement-assisted exclusion game: a shared maximally
/// entangled pair of local dimension d, one encoding per bit-string applied
/// on the A side, then the channel on the A side. Encodings must be unital
/// (unitary encodings are the one-operator case).
struct GameConfig {
  int d = 2;
  std::variant<std::monostate, KrausChannel, ChoiState> channel;
  ChannelKind channel_kind = ChannelKind::custom;
  double channel_param = -1.0;  ///< builtin noise parameter p when known, else -1
  std::vector<KrausChannel> encodings;
  std::vector<double> priors;  ///< empty = uniform
  long long trials = 10000;
  std::uint64_t seed = 0;
};

/// Validates dimensions and unitality of the encodings; returns the Choi
/// state of the configured channel.
ChoiState validate_config(const GameConfig& cfg, const Tolerance& tol = {});

/// Per-outcome sets of encoding labels the decoder declares excluded.
using DecoderTable = std::vector<std::vector<int>>;

struct GameReport {
  int theorem1_k = 0;
  int achieved_k = 0;
  long long failures = 0;
  long long trials_run = 0;
  DecoderTable per_outcome_excluded;
  int choi_rank_used = 0;
  std::uint64_t seed = 0;
  double max_excluded_trace = 0.0;  ///< analytic certificate over decoder pairs
};

/// The N post-channel states rho^{x|N} = (I (x) E_x^t)(J^N), one per encoding.
exclusion::ExclusionEnsemble build_game_states(const GameConfig& cfg, const Tolerance& tol = {});

/// k <= N (d^2 - r_c) / d^2, floored.
int theorem1_bound(int n, int d, int choi_rank);

/// The d^2 Weyl unitary channels in lexicographic (a, b) order, label a*d+b.
std::vector<KrausChannel> weyl_encodings(int d);

/// Rank-one projectors onto the d^2 Bell states, labels a*d+b.
exclusion::Povm bell_povm(int d);

/// Decoder derived numerically from the exclusion table of the Bell
/// measurement on the dephasing game: outcome (r, s) excludes the d^2 - d
/// encodings whose post-channel support misses the outcome. Requires a
/// dephasing channel with 0 <= p < 1 and the full Weyl encoding set.
DecoderTable decoder_table(const GameConfig& cfg, const Tolerance& tol = {});

/// Generic numeric decoder: each outcome excludes every state with
/// tr[T_a rho_x] <= trace_zero. No size or structure validation.
DecoderTable exclusion_decoder(const exclusion::Povm& povm, const exclusion::ExclusionEnsemble& e,
                               const Tolerance& tol = {});

/// Monte-Carlo run: per trial, sample x from the priors, sample a Bell
/// outcome from the Born probabilities, emit decoder(a); a failure is a trial
/// whose decoder output contains the encoded x. Trials use per-index derived
/// seeds, so any thread partition reproduces the serial transcript.
GameReport run_game(const GameConfig& cfg, const exclusion::Povm& povm,
                    const DecoderTable& decoder, int threads = 1, const Tolerance& tol = {});

struct UnitalCheckVerdict {
  bool holds = false;
  int choi_rank = 0;
  int theorem1_k = 0;
  int lemma1_k = 0;
  std::vector<int> state_ranks;
};

/// For unital encodings every game state keeps rank >= r_c, so the
/// feasibility bound from the projector sum can never beat the Choi-rank bound.
UnitalCheckVerdict unital_extension_check(const GameConfig& cfg, const Tolerance& tol = {});

}  // namespace choiexcl::densegame
