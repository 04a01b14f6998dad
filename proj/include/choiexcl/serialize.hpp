#pragma once

#include <cstdint>
#include <stdexcept>
#include <optional>
#include <string>

#include <json.hpp>

#include "choiexcl/densegame.hpp"
#include "choiexcl/exclusion.hpp"
#include "choiexcl/matop.hpp"
#include "choiexcl/quantum.hpp"

namespace choiexcl::serialize {

using json = nlohmann::ordered_json;

/// Structural problem in an input file (missing field, wrong shape). Kept
/// distinct from std::invalid_argument so callers can exit-code input errors
/// separately from mathematical precondition failures.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Complex numbers serialize as [re, im]; matrices as row-major nested arrays.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

/// Parsed form of the channel spec file:
/// { "d": int, "kind": "kraus"|"choi"|"builtin", "kraus": [matrix...],
///   "choi": matrix, "builtin": {"name": ..., "p": real, "unitary": matrix} }.
struct ChannelSpec {
  int d = 2;
  densegame::ChannelKind kind = densegame::ChannelKind::custom;
  double param = -1.0;
  std::variant<std::monostate, quantum::KrausChannel, quantum::ChoiState> object;
};

ChannelSpec channel_from_json(const json& j);
json channel_to_json(const ChannelSpec& spec);

exclusion::ExclusionEnsemble ensemble_from_json(const json& j);
json ensemble_to_json(const exclusion::ExclusionEnsemble& e);

exclusion::Povm povm_from_json(const json& j);
json povm_to_json(const exclusion::Povm& p);

json label_to_json(const exclusion::Label& label);

/// Game config file:
/// { "d": int, "channel": <channel spec>, "encodings": "weyl" | [<encoding>...],
///   "priors": [real...]?, "trials": int?, "seed": int?,
///   "povm": "bell" | <povm spec>?, "decoder": "auto"|"dephasing"|"discrimination"? }
/// where <encoding> is {"kind": "unitary", "matrix": m} or
/// {"kind": "unital", "kraus": [m...]}.
struct GameSpec {
  densegame::GameConfig config;
  exclusion::Povm povm;
  std::string decoder = "auto";
};

GameSpec game_from_json(const json& j);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string tool_version;
  matop::Tolerance tolerances;
  std::string timestamp;
};

json manifest_to_json(const RunManifest& m);

/// UTC ISO-8601; honors SOURCE_DATE_EPOCH so reruns can be byte-identical.
std::string current_timestamp();

/// FNV-1a over a canonical dump, as a hex string.
std::string config_hash(const json& j);

json game_report_to_json(const densegame::GameReport& report, const RunManifest& manifest,
                         const std::string& hash, int d, double p, int n);
std::string game_report_to_csv(const densegame::GameReport& report, const std::string& hash,
                               int d, double p, int n);

}  // namespace choiexcl::serialize
