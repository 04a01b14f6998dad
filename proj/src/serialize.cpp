#include "choiexcl/serialize.hpp"

#include <cstdlib>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include "choiexcl/version.hpp"

namespace choiexcl::serialize {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw SpecError(msg); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) fail("complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

std::vector<ComplexMatrix> matrices_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail("expected a nonempty array of matrices");
  std::vector<ComplexMatrix> out;
  out.reserve(j.size());
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail("matrix must be a nonempty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) fail("matrix rows must be nonempty arrays");
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) {
      fail("matrix rows must have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

ChannelSpec channel_from_json(const json& j) {
  if (!j.is_object()) fail("channel spec must be an object");
  if (!j.contains("d")) fail("channel spec needs field 'd'");
  ChannelSpec spec;
  spec.d = j.at("d").get<int>();
  const std::string kind = j.value("kind", "builtin");

  if (kind == "kraus") {
    spec.kind = densegame::ChannelKind::custom;
    spec.object = quantum::KrausChannel(matrices_from_json(j.at("kraus")));
  } else if (kind == "choi") {
    spec.kind = densegame::ChannelKind::custom;
    spec.object = quantum::ChoiState(spec.d, matop::HermitianMatrix(matrix_from_json(j.at("choi"))));
  } else if (kind == "builtin") {
    const auto& b = j.at("builtin");
    const std::string name = b.at("name").get<std::string>();
    if (name == "dephasing") {
      spec.kind = densegame::ChannelKind::dephasing;
      spec.param = b.at("p").get<double>();
      spec.object = quantum::make_dephasing(spec.d, spec.param);
    } else if (name == "depolarizing") {
      spec.kind = densegame::ChannelKind::depolarizing;
      spec.param = b.at("p").get<double>();
      spec.object = quantum::make_depolarizing(spec.d, spec.param);
    } else if (name == "unitary") {
      spec.kind = densegame::ChannelKind::unitary;
      spec.object = quantum::make_unitary_channel(matrix_from_json(b.at("unitary")));
    } else {
      fail("unknown builtin channel '" + name + "'");
    }
  } else {
    fail("unknown channel kind '" + kind + "'");
  }

  const int channel_dim = std::holds_alternative<quantum::KrausChannel>(spec.object)
                              ? std::get<quantum::KrausChannel>(spec.object).dim_in()
                              : std::get<quantum::ChoiState>(spec.object).local_dim();
  if (channel_dim != spec.d) fail("channel dimension does not match the declared 'd'");
  return spec;
}

json channel_to_json(const ChannelSpec& spec) {
  json j;
  j["d"] = spec.d;
  switch (spec.kind) {
    case densegame::ChannelKind::dephasing:
    case densegame::ChannelKind::depolarizing:
      j["kind"] = "builtin";
      j["builtin"] = {{"name", channel_kind_name(spec.kind)}, {"p", spec.param}};
      return j;
    case densegame::ChannelKind::unitary:
      j["kind"] = "builtin";
      j["builtin"] = {
          {"name", "unitary"},
          {"unitary", matrix_to_json(std::get<quantum::KrausChannel>(spec.object).kraus_ops().front())}};
      return j;
    case densegame::ChannelKind::custom:
      break;
  }
  if (std::holds_alternative<quantum::KrausChannel>(spec.object)) {
    j["kind"] = "kraus";
    json ops = json::array();
    for (const auto& k : std::get<quantum::KrausChannel>(spec.object).kraus_ops()) {
      ops.push_back(matrix_to_json(k));
    }
    j["kraus"] = std::move(ops);
  } else {
    j["kind"] = "choi";
    j["choi"] = matrix_to_json(std::get<quantum::ChoiState>(spec.object).matrix());
  }
  return j;
}

exclusion::ExclusionEnsemble ensemble_from_json(const json& j) {
  if (!j.is_object()) fail("ensemble spec must be an object");
  const int dim = j.at("dim").get<int>();
  std::vector<quantum::DensityMatrix> states;
  for (const auto& m : j.at("states")) {
    states.emplace_back(matop::HermitianMatrix(matrix_from_json(m)));
    if (states.back().dim() != dim) fail("ensemble state dimension does not match 'dim'");
  }
  std::vector<double> priors;
  if (j.contains("priors")) priors = j.at("priors").get<std::vector<double>>();
  return exclusion::ExclusionEnsemble(std::move(states), std::move(priors));
}

json ensemble_to_json(const exclusion::ExclusionEnsemble& e) {
  json j;
  j["dim"] = e.dim();
  json states = json::array();
  for (const auto& rho : e.states()) states.push_back(matrix_to_json(rho.matrix()));
  j["states"] = std::move(states);
  j["priors"] = e.priors();
  return j;
}

json label_to_json(const exclusion::Label& label) {
  if (std::holds_alternative<int>(label)) return std::get<int>(label);
  return json(std::get<std::vector<int>>(label));
}

exclusion::Povm povm_from_json(const json& j) {
  if (!j.is_object()) fail("POVM spec must be an object");
  const int dim = j.at("dim").get<int>();
  std::vector<matop::HermitianMatrix> effects;
  for (const auto& m : j.at("effects")) effects.emplace_back(matrix_from_json(m));
  std::vector<exclusion::Label> labels;
  if (j.contains("labels")) {
    for (const auto& l : j.at("labels")) {
      if (l.is_number_integer()) {
        labels.emplace_back(l.get<int>());
      } else if (l.is_array()) {
        labels.emplace_back(l.get<std::vector<int>>());
      } else {
        fail("POVM labels must be integers or integer arrays");
      }
    }
  }
  return exclusion::Povm(dim, std::move(effects), std::move(labels));
}

json povm_to_json(const exclusion::Povm& p) {
  json j;
  j["dim"] = p.dim();
  json effects = json::array();
  for (const auto& t : p.effects()) effects.push_back(matrix_to_json(t.matrix()));
  j["effects"] = std::move(effects);
  json labels = json::array();
  for (const auto& l : p.labels()) labels.push_back(label_to_json(l));
  j["labels"] = std::move(labels);
  return j;
}

GameSpec game_from_json(const json& j) {
  if (!j.is_object()) fail("game spec must be an object");
  densegame::GameConfig cfg;
  cfg.d = j.at("d").get<int>();

  const ChannelSpec channel = channel_from_json(j.at("channel"));
  if (channel.d != cfg.d) fail("game channel dimension does not match 'd'");
  cfg.channel = channel.object;
  cfg.channel_kind = channel.kind;
  cfg.channel_param = channel.param;

  const json encodings = j.value("encodings", json("weyl"));
  if (encodings.is_string()) {
    if (encodings.get<std::string>() != "weyl") fail("unknown encoding preset");
    cfg.encodings = densegame::weyl_encodings(cfg.d);
  } else if (encodings.is_array()) {
    for (const auto& enc : encodings) {
      const std::string kind = enc.value("kind", "unitary");
      if (kind == "unitary") {
        cfg.encodings.push_back(quantum::make_unitary_channel(matrix_from_json(enc.at("matrix"))));
      } else if (kind == "unital") {
        cfg.encodings.emplace_back(matrices_from_json(enc.at("kraus")));
      } else {
        fail("unknown encoding kind '" + kind + "'");
      }
    }
  } else {
    fail("'encodings' must be \"weyl\" or an array");
  }

  if (j.contains("priors")) cfg.priors = j.at("priors").get<std::vector<double>>();
  cfg.trials = j.value("trials", static_cast<long long>(10000));
  cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));

  const json povm = j.value("povm", json("bell"));
  exclusion::Povm parsed_povm =
      povm.is_string() && povm.get<std::string>() == "bell" ? densegame::bell_povm(cfg.d)
                                                            : povm_from_json(povm);

  std::string decoder = j.value("decoder", "");
  if (decoder.empty()) {
    decoder = (cfg.channel_kind == densegame::ChannelKind::dephasing && encodings.is_string() &&
               cfg.channel_param < 1.0)
                  ? "dephasing"
                  : "auto";
  }
  if (decoder != "auto" && decoder != "dephasing" && decoder != "discrimination") {
    fail("unknown decoder '" + decoder + "'");
  }
  return GameSpec{std::move(cfg), std::move(parsed_povm), std::move(decoder)};
}

json manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["config"] = m.config_path;
  if (m.seed.has_value()) {
    j["seed"] = *m.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["tool_version"] = m.tool_version;
  j["tolerances"] = {{"eig_zero", m.tolerances.eig_zero},
                     {"psd_slack", m.tolerances.psd_slack},
                     {"trace_zero", m.tolerances.trace_zero}};
  j["timestamp"] = m.timestamp;
  return j;
}

std::string current_timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string config_hash(const json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json game_report_to_json(const densegame::GameReport& report, const RunManifest& manifest,
                         const std::string& hash, int d, double p, int n) {
  json j;
  j["manifest"] = manifest_to_json(manifest);
  j["config_hash"] = hash;
  j["d"] = d;
  if (p >= 0.0) {
    j["p"] = p;
  } else {
    j["p"] = nullptr;
  }
  j["n"] = n;
  j["choi_rank"] = report.choi_rank_used;
  j["theorem1_k"] = report.theorem1_k;
  j["achieved_k"] = report.achieved_k;
  j["failures"] = report.failures;
  j["trials"] = report.trials_run;
  j["seed"] = report.seed;
  j["max_excluded_trace"] = report.max_excluded_trace;
  j["per_outcome_excluded"] = report.per_outcome_excluded;
  return j;
}

std::string game_report_to_csv(const densegame::GameReport& report, const std::string& hash,
                               int d, double p, int n) {
  std::ostringstream os;
  os << hash << "," << d << ",";
  if (p >= 0.0) os << p;
  os << "," << n << "," << report.choi_rank_used << "," << report.theorem1_k << ","
     << report.achieved_k << "," << report.failures << "," << report.trials_run << ","
     << report.seed << "\n";
  return os.str();
}

}  // namespace choiexcl::serialize
