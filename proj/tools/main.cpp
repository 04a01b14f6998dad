// choiexcl: analyze channels through their Choi states, test exclusion
// feasibility, certify POVMs, and simulate the entanglement-assisted
// exclusion game.
//
// Exit codes: 0 success/feasible, 1 infeasible verdict, 2 input error,
// 3 mathematical-precondition failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "choiexcl/densegame.hpp"
#include "choiexcl/exclusion.hpp"
#include "choiexcl/majorization.hpp"
#include "choiexcl/quantum.hpp"
#include "choiexcl/serialize.hpp"
#include "choiexcl/version.hpp"

namespace {

namespace fs = std::filesystem;
using choiexcl::matop::Tolerance;
using json = choiexcl::serialize::json;
namespace serialize = choiexcl::serialize;
namespace quantum = choiexcl::quantum;
namespace exclusion = choiexcl::exclusion;
namespace densegame = choiexcl::densegame;

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;
constexpr int kExitPrecondition = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse '" + path + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

void emit(const json& report, const std::optional<std::string>& out_path) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (out_path) write_text(*out_path, text);
}

serialize::RunManifest make_manifest(const std::string& command, const std::string& config_path,
                                     std::optional<std::uint64_t> seed, const Tolerance& tol) {
  return serialize::RunManifest{command,           config_path,
                                seed,              choiexcl::kVersion,
                                tol,               serialize::current_timestamp()};
}

int trial_threads() {
  const char* env = std::getenv("CHOI_EXCL_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  const long value = std::strtol(env, nullptr, 10);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<int>(std::clamp<long>(value, 1, hw));
}

quantum::ChoiState spec_to_choi(const serialize::ChannelSpec& spec) {
  if (std::holds_alternative<quantum::KrausChannel>(spec.object)) {
    return quantum::kraus_to_choi(std::get<quantum::KrausChannel>(spec.object));
  }
  return std::get<quantum::ChoiState>(spec.object);
}

int cmd_analyze_channel(const std::string& path, const std::optional<std::string>& out_path,
                        const Tolerance& tol) {
  const serialize::ChannelSpec spec = serialize::channel_from_json(load_json(path));
  const quantum::ChoiState j = spec_to_choi(spec);
  const auto verdict = quantum::is_cptp(j, tol);

  json report;
  report["manifest"] = serialize::manifest_to_json(
      make_manifest("analyze-channel", path, std::nullopt, tol));
  report["d"] = j.local_dim();
  report["cptp"] = {{"valid", verdict.cptp},
                    {"min_eigenvalue", verdict.min_eigenvalue},
                    {"marginal_residual", verdict.marginal_residual}};
  if (verdict.cptp) {
    const int rank = quantum::choi_rank(j, tol);
    report["choi_rank"] = rank;
    report["min_kraus_count"] = quantum::choi_to_kraus(j, tol).kraus_count();
    json spectrum = json::array();
    const int d = j.local_dim();
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const auto v = quantum::bell_state(d, a, b).amplitudes();
        spectrum.push_back((v.adjoint() * j.matrix() * v)(0, 0).real());
      }
    }
    report["bell_spectrum"] = std::move(spectrum);
  } else {
    report["choi_rank"] = nullptr;
    report["min_kraus_count"] = nullptr;
    report["bell_spectrum"] = nullptr;
  }
  emit(report, out_path);
  return verdict.cptp ? kExitFeasible : kExitPrecondition;
}

int cmd_exclusion_bound(const std::string& path, std::optional<int> k,
                        const std::optional<std::string>& emit_povm,
                        std::optional<int> reformulate_k,
                        const std::optional<std::string>& emit_reformulated,
                        const std::optional<std::string>& out_path, const Tolerance& tol) {
  const exclusion::ExclusionEnsemble ensemble = serialize::ensemble_from_json(load_json(path));

  json report;
  report["manifest"] = serialize::manifest_to_json(
      make_manifest("exclusion-bound", path, std::nullopt, tol));
  report["dim"] = ensemble.dim();
  report["n"] = ensemble.size();

  const int max_k = exclusion::lemma1_max_k(ensemble, tol);
  report["lemma1_max_k"] = max_k;

  bool feasible = true;
  if (k) {
    const auto verdict = exclusion::lemma1_feasible(ensemble, *k, tol);
    feasible = verdict.feasible;
    report["lemma1"] = {{"k", *k},
                        {"feasible", verdict.feasible},
                        {"max_eigenvalue", verdict.max_eigenvalue},
                        {"bound", verdict.bound}};
  }

  const auto bounds = exclusion::corollary1_bounds(ensemble, tol);
  report["corollary1"] = {{"alpha", bounds.alpha},
                          {"dmax", bounds.dmax},
                          {"k_first", bounds.k_first},
                          {"k_second", bounds.k_second}};

  if (emit_povm) {
    const int povm_k = k.value_or(max_k);
    const auto povm = exclusion::saturation_povm(ensemble, povm_k, tol);
    write_text(*emit_povm, serialize::povm_to_json(povm).dump(2) + "\n");
    report["saturation_povm"] = {{"path", *emit_povm},
                                 {"k", povm_k},
                                 {"valid", exclusion::verify_povm(povm, tol).valid}};
  }

  if (reformulate_k) {
    const auto recast = exclusion::reformulate_k_to_1(ensemble, *reformulate_k);
    report["reformulated"] = {{"k", *reformulate_k}, {"n", recast.size()}};
    if (emit_reformulated) {
      write_text(*emit_reformulated, serialize::ensemble_to_json(recast).dump(2) + "\n");
      report["reformulated"]["path"] = *emit_reformulated;
    }
  }

  emit(report, out_path);
  return feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_certify_povm(const std::string& ensemble_path, const std::string& povm_path, int k,
                     const std::string& mode, const std::optional<std::string>& out_path,
                     const Tolerance& tol) {
  const exclusion::ExclusionEnsemble ensemble =
      serialize::ensemble_from_json(load_json(ensemble_path));
  const exclusion::Povm povm = serialize::povm_from_json(load_json(povm_path));
  if (ensemble.dim() != povm.dim()) {
    throw InputError("ensemble dimension " + std::to_string(ensemble.dim()) +
                     " does not match POVM dimension " + std::to_string(povm.dim()));
  }
  const exclusion::ExclusionMode parsed_mode =
      mode == "strong" ? exclusion::ExclusionMode::strong : exclusion::ExclusionMode::weak;

  const auto povm_verdict = exclusion::verify_povm(povm, tol);
  const auto verdict = exclusion::check_k_exclusion(povm, ensemble, k, parsed_mode, tol);
  const auto table = exclusion::exclusion_table(povm, ensemble, tol);

  json report;
  report["manifest"] = serialize::manifest_to_json(
      make_manifest("certify-povm", ensemble_path + "," + povm_path, std::nullopt, tol));
  report["k"] = k;
  report["mode"] = mode;
  report["povm"] = {{"valid", povm_verdict.valid},
                    {"min_effect_eigenvalue", povm_verdict.min_effect_eigenvalue},
                    {"completeness_residual", povm_verdict.completeness_residual}};
  report["feasible"] = verdict.feasible;
  report["max_excluded_residual"] = verdict.max_excluded_residual;
  if (!verdict.feasible) report["reason"] = verdict.reason;
  json outcomes = json::array();
  for (int a = 0; a < povm.size(); ++a) {
    outcomes.push_back({{"label", serialize::label_to_json(povm.labels()[a])},
                        {"excluded", table.excluded[a]},
                        {"weight", table.outcome_weight[a]},
                        {"zero_probability", static_cast<bool>(table.zero_probability[a])}});
  }
  report["outcomes"] = std::move(outcomes);

  emit(report, out_path);
  return verdict.feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_simulate(const std::string& path, std::optional<long long> trials,
                 std::optional<std::uint64_t> seed, const std::string& out_dir,
                 const Tolerance& tol) {
  json config = load_json(path);
  serialize::GameSpec spec = serialize::game_from_json(config);
  if (trials) spec.config.trials = *trials;
  if (seed) spec.config.seed = *seed;

  // Canonical hash covers the effective run, not just the file contents.
  config["trials"] = spec.config.trials;
  config["seed"] = spec.config.seed;
  const std::string hash = serialize::config_hash(config);

  densegame::DecoderTable decoder;
  if (spec.decoder == "dephasing") {
    decoder = densegame::decoder_table(spec.config, tol);
  } else if (spec.decoder == "discrimination") {
    if (spec.povm.size() != static_cast<int>(spec.config.encodings.size())) {
      throw InputError("discrimination decoder needs one outcome per encoding");
    }
    decoder.resize(spec.povm.size());
    for (int a = 0; a < spec.povm.size(); ++a) {
      for (int x = 0; x < spec.povm.size(); ++x) {
        if (x != a) decoder[a].push_back(x);
      }
    }
  } else {
    decoder = densegame::exclusion_decoder(spec.povm,
                                           densegame::build_game_states(spec.config, tol), tol);
  }

  const auto report = densegame::run_game(spec.config, spec.povm, decoder, trial_threads(), tol);

  const auto manifest = make_manifest("simulate", path, spec.config.seed, tol);
  const json report_json = serialize::game_report_to_json(
      report, manifest, hash, spec.config.d, spec.config.channel_param,
      static_cast<int>(spec.config.encodings.size()));

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const std::string text = report_json.dump(2) + "\n";
  write_text((dir / "report.json").string(), text);
  write_text((dir / "report.csv").string(),
             serialize::game_report_to_csv(report, hash, spec.config.d, spec.config.channel_param,
                                           static_cast<int>(spec.config.encodings.size())));
  std::cout << text;
  return report.failures == 0 ? kExitFeasible : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Choi-state channel analysis and exclusion-game toolkit"};
  app.set_version_flag("--version", choiexcl::kVersion);
  app.require_subcommand(1);

  Tolerance tol;
  app.add_option("--tol-eig", tol.eig_zero, "eigenvalue zero cutoff (default 1e-9)");
  app.add_option("--tol-trace", tol.trace_zero, "trace zero cutoff (default 1e-9)");

  std::string channel_path;
  std::optional<std::string> out_file;
  auto* analyze = app.add_subcommand("analyze-channel",
                                     "CPTP verdict, Choi rank, minimal Kraus count");
  analyze->add_option("channel", channel_path, "channel spec JSON")->required();
  analyze->add_option("--out", out_file, "also write the report here");

  std::string ensemble_path;
  std::optional<int> bound_k;
  std::optional<int> reformulate_k;
  std::optional<std::string> emit_povm;
  std::optional<std::string> emit_reformulated;
  std::optional<std::string> bound_out;
  auto* bound = app.add_subcommand("exclusion-bound",
                                   "feasibility bounds for conclusive k-exclusion");
  bound->add_option("ensemble", ensemble_path, "ensemble JSON")->required();
  bound->add_option("--k", bound_k, "test this k (default: report max k)");
  bound->add_option("--emit-povm", emit_povm, "write the saturation POVM here");
  bound->add_option("--reformulate", reformulate_k, "recast as 1-exclusion at this k");
  bound->add_option("--emit-reformulated", emit_reformulated, "write the recast ensemble here");
  bound->add_option("--out", bound_out, "also write the report here");

  std::string certify_ensemble, certify_povm_path, certify_mode = "weak";
  int certify_k = 1;
  std::optional<std::string> certify_out;
  auto* certify = app.add_subcommand("certify-povm", "check a POVM for conclusive k-exclusion");
  certify->add_option("ensemble", certify_ensemble, "ensemble JSON")->required();
  certify->add_option("povm", certify_povm_path, "POVM JSON")->required();
  certify->add_option("--k", certify_k, "number of states to exclude")->required();
  certify->add_option("--mode", certify_mode, "weak or strong")
      ->check(CLI::IsMember({"weak", "strong"}));
  certify->add_option("--out", certify_out, "also write the report here");

  std::string game_path, sim_out = ".";
  std::optional<long long> sim_trials;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "run the exclusion game");
  simulate->add_option("game", game_path, "game config JSON")->required();
  simulate->add_option("--trials", sim_trials, "override the configured trial count");
  simulate->add_option("--seed", sim_seed, "override the configured seed");
  simulate->add_option("--out", sim_out, "directory for report.json / report.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze_channel(channel_path, out_file, tol);
    if (*bound) {
      return cmd_exclusion_bound(ensemble_path, bound_k, emit_povm, reformulate_k,
                                 emit_reformulated, bound_out, tol);
    }
    if (*certify) {
      return cmd_certify_povm(certify_ensemble, certify_povm_path, certify_k, certify_mode,
                              certify_out, tol);
    }
    if (*simulate) return cmd_simulate(game_path, sim_trials, sim_seed, sim_out, tol);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const serialize::SpecError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
  return kExitInputError;
}
