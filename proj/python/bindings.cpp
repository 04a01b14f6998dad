// Python bindings for the choiexcl core: channels and Choi states, exclusion
// feasibility, and the exclusion game. Matrices cross the boundary as numpy
// complex arrays.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "choiexcl/densegame.hpp"
#include "choiexcl/exclusion.hpp"
#include "choiexcl/majorization.hpp"
#include "choiexcl/matop.hpp"
#include "choiexcl/quantum.hpp"
#include "choiexcl/version.hpp"

namespace py = pybind11;
using namespace choiexcl;

namespace {

matop::HermitianMatrix hermitian(const ComplexMatrix& m) { return matop::HermitianMatrix(m); }

quantum::DensityMatrix density(const ComplexMatrix& m) {
  return quantum::DensityMatrix(hermitian(m));
}

std::vector<matop::HermitianMatrix> hermitian_list(const std::vector<ComplexMatrix>& ms) {
  std::vector<matop::HermitianMatrix> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.emplace_back(m);
  return out;
}

exclusion::ExclusionMode parse_mode(const std::string& mode) {
  if (mode == "weak") return exclusion::ExclusionMode::weak;
  if (mode == "strong") return exclusion::ExclusionMode::strong;
  throw std::invalid_argument("mode must be 'weak' or 'strong'");
}

matop::Subsystem parse_subsystem(const std::string& keep) {
  if (keep == "A" || keep == "a") return matop::Subsystem::A;
  if (keep == "B" || keep == "b") return matop::Subsystem::B;
  throw std::invalid_argument("keep must be 'A' or 'B'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Choi-state channel analysis and exclusion-task toolkit";
  m.attr("__version__") = kVersion;

  py::class_<matop::Tolerance>(m, "Tolerance")
      .def(py::init<>())
      .def(py::init([](double eig_zero, double psd_slack, double trace_zero) {
             matop::Tolerance tol{eig_zero, psd_slack, trace_zero};
             matop::check_tolerance(tol);
             return tol;
           }),
           py::arg("eig_zero") = 1e-9, py::arg("psd_slack") = 1e-9, py::arg("trace_zero") = 1e-9)
      .def_readwrite("eig_zero", &matop::Tolerance::eig_zero)
      .def_readwrite("psd_slack", &matop::Tolerance::psd_slack)
      .def_readwrite("trace_zero", &matop::Tolerance::trace_zero);

  // matop surface: plain numpy in, plain numpy out.
  m.def("tensor", &matop::tensor, py::arg("a"), py::arg("b"));
  m.def("transpose_in_basis", &matop::transpose_in_basis, py::arg("m"));
  m.def(
      "partial_trace",
      [](const ComplexMatrix& mat, const std::string& keep, int dim_a, int dim_b) {
        return matop::partial_trace(mat, parse_subsystem(keep), dim_a, dim_b);
      },
      py::arg("m"), py::arg("keep"), py::arg("dim_a"), py::arg("dim_b"));
  m.def(
      "numerical_rank",
      [](const ComplexMatrix& mat, const matop::Tolerance& tol) {
        return matop::numerical_rank(hermitian(mat), tol);
      },
      py::arg("m"), py::arg("tol") = matop::Tolerance{});
  m.def(
      "support_projector",
      [](const ComplexMatrix& mat, const matop::Tolerance& tol) {
        return matop::support_projector(hermitian(mat), tol).matrix();
      },
      py::arg("m"), py::arg("tol") = matop::Tolerance{});
  m.def(
      "kernel_projector",
      [](const ComplexMatrix& mat, const matop::Tolerance& tol) {
        return matop::kernel_projector(hermitian(mat), tol).matrix();
      },
      py::arg("m"), py::arg("tol") = matop::Tolerance{});
  m.def(
      "loewner_leq",
      [](const ComplexMatrix& a, const ComplexMatrix& b, const matop::Tolerance& tol) {
        return matop::loewner_leq(hermitian(a), hermitian(b), tol);
      },
      py::arg("a"), py::arg("b"), py::arg("tol") = matop::Tolerance{});
  m.def(
      "eig_hermitian",
      [](const ComplexMatrix& mat) {
        const auto eig = matop::eig_hermitian(hermitian(mat));
        return py::make_tuple(eig.spectrum.eigenvalues, eig.eigenvectors,
                              eig.spectrum.min_positive);
      },
      py::arg("m"), "Returns (eigenvalues_descending, eigenvectors, min_positive)");

  // quantum types.
  py::class_<quantum::KrausChannel>(m, "KrausChannel")
      .def(py::init<std::vector<ComplexMatrix>>(), py::arg("kraus_ops"))
      .def_property_readonly("dim_in", &quantum::KrausChannel::dim_in)
      .def_property_readonly("dim_out", &quantum::KrausChannel::dim_out)
      .def_property_readonly("kraus_ops", &quantum::KrausChannel::kraus_ops)
      .def_property_readonly("kraus_count", &quantum::KrausChannel::kraus_count)
      .def("is_unital", &quantum::KrausChannel::is_unital)
      .def("unitality_residual", &quantum::KrausChannel::unitality_residual);

  py::class_<quantum::ChoiState>(m, "ChoiState")
      .def(py::init([](int d, const ComplexMatrix& mat) {
             return quantum::ChoiState(d, hermitian(mat));
           }),
           py::arg("local_dim"), py::arg("matrix"))
      .def_property_readonly("local_dim", &quantum::ChoiState::local_dim)
      .def_property_readonly("matrix",
                             [](const quantum::ChoiState& j) { return j.matrix(); });

  py::class_<quantum::CptpVerdict>(m, "CptpVerdict")
      .def_readonly("cptp", &quantum::CptpVerdict::cptp)
      .def_readonly("psd_ok", &quantum::CptpVerdict::psd_ok)
      .def_readonly("marginal_ok", &quantum::CptpVerdict::marginal_ok)
      .def_readonly("min_eigenvalue", &quantum::CptpVerdict::min_eigenvalue)
      .def_readonly("marginal_residual", &quantum::CptpVerdict::marginal_residual)
      .def("__bool__", [](const quantum::CptpVerdict& v) { return v.cptp; });

  m.def("max_entangled",
        [](int d) { return ComplexVector(quantum::max_entangled(d).amplitudes()); },
        py::arg("d"));
  m.def(
      "weyl", [](int a, int b, int d) { return quantum::weyl({a, b, d}); }, py::arg("a"),
      py::arg("b"), py::arg("d"));
  m.def(
      "bell_state",
      [](int d, int a, int b) { return ComplexVector(quantum::bell_state(d, a, b).amplitudes()); },
      py::arg("d"), py::arg("a"), py::arg("b"));
  m.def("kraus_to_choi", &quantum::kraus_to_choi, py::arg("channel"));
  m.def("choi_to_kraus", &quantum::choi_to_kraus, py::arg("choi"),
        py::arg("tol") = matop::Tolerance{});
  m.def(
      "apply_kraus",
      [](const quantum::KrausChannel& ch, const ComplexMatrix& rho) {
        return apply_kraus(ch, density(rho)).matrix();
      },
      py::arg("channel"), py::arg("rho"));
  m.def(
      "apply_via_choi",
      [](const quantum::ChoiState& j, const ComplexMatrix& rho, const matop::Tolerance& tol) {
        return apply_via_choi(j, density(rho), tol).matrix();
      },
      py::arg("choi"), py::arg("rho"), py::arg("tol") = matop::Tolerance{});
  m.def("choi_rank", &quantum::choi_rank, py::arg("choi"), py::arg("tol") = matop::Tolerance{});
  m.def("is_cptp", &quantum::is_cptp, py::arg("choi"), py::arg("tol") = matop::Tolerance{});
  m.def("make_depolarizing", &quantum::make_depolarizing, py::arg("d"), py::arg("p"));
  m.def("make_dephasing", &quantum::make_dephasing, py::arg("d"), py::arg("p"));
  m.def("make_unitary_channel", &quantum::make_unitary_channel, py::arg("unitary"));

  // exclusion types.
  py::class_<exclusion::Povm>(m, "Povm")
      .def(py::init([](int dim, const std::vector<ComplexMatrix>& effects,
                       const std::vector<exclusion::Label>& labels) {
             return exclusion::Povm(dim, hermitian_list(effects), labels);
           }),
           py::arg("dim"), py::arg("effects"),
           py::arg("labels") = std::vector<exclusion::Label>{})
      .def_property_readonly("dim", &exclusion::Povm::dim)
      .def_property_readonly("size", &exclusion::Povm::size)
      .def_property_readonly("labels", &exclusion::Povm::labels)
      .def_property_readonly("effects", [](const exclusion::Povm& p) {
        std::vector<ComplexMatrix> out;
        for (const auto& t : p.effects()) out.push_back(t.matrix());
        return out;
      });

  py::class_<exclusion::PovmVerdict>(m, "PovmVerdict")
      .def_readonly("valid", &exclusion::PovmVerdict::valid)
      .def_readonly("min_effect_eigenvalue", &exclusion::PovmVerdict::min_effect_eigenvalue)
      .def_readonly("completeness_residual", &exclusion::PovmVerdict::completeness_residual)
      .def("__bool__", [](const exclusion::PovmVerdict& v) { return v.valid; });

  py::class_<exclusion::ExclusionEnsemble>(m, "ExclusionEnsemble")
      .def(py::init([](const std::vector<ComplexMatrix>& states, const std::vector<double>& priors) {
             std::vector<quantum::DensityMatrix> parsed;
             parsed.reserve(states.size());
             for (const auto& s : states) parsed.push_back(density(s));
             return exclusion::ExclusionEnsemble(std::move(parsed), priors);
           }),
           py::arg("states"), py::arg("priors") = std::vector<double>{})
      .def_property_readonly("dim", &exclusion::ExclusionEnsemble::dim)
      .def_property_readonly("size", &exclusion::ExclusionEnsemble::size)
      .def_property_readonly("priors", &exclusion::ExclusionEnsemble::priors)
      .def_property_readonly("states",
                             [](const exclusion::ExclusionEnsemble& e) {
                               std::vector<ComplexMatrix> out;
                               for (const auto& rho : e.states()) out.push_back(rho.matrix());
                               return out;
                             })
      .def_property_readonly("projectors", [](const exclusion::ExclusionEnsemble& e) {
        std::vector<ComplexMatrix> out;
        for (const auto& pi : e.projectors()) out.push_back(pi.matrix());
        return out;
      });

  py::class_<exclusion::ExclusionTable>(m, "ExclusionTable")
      .def_readonly("excluded", &exclusion::ExclusionTable::excluded)
      .def_readonly("outcome_weight", &exclusion::ExclusionTable::outcome_weight)
      .def_readonly("zero_probability", &exclusion::ExclusionTable::zero_probability);

  py::class_<exclusion::ExclusionVerdict>(m, "ExclusionVerdict")
      .def_readonly("feasible", &exclusion::ExclusionVerdict::feasible)
      .def_readonly("witness", &exclusion::ExclusionVerdict::witness)
      .def_readonly("max_excluded_residual", &exclusion::ExclusionVerdict::max_excluded_residual)
      .def_readonly("reason", &exclusion::ExclusionVerdict::reason)
      .def("__bool__", [](const exclusion::ExclusionVerdict& v) { return v.feasible; });

  py::class_<exclusion::Lemma1Verdict>(m, "Lemma1Verdict")
      .def_readonly("feasible", &exclusion::Lemma1Verdict::feasible)
      .def_readonly("max_eigenvalue", &exclusion::Lemma1Verdict::max_eigenvalue)
      .def_readonly("bound", &exclusion::Lemma1Verdict::bound)
      .def("__bool__", [](const exclusion::Lemma1Verdict& v) { return v.feasible; });

  py::class_<exclusion::CorollaryBound>(m, "CorollaryBound")
      .def_readonly("alpha", &exclusion::CorollaryBound::alpha)
      .def_readonly("dmax", &exclusion::CorollaryBound::dmax)
      .def_readonly("k_first", &exclusion::CorollaryBound::k_first)
      .def_readonly("k_second", &exclusion::CorollaryBound::k_second)
      .def_property_readonly("omega", [](const exclusion::CorollaryBound& b) {
        return b.omega.matrix();
      });

  m.def("verify_povm", &exclusion::verify_povm, py::arg("povm"),
        py::arg("tol") = matop::Tolerance{});
  m.def("exclusion_table", &exclusion::exclusion_table, py::arg("povm"), py::arg("ensemble"),
        py::arg("tol") = matop::Tolerance{});
  m.def(
      "check_k_exclusion",
      [](const exclusion::Povm& p, const exclusion::ExclusionEnsemble& e, int k,
         const std::string& mode, const matop::Tolerance& tol) {
        return exclusion::check_k_exclusion(p, e, k, parse_mode(mode), tol);
      },
      py::arg("povm"), py::arg("ensemble"), py::arg("k"), py::arg("mode") = "weak",
      py::arg("tol") = matop::Tolerance{});
  m.def("lemma1_feasible", &exclusion::lemma1_feasible, py::arg("ensemble"), py::arg("k"),
        py::arg("tol") = matop::Tolerance{});
  m.def("lemma1_max_k", &exclusion::lemma1_max_k, py::arg("ensemble"),
        py::arg("tol") = matop::Tolerance{});
  m.def(
      "d_max",
      [](const ComplexMatrix& psi, const ComplexMatrix& sigma, const matop::Tolerance& tol) {
        return exclusion::d_max(density(psi), density(sigma), tol);
      },
      py::arg("psi"), py::arg("sigma"), py::arg("tol") = matop::Tolerance{});
  m.def("corollary1_bounds", &exclusion::corollary1_bounds, py::arg("ensemble"),
        py::arg("tol") = matop::Tolerance{});
  m.def("reformulate_k_to_1", &exclusion::reformulate_k_to_1, py::arg("ensemble"), py::arg("k"),
        py::arg("cap") = 10000);
  m.def("saturation_povm", &exclusion::saturation_povm, py::arg("ensemble"), py::arg("k"),
        py::arg("tol") = matop::Tolerance{});
  m.def("subset_projector_ensemble", &exclusion::subset_projector_ensemble, py::arg("d"),
        py::arg("r"));

  // Exclusion game.
  py::enum_<densegame::ChannelKind>(m, "ChannelKind")
      .value("dephasing", densegame::ChannelKind::dephasing)
      .value("depolarizing", densegame::ChannelKind::depolarizing)
      .value("unitary", densegame::ChannelKind::unitary)
      .value("custom", densegame::ChannelKind::custom);

  py::class_<densegame::GameConfig>(m, "GameConfig")
      .def(py::init([](int d, const py::object& channel, const std::string& kind, double p,
                       std::vector<quantum::KrausChannel> encodings, std::vector<double> priors,
                       long long trials, std::uint64_t seed) {
             densegame::GameConfig cfg;
             cfg.d = d;
             if (py::isinstance<quantum::KrausChannel>(channel)) {
               cfg.channel = channel.cast<quantum::KrausChannel>();
             } else if (py::isinstance<quantum::ChoiState>(channel)) {
               cfg.channel = channel.cast<quantum::ChoiState>();
             } else {
               throw std::invalid_argument("channel must be a KrausChannel or ChoiState");
             }
             if (kind == "dephasing") cfg.channel_kind = densegame::ChannelKind::dephasing;
             else if (kind == "depolarizing") cfg.channel_kind = densegame::ChannelKind::depolarizing;
             else if (kind == "unitary") cfg.channel_kind = densegame::ChannelKind::unitary;
             else cfg.channel_kind = densegame::ChannelKind::custom;
             cfg.channel_param = p;
             cfg.encodings = encodings.empty() ? densegame::weyl_encodings(d) : std::move(encodings);
             cfg.priors = std::move(priors);
             cfg.trials = trials;
             cfg.seed = seed;
             return cfg;
           }),
           py::arg("d"), py::arg("channel"), py::arg("kind") = "custom", py::arg("p") = -1.0,
           py::arg("encodings") = std::vector<quantum::KrausChannel>{},
           py::arg("priors") = std::vector<double>{}, py::arg("trials") = 10000,
           py::arg("seed") = 0)
      .def_readwrite("d", &densegame::GameConfig::d)
      .def_readwrite("trials", &densegame::GameConfig::trials)
      .def_readwrite("seed", &densegame::GameConfig::seed)
      .def_readwrite("priors", &densegame::GameConfig::priors)
      .def_readwrite("encodings", &densegame::GameConfig::encodings);

  py::class_<densegame::GameReport>(m, "GameReport")
      .def_readonly("theorem1_k", &densegame::GameReport::theorem1_k)
      .def_readonly("achieved_k", &densegame::GameReport::achieved_k)
      .def_readonly("failures", &densegame::GameReport::failures)
      .def_readonly("trials_run", &densegame::GameReport::trials_run)
      .def_readonly("per_outcome_excluded", &densegame::GameReport::per_outcome_excluded)
      .def_readonly("choi_rank_used", &densegame::GameReport::choi_rank_used)
      .def_readonly("seed", &densegame::GameReport::seed)
      .def_readonly("max_excluded_trace", &densegame::GameReport::max_excluded_trace);

  py::class_<densegame::UnitalCheckVerdict>(m, "UnitalCheckVerdict")
      .def_readonly("holds", &densegame::UnitalCheckVerdict::holds)
      .def_readonly("choi_rank", &densegame::UnitalCheckVerdict::choi_rank)
      .def_readonly("theorem1_k", &densegame::UnitalCheckVerdict::theorem1_k)
      .def_readonly("lemma1_k", &densegame::UnitalCheckVerdict::lemma1_k)
      .def_readonly("state_ranks", &densegame::UnitalCheckVerdict::state_ranks)
      .def("__bool__", [](const densegame::UnitalCheckVerdict& v) { return v.holds; });

  m.def("theorem1_bound", &densegame::theorem1_bound, py::arg("n"), py::arg("d"),
        py::arg("choi_rank"));
  m.def("weyl_encodings", &densegame::weyl_encodings, py::arg("d"));
  m.def("bell_povm", &densegame::bell_povm, py::arg("d"));
  m.def("build_game_states", &densegame::build_game_states, py::arg("config"),
        py::arg("tol") = matop::Tolerance{});
  m.def("decoder_table", &densegame::decoder_table, py::arg("config"),
        py::arg("tol") = matop::Tolerance{});
  m.def("exclusion_decoder", &densegame::exclusion_decoder, py::arg("povm"), py::arg("ensemble"),
        py::arg("tol") = matop::Tolerance{});
  m.def("run_game", &densegame::run_game, py::arg("config"), py::arg("povm"), py::arg("decoder"),
        py::arg("threads") = 1, py::arg("tol") = matop::Tolerance{});
  m.def("unital_extension_check", &densegame::unital_extension_check, py::arg("config"),
        py::arg("tol") = matop::Tolerance{});

  // Majorization.
  py::class_<majorization::StateSpectrum>(m, "StateSpectrum")
      .def_readonly("values", &majorization::StateSpectrum::values)
      .def_readonly("sum_residual", &majorization::StateSpectrum::sum_residual);

  py::class_<majorization::MonotonicityVerdict>(m, "MonotonicityVerdict")
      .def_readonly("holds", &majorization::MonotonicityVerdict::holds)
      .def_readonly("majorization_holds", &majorization::MonotonicityVerdict::majorization_holds)
      .def_readonly("rank_monotone", &majorization::MonotonicityVerdict::rank_monotone)
      .def_readonly("rank_in", &majorization::MonotonicityVerdict::rank_in)
      .def_readonly("rank_out", &majorization::MonotonicityVerdict::rank_out)
      .def_readonly("unitality_residual", &majorization::MonotonicityVerdict::unitality_residual)
      .def("__bool__", [](const majorization::MonotonicityVerdict& v) { return v.holds; });

  m.def(
      "spectrum",
      [](const ComplexMatrix& rho, const matop::Tolerance& tol) {
        return majorization::spectrum(density(rho), tol);
      },
      py::arg("rho"), py::arg("tol") = matop::Tolerance{});
  m.def("majorizes", &majorization::majorizes, py::arg("x"), py::arg("y"));
  m.def(
      "supp_count",
      [](const RealVector& v, const matop::Tolerance& tol) {
        return majorization::supp_count(v, tol);
      },
      py::arg("v"), py::arg("tol") = matop::Tolerance{});
  m.def(
      "unital_monotonicity_check",
      [](const quantum::KrausChannel& e, const ComplexMatrix& rho, const matop::Tolerance& tol) {
        return majorization::unital_monotonicity_check(e, density(rho), tol);
      },
      py::arg("channel"), py::arg("rho"), py::arg("tol") = matop::Tolerance{});
}
