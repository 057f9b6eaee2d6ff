#include "moelab/report.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace moelab;

namespace {

// Reports cross the boundary as plain dicts via their JSON form.
py::object json_to_py(const nlohmann::json& j) {
  py::module_ json_mod = py::module_::import("json");
  return json_mod.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_moelab, m) {
  m.doc() = "Random Stinespring channels, minimum output entropy estimation, and "
            "concentration-of-measure experiments";
#ifdef MOELAB_VERSION
  m.attr("__version__") = MOELAB_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
  m.attr("HASTINGS_C0") = kHastingsC0;

  py::register_exception<GuardError>(m, "GuardError");

  py::class_<SeedSpec>(m, "SeedSpec")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("master_seed") = 0,
           py::arg("stream_id") = 0)
      .def_readwrite("master_seed", &SeedSpec::master_seed)
      .def_readwrite("stream_id", &SeedSpec::stream_id)
      .def("substream", &SeedSpec::substream);

  py::class_<PureState>(m, "PureState")
      .def(py::init<Vector>())
      .def_property_readonly("dim", &PureState::dim)
      .def_property_readonly("amplitudes",
                             [](const PureState& s) { return s.amplitudes(); })
      .def_static("basis", &PureState::basis);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<Matrix>())
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def_property_readonly("matrix",
                             [](const DensityMatrix& d) { return d.matrix(); })
      .def_static("maximally_mixed", &DensityMatrix::maximally_mixed)
      .def_static("from_pure", &DensityMatrix::from_pure);

  m.def("haar_state",
        [](int dim, const SeedSpec& seed) { return haar_state(dim, seed); });
  m.def("haar_unitary",
        [](int dim, const SeedSpec& seed) { return haar_unitary(dim, seed); });
  m.def("haar_state_orthogonal", [](const PureState& psi, const SeedSpec& seed) {
    return haar_state_orthogonal(psi, seed);
  });
  m.def("decompose_against", [](const PureState& chi, const PureState& psi) {
    const Decomposition d = decompose_against(chi, psi);
    return py::make_tuple(d.x, d.phi);
  });
  m.def("random_density", [](int dim, int env_dim, const SeedSpec& seed) {
    RandomStream rng(seed);
    return random_density(dim, env_dim, rng);
  });

  m.def("tensor", py::overload_cast<const Matrix&, const Matrix&>(&tensor));
  m.def("partial_trace", [](const DensityMatrix& rho, int dim_a, int dim_b,
                            const std::string& keep) {
    return partial_trace(rho, dim_a, dim_b,
                         keep == "A" ? Subsystem::A : Subsystem::B);
  });
  m.def("operator_norm", [](const Matrix& x) { return norm(x, NormKind::Operator); });
  m.def("frobenius_norm", [](const Matrix& x) { return norm(x, NormKind::Frobenius); });
  m.def("trace_norm", [](const Matrix& x) { return norm(x, NormKind::Trace); });
  m.def("fidelity", &fidelity);
  m.def("swap_operator", &swap_operator);

  py::enum_<ChannelVariant>(m, "ChannelVariant")
      .value("direct", ChannelVariant::Direct)
      .value("conjugate", ChannelVariant::Conjugate)
      .value("complementary", ChannelVariant::Complementary);

  py::class_<StinespringChannel>(m, "StinespringChannel")
      .def_static("make", &StinespringChannel::make, py::arg("unitary"),
                  py::arg("dim_a"), py::arg("dim_b"))
      .def_property_readonly("dim_a", &StinespringChannel::dim_a)
      .def_property_readonly("dim_b", &StinespringChannel::dim_b)
      .def_property_readonly("variant", &StinespringChannel::variant)
      .def_property_readonly("unitary",
                             [](const StinespringChannel& c) { return c.unitary(); })
      .def("conjugate", &StinespringChannel::conjugate)
      .def("complementary", &StinespringChannel::complementary)
      .def("apply", &StinespringChannel::apply)
      .def("apply_to_operator", &StinespringChannel::apply_to_operator)
      .def("kraus", [](const StinespringChannel& c) { return c.kraus(); });

  m.def("kraus_of_complementary", &kraus_of_complementary);
  m.def("kraus_pair_count", &kraus_pair_count);
  m.def("reconstruct_direct_from_kraus", &reconstruct_direct_from_kraus);
  m.def("apply_product", &apply_product);
  m.def("maximally_entangled", &maximally_entangled);

  m.def("von_neumann", &von_neumann);
  m.def("entropy_deviation", &entropy_deviation);
  m.def("binary_entropy", &binary_entropy);
  m.def("bound_s", &bound_s);
  m.def("bound_r", &bound_r);
  m.def("two_norm_entropy_gap_bound", [](const DensityMatrix& sigma) {
    const EntropyGapSides sides = two_norm_entropy_gap_bound(sigma);
    return py::make_tuple(sides.lhs, sides.rhs);
  });

  m.def(
      "min_output_entropy",
      [](const StinespringChannel& channel, int starts, const SeedSpec& seed) {
        const MinEntResult r = min_output_entropy(channel, starts, seed);
        return py::dict(py::arg("value") = r.value,
                        py::arg("argmin") = r.argmin.amplitudes(),
                        py::arg("starts") = r.starts,
                        py::arg("converged_starts") = r.converged_starts,
                        py::arg("best_gradient_norm") = r.best_gradient_norm);
      },
      py::arg("channel"), py::arg("starts") = 50, py::arg("seed") = SeedSpec{1, 0});
  m.def("brute_force_min_entropy",
        [](const StinespringChannel& channel, int grid_points, const SeedSpec& seed) {
          return brute_force_min_entropy(channel, grid_points, seed);
        });
  m.def("hayden_check", [](const StinespringChannel& channel) {
    const HaydenCheck h = hayden_check(channel);
    return py::dict(py::arg("entropy") = h.entropy, py::arg("bound") = h.bound,
                    py::arg("exact_bound") = h.exact_bound,
                    py::arg("overlap") = h.overlap,
                    py::arg("bound_satisfied") = h.bound_satisfied,
                    py::arg("exact_bound_satisfied") = h.exact_bound_satisfied,
                    py::arg("overlap_satisfied") = h.overlap_satisfied);
  });

  py::class_<SetParams>(m, "SetParams")
      .def(py::init([](int D, int N, double c, double a) {
             return SetParams{D, N, c, a};
           }),
           py::arg("D"), py::arg("N"), py::arg("c") = kHastingsC0, py::arg("a") = 15.0)
      .def_readwrite("D", &SetParams::D)
      .def_readwrite("N", &SetParams::N)
      .def_readwrite("c", &SetParams::c)
      .def_readwrite("a", &SetParams::a);

  py::class_<TubeSpec>(m, "TubeSpec")
      .def_static("make", &TubeSpec::make, py::arg("center"), py::arg("width_param"))
      .def_readonly("width_param", &TubeSpec::width_param)
      .def_readonly("width", &TubeSpec::width);

  m.def("in_tube", [](const DensityMatrix& pi, const TubeSpec& tube) {
    const TubeResult r = in_tube(pi, tube);
    return py::make_tuple(r.member, r.best_p, r.best_dist);
  });
  m.def("in_Y", &in_Y);
  m.def("in_X_witnessed", [](const DensityMatrix& rho, const SetParams& params,
                             const std::vector<DensityMatrix>& witnesses) {
    const XWitnessResult r = in_X_witnessed(rho, params, witnesses);
    return py::dict(py::arg("member") = r.member,
                    py::arg("witness_index") =
                        r.witness_index ? py::cast(*r.witness_index) : py::none(),
                    py::arg("checked") = (r.status == XStatus::Checked));
  });
  m.def("pinch", &pinch);
  m.def("g_function", &g_function);
  m.def("lipschitz_pair_check", [](const PureState& psi, const PureState& phi,
                                   int dim_a, int dim_b, double a) {
    const LipschitzSides s = lipschitz_pair_check(psi, phi, dim_a, dim_b, a);
    return py::make_tuple(s.lhs, s.rhs);
  });

  m.def(
      "run_suite",
      [](const std::string& suite, int dim_a, int dim_b, long trials,
         const SeedSpec& seed, double a, double epsilon, double alpha, int threads) {
        RunOptions options;
        options.threads = threads;
        ExperimentReport report;
        if (suite == "geometric") {
          report = verify_geometric(dim_a, trials, seed, options);
        } else if (suite == "median") {
          report = verify_median_lemma(dim_a, dim_b, trials, seed, options);
        } else if (suite == "prop5") {
          report = verify_prop5(dim_a, dim_b, a, epsilon, trials, seed, options);
        } else if (suite == "hhl") {
          report = verify_hhl(dim_a, dim_b, epsilon, trials, seed, options);
        } else if (suite == "levy") {
          report = verify_levy(dim_a, alpha, trials, seed, options);
        } else if (suite == "fg") {
          report = verify_fg(dim_a, dim_b, trials, seed, options);
        } else if (suite == "independence") {
          report = verify_independence(dim_a, trials, seed, options);
        } else if (suite == "hayden") {
          report = verify_hayden(dim_a, dim_b, static_cast<int>(trials), seed, options);
        } else if (suite == "bounds") {
          report = verify_bounds(trials, seed, options);
        } else {
          throw std::invalid_argument("unknown suite: " + suite);
        }
        return json_to_py(to_json(report));
      },
      py::arg("suite"), py::arg("dim_a") = 2, py::arg("dim_b") = 2,
      py::arg("trials") = 1000, py::arg("seed") = SeedSpec{1, 0}, py::arg("a") = 3.0,
      py::arg("epsilon") = 0.5, py::arg("alpha") = 0.3, py::arg("threads") = 1);

  m.def(
      "run_pipeline",
      [](int dim_a, int dim_b, int unitary_samples, int starts, long witness_trials,
         double c, double a, int tube_n, const SeedSpec& seed,
         const std::string& unitary_kind, int threads) {
        PipelineConfig config;
        config.dim_a = dim_a;
        config.dim_b = dim_b;
        config.unitary_samples = unitary_samples;
        config.starts = starts;
        config.witness_trials = witness_trials;
        config.c = c;
        config.a = a;
        config.tube_n = tube_n;
        config.seed = seed;
        config.unitary_kind = unitary_kind;
        RunOptions options;
        options.threads = threads;
        return json_to_py(to_json(counterexample_pipeline(config, options)));
      },
      py::arg("dim_a") = 4, py::arg("dim_b") = 2, py::arg("unitary_samples") = 5,
      py::arg("starts") = 20, py::arg("witness_trials") = 100,
      py::arg("c") = kHastingsC0, py::arg("a") = 15.0, py::arg("tube_n") = 0,
      py::arg("seed") = SeedSpec{1, 0}, py::arg("unitary_kind") = "haar",
      py::arg("threads") = 1);
}
