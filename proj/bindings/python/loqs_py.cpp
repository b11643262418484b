// Python bindings exposing the main operations of the library.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "loqs/experiments.hpp"
#include "loqs/mbqc.hpp"
#include "loqs/nonclassicality.hpp"
#include "loqs/optics.hpp"
#include "loqs/protocols.hpp"
#include "loqs/repeater.hpp"
#include "loqs/sources.hpp"

namespace py = pybind11;
using namespace loqs;

namespace {

py::dict purify_dict(const PurifyResult& r) {
    py::dict d;
    d["fidelity_out"] = r.fidelity_out;
    d["success_probability"] = r.success_probability;
    return d;
}

}  // namespace

PYBIND11_MODULE(_loqs, m) {
    m.doc() = "linear-optical quantum simulation library";
    m.attr("__version__") = library_version();

    // interference and optics
    m.def("hom_coincidence", [](cxd alpha) { return hom_experiment(alpha); },
          py::arg("alpha"), "coincidence probability of two photons with overlap alpha");
    m.def("noon_fringe", &noon_fringe, py::arg("n"), py::arg("phi"),
          "de Broglie fringe of the N-photon path superposition");
    m.def("visibility_v4",
          [](double sp, double sF, double sf) { return visibility_v4({sp, sF, sf}); },
          py::arg("sigma_p"), py::arg("sigma_F"), py::arg("sigma_f"),
          "closed-form four-photon visibility for Gaussian filters");
    m.def("multipair_visibility", [](double z2) { return multipair_visibility(std::sqrt(z2)); },
          py::arg("z2"), "four-photon swapping visibility with multi-pair emission |z|^2");
    m.def("decompose_unitary_roundtrip_error", [](int n, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        MatrixXcd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = cxd(g(rng), g(rng));
        Eigen::HouseholderQR<MatrixXcd> qr(a);
        MatrixXcd q = qr.householderQ();
        MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
        auto elems = decompose_unitary(q);
        return (compose_elements(n, elems) - q).cwiseAbs().maxCoeff();
    }, py::arg("n"), py::arg("seed") = 0,
       "reconstruction error of the triangular decomposition on a random U(N)");

    // nonclassicality
    m.def("chsh_singlet", [] {
        auto s = chsh_optimal_settings();
        return chsh_value(DensityOperator(QubitRegister::bell("psi-")), s.a1, s.a2, s.b1, s.b2);
    });
    m.def("chsh_werner", [](double f) {
        auto s = chsh_optimal_settings();
        return chsh_value(werner_state(f), s.a1, s.a2, s.b1, s.b2);
    }, py::arg("fidelity"));
    m.def("chsh_lhv_bound", [] { return lhv_bound(chsh_functional()).value; });
    m.def("ghz_correlation", [](double pa, double pb, double pc) {
        return correlation(DensityOperator(QubitRegister::ghz(3)),
                           {ghz_phase_setting(pa), ghz_phase_setting(pb), ghz_phase_setting(pc)});
    }, py::arg("phi_a"), py::arg("phi_b"), py::arg("phi_c"));
    m.def("ghz_paradox", [](double visibility) {
        auto r = ghz_paradox_check(visibility);
        py::dict d;
        d["e_xyy"] = r.e_xyy;
        d["e_yxy"] = r.e_yxy;
        d["e_yyx"] = r.e_yyx;
        d["e_xxx"] = r.e_xxx;
        d["contradiction"] = r.contradiction;
        return d;
    }, py::arg("visibility") = 1.0);
    m.def("ardehali", [](double visibility) {
        auto r = ardehali_test(visibility);
        py::dict d;
        d["quantum_value"] = r.quantum_value;
        d["classical_bound"] = r.classical_bound;
        d["violated"] = r.violated;
        return d;
    }, py::arg("visibility") = 1.0);
    m.def("leggett", [](double phi) {
        auto r = leggett_test(phi);
        py::dict d;
        d["quantum"] = r.quantum;
        d["bound"] = r.bound;
        d["violated"] = r.violated;
        return d;
    }, py::arg("phi"));

    // protocols
    m.def("teleport_summary", [](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        VectorXcd v(2);
        v << cxd(g(rng), g(rng)), cxd(g(rng), g(rng));
        auto r = teleport(QubitRegister(1, std::move(v), true), BellKind::PsiMinus);
        py::dict d;
        for (auto& b : r.branches) {
            py::dict e;
            e["probability"] = b.probability;
            e["correction"] = std::string(1, b.correction.ops[0]);
            e["fidelity"] = b.fidelity_corrected;
            d[to_string(b.outcome).c_str()] = e;
        }
        d["mean_fidelity"] = r.mean_fidelity;
        d["classical_limit"] = r.classical_limit;
        return d;
    }, py::arg("seed") = 0, "branch table for a random input qubit");
    m.def("entanglement_swap_summary", [] {
        auto r = entanglement_swap();
        py::dict d;
        for (auto& b : r.branches) d[to_string(b.outcome).c_str()] = b.probability;
        d["unconditioned_max_dev_from_I4"] =
            (r.unconditioned_14.matrix() - MatrixXcd::Identity(4, 4) / 4).cwiseAbs().maxCoeff();
        return d;
    });
    m.def("purify_bbpssw", [](double f) { return purify_dict(purify_bbpssw(f)); }, py::arg("fidelity"));
    m.def("purify_linear_optical", [](double f) { return purify_dict(purify_linear_optical(f)); },
          py::arg("fidelity"));
    m.def("dense_coding_capacity", [](const std::string& grade) {
        return dense_coding(0, grade == "full" ? AnalyzerGrade::Full : AnalyzerGrade::TwoState)
            .capacity_bits;
    }, py::arg("analyzer") = "full");
    m.def("franson_visibility", [](double alpha2) {
        return franson_timebin(std::sqrt(alpha2), std::sqrt(1 - alpha2)).visibility;
    }, py::arg("alpha2"));

    // cluster states
    m.def("cluster_chain_stabilizers", [](int n) {
        return verify_stabilizers(build_cluster(ClusterGraph::chain(n)), ClusterGraph::chain(n));
    }, py::arg("n"));
    m.def("fuse_chains_type1", [](int n, int mm) {
        auto branches = fuse(ClusterGraph::chain(n), n - 1, ClusterGraph::chain(mm), 0, FuseKind::TypeI);
        double p_succ = 0;
        bool verified = true;
        for (auto& b : branches) {
            if (!b.success) continue;
            p_succ += b.probability;
            verified = verified && b.state.equals_up_to_phase(build_cluster(b.graph), 1e-9);
        }
        py::dict d;
        d["success_probability"] = p_succ;
        d["merged_length"] = n + mm - 1;
        d["verified"] = verified;
        return d;
    }, py::arg("n"), py::arg("m"));
    m.def("grover_box", [](const std::string& marked, double noise) {
        auto r = grover_box(marked, noise);
        py::dict d;
        for (auto& [k, v] : r.outcome_distribution) d[k.c_str()] = v;
        d["success_probability"] = r.success_probability;
        return d;
    }, py::arg("marked"), py::arg("noise") = 0.0);
    m.def("persistency", [](int n) { return persistency_check(n).removals; }, py::arg("chain_length"));

    // repeater
    m.def("repeater_resources", [](long long segments, int l, int mm) {
        RepeaterConfig cfg;
        cfg.segments = segments;
        cfg.branching = l;
        cfg.purification_copies = mm;
        return resource_count(cfg);
    }, py::arg("segments"), py::arg("branching"), py::arg("copies"));
    m.def("dlcz_mean_rounds", [](double p_c, long long runs, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        double sum = 0;
        for (long long i = 0; i < runs; ++i) sum += double(dlcz_generate({p_c, 1.0}, rng).round);
        return sum / double(runs);
    }, py::arg("p_c"), py::arg("runs") = 10000, py::arg("seed") = 0);
    m.def("simulate_repeater", [](long long n, double f1, double p_c, long long runs,
                                  std::uint64_t seed) {
        RepeaterConfig cfg;
        cfg.segments = n;
        cfg.elementary_fidelity = f1;
        std::mt19937_64 rng(seed);
        auto st = simulate_network(cfg, {p_c, 1.0}, rng, runs);
        py::dict d;
        d["mean_time"] = st.mean_time;
        d["p50"] = st.p50;
        d["p95"] = st.p95;
        d["mean_fidelity"] = st.mean_fidelity;
        return d;
    }, py::arg("segments"), py::arg("f1") = 0.96, py::arg("p_c") = 0.1, py::arg("runs") = 200,
       py::arg("seed") = 0);

    // experiment registry pass-through
    m.def("list_experiments", [] {
        py::list out;
        for (const auto& info : list_experiments()) {
            py::dict d;
            d["id"] = info.id;
            d["summary"] = info.summary;
            py::list params;
            for (const auto& p : info.params) {
                py::dict q;
                q["name"] = p.name;
                q["type"] = p.type;
                q["default"] = p.default_value;
                q["doc"] = p.doc;
                params.append(q);
            }
            d["params"] = params;
            out.append(d);
        }
        return out;
    });
    m.def("run_experiment", [](const std::string& id, const std::map<std::string, std::string>& params,
                               std::uint64_t seed) {
        auto r = run_experiment(id, params, seed);
        return render_document(id, params, seed, r);
    }, py::arg("id"), py::arg("params") = std::map<std::string, std::string>{},
       py::arg("seed") = 0, "runs a canned experiment, returning the result document");

    py::register_exception<UnknownExperiment>(m, "UnknownExperiment");
    py::register_exception<InvalidParameter>(m, "InvalidParameter");
    py::register_exception<InfeasibleConfiguration>(m, "InfeasibleConfiguration");
}
