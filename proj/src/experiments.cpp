#include "loqs/experiments.hpp"

#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "loqs/mbqc.hpp"
#include "loqs/nonclassicality.hpp"
#include "loqs/optics.hpp"
#include "loqs/protocols.hpp"
#include "loqs/repeater.hpp"
#include "loqs/sources.hpp"

namespace loqs {

namespace {

const double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct ParamReader {
    const std::map<std::string, std::string>& values;
    const std::vector<ParamSpec>& specs;

    const ParamSpec& spec(const std::string& name) const {
        for (const auto& s : specs)
            if (s.name == name) return s;
        throw std::logic_error("experiment schema is missing " + name);
    }

    std::string raw(const std::string& name) const {
        auto it = values.find(name);
        return it == values.end() ? spec(name).default_value : it->second;
    }

    double number(const std::string& name) const {
        const std::string text = raw(name);
        try {
            std::size_t used = 0;
            double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            throw InvalidParameter("parameter '" + name + "' is not a number: " + text);
        }
    }

    long long integer(const std::string& name) const {
        double v = number(name);
        if (v != std::floor(v))
            throw InvalidParameter("parameter '" + name + "' must be an integer");
        return (long long)v;
    }

    std::string text(const std::string& name) const { return raw(name); }
};

void validate(const std::vector<ParamSpec>& specs,
              const std::map<std::string, std::string>& values) {
    for (const auto& [k, v] : values) {
        bool known = false;
        for (const auto& s : specs) known |= (s.name == k);
        if (!known) throw InvalidParameter("unknown parameter '" + k + "'");
    }
    ParamReader r{values, specs};
    for (const auto& s : specs) {
        if (s.type == "string") {
            if (!s.choices.empty()) {
                std::string v = r.text(s.name);
                bool ok = false;
                for (const auto& c : s.choices) ok |= (c == v);
                if (!ok) throw InvalidParameter("parameter '" + s.name + "' must be one of the documented choices");
            }
            continue;
        }
        double v = r.number(s.name);
        if (s.type == "int" && v != std::floor(v))
            throw InvalidParameter("parameter '" + s.name + "' must be an integer");
        if (v < s.min || v > s.max)
            throw InvalidParameter("parameter '" + s.name + "' out of range [" + fmt(s.min) + ", " +
                                   fmt(s.max) + "]");
    }
}

using Runner = std::function<ExperimentResult(const ParamReader&, std::uint64_t)>;

struct Entry {
    ExperimentInfo info;
    Runner run;
};

// ---- individual experiments -------------------------------------------------

ExperimentResult run_hom(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    double alpha = p.number("alpha");
    long long points = p.integer("points");
    res.summary.emplace_back("coincidence_probability", fmt(hom_experiment(alpha)));
    res.summary.emplace_back("expected_law", fmt((1 - alpha * alpha) / 2));
    res.series_header = {"alpha", "coincidence", "law"};
    for (long long k = 0; k < points; ++k) {
        double a = points == 1 ? 0.0 : double(k) / double(points - 1);
        res.series.push_back({fmt(a), fmt(hom_experiment(a)), fmt((1 - a * a) / 2)});
    }
    return res;
}

ExperimentResult run_chsh(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    double f = p.number("werner_f");
    auto s = chsh_optimal_settings();
    double value = chsh_value(werner_state(f), s.a1, s.a2, s.b1, s.b2);
    res.summary.emplace_back("S", fmt(value));
    res.summary.emplace_back("closed_form", fmt(2 * std::sqrt(2.0) * (4 * f - 1) / 3));
    res.summary.emplace_back("classical_bound", fmt(lhv_bound(chsh_functional()).value));
    res.summary.emplace_back("tsirelson", fmt(2 * std::sqrt(2.0)));
    res.summary.emplace_back("violated", value > 2.0 ? "true" : "false");
    return res;
}

ExperimentResult run_ghz_paradox(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    double v = p.number("visibility");
    auto r = ghz_paradox_check(v);
    res.summary.emplace_back("E_xyy", fmt(r.e_xyy));
    res.summary.emplace_back("E_yxy", fmt(r.e_yxy));
    res.summary.emplace_back("E_yyx", fmt(r.e_yyx));
    res.summary.emplace_back("E_xxx", fmt(r.e_xxx));
    res.summary.emplace_back("contradiction", r.contradiction ? "true" : "false");
    double lo = 0.01, hi = 0.99;
    for (int i = 0; i < 40; ++i) {
        double mid = 0.5 * (lo + hi);
        (ghz_paradox_check(mid).contradiction ? hi : lo) = mid;
    }
    res.summary.emplace_back("lhv_threshold_visibility", fmt(0.5 * (lo + hi)));
    return res;
}

ExperimentResult run_leggett(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    double start = p.number("phi_start_deg"), stop = p.number("phi_stop_deg"),
           step = p.number("phi_step_deg");
    if (stop < start) throw InvalidParameter("parameter 'phi_stop_deg' must be >= phi_start_deg");
    res.series_header = {"phi_deg", "quantum", "bound", "violated"};
    double best = 0, best_phi = start;
    for (double d = start; d <= stop + 1e-9; d += step) {
        auto r = leggett_test(d * kPi / 180);
        res.series.push_back({fmt(d), fmt(r.quantum), fmt(r.bound), r.violated ? "true" : "false"});
        if (r.quantum - r.bound > best) {
            best = r.quantum - r.bound;
            best_phi = d;
        }
    }
    auto at = leggett_test(18.8 * kPi / 180);
    res.summary.emplace_back("quantum_at_18.8deg", fmt(at.quantum));
    res.summary.emplace_back("bound_at_18.8deg", fmt(at.bound));
    res.summary.emplace_back("max_violation", fmt(best));
    res.summary.emplace_back("max_violation_phi_deg", fmt(best_phi));
    return res;
}

QubitRegister parse_input_state(const std::string& name, std::uint64_t seed) {
    const double s = 1 / std::sqrt(2.0);
    if (name == "H") return QubitRegister::basis(1, 0);
    if (name == "V") return QubitRegister::basis(1, 1);
    if (name == "plus45") return QubitRegister(1, (VectorXcd(2) << s, s).finished());
    if (name == "minus45") return QubitRegister(1, (VectorXcd(2) << s, -s).finished());
    if (name == "R") return QubitRegister(1, (VectorXcd(2) << s, cxd(0, s)).finished());
    if (name == "L") return QubitRegister(1, (VectorXcd(2) << s, cxd(0, -s)).finished());
    // random: drawn from the seed
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    VectorXcd v(2);
    v << cxd(g(rng), g(rng)), cxd(g(rng), g(rng));
    return QubitRegister(1, std::move(v), true);
}

ExperimentResult run_teleport(const ParamReader& p, std::uint64_t seed) {
    ExperimentResult res;
    QubitRegister chi = parse_input_state(p.text("input"), seed);
    bool full = p.text("bsm") == "full";
    auto r = teleport(chi, BellKind::PsiMinus, full);
    res.series_header = {"outcome", "probability", "correction", "fidelity_corrected"};
    for (auto& b : r.branches)
        res.series.push_back({to_string(b.outcome), fmt(b.probability),
                              std::string(1, b.correction.ops[0]), fmt(b.fidelity_corrected)});
    res.summary.emplace_back("success_probability", fmt(r.success_probability));
    res.summary.emplace_back("mean_fidelity", fmt(r.mean_fidelity));
    res.summary.emplace_back("classical_limit", fmt(r.classical_limit));
    return res;
}

ExperimentResult run_swap(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    auto r = entanglement_swap();
    res.series_header = {"bsm_outcome", "probability", "pair14_matches_outcome"};
    auto s = chsh_optimal_settings();
    double chsh_after = 0;
    for (auto& b : r.branches) {
        QubitRegister want = [&] {
            switch (b.outcome) {
                case BellOutcomeKind::PsiPlus: return QubitRegister::bell("psi+");
                case BellOutcomeKind::PsiMinus: return QubitRegister::bell("psi-");
                case BellOutcomeKind::PhiPlus: return QubitRegister::bell("phi+");
                default: return QubitRegister::bell("phi-");
            }
        }();
        bool match = b.pair14.equals_up_to_phase(want, 1e-10);
        res.series.push_back({to_string(b.outcome), fmt(b.probability), match ? "true" : "false"});
        if (b.outcome == BellOutcomeKind::PsiMinus)
            chsh_after = chsh_value(DensityOperator(b.pair14), s.a1, s.a2, s.b1, s.b2);
    }
    MatrixXcd diff = r.unconditioned_14.matrix() - MatrixXcd::Identity(4, 4) / 4;
    res.summary.emplace_back("unconditioned_distance_from_I4", fmt(diff.cwiseAbs().maxCoeff()));
    res.summary.emplace_back("chsh_after_swap", fmt(chsh_after));
    double z2 = p.number("pair_z2");
    if (z2 > 0) res.summary.emplace_back("multipair_visibility", fmt(swap_visibility(std::sqrt(z2))));
    return res;
}

ExperimentResult run_purify_lo(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    double f = p.number("fidelity");
    auto r = purify_linear_optical(f);
    res.summary.emplace_back("fidelity_in", fmt(f));
    res.summary.emplace_back("fidelity_out", fmt(r.fidelity_out));
    res.summary.emplace_back("closed_form", fmt(f * f / (f * f + (1 - f) * (1 - f))));
    res.summary.emplace_back("success_probability", fmt(r.success_probability));
    res.summary.emplace_back("cross_term_four_mode_probability", fmt(purify_cross_term_probability(f)));
    return res;
}

ExperimentResult run_purify_bbpssw(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    double f = p.number("fidelity");
    auto r = purify_bbpssw(f);
    res.summary.emplace_back("fidelity_in", fmt(f));
    res.summary.emplace_back("fidelity_out", fmt(r.fidelity_out));
    res.summary.emplace_back("closed_form", fmt(bbpssw_formula(f)));
    res.summary.emplace_back("success_probability", fmt(r.success_probability));
    return res;
}

ExperimentResult run_grover(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    auto r = grover_box(p.text("marked"), p.number("noise"));
    for (auto& [label, prob] : r.outcome_distribution)
        res.summary.emplace_back("p_" + label, fmt(prob));
    res.summary.emplace_back("success_probability", fmt(r.success_probability));
    return res;
}

ExperimentResult run_repeater_sweep(const ParamReader& p, std::uint64_t seed) {
    ExperimentResult res;
    RepeaterConfig cfg;
    cfg.branching = int(p.integer("L"));
    cfg.purification_copies = int(p.integer("M"));
    cfg.elementary_fidelity = p.number("F1");
    cfg.purify_map = p.text("map") == "linear-optical" ? PurifyMapKind::LinearOptical
                                                       : PurifyMapKind::Bbpssw;
    DlczLink link{p.number("p_c"), p.number("t_delta")};
    long long runs = p.integer("runs");

    std::vector<long long> ns;
    std::stringstream ss(p.text("segments"));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            ns.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw InvalidParameter("parameter 'segments' must be a comma-separated integer list");
        }
    }
    if (ns.empty()) throw InvalidParameter("parameter 'segments' must name at least one size");
    for (long long n : ns) {
        cfg.segments = n;
        if (nesting_levels(n, cfg.branching) < 0)
            throw InvalidParameter("parameter 'segments' must be powers of L");
        auto nested = nested_protocol(cfg);
        if (!nested.feasible)
            throw InfeasibleConfiguration("recursion does not close at N = " + std::to_string(n) +
                                          ": fidelity stalls at " + fmt(nested.final_fidelity));
    }
    std::mt19937_64 rng(seed);
    auto rows = repeater_sweep(cfg, link, ns, rng, runs);
    res.series_header = {"N", "L", "M", "F1", "mean_time", "p50", "p95", "final_F", "R"};
    for (auto& r : rows)
        res.series.push_back({std::to_string(r.segments), std::to_string(r.branching),
                              std::to_string(r.copies), fmt(r.f1), fmt(r.mean_time), fmt(r.p50),
                              fmt(r.p95), fmt(r.final_fidelity), std::to_string(r.resources)});
    res.summary.emplace_back("sizes", p.text("segments"));
    res.summary.emplace_back("mean_time_max", fmt(rows.back().mean_time));
    res.summary.emplace_back("resources_max", std::to_string(rows.back().resources));
    return res;
}

ExperimentResult run_dense_coding(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    int msg = int(p.integer("message"));
    auto grade = p.text("analyzer") == "full" ? AnalyzerGrade::Full : AnalyzerGrade::TwoState;
    auto r = dense_coding(msg, grade);
    for (auto& [sym, prob] : r.decoded) res.summary.emplace_back("p_" + sym, fmt(prob));
    res.summary.emplace_back("capacity_bits", fmt(r.capacity_bits));
    return res;
}

ExperimentResult run_ardehali(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    auto r = ardehali_test(p.number("visibility"));
    res.summary.emplace_back("quantum_value", fmt(r.quantum_value));
    res.summary.emplace_back("classical_bound", fmt(r.classical_bound));
    res.summary.emplace_back("violated", r.violated ? "true" : "false");
    res.summary.emplace_back("threshold_visibility", fmt(ardehali_threshold_visibility()));
    return res;
}

ExperimentResult run_v4(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    FilterSpec f{p.number("sigma_p"), p.number("sigma_F"), p.number("sigma_f")};
    res.summary.emplace_back("V4", fmt(visibility_v4(f)));
    res.summary.emplace_back("no_filter_limit", fmt(std::sqrt(f.sigma_p * f.sigma_p /
                                                              (f.sigma_p * f.sigma_p +
                                                               f.sigma_F * f.sigma_F))));
    return res;
}

ExperimentResult run_multipair(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    double z2 = p.number("z2");
    res.summary.emplace_back("visibility", fmt(multipair_visibility(std::sqrt(z2))));
    res.summary.emplace_back("threshold_z2", fmt((std::sqrt(17.0) - 3) / 8));
    return res;
}

ExperimentResult run_franson(const ParamReader& p, std::uint64_t) {
    ExperimentResult res;
    double a2 = p.number("alpha2");
    auto r = franson_timebin(std::sqrt(a2), std::sqrt(1 - a2), int(p.integer("points")));
    res.summary.emplace_back("visibility", fmt(r.visibility));
    res.series_header = {"phi", "normalized_coincidence"};
    for (std::size_t k = 0; k < r.phis.size(); ++k)
        res.series.push_back({fmt(r.phis[k]), fmt(r.fringe[k])});
    return res;
}

ExperimentResult run_coincidence(const ParamReader& p, std::uint64_t seed) {
    ExperimentResult res;
    double alpha = p.number("alpha"), beta = p.number("beta");
    long long trials = p.integer("trials");
    FockState s = epr_interferometer(alpha, beta);
    Mode c1{"1c"}, d1{"1d"}, c2{"2c"}, d2{"2d"};
    auto r = coincidence_count(s, {{c1, d1, c2, d2}, {}}, trials, seed);
    res.series_header = {"pattern_1c_1d_2c_2d", "probability", "count"};
    for (auto& [k, prob] : r.probabilities) {
        std::string pat;
        for (int v : k) pat += std::to_string(v);
        long long cnt = 0;
        auto it = r.counts.find(k);
        if (it != r.counts.end()) cnt = it->second;
        res.series.push_back({pat, fmt(prob), std::to_string(cnt)});
    }
    res.summary.emplace_back("p_1c2d", fmt(r.probabilities[{1, 0, 0, 1}]));
    res.summary.emplace_back("law", fmt((1 + std::cos(alpha - beta)) / 4));
    return res;
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> v;
        v.push_back({{"hom",
                      "Hong-Ou-Mandel coincidence probability vs photon overlap",
                      {{"alpha", "float", "0.5", 0.0, 1.0, {}, "overlap amplitude of the two photons"},
                       {"points", "int", "21", 2, 1001, {}, "grid points of the alpha sweep"}}},
                     run_hom});
        v.push_back({{"chsh",
                      "CHSH value of the Werner state at the optimal settings",
                      {{"werner_f", "float", "1", 0.26, 1.0, {}, "singlet fidelity of the Werner state"}}},
                     run_chsh});
        v.push_back({{"ghz-paradox",
                      "GHZ expectations and the local-realism contradiction flag",
                      {{"visibility", "float", "1", 0.0, 1.0, {}, "GHZ admixture against white noise"}}},
                     run_ghz_paradox});
        v.push_back({{"leggett",
                      "Leggett-type inequality sweep over the difference angle",
                      {{"phi_start_deg", "float", "1", 0.01, 179.99, {}, "sweep start"},
                       {"phi_stop_deg", "float", "45", 0.01, 179.99, {}, "sweep stop"},
                       {"phi_step_deg", "float", "1", 0.001, 90, {}, "sweep step"}}},
                     run_leggett});
        v.push_back({{"teleport",
                      "single-qubit teleportation branch table",
                      {{"input", "string", "random", 0, 0,
                        {"random", "H", "V", "plus45", "minus45", "R", "L"}, "input state"},
                       {"bsm", "string", "full", 0, 0, {"full", "conclusive-only"}, "analysis grade"}}},
                     run_teleport});
        v.push_back({{"swap",
                      "entanglement swapping outcomes and the post-swap CHSH value",
                      {{"pair_z2", "float", "0", 0.0, 0.5, {}, "multi-pair |z|^2 of the sources (0 = ideal)"}}},
                     run_swap});
        v.push_back({{"purify-lo",
                      "linear-optical purification round",
                      {{"fidelity", "float", "0.75", 0.5000001, 1.0, {}, "input fidelity F > 1/2"}}},
                     run_purify_lo});
        v.push_back({{"purify-bbpssw",
                      "BBPSSW purification round",
                      {{"fidelity", "float", "0.75", 0.5000001, 1.0, {}, "input fidelity F > 1/2"}}},
                     run_purify_bbpssw});
        v.push_back({{"grover-box",
                      "two-bit search on the box cluster",
                      {{"marked", "string", "00", 0, 0, {"00", "01", "10", "11"}, "marked element"},
                       {"noise", "float", "0", 0.0, 1.0, {}, "white-noise admixture of the cluster"}}},
                     run_grover});
        v.push_back({{"repeater-sweep",
                      "Monte Carlo repeater sweep over segment counts",
                      {{"segments", "string", "2,4,8,16", 0, 0, {}, "comma-separated powers of L"},
                       {"L", "int", "2", 2, 8, {}, "branching factor"},
                       {"M", "int", "4", 1, 64, {}, "purification copies per level"},
                       {"F1", "float", "0.96", 0.5000001, 1.0, {}, "elementary pair fidelity"},
                       {"p_c", "float", "0.1", 1e-6, 0.2, {}, "per-attempt link success probability"},
                       {"t_delta", "float", "1", 1e-9, 1e9, {}, "attempt duration"},
                       {"map", "string", "bbpssw", 0, 0, {"bbpssw", "linear-optical"}, "purification map"},
                       {"runs", "int", "200", 1, 1000000, {}, "Monte Carlo runs per size"}}},
                     run_repeater_sweep});
        v.push_back({{"dense-coding",
                      "dense coding decode table and channel capacity",
                      {{"message", "int", "3", 0, 3, {}, "two-bit message"},
                       {"analyzer", "string", "full", 0, 0, {"full", "two-state"}, "analyzer grade"}}},
                     run_dense_coding});
        v.push_back({{"ardehali",
                      "four-photon Ardehali test at a given visibility",
                      {{"visibility", "float", "1", 0.0, 1.0, {}, "GHZ admixture against white noise"}}},
                     run_ardehali});
        v.push_back({{"visibility-v4",
                      "closed-form four-photon visibility for Gaussian filters",
                      {{"sigma_p", "float", "1", 1e-9, 1e9, {}, "pump spectral width"},
                       {"sigma_F", "float", "1", 1e-9, 1e9, {}, "filters on the mixed-source beams"},
                       {"sigma_f", "float", "1", 1e-9, 1e9, {}, "filters on the source-tagged beams"}}},
                     run_v4});
        v.push_back({{"multipair",
                      "four-photon interference visibility with multi-pair emission",
                      {{"z2", "float", "0.14", 0.0, 0.9, {}, "|z|^2 pair-emission probability"}}},
                     run_multipair});
        v.push_back({{"franson",
                      "Franson time-bin fringe",
                      {{"alpha2", "float", "0.5", 0.0, 1.0, {}, "|alpha|^2 of the early-early amplitude"},
                       {"points", "int", "24", 2, 10001, {}, "phase grid points"}}},
                     run_franson});
        v.push_back({{"epr-fringe",
                      "two-photon interferometer coincidences, exact or sampled",
                      {{"alpha", "float", "0.6", -10.0, 10.0, {}, "phase in path a"},
                       {"beta", "float", "0.1", -10.0, 10.0, {}, "phase in path b'"},
                       {"trials", "int", "0", 0, 100000000, {}, "0 = exact probabilities"}}},
                     run_coincidence});
        return v;
    }();
    return entries;
}

}  // namespace

const std::vector<ExperimentInfo>& list_experiments() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> v;
        for (const auto& e : registry()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

ExperimentResult run_experiment(const std::string& id,
                                const std::map<std::string, std::string>& params,
                                std::uint64_t seed) {
    for (const auto& e : registry()) {
        if (e.info.id != id) continue;
        validate(e.info.params, params);
        return e.run(ParamReader{params, e.info.params}, seed);
    }
    throw UnknownExperiment("unknown experiment id '" + id + "'");
}

std::string render_document(const std::string& id,
                            const std::map<std::string, std::string>& params, std::uint64_t seed,
                            const ExperimentResult& result) {
    std::ostringstream os;
    os << "# loqs experiment result\n";
    os << "experiment = " << id << "\n";
    os << "library_version = " << library_version() << "\n";
    os << "seed = " << seed << "\n";
    os << "\n[params]\n";
    const std::vector<ExperimentInfo>& infos = list_experiments();
    for (const auto& info : infos) {
        if (info.id != id) continue;
        for (const auto& s : info.params) {
            auto it = params.find(s.name);
            os << s.name << " = " << (it == params.end() ? s.default_value : it->second) << "\n";
        }
    }
    os << "\n[summary]\n";
    for (const auto& [k, v] : result.summary) os << k << " = " << v << "\n";
    if (!result.series.empty()) {
        os << "\n[series]\n";
        for (std::size_t c = 0; c < result.series_header.size(); ++c)
            os << (c ? "," : "") << result.series_header[c];
        os << "\n";
        for (const auto& row : result.series) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
            os << "\n";
        }
    }
    return os.str();
}

std::string render_series_csv(const ExperimentResult& result) {
    std::ostringstream os;
    for (std::size_t c = 0; c < result.series_header.size(); ++c)
        os << (c ? "," : "") << result.series_header[c];
    os << "\n";
    for (const auto& row : result.series) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << "\n";
    }
    return os.str();
}

std::map<std::string, std::string> parse_param_file(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line, section;
    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r");
        auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("parameter file line is not key = value: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        out[key] = value;
    }
    return out;
}

std::string library_version() { return "0.1.0"; }

}  // namespace loqs
