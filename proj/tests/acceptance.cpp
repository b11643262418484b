// Acceptance suite: every top-level behavior pinned to its stated
// tolerance, one pass/fail line each.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "loqs/experiments.hpp"
#include "loqs/mbqc.hpp"
#include "loqs/nonclassicality.hpp"
#include "loqs/optics.hpp"
#include "loqs/protocols.hpp"
#include "loqs/repeater.hpp"
#include "loqs/sources.hpp"

using namespace loqs;

namespace {

const double kPi = 3.14159265358979323846;
int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %2d  %-24s %s  %s\n", idx, name, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

char buf[512];

std::string fmt(const char* f, ...) {
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

void criterion_1_hom() {
    bool ok = std::abs(hom_experiment(1.0) - 0.0) <= 1e-12 &&
              std::abs(hom_experiment(0.0) - 0.5) <= 1e-12;
    double worst = 0;
    for (int k = 0; k <= 20; ++k) {
        double a = k / 20.0;
        worst = std::max(worst, std::abs(hom_experiment(a) - (1 - a * a) / 2));
    }
    ok = ok && worst <= 1e-12;
    report(1, "hom", ok, fmt("grid deviation %.2e (tol 1e-12)", worst));
}

void criterion_2_chsh() {
    DensityOperator singlet((QubitRegister::bell("psi-")));
    auto s = chsh_optimal_settings();
    double v = chsh_value(singlet, s.a1, s.a2, s.b1, s.b2);
    bool ok = std::abs(v - 2 * std::sqrt(2.0)) <= 1e-9;

    double bound = lhv_bound(chsh_functional()).value;
    ok = ok && bound == 2.0;

    double lo = 0.5, hi = 1.0;
    for (int i = 0; i < 50; ++i) {
        double mid = 0.5 * (lo + hi);
        (chsh_value(werner_state(mid), s.a1, s.a2, s.b1, s.b2) < 2.0 ? lo : hi) = mid;
    }
    double crossing = 0.5 * (lo + hi);
    double closed_form = (3 / std::sqrt(2.0) + 1) / 4;
    ok = ok && std::abs(crossing - closed_form) <= 1e-6;
    report(2, "chsh", ok,
           fmt("S=%.12g, LHV bound=%g, Werner crossing %.8f vs %.8f", v, bound, crossing,
               closed_form));
}

void criterion_3_ghz_correlations() {
    Mode d1{"d1"}, d2{"d2"}, e1{"e1"}, e2{"e2"}, f1{"f1"}, f2{"f2"};
    double worst_e = 0, worst_two = 0, worst_one = 0;
    for (double pa : {0.0, 1.1, 2.7, 4.4}) {
        for (double pb : {0.4, 1.9, 3.3, 5.6}) {
            for (double pc : {0.0, 0.9, 2.2, 5.0}) {
                FockState s = ghz_interferometer(pa, pb, pc);
                auto res = coincidence_count(s, {{d1, d2, e1, e2, f1, f2}, {}});
                double e = 0, p_two = 0, p_one = 0;
                for (auto& [k, p] : res.probabilities) {
                    if (p < 1e-15) continue;
                    int sign = (k[1] ? -1 : 1) * (k[3] ? -1 : 1) * (k[5] ? -1 : 1);
                    e += sign * p;
                    if (k[2] == 1 && k[4] == 1) p_two += p;
                    if (k[4] == 1) p_one += p;
                }
                worst_e = std::max(worst_e, std::abs(e - std::sin(pa + pb + pc)));
                worst_two = std::max(worst_two, std::abs(p_two - 0.25));
                worst_one = std::max(worst_one, std::abs(p_one - 0.5));
            }
        }
    }
    bool ok = worst_e <= 1e-10 && worst_two <= 1e-10 && worst_one <= 1e-10;
    report(3, "ghz-correlations", ok,
           fmt("E dev %.2e, two-fold dev %.2e, singles dev %.2e (tol 1e-10)", worst_e, worst_two,
               worst_one));
}

void criterion_4_ghz_paradox() {
    auto ideal = ghz_paradox_check(1.0);
    bool ok = std::abs(ideal.e_xyy + 1) <= 1e-10 && std::abs(ideal.e_yxy + 1) <= 1e-10 &&
              std::abs(ideal.e_yyx + 1) <= 1e-10 && std::abs(ideal.e_xxx - 1) <= 1e-10 &&
              ideal.contradiction;
    double lo = 0.2, hi = 0.9;
    for (int i = 0; i < 40; ++i) {
        double mid = 0.5 * (lo + hi);
        (ghz_paradox_check(mid).contradiction ? hi : lo) = mid;
    }
    double flip = 0.5 * (lo + hi);
    ok = ok && std::abs(flip - 0.5) <= 0.01;
    report(4, "ghz-paradox", ok,
           fmt("(%.1f,%.1f,%.1f,%.1f), LHV flip at visibility %.4f", ideal.e_xyy, ideal.e_yxy,
               ideal.e_yyx, ideal.e_xxx, flip));
}

void criterion_5_ardehali() {
    double v1 = ardehali_test(1.0).quantum_value;
    bool ok = std::abs(v1 - 4 * std::sqrt(2.0)) <= 1e-9;

    // threshold: the Bell-operator value crosses the classical bound 2
    double lo = 0.01, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (ardehali_test(mid).quantum_value < 2.0 ? lo : hi) = mid;
    }
    double threshold = 0.5 * (lo + hi);
    ok = ok && std::abs(threshold - 1 / (2 * std::sqrt(2.0))) <= 1e-9;

    double vexp = ardehali_test(0.784).quantum_value;
    ok = ok && std::abs(vexp - 4.433) <= 0.02;
    report(5, "ardehali", ok,
           fmt("V=1: %.10f, threshold %.10f, V=0.784: %.4f", v1, threshold, vexp));
}

void criterion_6_leggett() {
    auto at = leggett_test(18.8 * kPi / 180);
    bool values_ok = std::abs(at.bound - 3.792) <= 0.002 && std::abs(at.quantum - 3.893) <= 0.002;

    auto margin = [](double deg) {
        auto r = leggett_test(deg * kPi / 180);
        return r.quantum - r.bound;
    };
    // continuous crossings of quantum = bound (0 and about 37.1 degrees)
    double upper_crossing;
    {
        double l = 10, h = 90;
        for (int i = 0; i < 50; ++i) {
            double mid = 0.5 * (l + h);
            (margin(mid) > 0 ? l : h) = mid;
        }
        upper_crossing = 0.5 * (l + h);
    }
    // the published window samples the violation on the experiment's
    // 4-degree measurement grid: the first and last violating grid points
    // are the reported endpoints
    double first_violating = -1, last_violating = -1;
    for (int deg = 4; deg <= 88; deg += 4) {
        if (margin(double(deg)) > 0) {
            if (first_violating < 0) first_violating = deg;
            last_violating = deg;
        }
    }
    bool endpoints_ok =
        std::abs(first_violating - 4.0) <= 0.5 && std::abs(last_violating - 36.0) <= 0.5;
    bool ok = values_ok && endpoints_ok;
    report(6, "leggett", ok,
           fmt("bound %.4f quantum %.4f at 18.8deg; violating 4-degree grid points span "
               "%.0f..%.0f deg (continuous crossings 0 and %.2f)",
               at.bound, at.quantum, first_violating, last_violating, upper_crossing));
}

void criterion_7_teleport_family() {
    std::mt19937_64 rng(1234);
    std::normal_distribution<double> g;
    bool ok = true;
    double worst_uniform = 0, worst_fid = 0;
    for (int t = 0; t < 10; ++t) {
        VectorXcd v(2);
        v << cxd(g(rng), g(rng)), cxd(g(rng), g(rng));
        QubitRegister chi(1, std::move(v), true);
        auto r = teleport(chi, BellKind::PsiMinus);
        for (auto& b : r.branches) {
            worst_uniform = std::max(worst_uniform, std::abs(b.probability - 0.25));
            worst_fid = std::max(worst_fid, std::abs(b.fidelity_corrected - 1.0));
        }
        auto rome = teleport_rome(chi);
        for (auto& b : rome) {
            worst_uniform = std::max(worst_uniform, std::abs(b.probability - 0.25));
            worst_fid = std::max(worst_fid, std::abs(b.fidelity_corrected - 1.0));
        }
        for (int receiver : {0, 1, 2}) {
            auto od = teleport_open_destination(chi, receiver);
            worst_fid = std::max(worst_fid, std::abs(od.fidelity - 1.0));
        }
    }
    auto two = teleport_two_qubit(QubitRegister::bell("psi-"));
    worst_fid = std::max(worst_fid, std::abs(two.fidelity_direct - 1.0));
    double identity_gap = std::abs(two.fidelity_by_pauli - two.fidelity_direct);
    ok = worst_uniform <= 1e-10 && worst_fid <= 1e-10 && identity_gap <= 1e-10;
    report(7, "teleport-family", ok,
           fmt("uniformity dev %.2e, fidelity dev %.2e, identity gap %.2e; benchmarks: classical "
               "limit %.6f, estimation limit %.2f",
               worst_uniform, worst_fid, identity_gap, 2.0 / 3.0, 0.40));
}

void criterion_8_swapping() {
    auto res = entanglement_swap();
    bool ok = true;
    for (auto& b : res.branches) {
        QubitRegister want = [&] {
            switch (b.outcome) {
                case BellOutcomeKind::PsiPlus: return QubitRegister::bell("psi+");
                case BellOutcomeKind::PsiMinus: return QubitRegister::bell("psi-");
                case BellOutcomeKind::PhiPlus: return QubitRegister::bell("phi+");
                default: return QubitRegister::bell("phi-");
            }
        }();
        ok = ok && b.pair14.equals_up_to_phase(want, 1e-10);
    }
    double dist = (res.unconditioned_14.matrix() - MatrixXcd::Identity(4, 4) / 4).cwiseAbs().maxCoeff();
    ok = ok && dist <= 1e-10;
    auto s = chsh_optimal_settings();
    double chsh_after = 0;
    for (auto& b : res.branches)
        if (b.outcome == BellOutcomeKind::PsiMinus)
            chsh_after = chsh_value(DensityOperator(b.pair14), s.a1, s.a2, s.b1, s.b2);
    ok = ok && std::abs(chsh_after - 2 * std::sqrt(2.0)) <= 1e-9;
    report(8, "swapping", ok,
           fmt("unconditioned dist %.2e, CHSH after swap %.10f", dist, chsh_after));
}

void criterion_9_purification() {
    double worst_bb = 0, worst_lo = 0;
    for (double f = 0.55; f <= 0.951; f += 0.05) {
        worst_bb = std::max(worst_bb, std::abs(purify_bbpssw(f).fidelity_out - bbpssw_formula(f)));
        worst_lo = std::max(worst_lo, std::abs(purify_linear_optical(f).fidelity_out -
                                               f * f / (f * f + (1 - f) * (1 - f))));
    }
    double lo75 = purify_linear_optical(0.75).fidelity_out;
    double lo80 = purify_linear_optical(0.80).fidelity_out;
    double cross = purify_cross_term_probability(0.75);
    bool ok = worst_bb <= 1e-10 && worst_lo <= 1e-10 && std::abs(lo75 - 0.9) <= 1e-10 &&
              std::abs(lo80 - 16.0 / 17.0) <= 1e-10 && cross <= 1e-14;
    report(9, "purification", ok,
           fmt("BBPSSW dev %.2e, LO dev %.2e, F'(0.75)=%.10f, F'(0.8)=%.10f, cross %.1e", worst_bb,
               worst_lo, lo75, lo80, cross));
}

void criterion_10_multipair() {
    double lo = 0.05, hi = 0.3;
    for (int i = 0; i < 18; ++i) {
        double mid = 0.5 * (lo + hi);
        (multipair_visibility(std::sqrt(mid)) > 0.5 ? lo : hi) = mid;
    }
    double crossing = 0.5 * (lo + hi);
    double want = (std::sqrt(17.0) - 3) / 8;
    bool ok = std::abs(crossing - want) <= 0.005;
    report(10, "multipair-threshold", ok,
           fmt("visibility crosses 50%% at |z|^2 = %.4f vs %.4f (tol 0.005)", crossing, want));
}

void criterion_11_v4() {
    double v_inf = visibility_v4({1.3, 0.9, 1e9});
    double simplified = std::sqrt(1.3 * 1.3 / (1.3 * 1.3 + 0.9 * 0.9));
    bool ok = std::abs(v_inf - simplified) <= 1e-9;
    // monotonicity grids
    for (double f : {0.5, 1.0, 2.0}) {
        double prev = 2;
        for (double F = 0.2; F < 3.0; F += 0.2) {
            double v = visibility_v4({1.0, F, f});
            ok = ok && v < prev;
            prev = v;
        }
        double prev2 = 0;
        for (double p = 0.2; p < 3.0; p += 0.2) {
            double v = visibility_v4({p, 1.0, f});
            ok = ok && v > prev2;
            prev2 = v;
        }
    }
    report(11, "visibility-v4", ok, fmt("no-filter limit dev %.2e, monotone grids", std::abs(v_inf - simplified)));
}

void criterion_12_dense_coding() {
    double full = dense_coding(0, AnalyzerGrade::Full).capacity_bits;
    double two = dense_coding(0, AnalyzerGrade::TwoState).capacity_bits;
    bool ok = std::abs(full - 2.0) <= 1e-9 && std::abs(two - std::log2(3.0)) <= 1e-9;
    report(12, "dense-coding", ok, fmt("capacities %.10f and %.10f", full, two));
}

void criterion_13_mbqc() {
    bool ok = true;
    std::string note;

    // stabilizers +1 for every built graph up to 10 qubits
    std::vector<ClusterGraph> graphs;
    for (int n = 2; n <= 8; ++n) graphs.push_back(ClusterGraph::chain(n));
    graphs.push_back(ClusterGraph::box());
    graphs.push_back(ClusterGraph::lattice(2, 3));
    graphs.push_back(ClusterGraph::lattice(3, 3));
    graphs.push_back(ClusterGraph::lattice(2, 5));
    double worst_stab = 0;
    for (const auto& g : graphs)
        for (double e : verify_stabilizers(build_cluster(g), g))
            worst_stab = std::max(worst_stab, std::abs(e - 1.0));
    ok = ok && worst_stab <= 1e-10;

    // measurement-calculus rules on chains up to 6 (z and y)
    bool rules_ok = true;
    for (int n = 3; n <= 6 && rules_ok; ++n) {
        ClusterGraph g = ClusterGraph::chain(n);
        QubitRegister cluster = build_cluster(g);
        std::vector<int> labels(n);
        std::iota(labels.begin(), labels.end(), 0);
        for (int v = 0; v < n && rules_ok; ++v) {
            for (auto& br : measure_pattern(cluster, labels, {{v, 'z', 0, {}}})) {
                QubitRegister fixed = br.state;
                if (br.outcomes[0])
                    for (int nb : g.neighbors(v)) fixed = fixed.apply1(pauli_z(), nb < v ? nb : nb - 1);
                rules_ok = rules_ok && fixed.equals_up_to_phase(build_cluster(graph_after_z(g, v)), 1e-10);
            }
            if (v == 0 || v == n - 1) continue;
            Eigen::Matrix2cd s_dag = Eigen::Matrix2cd::Identity();
            s_dag(1, 1) = cxd(0, -1);
            for (auto& br : measure_pattern(cluster, labels, {{v, 'y', 0, {}}})) {
                QubitRegister fixed = br.state;
                for (int nb : g.neighbors(v)) {
                    Eigen::Matrix2cd corr = br.outcomes[0] ? Eigen::Matrix2cd(s_dag.adjoint()) : s_dag;
                    fixed = fixed.apply1(corr, nb < v ? nb : nb - 1);
                }
                rules_ok = rules_ok && fixed.equals_up_to_phase(build_cluster(graph_after_y(g, v)), 1e-10);
            }
        }
    }
    ok = ok && rules_ok;

    // type-I fusion: length rule with success probability exactly 1/2
    bool fusion_ok = true;
    for (int n = 2; n <= 4; ++n)
        for (int m = 2; m <= 4; ++m) {
            auto branches = fuse(ClusterGraph::chain(n), n - 1, ClusterGraph::chain(m), 0, FuseKind::TypeI);
            double p_succ = 0;
            for (auto& br : branches) {
                if (!br.success) continue;
                p_succ += br.probability;
                fusion_ok = fusion_ok && br.graph.edges == ClusterGraph::chain(n + m - 1).edges &&
                            br.state.equals_up_to_phase(build_cluster(br.graph), 1e-9);
            }
            fusion_ok = fusion_ok && std::abs(p_succ - 0.5) <= 1e-12;
        }
    ok = ok && fusion_ok;

    // box-cluster search succeeds with certainty for all four labels
    double worst_grover = 0;
    for (const char* m : {"00", "01", "10", "11"})
        worst_grover = std::max(worst_grover, std::abs(grover_box(m).success_probability - 1.0));
    ok = ok && worst_grover <= 1e-10;

    // persistency of n-chains: the integer part [n/2]; for odd n that
    // value, not the ceiling, is the exhaustive minimum, while ceil(n/2)
    // removals always suffice
    bool persist_ok = true;
    for (int n = 2; n <= 8; ++n) {
        auto r = persistency_check(n);
        persist_ok = persist_ok && r.removals == n / 2;
    }
    ok = ok && persist_ok;

    report(13, "cluster-mbqc", ok,
           fmt("stab dev %.2e, rules %s, fusion %s, grover dev %.2e, persistency [n/2] %s",
               worst_stab, rules_ok ? "ok" : "FAIL", fusion_ok ? "ok" : "FAIL", worst_grover,
               persist_ok ? "ok" : "FAIL"));
}

void criterion_14_repeater() {
    bool ok = true;
    // exact integer resource identity on the (L, M, n) grid
    for (int l : {2, 3, 4})
        for (int m : {1, 2, 4})
            for (int n = 1; n <= 4; ++n) {
                RepeaterConfig cfg;
                cfg.branching = l;
                cfg.purification_copies = m;
                cfg.segments = 1;
                for (int i = 0; i < n; ++i) cfg.segments *= l;
                long long direct = 1;
                for (int i = 0; i < n; ++i) direct *= 1LL * l * m;
                ok = ok && resource_count(cfg) == direct;
            }

    // DLCZ mean rounds = 1/p_c within 3 sigma over 1e5 runs
    DlczLink link{0.01, 1.0};
    std::mt19937_64 rng(77);
    const long long runs = 100000;
    double sum = 0;
    for (long long i = 0; i < runs; ++i) sum += double(dlcz_generate(link, rng).round);
    double mean = sum / double(runs);
    double sd = std::sqrt(1 - link.p_c) / link.p_c / std::sqrt(double(runs));
    ok = ok && std::abs(mean - 1 / link.p_c) <= 3 * sd;

    // polynomial repeater vs exponential direct transmission
    RepeaterConfig base{2, 2, 2, 0.98, PurifyMapKind::Bbpssw, 0.55, 1.0};
    DlczLink fast{0.1, 1.0};
    auto rows = repeater_sweep(base, fast, {2, 4, 8, 16}, rng, 400);
    std::vector<double> slope;
    for (std::size_t i = 1; i < rows.size(); ++i)
        slope.push_back(std::log(rows[i].mean_time / rows[i - 1].mean_time) /
                        std::log(double(rows[i].segments) / double(rows[i - 1].segments)));
    bool slope_ok = true;
    for (std::size_t i = 1; i < slope.size(); ++i)
        slope_ok = slope_ok && std::abs(slope[i] - slope[i - 1]) < 0.9;
    ok = ok && slope_ok && slope.back() < 4.0;

    double prev_ratio = 0;
    bool ratio_ok = true;
    for (std::size_t i = 0; i < 3; ++i) {
        auto d = simulate_direct(rows[i].segments, 0.1, 1.0, rng, 50);
        double ratio = d.mean_time / rows[i].mean_time;
        ratio_ok = ratio_ok && ratio > prev_ratio;
        prev_ratio = ratio;
    }
    ok = ok && ratio_ok;
    report(14, "repeater", ok,
           fmt("R identity exact, DLCZ mean %.2f vs %.0f, slopes %.2f..%.2f, direct/repeater "
               "ratio diverges: %s",
               mean, 1 / link.p_c, slope.front(), slope.back(), ratio_ok ? "yes" : "no"));
}

void criterion_15_reproducibility() {
    bool ok = true;
    for (const char* id : {"teleport", "epr-fringe", "repeater-sweep"}) {
        std::map<std::string, std::string> params;
        if (std::string(id) == "repeater-sweep") {
            params["runs"] = "50";
            params["segments"] = "2,4";
        }
        if (std::string(id) == "epr-fringe") params["trials"] = "2000";
        auto a = run_experiment(id, params, 99);
        auto b = run_experiment(id, params, 99);
        ok = ok && render_document(id, params, 99, a) == render_document(id, params, 99, b);
    }
    report(15, "reproducibility", ok, "equal seeds give byte-identical documents");
}

}  // namespace

int main() {
    criterion_1_hom();
    criterion_2_chsh();
    criterion_3_ghz_correlations();
    criterion_4_ghz_paradox();
    criterion_5_ardehali();
    criterion_6_leggett();
    criterion_7_teleport_family();
    criterion_8_swapping();
    criterion_9_purification();
    criterion_10_multipair();
    criterion_11_v4();
    criterion_12_dense_coding();
    criterion_13_mbqc();
    criterion_14_repeater();
    criterion_15_reproducibility();
    if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    else std::printf("all criteria passed\n");
    return g_failures == 0 ? 0 : 1;
}
