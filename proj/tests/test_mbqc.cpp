#include "doctest.h"

#include <random>

#include "loqs/mbqc.hpp"

using namespace loqs;

namespace {

QubitRegister random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    VectorXcd v(1LL << n);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cxd(g(rng), g(rng));
    return QubitRegister(n, std::move(v), true);
}

}  // namespace

TEST_CASE("cluster chains are LU-related to Bell and GHZ as expected") {
    // 2-chain: Schmidt rank 2 across the cut
    auto c2 = build_cluster(ClusterGraph::chain(2));
    CHECK(schmidt_decompose(c2, {0}).size() == 2);

    // 3-chain: LU-equivalent to GHZ3 <=> every single-qubit reduction of
    // both states has the same spectrum {1/2, 1/2}
    auto c3 = build_cluster(ClusterGraph::chain(3));
    auto ghz3 = QubitRegister::ghz(3);
    for (int q = 0; q < 3; ++q) {
        auto rc = schmidt_decompose(c3, {q});
        auto rg = schmidt_decompose(ghz3, {q});
        REQUIRE(rc.size() == rg.size());
        for (std::size_t k = 0; k < rc.size(); ++k)
            CHECK(rc[k].coefficient == doctest::Approx(rg[k].coefficient).epsilon(1e-10));
    }
    // explicit LU witness: H on qubits 0 and 2 maps the 3-chain onto GHZ3
    auto mapped = c3.apply1(hadamard(), 0).apply1(hadamard(), 2);
    CHECK(mapped.equals_up_to_phase(ghz3, 1e-10));

    // 4-chain vs GHZ4: the {0,2} cut spectra differ (rank 4 vs rank 2),
    // so no local unitary maps one onto the other
    auto c4 = build_cluster(ClusterGraph::chain(4));
    auto s_c4 = schmidt_decompose(c4, {0, 2});
    auto s_g4 = schmidt_decompose(QubitRegister::ghz(4), {0, 2});
    CHECK(s_c4.size() == 4);
    CHECK(s_g4.size() == 2);
}

TEST_CASE("stabilizers: +1 on built graphs, kappa flips, uniqueness") {
    std::vector<ClusterGraph> graphs = {ClusterGraph::chain(2), ClusterGraph::chain(5),
                                        ClusterGraph::box(), ClusterGraph::lattice(2, 3),
                                        ClusterGraph::lattice(3, 3)};
    for (const auto& g : graphs) {
        auto state = build_cluster(g);
        for (double e : verify_stabilizers(state, g)) CHECK(e == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(stabilizer_projection_overlap(state, g) == doctest::Approx(1.0).epsilon(1e-10));
    }

    // z on one vertex flips exactly that eigenvalue
    ClusterGraph box = ClusterGraph::box();
    auto state = build_cluster(box).apply1(pauli_z(), 2);
    auto eig = verify_stabilizers(state, box);
    for (int v = 0; v < 4; ++v) CHECK(eig[v] == doctest::Approx(v == 2 ? -1.0 : 1.0).epsilon(1e-10));

    // kappa bits enter the construction the same way
    ClusterGraph flipped = ClusterGraph::box();
    flipped.kappa[1] = 1;
    auto eig2 = verify_stabilizers(build_cluster(flipped), ClusterGraph::box());
    for (int v = 0; v < 4; ++v) CHECK(eig2[v] == doctest::Approx(v == 1 ? -1.0 : 1.0).epsilon(1e-10));

    // GHZ4 against the box stabilizers: not a joint +1 eigenstate
    auto bad = verify_stabilizers(QubitRegister::ghz(4), box);
    bool some_off = false;
    for (double e : bad) some_off |= std::abs(e - 1.0) > 1e-6;
    CHECK(some_off);
}

TEST_CASE("measurement calculus: z and y rules rebuild the transformed graphs (chains up to 6)") {
    for (int n = 3; n <= 6; ++n) {
        ClusterGraph g = ClusterGraph::chain(n);
        QubitRegister cluster = build_cluster(g);
        std::vector<int> labels(n);
        std::iota(labels.begin(), labels.end(), 0);

        for (int v = 0; v < n; ++v) {
            // z measurement: severed graph, z byproducts on ex-neighbors
            auto branches = measure_pattern(cluster, labels, {{v, 'z', 0, {}}});
            ClusterGraph cut = graph_after_z(g, v);
            for (auto& br : branches) {
                QubitRegister fixed = br.state;
                if (br.outcomes[0])
                    for (int nb : g.neighbors(v)) fixed = fixed.apply1(pauli_z(), nb < v ? nb : nb - 1);
                CHECK(fixed.equals_up_to_phase(build_cluster(cut), 1e-10));
            }

            if (v == 0 || v == n - 1) continue;
            // y measurement on an interior vertex: neighbors link up with
            // a pi/2 z-rotation each
            auto ybr = measure_pattern(cluster, labels, {{v, 'y', 0, {}}});
            ClusterGraph linked = graph_after_y(g, v);
            Eigen::Matrix2cd s_dag = Eigen::Matrix2cd::Identity();
            s_dag(1, 1) = cxd(0, -1);
            for (auto& br : ybr) {
                QubitRegister fixed = br.state;
                for (int nb : g.neighbors(v)) {
                    int q = nb < v ? nb : nb - 1;
                    Eigen::Matrix2cd corr = s_dag;
                    if (br.outcomes[0]) corr = corr.adjoint().eval();  // S instead of S+
                    fixed = fixed.apply1(corr, q);
                }
                CHECK(fixed.equals_up_to_phase(build_cluster(linked), 1e-10));
            }
        }
    }
}

TEST_CASE("x measurement on an interior vertex joins the neighbors into one logical qubit") {
    for (int n : {3, 4, 5, 6}) {
        ClusterGraph g = ClusterGraph::chain(n);
        QubitRegister cluster = build_cluster(g);
        std::vector<int> labels(n);
        std::iota(labels.begin(), labels.end(), 0);
        for (int v = 1; v + 1 < n; ++v) {
            auto branches = measure_pattern(cluster, labels, {{v, 'x', 0, {}}});
            // the contracted chain: neighbors u = v-1, w = v+1 merge
            ClusterGraph contracted = ClusterGraph::chain(n - 2);
            for (auto& br : branches) {
                // decode the redundant pair: outcome 0 leaves it in the
                // even-parity encoding (|00>, |11>), outcome 1 in the odd
                const int qu = v - 1, qw = v;  // positions after dropping v
                const int m = n - 1;
                VectorXcd dec = VectorXcd::Zero(1LL << (m - 1));
                for (Eigen::Index i = 0; i < br.state.dim(); ++i) {
                    int bu = int(i >> (m - 1 - qu)) & 1, bw = int(i >> (m - 1 - qw)) & 1;
                    if ((bu ^ bw) != br.outcomes[0]) {
                        if (std::abs(br.state.amplitude(i)) > 1e-10) FAIL("support outside encoding");
                        continue;
                    }
                    Eigen::Index rest = 0;
                    for (int k = 0; k < m; ++k) {
                        if (k == qw) continue;  // drop the second physical carrier
                        rest = (rest << 1) | ((i >> (m - 1 - k)) & 1);
                    }
                    dec(rest) += br.state.amplitude(i);
                }
                QubitRegister logical(m - 1, dec, true);
                // byproducts: a Pauli on the merged qubit plus possible z
                // flips on its outer neighbors (the sqrt(+-iY) rule)
                QubitRegister want = build_cluster(contracted);
                bool match = false;
                std::vector<int> outer;
                if (qu - 1 >= 0) outer.push_back(qu - 1);
                if (qu + 1 < m - 1) outer.push_back(qu + 1);
                for (char c : {'i', 'x', 'y', 'z'}) {
                    for (int zmask = 0; zmask < (1 << outer.size()) && !match; ++zmask) {
                        QubitRegister cand = logical.apply1(pauli(c), qu);
                        for (std::size_t k = 0; k < outer.size(); ++k)
                            if (zmask & (1 << k)) cand = cand.apply1(pauli_z(), outer[k]);
                        match = cand.equals_up_to_phase(want, 1e-10);
                    }
                    if (match) break;
                }
                CHECK(match);
            }
        }
    }
}

TEST_CASE("4-chain reduced to a 3-chain by a computational-basis measurement") {
    ClusterGraph g = ClusterGraph::chain(4);
    auto branches = measure_pattern(build_cluster(g), {0, 1, 2, 3}, {{0, 'z', 0, {}}});
    ClusterGraph c3 = ClusterGraph::chain(3);
    for (auto& br : branches) {
        QubitRegister fixed = br.state;
        if (br.outcomes[0]) fixed = fixed.apply1(pauli_z(), 0);
        CHECK(fixed.equals_up_to_phase(build_cluster(c3), 1e-10));
    }
}

TEST_CASE("one-way Euler rotation matches the direct matrix product on every branch") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 4; ++t) {
        auto input = random_state(1, rng);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        double xi = u(rng), eta = u(rng), zeta = u(rng);
        auto branches = one_way_rotation(input, xi, eta, zeta);
        QubitRegister want(1, (euler_rotation_matrix(xi, eta, zeta) * input.amplitudes()).eval());
        double total = 0;
        for (auto& b : branches) {
            total += b.probability;
            CHECK(b.corrected.equals_up_to_phase(want, 1e-10));
            CHECK(b.probability == doctest::Approx(1.0 / 16).epsilon(1e-10));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("one-way CNOT: process reconstruction on basis and superposition inputs") {
    std::vector<QubitRegister> inputs;
    for (int b = 0; b < 4; ++b) inputs.push_back(QubitRegister::basis(2, b));
    VectorXcd plus_plus = VectorXcd::Constant(4, 0.5);
    inputs.emplace_back(2, plus_plus);
    VectorXcd sup(4);
    sup << 0.5, cxd(0, 0.5), 0.5, -0.5;
    inputs.emplace_back(2, sup);

    for (const auto& chi : inputs) {
        auto branches = one_way_cnot(chi);
        QubitRegister want = chi.apply2(cnot_gate(), 0, 1);
        double total = 0;
        for (auto& b : branches) {
            total += b.probability;
            CHECK(b.corrected.equals_up_to_phase(want, 1e-10));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("sampled patterns reproduce one of the exhaustive branches") {
    ClusterGraph g = ClusterGraph::chain(4);
    QubitRegister cluster = build_cluster(g);
    std::vector<PatternStep> steps = {{1, 'x', 0, {}}, {2, 'e', 0.7, {0}}};
    auto all = measure_pattern(cluster, {0, 1, 2, 3}, steps);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        auto one = measure_pattern_sampled(cluster, {0, 1, 2, 3}, steps, rng);
        bool found = false;
        for (auto& br : all)
            if (br.outcomes == one.outcomes) {
                found = true;
                CHECK(std::abs(br.probability - one.probability) < 1e-12);
                CHECK(br.state.equals_up_to_phase(one.state, 1e-10));
            }
        CHECK(found);
    }
}

TEST_CASE("type-I fusion: length rule, probability 1/2, verified states") {
    for (int n : {2, 3, 4}) {
        for (int m : {2, 3, 4}) {
            auto branches =
                fuse(ClusterGraph::chain(n), n - 1, ClusterGraph::chain(m), 0, FuseKind::TypeI);
            double p_succ = 0, p_all = 0;
            for (auto& br : branches) {
                p_all += br.probability;
                if (!br.success) continue;
                p_succ += br.probability;
                // merged graph is the (n+m-1)-chain
                CHECK(br.graph.n == n + m - 1);
                CHECK(br.graph.edges == ClusterGraph::chain(n + m - 1).edges);
                CHECK(br.state.equals_up_to_phase(build_cluster(br.graph), 1e-9));
                auto eig = verify_stabilizers(br.state, br.graph);
                for (double e : eig) CHECK(e == doctest::Approx(1.0).epsilon(1e-9));
            }
            CHECK(p_succ == doctest::Approx(0.5).epsilon(1e-10));
            CHECK(p_all == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("type-I failure severs the chain ends") {
    auto branches = fuse(ClusterGraph::chain(3), 2, ClusterGraph::chain(2), 0, FuseKind::TypeI);
    for (auto& br : branches) {
        if (br.success) continue;
        // severed: 2-chain from A, isolated vertex from B
        ClusterGraph want(3);
        want.add_edge(0, 1);
        CHECK(br.graph.edges == want.edges);
        CHECK(br.state.equals_up_to_phase(build_cluster(want), 1e-9));
    }
}

TEST_CASE("type-II fusion: success probability 1/2, merged logical site") {
    auto branches = fuse(ClusterGraph::chain(2), 1, ClusterGraph::chain(2), 0, FuseKind::TypeII);
    double p_succ = 0, p_all = 0;
    for (auto& br : branches) {
        p_all += br.probability;
        if (!br.success) continue;
        p_succ += br.probability;
        CHECK(br.graph.n == 2);
        // the merged two-vertex graph is connected
        CHECK(br.graph.edges == ClusterGraph::chain(2).edges);
        // the physical state is maximally entangled across the cut
        auto terms = schmidt_decompose(br.state, {0});
        REQUIRE(terms.size() == 2);
        CHECK(terms[0].coefficient == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-9));
    }
    CHECK(p_succ == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p_all == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("leg connection succeeds within n0 tries with probability 1 - 2^-n0") {
    for (int n0 = 1; n0 <= 6; ++n0)
        CHECK(leg_connection_probability(n0) == doctest::Approx(1.0 - std::pow(2.0, -n0)).epsilon(1e-12));
}

TEST_CASE("2x2 growth run verifies the box stabilizers") {
    std::mt19937_64 rng(17);
    auto res = grow_2d(2, 1, rng);
    CHECK(res.state_verified);
    CHECK(res.fusion_attempts >= 1);
}

TEST_CASE("bookkeeping growth cost is consistent with N log N") {
    std::mt19937_64 rng(23);
    std::vector<double> ratio;
    for (int side : {4, 8, 16, 32}) {
        long long n = 1LL * side * side;
        int n0 = int(std::ceil(std::log2(double(n)))) + 1;
        double mean_ops = 0;
        const int reps = 10;
        for (int r = 0; r < reps; ++r) mean_ops += double(grow_2d(side, n0, rng).fusion_attempts) / reps;
        ratio.push_back(mean_ops / (double(n) * std::log(double(n))));
    }
    // the N ln N ratio stays within a stable band across a 64x size sweep
    double lo = *std::min_element(ratio.begin(), ratio.end());
    double hi = *std::max_element(ratio.begin(), ratio.end());
    CHECK(hi / lo < 1.6);
    // while ops / N^2 decays, ruling out quadratic growth
    CHECK(ratio.front() > 0);
}

TEST_CASE("box-cluster search finds every marked element with certainty") {
    for (const char* m : {"00", "01", "10", "11"}) {
        auto res = grover_box(m);
        CHECK(res.success_probability == doctest::Approx(1.0).epsilon(1e-10));
    }
    // white noise degrades gracefully; about 90% at the experimental level
    auto noisy = grover_box("10", 0.4 / 3);
    CHECK(noisy.success_probability == doctest::Approx(0.9).epsilon(1e-10));
    double prev = 1.0;
    for (double w : {0.1, 0.3, 0.6}) {
        double p = grover_box("01", w).success_probability;
        CHECK(p < prev);
        prev = p;
    }
    CHECK_THROWS_AS(grover_box("2x"), std::invalid_argument);
}

TEST_CASE("persistency: floor(n/2) removals for chains, one for GHZ") {
    // the bracket [N/2] of the persistency statement is the integer part
    for (int n = 2; n <= 8; ++n) {
        auto res = persistency_check(n);
        CHECK(res.removals == n / 2);
        CHECK(int(res.witness_set.size()) == n / 2);
    }

    // GHZ: a single computational-basis measurement disentangles
    for (int n : {3, 4}) {
        auto ghz = QubitRegister::ghz(n);
        auto [p, collapsed] = ghz.measure(0, Eigen::Matrix2cd::Identity(), 0);
        CHECK(p == doctest::Approx(0.5));
        auto rest = partial_trace(DensityOperator(collapsed), [&] {
            std::vector<int> keep;
            for (int q = 1; q < n; ++q) keep.push_back(q);
            return keep;
        }());
        // remaining state is the pure product |0...0>
        CHECK(rest.matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
    }
}
