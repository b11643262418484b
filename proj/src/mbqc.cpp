#include "loqs/mbqc.hpp"

#include <algorithm>
#include <cmath>

#include "loqs/optics.hpp"
#include "loqs/protocols.hpp"

namespace loqs {

namespace {

const double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 0.70710678118654752440;

// projects qubit q onto `ket` and drops it from the register
std::pair<double, QubitRegister> project_drop(const QubitRegister& s, int q,
                                              const Eigen::Vector2cd& ket) {
    const int n = s.num_qubits();
    VectorXcd out = VectorXcd::Zero(1LL << (n - 1));
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
        int bit = int(i >> (n - 1 - q)) & 1;
        cxd w = std::conj(ket(bit));
        if (w == cxd(0, 0)) continue;
        Eigen::Index rest = 0;
        for (int k = 0; k < n; ++k) {
            if (k == q) continue;
            rest = (rest << 1) | ((i >> (n - 1 - k)) & 1);
        }
        out(rest) += w * s.amplitude(i);
    }
    double p = out.squaredNorm();
    if (p < 1e-15) return {0.0, QubitRegister(std::max(n - 1, 1))};
    QubitRegister reg(n - 1, out / std::sqrt(p));
    return {p, reg};
}

Eigen::Vector2cd basis_ket(char basis, double angle, int outcome) {
    const double s = kInvSqrt2;
    Eigen::Vector2cd k;
    switch (basis) {
        case 'z': k << (outcome ? 0 : 1), (outcome ? 1 : 0); return k;
        case 'x': k << s, (outcome ? -s : s); return k;
        case 'y': k << s, cxd(0, outcome ? -s : s); return k;
        case 'e': k << s, std::exp(cxd(0, angle)) * (outcome ? -s : s); return k;
    }
    throw std::invalid_argument("measure_pattern: unknown basis");
}

// cluster with arbitrary single-qubit inputs injected on chosen vertices
QubitRegister build_cluster_with_inputs(const ClusterGraph& g,
                                        const std::map<int, QubitRegister>& inputs) {
    QubitRegister state(1);
    bool first = true;
    for (int v = 0; v < g.n; ++v) {
        QubitRegister q = inputs.count(v) ? inputs.at(v) : QubitRegister::plus(1);
        state = first ? q : state.tensor(q);
        first = false;
    }
    for (auto [a, b] : g.edges) state = state.apply2(cz_gate(), a, b);
    for (int v = 0; v < g.n; ++v)
        if (g.kappa[v]) state = state.apply1(pauli_z(), v);
    return state;
}

}  // namespace

ClusterGraph ClusterGraph::chain(int n) {
    ClusterGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

ClusterGraph ClusterGraph::box() {
    ClusterGraph g(4);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(1, 3);
    g.add_edge(2, 3);
    return g;
}

ClusterGraph ClusterGraph::lattice(int rows, int cols) {
    ClusterGraph g(rows * cols);
    auto id = [&](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
            if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c));
        }
    return g;
}

void ClusterGraph::add_edge(int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= n || b >= n)
        throw std::invalid_argument("ClusterGraph: bad edge");
    edges.insert({std::min(a, b), std::max(a, b)});
}

bool ClusterGraph::has_edge(int a, int b) const {
    return edges.count({std::min(a, b), std::max(a, b)}) != 0;
}

std::vector<int> ClusterGraph::neighbors(int a) const {
    std::vector<int> out;
    for (auto [u, v] : edges) {
        if (u == a) out.push_back(v);
        if (v == a) out.push_back(u);
    }
    return out;
}

QubitRegister build_cluster(const ClusterGraph& g) {
    if (g.n < 1 || g.n > kMaxQubits)
        throw std::invalid_argument("build_cluster: vertex count beyond the dense limit");
    return build_cluster_with_inputs(g, {});
}

MatrixXcd stabilizer_operator(const ClusterGraph& g, int a) {
    std::vector<Eigen::Matrix2cd> f(g.n, pauli_i());
    f[a] = pauli_x();
    for (int b : g.neighbors(a)) f[b] = pauli_z();
    return kron_all(f);
}

std::vector<double> verify_stabilizers(const QubitRegister& state, const ClusterGraph& g) {
    if (state.num_qubits() != g.n) throw std::invalid_argument("verify_stabilizers: size mismatch");
    DensityOperator rho(state);
    std::vector<double> out;
    for (int a = 0; a < g.n; ++a) out.push_back(rho.expectation(stabilizer_operator(g, a)));
    return out;
}

double stabilizer_projection_overlap(const QubitRegister& state, const ClusterGraph& g) {
    const Eigen::Index d = state.dim();
    MatrixXcd proj = MatrixXcd::Identity(d, d);
    for (int a = 0; a < g.n; ++a)
        proj = 0.5 * (MatrixXcd::Identity(d, d) + stabilizer_operator(g, a)) * proj;
    VectorXcd projected = proj * state.amplitudes();
    return projected.squaredNorm();
}

std::vector<PatternBranch> measure_pattern(const QubitRegister& state, const std::vector<int>& labels,
                                           const std::vector<PatternStep>& steps) {
    if (int(labels.size()) != state.num_qubits())
        throw std::invalid_argument("measure_pattern: one label per qubit required");
    {
        std::set<int> seen;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (!seen.insert(steps[i].vertex).second)
                throw std::invalid_argument("measure_pattern: vertex measured twice");
            for (int dep : steps[i].adapt_on)
                if (dep < 0 || dep >= int(i))
                    throw std::invalid_argument("measure_pattern: adaptation references a later round");
        }
    }

    std::vector<PatternBranch> frontier{{1.0, {}, state, labels}};
    for (const auto& step : steps) {
        std::vector<PatternBranch> next;
        for (const auto& br : frontier) {
            auto it = std::find(br.remaining.begin(), br.remaining.end(), step.vertex);
            if (it == br.remaining.end())
                throw std::invalid_argument("measure_pattern: vertex not present");
            int q = int(it - br.remaining.begin());
            double angle = step.angle;
            for (int dep : step.adapt_on)
                if (br.outcomes[dep]) angle = -angle;
            for (int outcome = 0; outcome < 2; ++outcome) {
                auto [p, reduced] = project_drop(br.state, q, basis_ket(step.basis, angle, outcome));
                if (p < 1e-14) continue;
                PatternBranch nb;
                nb.probability = br.probability * p;
                nb.outcomes = br.outcomes;
                nb.outcomes.push_back(outcome);
                nb.state = reduced;
                nb.remaining = br.remaining;
                nb.remaining.erase(nb.remaining.begin() + q);
                next.push_back(std::move(nb));
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

PatternBranch measure_pattern_sampled(const QubitRegister& state, const std::vector<int>& labels,
                                      const std::vector<PatternStep>& steps, std::mt19937_64& rng) {
    PatternBranch br{1.0, {}, state, labels};
    std::uniform_real_distribution<double> u(0, 1);
    for (const auto& step : steps) {
        auto it = std::find(br.remaining.begin(), br.remaining.end(), step.vertex);
        if (it == br.remaining.end()) throw std::invalid_argument("measure_pattern: vertex not present");
        int q = int(it - br.remaining.begin());
        double angle = step.angle;
        for (int dep : step.adapt_on)
            if (br.outcomes[dep]) angle = -angle;
        auto [p0, s0] = project_drop(br.state, q, basis_ket(step.basis, angle, 0));
        int outcome = (u(rng) < p0) ? 0 : 1;
        auto [p, reduced] = project_drop(br.state, q, basis_ket(step.basis, angle, outcome));
        br.probability *= p;
        br.outcomes.push_back(outcome);
        br.state = reduced;
        br.remaining.erase(br.remaining.begin() + q);
    }
    return br;
}

ClusterGraph graph_after_z(const ClusterGraph& g, int v) {
    ClusterGraph out(g.n - 1);
    auto remap = [&](int a) { return a < v ? a : a - 1; };
    for (auto [a, b] : g.edges) {
        if (a == v || b == v) continue;
        out.add_edge(remap(a), remap(b));
    }
    for (int a = 0; a < g.n; ++a)
        if (a != v) out.kappa[remap(a)] = g.kappa[a];
    return out;
}

ClusterGraph graph_after_y(const ClusterGraph& g, int v) {
    auto nb = g.neighbors(v);
    if (nb.size() > 2)
        throw std::invalid_argument("graph_after_y: linear-cluster rule needs degree <= 2");
    ClusterGraph out = graph_after_z(g, v);
    if (nb.size() == 2) {
        auto remap = [&](int a) { return a < v ? a : a - 1; };
        out.add_edge(remap(nb[0]), remap(nb[1]));
    }
    return out;
}

Eigen::Matrix2cd euler_rotation_matrix(double xi, double eta, double zeta) {
    auto rot = [](const Eigen::Matrix2cd& p, double a) {
        return (std::cos(a / 2) * pauli_i() - cxd(0, std::sin(a / 2)) * p).eval();
    };
    return rot(pauli_x(), zeta) * rot(pauli_z(), eta) * rot(pauli_x(), xi);
}

std::vector<OneWayRotationBranch> one_way_rotation(const QubitRegister& input, double xi,
                                                   double eta, double zeta) {
    if (input.num_qubits() != 1) throw std::invalid_argument("one_way_rotation: one-qubit input");
    ClusterGraph chain = ClusterGraph::chain(5);
    QubitRegister state = build_cluster_with_inputs(chain, {{0, input}});
    // angles and adaptations of the standard five-qubit rotation pattern;
    // the sign convention is the one that passes the Euler-equivalence test
    std::vector<PatternStep> steps = {{0, 'e', 0.0, {}},
                                      {1, 'e', -xi, {0}},
                                      {2, 'e', -eta, {1}},
                                      {3, 'e', -zeta, {0, 2}}};
    auto branches = measure_pattern(state, {0, 1, 2, 3, 4}, steps);

    std::vector<OneWayRotationBranch> out;
    for (auto& br : branches) {
        OneWayRotationBranch b;
        b.probability = br.probability;
        b.outcomes = br.outcomes;
        b.output = br.state;
        int sx = (br.outcomes[1] + br.outcomes[3]) % 2;
        int sz = (br.outcomes[0] + br.outcomes[2]) % 2;
        b.byproducts = {sx && sz ? 'y' : sx ? 'x' : sz ? 'z' : 'i'};
        QubitRegister fixed = br.state;
        if (sx) fixed = fixed.apply1(pauli_x(), 0);
        if (sz) fixed = fixed.apply1(pauli_z(), 0);
        b.corrected = fixed;
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<OneWayCnotBranch> one_way_cnot(const QubitRegister& input2) {
    if (input2.num_qubits() != 2) throw std::invalid_argument("one_way_cnot: two-qubit input");
    // four-qubit piece of the two-dimensional cluster: target wire
    // t_in(1) - m(2) - t_out(3) with the control c(0) bonded to the middle
    ClusterGraph g(4);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(0, 2);
    // start with |chi> on (c, t_in), ancillas |+> on (m, t_out), then the
    // CZs; entangled inputs ride through unchanged
    QubitRegister state = input2.tensor(QubitRegister::plus(2));  // order (c, t_in, m, out)
    state = state.apply2(cz_gate(), 1, 2);
    state = state.apply2(cz_gate(), 2, 3);
    state = state.apply2(cz_gate(), 0, 2);

    std::vector<PatternStep> steps = {{1, 'x', 0, {}}, {2, 'x', 0, {}}};
    auto branches = measure_pattern(state, {0, 1, 2, 3}, steps);
    std::vector<OneWayCnotBranch> out;
    for (auto& br : branches) {
        OneWayCnotBranch b;
        b.probability = br.probability;
        b.outcomes = br.outcomes;
        b.output = br.state;  // (c, t_out)
        int s1 = br.outcomes[0], s2 = br.outcomes[1];
        PauliCorrection corr{{s1 ? 'z' : 'i', char(s1 && s2 ? 'y' : s1 ? 'z' : s2 ? 'x' : 'i')}};
        b.byproducts = corr;
        b.corrected = apply_correction(br.state, corr);
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<FuseBranch> fuse(const ClusterGraph& ga, int qubit_a, const ClusterGraph& gb, int qubit_b,
                             FuseKind kind) {
    if (ga.n + gb.n > 8) throw std::invalid_argument("fuse: too many qubits for the Fock model");
    QubitRegister cluster_a = build_cluster(ga), cluster_b = build_cluster(gb);
    QubitRegister joint = cluster_a.tensor(cluster_b);
    const int bq = ga.n + qubit_b;  // position of B's operand in the joint register

    // dual-rail encoding of every vertex
    ModeRegistry reg;
    QubitEncoding enc;
    for (int v = 0; v < ga.n + gb.n; ++v) {
        ModePair p{mode_h("q" + std::to_string(v)), mode_v("q" + std::to_string(v))};
        reg.add(p.first);
        reg.add(p.second);
        enc.pairs.push_back(p);
    }
    ModePair keep{mode_h("keep"), mode_v("keep")}, det{mode_h("det"), mode_v("det")};
    reg.add(keep.first);
    reg.add(keep.second);
    reg.add(det.first);
    reg.add(det.second);

    FockState s = qubits_to_fock(joint, enc, reg, ga.n + gb.n);
    const ModePair& pa = enc.pairs[qubit_a];
    const ModePair& pb = enc.pairs[bq];
    const PolBasis pbs_basis = (kind == FuseKind::TypeI) ? PolBasis::HV : PolBasis::Diag;
    s = apply_mode_map(s, pbs(pa, pb, keep, det, pbs_basis));
    if (kind == FuseKind::TypeI) {
        // the retained detector is polarization-discriminating after a 45
        // degree rotation
        s = apply_mode_map(s, wave_plate(det, WavePlateKind::Half, kPi / 8));
    }

    // merged graph bookkeeping: vertices renumbered joint-register style
    auto joint_graph = [&] {
        ClusterGraph g(ga.n + gb.n);
        for (auto [x, y] : ga.edges) g.add_edge(x, y);
        for (auto [x, y] : gb.edges) g.add_edge(ga.n + x, ga.n + y);
        return g;
    }();

    std::vector<FuseBranch> out;
    auto survivors = [&](bool drop_a, bool drop_b) {
        std::vector<int> ids;
        for (int v = 0; v < ga.n + gb.n; ++v) {
            if (drop_a && v == qubit_a) continue;
            if (drop_b && v == bq) continue;
            ids.push_back(v);
        }
        return ids;
    };

    if (kind == FuseKind::TypeI) {
        // success: exactly one photon at the detector (either +-45 slot);
        // the keep port carries the merged qubit
        for (int d = 0; d < 2; ++d) {
            Pattern p;
            p.exact.push_back({d ? det.second : det.first, 1});
            p.exact.push_back({d ? det.first : det.second, 0});
            Pattern::Group keep_one{{keep.first, keep.second}, 1};
            p.groups.push_back(keep_one);
            auto sel = postselect(s, p);
            if (sel.probability < 1e-12) continue;
            FuseBranch br;
            br.success = true;
            br.probability = sel.probability;
            br.detector = d ? "-45" : "+45";
            // merged graph: operand vertices collapse into one (A keeps its id)
            ClusterGraph merged(ga.n + gb.n - 1);
            auto remap = [&](int v) { return v < bq ? v : v - 1; };
            for (auto [x, y] : joint_graph.edges) {
                int u = (x == bq) ? qubit_a : x;
                int w = (y == bq) ? qubit_a : y;
                merged.add_edge(remap(u), remap(w));
            }
            br.graph = merged;
            QubitEncoding enc_out;
            std::vector<int> ids;
            for (int v = 0; v < ga.n + gb.n; ++v) {
                if (v == bq) continue;
                enc_out.pairs.push_back(v == qubit_a ? keep : enc.pairs[v]);
                ids.push_back(v);
            }
            QubitRegister q = fock_to_qubits(sel.state, enc_out);
            // -45 detection leaves a z byproduct on the merged qubit
            if (d) q = q.apply1(pauli_z(), int(std::find(ids.begin(), ids.end(), qubit_a) - ids.begin()));
            br.state = q;
            br.remaining = ids;
            out.push_back(std::move(br));
        }
        // failures: zero or two photons at the detector; both operand
        // qubits end up z-measured
        struct Fail {
            Pattern p;
            std::string name;
            int za, zb;  // inferred z outcomes of the operands
        };
        std::vector<Fail> fails;
        {
            Fail f0;  // both photons in the keep port: operands were H_a V_b
            f0.p.exact.push_back({det.first, 0});
            f0.p.exact.push_back({det.second, 0});
            f0.name = "0 photons";
            f0.za = 0;
            f0.zb = 1;
            fails.push_back(std::move(f0));
            for (int h1 = 0; h1 < 3; ++h1) {
                Fail f2;  // two photons at the detector: operands were V_a H_b
                f2.p.exact.push_back({det.first, h1 == 0 ? 2 : h1 == 1 ? 1 : 0});
                f2.p.exact.push_back({det.second, h1 == 0 ? 0 : h1 == 1 ? 1 : 2});
                f2.name = "2 photons";
                f2.za = 1;
                f2.zb = 0;
                fails.push_back(std::move(f2));
            }
        }
        for (auto& f : fails) {
            auto sel = postselect(s, f.p);
            if (sel.probability < 1e-12) continue;
            FuseBranch br;
            br.success = false;
            br.probability = sel.probability;
            br.detector = f.name;
            ClusterGraph cut = joint_graph;
            // z-byproducts on the neighbors of removed vertices
            QubitEncoding enc_out;
            std::vector<int> ids = survivors(true, true);
            for (int v : ids) enc_out.pairs.push_back(enc.pairs[v]);
            QubitRegister q = fock_to_qubits(sel.state, enc_out);
            auto fix = [&](int removed, int zval) {
                if (!zval) return;
                for (int nb : cut.neighbors(removed)) {
                    auto it = std::find(ids.begin(), ids.end(), nb);
                    if (it != ids.end()) q = q.apply1(pauli_z(), int(it - ids.begin()));
                }
            };
            fix(qubit_a, f.za);
            fix(bq, f.zb);
            ClusterGraph after = graph_after_z(joint_graph, std::max(qubit_a, bq));
            after = graph_after_z(after, std::min(qubit_a, bq));
            br.graph = after;
            br.state = q;
            br.remaining = ids;
            out.push_back(std::move(br));
        }
    } else {
        // type-II: rotated PBS, both outputs detected in H/V. Success is
        // one photon per output; the operands' neighbors merge into one
        // redundantly encoded site, decoded here to the reduced chain.
        for (int hk = 0; hk < 2; ++hk)
            for (int hd = 0; hd < 2; ++hd) {
                Pattern p;
                p.exact.push_back({keep.first, hk ? 0 : 1});
                p.exact.push_back({keep.second, hk ? 1 : 0});
                p.exact.push_back({det.first, hd ? 0 : 1});
                p.exact.push_back({det.second, hd ? 1 : 0});
                auto sel = postselect(s, p);
                if (sel.probability < 1e-12) continue;
                FuseBranch br;
                br.success = true;
                br.probability = sel.probability;
                br.detector = std::string(hk ? "V" : "H") + (hd ? "V" : "H");
                QubitEncoding enc_out;
                std::vector<int> ids = survivors(true, true);
                for (int v : ids) enc_out.pairs.push_back(enc.pairs[v]);
                br.state = fock_to_qubits(sel.state, enc_out);
                br.remaining = ids;
                ClusterGraph after(ga.n + gb.n - 2);
                // neighbors of the destroyed operands become linked
                std::vector<int> na = joint_graph.neighbors(qubit_a), nb = joint_graph.neighbors(bq);
                auto remap = [&](int v) {
                    int r = v;
                    if (v > std::max(qubit_a, bq)) r -= 2;
                    else if (v > std::min(qubit_a, bq)) r -= 1;
                    return r;
                };
                for (auto [x, y] : joint_graph.edges) {
                    if (x == qubit_a || x == bq || y == qubit_a || y == bq) continue;
                    after.add_edge(remap(x), remap(y));
                }
                for (int u : na)
                    for (int w : nb) after.add_edge(remap(u), remap(w));
                br.graph = after;
                out.push_back(std::move(br));
            }
        // failures: both photons at one output
        double p_fail = 0;
        {
            Pattern p;
            Pattern::Group g2{{keep.first, keep.second}, 2};
            p.groups.push_back(g2);
            p_fail += postselect(s, p).probability;
            Pattern q;
            Pattern::Group g0{{keep.first, keep.second}, 0};
            q.groups.push_back(g0);
            p_fail += postselect(s, q).probability;
        }
        if (p_fail > 1e-12) {
            FuseBranch br;
            br.success = false;
            br.probability = p_fail;
            br.detector = "bunched";
            br.graph = graph_after_z(graph_after_z(joint_graph, std::max(qubit_a, bq)),
                                     std::min(qubit_a, bq));
            br.state = QubitRegister(std::max(ga.n + gb.n - 2, 1));
            br.remaining = survivors(true, true);
            out.push_back(std::move(br));
        }
    }
    return out;
}

double leg_connection_probability(int n0) {
    if (n0 < 1) throw std::invalid_argument("leg_connection_probability: empty leg");
    // exhaustive branch tree: each type-I try succeeds with 1/2, a failure
    // burns one leg qubit on each side
    double p = 0, reach = 1.0;
    for (int attempt = 0; attempt < n0; ++attempt) {
        p += reach * 0.5;
        reach *= 0.5;
    }
    return p;
}

GrowthResult grow_2d(int side, int leg_length, std::mt19937_64& rng) {
    if (leg_length < 1) throw std::invalid_argument("grow_2d: leg length must be positive");
    GrowthResult res{};
    res.lattice_side = side;

    if (side == 2) {
        // state-level run: grow a five-chain by type-I fusions (each try
        // succeeds with 1/2), then close its ends into the 2x2 box
        std::bernoulli_distribution coin(0.5);
        int have = 2;
        while (have < 5) {
            res.fusion_attempts += 1;
            have += coin(rng) ? 1 : -1;
            have = std::max(have, 2);
        }
        for (res.rounds = 1; !coin(rng); ++res.rounds) res.fusion_attempts += 1;
        res.fusion_attempts += 1;  // the successful closing fusion

        // the closing fusion merges the chain ends: the ideal type-I
        // success map K = |0><00| + |1><11| on vertices (0, 4)
        ClusterGraph chain5 = ClusterGraph::chain(5);
        QubitRegister state = build_cluster(chain5);
        const int n = 5;
        VectorXcd merged = VectorXcd::Zero(1LL << (n - 1));
        for (Eigen::Index i = 0; i < state.dim(); ++i) {
            int v0 = int(i >> (n - 1)) & 1, v4 = int(i) & 1;
            if (v0 != v4) continue;
            Eigen::Index rest = ((i >> 1) & 0b111) | (Eigen::Index(v0) << 3);  // (m,1,2,3)
            merged(rest) += state.amplitude(i);
        }
        double p = merged.squaredNorm();
        QubitRegister box_state(4, merged / std::sqrt(p));
        // merged vertex m has neighbors {1, 3}: the box graph on (m,1,2,3)
        ClusterGraph box(4);
        box.add_edge(0, 1);
        box.add_edge(0, 3);
        box.add_edge(1, 2);
        box.add_edge(2, 3);
        auto eig = verify_stabilizers(box_state, box);
        res.state_verified = true;
        for (double e : eig)
            if (std::abs(e - 1.0) > 1e-10) res.state_verified = false;
        return res;
    }

    // bookkeeping mode: count fusion attempts for an side x side lattice
    // following the redundant-middle / plus-shape / leg-connection strategy
    const long long n_sites = 1LL * side * side;
    std::geometric_distribution<int> geo(0.5);  // failures before a success
    auto attempts_for_success = [&]() { return 1 + geo(rng); };

    long long ops = 0;
    long long rounds = 0;
    for (long long s = 0; s < n_sites; ++s) {
        // two linear clusters of lengths 2 n0 + 1 and 2 n0 + 3, grown by
        // type-I fusion with failed pieces recycled into the chain farm
        // (linear overhead per net vertex)
        for (int len : {2 * leg_length + 1, 2 * leg_length + 3}) {
            for (int v = 2; v < len; ++v) ops += attempts_for_success();
        }
        ops += 1;  // the x measurement creating the redundant middle
        ops += attempts_for_success();  // type-II joining the two middles
        rounds += 1;
    }
    // connect neighboring centers: about 2 per site, each within n0 tries
    long long connections = 2 * n_sites;
    for (long long c = 0; c < connections; ++c) {
        int tries = 0;
        bool ok = false;
        while (tries < leg_length && !ok) {
            ++tries;
            ok = std::bernoulli_distribution(0.5)(rng);
        }
        ops += tries;
        ops += leg_length;  // y-measurement cleanup of the leftover leg qubits
    }
    res.fusion_attempts = ops;
    res.rounds = rounds;
    res.state_verified = false;
    return res;
}

GroverResult grover_box(const std::string& marked, double noise) {
    if (marked.size() != 2 || (marked[0] != '0' && marked[0] != '1') ||
        (marked[1] != '0' && marked[1] != '1'))
        throw std::invalid_argument("grover_box: marked element must be a 2-bit label");
    if (noise < 0 || noise > 1) throw std::invalid_argument("grover_box: noise out of [0,1]");

    // box cluster in the polarization frame: the 0-1-2-3-0 cycle with the
    // readout qubits phase-rotated so that the oracle sits in the +-45
    // bases of qubits 0,3 and the readout in R/L on qubits 1,2. The
    // +-45 outcome pair realizes the oracle choice; the R/L readout then
    // names the marked element.
    ClusterGraph cycle(4);
    cycle.add_edge(0, 1);
    cycle.add_edge(1, 2);
    cycle.add_edge(2, 3);
    cycle.add_edge(0, 3);
    QubitRegister cluster = build_cluster(cycle);
    Eigen::Matrix2cd s_gate = Eigen::Matrix2cd::Identity();
    s_gate(1, 1) = cxd(0, 1);
    cluster = cluster.apply1(s_gate, 1).apply1(s_gate, 2);
    DensityOperator rho =
        DensityOperator::maximally_mixed(4).mixed_with(DensityOperator(cluster), 1.0 - noise);

    const int b0 = marked[0] - '0', b1 = marked[1] - '0';
    const double s = kInvSqrt2;
    auto xket = [&](int outcome) {
        return (Eigen::Vector2cd() << s, (outcome ? -s : s)).finished();
    };
    auto yket = [&](int outcome) {
        return (Eigen::Vector2cd() << s, cxd(0, outcome ? -s : s)).finished();
    };

    GroverResult res;
    double total = 0;
    for (int y1 = 0; y1 < 2; ++y1)
        for (int y2 = 0; y2 < 2; ++y2) {
            std::vector<Eigen::Matrix2cd> proj(4);
            proj[0] = xket(b0) * xket(b0).adjoint();
            proj[3] = xket(b1) * xket(b1).adjoint();
            proj[1] = yket(y1) * yket(y1).adjoint();
            proj[2] = yket(y2) * yket(y2).adjoint();
            double prob = (kron_all(proj) * rho.matrix()).trace().real();
            // the readout names the element as (y2, y1)
            std::string label;
            label += char('0' + y2);
            label += char('0' + y1);
            res.outcome_distribution[label] += prob;
            total += prob;
        }
    for (auto& [k, v] : res.outcome_distribution) v /= total;
    res.success_probability =
        res.outcome_distribution.count(marked) ? res.outcome_distribution[marked] : 0.0;
    return res;
}

bool is_fully_separable(const QubitRegister& state) {
    for (int q = 0; q < state.num_qubits(); ++q) {
        if (state.num_qubits() == 1) return true;
        auto terms = schmidt_decompose(state, {q});
        if (terms.size() > 1) return false;
    }
    return true;
}

PersistencyResult persistency_check(int chain_length) {
    if (chain_length < 2 || chain_length > 8)
        throw std::invalid_argument("persistency_check: chain length in 2..8");
    ClusterGraph g = ClusterGraph::chain(chain_length);
    QubitRegister cluster = build_cluster(g);

    for (int k = 1; k < chain_length; ++k) {
        // all k-subsets
        std::vector<int> pick(k);
        std::function<bool(int, int)> rec = [&](int start, int depth) -> bool {
            if (depth == k) {
                // z-measure the subset (outcome 0 branch; separability is
                // outcome independent up to local z's)
                QubitRegister st = cluster;
                std::vector<int> remaining(chain_length);
                std::iota(remaining.begin(), remaining.end(), 0);
                for (int v : pick) {
                    auto it = std::find(remaining.begin(), remaining.end(), v);
                    int q = int(it - remaining.begin());
                    auto [p, reduced] = project_drop(st, q, (Eigen::Vector2cd() << 1, 0).finished());
                    if (p < 1e-14) return false;
                    st = reduced;
                    remaining.erase(it);
                }
                return is_fully_separable(st);
            }
            for (int v = start; v <= chain_length - (k - depth); ++v) {
                pick[depth] = v;
                if (rec(v + 1, depth + 1)) return true;
            }
            return false;
        };
        if (rec(0, 0)) {
            // rebuild the witnessing subset
            std::vector<int> pick2(k);
            std::function<bool(int, int)> rec2 = [&](int start, int depth) -> bool {
                if (depth == k) {
                    QubitRegister st = cluster;
                    std::vector<int> remaining(chain_length);
                    std::iota(remaining.begin(), remaining.end(), 0);
                    for (int v : pick2) {
                        auto it = std::find(remaining.begin(), remaining.end(), v);
                        int q = int(it - remaining.begin());
                        auto [p, reduced] =
                            project_drop(st, q, (Eigen::Vector2cd() << 1, 0).finished());
                        if (p < 1e-14) return false;
                        st = reduced;
                        remaining.erase(it);
                    }
                    return is_fully_separable(st);
                }
                for (int v = start; v <= chain_length - (k - depth); ++v) {
                    pick2[depth] = v;
                    if (rec2(v + 1, depth + 1)) return true;
                }
                return false;
            };
            rec2(0, 0);
            return {k, pick2};
        }
    }
    return {chain_length, {}};
}

}  // namespace loqs
