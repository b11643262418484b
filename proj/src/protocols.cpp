#include "loqs/protocols.hpp"

#include <cmath>
#include <set>

#include "loqs/optics.hpp"

namespace loqs {

namespace {

const double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 0.70710678118654752440;

const std::array<BellOutcomeKind, 4> kBellKinds = {BellOutcomeKind::PsiPlus, BellOutcomeKind::PsiMinus,
                                                   BellOutcomeKind::PhiPlus, BellOutcomeKind::PhiMinus};

QubitRegister bell_of(BellOutcomeKind k) {
    switch (k) {
        case BellOutcomeKind::PsiPlus: return QubitRegister::bell("psi+");
        case BellOutcomeKind::PsiMinus: return QubitRegister::bell("psi-");
        case BellOutcomeKind::PhiPlus: return QubitRegister::bell("phi+");
        case BellOutcomeKind::PhiMinus: return QubitRegister::bell("phi-");
        default: throw std::logic_error("bell_of: inconclusive has no state");
    }
}

// projects qubits (qa, qb) onto `pair`; returns the unnormalized remainder
// on the other qubits, original relative order preserved
VectorXcd project_pair(const QubitRegister& state, int qa, int qb, const QubitRegister& pair) {
    const int n = state.num_qubits();
    VectorXcd out = VectorXcd::Zero(1LL << (n - 2));
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        int va = int(i >> (n - 1 - qa)) & 1, vb = int(i >> (n - 1 - qb)) & 1;
        cxd w = std::conj(pair.amplitude(va * 2 + vb));
        if (w == cxd(0, 0)) continue;
        Eigen::Index rest = 0;
        for (int q = 0; q < n; ++q) {
            if (q == qa || q == qb) continue;
            rest = (rest << 1) | ((i >> (n - 1 - q)) & 1);
        }
        out(rest) += w * state.amplitude(i);
    }
    return out;
}

char find_pauli_correction(const QubitRegister& got, const QubitRegister& want) {
    for (char c : {'i', 'x', 'y', 'z'})
        if (got.apply1(pauli(c), 0).equals_up_to_phase(want, 1e-9)) return c;
    throw std::runtime_error("find_pauli_correction: no single Pauli matches");
}

}  // namespace

std::string to_string(BellOutcomeKind k) {
    switch (k) {
        case BellOutcomeKind::PsiPlus: return "psi+";
        case BellOutcomeKind::PsiMinus: return "psi-";
        case BellOutcomeKind::PhiPlus: return "phi+";
        case BellOutcomeKind::PhiMinus: return "phi-";
        case BellOutcomeKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

QubitRegister apply_correction(const QubitRegister& state, const PauliCorrection& c) {
    QubitRegister out = state;
    for (std::size_t q = 0; q < c.ops.size(); ++q)
        if (c.ops[q] != 'i') out = out.apply1(pauli(c.ops[q]), int(q));
    return out;
}

std::vector<BellOutcome> linear_bell_analysis(const FockState& state, const ModePair& in_a,
                                              const ModePair& in_b) {
    for (const auto& [occ, amp] : state.terms()) {
        int tot = 0;
        for (int v : occ) tot += v;
        if (tot != 2 && std::abs(amp) > kPruneTol)
            throw std::invalid_argument("linear_bell_analysis: input not in the two-photon sector");
    }
    ModeRegistry reg = state.registry();
    ModePair out1{mode_h("bsm1"), mode_v("bsm1")}, out2{mode_h("bsm2"), mode_v("bsm2")};
    reg.add(out1.first);
    reg.add(out1.second);
    reg.add(out2.first);
    reg.add(out2.second);
    FockState s(reg, state.nmax());
    for (const auto& [occ, amp] : state.terms()) {
        Occupation o = occ;
        o.resize(reg.size(), 0);
        s.add_term(o, amp);
    }
    s = apply_mode_map(s, pbs(in_a, in_b, out1, out2));
    s = apply_mode_map(s, wave_plate(out1, WavePlateKind::Half, kPi / 8));
    s = apply_mode_map(s, wave_plate(out2, WavePlateKind::Half, kPi / 8));

    auto coincidence = [&](const Mode& m1, const Mode& m2) {
        Pattern p;
        p.exact.push_back({m1, 1});
        p.exact.push_back({m2, 1});
        return postselect(s, p).probability;
    };
    double p_phi_plus = coincidence(out1.first, out2.first) + coincidence(out1.second, out2.second);
    double p_phi_minus = coincidence(out1.first, out2.second) + coincidence(out1.second, out2.first);
    return {{BellOutcomeKind::PhiPlus, p_phi_plus},
            {BellOutcomeKind::PhiMinus, p_phi_minus},
            {BellOutcomeKind::Inconclusive, std::max(0.0, 1.0 - p_phi_plus - p_phi_minus)}};
}

std::vector<BellOutcome> linear_bell_analysis(const QubitRegister& two_qubits) {
    if (two_qubits.num_qubits() != 2)
        throw std::invalid_argument("linear_bell_analysis: expected two qubits");
    ModePair in_a{mode_h("anA"), mode_v("anA")}, in_b{mode_h("anB"), mode_v("anB")};
    ModeRegistry reg({in_a.first, in_a.second, in_b.first, in_b.second});
    QubitEncoding enc{{in_a, in_b}};
    return linear_bell_analysis(qubits_to_fock(two_qubits, enc, reg, 4), in_a, in_b);
}

std::vector<GhzOutcome> ghz_analysis(const QubitRegister& three_qubits) {
    if (three_qubits.num_qubits() != 3)
        throw std::invalid_argument("ghz_analysis: expected three qubits");
    ModePair A{mode_h("gA"), mode_v("gA")}, B{mode_h("gB"), mode_v("gB")}, C{mode_h("gC"), mode_v("gC")};
    ModePair o1{mode_h("g1"), mode_v("g1")}, bc{mode_h("gbc"), mode_v("gbc")};
    ModePair o2{mode_h("g2"), mode_v("g2")}, o3{mode_h("g3"), mode_v("g3")};
    ModeRegistry reg;
    for (auto& p : {A, B, C, o1, bc, o2, o3}) {
        reg.add(p.first);
        reg.add(p.second);
    }
    FockState s = qubits_to_fock(three_qubits, QubitEncoding{{A, B, C}}, reg, 4);
    s = apply_mode_map(s, pbs(A, B, o1, bc));
    s = apply_mode_map(s, pbs(bc, C, o2, o3));
    for (auto& p : {o1, o2, o3}) s = apply_mode_map(s, wave_plate(p, WavePlateKind::Half, kPi / 8));

    double p_plus = 0, p_minus = 0, p_total = 0;
    for (int h1 = 0; h1 < 2; ++h1)
        for (int h2 = 0; h2 < 2; ++h2)
            for (int h3 = 0; h3 < 2; ++h3) {
                Pattern p;
                for (auto [port, h] : {std::pair{&o1, h1}, {&o2, h2}, {&o3, h3}}) {
                    p.exact.push_back({h ? port->second : port->first, 1});
                    p.exact.push_back({h ? port->first : port->second, 0});
                }
                double prob = postselect(s, p).probability;
                int n_h = (1 - h1) + (1 - h2) + (1 - h3);
                (n_h % 2 == 1 ? p_plus : p_minus) += prob;
                p_total += prob;
            }
    return {{GhzOutcomeKind::PhiPlus, p_plus},
            {GhzOutcomeKind::PhiMinus, p_minus},
            {GhzOutcomeKind::Inconclusive, std::max(0.0, 1.0 - p_total)}};
}

DenseCodingResult dense_coding(int message, AnalyzerGrade grade) {
    if (message < 0 || message > 3) throw std::invalid_argument("dense_coding: message must be 2 bits");
    // dictionary psi- = 00, phi- = 01, phi+ = 10, psi+ = 11; Bob's
    // encoding operations mapping psi+ onto them are z, y, x, id
    const std::array<char, 4> encode_op = {'z', 'y', 'x', 'i'};

    auto decode = [&](int msg) {
        QubitRegister st = QubitRegister::bell("psi+").apply1(pauli(encode_op[msg]), 1);
        std::map<std::string, double> dist;
        if (grade == AnalyzerGrade::Full) {
            for (auto k : kBellKinds) {
                double p = std::norm(st.inner(bell_of(k)));
                if (p > 1e-12) dist[to_string(k)] += p;
            }
        } else {
            for (auto& o : linear_bell_analysis(st))
                if (o.probability > 1e-12) dist[to_string(o.which)] += o.probability;
        }
        return dist;
    };

    DenseCodingResult res;
    res.decoded = decode(message);
    std::set<std::string> outputs;
    for (int m = 0; m < 4; ++m) {
        auto d = decode(m);
        if (d.size() != 1) throw std::logic_error("dense_coding: analyzer output not deterministic");
        outputs.insert(d.begin()->first);
    }
    // deterministic channel: capacity = log2 of the number of distinct outputs
    res.capacity_bits = std::log2(double(outputs.size()));
    return res;
}

TeleportResult teleport(const QubitRegister& input, BellKind resource, bool bsm_full) {
    if (input.num_qubits() != 1) throw std::invalid_argument("teleport: input must be one qubit");
    QubitRegister full = input.tensor(bell_register(resource));

    TeleportResult res;
    double mean_f = 0, mean_p = 0;
    for (auto k : kBellKinds) {
        if (!bsm_full && k != BellOutcomeKind::PsiMinus) continue;
        VectorXcd rest = project_pair(full, 0, 1, bell_of(k));
        double p = rest.squaredNorm();
        QubitRegister cond(1, rest / std::sqrt(p));
        PauliCorrection corr{{find_pauli_correction(cond, input)}};
        double f = fidelity(DensityOperator(apply_correction(cond, corr)), input);
        res.branches.push_back({k, p, cond, corr, f});
        mean_f += p * f;
        mean_p += p;
    }
    res.success_probability = mean_p;
    res.mean_fidelity = mean_f / mean_p;
    return res;
}

std::vector<RomeBranch> teleport_rome(const QubitRegister& chi) {
    if (chi.num_qubits() != 1) throw std::invalid_argument("teleport_rome: chi must be one qubit");
    // qubits: q0 = path of photon 1 (a1 = 0, b1 = 1), q1 = its
    // polarization, q2 = path of photon 2
    QubitRegister paths = QubitRegister::bell("phi+");
    QubitRegister full = paths.tensor(chi);  // (q0, q2, pol)
    VectorXcd v(8);
    for (int i = 0; i < 8; ++i) {
        int q0 = (i >> 2) & 1, q1 = (i >> 1) & 1, q2 = i & 1;
        v(i) = full.amplitude((q0 << 2) | (q2 << 1) | q1);
    }
    QubitRegister state(3, std::move(v));

    // single-photon Bell basis in path x polarization; the labeling
    // reproduces the published outcome table of the two-particle scheme
    auto sp_bell = [&](const std::string& n) {
        VectorXcd b = VectorXcd::Zero(4);
        if (n == "psi+") { b(1) = kInvSqrt2; b(2) = kInvSqrt2; }        // |a1,V> + |b1,H>
        else if (n == "psi-") { b(0) = kInvSqrt2; b(3) = kInvSqrt2; }   // |a1,H> + |b1,V>
        else if (n == "phi+") { b(0) = kInvSqrt2; b(3) = -kInvSqrt2; }  // |a1,H> - |b1,V>
        else { b(1) = kInvSqrt2; b(2) = -kInvSqrt2; }                   // |a1,V> - |b1,H>
        return QubitRegister(2, std::move(b));
    };

    std::vector<RomeBranch> out;
    for (const char* name : {"psi+", "psi-", "phi+", "phi-"}) {
        VectorXcd rest = project_pair(state, 0, 1, sp_bell(name));
        double p = rest.squaredNorm();
        QubitRegister bob(1, rest / std::sqrt(p));
        PauliCorrection corr{{find_pauli_correction(bob, chi)}};
        double f = fidelity(DensityOperator(apply_correction(bob, corr)), chi);
        out.push_back({name, p, bob, corr, f});
    }
    return out;
}

OpenDestinationResult teleport_open_destination(const QubitRegister& chi, int receiver) {
    if (chi.num_qubits() != 1) throw std::invalid_argument("teleport_open_destination: chi is one qubit");
    if (receiver < 0 || receiver > 2)
        throw std::invalid_argument("teleport_open_destination: receiver in 0..2");
    QubitRegister full = chi.tensor(QubitRegister::ghz(4));

    OpenDestinationResult res{QubitRegister(3), 1.0};
    bool have_encoded = false;
    for (auto k : kBellKinds) {
        VectorXcd rest = project_pair(full, 0, 1, bell_of(k));
        double p = rest.squaredNorm();
        QubitRegister enc(3, rest / std::sqrt(p));
        // logical corrections on the three-qubit encoding: Z = z on one
        // photon, X = x on all three
        QubitRegister fixed = enc;
        if (k == BellOutcomeKind::PsiPlus || k == BellOutcomeKind::PsiMinus)
            fixed = fixed.apply1(pauli_x(), 0).apply1(pauli_x(), 1).apply1(pauli_x(), 2);
        if (k == BellOutcomeKind::PhiMinus || k == BellOutcomeKind::PsiMinus)
            fixed = fixed.apply1(pauli_z(), 0);
        if (!have_encoded) {
            res.encoded = fixed;
            have_encoded = true;
        }

        std::vector<int> others;
        for (int q = 0; q < 3; ++q)
            if (q != receiver) others.push_back(q);
        Eigen::Matrix2cd diag = hadamard();  // columns |+45>, |-45>
        for (int m1 = 0; m1 < 2; ++m1)
            for (int m2 = 0; m2 < 2; ++m2) {
                auto [p1, s1] = fixed.measure(others[0], diag, m1);
                if (p1 < 1e-12) continue;
                auto [p2, s2] = s1.measure(others[1], diag, m2);
                if (p2 < 1e-12) continue;
                QubitRegister outq = (m1 + m2) % 2 ? s2.apply1(pauli_z(), receiver) : s2;
                auto red = partial_trace(DensityOperator(outq), {receiver});
                res.fidelity = std::min(res.fidelity, fidelity(red, chi));
            }
    }
    return res;
}

TwoQubitTeleportResult teleport_two_qubit(const QubitRegister& chi2) {
    if (chi2.num_qubits() != 2) throw std::invalid_argument("teleport_two_qubit: input must be 2 qubits");
    // qubit order: (in1, in2, a3, a5, b4, b6); pairs (a3,a5) and (b4,b6)
    // are phi+; BSMs on (in1,a3) and (in2,b4); outputs on (a5, b6)
    QubitRegister full = chi2.tensor(QubitRegister::bell("phi+")).tensor(QubitRegister::bell("phi+"));

    auto corr_of = [](BellOutcomeKind k) {
        switch (k) {
            case BellOutcomeKind::PhiPlus: return 'i';
            case BellOutcomeKind::PhiMinus: return 'z';
            case BellOutcomeKind::PsiPlus: return 'x';
            default: return 'y';
        }
    };

    MatrixXcd accum = MatrixXcd::Zero(4, 4);
    double total_p = 0;
    QubitRegister first_branch(2);
    bool have_first = false;
    for (auto k1 : kBellKinds)
        for (auto k2 : kBellKinds) {
            VectorXcd r1 = project_pair(full, 0, 2, bell_of(k1));  // leaves (in2, a5, b4, b6)
            double p1 = r1.squaredNorm();
            QubitRegister s4(4, r1 / std::sqrt(p1));
            VectorXcd r2 = project_pair(s4, 0, 2, bell_of(k2));  // leaves (a5, b6)
            double p2 = r2.squaredNorm();
            QubitRegister s2(2, r2 / std::sqrt(p2));
            QubitRegister fixed = s2.apply1(pauli(corr_of(k1)), 0).apply1(pauli(corr_of(k2)), 1);
            accum += p1 * p2 * DensityOperator(fixed).matrix();
            total_p += p1 * p2;
            if (!have_first) {
                first_branch = fixed;
                have_first = true;
            }
        }
    DensityOperator rho(2, accum / total_p, false);

    TwoQubitTeleportResult res;
    res.output = first_branch;
    res.fidelity_direct = fidelity(rho, chi2);
    MatrixXcd w = MatrixXcd::Identity(4, 4) - kron_all({pauli_x(), pauli_x()}) -
                  kron_all({pauli_y(), pauli_y()}) - kron_all({pauli_z(), pauli_z()});
    res.fidelity_by_pauli = (0.25 * w * rho.matrix()).trace().real();
    return res;
}

SwapResult entanglement_swap() {
    QubitRegister full = QubitRegister::bell("psi-").tensor(QubitRegister::bell("psi-"));
    SwapResult res;
    MatrixXcd uncond = MatrixXcd::Zero(4, 4);
    for (auto k : kBellKinds) {
        VectorXcd rest = project_pair(full, 1, 2, bell_of(k));
        double p = rest.squaredNorm();
        QubitRegister pair14(2, rest / std::sqrt(p));
        uncond += p * DensityOperator(pair14).matrix();
        res.branches.push_back({k, p, pair14});
    }
    res.unconditioned_14 = DensityOperator(2, std::move(uncond), false);
    return res;
}

double swap_visibility(cxd z) { return multipair_visibility(z); }

DensityOperator werner_state(double f) {
    MatrixXcd rho = f * DensityOperator(QubitRegister::bell("psi-")).matrix();
    for (const char* w : {"psi+", "phi+", "phi-"})
        rho += (1 - f) / 3 * DensityOperator(QubitRegister::bell(w)).matrix();
    return DensityOperator(2, std::move(rho));
}

DensityOperator werner_twirl(const DensityOperator& rho2) {
    if (rho2.num_qubits() != 2) throw std::invalid_argument("werner_twirl: two qubits expected");
    // the 12 proper rotations of the tetrahedron, as SU(2) elements
    std::vector<Eigen::Matrix2cd> group;
    group.push_back(pauli_i());
    for (char c : {'x', 'y', 'z'}) group.push_back(cxd(0, -1) * pauli(c));
    for (double sx : {1.0, -1.0})
        for (double sy : {1.0, -1.0})
            for (double sz : {1.0, -1.0}) {
                if (sx * sy * sz < 0) continue;
                Eigen::Vector3d n(sx, sy, sz);
                n.normalize();
                for (double ang : {2 * kPi / 3, -2 * kPi / 3}) {
                    Eigen::Matrix2cd u =
                        std::cos(ang / 2) * pauli_i() - cxd(0, std::sin(ang / 2)) * bloch_observable(n);
                    group.push_back(u);
                }
            }
    MatrixXcd acc = MatrixXcd::Zero(4, 4);
    for (const auto& u : group) {
        MatrixXcd uu = kron_all({u, u});
        acc += uu * rho2.matrix() * uu.adjoint();
    }
    return DensityOperator(2, acc / double(group.size()), false);
}

double bbpssw_formula(double f) {
    return (f * f + (1 - f) * (1 - f) / 9) /
           (f * f + 2 * f * (1 - f) / 3 + 5 * (1 - f) * (1 - f) / 9);
}

PurifyResult purify_bbpssw(double f) {
    if (f <= 0.5 || f > 1.0)
        throw std::invalid_argument("purify_bbpssw: requires 1/2 < F <= 1 (not purifiable otherwise)");
    DensityOperator pair = werner_twirl(werner_state(f));

    // qubit order (A1, B1, A2, B2); Alice holds A1, A2
    DensityOperator rho = pair.tensor(pair);
    rho = rho.apply1(pauli_y(), 0).apply1(pauli_y(), 2);  // psi- <-> phi+ per pair
    rho = rho.apply2(cnot_gate(), 0, 2);                  // Alice's CNOT
    rho = rho.apply2(cnot_gate(), 1, 3);                  // Bob's CNOT

    double p_succ = 0;
    MatrixXcd out = MatrixXcd::Zero(4, 4);
    for (int m = 0; m < 2; ++m) {  // agreeing target outcomes only
        Eigen::Matrix2cd pm = Eigen::Matrix2cd::Zero();
        pm(m, m) = 1;
        MatrixXcd proj = kron_all({pauli_i(), pauli_i(), pm, pm});
        MatrixXcd sel = proj * rho.matrix() * proj.adjoint();
        double p = sel.trace().real();
        p_succ += p;
        DensityOperator selrho(4, sel / p, false);
        out += p * partial_trace(selrho, {0, 1}).matrix();
    }
    out /= p_succ;
    double f_out = fidelity(DensityOperator(2, out, false), QubitRegister::bell("phi+"));
    return {f_out, p_succ};
}

PurifyResult purify_linear_optical(double f) {
    if (f <= 0.5 || f > 1.0)
        throw std::invalid_argument("purify_linear_optical: requires 1/2 < F <= 1");
    MatrixXcd rho1 = f * DensityOperator(QubitRegister::bell("phi+")).matrix() +
                     (1 - f) * DensityOperator(QubitRegister::bell("psi-")).matrix();
    DensityOperator pair(2, rho1);
    DensityOperator rho = pair.tensor(pair);  // (a1, b1, a2, b2)

    // PBS as parity projector at each location
    auto parity = [&](int qa, int qb) {
        MatrixXcd p = MatrixXcd::Zero(16, 16);
        for (int i = 0; i < 16; ++i)
            if (((i >> (3 - qa)) & 1) == ((i >> (3 - qb)) & 1)) p(i, i) = 1;
        return p;
    };
    MatrixXcd sel = parity(0, 2) * parity(1, 3);
    MatrixXcd kept = sel * rho.matrix() * sel.adjoint();
    double p_four_mode = kept.trace().real();

    // +-45 readout of a2, b2 with a conditional phase flip on b1
    MatrixXcd out = MatrixXcd::Zero(4, 4);
    for (int ma = 0; ma < 2; ++ma)
        for (int mb = 0; mb < 2; ++mb) {
            Eigen::Vector2cd ka = hadamard().col(ma), kb = hadamard().col(mb);
            MatrixXcd proj = kron_all({pauli_i(), pauli_i(), Eigen::Matrix2cd(ka * ka.adjoint()),
                                       Eigen::Matrix2cd(kb * kb.adjoint())});
            MatrixXcd branch = proj * kept * proj.adjoint();
            double pb = branch.trace().real();
            if (pb < 1e-300) continue;
            DensityOperator red = partial_trace(DensityOperator(4, branch / pb, false), {0, 1});
            if (ma != mb) red = red.apply1(pauli_z(), 1);
            out += pb * red.matrix();
        }
    out /= p_four_mode;
    double f_out = fidelity(DensityOperator(2, out, false), QubitRegister::bell("phi+"));
    return {f_out, p_four_mode};
}

namespace {

// one pure four-photon combination through the optical purifier; returns
// the four-mode probability and the unnormalized conditional state on
// (a3, b3) after the +-45 readout with conditional phase flip
std::pair<double, MatrixXcd> lo_purify_fock_branch(const QubitRegister& pair1,
                                                   const QubitRegister& pair2) {
    ModePair a1{mode_h("a1"), mode_v("a1")}, b1{mode_h("b1"), mode_v("b1")};
    ModePair a2{mode_h("a2"), mode_v("a2")}, b2{mode_h("b2"), mode_v("b2")};
    ModePair a3{mode_h("a3"), mode_v("a3")}, a4{mode_h("a4"), mode_v("a4")};
    ModePair b3{mode_h("b3"), mode_v("b3")}, b4{mode_h("b4"), mode_v("b4")};
    ModeRegistry reg;
    for (auto& p : {a1, b1, a2, b2, a3, a4, b3, b4}) {
        reg.add(p.first);
        reg.add(p.second);
    }
    FockState s = qubits_to_fock(pair1.tensor(pair2), QubitEncoding{{a1, b1, a2, b2}}, reg, 4);
    s = apply_mode_map(s, pbs(a1, a2, a3, a4));
    s = apply_mode_map(s, pbs(b1, b2, b3, b4));
    auto four_mode = Pattern::one_photon_per_group(
        {{a3.first, a3.second}, {a4.first, a4.second}, {b3.first, b3.second}, {b4.first, b4.second}});
    auto selected = postselect(s, four_mode);
    if (selected.probability < 1e-300) return {0.0, MatrixXcd::Zero(4, 4)};

    FockState sel = apply_mode_map(selected.state, wave_plate(a4, WavePlateKind::Half, kPi / 8));
    sel = apply_mode_map(sel, wave_plate(b4, WavePlateKind::Half, kPi / 8));
    MatrixXcd rho = MatrixXcd::Zero(4, 4);
    for (int ma = 0; ma < 2; ++ma)
        for (int mb = 0; mb < 2; ++mb) {
            Pattern p;
            p.exact.push_back({ma ? a4.second : a4.first, 1});
            p.exact.push_back({ma ? a4.first : a4.second, 0});
            p.exact.push_back({mb ? b4.second : b4.first, 1});
            p.exact.push_back({mb ? b4.first : b4.second, 0});
            auto branch = postselect(sel, p);
            if (branch.probability < 1e-300) continue;
            QubitRegister q = fock_to_qubits(branch.state, QubitEncoding{{a3, b3}});
            if (ma != mb) q = q.apply1(pauli_z(), 1);
            rho += branch.probability * DensityOperator(q).matrix();
        }
    return {selected.probability, rho};
}

}  // namespace

PurifyResult purify_linear_optical_fock(double f) {
    if (f <= 0.5 || f > 1.0)
        throw std::invalid_argument("purify_linear_optical_fock: requires 1/2 < F <= 1");
    struct Comb {
        const char *s1, *s2;
        double w;
    };
    const Comb combos[] = {{"phi+", "phi+", f * f},
                           {"phi+", "psi-", f * (1 - f)},
                           {"psi-", "phi+", (1 - f) * f},
                           {"psi-", "psi-", (1 - f) * (1 - f)}};
    double p_succ = 0;
    MatrixXcd rho = MatrixXcd::Zero(4, 4);
    for (const auto& c : combos) {
        auto [p, r] = lo_purify_fock_branch(QubitRegister::bell(c.s1), QubitRegister::bell(c.s2));
        p_succ += c.w * p;
        rho += c.w * p * r;
    }
    rho /= rho.trace().real();
    return {fidelity(DensityOperator(2, rho, false), QubitRegister::bell("phi+")), p_succ};
}

double purify_cross_term_probability(double) {
    return lo_purify_fock_branch(QubitRegister::bell("phi+"), QubitRegister::bell("psi-")).first;
}

ConcentrationResult concentrate_procrustean(cxd alpha, cxd beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kAlgebraTol)
        throw std::invalid_argument("concentrate_procrustean: |alpha|^2 + |beta|^2 must be 1");
    if (std::abs(alpha) < kPruneTol || std::abs(beta) < kPruneTol)
        throw std::invalid_argument("concentrate_procrustean: product state cannot be concentrated");

    VectorXcd v = VectorXcd::Zero(4);
    v(1) = alpha;  // |HV>
    v(2) = beta;   // |VH>
    QubitRegister in(2, std::move(v));

    // local filter on qubit 0 attenuating the larger branch
    double r = std::min(std::abs(beta) / std::abs(alpha), std::abs(alpha) / std::abs(beta));
    Eigen::Matrix2cd k = Eigen::Matrix2cd::Identity();
    (std::abs(alpha) > std::abs(beta) ? k(0, 0) : k(1, 1)) = r;

    QubitRegister filtered = in.apply1(k, 0);
    double p = filtered.amplitudes().squaredNorm();
    QubitRegister out(2, filtered.amplitudes() / std::sqrt(p));

    cxd phase = (beta / std::abs(beta)) / (alpha / std::abs(alpha));
    VectorXcd t = VectorXcd::Zero(4);
    t(1) = kInvSqrt2;
    t(2) = phase * kInvSqrt2;
    QubitRegister target(2, std::move(t));
    return {p, out, fidelity(DensityOperator(out), target)};
}

CnotResult cnot_nondestructive(const QubitRegister& control_target) {
    if (control_target.num_qubits() != 2)
        throw std::invalid_argument("cnot_nondestructive: expected a 2-qubit state");
    ModePair p2{mode_h("2"), mode_v("2")}, p5{mode_h("5"), mode_v("5")};
    ModePair p3{mode_h("3"), mode_v("3")}, p4{mode_h("4"), mode_v("4")};
    ModePair p2o{mode_h("2o"), mode_v("2o")}, p3o{mode_h("3o"), mode_v("3o")};
    ModePair p4o{mode_h("4o"), mode_v("4o")}, p5o{mode_h("5o"), mode_v("5o")};
    ModeRegistry reg;
    for (auto& p : {p2, p5, p3, p4, p2o, p3o, p4o, p5o}) {
        reg.add(p.first);
        reg.add(p.second);
    }
    QubitRegister with_ancilla = control_target.tensor(QubitRegister::bell("psi-"));
    FockState s = qubits_to_fock(with_ancilla, QubitEncoding{{p2, p5, p3, p4}}, reg, 4);
    s = apply_mode_map(s, pbs(p2, p3, p2o, p3o));                  // H/V parity check
    s = apply_mode_map(s, pbs(p4, p5, p4o, p5o, PolBasis::Diag));  // +-45 parity check

    auto four_mode = Pattern::one_photon_per_group({{p2o.first, p2o.second},
                                                    {p3o.first, p3o.second},
                                                    {p4o.first, p4o.second},
                                                    {p5o.first, p5o.second}});
    auto selected = postselect(s, four_mode);

    // heralds: 3o analyzed at +-45, 4o in H/V
    FockState sel = apply_mode_map(selected.state, wave_plate(p3o, WavePlateKind::Half, kPi / 8));

    CnotResult res;
    res.success_probability = selected.probability;
    QubitRegister want = control_target.apply2(cnot_gate(), 0, 1);
    for (int h3 = 0; h3 < 2; ++h3)
        for (int h4 = 0; h4 < 2; ++h4) {
            Pattern p;
            p.exact.push_back({h3 ? p3o.second : p3o.first, 1});
            p.exact.push_back({h3 ? p3o.first : p3o.second, 0});
            p.exact.push_back({h4 ? p4o.second : p4o.first, 1});
            p.exact.push_back({h4 ? p4o.first : p4o.second, 0});
            auto branch = postselect(sel, p);
            if (branch.probability < 1e-12) continue;
            QubitRegister out = fock_to_qubits(branch.state, QubitEncoding{{p2o, p5o}});
            // the +-45 herald fixes a z on the control output, the H/V
            // herald an x on the target output
            PauliCorrection corr{{'i', 'i'}};
            bool found = false;
            for (char ca : {'i', 'z'}) {
                for (char cb : {'i', 'x'})
                    if (out.apply1(pauli(ca), 0).apply1(pauli(cb), 1).equals_up_to_phase(want, 1e-9)) {
                        corr = PauliCorrection{{ca, cb}};
                        found = true;
                        break;
                    }
                if (found) break;
            }
            if (!found) throw std::runtime_error("cnot_nondestructive: no Pauli correction found");
            std::string herald = std::string(h3 ? "V'" : "H'") + (h4 ? "V" : "H");
            res.branches.push_back({herald, selected.probability * branch.probability, out, corr});
        }
    return res;
}

EntanglerResult event_ready_entangler() {
    // four single photons |V'>_1 |V>_2 |H'>_1' |H>_2'; two parity checks in
    // complementary bases: PBS in H/V on (1, 1') -> (a, A); PBS in +-45 on
    // (2, 2') -> (b, B)
    ModePair p1{mode_h("1"), mode_v("1")}, p1p{mode_h("1'"), mode_v("1'")};
    ModePair p2{mode_h("2"), mode_v("2")}, p2p{mode_h("2'"), mode_v("2'")};
    ModePair pa{mode_h("a"), mode_v("a")}, pA{mode_h("A"), mode_v("A")};
    ModePair pb{mode_h("b"), mode_v("b")}, pB{mode_h("B"), mode_v("B")};
    ModeRegistry reg;
    for (auto& p : {p1, p1p, p2, p2p, pa, pA, pb, pB}) {
        reg.add(p.first);
        reg.add(p.second);
    }
    FockState vac = FockState::vacuum(reg, 4);
    FockState in = (vac.create(p1.first) + vac.create(p1.second).scaled(-1)).scaled(kInvSqrt2);
    in = in.create(p2.second);
    in = (in.create(p1p.first) + in.create(p1p.second)).scaled(kInvSqrt2);
    in = in.create(p2p.first);

    FockState s = apply_mode_map(in, pbs(p1, p1p, pa, pA));
    s = apply_mode_map(s, pbs(p2, p2p, pb, pB, PolBasis::Diag));

    auto four_mode = Pattern::one_photon_per_group(
        {{pa.first, pa.second}, {pA.first, pA.second}, {pb.first, pb.second}, {pB.first, pB.second}});
    auto selected = postselect(s, four_mode);

    EntanglerResult res;
    res.four_mode_probability = selected.probability;
    QubitRegister q4 = fock_to_qubits(selected.state, QubitEncoding{{pa, pb, pA, pB}});
    QubitRegister psim = QubitRegister::bell("psi-");
    double conclusive = 0;
    for (auto k : kBellKinds) {
        VectorXcd rest = project_pair(q4, 2, 3, bell_of(k));
        double p = rest.squaredNorm();
        if (p < 1e-12) continue;
        QubitRegister ab(2, rest / std::sqrt(p));
        PauliCorrection corr{{'i', 'i'}};
        bool found = false;
        for (char ca : {'i', 'x', 'y', 'z'}) {
            for (char cb : {'i', 'x', 'y', 'z'})
                if (ab.apply1(pauli(ca), 0).apply1(pauli(cb), 1).equals_up_to_phase(psim, 1e-9)) {
                    corr = PauliCorrection{{ca, cb}};
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (!found) throw std::runtime_error("event_ready_entangler: no correction found");
        res.branches.push_back({k, p, ab, corr});
        if (k == BellOutcomeKind::PhiPlus || k == BellOutcomeKind::PhiMinus) conclusive += p;
    }
    res.success_probability = res.four_mode_probability * conclusive;
    return res;
}

FransonResult franson_timebin(cxd alpha, cxd beta, int points) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kAlgebraTol)
        throw std::invalid_argument("franson_timebin: coefficients must be normalized");
    // Short-window coincidence in the monitored outputs: the short-short
    // component reaches the middle time bin via the long arms (two
    // reflections each, combined phase phi), the long-long component via
    // the short arms. Amplitudes: alpha (-e^{i phi_1}/2)(-e^{i phi_2}/2)
    // against beta (1/2)(1/2); phi = phi_1 + phi_2 is swept.
    Mode m1{"1", 0, 1}, m2{"2", 0, 1};
    ModeRegistry reg({m1, m2});
    FransonResult res;
    double mean = 0;
    for (int k = 0; k < points; ++k) {
        double phi = 2 * kPi * k / points;
        FockState vac = FockState::vacuum(reg, 2);
        FockState mid = vac.create(m1).create(m2);
        FockState amp = mid.scaled(alpha * 0.25 * std::exp(cxd(0, phi))) + mid.scaled(beta * 0.25);
        double p = std::norm(amp.amplitude({1, 1}));
        res.phis.push_back(phi);
        res.fringe.push_back(p);
        mean += p / points;
    }
    for (auto& v : res.fringe) v /= mean;
    double vmax = *std::max_element(res.fringe.begin(), res.fringe.end());
    double vmin = *std::min_element(res.fringe.begin(), res.fringe.end());
    res.visibility = (vmax - vmin) / (vmax + vmin);
    return res;
}

}  // namespace loqs
