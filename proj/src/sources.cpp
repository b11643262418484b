#include "loqs/sources.hpp"

#include <cmath>

#include "loqs/optics.hpp"

namespace loqs {

namespace {

const double kPi = 3.14159265358979323846;

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// unnormalized pair-creation term for the chosen Bell state
FockState pair_term(const PairSource& s, const FockState& base) {
    const auto& [aH, aV] = s.out_a;
    const auto& [bH, bV] = s.out_b;
    switch (s.bell) {
        case BellKind::PsiPlus: return base.create(aH).create(bV) + base.create(aV).create(bH);
        case BellKind::PsiMinus: return base.create(aH).create(bV) + base.create(aV).create(bH).scaled(-1);
        case BellKind::PhiPlus: return base.create(aH).create(bH) + base.create(aV).create(bV);
        case BellKind::PhiMinus: return base.create(aH).create(bH) + base.create(aV).create(bV).scaled(-1);
    }
    throw std::logic_error("pair_term: bad kind");
}

FockState product_states(const ModeRegistry& reg, int nmax, const FockState& x, const FockState& y) {
    FockState out(reg, nmax);
    for (const auto& [o1, a1] : x.terms())
        for (const auto& [o2, a2] : y.terms()) {
            Occupation occ(reg.size(), 0);
            for (std::size_t i = 0; i < occ.size(); ++i) occ[i] = o1[i] + o2[i];
            out.add_term(occ, a1 * a2);
        }
    return out;
}

}  // namespace

QubitRegister bell_register(BellKind k) {
    switch (k) {
        case BellKind::PsiPlus: return QubitRegister::bell("psi+");
        case BellKind::PsiMinus: return QubitRegister::bell("psi-");
        case BellKind::PhiPlus: return QubitRegister::bell("phi+");
        case BellKind::PhiMinus: return QubitRegister::bell("phi-");
    }
    throw std::logic_error("bell_register: bad kind");
}

FockState emit_bell_pair(const PairSource& source, int order, int nmax) {
    if (2 * order > nmax) throw std::invalid_argument("emit_bell_pair: order exceeds truncation");
    ModeRegistry reg({source.out_a.first, source.out_a.second, source.out_b.first, source.out_b.second});
    FockState term = FockState::vacuum(reg, nmax);
    FockState acc = term;  // m = 0
    cxd zm = 1.0;
    for (int m = 1; m <= order; ++m) {
        term = pair_term(source, term);
        zm *= source.z;
        acc = acc + term.scaled(zm / factorial(m));
    }
    return acc.normalized();
}

GhzSource build_ghz_source(int n, bool trigger_minus) {
    if (n != 3 && n != 4) throw std::invalid_argument("build_ghz_source: n must be 3 or 4");

    // two phi+ pairs on photons (1,2) and (3,4); photons 2 and 3 meet a PBS
    ModePair p1{mode_h("1"), mode_v("1")}, p2{mode_h("2"), mode_v("2")};
    ModePair p3{mode_h("3"), mode_v("3")}, p4{mode_h("4"), mode_v("4")};
    ModePair p2o{mode_h("2o"), mode_v("2o")}, p3o{mode_h("3o"), mode_v("3o")};

    ModeRegistry reg;
    for (auto& p : {p1, p2, p3, p4, p2o, p3o}) {
        reg.add(p.first);
        reg.add(p.second);
    }
    FockState vac = FockState::vacuum(reg, 8);
    FockState pair12 = (vac.create(p1.first).create(p2.first) + vac.create(p1.second).create(p2.second))
                           .scaled(1 / std::sqrt(2.0));
    FockState pair34 = (vac.create(p3.first).create(p4.first) + vac.create(p3.second).create(p4.second))
                           .scaled(1 / std::sqrt(2.0));
    FockState state = product_states(reg, 8, pair12, pair34);
    state = apply_mode_map(state, pbs(p2, p3, p2o, p3o));

    GhzSource out;
    if (n == 4) {
        out.pattern = Pattern::one_photon_per_group({{p1.first, p1.second},
                                                     {p2o.first, p2o.second},
                                                     {p3o.first, p3o.second},
                                                     {p4.first, p4.second}});
        out.encoding = QubitEncoding{{{p1.first, p1.second},
                                      {p2o.first, p2o.second},
                                      {p3o.first, p3o.second},
                                      {p4.first, p4.second}}};
    } else {
        // trigger photon 2o analyzed at +-45: rotate, then demand a single
        // photon in the H slot (+45 trigger) or the V slot (-45 trigger)
        state = apply_mode_map(state, wave_plate(p2o, WavePlateKind::Half, kPi / 8));
        Pattern p;
        p.exact.push_back({p2o.first, trigger_minus ? 0 : 1});
        p.exact.push_back({p2o.second, trigger_minus ? 1 : 0});
        p.groups = Pattern::one_photon_per_group({{p1.first, p1.second},
                                                  {p3o.first, p3o.second},
                                                  {p4.first, p4.second}})
                       .groups;
        out.pattern = p;
        out.encoding = QubitEncoding{{{p1.first, p1.second},
                                      {p3o.first, p3o.second},
                                      {p4.first, p4.second}}};
    }
    out.state = state;
    out.probability = postselect(state, out.pattern).probability;
    return out;
}

FockState twin_beam_state(double tau, int order) {
    if (tau < 0) throw std::invalid_argument("twin_beam_state: tau must be >= 0");
    Mode aH = mode_h("a"), aV = mode_v("a"), bH = mode_h("b"), bV = mode_v("b");
    ModeRegistry reg({aH, aV, bH, bV});
    const int nmax = std::max(2 * order, 1);
    FockState acc(reg, nmax);
    const double t = std::tanh(tau);
    const double prefactor = 1.0 / (std::cosh(tau) * std::cosh(tau));
    for (int n = 0; n <= order; ++n) {
        for (int m = 0; m <= n; ++m) {
            Occupation occ(4, 0);
            occ[reg.index_of(aH)] = n - m;
            occ[reg.index_of(aV)] = m;
            occ[reg.index_of(bH)] = m;
            occ[reg.index_of(bV)] = n - m;
            double sign = (m % 2 == 0) ? 1.0 : -1.0;
            acc.add_term(occ, prefactor * std::pow(t, n) * sign);
        }
    }
    return acc;  // normalized up to the truncated tail
}

double twin_beam_mean_pairs(const FockState& state) {
    double mean = 0;
    for (const auto& [occ, amp] : state.terms()) {
        int tot = 0;
        for (int v : occ) tot += v;
        mean += std::norm(amp) * tot / 2.0;
    }
    return mean;
}

FockState noon_state(int n, const Mode& a, const Mode& b, int nmax) {
    if (n < 1 || n > nmax) throw std::invalid_argument("noon_state: N out of range");
    ModeRegistry reg({a, b});
    FockState s(reg, nmax);
    s.add_term({n, 0}, 1 / std::sqrt(2.0));
    s.add_term({0, n}, 1 / std::sqrt(2.0));
    return s;
}

double noon_fringe(int n, double phi) {
    Mode a{"a"}, b{"b"};
    FockState noon = noon_state(n, a, b, n);
    FockState shifted = apply_mode_map(noon, phase_shift(b, phi));
    return std::norm(shifted.inner(noon));
}

FockState hyper_entangled_state() {
    auto m = [](const char* side, const char* path, int pol) {
        return Mode{std::string(side) + path, pol};
    };
    ModeRegistry reg;
    for (const char* side : {"A", "B"})
        for (const char* path : {"u", "d"})
            for (int pol : {0, 1}) reg.add(m(side, path, pol));

    FockState out(reg, 4);
    auto pol_amp = [](int lA, int lB) {
        return (lA == 0 && lB == 1) ? 1.0 : (lA == 1 && lB == 0) ? -1.0 : 0.0;
    };
    auto path_amp = [](int pA, int pB) {
        return (pA == 0 && pB == 1) ? 1.0 : (pA == 1 && pB == 0) ? -1.0 : 0.0;
    };
    const char* paths[2] = {"u", "d"};
    for (int pA = 0; pA < 2; ++pA)
        for (int pB = 0; pB < 2; ++pB)
            for (int lA = 0; lA < 2; ++lA)
                for (int lB = 0; lB < 2; ++lB) {
                    double amp = pol_amp(lA, lB) * path_amp(pA, pB) / 2.0;
                    if (amp == 0.0) continue;
                    Occupation occ(reg.size(), 0);
                    occ[reg.index_of(m("A", paths[pA], lA))] = 1;
                    occ[reg.index_of(m("B", paths[pB], lB))] = 1;
                    out.add_term(occ, amp);
                }
    return out;
}

QubitRegister hyper_entangled_qubits() {
    QubitRegister prod = QubitRegister::bell("psi-").tensor(QubitRegister::bell("psi-"));
    // reorder (polA, polB, pathA, pathB) -> (polA, pathA, polB, pathB)
    VectorXcd v(16);
    for (int i = 0; i < 16; ++i) {
        int polA = (i >> 3) & 1, pathA = (i >> 2) & 1, polB = (i >> 1) & 1, pathB = i & 1;
        int src = (polA << 3) | (polB << 2) | (pathA << 1) | pathB;
        v(i) = prod.amplitude(src);
    }
    return QubitRegister(4, std::move(v));
}

CoincidenceResult coincidence_count(const FockState& state, const CoincidenceSpec& spec,
                                    long long trials, std::uint64_t seed) {
    const auto& reg = state.registry();
    std::vector<std::size_t> idx;
    for (const auto& m : spec.detector_modes) idx.push_back(reg.index_of(m));
    std::vector<DetectorModel> det = spec.detectors;
    if (det.empty()) det.assign(idx.size(), DetectorModel{1.0, true});
    if (det.size() != idx.size())
        throw std::invalid_argument("coincidence_count: detector list size mismatch");

    CoincidenceResult res;
    for (const auto& [occ, amp] : state.terms()) {
        double p_occ = std::norm(amp);
        if (p_occ < 1e-30) continue;
        std::vector<std::pair<std::vector<int>, double>> partial{{{}, p_occ}};
        for (std::size_t d = 0; d < idx.size(); ++d) {
            int n = occ[idx[d]];
            const auto& dm = det[d];
            std::vector<std::pair<int, double>> resp;
            if (dm.efficiency >= 1.0) {
                resp.emplace_back(dm.number_resolving ? n : (n > 0 ? 1 : 0), 1.0);
            } else {
                for (int k = 0; k <= n; ++k) {
                    double c = factorial(n) / (factorial(k) * factorial(n - k));
                    double p = c * std::pow(dm.efficiency, k) * std::pow(1 - dm.efficiency, n - k);
                    resp.emplace_back(dm.number_resolving ? k : (k > 0 ? 1 : 0), p);
                }
            }
            std::vector<std::pair<std::vector<int>, double>> next;
            for (const auto& [vec, p] : partial)
                for (const auto& [r, pr] : resp) {
                    if (pr == 0) continue;
                    auto v2 = vec;
                    v2.push_back(r);
                    next.emplace_back(std::move(v2), p * pr);
                }
            partial = std::move(next);
        }
        for (auto& [vec, p] : partial) res.probabilities[vec] += p;
    }

    if (trials > 0) {
        std::mt19937_64 rng(seed);
        std::vector<const std::vector<int>*> keys;
        std::vector<double> weights;
        for (const auto& [k, p] : res.probabilities) {
            keys.push_back(&k);
            weights.push_back(p);
        }
        std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
        res.trials = trials;
        for (long long t = 0; t < trials; ++t) res.counts[*keys[dist(rng)]] += 1;
    }
    return res;
}

double probability_all_fire(const FockState& state, const std::vector<Mode>& detector_modes,
                            double efficiency) {
    const auto& reg = state.registry();
    std::vector<std::size_t> idx;
    for (const auto& m : detector_modes) idx.push_back(reg.index_of(m));
    double total = 0;
    for (const auto& [occ, amp] : state.terms()) {
        double p = std::norm(amp);
        for (auto i : idx) {
            p *= 1.0 - std::pow(1.0 - efficiency, occ[i]);
            if (p == 0) break;
        }
        total += p;
    }
    return total;
}

FockState epr_interferometer(double alpha, double beta) {
    Mode a{"a"}, b{"b"}, ap{"a'"}, bp{"b'"};
    Mode c1{"1c"}, d1{"1d"}, c2{"2c"}, d2{"2d"};
    ModeRegistry reg({a, b, ap, bp, c1, d1, c2, d2});
    FockState vac = FockState::vacuum(reg, 2);
    FockState state = (vac.create(a).create(ap) + vac.create(b).create(bp)).scaled(1 / std::sqrt(2.0));
    state = apply_mode_map(state, phase_shift(a, alpha));
    state = apply_mode_map(state, phase_shift(bp, beta));
    state = apply_mode_map(state, beam_splitter_5050(a, b, c1, d1));
    state = apply_mode_map(state, beam_splitter_5050(ap, bp, c2, d2));
    return state;
}

FockState ghz_interferometer(double phi_a, double phi_b, double phi_c) {
    Mode a1{"a1"}, a2{"a2"}, b1{"b1"}, b2{"b2"}, c1{"c1"}, c2{"c2"};
    Mode d1{"d1"}, d2{"d2"}, e1{"e1"}, e2{"e2"}, f1{"f1"}, f2{"f2"};
    ModeRegistry reg({a1, a2, b1, b2, c1, c2, d1, d2, e1, e2, f1, f2});
    FockState vac = FockState::vacuum(reg, 3);
    FockState state =
        (vac.create(a1).create(b1).create(c1) + vac.create(a2).create(b2).create(c2))
            .scaled(1 / std::sqrt(2.0));
    state = apply_mode_map(state, phase_shift(a2, phi_a));
    state = apply_mode_map(state, phase_shift(b2, phi_b));
    state = apply_mode_map(state, phase_shift(c2, phi_c));
    state = apply_mode_map(state, beam_splitter_5050(a1, a2, d1, d2));
    state = apply_mode_map(state, beam_splitter_5050(b1, b2, e1, e2));
    state = apply_mode_map(state, beam_splitter_5050(c1, c2, f1, f2));
    return state;
}

double visibility_v4(const FilterSpec& f) {
    if (f.sigma_p <= 0 || f.sigma_F <= 0 || f.sigma_f <= 0)
        throw std::invalid_argument("visibility_v4: widths must be positive");
    const double p2 = f.sigma_p * f.sigma_p, F2 = f.sigma_F * f.sigma_F, f2 = f.sigma_f * f.sigma_f;
    return std::sqrt(p2 / (p2 + F2 * f2 / (p2 + F2 + f2)));
}

double multipair_visibility(cxd z) {
    if (std::abs(z) >= 1.0) throw std::invalid_argument("multipair_visibility: |z| must be < 1");

    // Four-photon interference of the entanglement-swapping configuration
    // with psi- pair ladders on (1,2) and (3,4). Photons 2 and 3 meet a
    // 50:50 BS; the herald is a coincidence of the two BS outputs; photons
    // 1 and 4 are analyzed behind polarizers. All detectors are threshold
    // detectors, so higher pair emissions both dilute and fake coincidences.
    // Ladders carry up to three pair emissions per source; two is not
    // enough to resolve the 50% threshold of the fringe visibility.
    const int kOrder = 3, nmax = 2 * kOrder * 2;
    ModePair p1{mode_h("1"), mode_v("1")}, p2{mode_h("2"), mode_v("2")};
    ModePair p3{mode_h("3"), mode_v("3")}, p4{mode_h("4"), mode_v("4")};
    ModePair f1{mode_h("f1"), mode_v("f1")}, f2{mode_h("f2"), mode_v("f2")};
    ModeRegistry reg;
    for (auto& p : {p1, p2, p3, p4, f1, f2}) {
        reg.add(p.first);
        reg.add(p.second);
    }
    FockState vac = FockState::vacuum(reg, nmax);
    auto ladder = [&](const ModePair& a, const ModePair& b) {
        FockState s = vac, term = vac;
        cxd zm = 1;
        double fact = 1;
        for (int m = 1; m <= kOrder; ++m) {
            term = term.create(a.first).create(b.second) +
                   term.create(a.second).create(b.first).scaled(-1);
            zm *= z;
            fact *= m;
            s = s + term.scaled(zm / fact);
        }
        return s;
    };
    FockState total = product_states(reg, nmax, ladder(p1, p2), ladder(p3, p4)).normalized();
    total = apply_mode_map(total, beam_splitter_5050(p2.first, p3.first, f1.first, f2.first));
    total = apply_mode_map(total, beam_splitter_5050(p2.second, p3.second, f1.second, f2.second));

    auto rate = [&](double t1, double t4) {
        FockState s = total;
        auto rot = [&](const ModePair& p, double t) {
            Eigen::Matrix2cd r;
            r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
            return ModeMap({p.first, p.second}, r.transpose());
        };
        s = apply_mode_map(s, rot(p1, t1));
        s = apply_mode_map(s, rot(p4, t4));
        std::size_t i1 = reg.index_of(p1.first), i4 = reg.index_of(p4.first);
        std::size_t a1 = reg.index_of(f1.first), a2 = reg.index_of(f1.second);
        std::size_t b1 = reg.index_of(f2.first), b2 = reg.index_of(f2.second);
        double p = 0;
        for (const auto& [occ, amp] : s.terms()) {
            if (occ[a1] + occ[a2] < 1 || occ[b1] + occ[b2] < 1) continue;
            if (occ[i1] >= 1 && occ[i4] >= 1) p += std::norm(amp);
        }
        return p;
    };
    // psi- fringe in the analyzer difference angle: extremes at parallel
    // and orthogonal settings
    double p_par = rate(0.3, 0.3), p_orth = rate(0.3, 0.3 + kPi / 2);
    return std::abs(p_orth - p_par) / (p_orth + p_par);
}

}  // namespace loqs
