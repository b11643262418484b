#include "loqs/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace loqs {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

ModeMap::ModeMap(std::vector<Mode> ms, MatrixXcd u) : modes(std::move(ms)), unitary(std::move(u)) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    if (unitary.rows() != n || unitary.cols() != n)
        throw std::invalid_argument("ModeMap: matrix size does not match mode count");
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i + 1; j < modes.size(); ++j)
            if (modes[i] == modes[j]) throw std::invalid_argument("ModeMap: coincident modes");
    MatrixXcd err = unitary.adjoint() * unitary - MatrixXcd::Identity(n, n);
    if (err.cwiseAbs().maxCoeff() > kAlgebraTol)
        throw std::invalid_argument("ModeMap: matrix is not unitary within 1e-10");
}

ModeMap ModeMap::then(const ModeMap& other) const {
    // Embed both maps on the union of their mode sets; creation operators
    // transform as a+_m -> sum U_mn a+_n, so applying *this then `other`
    // corresponds to the matrix product U_this * U_other on the union.
    std::vector<Mode> all = modes;
    for (const auto& m : other.modes)
        if (std::find(all.begin(), all.end(), m) == all.end()) all.push_back(m);
    const auto n = static_cast<Eigen::Index>(all.size());
    auto embed = [&](const ModeMap& mm) {
        MatrixXcd u = MatrixXcd::Identity(n, n);
        for (std::size_t i = 0; i < mm.modes.size(); ++i) {
            auto gi = std::distance(all.begin(), std::find(all.begin(), all.end(), mm.modes[i]));
            for (std::size_t j = 0; j < mm.modes.size(); ++j) {
                auto gj = std::distance(all.begin(), std::find(all.begin(), all.end(), mm.modes[j]));
                u(gi, gj) = mm.unitary(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
        return u;
    };
    return ModeMap(all, embed(*this) * embed(other));
}

FockState::FockState(ModeRegistry registry, int nmax) : registry_(std::move(registry)), nmax_(nmax) {}

FockState FockState::vacuum(ModeRegistry registry, int nmax) {
    FockState s(std::move(registry), nmax);
    s.terms_[Occupation(s.registry_.size(), 0)] = 1.0;
    return s;
}

void FockState::add_term(const Occupation& occ, cxd amplitude) {
    if (occ.size() != registry_.size())
        throw std::invalid_argument("FockState: occupation length does not match registry");
    int total = std::accumulate(occ.begin(), occ.end(), 0);
    if (total > nmax_) {
        truncation_loss_ += std::norm(amplitude);
        return;
    }
    auto& a = terms_[occ];
    a += amplitude;
    if (std::abs(a) < kPruneTol) terms_.erase(occ);
}

cxd FockState::amplitude(const Occupation& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? cxd(0, 0) : it->second;
}

FockState FockState::create(const Mode& m) const {
    FockState out(registry_, nmax_);
    out.truncation_loss_ = truncation_loss_;
    std::size_t idx = registry_.index_of(m);
    for (const auto& [occ, amp] : terms_) {
        Occupation next = occ;
        next[idx] += 1;
        // a+|n> = sqrt(n+1)|n+1>
        out.add_term(next, amp * std::sqrt(double(next[idx])));
    }
    return out;
}

double FockState::norm() const {
    double n2 = 0;
    for (const auto& [occ, amp] : terms_) n2 += std::norm(amp);
    return std::sqrt(n2);
}

FockState FockState::normalized() const {
    double n = norm();
    if (n < kPruneTol) throw std::runtime_error("FockState: cannot normalize the zero vector");
    return scaled(1.0 / n);
}

cxd FockState::inner(const FockState& other) const {
    // registries must present modes in the same order
    if (registry_.size() != other.registry_.size())
        throw std::invalid_argument("FockState::inner: registry mismatch");
    cxd v = 0;
    const auto& a = terms_.size() < other.terms_.size() ? terms_ : other.terms_;
    const auto& b = terms_.size() < other.terms_.size() ? other.terms_ : terms_;
    for (const auto& [occ, amp] : a) {
        auto it = b.find(occ);
        if (it == b.end()) continue;
        if (&a == &terms_)
            v += std::conj(amp) * it->second;
        else
            v += std::conj(it->second) * amp;
    }
    return v;
}

int FockState::total_photons_max() const {
    int mx = 0;
    for (const auto& [occ, amp] : terms_)
        mx = std::max(mx, std::accumulate(occ.begin(), occ.end(), 0));
    return mx;
}

FockState FockState::tensor(const FockState& other) const {
    ModeRegistry reg = registry_;
    for (const auto& m : other.registry_.modes()) {
        if (reg.contains(m)) throw std::invalid_argument("FockState::tensor: overlapping registries");
        reg.add(m);
    }
    FockState out(reg, std::max(nmax_, other.nmax_));
    for (const auto& [oa, aa] : terms_) {
        for (const auto& [ob, ab] : other.terms_) {
            Occupation occ = oa;
            occ.insert(occ.end(), ob.begin(), ob.end());
            out.add_term(occ, aa * ab);
        }
    }
    return out;
}

FockState FockState::scaled(cxd factor) const {
    FockState out(registry_, nmax_);
    out.truncation_loss_ = truncation_loss_;
    for (const auto& [occ, amp] : terms_) out.terms_[occ] = amp * factor;
    out.prune();
    return out;
}

FockState FockState::operator+(const FockState& other) const {
    if (registry_.size() != other.registry_.size())
        throw std::invalid_argument("FockState::operator+: registry mismatch");
    FockState out(registry_, nmax_);
    out.terms_ = terms_;
    for (const auto& [occ, amp] : other.terms_) {
        auto& a = out.terms_[occ];
        a += amp;
        if (std::abs(a) < kPruneTol) out.terms_.erase(occ);
    }
    return out;
}

void FockState::prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < tol)
            it = terms_.erase(it);
        else
            ++it;
    }
}

FockState product_photons(ModeRegistry registry, const std::vector<Mode>& photons, int nmax) {
    FockState s = FockState::vacuum(std::move(registry), nmax);
    for (const auto& m : photons) s = s.create(m);
    return s.normalized();
}

FockState apply_mode_map(const FockState& state, const ModeMap& map) {
    std::vector<std::size_t> idx(map.modes.size());
    for (std::size_t i = 0; i < map.modes.size(); ++i) idx[i] = state.registry().index_of(map.modes[i]);

    FockState out(state.registry(), state.nmax());
    out.truncation_loss_ = state.truncation_loss();

    const std::size_t k = map.modes.size();
    for (const auto& [occ, amp] : state.terms()) {
        // polynomial coefficient of this term: amp / sqrt(prod n_m!)
        double fin = 1.0;
        for (std::size_t i = 0; i < k; ++i) fin *= factorial(occ[idx[i]]);
        cxd base = amp / std::sqrt(fin);

        // expand prod_i (sum_n U_in a+_n)^{occ[idx_i]} by multinomial recursion
        Occupation start = occ;
        for (std::size_t i = 0; i < k; ++i) start[idx[i]] = 0;

        struct Partial {
            Occupation occ;
            cxd coeff;
        };
        std::vector<Partial> frontier{{start, base}};
        for (std::size_t i = 0; i < k; ++i) {
            int p = occ[idx[i]];
            if (p == 0) continue;
            std::vector<Partial> next;
            // distribute p quanta of source mode i over the k target modes
            std::function<void(const Partial&, int, int, cxd, Occupation&)> rec =
                [&](const Partial& cur, int slot, int left, cxd c, Occupation& acc) {
                    if (slot == int(k) - 1) {
                        Occupation o = acc;
                        o[idx[slot]] += left;
                        cxd term = c * std::pow(map.unitary(i, slot), left) / factorial(left);
                        next.push_back({o, cur.coeff * term * factorial(p)});
                        return;
                    }
                    for (int q = 0; q <= left; ++q) {
                        Occupation o = acc;
                        o[idx[slot]] += q;
                        cxd term = c * std::pow(map.unitary(i, slot), q) / factorial(q);
                        rec(cur, slot + 1, left - q, term, o);
                    }
                };
            for (const auto& cur : frontier) {
                Occupation acc = cur.occ;
                rec(cur, 0, p, cxd(1, 0), acc);
            }
            frontier = std::move(next);
        }
        for (const auto& part : frontier) {
            double fout = 1.0;
            for (std::size_t i = 0; i < k; ++i) fout *= factorial(part.occ[idx[i]]);
            out.add_term(part.occ, part.coeff * std::sqrt(fout));
        }
    }
    out.prune();
    return out;
}

Pattern Pattern::one_photon_each(const std::vector<Mode>& modes) {
    Pattern p;
    for (const auto& m : modes) p.exact.push_back({m, 1});
    return p;
}

Pattern Pattern::one_photon_per_group(const std::vector<std::vector<Mode>>& groups) {
    Pattern p;
    for (const auto& g : groups) p.groups.push_back({g, 1});
    return p;
}

PostselectResult postselect(const FockState& state, const Pattern& pattern) {
    const auto& reg = state.registry();
    std::vector<std::pair<std::size_t, int>> exact;
    for (const auto& c : pattern.exact) exact.emplace_back(reg.index_of(c.mode), c.exact);
    struct GroupIdx {
        std::vector<std::size_t> idx;
        int total;
    };
    std::vector<GroupIdx> groups;
    for (const auto& g : pattern.groups) {
        GroupIdx gi;
        gi.total = g.total;
        for (const auto& m : g.modes) gi.idx.push_back(reg.index_of(m));
        groups.push_back(std::move(gi));
    }

    FockState sel(reg, state.nmax());
    double p = 0;
    for (const auto& [occ, amp] : state.terms()) {
        bool ok = true;
        for (const auto& [i, n] : exact)
            if (occ[i] != n) { ok = false; break; }
        for (const auto& g : groups) {
            if (!ok) break;
            int t = 0;
            for (auto i : g.idx) t += occ[i];
            if (t != g.total) ok = false;
        }
        if (!ok) continue;
        p += std::norm(amp);
        sel.add_term(occ, amp);
    }
    if (p < kPruneTol * kPruneTol) return {FockState(reg, state.nmax()), 0.0};
    return {sel.scaled(1.0 / std::sqrt(p)), p};
}

ModeMap phase_shift(const Mode& m, double phi) {
    MatrixXcd u(1, 1);
    u(0, 0) = std::exp(cxd(0, phi));
    return ModeMap({m}, u);
}

}  // namespace loqs
