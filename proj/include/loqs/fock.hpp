// Sparse bosonic Fock states and linear mode maps.
//
// A state is a map occupation-vector -> amplitude over a mode registry,
// truncated at nmax total photons. Mode maps substitute creation operators
// a+_m -> sum_n U_mn a+_n and re-expand, which is exact for any passive
// linear network.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>

#include "loqs/mode.hpp"

namespace loqs {

using Occupation = std::vector<int>;

inline constexpr double kPruneTol = 1e-14;
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr int kDefaultNmax = 12;

/// Unitary acting on a subset of registry modes; identity elsewhere.
struct ModeMap {
    std::vector<Mode> modes;
    MatrixXcd unitary;

    ModeMap() = default;
    ModeMap(std::vector<Mode> ms, MatrixXcd u);

    /// map composition: result acts as `other` after `*this`.
    ModeMap then(const ModeMap& other) const;
};

class FockState {
public:
    FockState() = default;
    explicit FockState(ModeRegistry registry, int nmax = kDefaultNmax);

    static FockState vacuum(ModeRegistry registry, int nmax = kDefaultNmax);

    const ModeRegistry& registry() const { return registry_; }
    int nmax() const { return nmax_; }
    const std::map<Occupation, cxd>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    /// Photon-number truncation loss discarded since construction.
    double truncation_loss() const { return truncation_loss_; }

    void add_term(const Occupation& occ, cxd amplitude);
    cxd amplitude(const Occupation& occ) const;

    /// Applies a+_m; keeps amplitude bookkeeping for |n> = prod (a+)^n/sqrt(n!)|0>.
    FockState create(const Mode& m) const;

    double norm() const;
    FockState normalized() const;
    bool is_normalized(double tol = kAlgebraTol) const { return std::abs(norm() - 1.0) < tol; }

    cxd inner(const FockState& other) const;
    int total_photons_max() const;

    FockState tensor(const FockState& other) const;
    FockState scaled(cxd factor) const;
    FockState operator+(const FockState& other) const;

    void prune(double tol = kPruneTol);

private:
    ModeRegistry registry_;
    int nmax_ = kDefaultNmax;
    std::map<Occupation, cxd> terms_;
    double truncation_loss_ = 0.0;

    friend FockState apply_mode_map(const FockState&, const ModeMap&);
};

/// Builds prod_i a+_{modes[i]} |vac> normalized (exchange order is irrelevant).
FockState product_photons(ModeRegistry registry, const std::vector<Mode>& photons,
                          int nmax = kDefaultNmax);

FockState apply_mode_map(const FockState& state, const ModeMap& map);

/// One per-mode constraint; `exact` photons, or any count when unset.
struct ModeConstraint {
    Mode mode;
    int exact = 1;
};

/// Post-selection pattern: exact per-mode counts plus group constraints that
/// demand an exact total photon number within a set of modes.
struct Pattern {
    std::vector<ModeConstraint> exact;
    struct Group {
        std::vector<Mode> modes;
        int total = 1;
    };
    std::vector<Group> groups;

    static Pattern one_photon_each(const std::vector<Mode>& modes);
    /// exactly one photon in the pair of modes (pol slots of one path)
    static Pattern one_photon_per_group(const std::vector<std::vector<Mode>>& groups);
};

struct PostselectResult {
    FockState state;        // renormalized; empty terms when probability == 0
    double probability = 0; // Born weight of the selected subspace
};

PostselectResult postselect(const FockState& state, const Pattern& pattern);

/// Applies a phase e^{i phi} to a single mode.
ModeMap phase_shift(const Mode& m, double phi);

}  // namespace loqs
