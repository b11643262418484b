// Optical modes and the registry that maps them to dense indices.
//
// A Mode is one bosonic degree of freedom: a path label, a polarization
// slot in {0,1} and a time bin. Polarization slot 0 is H and slot 1 is V
// in the lab frame; rotated bases (+-45 degrees, circular) are handled by
// 2x2 unitaries acting on the two slots, see polarization_basis().

#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace loqs {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct Mode {
    std::string path;
    int pol = 0;      // 0 = H slot, 1 = V slot
    int timebin = 0;  // 0 = early

    auto operator<=>(const Mode&) const = default;
};

inline Mode mode_h(std::string path, int timebin = 0) { return {std::move(path), 0, timebin}; }
inline Mode mode_v(std::string path, int timebin = 0) { return {std::move(path), 1, timebin}; }

/// the (H, V) mode slots of one spatial port
using ModePair = std::pair<Mode, Mode>;

/// Stable Mode -> dense index assignment; indices never change once issued.
class ModeRegistry {
public:
    ModeRegistry() = default;
    explicit ModeRegistry(const std::vector<Mode>& modes) {
        for (const auto& m : modes) add(m);
    }

    std::size_t add(const Mode& m) {
        auto it = index_.find(m);
        if (it != index_.end()) return it->second;
        index_.emplace(m, modes_.size());
        modes_.push_back(m);
        return modes_.size() - 1;
    }

    std::size_t index_of(const Mode& m) const {
        auto it = index_.find(m);
        if (it == index_.end()) throw std::invalid_argument("ModeRegistry: unknown mode " + to_string(m));
        return it->second;
    }

    bool contains(const Mode& m) const { return index_.count(m) != 0; }
    std::size_t size() const { return modes_.size(); }
    const Mode& mode(std::size_t i) const { return modes_.at(i); }
    const std::vector<Mode>& modes() const { return modes_; }

    static std::string to_string(const Mode& m) {
        return m.path + (m.pol == 0 ? ":H" : ":V") + (m.timebin ? ":t" + std::to_string(m.timebin) : "");
    }

private:
    std::vector<Mode> modes_;
    std::map<Mode, std::size_t> index_;
};

enum class PolBasis { HV, Diag, Circ };

/// Column k of the returned matrix expresses basis ket k in the H/V frame.
/// Diag: |+45> = (H+V)/sqrt2, |-45> = (H-V)/sqrt2.
/// Circ: |R> = (H+iV)/sqrt2, |L> = (H-iV)/sqrt2, so that |R><R|-|L><L| = sigma_y.
inline Eigen::Matrix2cd polarization_basis(PolBasis b) {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd u;
    switch (b) {
        case PolBasis::HV: u.setIdentity(); break;
        case PolBasis::Diag:
            u << s, s,
                 s, -s;
            break;
        case PolBasis::Circ:
            u << s, s,
                 cxd(0, s), cxd(0, -s);
            break;
    }
    return u;
}

}  // namespace loqs
