#include "loqs/nonclassicality.hpp"

#include <cmath>

namespace loqs {

namespace {

const double kPi = 3.14159265358979323846;

void require_unit(const Setting& a) {
    if (std::abs(a.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("setting must be a unit vector");
}

}  // namespace

double correlation(const DensityOperator& state, const std::vector<Setting>& settings) {
    if (int(settings.size()) != state.num_qubits())
        throw std::invalid_argument("correlation: one setting per party required");
    std::vector<Eigen::Matrix2cd> factors;
    for (const auto& a : settings) {
        require_unit(a);
        factors.push_back(bloch_observable(a));
    }
    return state.expectation(kron_all(factors));
}

Setting ghz_phase_setting(double phi) { return Setting(-std::sin(phi), -std::cos(phi), 0.0); }

double chsh_value(const DensityOperator& state, const Setting& a1, const Setting& a2,
                  const Setting& b1, const Setting& b2) {
    auto e = [&](const Setting& a, const Setting& b) { return correlation(state, {a, b}); };
    return std::abs(e(a1, b1) + e(a1, b2) + e(a2, b1) - e(a2, b2));
}

ChshSettings chsh_optimal_settings() {
    const double s = 1 / std::sqrt(2.0);
    return {Setting(0, 0, 1), Setting(1, 0, 0), Setting(-s, 0, -s), Setting(s, 0, -s)};
}

double chsh_optimum(const DensityOperator& state, double angle_tol) {
    // four settings, two spherical angles each
    std::array<double, 8> ang = {0, 0, kPi / 2, 0, kPi / 4, 0, 3 * kPi / 4, 0};
    auto setting = [](double theta, double phi) {
        return Setting(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                       std::cos(theta));
    };
    auto value = [&](const std::array<double, 8>& x) {
        return chsh_value(state, setting(x[0], x[1]), setting(x[2], x[3]), setting(x[4], x[5]),
                          setting(x[6], x[7]));
    };

    // coarse grid over two-angle planes for a decent start
    double best = value(ang);
    const int g = 6;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            for (int k = 0; k < g; ++k)
                for (int l = 0; l < g; ++l) {
                    std::array<double, 8> x = {kPi * i / g, 0, kPi * j / g, 0, kPi * k / g, 0,
                                               kPi * l / g, 0};
                    double v = value(x);
                    if (v > best) {
                        best = v;
                        ang = x;
                    }
                }
    // coordinate descent with shrinking step
    for (double step = kPi / g; step > angle_tol; step /= 2) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (int d = 0; d < 8; ++d)
                for (double sgn : {1.0, -1.0}) {
                    auto x = ang;
                    x[d] += sgn * step;
                    double v = value(x);
                    if (v > best + 1e-15) {
                        best = v;
                        ang = x;
                        improved = true;
                    }
                }
        }
    }
    return best;
}

CorrelationFunctional chsh_functional() {
    // E11 + E12 + E21 - E22
    return {2, 2, {1, 1, 1, -1}};
}

CorrelationFunctional mermin3_functional() {
    // settings: 0 = x, 1 = y;  XXX - XYY - YXY - YYX
    CorrelationFunctional f{3, 2, std::vector<double>(8, 0.0)};
    auto idx = [](int a, int b, int c) { return a * 4 + b * 2 + c; };
    f.coeffs[idx(0, 0, 0)] = 1;
    f.coeffs[idx(0, 1, 1)] = -1;
    f.coeffs[idx(1, 0, 1)] = -1;
    f.coeffs[idx(1, 1, 0)] = -1;
    return f;
}

CorrelationFunctional ardehali_functional() {
    // settings 0 = x, 1 = y on the first three parties; the fourth party
    // measures the elliptic pair sigma_a (setting 0), sigma_b (setting 1):
    //   1/2 (XXX - XYY + YXY + YYX)(sigma_a + sigma_b)
    // + 1/2 (YYY + XYX + XXY - YXX)(sigma_a - sigma_b)
    CorrelationFunctional f{4, 2, std::vector<double>(16, 0.0)};
    auto idx = [](int a, int b, int c, int d) { return a * 8 + b * 4 + c * 2 + d; };
    auto add = [&](int a, int b, int c, double g1g2sign, bool second_group) {
        if (!second_group) {  // times (sigma_a + sigma_b)/2
            f.coeffs[idx(a, b, c, 0)] += 0.5 * g1g2sign;
            f.coeffs[idx(a, b, c, 1)] += 0.5 * g1g2sign;
        } else {  // times (sigma_a - sigma_b)/2
            f.coeffs[idx(a, b, c, 0)] += 0.5 * g1g2sign;
            f.coeffs[idx(a, b, c, 1)] -= 0.5 * g1g2sign;
        }
    };
    add(0, 0, 0, 1, false);
    add(0, 1, 1, -1, false);
    add(1, 0, 1, 1, false);
    add(1, 1, 0, 1, false);
    add(1, 1, 1, 1, true);
    add(0, 1, 0, 1, true);
    add(0, 0, 1, 1, true);
    add(1, 0, 0, -1, true);
    return f;
}

LhvBound lhv_bound(const CorrelationFunctional& f) {
    if (f.parties > 4 || f.settings_per_party > 2)
        throw std::invalid_argument("lhv_bound: beyond the exhaustive regime (<=4 parties, <=2 settings)");
    const int bits = f.parties * f.settings_per_party;
    LhvBound best{-1.0, {}};
    for (long long mask = 0; mask < (1LL << bits); ++mask) {
        // assignment: party p, setting s -> +-1
        auto a = [&](int p, int s) { return (mask >> (p * f.settings_per_party + s)) & 1 ? -1 : 1; };
        double v = 0;
        for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx) {
            if (f.coeffs[idx] == 0) continue;
            int prod = 1;
            std::size_t rest = idx;
            for (int p = f.parties - 1; p >= 0; --p) {
                prod *= a(p, int(rest % f.settings_per_party));
                rest /= f.settings_per_party;
            }
            v += f.coeffs[idx] * prod;
        }
        if (std::abs(v) > best.value) {
            best.value = std::abs(v);
            best.strategy.assign(f.parties, std::vector<int>(f.settings_per_party));
            for (int p = 0; p < f.parties; ++p)
                for (int s = 0; s < f.settings_per_party; ++s) best.strategy[p][s] = a(p, s);
        }
    }
    return best;
}

LhvBound lhv_bound_sum_of_moduli(int parties) {
    if (parties > 4) throw std::invalid_argument("lhv_bound_sum_of_moduli: <= 4 parties");
    const int bits = parties * 2;
    LhvBound best{-1.0, {}};
    for (long long mask = 0; mask < (1LL << bits); ++mask) {
        auto a = [&](int p, int s) { return (mask >> (p * 2 + s)) & 1 ? -1 : 1; };
        // sum over sign vectors of |sum over settings of s^k E|; for a
        // deterministic model E factorizes, so each term is a product of
        // (a(p,0) + s_p a(p,1))
        double v = 0;
        for (int signs = 0; signs < (1 << parties); ++signs) {
            double term = 1;
            for (int p = 0; p < parties; ++p) {
                int sp = (signs >> p) & 1 ? -1 : 1;
                term *= a(p, 0) + sp * a(p, 1);
            }
            v += std::abs(term);
        }
        if (v > best.value) {
            best.value = v;
            best.strategy.assign(parties, std::vector<int>(2));
            for (int p = 0; p < parties; ++p)
                for (int s = 0; s < 2; ++s) best.strategy[p][s] = a(p, s);
        }
    }
    return best;
}

double functional_value(const DensityOperator& state, const CorrelationFunctional& f,
                        const std::vector<std::vector<Setting>>& party_settings) {
    if (int(party_settings.size()) != f.parties)
        throw std::invalid_argument("functional_value: settings per party mismatch");
    double v = 0;
    for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx) {
        if (f.coeffs[idx] == 0) continue;
        std::vector<Setting> chosen(f.parties);
        std::size_t rest = idx;
        for (int p = f.parties - 1; p >= 0; --p) {
            chosen[p] = party_settings[p].at(rest % f.settings_per_party);
            rest /= f.settings_per_party;
        }
        v += f.coeffs[idx] * correlation(state, chosen);
    }
    return v;
}

ArdehaliResult ardehali_test(double visibility) {
    if (visibility < 0 || visibility > 1)
        throw std::invalid_argument("ardehali_test: visibility out of [0,1]");
    VectorXcd v = VectorXcd::Zero(16);
    v(0b0110) = 1 / std::sqrt(2.0);  // |HVVH>
    v(0b1001) = 1 / std::sqrt(2.0);  // |VHHV>
    DensityOperator ghz((QubitRegister(4, std::move(v))));
    DensityOperator rho = DensityOperator::maximally_mixed(4).mixed_with(ghz, visibility);

    Setting x(1, 0, 0), y(0, 1, 0);
    const double s = 1 / std::sqrt(2.0);
    Setting sigma_a = s * (x + y), sigma_b = s * (x - y);
    std::vector<std::vector<Setting>> settings(4, {x, y});
    settings[3] = {sigma_a, sigma_b};
    double value = std::abs(functional_value(rho, ardehali_functional(), settings));
    return {value, 2.0, value > 2.0};
}

double ardehali_threshold_visibility() { return 1.0 / (2.0 * std::sqrt(2.0)); }

GhzParadoxResult ghz_paradox_check(const DensityOperator& state, double visibility) {
    if (state.num_qubits() != 3) throw std::invalid_argument("ghz_paradox_check: three qubits expected");
    DensityOperator rho = DensityOperator::maximally_mixed(3).mixed_with(state, visibility);
    Setting x(1, 0, 0), y(0, 1, 0);
    GhzParadoxResult r{};
    r.e_xyy = correlation(rho, {x, y, y});
    r.e_yxy = correlation(rho, {y, x, y});
    r.e_yyx = correlation(rho, {y, y, x});
    r.e_xxx = correlation(rho, {x, x, x});
    // a local model exists iff the Mermin combination stays within its
    // enumerated classical bound
    double mermin = std::abs(r.e_xxx - r.e_xyy - r.e_yxy - r.e_yyx);
    r.contradiction = mermin > lhv_bound(mermin3_functional()).value + 1e-12;
    return r;
}

GhzParadoxResult ghz_paradox_check(double visibility) {
    return ghz_paradox_check(DensityOperator(QubitRegister::ghz(3)), visibility);
}

LeggettResult leggett_test(double phi) {
    if (phi <= 0 || phi >= kPi) throw std::invalid_argument("leggett_test: phi in (0, pi) required");
    DensityOperator singlet((QubitRegister::bell("psi-")));
    // plane 1: x-y; plane 2: z-y, mutually orthogonal; E23 uses parallel
    // settings
    Setting a1(1, 0, 0), b1(std::cos(phi), std::sin(phi), 0);
    Setting a2(0, 0, 1), b2(std::sin(phi) * 0 + 0, std::sin(phi), std::cos(phi));
    Setting b3 = a2;
    double e11 = correlation(singlet, {a1, b1});
    double e22 = correlation(singlet, {a2, b2});
    double e23 = correlation(singlet, {a2, b3});
    LeggettResult r{};
    r.quantum = std::abs(e11 + e23) + std::abs(e22 + e23);
    r.bound = 4.0 - (4.0 / kPi) * std::abs(std::sin(phi / 2));
    r.violated = r.quantum > r.bound;
    return r;
}

double witness_eval(const MatrixXcd& w, const DensityOperator& rho) {
    if (w.rows() != rho.matrix().rows() || w.cols() != rho.matrix().cols())
        throw std::invalid_argument("witness_eval: dimension mismatch");
    if ((w - w.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTol)
        throw std::invalid_argument("witness_eval: witness must be Hermitian");
    return (w * rho.matrix()).trace().real();
}

MatrixXcd phi_plus_witness() {
    return 0.5 * MatrixXcd::Identity(4, 4) - DensityOperator(QubitRegister::bell("phi+")).matrix();
}

}  // namespace loqs
