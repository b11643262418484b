// Inequality machinery: quantum correlation functions, exhaustive
// local-realistic bounds, CHSH, the Mermin/WWZB family, the Ardehali
// operator, the GHZ paradox and the Leggett-type inequality.

#pragma once

#include "loqs/qubits.hpp"

namespace loqs {

using Setting = Eigen::Vector3d;  // unit vector on the Bloch/Poincare sphere

/// E = <prod_i (a_i . sigma)> for one setting per party.
double correlation(const DensityOperator& state, const std::vector<Setting>& settings);

/// Equatorial phase observable of the multi-particle interferometer; its
/// products on GHZ states give sin(sum of phases).
Setting ghz_phase_setting(double phi);

double chsh_value(const DensityOperator& state, const Setting& a1, const Setting& a2,
                  const Setting& b1, const Setting& b2);

/// The standard settings reaching 2 sqrt 2 on the singlet.
struct ChshSettings {
    Setting a1, a2, b1, b2;
};
ChshSettings chsh_optimal_settings();

/// Grid search plus local refinement of the CHSH value over all settings.
double chsh_optimum(const DensityOperator& state, double angle_tol = 1e-6);

/// Linear functional over joint measurement settings:
/// value = sum_idx coeff[idx] * E(settings idx), idx in row-major order
/// over parties (settings_per_party each).
struct CorrelationFunctional {
    int parties;
    int settings_per_party;
    std::vector<double> coeffs;  // size settings_per_party^parties
};

CorrelationFunctional chsh_functional();
CorrelationFunctional mermin3_functional();
CorrelationFunctional ardehali_functional();

struct LhvBound {
    double value;
    // the achieving deterministic strategy: per party, per setting, +-1
    std::vector<std::vector<int>> strategy;
};

/// Exhaustive maximization of |functional| over deterministic local models;
/// parties <= 4 and settings <= 2 keep the enumeration exact and fast.
LhvBound lhv_bound(const CorrelationFunctional& f);

/// Sum-of-moduli bound of the full two-setting correlation family
/// (the necessary-and-sufficient single inequality); classical value 2^N.
LhvBound lhv_bound_sum_of_moduli(int parties);

/// Quantum value of a functional at explicit settings.
double functional_value(const DensityOperator& state, const CorrelationFunctional& f,
                        const std::vector<std::vector<Setting>>& party_settings);

struct ArdehaliResult {
    double quantum_value;
    double classical_bound;  // 2
    bool violated;
};

/// <A> on V |Psi><Psi| + (1-V) I/16 with Psi = (|HVVH> + |VHHV>)/sqrt2 and
/// the stated x/y and rotated-45 settings; 4 sqrt 2 at V = 1.
ArdehaliResult ardehali_test(double visibility);

double ardehali_threshold_visibility();  // 1/(2 sqrt 2)

struct GhzParadoxResult {
    double e_xyy, e_yxy, e_yyx, e_xxx;
    bool contradiction;  // no local model reproduces the four expectations
};

/// The four product expectations of the GHZ argument on
/// V rho + (1-V) I/8; the contradiction flag is decided through the
/// enumerated local-realistic bound of the Mermin functional.
GhzParadoxResult ghz_paradox_check(const DensityOperator& state, double visibility);
GhzParadoxResult ghz_paradox_check(double visibility);  // ideal GHZ3 input

struct LeggettResult {
    double quantum;  // |2 (cos phi + 1)| from singlet correlations
    double bound;    // 4 - (4/pi) |sin(phi/2)|
    bool violated;
};

/// phi in (0, pi): settings with relative angle phi in two mutually
/// orthogonal planes, evaluated on the singlet.
LeggettResult leggett_test(double phi);

double witness_eval(const MatrixXcd& w, const DensityOperator& rho);

/// 1/2 I - |phi+><phi+|, the canonical two-qubit witness.
MatrixXcd phi_plus_witness();

}  // namespace loqs
