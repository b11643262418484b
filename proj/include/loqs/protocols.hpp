// Communication protocols: linear-optical Bell and GHZ analyzers, dense
// coding, the teleportation family, entanglement swapping, purification,
// concentration, the nondestructive CNOT and the event-ready entangler.

#pragma once

#include <array>
#include <optional>

#include "loqs/qubits.hpp"
#include "loqs/sources.hpp"

namespace loqs {

enum class BellOutcomeKind { PsiPlus, PsiMinus, PhiPlus, PhiMinus, Inconclusive };

std::string to_string(BellOutcomeKind k);

struct BellOutcome {
    BellOutcomeKind which;
    double probability;
};

/// Single-qubit Pauli correction per qubit, returned as data; apply with
/// apply_correction.
struct PauliCorrection {
    std::vector<char> ops;  // 'i', 'x', 'y', 'z'
};

QubitRegister apply_correction(const QubitRegister& state, const PauliCorrection& c);

// --- analyzers -------------------------------------------------------------

/// PBS + 22.5deg HWPs + four detectors on a two-photon polarization input
/// occupying input ports A and B. Identifies phi+ and phi-; psi+- are
/// inconclusive (no coincidence between the two output arms).
std::vector<BellOutcome> linear_bell_analysis(const FockState& state, const ModePair& in_a,
                                              const ModePair& in_b);

/// Convenience: analysis outcome distribution for a two-qubit polarization
/// state placed on fresh analyzer ports.
std::vector<BellOutcome> linear_bell_analysis(const QubitRegister& two_qubits);

enum class GhzOutcomeKind { PhiPlus, PhiMinus, Inconclusive };

struct GhzOutcome {
    GhzOutcomeKind which;
    double probability;
};

/// Two cascaded PBSs + HWPs + six detectors on a three-photon input; only
/// Phi0+- produce threefold coincidences, distinguished by the parity of
/// the number of H detections.
std::vector<GhzOutcome> ghz_analysis(const QubitRegister& three_qubits);

// --- dense coding ----------------------------------------------------------

enum class AnalyzerGrade { Full, TwoState };

struct DenseCodingResult {
    // decoded symbol distribution for the requested message
    std::map<std::string, double> decoded;
    double capacity_bits;  // channel capacity of the analyzer grade
};

/// message in {0,1,2,3} encodes two bits; the agreed dictionary maps
/// psi- = 00, phi- = 01, phi+ = 10, psi+ = 11 and Bob applies z, y, x, id
/// respectively to his half of a shared psi+.
DenseCodingResult dense_coding(int message, AnalyzerGrade grade);

// --- teleportation family ----------------------------------------------------

struct TeleportBranch {
    BellOutcomeKind outcome;
    double probability;
    QubitRegister conditional;     // Bob's state before correction
    PauliCorrection correction;    // undoes the branch
    double fidelity_corrected;     // with the input state
};

struct TeleportResult {
    std::vector<TeleportBranch> branches;
    double success_probability;  // 1 for full BSM, 1/4 conclusive-only
    double mean_fidelity;        // over realized (conclusive) branches
    double classical_limit = 2.0 / 3.0;
};

/// bsm_full = false keeps only the conclusive psi- branch of the linear
/// analyzer.
TeleportResult teleport(const QubitRegister& input, BellKind resource, bool bsm_full = true);

struct RomeBranch {
    std::string outcome;  // "psi+", "psi-", "phi+", "phi-" of the path x pol basis
    double probability;
    QubitRegister bob_state;     // path qubit of photon 2 before correction
    PauliCorrection correction;  // on the path qubit
    double fidelity_corrected;
};

/// Two-particle scheme: the prepared polarization chi rides on photon 1 of
/// a path-entangled pair; the single-particle Bell measurement is complete.
std::vector<RomeBranch> teleport_rome(const QubitRegister& chi);

struct OpenDestinationResult {
    QubitRegister encoded;  // alpha|HHH> + beta|VVV> on photons 3,4,5 (corrected)
    // fidelity at the chosen receiver after measuring the other two at 45deg,
    // exhaustive over measurement branches
    double fidelity;
};

/// receiver in {0,1,2} selects which of the three encoded photons is read out.
OpenDestinationResult teleport_open_destination(const QubitRegister& chi, int receiver);

struct TwoQubitTeleportResult {
    QubitRegister output;
    double fidelity_direct;    // <chi|rho|chi>
    double fidelity_by_pauli;  // via the 1/4(I - xx - yy - zz) identity (psi- target)
    double estimation_limit = 0.40;
};

TwoQubitTeleportResult teleport_two_qubit(const QubitRegister& chi2);

// --- swapping ----------------------------------------------------------------

struct SwapBranch {
    BellOutcomeKind outcome;
    double probability;
    QubitRegister pair14;
};

struct SwapResult {
    std::vector<SwapBranch> branches;
    DensityOperator unconditioned_14;  // before learning the BSM outcome
};

SwapResult entanglement_swap();

/// Degraded fringe visibility with multi-pair contamination (delegates to
/// the sources module).
double swap_visibility(cxd z);

// --- purification and concentration ------------------------------------------

struct PurifyResult {
    double fidelity_out;
    double success_probability;
};

/// Density-matrix BBPSSW round on two Werner pairs of fidelity f
/// (twirl, bilateral y-rotation, bilateral CNOT, target measurement).
PurifyResult purify_bbpssw(double f);

/// Closed-form map of the BBPSSW round, for cross-checking.
double bbpssw_formula(double f);

/// Linear-optical purification of rho = F phi+ + (1-F) psi- via two PBSs,
/// four-mode selection and +-45 readout with conditional phase flip.
PurifyResult purify_linear_optical(double f);

/// Same protocol executed at the Fock level (deep cross-check).
PurifyResult purify_linear_optical_fock(double f);

/// Probability that the cross combination phi+ x psi- produces a four-mode
/// event (zero ideally).
double purify_cross_term_probability(double f);

struct ConcentrationResult {
    double success_probability;
    QubitRegister output;
    double fidelity;  // with the Bell target
};

/// Procrustean filtering of alpha|HV> + beta|VH> with known coefficients.
ConcentrationResult concentrate_procrustean(cxd alpha, cxd beta);

/// The exact 12-rotation bilateral twirl to the Werner form (exposed for
/// tests; preserves the psi- fidelity).
DensityOperator werner_twirl(const DensityOperator& rho2);
DensityOperator werner_state(double f);

// --- gates and entanglers -----------------------------------------------------

struct CnotBranch {
    std::string herald;          // e.g. "V'H" for modes 3' and 4'
    double probability;          // 1/16 each, 1/4 total
    QubitRegister output;        // control/target after heralding
    PauliCorrection correction;  // on the target qubit
};

struct CnotResult {
    std::vector<CnotBranch> branches;
    double success_probability;  // four-mode cases, 1/4
};

/// Nondestructive parity-check CNOT on an arbitrary two-qubit state using
/// an ancilla psi- pair, simulated at the Fock level.
CnotResult cnot_nondestructive(const QubitRegister& control_target);

struct EntanglerBranch {
    BellOutcomeKind herald;      // Bell analysis outcome on (A,B)
    double probability;
    QubitRegister pair_ab;       // state of (a,b) before correction
    PauliCorrection correction;  // broadcast correction to reach psi-
};

struct EntanglerResult {
    std::vector<EntanglerBranch> branches;  // the four-mode cases
    double four_mode_probability;           // 1/4
    double success_probability;             // 1/4 x 1/2 = 1/8
};

/// Event-ready entangler from four single photons |V'>|V>|H'>|H> and two
/// parity checks in complementary bases.
EntanglerResult event_ready_entangler();

// --- time-bin ------------------------------------------------------------------

struct FransonResult {
    double visibility;                      // 2|alpha beta|
    std::vector<double> fringe;             // normalized coincidence vs phi
    std::vector<double> phis;
};

FransonResult franson_timebin(cxd alpha, cxd beta, int points = 24);

}  // namespace loqs
