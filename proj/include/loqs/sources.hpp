// Entangled-photon sources, detector models, coincidence counting and the
// closed-form visibility calculators for pulsed multi-photon experiments.

#pragma once

#include <map>
#include <random>

#include "loqs/fock.hpp"
#include "loqs/qubits.hpp"

namespace loqs {

enum class BellKind { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

QubitRegister bell_register(BellKind k);

/// Down-conversion pair source: emits the thermal-like ladder
/// sum_m z^m (pair term)^m / m! on two polarization mode pairs.
struct PairSource {
    BellKind bell = BellKind::PsiMinus;
    cxd z = 0.1;
    ModePair out_a;  // (H, V) modes of arm a
    ModePair out_b;
};

/// Truncated at `order` pairs; normalized. The m = 1 component is exactly
/// the chosen Bell state.
FockState emit_bell_pair(const PairSource& source, int order, int nmax = kDefaultNmax);

struct DetectorModel {
    double efficiency = 1.0;
    bool number_resolving = false;
};

/// GHZ construction from two phi+ pairs combined on a PBS; the returned
/// pattern post-selects the n-photon GHZ.
struct GhzSource {
    FockState state;
    Pattern pattern;       // post-selection yielding the GHZ
    QubitEncoding encoding;  // dual-rail encoding of the surviving photons
    double probability;    // selection probability of `pattern`
};

/// n = 4: one photon per output. n = 3: additionally triggers on a single
/// +45 (or -45) photon in the sacrificed arm; the minus trigger yields the
/// minus-sign GHZ.
GhzSource build_ghz_source(int n, bool trigger_minus = false);

/// (1/cosh^2 tau) sum_n sqrt(n+1) tanh^n tau |psi_n^-> truncated at `order`
/// pairs, on modes aH,aV,bH,bV.
FockState twin_beam_state(double tau, int order);
double twin_beam_mean_pairs(const FockState& state);

/// (|N,0> + |0,N>)/sqrt2 on modes a,b.
FockState noon_state(int n, const Mode& a, const Mode& b, int nmax = kDefaultNmax);
/// Probability of projecting the phase-shifted NOON state onto
/// (|N,0> + |0,N>)/sqrt2: (1 + cos(N phi))/2, the de Broglie fringe.
double noon_fringe(int n, double phi);

/// |psi->_pol x |psi-(0)>_path over modes {u,d} x {H,V} x {A,B}.
FockState hyper_entangled_state();
/// Same state as a 4-qubit register ordered (polA, pathA, polB, pathB).
QubitRegister hyper_entangled_qubits();

// --- coincidence counting -------------------------------------------------

struct CoincidenceSpec {
    std::vector<Mode> detector_modes;
    std::vector<DetectorModel> detectors;  // one per mode (empty = ideal)
};

struct CoincidenceResult {
    // response vector per detector (photon count if number resolving,
    // else 0/1) -> exact probability
    std::map<std::vector<int>, double> probabilities;
    // filled in sampling mode
    std::map<std::vector<int>, long long> counts;
    long long trials = 0;
};

/// trials = 0 requests exact Born probabilities; trials >= 1 draws a
/// multinomial sample reproducible from the seed.
CoincidenceResult coincidence_count(const FockState& state, const CoincidenceSpec& spec,
                                    long long trials = 0, std::uint64_t seed = 0);

/// Probability that every listed detector fires (>= 1 detected photon),
/// irrespective of other modes.
double probability_all_fire(const FockState& state, const std::vector<Mode>& detector_modes,
                            double efficiency = 1.0);

// --- canonical interferometers --------------------------------------------

/// Two-photon interferometer of the path-entangled state
/// (|a>|a'> + |b>|b'>)/sqrt2: phases alpha on a, beta on b'; 50:50 BS per
/// side. Detector modes are named 1c,1d,2c,2d.
FockState epr_interferometer(double alpha, double beta);

/// Three-photon generalization with phases on the second paths; detector
/// modes d1,d2,e1,e2,f1,f2.
FockState ghz_interferometer(double phi_a, double phi_b, double phi_c);

// --- closed-form visibilities ----------------------------------------------

struct FilterSpec {
    double sigma_p;  // pump spectral width
    double sigma_F;  // filters on the beams seeing both sources
    double sigma_f;  // filters on the source-tagged beams
};

/// V(4) of the four-photon interference with Gaussian filters.
double visibility_v4(const FilterSpec& f);

/// Four-photon fringe visibility of the two-source interferometer with
/// multi-pair emission up to two pairs per source.
double multipair_visibility(cxd z);

}  // namespace loqs
