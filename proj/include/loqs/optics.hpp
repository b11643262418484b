// Linear-optical elements as ModeMap constructors, the Hong-Ou-Mandel
// experiment, and the triangular decomposition of U(N) into two-mode
// elements.

#pragma once

#include "loqs/fock.hpp"
#include "loqs/mode.hpp"

namespace loqs {

/// Beam splitter with T = cos^2(theta/2), R = sin^2(theta/2) and the
/// symmetric i reflection phase; theta = pi/2 gives the 50:50 case
/// a -> (c + i d)/sqrt2, b -> (i c + d)/sqrt2.
ModeMap beam_splitter(const Mode& in1, const Mode& in2, const Mode& out1, const Mode& out2,
                      double theta);
ModeMap beam_splitter_5050(const Mode& in1, const Mode& in2, const Mode& out1, const Mode& out2);

/// Polarizing beam splitter in the declared basis: transmits slot 0 and
/// reflects slot 1 of that basis. Each argument is the (slot0, slot1) mode
/// pair of one port in the lab H/V frame.
ModeMap pbs(const ModePair& in_a, const ModePair& in_b, const ModePair& out_c,
            const ModePair& out_d, PolBasis basis = PolBasis::HV);

enum class WavePlateKind { Half, Quarter };

/// Jones retarder conjugated by the fast-axis rotation:
///   W = R(axis) diag(1, e^{-i delta}) R(-axis),  delta = pi (half), pi/2 (quarter).
/// HWP at 22.5 degrees maps H -> (H+V)/sqrt2; QWP at 45 degrees maps H to a
/// circular state.
ModeMap wave_plate(const ModePair& pair, WavePlateKind kind, double axis_angle);

/// The general U(2) of a Mach-Zehnder with phases alpha, beta, mixing theta
/// and overall phase gamma/2:
///   e^{i gamma/2} diag(e^{i alpha/2}, e^{-i alpha/2})
///     [[cos t2, sin t2], [-sin t2, cos t2]] diag(e^{i beta/2}, e^{-i beta/2}).
Eigen::Matrix2cd mach_zehnder_matrix(double alpha, double beta, double theta, double gamma);
ModeMap mach_zehnder(const Mode& in1, const Mode& in2, const Mode& out1, const Mode& out2,
                     double alpha, double beta, double theta, double gamma);

struct MzParams {
    double alpha, beta, theta, gamma;
};

/// Closed-form parameter extraction; mach_zehnder_matrix(params) rebuilds u.
MzParams mz_parameters(const Eigen::Matrix2cd& u);

/// One elementary element of a triangular U(N) decomposition: a two-mode
/// Mach-Zehnder on (m, n) or, when m == n, a residual phase on mode m.
struct InterferometerElement {
    int m, n;
    MzParams params;  // phase-only elements store the phase in gamma
};

/// Reck-style triangular elimination; the ordered product of the returned
/// elements (applied first-to-last) equals u.
std::vector<InterferometerElement> decompose_unitary(const MatrixXcd& u);

/// Rebuilds the N x N matrix from a decomposition (test / verification aid).
MatrixXcd compose_elements(int n, const std::vector<InterferometerElement>& elements);

/// Two photons meet at a 50:50 BS; the second one overlaps the first with
/// amplitude alpha (|alpha| <= 1). Returns the coincidence probability,
/// computed by full Fock simulation with an auxiliary distinguishing mode.
double hom_experiment(cxd alpha);

}  // namespace loqs
