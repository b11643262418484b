#include "loqs/optics.hpp"

#include <cmath>

namespace loqs {

namespace {

const double kPi = 3.14159265358979323846;

void require_distinct(std::vector<Mode> ms) {
    std::sort(ms.begin(), ms.end());
    if (std::adjacent_find(ms.begin(), ms.end()) != ms.end())
        throw std::invalid_argument("optics: coincident modes");
}

Eigen::Matrix2cd rotation2(double angle) {
    Eigen::Matrix2cd r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

}  // namespace

ModeMap beam_splitter(const Mode& in1, const Mode& in2, const Mode& out1, const Mode& out2,
                      double theta) {
    if (theta < -kAlgebraTol || theta > kPi + kAlgebraTol)
        throw std::invalid_argument("beam_splitter: theta out of [0, pi]");
    const bool in_place = (in1 == out1 && in2 == out2);
    if (!in_place) require_distinct({in1, in2, out1, out2});
    else require_distinct({in1, in2});
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Eigen::Matrix2cd u;
    u << c, cxd(0, s), cxd(0, s), c;
    if (in_place) return ModeMap({in1, in2}, u);
    // route inputs to distinct output modes: extend to a 4-mode unitary that
    // also swaps the (empty) output slots back onto the inputs
    MatrixXcd big = MatrixXcd::Zero(4, 4);
    big.block(0, 2, 2, 2) = u;
    big.block(2, 0, 2, 2) = Eigen::Matrix2cd::Identity();
    return ModeMap({in1, in2, out1, out2}, big);
}

ModeMap beam_splitter_5050(const Mode& in1, const Mode& in2, const Mode& out1, const Mode& out2) {
    return beam_splitter(in1, in2, out1, out2, kPi / 2);
}

ModeMap pbs(const ModePair& in_a, const ModePair& in_b, const ModePair& out_c,
            const ModePair& out_d, PolBasis basis) {
    // in the declared basis: a0 -> c0, a1 -> d1, b0 -> d0, b1 -> c1
    std::vector<Mode> modes = {in_a.first, in_a.second, in_b.first, in_b.second,
                               out_c.first, out_c.second, out_d.first, out_d.second};
    const bool in_place = (in_a == out_c && in_b == out_d);
    if (in_place) {
        modes = {in_a.first, in_a.second, in_b.first, in_b.second};
        require_distinct(modes);
    } else {
        require_distinct(modes);
    }

    MatrixXcd route = MatrixXcd::Zero(4, 4);  // (a0,a1,b0,b1) -> (c0,c1,d0,d1)
    route(0, 0) = 1;  // a0 -> c0
    route(1, 3) = 1;  // a1 -> d1
    route(2, 2) = 1;  // b0 -> d0
    route(3, 1) = 1;  // b1 -> c1

    // conjugate by the basis change on every port: with B holding the basis
    // kets in the lab frame, lab-frame creation operators decompose as
    // a+_lab_j = sum_k conj(B_jk) a+_basis_k, so the lab substitution matrix
    // is conj(B) * route * B^T blockwise over the two ports
    Eigen::Matrix2cd b = polarization_basis(basis);
    MatrixXcd bb = MatrixXcd::Zero(4, 4);
    bb.block(0, 0, 2, 2) = b;
    bb.block(2, 2, 2, 2) = b;
    MatrixXcd u4 = bb.conjugate() * route * bb.transpose();

    if (in_place) return ModeMap(modes, u4);
    MatrixXcd big = MatrixXcd::Zero(8, 8);
    big.block(0, 4, 4, 4) = u4;
    big.block(4, 0, 4, 4) = MatrixXcd::Identity(4, 4);
    return ModeMap(modes, big);
}

ModeMap wave_plate(const ModePair& pair, WavePlateKind kind, double axis_angle) {
    const double delta = (kind == WavePlateKind::Half) ? kPi : kPi / 2;
    Eigen::Matrix2cd ret = Eigen::Matrix2cd::Identity();
    ret(1, 1) = std::exp(cxd(0, -delta));
    Eigen::Matrix2cd jones = rotation2(axis_angle) * ret * rotation2(-axis_angle);
    // substitution matrix for creation operators is the transpose of the
    // Jones matrix acting on ket coefficients
    return ModeMap({pair.first, pair.second}, jones.transpose());
}

Eigen::Matrix2cd mach_zehnder_matrix(double alpha, double beta, double theta, double gamma) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Eigen::Matrix2cd pa = Eigen::Matrix2cd::Zero(), pb = Eigen::Matrix2cd::Zero(), mix;
    pa(0, 0) = std::exp(cxd(0, alpha / 2));
    pa(1, 1) = std::exp(cxd(0, -alpha / 2));
    pb(0, 0) = std::exp(cxd(0, beta / 2));
    pb(1, 1) = std::exp(cxd(0, -beta / 2));
    mix << c, s, -s, c;
    return std::exp(cxd(0, gamma / 2)) * pa * mix * pb;
}

ModeMap mach_zehnder(const Mode& in1, const Mode& in2, const Mode& out1, const Mode& out2,
                     double alpha, double beta, double theta, double gamma) {
    Eigen::Matrix2cd u = mach_zehnder_matrix(alpha, beta, theta, gamma).transpose();
    const bool in_place = (in1 == out1 && in2 == out2);
    if (in_place) return ModeMap({in1, in2}, u);
    MatrixXcd big = MatrixXcd::Zero(4, 4);
    big.block(0, 2, 2, 2) = u;
    big.block(2, 0, 2, 2) = Eigen::Matrix2cd::Identity();
    return ModeMap({in1, in2, out1, out2}, big);
}

MzParams mz_parameters(const Eigen::Matrix2cd& u) {
    MatrixXcd err = u.adjoint() * u - Eigen::Matrix2cd::Identity();
    if (err.cwiseAbs().maxCoeff() > kAlgebraTol)
        throw std::invalid_argument("mz_parameters: input is not unitary");
    double gamma = std::arg(u.determinant());
    double c = std::abs(u(0, 0)), s = std::abs(u(0, 1));
    double theta = 2.0 * std::atan2(s, c);
    double a_plus_b, a_minus_b;
    if (c > 1e-12 && s > 1e-12) {
        a_plus_b = 2.0 * (std::arg(u(0, 0)) - gamma / 2);
        a_minus_b = 2.0 * (std::arg(u(0, 1)) - gamma / 2);
    } else if (c > 1e-12) {
        a_plus_b = 2.0 * (std::arg(u(0, 0)) - gamma / 2);
        a_minus_b = 0.0;
    } else {
        a_plus_b = 0.0;
        a_minus_b = 2.0 * (std::arg(u(0, 1)) - gamma / 2);
    }
    return {(a_plus_b + a_minus_b) / 2, (a_plus_b - a_minus_b) / 2, theta, gamma};
}

std::vector<InterferometerElement> decompose_unitary(const MatrixXcd& u) {
    const Eigen::Index n = u.rows();
    if (u.cols() != n) throw std::invalid_argument("decompose_unitary: matrix not square");
    if (n > 16) throw std::invalid_argument("decompose_unitary: N > 16 unsupported");
    MatrixXcd err = u.adjoint() * u - MatrixXcd::Identity(n, n);
    if (err.cwiseAbs().maxCoeff() > kAlgebraTol)
        throw std::invalid_argument("decompose_unitary: input is not unitary");

    // Lower-triangular elimination: find T_k two-mode rotations with
    // (prod T_k) * D = u, recorded so that applying elements in order
    // rebuilds u. Work on a copy, zeroing below-diagonal entries of
    // column j using rows (i-1, i).
    MatrixXcd w = u;
    std::vector<InterferometerElement> ops;
    for (Eigen::Index j = 0; j < n - 1; ++j) {
        for (Eigen::Index i = n - 1; i > j; --i) {
            if (std::abs(w(i, j)) < 1e-14) continue;
            // choose a 2x2 unitary acting on rows (i-1, i) that nulls w(i, j)
            cxd a = w(i - 1, j), b = w(i, j);
            double r = std::hypot(std::abs(a), std::abs(b));
            Eigen::Matrix2cd t;
            t << std::conj(a) / r, std::conj(b) / r, -b / r, a / r;
            w.block(i - 1, 0, 2, n) = t * w.block(i - 1, 0, 2, n);
            // record the inverse as a physical element
            Eigen::Matrix2cd inv = t.adjoint();
            ops.push_back({int(i - 1), int(i), mz_parameters(inv)});
        }
    }
    // w is now diagonal: D = t_K ... t_1 u, hence u = t_1^+ ... t_K^+ D.
    // The recorded ops are already the t_k^+ in elimination order; the
    // residual phases D close the product.
    std::vector<InterferometerElement> out = std::move(ops);
    for (Eigen::Index m = 0; m < n; ++m) {
        double phase = std::arg(w(m, m));
        if (std::abs(phase) > 1e-14) out.push_back({int(m), int(m), {0, 0, 0, 2 * phase}});
    }
    return out;
}

MatrixXcd compose_elements(int n, const std::vector<InterferometerElement>& elements) {
    MatrixXcd acc = MatrixXcd::Identity(n, n);
    for (const auto& e : elements) {
        MatrixXcd t = MatrixXcd::Identity(n, n);
        if (e.m == e.n) {
            t(e.m, e.m) = std::exp(cxd(0, e.params.gamma / 2));
        } else {
            Eigen::Matrix2cd u = mach_zehnder_matrix(e.params.alpha, e.params.beta, e.params.theta,
                                                     e.params.gamma);
            t(e.m, e.m) = u(0, 0);
            t(e.m, e.n) = u(0, 1);
            t(e.n, e.m) = u(1, 0);
            t(e.n, e.n) = u(1, 1);
        }
        acc = acc * t;
    }
    return acc;
}

double hom_experiment(cxd alpha) {
    if (std::abs(alpha) > 1.0 + 1e-12) throw std::invalid_argument("hom_experiment: |alpha| > 1");
    double beta = std::sqrt(std::max(0.0, 1.0 - std::norm(alpha)));

    // ports 1,2 each with a principal and an auxiliary internal mode
    Mode p1m{"1", 0}, p1x{"1", 1}, p2m{"2", 0}, p2x{"2", 1};
    ModeRegistry reg({p1m, p1x, p2m, p2x});
    FockState in = FockState::vacuum(reg, 4).create(p1m);
    // second photon: b+ = alpha a+_2,main + beta a+_2,aux
    FockState second_main = in.create(p2m).scaled(alpha);
    FockState second_aux = in.create(p2x).scaled(beta);
    FockState state = (second_main + second_aux).normalized();

    // the BS mixes ports identically for both internal labels
    auto bs_main = beam_splitter_5050(p1m, p2m, p1m, p2m);
    auto bs_aux = beam_splitter_5050(p1x, p2x, p1x, p2x);
    state = apply_mode_map(apply_mode_map(state, bs_main), bs_aux);

    Pattern coincidence = Pattern::one_photon_per_group({{p1m, p1x}, {p2m, p2x}});
    return postselect(state, coincidence).probability;
}

}  // namespace loqs
