#include "loqs/qubits.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>

namespace loqs {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

QubitRegister::QubitRegister(int n) : n_(n), amp_(VectorXcd::Zero(1LL << n)) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("QubitRegister: qubit count out of range");
    amp_(0) = 1.0;
}

QubitRegister::QubitRegister(int n, VectorXcd amplitudes, bool renormalize)
    : n_(n), amp_(std::move(amplitudes)) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("QubitRegister: qubit count out of range");
    if (amp_.size() != (1LL << n)) throw std::invalid_argument("QubitRegister: amplitude length != 2^n");
    double nm = amp_.norm();
    if (renormalize) {
        if (nm < kPruneTol) throw std::invalid_argument("QubitRegister: zero vector");
        amp_ /= nm;
    } else if (std::abs(nm - 1.0) > kAlgebraTol) {
        throw std::invalid_argument("QubitRegister: state is not normalized");
    }
}

QubitRegister QubitRegister::basis(int n, std::size_t index) {
    VectorXcd v = VectorXcd::Zero(1LL << n);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return QubitRegister(n, std::move(v));
}

QubitRegister QubitRegister::ghz(int n) {
    VectorXcd v = VectorXcd::Zero(1LL << n);
    v(0) = kInvSqrt2;
    v((1LL << n) - 1) = kInvSqrt2;
    return QubitRegister(n, std::move(v));
}

QubitRegister QubitRegister::bell(const std::string& which) {
    VectorXcd v = VectorXcd::Zero(4);
    if (which == "psi+") { v(1) = kInvSqrt2; v(2) = kInvSqrt2; }
    else if (which == "psi-") { v(1) = kInvSqrt2; v(2) = -kInvSqrt2; }
    else if (which == "phi+") { v(0) = kInvSqrt2; v(3) = kInvSqrt2; }
    else if (which == "phi-") { v(0) = kInvSqrt2; v(3) = -kInvSqrt2; }
    else throw std::invalid_argument("bell: expected one of psi+ psi- phi+ phi-");
    return QubitRegister(2, std::move(v));
}

QubitRegister QubitRegister::plus(int n) {
    VectorXcd v = VectorXcd::Constant(1LL << n, std::pow(0.5, n * 0.5));
    return QubitRegister(n, std::move(v));
}

QubitRegister QubitRegister::tensor(const QubitRegister& other) const {
    VectorXcd v(amp_.size() * other.amp_.size());
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
        v.segment(i * other.amp_.size(), other.amp_.size()) = amp_(i) * other.amp_;
    return QubitRegister(n_ + other.n_, std::move(v));
}

QubitRegister QubitRegister::apply1(const Eigen::Matrix2cd& u, int qubit) const {
    if (qubit < 0 || qubit >= n_) throw std::invalid_argument("apply1: qubit index out of range");
    VectorXcd v = VectorXcd::Zero(amp_.size());
    const long long bit = 1LL << (n_ - 1 - qubit);
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        int b = (i & bit) ? 1 : 0;
        Eigen::Index i0 = i & ~bit;
        v(i0) += u(0, b) * amp_(i);
        v(i0 | bit) += u(1, b) * amp_(i);
    }
    QubitRegister out;
    out.n_ = n_;
    out.amp_ = std::move(v);
    return out;
}

QubitRegister QubitRegister::apply2(const Eigen::Matrix4cd& u, int qa, int qb) const {
    if (qa == qb || qa < 0 || qb < 0 || qa >= n_ || qb >= n_)
        throw std::invalid_argument("apply2: bad qubit indices");
    VectorXcd v = VectorXcd::Zero(amp_.size());
    const long long ba = 1LL << (n_ - 1 - qa), bb = 1LL << (n_ - 1 - qb);
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        int ia = (i & ba) ? 1 : 0, ib = (i & bb) ? 1 : 0;
        int col = ia * 2 + ib;
        Eigen::Index base = i & ~ba & ~bb;
        for (int row = 0; row < 4; ++row) {
            Eigen::Index j = base | ((row >> 1) ? ba : 0) | ((row & 1) ? bb : 0);
            v(j) += u(row, col) * amp_(i);
        }
    }
    QubitRegister out;
    out.n_ = n_;
    out.amp_ = std::move(v);
    return out;
}

QubitRegister QubitRegister::normalized() const {
    QubitRegister out;
    out.n_ = n_;
    out.amp_ = amp_ / amp_.norm();
    return out;
}

cxd QubitRegister::inner(const QubitRegister& other) const {
    if (n_ != other.n_) throw std::invalid_argument("inner: dimension mismatch");
    return amp_.dot(other.amp_);
}

bool QubitRegister::equals_up_to_phase(const QubitRegister& other, double tol) const {
    return std::abs(std::abs(inner(other)) - 1.0) < tol;
}

std::pair<double, QubitRegister> QubitRegister::measure(int qubit, const Eigen::Matrix2cd& basis,
                                                        int outcome) const {
    // project onto basis column `outcome`
    Eigen::Vector2cd ket = basis.col(outcome);
    Eigen::Matrix2cd proj = ket * ket.adjoint();
    QubitRegister projected = apply1(proj, qubit);
    double p = projected.amp_.squaredNorm();
    if (p < kPruneTol) return {0.0, QubitRegister(std::max(n_, 1))};
    QubitRegister out;
    out.n_ = n_;
    out.amp_ = projected.amp_ / std::sqrt(p);
    return {p, out};
}

DensityOperator::DensityOperator(const QubitRegister& pure)
    : n_(pure.num_qubits()), rho_(pure.amplitudes() * pure.amplitudes().adjoint()) {}

DensityOperator::DensityOperator(int n, MatrixXcd rho, bool validate) : n_(n), rho_(std::move(rho)) {
    const Eigen::Index d = 1LL << n;
    if (rho_.rows() != d || rho_.cols() != d)
        throw std::invalid_argument("DensityOperator: matrix size != 2^n");
    if (validate) {
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTol)
            throw std::invalid_argument("DensityOperator: not Hermitian");
        if (std::abs(rho_.trace().real() - 1.0) > kAlgebraTol || std::abs(rho_.trace().imag()) > kAlgebraTol)
            throw std::invalid_argument("DensityOperator: trace != 1");
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9)
            throw std::invalid_argument("DensityOperator: negative eigenvalue");
    }
}

DensityOperator DensityOperator::maximally_mixed(int n) {
    const Eigen::Index d = 1LL << n;
    return DensityOperator(n, MatrixXcd::Identity(d, d) / double(d), false);
}

DensityOperator DensityOperator::tensor(const DensityOperator& other) const {
    const Eigen::Index da = rho_.rows(), db = other.rho_.rows();
    MatrixXcd out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = rho_(i, j) * other.rho_;
    return DensityOperator(n_ + other.n_, std::move(out), false);
}

DensityOperator DensityOperator::apply1(const Eigen::Matrix2cd& u, int qubit) const {
    std::vector<Eigen::Matrix2cd> f(n_, pauli_i());
    f[qubit] = u;
    return apply(kron_all(f));
}

DensityOperator DensityOperator::apply2(const Eigen::Matrix4cd& u, int qa, int qb) const {
    // build the full operator by routing basis states through apply2 on a register
    const Eigen::Index d = rho_.rows();
    MatrixXcd full(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        VectorXcd e = VectorXcd::Zero(d);
        e(c) = 1.0;
        QubitRegister col(n_, std::move(e));
        full.col(c) = col.apply2(u, qa, qb).amplitudes();
    }
    return apply(full);
}

DensityOperator DensityOperator::apply(const MatrixXcd& u) const {
    return DensityOperator(n_, u * rho_ * u.adjoint(), false);
}

DensityOperator DensityOperator::mixed_with(const DensityOperator& other, double w_other) const {
    return DensityOperator(n_, rho_ * (1.0 - w_other) + other.rho_ * w_other, false);
}

double DensityOperator::expectation(const MatrixXcd& hermitian) const {
    return (hermitian * rho_).trace().real();
}

Eigen::Matrix2cd pauli_x() { Eigen::Matrix2cd m; m << 0, 1, 1, 0; return m; }
Eigen::Matrix2cd pauli_y() { Eigen::Matrix2cd m; m << 0, cxd(0, -1), cxd(0, 1), 0; return m; }
Eigen::Matrix2cd pauli_z() { Eigen::Matrix2cd m; m << 1, 0, 0, -1; return m; }
Eigen::Matrix2cd pauli_i() { return Eigen::Matrix2cd::Identity(); }

Eigen::Matrix2cd pauli(char which) {
    switch (which) {
        case 'i': case 'I': return pauli_i();
        case 'x': case 'X': return pauli_x();
        case 'y': case 'Y': return pauli_y();
        case 'z': case 'Z': return pauli_z();
    }
    throw std::invalid_argument("pauli: unknown label");
}

Eigen::Matrix2cd hadamard() {
    Eigen::Matrix2cd m;
    m << 1, 1, 1, -1;
    return m * kInvSqrt2;
}

Eigen::Matrix2cd bloch_observable(const Eigen::Vector3d& a) {
    return a.x() * pauli_x() + a.y() * pauli_y() + a.z() * pauli_z();
}

Eigen::Matrix4cd cnot_gate() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

Eigen::Matrix4cd cz_gate() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(3, 3) = -1;
    return m;
}

MatrixXcd kron_all(const std::vector<Eigen::Matrix2cd>& factors) {
    // factors[0] acts on qubit 0, the most significant index
    MatrixXcd out = MatrixXcd::Ones(1, 1);
    for (const auto& f : factors) {
        MatrixXcd next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
        out = std::move(next);
    }
    return out;
}

std::vector<SchmidtTerm> schmidt_decompose(const QubitRegister& state,
                                           const std::vector<int>& left_qubits) {
    const int n = state.num_qubits();
    std::vector<bool> is_left(n, false);
    for (int q : left_qubits) {
        if (q < 0 || q >= n) throw std::invalid_argument("schmidt_decompose: qubit out of range");
        is_left[q] = true;
    }
    std::vector<int> left, right;
    for (int q = 0; q < n; ++q) (is_left[q] ? left : right).push_back(q);
    if (left.empty() || right.empty())
        throw std::invalid_argument("schmidt_decompose: bipartition must be proper");

    const Eigen::Index dl = 1LL << left.size(), dr = 1LL << right.size();
    MatrixXcd m(dl, dr);
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        Eigen::Index li = 0, ri = 0;
        for (std::size_t k = 0; k < left.size(); ++k)
            li |= ((i >> (n - 1 - left[k])) & 1) << (left.size() - 1 - k);
        for (std::size_t k = 0; k < right.size(); ++k)
            ri |= ((i >> (n - 1 - right[k])) & 1) << (right.size() - 1 - k);
        m(li, ri) = state.amplitude(i);
    }
    Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    std::vector<SchmidtTerm> terms;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        double r = svd.singularValues()(k);
        if (r < 1e-12) continue;
        terms.push_back({r, svd.matrixU().col(k), svd.matrixV().col(k).conjugate()});
    }
    return terms;  // Jacobi SVD returns singular values sorted descending
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
    const int n = rho.num_qubits();
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    std::vector<bool> kept(n, false);
    for (int q : keep) {
        if (q < 0 || q >= n) throw std::invalid_argument("partial_trace: qubit out of range");
        kept[q] = true;
    }
    std::vector<int> kq, tq;
    for (int q = 0; q < n; ++q) (kept[q] ? kq : tq).push_back(q);

    const Eigen::Index dk = 1LL << kq.size(), dt = 1LL << tq.size();
    auto compose = [&](Eigen::Index k, Eigen::Index t) {
        Eigen::Index full = 0;
        for (std::size_t i = 0; i < kq.size(); ++i)
            full |= ((k >> (kq.size() - 1 - i)) & 1) << (n - 1 - kq[i]);
        for (std::size_t i = 0; i < tq.size(); ++i)
            full |= ((t >> (tq.size() - 1 - i)) & 1) << (n - 1 - tq[i]);
        return full;
    };
    MatrixXcd out = MatrixXcd::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b < dk; ++b)
            for (Eigen::Index t = 0; t < dt; ++t)
                out(a, b) += rho.matrix()(compose(a, t), compose(b, t));
    return DensityOperator(int(kq.size()), std::move(out), false);
}

double fidelity(const DensityOperator& rho, const QubitRegister& target) {
    if (rho.num_qubits() != target.num_qubits())
        throw std::invalid_argument("fidelity: dimension mismatch");
    return (target.amplitudes().adjoint() * rho.matrix() * target.amplitudes())(0).real();
}

QubitRegister fock_to_qubits(const FockState& state, const QubitEncoding& enc) {
    const int n = int(enc.pairs.size());
    const auto& reg = state.registry();
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    for (const auto& [m0, m1] : enc.pairs) idx.emplace_back(reg.index_of(m0), reg.index_of(m1));

    VectorXcd v = VectorXcd::Zero(1LL << n);
    for (const auto& [occ, amp] : state.terms()) {
        Eigen::Index code = 0;
        for (int q = 0; q < n; ++q) {
            int n0 = occ[idx[q].first], n1 = occ[idx[q].second];
            if (n0 + n1 != 1)
                throw std::invalid_argument("fock_to_qubits: support outside one-photon-per-pair subspace");
            if (n1 == 1) code |= 1LL << (n - 1 - q);
        }
        v(code) += amp;
    }
    return QubitRegister(n, std::move(v), true);
}

FockState qubits_to_fock(const QubitRegister& regst, const QubitEncoding& enc,
                         ModeRegistry registry, int nmax) {
    const int n = regst.num_qubits();
    if (int(enc.pairs.size()) != n) throw std::invalid_argument("qubits_to_fock: encoding size mismatch");
    FockState out(registry, nmax);
    for (Eigen::Index i = 0; i < regst.dim(); ++i) {
        cxd a = regst.amplitude(i);
        if (std::abs(a) < kPruneTol) continue;
        Occupation occ(registry.size(), 0);
        for (int q = 0; q < n; ++q) {
            bool one = (i >> (n - 1 - q)) & 1;
            const Mode& m = one ? enc.pairs[q].second : enc.pairs[q].first;
            occ[registry.index_of(m)] += 1;
        }
        out.add_term(occ, a);
    }
    return out;
}

}  // namespace loqs
