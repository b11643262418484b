// Dense pure states and density operators over a few qubits, plus the
// bridge from post-selected Fock states to qubit registers.

#pragma once

#include "loqs/fock.hpp"

namespace loqs {

inline constexpr int kMaxQubits = 10;

class QubitRegister {
public:
    QubitRegister() = default;
    explicit QubitRegister(int n);
    QubitRegister(int n, VectorXcd amplitudes, bool renormalize = false);

    static QubitRegister basis(int n, std::size_t index);
    /// |0..0> + |1..1> over sqrt2
    static QubitRegister ghz(int n);
    /// Bell states on 2 qubits; which in {psi+, psi-, phi+, phi-}.
    static QubitRegister bell(const std::string& which);
    static QubitRegister plus(int n);

    int num_qubits() const { return n_; }
    Eigen::Index dim() const { return amp_.size(); }
    const VectorXcd& amplitudes() const { return amp_; }
    cxd amplitude(std::size_t i) const { return amp_(static_cast<Eigen::Index>(i)); }

    QubitRegister tensor(const QubitRegister& other) const;
    /// apply a single-qubit operator (qubit 0 is the leftmost label)
    QubitRegister apply1(const Eigen::Matrix2cd& u, int qubit) const;
    /// apply a two-qubit operator given as 4x4 on (qa, qb) ordering |qa qb>
    QubitRegister apply2(const Eigen::Matrix4cd& u, int qa, int qb) const;
    QubitRegister normalized() const;

    cxd inner(const QubitRegister& other) const;
    /// |<a|b>| == 1 within tol (equality up to global phase)
    bool equals_up_to_phase(const QubitRegister& other, double tol = kAlgebraTol) const;

    /// probability of outcome (0 or 1) when measuring `qubit` in basis given by
    /// unitary u (columns = outcome kets in computational frame); collapses.
    std::pair<double, QubitRegister> measure(int qubit, const Eigen::Matrix2cd& basis, int outcome) const;

private:
    int n_ = 0;
    VectorXcd amp_;
};

class DensityOperator {
public:
    DensityOperator() = default;
    explicit DensityOperator(const QubitRegister& pure);
    DensityOperator(int n, MatrixXcd rho, bool validate = true);

    static DensityOperator maximally_mixed(int n);

    int num_qubits() const { return n_; }
    const MatrixXcd& matrix() const { return rho_; }

    DensityOperator tensor(const DensityOperator& other) const;
    DensityOperator apply1(const Eigen::Matrix2cd& u, int qubit) const;
    DensityOperator apply2(const Eigen::Matrix4cd& u, int qa, int qb) const;
    DensityOperator apply(const MatrixXcd& u) const;
    /// convex mixture
    DensityOperator mixed_with(const DensityOperator& other, double w_other) const;

    double expectation(const MatrixXcd& hermitian) const;

private:
    int n_ = 0;
    MatrixXcd rho_;
};

// --- Pauli and gate matrices ---------------------------------------------
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
Eigen::Matrix2cd pauli_i();
Eigen::Matrix2cd pauli(char which);  // 'i','x','y','z'
Eigen::Matrix2cd hadamard();
/// a . sigma for a unit Bloch vector
Eigen::Matrix2cd bloch_observable(const Eigen::Vector3d& a);
Eigen::Matrix4cd cnot_gate();
Eigen::Matrix4cd cz_gate();

/// n-qubit operator from per-qubit factors
MatrixXcd kron_all(const std::vector<Eigen::Matrix2cd>& factors);

// --- decompositions, measures and the dual-rail bridge ---------------------

struct SchmidtTerm {
    double coefficient;
    VectorXcd left;
    VectorXcd right;
};

/// Schmidt decomposition of `state` across the bipartition given by the
/// qubit index set `left_qubits` (the rest form the right side).
/// Coefficients are sorted descending; sum of squares is 1.
std::vector<SchmidtTerm> schmidt_decompose(const QubitRegister& state,
                                           const std::vector<int>& left_qubits);

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

double fidelity(const DensityOperator& rho, const QubitRegister& target);

/// qubit i <- mode pair (zero_mode, one_mode); state must hold exactly one
/// photon per pair after post-selection.
struct QubitEncoding {
    std::vector<std::pair<Mode, Mode>> pairs;
};

QubitRegister fock_to_qubits(const FockState& state, const QubitEncoding& enc);
FockState qubits_to_fock(const QubitRegister& reg, const QubitEncoding& enc,
                         ModeRegistry registry, int nmax = kDefaultNmax);

}  // namespace loqs
