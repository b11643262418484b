// Cluster states and one-way computing: stabilizer verification, adaptive
// single-qubit measurement patterns, type-I/II fusion, two-dimensional
// growth and the box-cluster search demonstration.

#pragma once

#include <random>
#include <set>

#include "loqs/protocols.hpp"
#include "loqs/qubits.hpp"

namespace loqs {

struct ClusterGraph {
    int n = 0;
    std::set<std::pair<int, int>> edges;  // (a < b)
    std::vector<int> kappa;               // per-vertex eigenvalue bit

    explicit ClusterGraph(int vertices = 0) : n(vertices), kappa(vertices, 0) {}

    static ClusterGraph chain(int n);
    static ClusterGraph box();  // the 2x2 lattice: 4-cycle
    static ClusterGraph lattice(int rows, int cols);

    void add_edge(int a, int b);
    bool has_edge(int a, int b) const;
    std::vector<int> neighbors(int a) const;
};

/// prod CZ |+>^n with z flips applied for kappa_a = 1.
QubitRegister build_cluster(const ClusterGraph& g);

/// K^(a) = X_a prod_{b ~ a} Z_b as a dense operator.
MatrixXcd stabilizer_operator(const ClusterGraph& g, int a);

/// <K^(a)> per vertex.
std::vector<double> verify_stabilizers(const QubitRegister& state, const ClusterGraph& g);

/// Projecting onto all K^(a) = +1 reproduces the kappa = 0 cluster state.
double stabilizer_projection_overlap(const QubitRegister& state, const ClusterGraph& g);

// --- measurement patterns ---------------------------------------------------

struct PatternStep {
    int vertex;                 // vertex id in the pattern's frame
    char basis;                 // 'x', 'y', 'z' or 'e' (equatorial angle)
    double angle = 0.0;         // for 'e': measurement of cos(a) X + sin(a) Y
    std::vector<int> adapt_on;  // earlier step indices whose outcomes flip the angle
};

struct PatternBranch {
    double probability;
    std::vector<int> outcomes;   // 0 -> +1 eigenvalue, 1 -> -1
    QubitRegister state;         // remaining qubits, original order
    std::vector<int> remaining;  // vertex ids of the remaining qubits
};

/// Exhaustive branch enumeration of an adaptive single-qubit measurement
/// pattern. `labels` gives the vertex id of each qubit of `state`.
std::vector<PatternBranch> measure_pattern(const QubitRegister& state,
                                           const std::vector<int>& labels,
                                           const std::vector<PatternStep>& steps);

/// Samples one branch with the generator.
PatternBranch measure_pattern_sampled(const QubitRegister& state, const std::vector<int>& labels,
                                      const std::vector<PatternStep>& steps, std::mt19937_64& rng);

// graph transformation rules for single measurements on cluster states
ClusterGraph graph_after_z(const ClusterGraph& g, int v);
/// linear-cluster rule: remove v and bond its (up to two) neighbors
ClusterGraph graph_after_y(const ClusterGraph& g, int v);

/// One-way realization of the Euler rotation Rx(zeta) Rz(eta) Rx(xi) on a
/// five-qubit chain with the input injected on the first site; every
/// exhaustive branch returns the rotated input after its byproduct
/// correction.
struct OneWayRotationBranch {
    double probability;
    std::vector<int> outcomes;
    QubitRegister output;          // single qubit before correction
    std::vector<char> byproducts;  // Pauli record, applied at readout
    QubitRegister corrected;
};
std::vector<OneWayRotationBranch> one_way_rotation(const QubitRegister& input, double xi,
                                                   double eta, double zeta);
Eigen::Matrix2cd euler_rotation_matrix(double xi, double eta, double zeta);

/// One-way CNOT on the four-qubit box cluster with inputs injected on the
/// control and target-input vertices; outputs carry recorded Paulis.
struct OneWayCnotBranch {
    double probability;
    std::vector<int> outcomes;
    QubitRegister output;  // two qubits (control, target)
    PauliCorrection byproducts;
    QubitRegister corrected;
};
std::vector<OneWayCnotBranch> one_way_cnot(const QubitRegister& input2);

// --- fusion ------------------------------------------------------------------

enum class FuseKind { TypeI, TypeII };

struct FuseBranch {
    bool success;
    double probability;
    std::string detector;        // detector signature
    ClusterGraph graph;          // resulting graph
    QubitRegister state;         // resulting state after recorded corrections
    std::vector<int> remaining;  // vertex ids (merged vertex keeps the A id)
};

/// Fock-level fusion of two clusters at the given end qubits; exhaustive
/// detector enumeration. Type-I success on linear clusters of lengths n, m
/// yields the (n+m-1)-chain; failure removes both operand qubits.
std::vector<FuseBranch> fuse(const ClusterGraph& a, int qubit_a, const ClusterGraph& b, int qubit_b,
                             FuseKind kind);

// --- growth -------------------------------------------------------------------

struct GrowthResult {
    bool state_verified;      // small-lattice stabilizer check passed
    long long fusion_attempts;
    long long rounds;
    int lattice_side;
};

/// side = 2 runs the state-level construction and verifies the box
/// stabilizers; larger sides run in bookkeeping mode (counts only).
GrowthResult grow_2d(int side, int leg_length, std::mt19937_64& rng);

/// probability that a leg of length n0 connects within its type-I retries
double leg_connection_probability(int n0);

// --- applications ---------------------------------------------------------------

struct GroverResult {
    std::map<std::string, double> outcome_distribution;  // two-bit labels
    double success_probability;                           // mass on the marked label
};

/// Two-bit search on the box cluster; readout in the R/L basis finds the
/// marked element with certainty on the ideal cluster. `noise` admixes
/// white noise to the cluster before the run.
GroverResult grover_box(const std::string& marked, double noise = 0.0);

struct PersistencyResult {
    int removals;  // minimal number of z measurements reaching full separability
    std::vector<int> witness_set;
};

PersistencyResult persistency_check(int chain_length);

/// true when every single-qubit cut of the pure state has Schmidt rank 1
bool is_fully_separable(const QubitRegister& state);

}  // namespace loqs
