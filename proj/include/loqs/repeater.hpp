// Nested-purification repeater calculator and the Monte Carlo network
// simulator with a DLCZ-style probabilistic elementary link.

#pragma once

#include <random>

#include "loqs/qubits.hpp"

namespace loqs {

enum class PurifyMapKind { Bbpssw, LinearOptical };

struct RepeaterConfig {
    long long segments = 16;      // N = L^n
    int branching = 2;            // L
    int purification_copies = 2;  // M (average copies consumed per level)
    double elementary_fidelity = 0.96;
    PurifyMapKind purify_map = PurifyMapKind::Bbpssw;
    double f_min = 0.55;
    double f_max = 1.0;
};

/// n with N = L^n, or -1 when N is not a power of L.
int nesting_levels(long long segments, int branching);

/// R = (L M)^n = N^(log_L M + 1), exact integer arithmetic.
long long resource_count(const RepeaterConfig& config);

struct NestedLevel {
    int level;
    double fidelity_connected;  // after connecting L pairs
    double fidelity_purified;   // after the purification rounds
    int purify_rounds;
};

struct NestedResult {
    bool feasible;
    std::vector<NestedLevel> trace;
    double final_fidelity;
};

/// Level recursion with the Werner-parameter connection model and the
/// selected purification map; infeasible configurations are reported, not
/// thrown.
NestedResult nested_protocol(const RepeaterConfig& config);

/// Werner fidelity after connecting L pairs of fidelity f.
double connect_fidelity(double f, int l);
/// One purification round of the selected map: new fidelity and success
/// probability.
std::pair<double, double> purify_map_step(PurifyMapKind kind, double f);

struct DlczLink {
    double p_c = 0.01;    // success probability per attempt
    double t_delta = 1.0; // attempt duration
};

struct DlczOutcome {
    bool succeeded;
    long long round;       // 1-based successful attempt
    double time;           // round * t_delta
    double phase;          // channel phase of the heralded state
    int sign;              // +1 / -1 detector branch
    QubitRegister state;   // (|10> + sign e^{i phase} |01>)/sqrt2
};

/// Geometric trials with success p_c; the link warns (via std::invalid_
/// argument) outside the perturbative regime p_c <= 0.2.
DlczOutcome dlcz_generate(const DlczLink& link, std::mt19937_64& rng,
                          long long max_attempts = 1'000'000, double channel_phase = 0.0);

struct NetworkStats {
    double mean_time;
    double p50;
    double p95;
    double mean_fidelity;
    long long runs;
};

/// Event-driven Monte Carlo of the nested network: parallel link
/// generation, probabilistic swapping and purification.
NetworkStats simulate_network(const RepeaterConfig& config, const DlczLink& link,
                              std::mt19937_64& rng, long long runs);

/// Direct transmission baseline: one attempt succeeds with p^N.
NetworkStats simulate_direct(long long segments, double p, double t_delta, std::mt19937_64& rng,
                             long long runs);

struct SweepRow {
    long long segments;
    int branching;
    int copies;
    double f1;
    double mean_time;
    double p50;
    double p95;
    double final_fidelity;
    long long resources;
};

std::vector<SweepRow> repeater_sweep(const RepeaterConfig& base, const DlczLink& link,
                                     const std::vector<long long>& segment_counts,
                                     std::mt19937_64& rng, long long runs);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace loqs
