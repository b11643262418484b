#include "loqs/repeater.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loqs/protocols.hpp"

namespace loqs {

int nesting_levels(long long segments, int branching) {
    if (segments < 1 || branching < 2) return -1;
    int n = 0;
    long long v = segments;
    while (v > 1) {
        if (v % branching != 0) return -1;
        v /= branching;
        ++n;
    }
    return n;
}

long long resource_count(const RepeaterConfig& config) {
    int n = nesting_levels(config.segments, config.branching);
    if (n < 0) throw std::invalid_argument("resource_count: N must be a power of L");
    long long r = 1;
    for (int i = 0; i < n; ++i) r *= 1LL * config.branching * config.purification_copies;
    return r;
}

double connect_fidelity(double f, int l) {
    // Werner-parameter product: p = (4F-1)/3 composes multiplicatively
    // under entanglement swapping of Werner pairs
    double p = (4 * f - 1) / 3;
    return (1 + 3 * std::pow(p, l)) / 4;
}

std::pair<double, double> purify_map_step(PurifyMapKind kind, double f) {
    if (kind == PurifyMapKind::Bbpssw) {
        double denom = f * f + 2 * f * (1 - f) / 3 + 5 * (1 - f) * (1 - f) / 9;
        return {(f * f + (1 - f) * (1 - f) / 9) / denom, denom};
    }
    double denom = f * f + (1 - f) * (1 - f);
    return {f * f / denom, 0.5 * denom};
}

NestedResult nested_protocol(const RepeaterConfig& config) {
    NestedResult res{};
    int n = nesting_levels(config.segments, config.branching);
    if (n < 0) throw std::invalid_argument("nested_protocol: N must be a power of L");
    if (config.elementary_fidelity <= config.f_min || config.elementary_fidelity > config.f_max)
        throw std::invalid_argument("nested_protocol: F1 outside the working window");

    const int max_rounds = std::max(0, int(std::floor(std::log2(double(config.purification_copies)))));
    double f = config.elementary_fidelity;
    res.feasible = true;
    for (int level = 1; level <= n; ++level) {
        NestedLevel lv{};
        lv.level = level;
        f = connect_fidelity(f, config.branching);
        lv.fidelity_connected = f;
        int rounds = 0;
        while (f < config.elementary_fidelity && rounds < max_rounds && f > 0.5) {
            f = purify_map_step(config.purify_map, f).first;
            ++rounds;
        }
        lv.purify_rounds = rounds;
        lv.fidelity_purified = f;
        res.trace.push_back(lv);
        if (f < config.elementary_fidelity || f < config.f_min || f <= 0.5) {
            res.feasible = false;
            res.final_fidelity = f;
            return res;
        }
    }
    res.final_fidelity = f;
    return res;
}

DlczOutcome dlcz_generate(const DlczLink& link, std::mt19937_64& rng, long long max_attempts,
                          double channel_phase) {
    if (link.p_c <= 0 || link.p_c > 0.2)
        throw std::invalid_argument("dlcz_generate: p_c must lie in (0, 0.2] (perturbative regime)");
    std::bernoulli_distribution click(link.p_c);
    std::bernoulli_distribution which(0.5);
    DlczOutcome out{};
    out.phase = channel_phase;
    for (long long round = 1; round <= max_attempts; ++round) {
        if (!click(rng)) continue;
        out.succeeded = true;
        out.round = round;
        out.time = double(round) * link.t_delta;
        out.sign = which(rng) ? 1 : -1;
        VectorXcd v(2);
        v << 1 / std::sqrt(2.0), double(out.sign) * std::exp(cxd(0, channel_phase)) / std::sqrt(2.0);
        out.state = QubitRegister(1, std::move(v));
        return out;
    }
    out.succeeded = false;  // resumable: caller may try again
    out.round = max_attempts;
    out.time = double(max_attempts) * link.t_delta;
    out.state = QubitRegister(1);
    return out;
}

namespace {

struct LinkSample {
    double time;
    double fidelity;
};

// recursive event-driven sample of one nested-level link
LinkSample sample_level(int level, const RepeaterConfig& cfg, const DlczLink& link,
                        std::mt19937_64& rng, const int max_rounds) {
    if (level == 0) {
        std::geometric_distribution<long long> geo(link.p_c);
        long long rounds = 1 + geo(rng);
        return {double(rounds) * link.t_delta, cfg.elementary_fidelity};
    }
    std::bernoulli_distribution swap_ok(0.5);
    double t = 0;
    while (true) {
        // children are generated in parallel
        double tmax = 0;
        double f = -1;
        for (int c = 0; c < cfg.branching; ++c) {
            LinkSample s = sample_level(level - 1, cfg, link, rng, max_rounds);
            tmax = std::max(tmax, s.time);
            f = (f < 0) ? s.fidelity : f;
        }
        t += tmax + link.t_delta;
        if (!swap_ok(rng)) continue;  // connection failed: regenerate
        double fc = connect_fidelity(f, cfg.branching);
        // purification: each round consumes a fresh copy of the same level
        int rounds = 0;
        bool purified = true;
        while (fc < cfg.elementary_fidelity && rounds < max_rounds && fc > 0.5) {
            LinkSample copy = sample_level(level, cfg, link, rng, 0);
            t += copy.time;
            auto [f2, p2] = purify_map_step(cfg.purify_map, fc);
            if (!std::bernoulli_distribution(p2)(rng)) {
                purified = false;
                break;
            }
            fc = f2;
            ++rounds;
        }
        if (!purified) continue;
        return {t, fc};
    }
}

NetworkStats stats_from(std::vector<double>& times, double fsum, long long runs) {
    std::sort(times.begin(), times.end());
    NetworkStats st{};
    st.runs = runs;
    double sum = 0;
    for (double t : times) sum += t;
    st.mean_time = sum / double(runs);
    st.p50 = times[std::size_t(0.50 * double(runs - 1))];
    st.p95 = times[std::size_t(0.95 * double(runs - 1))];
    st.mean_fidelity = fsum / double(runs);
    return st;
}

}  // namespace

NetworkStats simulate_network(const RepeaterConfig& config, const DlczLink& link,
                              std::mt19937_64& rng, long long runs) {
    if (runs < 1) throw std::invalid_argument("simulate_network: runs >= 1 required");
    int n = nesting_levels(config.segments, config.branching);
    if (n < 0) throw std::invalid_argument("simulate_network: N must be a power of L");
    const int max_rounds =
        std::max(0, int(std::floor(std::log2(double(config.purification_copies)))));
    std::vector<double> times;
    times.reserve(runs);
    double fsum = 0;
    for (long long r = 0; r < runs; ++r) {
        LinkSample s = sample_level(n, config, link, rng, max_rounds);
        times.push_back(s.time);
        fsum += s.fidelity;
    }
    return stats_from(times, fsum, runs);
}

NetworkStats simulate_direct(long long segments, double p, double t_delta, std::mt19937_64& rng,
                             long long runs) {
    if (runs < 1) throw std::invalid_argument("simulate_direct: runs >= 1 required");
    double p_total = std::pow(p, double(segments));
    std::geometric_distribution<long long> geo(p_total);
    std::vector<double> times;
    times.reserve(runs);
    for (long long r = 0; r < runs; ++r) times.push_back(double(1 + geo(rng)) * t_delta);
    return stats_from(times, double(runs), runs);
}

std::vector<SweepRow> repeater_sweep(const RepeaterConfig& base, const DlczLink& link,
                                     const std::vector<long long>& segment_counts,
                                     std::mt19937_64& rng, long long runs) {
    std::vector<SweepRow> rows;
    for (long long n : segment_counts) {
        RepeaterConfig cfg = base;
        cfg.segments = n;
        NetworkStats st = simulate_network(cfg, link, rng, runs);
        rows.push_back({n, cfg.branching, cfg.purification_copies, cfg.elementary_fidelity,
                        st.mean_time, st.p50, st.p95, st.mean_fidelity, resource_count(cfg)});
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "N,L,M,F1,mean_time,p50,p95,final_F,R\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%lld,%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%lld\n",
                      r.segments, r.branching, r.copies, r.f1, r.mean_time, r.p50, r.p95,
                      r.final_fidelity, r.resources);
        os << buf;
    }
    return os.str();
}

}  // namespace loqs
