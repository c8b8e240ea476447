#pragma once

// Monte Carlo engine and the delta sweep. Trial t uses derive_seed(seed, t)
// and nothing else, and aggregation is integer counting, so estimates are
// byte-identical for any thread count.

#include <corrsamp/sampling.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace corrsamp {

enum class StrategyKind { MinHash, HolensteinGrid, Continuous };
std::string to_string(StrategyKind k);

struct TrialConfig {
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
    int threads = 1;
    std::optional<GridParams> grid;  // required for HolensteinGrid
};

struct MonteCarloResult {
    std::uint64_t trials = 0;
    std::uint64_t disagreements = 0;
    double estimate = 0.0;
    double std_error = 0.0;  // binomial sqrt(e(1-e)/trials)
};

// Empirical disagreement of the chosen strategy on (p, q). MinHash requires
// flat inputs on one universe.
MonteCarloResult monte_carlo_error(StrategyKind kind, const DiscreteDistribution& p,
                                   const DiscreteDistribution& q, const TrialConfig& cfg);

struct SweepRow {
    Rational delta;      // requested TV distance, exact
    Rational bound;      // 2d/(1+d)
    double empirical;    // Monte Carlo estimate
    Rational exact;      // exact strategy error on the constructed pair
    Rational lower;      // matching lower curve, dp_lower_bound(1-d)
    double std_error;
    std::uint64_t trials;
    std::uint64_t seed;
};

struct SweepReport {
    StrategyKind kind = StrategyKind::MinHash;
    std::vector<SweepRow> rows;
};

// For each delta = s/t (reduced), builds the flat pair A = {1..t},
// B = {s+1..s+t} in [s+t], whose TV distance is exactly delta and whose
// MinHash error is exactly 2d/(1+d), then estimates and evaluates. Deltas
// must be strictly increasing, each in [0, 1].
SweepReport sweep_delta(StrategyKind kind, const std::vector<Rational>& deltas,
                        const TrialConfig& cfg);

}  // namespace corrsamp
