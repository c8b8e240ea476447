#include <corrsamp/harness.hpp>

#include <corrsamp/random.hpp>

#include <cmath>
#include <exception>
#include <functional>
#include <thread>

namespace corrsamp {

namespace {

// Runs trials [0, cfg.trials) split into contiguous chunks, one per thread.
// Each trial depends only on derive_seed(cfg.seed, t); the chunk sums are
// integers, so the total is independent of the thread count.
std::uint64_t count_disagreements(const TrialConfig& cfg,
                                  const std::function<bool(std::uint64_t)>& disagrees) {
    const int threads = cfg.threads;
    if (threads == 1) {
        std::uint64_t count = 0;
        for (std::uint64_t t = 0; t < cfg.trials; ++t)
            if (disagrees(t)) ++count;
        return count;
    }
    std::vector<std::uint64_t> partial(threads, 0);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) {
        pool.emplace_back([&, i] {
            const std::uint64_t lo = cfg.trials * i / threads;
            const std::uint64_t hi = cfg.trials * (i + 1) / threads;
            try {
                std::uint64_t count = 0;
                for (std::uint64_t t = lo; t < hi; ++t)
                    if (disagrees(t)) ++count;
                partial[i] = count;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::uint64_t total = 0;
    for (std::uint64_t c : partial) total += c;
    return total;
}

}  // namespace

std::string to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::MinHash: return "minhash";
        case StrategyKind::HolensteinGrid: return "holenstein";
        case StrategyKind::Continuous: return "continuous";
    }
    throw InvariantViolationError("unknown strategy kind");
}

MonteCarloResult monte_carlo_error(StrategyKind kind, const DiscreteDistribution& p,
                                   const DiscreteDistribution& q, const TrialConfig& cfg) {
    if (p.n() != q.n()) throw InvalidInputError("distributions live on different universes");
    if (cfg.trials < 1) throw InvalidInputError("trials must be >= 1");
    if (cfg.threads < 1) throw InvalidInputError("threads must be >= 1");

    std::function<bool(std::uint64_t)> disagrees;
    switch (kind) {
        case StrategyKind::MinHash: {
            if (!p.is_flat() || !q.is_flat())
                throw InvalidInputError("minhash runs on flat distributions only");
            const Subset a = p.support();
            const Subset b = q.support();
            disagrees = [a, b, seed = cfg.seed](std::uint64_t t) {
                const PriorityTable pri(derive_seed(seed, t));
                return minhash_sample(a, pri) != minhash_sample(b, pri);
            };
            break;
        }
        case StrategyKind::HolensteinGrid: {
            if (!cfg.grid) throw InvalidInputError("grid resolution required for this strategy");
            const GridEmbedding ea = grid_embed(p, *cfg.grid);
            const GridEmbedding eb = grid_embed(q, *cfg.grid);
            disagrees = [ea, eb, seed = cfg.seed](std::uint64_t t) {
                const PriorityTable pri(derive_seed(seed, t));
                return holenstein_sample(ea, pri) != holenstein_sample(eb, pri);
            };
            break;
        }
        case StrategyKind::Continuous: {
            disagrees = [&p, &q, n = p.n(), seed = cfg.seed](std::uint64_t t) {
                const SharedRandomStream stream{derive_seed(seed, t), n};
                const auto [alice, bob] = continuous_sample_pair(p, q, stream);
                return alice != bob;
            };
            break;
        }
    }

    MonteCarloResult r;
    r.trials = cfg.trials;
    r.disagreements = count_disagreements(cfg, disagrees);
    r.estimate = static_cast<double>(r.disagreements) / static_cast<double>(r.trials);
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(r.trials));
    return r;
}

SweepReport sweep_delta(StrategyKind kind, const std::vector<Rational>& deltas,
                        const TrialConfig& cfg) {
    if (deltas.empty()) throw InvalidInputError("sweep needs at least one delta");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i] < 0 || deltas[i] > 1)
            throw InvalidInputError("deltas must lie in [0, 1]");
        if (i > 0 && !(deltas[i - 1] < deltas[i]))
            throw InvalidInputError("deltas must be strictly increasing");
    }
    if (kind == StrategyKind::HolensteinGrid && !cfg.grid)
        throw InvalidInputError("grid resolution required for this strategy");

    SweepReport report;
    report.kind = kind;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const Rational& delta = deltas[i];
        // delta = s/t reduced; A = {1..t} and B = {s+1..s+t} in [s+t] have
        // TV distance exactly delta and MinHash error exactly 2d/(1+d).
        const BigInt& sb = numerator(delta);
        const BigInt& tb = denominator(delta);
        if (sb + tb > kMaxUniverse)
            throw InvalidInputError("delta denominator too large for the sweep construction");
        const int s = static_cast<int>(sb);
        const int t = static_cast<int>(tb);
        const Universe u(s + t);
        std::vector<int> av(t), bv(t);
        for (int e = 0; e < t; ++e) {
            av[e] = e + 1;
            bv[e] = s + e + 1;
        }
        const Subset a(u, std::move(av));
        const Subset b(u, std::move(bv));
        const DiscreteDistribution p = DiscreteDistribution::uniform(a);
        const DiscreteDistribution q = DiscreteDistribution::uniform(b);

        SweepRow row;
        row.delta = delta;
        row.bound = holenstein_bound(delta);
        row.lower = dp_lower_bound(1 - delta);
        switch (kind) {
            case StrategyKind::MinHash:
                row.exact = minhash_exact_error(a, b);
                break;
            case StrategyKind::HolensteinGrid:
                row.exact = holenstein_exact_error(p, q, *cfg.grid);
                break;
            case StrategyKind::Continuous:
                row.exact = holenstein_bound(delta);
                break;
        }
        TrialConfig row_cfg = cfg;
        row_cfg.seed = derive_seed(cfg.seed, i);
        const MonteCarloResult mc = monte_carlo_error(kind, p, q, row_cfg);
        row.empirical = mc.estimate;
        row.std_error = mc.std_error;
        row.trials = mc.trials;
        row.seed = row_cfg.seed;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace corrsamp
