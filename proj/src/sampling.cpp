#include <corrsamp/sampling.hpp>

#include <corrsamp/random.hpp>

#include <iostream>
#include <limits>

namespace corrsamp {

// ------------------------------------------------------------------ MinHash

int minhash_sample(const Subset& a, const PriorityTable& pri) {
    if (a.empty()) throw InvalidInputError("minhash_sample needs a nonempty set");
    int best = 0;
    std::uint64_t best_pri = 0;
    for (int e : a.elements()) {
        const std::uint64_t h = pri.priority(static_cast<std::uint64_t>(e));
        if (best == 0 || h < best_pri) {  // ties impossible to reach: equal h keeps smaller e
            best = e;
            best_pri = h;
        }
    }
    return best;
}

int minhash_sample(const Subset& a, std::span<const std::uint64_t> priorities) {
    if (a.empty()) throw InvalidInputError("minhash_sample needs a nonempty set");
    if (static_cast<int>(priorities.size()) < a.universe())
        throw InvalidInputError("need one priority per universe element");
    int best = 0;
    std::uint64_t best_pri = 0;
    for (int e : a.elements()) {
        const std::uint64_t h = priorities[static_cast<size_t>(e - 1)];
        if (best == 0 || h < best_pri) {
            best = e;
            best_pri = h;
        }
    }
    return best;
}

Rational minhash_exact_error(const Subset& a, const Subset& b) {
    if (a.universe() != b.universe())
        throw InvalidInputError("minhash_exact_error needs one shared universe");
    if (a.empty() || b.empty())
        throw InvalidInputError("minhash_exact_error needs nonempty sets");
    return 1 - Rational(intersection_size(a, b), union_size(a, b));
}

// ----------------------------------------------------------- grid embedding

GridParams GridParams::from_gamma(const Rational& gamma) {
    if (gamma <= 0 || gamma > 1) throw InvalidInputError("gamma must lie in (0, 1]");
    if (numerator(gamma) != 1)
        throw InvalidInputError("1/gamma must be an integer, got gamma = " +
                                rational_to_string(gamma));
    const BigInt inv = denominator(gamma);
    if (inv > std::numeric_limits<std::int64_t>::max())
        throw ResourceLimitError("1/gamma too large");
    return GridParams{inv.convert_to<std::int64_t>()};
}

GridEmbedding::GridEmbedding(int n, std::int64_t inv_gamma, std::vector<std::int64_t> counts)
    : n_(n), inv_gamma_(inv_gamma), counts_(std::move(counts)), total_(0) {
    if (static_cast<int>(counts_.size()) != n_)
        throw InvariantViolationError("embedding needs one count per element");
    for (std::int64_t c : counts_) {
        if (c < 0) throw InvariantViolationError("negative cell count");
        total_ += c;
    }
    if (total_ == 0) throw InvariantViolationError("embedding has no cells");
}

std::int64_t GridEmbedding::count(int element) const {
    if (element < 1 || element > n_) throw InvalidInputError("element outside universe");
    return counts_[element - 1];
}

Rational GridEmbedding::marginal(int element) const {
    return Rational(count(element), total_);
}

namespace {

// Cells of w are the levels k*gamma, k >= 0, strictly below P(w):
// count = ceil(P * inv_gamma), or exactly P * inv_gamma at grid alignment.
std::int64_t cell_count(const Rational& prob, std::int64_t inv_gamma) {
    if (prob == 0) return 0;
    const BigInt num = numerator(prob) * inv_gamma;
    const BigInt den = denominator(prob);
    BigInt q = num / den;
    if (q * den < num) ++q;  // ceil for misaligned probabilities
    return q.convert_to<std::int64_t>();
}

}  // namespace

GridEmbedding grid_embed(const DiscreteDistribution& p, GridParams g) {
    if (g.inv_gamma < 1) throw InvalidInputError("grid needs 1/gamma >= 1");
    std::vector<std::int64_t> counts;
    counts.reserve(p.probs().size());
    if (!p.exact_source()) {
        // Double-sourced probabilities snap to the fine grid with step
        // gamma/1000, so every level comparison stays exact and reproducible.
        const BigInt den = BigInt(g.inv_gamma) * 1000;
        for (const Rational& pr : p.probs()) {
            const BigInt num =
                (numerator(pr) * den * 2 + denominator(pr)) / (denominator(pr) * 2);
            counts.push_back(cell_count(Rational(num, den), g.inv_gamma));
        }
        std::cerr << "warning: grid_embed snapped double-sourced probabilities to denominator "
                  << den << "\n";
    } else {
        for (const Rational& pr : p.probs()) counts.push_back(cell_count(pr, g.inv_gamma));
    }
    return GridEmbedding(p.n(), g.inv_gamma, std::move(counts));
}

int holenstein_sample(const GridEmbedding& a, const PriorityTable& pri) {
    // MinHash over cell ids (w-1) * inv_gamma + k; ties toward smaller id.
    int best_elem = 0;
    std::uint64_t best_pri = 0;
    bool have = false;
    for (int e = 1; e <= a.n(); ++e) {
        const std::int64_t c = a.count(e);
        const std::uint64_t base = static_cast<std::uint64_t>(e - 1) *
                                   static_cast<std::uint64_t>(a.inv_gamma());
        for (std::int64_t k = 0; k < c; ++k) {
            const std::uint64_t h = pri.priority(base + static_cast<std::uint64_t>(k));
            if (!have || h < best_pri) {
                have = true;
                best_pri = h;
                best_elem = e;
            }
        }
    }
    if (!have) throw InvariantViolationError("embedding has no cells");
    return best_elem;
}

int holenstein_sample(const DiscreteDistribution& p, GridParams g, const PriorityTable& pri) {
    return holenstein_sample(grid_embed(p, g), pri);
}

Rational holenstein_exact_error(const DiscreteDistribution& p, const DiscreteDistribution& q,
                                GridParams g) {
    if (p.n() != q.n()) throw InvalidInputError("holenstein_exact_error needs one universe");
    const GridEmbedding ea = grid_embed(p, g);
    const GridEmbedding eb = grid_embed(q, g);
    std::int64_t inter = 0, uni = 0;
    for (int e = 1; e <= p.n(); ++e) {
        inter += std::min(ea.count(e), eb.count(e));
        uni += std::max(ea.count(e), eb.count(e));
    }
    if (uni == 0) throw InvariantViolationError("union of embeddings is empty");
    return 1 - Rational(inter, uni);
}

Rational holenstein_error_bound(const Rational& delta, int n, GridParams g) {
    if (delta < 0 || delta > 1) throw InvalidInputError("delta must lie in [0, 1]");
    return (2 * delta + Rational(n, g.inv_gamma)) / (1 + delta);
}

// --------------------------------------------------------- continuous limit

std::pair<int, double> SharedRandomStream::pair_at(std::uint64_t index) const {
    SplitMix elem_rng(derive_seed(seed, 2 * index));
    SplitMix unit_rng(derive_seed(seed, 2 * index + 1));
    const int w = static_cast<int>(elem_rng.next_below(static_cast<std::uint64_t>(n))) + 1;
    return {w, unit_rng.next_unit()};
}

int holenstein_continuous_sample(const DiscreteDistribution& p, const SharedRandomStream& stream) {
    if (p.n() != stream.n) throw InvalidInputError("stream universe mismatch");
    for (std::uint64_t i = 0; i < kContinuousSampleCap; ++i) {
        const auto [w, u] = stream.pair_at(i);
        if (u < rational_to_double(p.prob(w))) return w;
    }
    throw InvariantViolationError("continuous sampler exceeded rejection cap");
}

std::pair<int, int> continuous_sample_pair(const DiscreteDistribution& p,
                                           const DiscreteDistribution& q,
                                           const SharedRandomStream& stream) {
    if (p.n() != stream.n || q.n() != stream.n)
        throw InvalidInputError("stream universe mismatch");
    int alice = 0, bob = 0;
    for (std::uint64_t i = 0; i < kContinuousSampleCap && (alice == 0 || bob == 0); ++i) {
        const auto [w, u] = stream.pair_at(i);
        if (alice == 0 && u < rational_to_double(p.prob(w))) alice = w;
        if (bob == 0 && u < rational_to_double(q.prob(w))) bob = w;
    }
    if (alice == 0 || bob == 0)
        throw InvariantViolationError("continuous sampler exceeded rejection cap");
    return {alice, bob};
}

}  // namespace corrsamp
