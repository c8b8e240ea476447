#pragma once

// Sampling strategies built on shared randomness:
//   - MinHash over explicit sets (output the set member with minimal priority),
//   - the Holenstein grid embedding, which reduces arbitrary finite
//     distributions to MinHash over a cell set,
//   - the continuous-limit variant via shared rejection sampling.

#include <corrsamp/core.hpp>
#include <corrsamp/random.hpp>

#include <cstdint>
#include <span>
#include <utility>

namespace corrsamp {

// I.i.d. uniform 64-bit priority per element id, keyed by (seed, id).
// Ties break toward the smaller id, so every table is a total order and,
// distributionally, a uniform random permutation.
class PriorityTable {
public:
    explicit PriorityTable(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t priority(std::uint64_t element) const {
        return mix64(seed_ ^ (kGolden * (element + 0x51ED2701)));
    }

private:
    std::uint64_t seed_;
};

// Member of a with minimal (priority, id). O(|a|). a must be nonempty.
int minhash_sample(const Subset& a, const PriorityTable& pri);

// Same, with an explicit priority per element (index e-1, lower wins, ties
// toward the smaller element). Lets tests enumerate all priority orders.
int minhash_sample(const Subset& a, std::span<const std::uint64_t> priorities);

// Exact pairwise disagreement of MinHash on a flat pair: 1 - |AnB|/|AuB|.
Rational minhash_exact_error(const Subset& a, const Subset& b);

// Grid resolution gamma = 1 / inv_gamma. The grid levels are
// {0, gamma, ..., 1 - gamma}, i.e. inv_gamma levels.
struct GridParams {
    std::int64_t inv_gamma = 1;

    static GridParams from_gamma(const Rational& gamma);  // rejects non-integral 1/gamma
    Rational gamma() const { return Rational(1, inv_gamma); }
};

// Cell set of a distribution: element w owns a cell at every grid level
// strictly below P(w). Levels below P(w) form a prefix, so the whole
// embedding is a count per element.
class GridEmbedding {
public:
    GridEmbedding(int n, std::int64_t inv_gamma, std::vector<std::int64_t> counts);

    int n() const { return n_; }
    std::int64_t inv_gamma() const { return inv_gamma_; }
    std::int64_t count(int element) const;
    std::int64_t total_cells() const { return total_; }

    // Exact probability that MinHash over the cells outputs this element.
    Rational marginal(int element) const;

private:
    int n_;
    std::int64_t inv_gamma_;
    std::vector<std::int64_t> counts_;  // index e-1
    std::int64_t total_;                // sum of counts, > 0
};

// Embed p on the grid. Exact rational comparison at every level boundary.
// A distribution built from doubles is first snapped to denominator
// inv_gamma * 1000 (with a warning on stderr).
GridEmbedding grid_embed(const DiscreteDistribution& p, GridParams g);

// MinHash over the cell set; returns the owning element.
int holenstein_sample(const GridEmbedding& a, const PriorityTable& pri);
int holenstein_sample(const DiscreteDistribution& p, GridParams g, const PriorityTable& pri);

// Probability the two grid-embedded parties pick different cells:
// 1 - |AnB|/|AuB| over cells. Upper-bounds the element-level disagreement,
// with equality whenever each side's surplus cells belong to elements the
// other side cannot output (true for flat same-size pairs); in general the
// parties can agree on an element through different cells.
Rational holenstein_exact_error(const DiscreteDistribution& p, const DiscreteDistribution& q,
                                GridParams g);

// Guarantee for the grid protocol: (2 delta + gamma n) / (1 + delta).
Rational holenstein_error_bound(const Rational& delta, int n, GridParams g);

// Counter-based stream of (uniform element of [n], uniform real in [0,1))
// pairs. Both parties enumerate the same pairs independently.
struct SharedRandomStream {
    std::uint64_t seed = 0;
    int n = 1;

    std::pair<int, double> pair_at(std::uint64_t index) const;
};

inline constexpr std::uint64_t kContinuousSampleCap = 1'000'000;

// First stream element accepted by p (accept pair (w,u) iff u < P(w)).
// Marginal is exactly p; two parties sharing the stream disagree with
// probability at most 2d/(1+d), with equality whenever the surplus of each
// side avoids the other's mass (so for flat same-size pairs). Throws after
// kContinuousSampleCap rejections.
int holenstein_continuous_sample(const DiscreteDistribution& p, const SharedRandomStream& stream);

// Both parties on one stream; returns (alice, bob).
std::pair<int, int> continuous_sample_pair(const DiscreteDistribution& p,
                                           const DiscreteDistribution& q,
                                           const SharedRandomStream& stream);

}  // namespace corrsamp
