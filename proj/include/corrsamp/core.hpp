#pragma once

// Core model: universes [n], subsets, discrete distributions with a dual
// exact/double nature, total variation distance, and the closed-form
// disagreement curves that the sampling strategies are measured against.

#include <corrsamp/errors.hpp>
#include <corrsamp/rational.hpp>

#include <cstdint>
#include <vector>

namespace corrsamp {

inline constexpr int kMaxUniverse = 1'000'000;

enum class Side { Left, Right };

// Ground set {1, ..., n}.
struct Universe {
    int n = 0;

    explicit Universe(int n_) : n(n_) {
        if (n < 1 || n > kMaxUniverse)
            throw InvalidInputError("universe size must be in [1, 1e6], got " + std::to_string(n_));
    }
};

// Immutable sorted subset of a universe.
class Subset {
public:
    Subset(Universe u, std::vector<int> elements);

    static Subset full(Universe u);

    int universe() const { return n_; }
    const std::vector<int>& elements() const { return elems_; }
    int size() const { return static_cast<int>(elems_.size()); }
    bool empty() const { return elems_.empty(); }
    bool contains(int e) const;

    // Bitmask over elements 1..n. Only valid for n <= 63.
    std::uint64_t mask() const;

    bool operator==(const Subset& o) const { return n_ == o.n_ && elems_ == o.elems_; }

private:
    int n_;
    std::vector<int> elems_;  // strictly increasing, each in [1, n]
};

int intersection_size(const Subset& a, const Subset& b);
int union_size(const Subset& a, const Subset& b);

// Pair over one shared universe.
struct SubsetPair {
    Subset a;
    Subset b;

    SubsetPair(Subset a_, Subset b_);
};

// Probability distribution over [n]. Exact rationals inside; a distribution
// built from doubles is flagged, because grid embeddings snap such inputs.
class DiscreteDistribution {
public:
    static DiscreteDistribution from_rationals(int n, std::vector<Rational> probs);
    static DiscreteDistribution from_doubles(int n, const std::vector<double>& probs);
    static DiscreteDistribution uniform(const Subset& support);

    int n() const { return n_; }
    const std::vector<Rational>& probs() const { return probs_; }
    const Rational& prob(int element) const;
    bool exact_source() const { return exact_; }

    Subset support() const;   // elements with positive mass
    bool is_flat() const;     // all positive entries equal

private:
    DiscreteDistribution(int n, std::vector<Rational> probs, bool exact);

    int n_;
    std::vector<Rational> probs_;  // index e-1; entries >= 0; sum 1 (exact path)
    bool exact_;
};

// d_TV(P, Q) = (1/2) sum |P - Q|, exact.
Rational tv_distance(const DiscreteDistribution& p, const DiscreteDistribution& q);

// TV distance between uniform distributions on two nonempty sets:
// 1 - |A n B| / max(|A|, |B|).
Rational flat_tv_distance(const Subset& a, const Subset& b);

// Disagreement of the optimal correlated-sampling protocol: 2d/(1+d).
Rational holenstein_bound(const Rational& delta);

// Asymptotic agreement-game floor for the product family: 2(1-p)/(2-p).
Rational dp_lower_bound(const Rational& p);

// Finite-n optimum for the product family:
// (2(1-p) + p(1-p)^(2n)) / (2-p). Excess over dp_lower_bound is exactly
// p(1-p)^(2n) / (2-p).
Rational finite_dp_optimum(int n, const Rational& p);

}  // namespace corrsamp
