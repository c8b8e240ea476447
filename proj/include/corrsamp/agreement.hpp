#pragma once

// Constrained agreement: two players receive correlated nonempty sets and,
// without communication, each must output a member of their own set; they
// try to agree. Deterministic strategies only; shared randomness is modeled
// by averaging outside this module. A pair with an empty side counts as a
// disagreement, and strategies are defined on nonempty sets only.

#include <corrsamp/core.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace corrsamp {

// Enumeration caps (desk scale).
inline constexpr int kProductEnumMaxN = 10;        // product / positively correlated
inline constexpr int kMatchFamilyMaxN = 8;
inline constexpr long long kIntersectionPairCap = 1'000'000;  // C(n,a) * C(n,b)
inline constexpr long long kBruteForceSpaceCap = 100'000'000; // product of |A|
inline constexpr int kBestResponseMaxRounds = 100;

// Joint distribution over subset pairs of one universe.
class PairDistribution {
public:
    enum class Family { Product, PositivelyCorrelated, Match, Intersection, Explicit };

    // Each element joins A and B independently with probability p.
    static PairDistribution product(int n, const Rational& p);

    // Sample S at rate p/(1-delta), then thin each side independently at
    // rate 1-delta. Marginals match product(n, p); overlap is boosted.
    static PairDistribution positively_correlated(int n, const Rational& p,
                                                  const Rational& delta);

    // Uniform over ordered pairs of distinct (n-1)-subsets of [n]
    // (equivalently: A u B = [n], |A| = |B| = |A n B| + 1).
    static PairDistribution match_family(int n);

    // Uniform over pairs with |A| = a, |B| = b, |A n B| = l.
    static PairDistribution intersection_family(int n, int a, int b, int l);

    // Arbitrary finite support with exact probabilities summing to 1.
    static PairDistribution explicit_family(int n,
        std::vector<std::pair<SubsetPair, Rational>> support);

    Family family() const { return family_; }
    int n() const { return n_; }

    // Visit every support pair once with its exact probability. Order is
    // deterministic. Throws ResourceLimitError past the enumeration caps.
    void for_each_pair(
        const std::function<void(const Subset&, const Subset&, const Rational&)>& fn) const;

    // Materialized support; probabilities sum to 1 exactly.
    std::vector<std::pair<SubsetPair, Rational>> enumerate_support() const;

    // Distinct nonempty sets on one side that carry positive mass, lex order.
    std::vector<Subset> side_support(Side side) const;

private:
    PairDistribution() = default;

    friend SubsetPair sample_pair(const PairDistribution&, std::uint64_t);

    Family family_ = Family::Explicit;
    int n_ = 0;
    Rational p_;       // product / positively correlated
    Rational delta_;   // positively correlated
    int a_ = 0, b_ = 0, l_ = 0;  // intersection family
    std::vector<std::pair<SubsetPair, Rational>> support_;  // explicit family
};

// Deterministic strategy: maps nonempty sets to one of their members.
// Backed by an explicit table, or by a rank order (choose the sigma-minimal
// member, defined on every nonempty subset of [n]).
class DetStrategy {
public:
    DetStrategy() = default;  // defined on nothing; fill via from_table / from_order

    static DetStrategy from_table(int n, std::map<std::vector<int>, int> table);
    static DetStrategy from_order(int n, std::vector<int> sigma);  // sigma: permutation of [n]

    int n() const { return n_; }
    bool order_backed() const { return !sigma_.empty(); }
    const std::vector<int>& sigma() const { return sigma_; }
    const std::map<std::vector<int>, int>& table() const { return table_; }

    bool defined_on(const Subset& s) const;
    int choose(const Subset& s) const;  // throws InvalidInputError if undefined

private:
    int n_ = 0;
    std::map<std::vector<int>, int> table_;
    std::vector<int> sigma_;  // rank of element e is sigma position; empty if table-backed
};

// f_sigma: every nonempty set maps to its sigma-minimal element.
DetStrategy order_strategy(int n, const std::vector<int>& sigma);

// Pr[f(A) != g(B)], counting empty-side pairs as disagreement. Exact.
Rational exact_error(const DetStrategy& f, const DetStrategy& g, const PairDistribution& d);

// beta[i] = Pr[g(B) = i], index 1..n (index 0 unused). Sums to
// 1 - Pr[B empty].
std::vector<Rational> beta_marginals(const DetStrategy& g, const PairDistribution& d);

// Exact best response on `side` against the opponent on the other side:
// argmax over i in own set of the joint mass of agreeing on i, ties to the
// smallest element. Optimal among all deterministic strategies for `side`.
DetStrategy best_response(const DetStrategy& opponent, const PairDistribution& d, Side side);

struct BruteForceResult {
    Rational optimum;
    DetStrategy f;
    DetStrategy g;
    std::uint64_t strategies_scanned = 0;
};

// Global deterministic optimum: scans every left strategy in lex order and
// pairs it with its exact best response. Returns the lexicographically
// smallest optimal pair. Throws ResourceLimitError if the left strategy
// space exceeds kBruteForceSpaceCap.
BruteForceResult brute_force_optimum(const PairDistribution& d);

enum class ProbeVerdict { Match, Below, ResourceLimited };
std::string to_string(ProbeVerdict v);

struct ProbeReport {
    int n = 0, a = 0, b = 0, l = 0;
    Rational minhash_value;  // 1 - l/(a+b-l)
    Rational optimum;        // exact optimum, or best found upper bound
    bool exact = false;
    int rounds = 0;          // best-response rounds when not exact
    ProbeVerdict verdict = ProbeVerdict::ResourceLimited;
    DetStrategy f;
    DetStrategy g;
};

// Compares the deterministic optimum over intersection_family(n,a,b,l) with
// the MinHash value 1 - l/(a+b-l). Falls back to capped best-response
// iteration when the brute-force space is too large.
ProbeReport conjecture_probe(int n, int a, int b, int l);

// One draw from the family. Works at any n the family accepts.
SubsetPair sample_pair(const PairDistribution& d, std::uint64_t seed);

}  // namespace corrsamp
