#pragma once

// Rivest's matching strategy for the singleton-intersection promise:
// n = 2k-1, |A| = |B| = k, |A n B| = 1, A u B = [n]. The bipartite graph on
// all k-subsets with edges at |A n B| = 1 is k-regular; decomposing it into
// k perfect matchings and sharing the matching index r gives disagreement
// exactly 1 - 1/k, below MinHash's 1 - 1/n on the same promise.

#include <corrsamp/core.hpp>

#include <vector>

namespace corrsamp {

inline constexpr long kRivestVertexCap = 10'000;  // C(n, k) cap

struct RivestGraph {
    int n = 0;
    int k = 0;
    // All k-subsets of [n] as sorted element lists, in lex order. The left
    // and right vertex classes share this list.
    std::vector<std::vector<int>> vertices;
    // adj[i] = sorted indices j with |vertices[i] n vertices[j]| == 1.
    std::vector<std::vector<int>> adj;

    int vertex_index(const std::vector<int>& s) const;  // -1 if absent
};

// Requires odd n >= 3 and C(n, k) <= kRivestVertexCap.
RivestGraph build_rivest_graph(int n);

struct MatchingDecomposition {
    RivestGraph graph;
    // k maps, each left index -> right index, perfect and pairwise
    // edge-disjoint; together they cover every edge exactly once.
    std::vector<std::vector<int>> matchings;
};

// Repeated maximum matching via augmenting paths with deterministic
// lexicographic scan order. Bit-for-bit reproducible.
MatchingDecomposition decompose(const RivestGraph& g);

// Output for one party holding s under shared index r in [1, k]: the unique
// element of s n M_r(s) (left) or s n M_r^{-1}(s) (right).
int rivest_sample(const MatchingDecomposition& d, Side side, const Subset& s, int r);

// Returns 1 - 1/k after verifying, by enumerating all edges x all r, that
// every promise pair disagrees for exactly k-1 of the k indices.
Rational rivest_exact_error(int n);

}  // namespace corrsamp
