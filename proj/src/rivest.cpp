#include <corrsamp/rivest.hpp>

#include <algorithm>
#include <map>

namespace corrsamp {

namespace {

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// All k-subsets of [n] as sorted lists, lex order.
std::vector<std::vector<int>> k_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i + 1;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

int sorted_intersection_size(const std::vector<int>& x, const std::vector<int>& y) {
    size_t i = 0, j = 0;
    int c = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] == y[j]) ++c, ++i, ++j;
        else if (x[i] < y[j]) ++i;
        else ++j;
    }
    return c;
}

// Kuhn's augmenting path: deterministic because vertices and adjacency are
// both scanned in ascending order.
bool try_augment(int u, const std::vector<std::vector<int>>& adj, std::vector<char>& visited,
                 std::vector<int>& match_left, std::vector<int>& match_right) {
    for (int v : adj[u]) {
        if (visited[v]) continue;
        visited[v] = 1;
        if (match_right[v] == -1 ||
            try_augment(match_right[v], adj, visited, match_left, match_right)) {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    return false;
}

}  // namespace

int RivestGraph::vertex_index(const std::vector<int>& s) const {
    const auto it = std::lower_bound(vertices.begin(), vertices.end(), s);
    if (it == vertices.end() || *it != s) return -1;
    return static_cast<int>(it - vertices.begin());
}

RivestGraph build_rivest_graph(int n) {
    if (n < 3 || n % 2 == 0)
        throw InvalidInputError("matching strategy needs odd n >= 3, got " + std::to_string(n));
    const int k = (n + 1) / 2;
    if (binom(n, k) > kRivestVertexCap)
        throw ResourceLimitError("C(n, k) exceeds the vertex cap of " +
                                 std::to_string(kRivestVertexCap));

    RivestGraph g;
    g.n = n;
    g.k = k;
    g.vertices = k_subsets(n, k);
    g.adj.resize(g.vertices.size());
    // A's neighbors are exactly {a} u complement(A) for each a in A, so the
    // graph is k-regular. Built by scan to keep the structure self-checking.
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        for (size_t j = 0; j < g.vertices.size(); ++j) {
            if (sorted_intersection_size(g.vertices[i], g.vertices[j]) == 1)
                g.adj[i].push_back(static_cast<int>(j));
        }
        if (static_cast<int>(g.adj[i].size()) != k)
            throw InvariantViolationError("vertex degree differs from k");
    }
    return g;
}

MatchingDecomposition decompose(const RivestGraph& g) {
    const int v = static_cast<int>(g.vertices.size());
    std::vector<std::vector<int>> remaining = g.adj;
    MatchingDecomposition out;
    out.graph = g;
    for (int round = 0; round < g.k; ++round) {
        std::vector<int> match_left(v, -1), match_right(v, -1);
        for (int u = 0; u < v; ++u) {
            std::vector<char> visited(v, 0);
            if (!try_augment(u, remaining, visited, match_left, match_right))
                throw InvariantViolationError("regular graph failed to yield a perfect matching");
        }
        for (int u = 0; u < v; ++u) {
            auto& nb = remaining[u];
            nb.erase(std::remove(nb.begin(), nb.end(), match_left[u]), nb.end());
        }
        out.matchings.push_back(std::move(match_left));
    }
    for (const auto& nb : remaining)
        if (!nb.empty())
            throw InvariantViolationError("matchings did not cover every edge");
    return out;
}

int rivest_sample(const MatchingDecomposition& d, Side side, const Subset& s, int r) {
    const RivestGraph& g = d.graph;
    if (s.universe() != g.n) throw InvalidInputError("subset universe mismatch");
    if (s.size() != g.k) throw InvalidInputError("promise needs |s| = k = " + std::to_string(g.k));
    if (r < 1 || r > g.k) throw InvalidInputError("matching index r must lie in [1, k]");
    const int idx = g.vertex_index(s.elements());
    if (idx < 0) throw InvariantViolationError("vertex lookup failed");

    int partner = -1;
    if (side == Side::Left) {
        partner = d.matchings[r - 1][idx];
    } else {
        const auto& m = d.matchings[r - 1];
        for (int u = 0; u < static_cast<int>(m.size()); ++u)
            if (m[u] == idx) { partner = u; break; }
    }
    if (partner < 0) throw InvariantViolationError("matching is not perfect");

    const auto& mine = s.elements();
    const auto& theirs = g.vertices[partner];
    std::vector<int> common;
    std::set_intersection(mine.begin(), mine.end(), theirs.begin(), theirs.end(),
                          std::back_inserter(common));
    if (common.size() != 1)
        throw InvariantViolationError("matched pair does not share exactly one element");
    return common[0];
}

Rational rivest_exact_error(int n) {
    const RivestGraph g = build_rivest_graph(n);
    const MatchingDecomposition d = decompose(g);
    // Every edge (A, B) agrees exactly when (A, B) lies in matching r, which
    // happens for exactly one of the k indices.
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        const Subset a(Universe(g.n), g.vertices[i]);
        for (int j : g.adj[i]) {
            const Subset b(Universe(g.n), g.vertices[j]);
            int agreements = 0;
            for (int r = 1; r <= g.k; ++r) {
                if (rivest_sample(d, Side::Left, a, r) == rivest_sample(d, Side::Right, b, r))
                    ++agreements;
            }
            if (agreements != 1)
                throw InvariantViolationError("edge does not agree on exactly one index");
        }
    }
    return 1 - Rational(1, g.k);
}

}  // namespace corrsamp
