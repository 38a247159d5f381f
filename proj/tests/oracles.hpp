// Test-only oracles: brute-force reference implementations kept independent
// of the library code paths they check.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "palab/multigraph.hpp"
#include "palab/rng.hpp"

namespace oracles {

using palab::Multigraph;
using palab::RootedSubgraph;
using palab::Vertex;

inline Multigraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                                   int m = 1) {
    Multigraph g(n, m);
    for (auto [u, v] : edges) g.add_edge(u, v);
    g.finalize();
    return g;
}

/// Triangle count via trace(A^3)/6 on the 0/1 adjacency matrix.
inline long trace_triangle_count(const Multigraph& g) {
    int n = g.n();
    std::vector<std::vector<long>> a(n, std::vector<long>(n, 0));
    for (int u = 1; u <= n; ++u)
        for (const auto& [v, mult] : g.neighbors(u)) {
            (void)mult;
            a[u - 1][v - 1] = 1;
        }
    long trace = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) trace += a[i][j] * a[j][k] * a[k][i];
    return trace / 6;
}

/// All simple cycles of length in [3, max_len] by brute force over vertex
/// permutations, deduplicated up to rotation and reflection.
inline std::vector<std::vector<int>> brute_force_cycles(const Multigraph& g, int max_len) {
    std::set<std::vector<int>> seen;
    std::vector<int> verts(g.n());
    std::iota(verts.begin(), verts.end(), 1);
    std::vector<std::vector<int>> out;
    std::vector<int> path;
    auto canonical = [](std::vector<int> cyc) {
        auto best = cyc;
        int len = (int)cyc.size();
        for (int rot = 0; rot < len; ++rot) {
            std::rotate(cyc.begin(), cyc.begin() + 1, cyc.end());
            if (cyc < best) best = cyc;
            auto rev = cyc;
            std::reverse(rev.begin() + 1, rev.end());
            // keep the leading element, reverse orientation
            if (rev < best) best = rev;
        }
        return best;
    };
    for (int len = 3; len <= max_len; ++len) {
        // enumerate paths of exactly `len` vertices that close up
        path.clear();
        std::function<void()> walk = [&]() {
            if ((int)path.size() == len) {
                if (g.adjacent(path.back(), path.front())) {
                    auto cyc = canonical(path);
                    if (seen.insert(cyc).second) out.push_back(cyc);
                }
                return;
            }
            for (int v : verts) {
                if (std::find(path.begin(), path.end(), v) != path.end()) continue;
                if (!path.empty() && !g.adjacent(path.back(), v)) continue;
                path.push_back(v);
                walk();
                path.pop_back();
            }
        };
        walk();
    }
    return out;
}

/// Rooted-tree view for the brute-force isomorphism oracle.
struct OracleTree {
    // children[v] = list of (child, edge multiplicity)
    std::vector<std::vector<std::pair<int, int>>> children;
    int root = 0;
};

inline OracleTree oracle_tree_from(const RootedSubgraph& b) {
    OracleTree t;
    int n = (int)b.vertices.size();
    std::map<Vertex, int> index;
    for (int i = 0; i < n; ++i) index[b.vertices[i]] = i;
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (const auto& [u, v, mult] : b.edges) {
        adj[index.at(u)].emplace_back(index.at(v), mult);
        adj[index.at(v)].emplace_back(index.at(u), mult);
    }
    t.children.assign(n, {});
    std::vector<int> stack{0}, parent(n, -1);
    std::vector<char> visited(n, 0);
    visited[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [w, mult] : adj[v]) {
            if (visited[w]) continue;
            visited[w] = 1;
            parent[w] = v;
            t.children[v].emplace_back(w, mult);
            stack.push_back(w);
        }
    }
    return t;
}

/// Backtracking rooted isomorphism: children matched by exhaustive
/// permutation search, multiplicities must agree.
inline bool rooted_iso(const OracleTree& a, int va, const OracleTree& b, int vb) {
    const auto& ca = a.children[va];
    const auto& cb = b.children[vb];
    if (ca.size() != cb.size()) return false;
    std::vector<int> perm(cb.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end());
    do {
        bool ok = true;
        for (std::size_t i = 0; i < ca.size() && ok; ++i) {
            if (ca[i].second != cb[perm[i]].second) ok = false;
            else if (!rooted_iso(a, ca[i].first, b, cb[perm[i]].first)) ok = false;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

inline bool rooted_iso(const RootedSubgraph& a, const RootedSubgraph& b) {
    OracleTree ta = oracle_tree_from(a);
    OracleTree tb = oracle_tree_from(b);
    return rooted_iso(ta, 0, tb, 0);
}

/// Whole-graph isomorphism by permutation search; fine up to ~8 vertices.
inline bool graph_iso(const Multigraph& a, const Multigraph& b) {
    if (a.n() != b.n() || a.edge_list().size() != b.edge_list().size()) return false;
    std::vector<int> perm(a.n());
    std::iota(perm.begin(), perm.end(), 1);
    do {
        bool ok = true;
        for (int u = 1; u <= a.n() && ok; ++u)
            for (int v = u + 1; v <= a.n() && ok; ++v)
                if (a.multiplicity(u, v) != b.multiplicity(perm[u - 1], perm[v - 1])) ok = false;
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// Labeled tree on n vertices from a Pruefer sequence (n >= 2, sequence of
/// length n-2 over [1, n]).
inline std::vector<std::pair<int, int>> tree_from_pruefer(const std::vector<int>& seq) {
    int n = (int)seq.size() + 2;
    std::vector<int> degree(n + 1, 1);
    for (int v : seq) degree[v] += 1;
    std::vector<std::pair<int, int>> edges;
    std::set<int> leaves;
    for (int v = 1; v <= n; ++v)
        if (degree[v] == 1) leaves.insert(v);
    std::vector<int> rest = seq;
    for (int v : rest) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(leaf, v);
        if (--degree[v] == 1) leaves.insert(v);
    }
    int u = *leaves.begin();
    int v = *std::next(leaves.begin());
    edges.emplace_back(u, v);
    return edges;
}

/// All labeled trees on n vertices (n^(n-2) of them), n <= 6.
inline std::vector<std::vector<std::pair<int, int>>> all_labeled_trees(int n) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (n == 1) {
        out.push_back({});
        return out;
    }
    if (n == 2) {
        out.push_back({{1, 2}});
        return out;
    }
    std::vector<int> seq(n - 2, 1);
    for (;;) {
        out.push_back(tree_from_pruefer(seq));
        int i = (int)seq.size() - 1;
        while (i >= 0 && seq[i] == n) {
            seq[i] = 1;
            --i;
        }
        if (i < 0) break;
        seq[i] += 1;
    }
    return out;
}

/// Random multigraph on up to max_n vertices with multiplicities <= max_mult.
inline Multigraph random_multigraph(palab::Rng& rng, int min_n, int max_n, int max_mult,
                                    double edge_prob = 0.5) {
    int n = min_n + (int)rng.uniform_int(max_n - min_n + 1);
    Multigraph g(n, 1);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            if (rng.bernoulli(edge_prob)) {
                int mult = 1 + (int)rng.uniform_int(max_mult);
                for (int i = 0; i < mult; ++i) g.add_edge(v, u);
            }
    g.finalize();
    return g;
}

inline std::vector<int> random_permutation(palab::Rng& rng, int n) {
    std::vector<int> perm(n + 1);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n; i >= 2; --i) std::swap(perm[i], perm[1 + rng.uniform_int(i)]);
    return perm;
}

}  // namespace oracles
