#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "canonical.hpp"
#include "multigraph.hpp"
#include "rng.hpp"

namespace palab {

/// Neighborhood depth sufficient for rank-k games: (3^k + 1)/2.
inline long radius_for_rank(int k) {
    if (k < 1) throw std::invalid_argument("radius_for_rank: k must be >= 1");
    long p = 1;
    for (int i = 0; i < k; ++i) p *= 3;
    return (p + 1) / 2;
}

/// Chained class of bounded cycles with its r-neighborhood.
struct CycleComponent {
    enum class Kind { Isolated, Multicycle };

    std::vector<Cycle> cycles;
    std::vector<Vertex> vertex_union;  // sorted distinct cycle vertices
    RootedSubgraph neighborhood;       // B_r of the union; dist measured from the set
    Kind kind = Kind::Isolated;
};

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Multi-source BFS to depth r; returns dist for reached vertices.
inline std::map<Vertex, int> bfs_from_set(const Multigraph& g, const std::vector<Vertex>& src,
                                          int r) {
    std::map<Vertex, int> dist;
    std::queue<Vertex> q;
    for (Vertex v : src) {
        if (!dist.count(v)) {
            dist[v] = 0;
            q.push(v);
        }
    }
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop();
        int du = dist[u];
        if (du == r) continue;
        for (const auto& [w, mult] : g.neighbors(u)) {
            (void)mult;
            if (!dist.count(w)) {
                dist[w] = du + 1;
                q.push(w);
            }
        }
    }
    return dist;
}

inline RootedSubgraph induced_on(const Multigraph& g, const std::map<Vertex, int>& dist,
                                 Vertex root, int depth) {
    RootedSubgraph b;
    b.root = root;
    b.depth = depth;
    b.dist = dist;
    b.vertices.push_back(root);
    for (const auto& [v, d] : dist) {
        (void)d;
        if (v != root) b.vertices.push_back(v);
    }
    for (Vertex u : b.vertices)
        for (const auto& [w, mult] : g.neighbors(u))
            if (u < w && dist.count(w)) b.edges.emplace_back(u, w, mult);
    std::sort(b.edges.begin(), b.edges.end());
    return b;
}

// Same vertex/edge set, re-rooted (vertices[0] must be the root).
inline RootedSubgraph reroot(const RootedSubgraph& b, Vertex root) {
    RootedSubgraph out = b;
    out.root = root;
    auto it = std::find(out.vertices.begin(), out.vertices.end(), root);
    if (it == out.vertices.end()) throw std::invalid_argument("reroot: root not in subgraph");
    std::iter_swap(out.vertices.begin(), it);
    return out;
}

}  // namespace detail

/// Cycles of length <= 2r chained by the d(C,C') <= r relation, each
/// component with its B_r neighborhood and isolated/multicycle kind.
inline std::vector<CycleComponent> cycle_components(const Multigraph& g, int r) {
    if (r < 1) throw std::invalid_argument("cycle_components: r must be >= 1");
    std::vector<Cycle> cycles = enumerate_cycles(g, 2 * r);
    if (cycles.empty()) return {};

    std::map<Vertex, std::vector<int>> member_of;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        for (Vertex v : cycles[i].vertices) member_of[v].push_back((int)i);

    detail::UnionFind uf((int)cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        auto dist = detail::bfs_from_set(g, cycles[i].vertices, r);
        for (const auto& [v, d] : dist) {
            (void)d;
            auto it = member_of.find(v);
            if (it == member_of.end()) continue;
            for (int j : it->second) uf.unite((int)i, j);
        }
    }

    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        groups[uf.find((int)i)].push_back((int)i);

    std::vector<CycleComponent> out;
    for (const auto& [root_id, ids] : groups) {
        (void)root_id;
        CycleComponent comp;
        std::set<Vertex> verts;
        for (int id : ids) {
            comp.cycles.push_back(cycles[id]);
            verts.insert(cycles[id].vertices.begin(), cycles[id].vertices.end());
        }
        comp.vertex_union.assign(verts.begin(), verts.end());
        auto dist = detail::bfs_from_set(g, comp.vertex_union, r);
        comp.neighborhood = detail::induced_on(g, dist, comp.vertex_union.front(), r);
        comp.kind = comp.cycles.size() == 1 ? CycleComponent::Kind::Isolated
                                            : CycleComponent::Kind::Multicycle;
        out.push_back(std::move(comp));
    }
    return out;
}

/// Lambda(G): count of cycle-components per canonical class. The class code
/// is the minimal rooted code over the component's cycle vertices, which
/// fixes the root and traversal direction canonically.
struct CycleProfile {
    struct ClassInfo {
        long count = 0;
        CycleComponent::Kind kind = CycleComponent::Kind::Isolated;
        long size = 0;  // vertices in the coded neighborhood
    };
    std::map<CanonicalCode, ClassInfo> classes;

    long total() const {
        long t = 0;
        for (const auto& [code, info] : classes) {
            (void)code;
            t += info.count;
        }
        return t;
    }

    bool operator==(const CycleProfile& other) const {
        if (classes.size() != other.classes.size()) return false;
        for (const auto& [code, info] : classes) {
            auto it = other.classes.find(code);
            if (it == other.classes.end() || it->second.count != info.count) return false;
        }
        return true;
    }
};

inline CanonicalCode component_code(const CycleComponent& comp) {
    CanonicalCode best;
    for (Vertex v : comp.vertex_union) {
        CanonicalCode code = canonical_rooted_graph(detail::reroot(comp.neighborhood, v));
        if (best.empty() || code < best) best = std::move(code);
    }
    return best;
}

inline CycleProfile cycle_profile(const Multigraph& g, int r) {
    CycleProfile profile;
    for (const auto& comp : cycle_components(g, r)) {
        CanonicalCode code = component_code(comp);
        auto& info = profile.classes[code];
        if (info.count == 0) {
            info.kind = comp.kind;
            info.size = (long)comp.neighborhood.vertices.size();
        }
        info.count += 1;
    }
    return profile;
}

inline nlohmann::json profile_to_json(const CycleProfile& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [code, info] : p.classes) {
        nlohmann::json j;
        j["code"] = code;
        j["count"] = info.count;
        j["kind"] = info.kind == CycleComponent::Kind::Isolated ? "isolated" : "multicycle";
        j["size"] = info.size;
        arr.push_back(std::move(j));
    }
    return arr;
}

namespace detail {

struct TreeView {
    std::vector<std::vector<std::pair<int, int>>> adj;  // local index, multiplicity
    int root = 0;
};

inline long subtree_edge_degree(const TreeView& t, int v, int parent) {
    long d = 0;
    for (const auto& [w, mult] : t.adj[v])
        if (w != parent) d += mult;
    return d;
}

inline bool infinite_face_node(const TreeView& t, int v, int parent, int depth, int k) {
    if (depth <= 1) return subtree_edge_degree(t, v, parent) >= k;
    long good = 0;
    for (const auto& [w, mult] : t.adj[v]) {
        (void)mult;
        if (w == parent) continue;
        if (infinite_face_node(t, w, v, depth - 1, k)) ++good;
    }
    return good >= k;
}

}  // namespace detail

/// Membership in the recursively defined absorbing classes: at depth 1 a root
/// of degree >= k, at depth i a node with at least k children whose subtrees
/// are themselves members at depth i-1. The threshold comparison is >= k.
inline bool infinite_face_member(const RootedSubgraph& t, int depth, int k) {
    if (depth < 1) throw std::invalid_argument("infinite_face_member: depth must be >= 1");
    if (k < 1) throw std::invalid_argument("infinite_face_member: k must be >= 1");
    if (!t.is_tree()) throw std::invalid_argument("infinite_face_member: input contains a cycle");
    detail::TreeView view{t.local_adjacency(), 0};
    return detail::infinite_face_node(view, 0, -1, depth, k);
}

/// Census over sampled vertices: membership in C_0 (r-ball acyclic and no
/// cycle of length <= 2r within distance r) and, for members, the canonical
/// rooted-tree code of the ball.
struct AcyclicCensus {
    std::map<CanonicalCode, long> counts;
    long sampled = 0;
    long in_c0 = 0;
};

inline AcyclicCensus acyclic_class_census(const Multigraph& g, int r, long sample_size,
                                          std::uint64_t seed) {
    if (r < 1) throw std::invalid_argument("acyclic_class_census: r must be >= 1");
    AcyclicCensus census;
    std::vector<char> near_cycle(g.n() + 1, 0);
    for (const Cycle& c : enumerate_cycles(g, 2 * r)) {
        auto dist = detail::bfs_from_set(g, c.vertices, r);
        for (const auto& [v, d] : dist) {
            (void)d;
            near_cycle[v] = 1;
        }
    }
    auto classify = [&](Vertex v) {
        ++census.sampled;
        if (near_cycle[v]) return;
        RootedSubgraph b = ball(g, v, r);
        if (!b.is_tree()) return;
        ++census.in_c0;
        census.counts[canonical_rooted_tree(b)] += 1;
    };
    if (sample_size == 0) {
        for (Vertex v = 1; v <= g.n(); ++v) classify(v);
    } else {
        Rng rng(seed);
        for (long i = 0; i < sample_size; ++i)
            classify((Vertex)(rng.uniform_int(g.n()) + 1));
    }
    return census;
}

}  // namespace palab
