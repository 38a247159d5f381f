#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace palab {

using Vertex = int;  // creation index, 1-based

/// Model descriptor attached to a generated graph.
struct GraphMeta {
    std::string model = "none";  // classical | sequential | none
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

/// Position in the construction: "just before the i-th edge of vertex w".
struct EdgePoint {
    Vertex creator;
    int index;  // 1-based edge index within the creator's round
};

/// Undirected multigraph with creation-ordered vertices. No self-loops.
/// Immutable once finalized; generators append edges in creation order and
/// call finalize() exactly once.
class Multigraph {
public:
    struct Edge {
        Vertex creator;  // later vertex for generated graphs
        Vertex target;
    };

    Multigraph() = default;
    explicit Multigraph(int n, int m = 1, GraphMeta meta = {})
        : n_(n), m_(m), meta_(std::move(meta)) {
        if (n < 0) throw std::invalid_argument("Multigraph: negative vertex count");
        adj_.assign(static_cast<std::size_t>(n) + 1, {});
    }

    int n() const { return n_; }
    int m() const { return m_; }
    const GraphMeta& meta() const { return meta_; }
    GraphMeta& meta() { return meta_; }

    /// Edges in creation order, with multiplicity expanded.
    const std::vector<Edge>& edge_list() const { return edges_; }

    void add_edge(Vertex u, Vertex v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw std::invalid_argument("Multigraph: self-loops are not allowed");
        if (finalized_) throw std::logic_error("Multigraph: add_edge after finalize");
        edges_.push_back(Edge{u, v});
    }

    void finalize() {
        if (finalized_) return;
        for (const Edge& e : edges_) {
            bump(e.creator, e.target);
            bump(e.target, e.creator);
        }
        for (auto& nb : adj_)
            std::sort(nb.begin(), nb.end());
        finalized_ = true;
    }

    bool finalized() const { return finalized_; }

    /// Neighbors of v as (vertex, multiplicity), sorted by vertex.
    const std::vector<std::pair<Vertex, int>>& neighbors(Vertex v) const {
        check_vertex(v);
        require_finalized();
        return adj_[static_cast<std::size_t>(v)];
    }

    int multiplicity(Vertex u, Vertex v) const {
        if (u == v) return 0;
        const auto& nb = neighbors(u);
        auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(v, 0));
        if (it != nb.end() && it->first == v) return it->second;
        return 0;
    }

    bool adjacent(Vertex u, Vertex v) const { return multiplicity(u, v) > 0; }

    /// Multiplicity-counted degree. With `upto`, edges are counted as of the
    /// state just before the index-th edge of upto->creator was assigned.
    long degree(Vertex v, std::optional<EdgePoint> upto = std::nullopt) const {
        check_vertex(v);
        if (!upto) {
            require_finalized();
            long d = 0;
            for (const auto& [w, mult] : adj_[static_cast<std::size_t>(v)]) {
                (void)w;
                d += mult;
            }
            return d;
        }
        check_vertex(upto->creator);
        if (upto->index < 1)
            throw std::out_of_range("degree: edge index must be >= 1");
        long d = 0;
        int seen_of_creator = 0;
        for (const Edge& e : edges_) {
            if (e.creator == upto->creator) {
                ++seen_of_creator;
                if (seen_of_creator == upto->index) return d;
            }
            if (e.creator == v || e.target == v) ++d;
        }
        return d;
    }

    long degree_sum() const {
        return 2 * static_cast<long>(edges_.size());
    }

    /// Distinct unordered adjacent pairs with multiplicities, sorted by (u,v).
    std::vector<std::tuple<Vertex, Vertex, int>> sorted_edges() const {
        require_finalized();
        std::vector<std::tuple<Vertex, Vertex, int>> out;
        for (Vertex u = 1; u <= n_; ++u)
            for (const auto& [v, mult] : adj_[static_cast<std::size_t>(u)])
                if (u < v) out.emplace_back(u, v, mult);
        return out;
    }

    /// Relabel through a permutation perm (perm[v] = new id, 1-based).
    Multigraph relabeled(const std::vector<Vertex>& perm) const {
        if (static_cast<int>(perm.size()) != n_ + 1)
            throw std::invalid_argument("relabeled: permutation size mismatch");
        Multigraph out(n_, m_, meta_);
        for (const Edge& e : edges_)
            out.add_edge(perm[static_cast<std::size_t>(e.creator)],
                         perm[static_cast<std::size_t>(e.target)]);
        out.finalize();
        return out;
    }

private:
    void check_vertex(Vertex v) const {
        if (v < 1 || v > n_) throw std::out_of_range("Multigraph: vertex out of range");
    }
    void require_finalized() const {
        if (!finalized_) throw std::logic_error("Multigraph: not finalized");
    }
    void bump(Vertex u, Vertex v) {
        auto& nb = adj_[static_cast<std::size_t>(u)];
        for (auto& [w, mult] : nb) {
            if (w == v) {
                ++mult;
                return;
            }
        }
        nb.emplace_back(v, 1);
    }

    int n_ = 0;
    int m_ = 1;
    GraphMeta meta_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<Vertex, int>>> adj_;
    bool finalized_ = false;
};

/// Induced ball B_r(g, root) with BFS distance labels.
struct RootedSubgraph {
    Vertex root = 0;
    int depth = 0;
    std::vector<Vertex> vertices;                       // BFS order, root first
    std::vector<std::tuple<Vertex, Vertex, int>> edges; // induced, u < v, with multiplicity
    std::map<Vertex, int> dist;

    bool contains(Vertex v) const { return dist.count(v) > 0; }
    std::size_t size() const { return vertices.size(); }

    /// Local adjacency (indices into `vertices`) as (neighbor index, multiplicity).
    std::vector<std::vector<std::pair<int, int>>> local_adjacency() const {
        std::map<Vertex, int> index;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            index[vertices[i]] = static_cast<int>(i);
        std::vector<std::vector<std::pair<int, int>>> adj(vertices.size());
        for (const auto& [u, v, mult] : edges) {
            int iu = index.at(u), iv = index.at(v);
            adj[static_cast<std::size_t>(iu)].emplace_back(iv, mult);
            adj[static_cast<std::size_t>(iv)].emplace_back(iu, mult);
        }
        for (auto& nb : adj) std::sort(nb.begin(), nb.end());
        return adj;
    }

    /// True if the underlying simple graph is a tree. Balls are connected by
    /// construction, so acyclicity is exactly |E| = |V| - 1.
    bool is_tree() const { return edges.size() + 1 == vertices.size(); }
};

/// B_r(G,v): all vertices within distance r of v, with the induced edges.
/// Distances ignore edge multiplicity.
inline RootedSubgraph ball(const Multigraph& g, Vertex root, int r) {
    if (r < 0) throw std::invalid_argument("ball: negative radius");
    RootedSubgraph b;
    b.root = root;
    b.depth = r;
    std::queue<Vertex> q;
    b.dist[root] = 0;
    b.vertices.push_back(root);
    q.push(root);
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop();
        int du = b.dist[u];
        if (du == r) continue;
        for (const auto& [w, mult] : g.neighbors(u)) {
            (void)mult;
            if (!b.dist.count(w)) {
                b.dist[w] = du + 1;
                b.vertices.push_back(w);
                q.push(w);
            }
        }
    }
    for (Vertex u : b.vertices)
        for (const auto& [w, mult] : g.neighbors(u))
            if (u < w && b.dist.count(w)) b.edges.emplace_back(u, w, mult);
    std::sort(b.edges.begin(), b.edges.end());
    return b;
}

/// Simple cycle: distinct vertices in cyclic order. Length 2 denotes a
/// parallel-edge pair; `multiplicity` carries the edge multiplicity there
/// (1 for longer cycles).
struct Cycle {
    std::vector<Vertex> vertices;
    int multiplicity = 1;

    int length() const { return static_cast<int>(vertices.size()); }
};

namespace detail {

// Cycles through `start` whose minimal vertex is `start`: DFS over paths with
// all internal vertices > start, closing back to start. Reflections are
// deduped by requiring path[1] < path.back().
inline void cycles_from(const Multigraph& g, Vertex start, int max_len,
                        std::vector<Vertex>& path, std::vector<char>& on_path,
                        std::vector<Cycle>& out) {
    Vertex u = path.back();
    for (const auto& [w, mult] : g.neighbors(u)) {
        (void)mult;
        if (w == start && path.size() >= 3) {
            if (path[1] < path.back()) {
                Cycle c;
                c.vertices = path;
                out.push_back(std::move(c));
            }
            continue;
        }
        if (w <= start || on_path[static_cast<std::size_t>(w)]) continue;
        if (static_cast<int>(path.size()) + 1 > max_len) continue;
        path.push_back(w);
        on_path[static_cast<std::size_t>(w)] = 1;
        cycles_from(g, start, max_len, path, on_path, out);
        on_path[static_cast<std::size_t>(w)] = 0;
        path.pop_back();
    }
}

}  // namespace detail

/// Every simple cycle of length <= max_len, each exactly once up to rotation
/// and reflection. A pair with multiplicity mu >= 2 yields one length-2 record
/// carrying mu.
inline std::vector<Cycle> enumerate_cycles(const Multigraph& g, int max_len) {
    if (max_len < 2) throw std::invalid_argument("enumerate_cycles: max_len must be >= 2");
    std::vector<Cycle> out;
    for (Vertex u = 1; u <= g.n(); ++u)
        for (const auto& [v, mult] : g.neighbors(u))
            if (u < v && mult >= 2) {
                Cycle c;
                c.vertices = {u, v};
                c.multiplicity = mult;
                out.push_back(std::move(c));
            }
    if (max_len >= 3) {
        std::vector<char> on_path(static_cast<std::size_t>(g.n()) + 1, 0);
        for (Vertex s = 1; s <= g.n(); ++s) {
            std::vector<Vertex> path = {s};
            on_path[static_cast<std::size_t>(s)] = 1;
            detail::cycles_from(g, s, max_len, path, on_path, out);
            on_path[static_cast<std::size_t>(s)] = 0;
        }
    }
    return out;
}

/// Count of vertex triples that are pairwise adjacent.
inline long triangle_count(const Multigraph& g) {
    long count = 0;
    for (Vertex u = 1; u <= g.n(); ++u)
        for (const auto& [v, mv] : g.neighbors(u)) {
            (void)mv;
            if (v <= u) continue;
            for (const auto& [w, mw] : g.neighbors(v)) {
                (void)mw;
                if (w <= v) continue;
                if (g.adjacent(u, w)) ++count;
            }
        }
    return count;
}

}  // namespace palab
