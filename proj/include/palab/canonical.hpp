#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "multigraph.hpp"

namespace palab {

/// Canonical code bytes; equal codes iff the rooted structures are isomorphic.
using CanonicalCode = std::string;

namespace detail {

struct LocalGraph {
    int n = 0;
    int root = 0;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, multiplicity)

    static LocalGraph from_subgraph(const RootedSubgraph& b) {
        LocalGraph lg;
        lg.n = (int)b.vertices.size();
        lg.root = 0;  // vertices[0] is the root by construction
        lg.adj = b.local_adjacency();
        return lg;
    }
};

// AHU fold: child entries "<mult>:<code>" sorted and wrapped.
inline std::string ahu_wrap(std::vector<std::string>& entries) {
    std::sort(entries.begin(), entries.end());
    std::string code = "(";
    for (const auto& e : entries) code += e;
    code += ")";
    return code;
}

inline std::string ahu_recurse(const LocalGraph& g, int v, int parent,
                               std::vector<char>& visited) {
    visited[v] = 1;
    std::vector<std::string> entries;
    for (const auto& [w, mult] : g.adj[v]) {
        if (w == parent) continue;
        if (visited[w])
            throw std::invalid_argument("canonical_rooted_tree: input contains a cycle");
        entries.push_back(std::to_string(mult) + ":" + ahu_recurse(g, w, v, visited));
    }
    return ahu_wrap(entries);
}

// Individualization-refinement canonical labeling for small decorated graphs.
// Vertex labels are fixed byte strings the canonical form must preserve.
class Canonizer {
public:
    Canonizer(const LocalGraph& g, std::vector<std::string> labels)
        : g_(g), labels_(std::move(labels)) {}

    std::string run() {
        // Initial partition: root flag + vertex label.
        std::vector<int> colors(g_.n, 0);
        std::vector<std::pair<std::string, int>> init;
        init.reserve(g_.n);
        for (int v = 0; v < g_.n; ++v)
            init.emplace_back((v == g_.root ? "R" : "-") + labels_[v], v);
        std::sort(init.begin(), init.end());
        int id = -1;
        const std::string* prev = nullptr;
        for (const auto& [key, v] : init) {
            if (!prev || key != *prev) {
                ++id;
                prev = &key;
            }
            colors[v] = id;
        }
        refine(colors);
        std::string best;
        search(std::move(colors), best);
        return best;
    }

private:
    void refine(std::vector<int>& colors) const {
        for (;;) {
            std::vector<std::pair<std::vector<long>, int>> sig(g_.n);
            for (int v = 0; v < g_.n; ++v) {
                std::vector<long> s{colors[v]};
                std::vector<long> nb;
                nb.reserve(g_.adj[v].size());
                for (const auto& [w, mult] : g_.adj[v])
                    nb.push_back((long)colors[w] * 1000003L + mult);
                std::sort(nb.begin(), nb.end());
                s.insert(s.end(), nb.begin(), nb.end());
                sig[v] = {std::move(s), v};
            }
            auto sorted = sig;
            std::sort(sorted.begin(), sorted.end());
            std::vector<int> next(g_.n);
            int id = -1;
            const std::vector<long>* prev = nullptr;
            for (const auto& [s, v] : sorted) {
                if (!prev || s != *prev) {
                    ++id;
                    prev = &s;
                }
                next[v] = id;
            }
            if (next == colors) return;
            colors = std::move(next);
        }
    }

    // Smallest color value with >= 2 members; -1 if the coloring is discrete.
    int target_cell(const std::vector<int>& colors) const {
        std::map<int, int> count;
        for (int c : colors) ++count[c];
        for (const auto& [c, k] : count)
            if (k >= 2) return c;
        return -1;
    }

    void search(std::vector<int> colors, std::string& best) const {
        int cell = target_cell(colors);
        if (cell < 0) {
            std::string code = emit(colors);
            if (best.empty() || code < best) best = std::move(code);
            return;
        }
        int max_color = *std::max_element(colors.begin(), colors.end());
        for (int v = 0; v < g_.n; ++v) {
            if (colors[v] != cell) continue;
            std::vector<int> branch = colors;
            branch[v] = max_color + 1;
            refine(branch);
            search(std::move(branch), best);
        }
    }

    std::string emit(const std::vector<int>& colors) const {
        std::vector<int> order(g_.n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return colors[a] < colors[b]; });
        std::vector<int> pos(g_.n);
        for (int i = 0; i < g_.n; ++i) pos[order[i]] = i;
        std::string code = "G" + std::to_string(g_.n) + ";";
        for (int i = 0; i < g_.n; ++i) {
            int v = order[i];
            code += (v == g_.root ? "R" : "-");
            code += labels_[v];
            std::vector<std::pair<int, int>> row;
            for (const auto& [w, mult] : g_.adj[v]) row.emplace_back(pos[w], mult);
            std::sort(row.begin(), row.end());
            for (const auto& [p, mult] : row)
                code += std::to_string(p) + "x" + std::to_string(mult) + ",";
            code += ";";
        }
        return code;
    }

    const LocalGraph& g_;
    std::vector<std::string> labels_;
};

}  // namespace detail

/// AHU canonical code for a rooted (multi)tree: invariant under child
/// reordering, injective on rooted isomorphism classes, edge multiplicities
/// carried as labels. Throws if the underlying simple graph has a cycle.
inline CanonicalCode canonical_rooted_tree(const RootedSubgraph& t) {
    if (t.vertices.empty()) throw std::invalid_argument("canonical_rooted_tree: empty input");
    detail::LocalGraph g = detail::LocalGraph::from_subgraph(t);
    std::vector<char> visited(g.n, 0);
    std::string code = "T" + detail::ahu_recurse(g, g.root, -1, visited);
    for (char v : visited)
        if (!v) throw std::invalid_argument("canonical_rooted_tree: input not connected");
    return code;
}

/// Canonical code for an arbitrary connected rooted subgraph. Tree inputs get
/// the AHU code ("T..."); cyclic inputs are stripped to their cycle skeleton
/// with AHU decorations, canonized exactly by individualization-refinement
/// ("G..."). Tree and non-tree codes never collide.
inline CanonicalCode canonical_rooted_graph(const RootedSubgraph& b) {
    if (b.vertices.empty()) throw std::invalid_argument("canonical_rooted_graph: empty input");
    if (b.is_tree()) return canonical_rooted_tree(b);

    detail::LocalGraph g = detail::LocalGraph::from_subgraph(b);
    int n = g.n;
    // Strip underlying-degree-1 vertices (never the root), folding each
    // removed branch into an AHU decoration on the vertex it hangs from.
    std::vector<std::vector<std::string>> entries(n);
    std::vector<int> simple_deg(n);
    std::vector<char> alive(n, 1);
    for (int v = 0; v < n; ++v) simple_deg[v] = (int)g.adj[v].size();
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (v != g.root && simple_deg[v] == 1) stack.push_back(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (!alive[v]) continue;
        int parent = -1, pmult = 0;
        for (const auto& [w, mult] : g.adj[v])
            if (alive[w]) {
                parent = w;
                pmult = mult;
            }
        if (parent < 0) continue;
        alive[v] = 0;
        std::string code = detail::ahu_wrap(entries[v]);
        entries[parent].push_back(std::to_string(pmult) + ":" + code);
        if (--simple_deg[parent] == 1 && parent != g.root) stack.push_back(parent);
    }

    detail::LocalGraph skel;
    std::vector<std::string> labels;
    std::vector<int> remap(n, -1);
    for (int v = 0; v < n; ++v)
        if (alive[v]) {
            remap[v] = skel.n++;
            labels.push_back(detail::ahu_wrap(entries[v]));
        }
    skel.adj.assign(skel.n, {});
    for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        for (const auto& [w, mult] : g.adj[v])
            if (alive[w]) skel.adj[remap[v]].emplace_back(remap[w], mult);
    }
    skel.root = remap[g.root];
    return detail::Canonizer(skel, std::move(labels)).run();
}

/// Minimum rooted code over all roots: canonical form of the unrooted
/// structure. Intended for small connected graphs (tests, histograms).
inline CanonicalCode canonical_unrooted(const Multigraph& g) {
    if (g.n() == 0) return "empty";
    CanonicalCode best;
    for (Vertex v = 1; v <= g.n(); ++v) {
        RootedSubgraph b = ball(g, v, g.n());
        if ((int)b.vertices.size() != g.n())
            throw std::invalid_argument("canonical_unrooted: graph must be connected");
        CanonicalCode code = canonical_rooted_graph(b);
        if (best.empty() || code < best) best = std::move(code);
    }
    return best;
}

}  // namespace palab
