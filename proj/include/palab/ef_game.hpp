#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "multigraph.hpp"

namespace palab {

/// True iff a_i -> b_i is well-defined, injective, and preserves equality and
/// edge multiplicity exactly in both directions.
inline bool partial_isomorphism_check(const Multigraph& A, const Multigraph& B,
                                      const std::vector<std::pair<Vertex, Vertex>>& pairs) {
    for (const auto& [a, b] : pairs) {
        if (a < 1 || a > A.n() || b < 1 || b > B.n()) return false;
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            const auto& [ai, bi] = pairs[i];
            const auto& [aj, bj] = pairs[j];
            if ((ai == aj) != (bi == bj)) return false;
            if (A.multiplicity(ai, aj) != B.multiplicity(bi, bj)) return false;
        }
    }
    return true;
}

namespace detail {

// Exhaustive minimax over the k-round game. Positions are sets of chosen
// pairs; the memo key is the sorted pair list plus rounds left. Spoiler
// never needs to repeat a chosen vertex (the position does not change and
// the game value is monotone in rounds), so repeats are skipped.
class EfSolver {
public:
    EfSolver(const Multigraph& A, const Multigraph& B) : A_(A), B_(B) {
        if (A.n() < 1 || B.n() < 1)
            throw std::invalid_argument("EF game: both structures must be nonempty");
    }

    bool duplicator_wins(std::vector<std::pair<Vertex, Vertex>> pairs, int rounds) {
        std::sort(pairs.begin(), pairs.end());
        return wins(pairs, rounds);
    }

    // One new pair against an already-consistent position.
    bool extends(const std::vector<std::pair<Vertex, Vertex>>& pairs, Vertex a, Vertex b) const {
        for (const auto& [ai, bi] : pairs) {
            if ((a == ai) != (b == bi)) return false;
            if (A_.multiplicity(a, ai) != B_.multiplicity(b, bi)) return false;
        }
        return true;
    }

    bool wins(const std::vector<std::pair<Vertex, Vertex>>& pairs, int rounds) {
        if (rounds == 0) return true;
        auto key = std::make_pair(rounds, pairs);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool result = true;
        for (int side = 0; side < 2 && result; ++side) {
            const Multigraph& S = side == 0 ? A_ : B_;
            for (Vertex v = 1; v <= S.n() && result; ++v) {
                if (chosen(pairs, side, v)) continue;
                if (!answered(pairs, rounds, side, v)) result = false;
            }
        }
        memo_.emplace(std::move(key), result);
        return result;
    }

    // Duplicator replies ordered by degree similarity (result-invariant).
    std::vector<Vertex> reply_order(int side, Vertex v) const {
        const Multigraph& S = side == 0 ? A_ : B_;
        const Multigraph& O = side == 0 ? B_ : A_;
        long dv = S.degree(v);
        std::vector<std::pair<long, Vertex>> cand;
        cand.reserve(O.n());
        for (Vertex w = 1; w <= O.n(); ++w)
            cand.emplace_back(std::labs(O.degree(w) - dv), w);
        std::sort(cand.begin(), cand.end());
        std::vector<Vertex> order;
        order.reserve(cand.size());
        for (const auto& [d, w] : cand) {
            (void)d;
            order.push_back(w);
        }
        return order;
    }

    bool answered(const std::vector<std::pair<Vertex, Vertex>>& pairs, int rounds, int side,
                  Vertex v) {
        for (Vertex w : reply_order(side, v)) {
            Vertex a = side == 0 ? v : w;
            Vertex b = side == 0 ? w : v;
            if (!extends(pairs, a, b)) continue;
            auto next = pairs;
            next.insert(std::upper_bound(next.begin(), next.end(), std::make_pair(a, b)),
                        {a, b});
            if (wins(next, rounds - 1)) return true;
        }
        return false;
    }

    static bool chosen(const std::vector<std::pair<Vertex, Vertex>>& pairs, int side, Vertex v) {
        for (const auto& [a, b] : pairs)
            if ((side == 0 ? a : b) == v) return true;
        return false;
    }

    const Multigraph& A_;
    const Multigraph& B_;
    std::map<std::pair<int, std::vector<std::pair<Vertex, Vertex>>>, bool> memo_;
};

}  // namespace detail

/// Duplicator has a winning strategy in the k-round game iff A and B agree on
/// all sentences of quantifier rank <= k. k = 0 is always true.
inline bool equivalent_k(const Multigraph& A, const Multigraph& B, int k) {
    if (k < 0) throw std::invalid_argument("equivalent_k: k must be >= 0");
    detail::EfSolver solver(A, B);
    return solver.duplicator_wins({}, k);
}

/// Spoiler strategy tree: the move at this position, and a subtree per legal
/// Duplicator reply. Replies that break the partial isomorphism immediately
/// have no entry. A plain winning move sequence does not always exist
/// (Spoiler may have to adapt to Duplicator), hence the tree.
struct SpoilerStrategy {
    int side = 0;  // 0: vertex chosen in A, 1: in B
    Vertex vertex = 0;
    std::map<Vertex, SpoilerStrategy> replies;

    int depth() const {
        int d = 0;
        for (const auto& [w, sub] : replies) {
            (void)w;
            d = std::max(d, sub.depth());
        }
        return 1 + d;
    }
};

namespace detail {

inline SpoilerStrategy build_witness(EfSolver& solver,
                                     const std::vector<std::pair<Vertex, Vertex>>& pairs,
                                     int rounds) {
    // Precondition: Duplicator loses this position.
    for (int side = 0; side < 2; ++side) {
        const Multigraph& S = side == 0 ? solver.A_ : solver.B_;
        const Multigraph& O = side == 0 ? solver.B_ : solver.A_;
        for (Vertex v = 1; v <= S.n(); ++v) {
            if (EfSolver::chosen(pairs, side, v)) continue;
            bool winning = true;
            for (Vertex w = 1; w <= O.n() && winning; ++w) {
                Vertex a = side == 0 ? v : w;
                Vertex b = side == 0 ? w : v;
                if (!solver.extends(pairs, a, b)) continue;
                auto next = pairs;
                next.insert(std::upper_bound(next.begin(), next.end(), std::make_pair(a, b)),
                            {a, b});
                if (solver.wins(next, rounds - 1)) winning = false;
            }
            if (!winning) continue;
            SpoilerStrategy node;
            node.side = side;
            node.vertex = v;
            for (Vertex w = 1; w <= O.n(); ++w) {
                Vertex a = side == 0 ? v : w;
                Vertex b = side == 0 ? w : v;
                if (!solver.extends(pairs, a, b)) continue;
                auto next = pairs;
                next.insert(std::upper_bound(next.begin(), next.end(), std::make_pair(a, b)),
                            {a, b});
                node.replies.emplace(w, build_witness(solver, next, rounds - 1));
            }
            return node;
        }
    }
    throw std::logic_error("build_witness: no winning Spoiler move at a losing position");
}

inline bool verify_witness_node(const Multigraph& A, const Multigraph& B,
                                const EfSolver& solver, const SpoilerStrategy& node,
                                const std::vector<std::pair<Vertex, Vertex>>& pairs,
                                int rounds) {
    if (rounds == 0) return false;  // Spoiler move promised but no rounds left
    const Multigraph& S = node.side == 0 ? A : B;
    const Multigraph& O = node.side == 0 ? B : A;
    if (node.vertex < 1 || node.vertex > S.n()) return false;
    for (Vertex w = 1; w <= O.n(); ++w) {
        Vertex a = node.side == 0 ? node.vertex : w;
        Vertex b = node.side == 0 ? w : node.vertex;
        if (!solver.extends(pairs, a, b)) continue;  // reply loses immediately
        auto it = node.replies.find(w);
        if (it == node.replies.end()) return false;  // surviving reply unanswered
        auto next = pairs;
        next.insert(std::upper_bound(next.begin(), next.end(), std::make_pair(a, b)), {a, b});
        if (!verify_witness_node(A, B, solver, it->second, next, rounds - 1)) return false;
    }
    return true;
}

}  // namespace detail

/// Adaptive Spoiler witness for a distinguishable pair; absent when the
/// graphs are k-equivalent. The returned strategy forces a Spoiler win
/// against every Duplicator response, within k moves.
inline std::optional<SpoilerStrategy> spoiler_witness(const Multigraph& A, const Multigraph& B,
                                                      int k) {
    detail::EfSolver solver(A, B);
    if (solver.duplicator_wins({}, k)) return std::nullopt;
    return detail::build_witness(solver, {}, k);
}

/// Replay a strategy against the full Duplicator response tree.
inline bool verify_witness(const Multigraph& A, const Multigraph& B, int k,
                           const SpoilerStrategy& strategy) {
    detail::EfSolver solver(A, B);
    return detail::verify_witness_node(A, B, solver, strategy, {}, k);
}

inline nlohmann::json witness_to_json(const SpoilerStrategy& node) {
    nlohmann::json j;
    j["side"] = node.side == 0 ? "A" : "B";
    j["vertex"] = node.vertex;
    nlohmann::json replies = nlohmann::json::object();
    for (const auto& [w, sub] : node.replies) replies[std::to_string(w)] = witness_to_json(sub);
    j["replies"] = std::move(replies);
    return j;
}

}  // namespace palab
