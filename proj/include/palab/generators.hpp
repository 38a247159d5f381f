#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "multigraph.hpp"
#include "rng.hpp"

namespace palab {

enum class ModelKind { Classical, Sequential };

inline std::string to_string(ModelKind k) {
    return k == ModelKind::Classical ? "classical" : "sequential";
}

inline ModelKind model_kind_from(const std::string& s) {
    if (s == "classical") return ModelKind::Classical;
    if (s == "sequential") return ModelKind::Sequential;
    throw std::invalid_argument("unknown model kind: " + s);
}

struct ModelConfig {
    ModelKind kind = ModelKind::Sequential;
    long n = 2;
    int m = 1;
    double alpha = 0.0;  // uniform-mixing weight
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw std::invalid_argument("ModelConfig: n must be >= 1");
        if (m < 1) throw std::invalid_argument("ModelConfig: m must be >= 1");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("ModelConfig: alpha must lie in [0,1]");
    }
};

/// u = alpha/(1-alpha) and chi = (1+2u)/(2+2u); chi = 1 at alpha = 1.
struct ModelConstants {
    double u;
    double chi;
};

inline ModelConstants model_constants(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("model_constants: alpha must lie in [0,1]");
    if (alpha == 1.0)
        return {std::numeric_limits<double>::infinity(), 1.0};
    double u = alpha / (1.0 - alpha);
    return {u, (1.0 + 2.0 * u) / (2.0 + 2.0 * u)};
}

/// Incremental attachment-graph builder. Keeps the multiplicity-weighted
/// endpoint list so degree-proportional draws are O(1), plus an edge set for
/// incremental triangle counting. A round for vertex v consumes RNG draws in
/// a fixed order, so runs are reproducible from (config, seed) alone.
class Grower {
public:
    Grower(ModelKind kind, int m, double alpha, std::uint64_t seed)
        : kind_(kind), m_(m), alpha_(alpha), rng_(seed), n_(1) {
        if (m < 1) throw std::invalid_argument("Grower: m must be >= 1");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("Grower: alpha must lie in [0,1]");
        edges_.reserve(1024);
    }

    long current_n() const { return n_; }
    long triangles() const { return triangles_; }

    long degree(Vertex v) const {
        return degree_.size() > (std::size_t)v ? degree_[v] : 0;
    }

    void grow_to(long n) {
        while (n_ < n) add_vertex();
    }

    /// Finalized copy of the current graph.
    Multigraph snapshot() const {
        GraphMeta meta{to_string(kind_), alpha_, rng_.seed()};
        Multigraph g((int)n_, m_, meta);
        for (const auto& [creator, target] : edges_) g.add_edge(creator, target);
        g.finalize();
        return g;
    }

private:
    void add_vertex() {
        long v = ++n_;
        if ((long)degree_.size() < v + 1) degree_.resize(v + 1, 0);
        targets_.clear();
        if (v == 2) {
            // Only one possible target; Eq.-level formulas are 0/0 here.
            for (int i = 0; i < m_; ++i) targets_.push_back(1);
        } else if (alpha_ == 1.0) {
            // Uniform attachment: classical and sequential agree edge by edge.
            for (int i = 0; i < m_; ++i) targets_.push_back(uniform_target(v));
        } else if (kind_ == ModelKind::Classical) {
            // Degrees frozen during the round: only endpoints of G_{v-1}.
            std::size_t frozen = endpoints_.size();
            for (int i = 0; i < m_; ++i) {
                Vertex t = rng_.bernoulli(alpha_)
                               ? uniform_target(v)
                               : endpoints_[(std::size_t)rng_.uniform_int((long)frozen)];
                targets_.push_back(t);
            }
        } else {
            // Sequential: degrees update after every edge. With the new vertex
            // labelled v, the i-th edge sees mass 2m(v-2)+i-1 and
            // alpha_v(i) = alpha 2m(v-1) / (2m(v-2) + 2m alpha + (1-alpha)(i-1)).
            for (int i = 1; i <= m_; ++i) {
                double denom = 2.0 * m_ * (double)(v - 2) + 2.0 * m_ * alpha_ +
                               (1.0 - alpha_) * (double)(i - 1);
                double a_i = alpha_ * 2.0 * m_ * (double)(v - 1) / denom;
                if (a_i > 1.0) a_i = 1.0;  // clamp; the paper's bound assumes n large
                Vertex t;
                if (rng_.bernoulli(a_i)) {
                    t = uniform_target(v);
                } else {
                    t = endpoints_[(std::size_t)rng_.uniform_int((long)endpoints_.size())];
                }
                targets_.push_back(t);
                endpoints_.push_back(t);
            }
        }
        commit_round((Vertex)v);
    }

    Vertex uniform_target(long v) { return (Vertex)(rng_.uniform_int(v - 1) + 1); }

    void commit_round(Vertex v) {
        // New triangles all pass through v: one per adjacent pair of distinct targets.
        distinct_.clear();
        for (Vertex t : targets_)
            if (std::find(distinct_.begin(), distinct_.end(), t) == distinct_.end())
                distinct_.push_back(t);
        for (std::size_t i = 0; i < distinct_.size(); ++i)
            for (std::size_t j = i + 1; j < distinct_.size(); ++j)
                if (edge_set_.count(edge_key(distinct_[i], distinct_[j]))) ++triangles_;

        bool seq_endpoints_done = (kind_ == ModelKind::Sequential && alpha_ != 1.0 && v > 2);
        for (Vertex t : targets_) {
            edges_.emplace_back(v, t);
            edge_set_.insert(edge_key(v, t));
            degree_[t] += 1;
            degree_[v] += 1;
            if (!seq_endpoints_done) endpoints_.push_back(t);
        }
        for (int i = 0; i < m_; ++i) endpoints_.push_back(v);
    }

    static std::uint64_t edge_key(Vertex a, Vertex b) {
        if (a > b) std::swap(a, b);
        return ((std::uint64_t)a << 32) | (std::uint64_t)b;
    }

    ModelKind kind_;
    int m_;
    double alpha_;
    Rng rng_;
    long n_;
    long triangles_ = 0;
    std::vector<std::pair<Vertex, Vertex>> edges_;
    std::vector<Vertex> endpoints_;  // one entry per unit of degree mass
    std::vector<long> degree_;
    std::vector<Vertex> targets_;
    std::vector<Vertex> distinct_;
    std::unordered_set<std::uint64_t> edge_set_;
};

inline Multigraph generate(const ModelConfig& cfg) {
    cfg.validate();
    Grower grower(cfg.kind, cfg.m, cfg.alpha, cfg.seed);
    grower.grow_to(cfg.n);
    return grower.snapshot();
}

inline Multigraph generate_classical(ModelConfig cfg) {
    cfg.kind = ModelKind::Classical;
    return generate(cfg);
}

inline Multigraph generate_sequential(ModelConfig cfg) {
    cfg.kind = ModelKind::Sequential;
    return generate(cfg);
}

/// Urn representation: psi_1 = 1, psi_i ~ Beta(m+2mu, (2i-3)m+2mu(i-1)),
/// phi_i = psi_i * prod_{j>i} (1-psi_j), S_l = sum_{i<=l} phi_i.
struct PolyaWeights {
    std::vector<double> psi;  // 1-based; psi[0] unused
    std::vector<double> phi;
    std::vector<double> S;  // S[0] = 0, S[l] = sum_{i<=l} phi_i

    int n() const { return (int)psi.size() - 1; }

    void validate() const {
        int nn = n();
        if (std::abs(S[nn] - 1.0) > 1e-12)
            throw std::runtime_error("PolyaWeights: S_n deviates from 1 beyond 1e-12");
        for (int l = 1; l <= nn; ++l) {
            if (!(phi[l] > 0.0)) throw std::runtime_error("PolyaWeights: nonpositive phi");
            if (!(S[l] > S[l - 1])) throw std::runtime_error("PolyaWeights: S not increasing");
        }
    }
};

inline PolyaWeights sample_polya_weights(int n, int m, double alpha, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_polya_weights: n must be >= 1");
    if (m < 1) throw std::invalid_argument("sample_polya_weights: m must be >= 1");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument(
            "sample_polya_weights: alpha = 1 is degenerate; use uniform_weights");
    double u = model_constants(alpha).u;
    PolyaWeights w;
    w.psi.assign(n + 1, 0.0);
    w.phi.assign(n + 1, 0.0);
    w.S.assign(n + 1, 0.0);
    w.psi[1] = 1.0;  // beta parameters are invalid at i = 1; S_n = 1 forces this
    for (int i = 2; i <= n; ++i) {
        double a = m + 2.0 * m * u;
        double b = (2.0 * i - 3.0) * m + 2.0 * m * u * (i - 1.0);
        w.psi[i] = rng.beta(a, b);
    }
    double tail = 1.0;
    for (int i = n; i >= 1; --i) {
        w.phi[i] = w.psi[i] * tail;
        tail *= (1.0 - w.psi[i]);
    }
    // Compensated prefix sums keep S_n = 1 at 1e-12.
    double sum = 0.0, comp = 0.0;
    for (int l = 1; l <= n; ++l) {
        double y = w.phi[l] - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        w.S[l] = sum;
    }
    w.validate();
    return w;
}

inline PolyaWeights sample_polya_weights(const ModelConfig& cfg, Rng& rng) {
    return sample_polya_weights((int)cfg.n, cfg.m, cfg.alpha, rng);
}

/// Degenerate uniform weights phi_i = 1/n (the alpha = 1 case).
inline PolyaWeights uniform_weights(int n) {
    if (n < 1) throw std::invalid_argument("uniform_weights: n must be >= 1");
    PolyaWeights w;
    w.psi.assign(n + 1, 0.0);
    w.phi.assign(n + 1, 1.0 / n);
    w.S.assign(n + 1, 0.0);
    w.psi[1] = 1.0;
    w.phi[0] = 0.0;
    for (int l = 1; l <= n; ++l) w.S[l] = (double)l / n;
    return w;
}

/// Connect j < l to l when U_{l,i} in [S_{j-1}, S_j), U_{l,i} uniform on
/// [0, S_{l-1}). Same law as the sequential model.
inline Multigraph generate_from_weights(const PolyaWeights& w, int m, std::uint64_t seed,
                                        GraphMeta meta = {}) {
    int n = w.n();
    if (meta.model.empty() || meta.model == "none") meta.model = "urn";
    meta.seed = seed;
    Multigraph g(n, m, meta);
    Rng rng(seed);
    for (int l = 2; l <= n; ++l) {
        for (int i = 0; i < m; ++i) {
            double u = rng.uniform(w.S[l - 1]);
            auto it = std::upper_bound(w.S.begin() + 1, w.S.begin() + l, u);
            int j = (int)(it - w.S.begin());
            g.add_edge(l, j);
        }
    }
    g.finalize();
    return g;
}

}  // namespace palab
