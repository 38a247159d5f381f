#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "canonical.hpp"
#include "fo_logic.hpp"
#include "generators.hpp"
#include "graph_io.hpp"
#include "multigraph.hpp"
#include "neighborhoods.hpp"
#include "polya_point.hpp"
#include "rng.hpp"

namespace palab {

struct ExperimentConfig {
    ModelConfig model;  // model.n is ignored; sizes come from n_grid
    std::vector<long> n_grid;
    long replicas = 100;
    int workers = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_grid.empty()) throw std::invalid_argument("ExperimentConfig: empty n_grid");
        for (std::size_t i = 1; i < n_grid.size(); ++i)
            if (n_grid[i] <= n_grid[i - 1])
                throw std::invalid_argument("ExperimentConfig: n_grid must be ascending");
        if (replicas < 1) throw std::invalid_argument("ExperimentConfig: replicas must be >= 1");
        if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
        ModelConfig m = model;
        m.n = std::max<long>(2, n_grid.front());
        m.validate();
    }
};

struct EstimateRow {
    long n;
    std::string stat;
    double estimate;
    double stderr_;
    long replicas;
};

/// Tagged Monte Carlo results. The CSV carries only the rows (reruns must be
/// byte-identical); wall time and config echo live in the JSON metadata.
struct EstimateTable {
    std::vector<EstimateRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add(long n, const std::string& stat, double estimate, double se, long replicas) {
        if (stat.find(',') != std::string::npos)
            throw std::invalid_argument("EstimateTable: stat names must be comma-free");
        if (!(se >= 0.0)) throw std::invalid_argument("EstimateTable: negative standard error");
        rows.push_back({n, stat, estimate, se, replicas});
    }

    void meta(const std::string& k, const std::string& v) { metadata.emplace_back(k, v); }

    std::string to_csv() const {
        std::ostringstream out;
        out << "n,stat,estimate,stderr,replicas\n";
        for (const auto& r : rows)
            out << r.n << ',' << r.stat << ',' << format_double(r.estimate) << ','
                << format_double(r.stderr_) << ',' << r.replicas << '\n';
        return out.str();
    }

    static EstimateTable from_csv(const std::string& text) {
        EstimateTable t;
        std::istringstream in(text);
        std::string line;
        if (!std::getline(in, line) || line != "n,stat,estimate,stderr,replicas")
            throw std::runtime_error("EstimateTable: bad CSV header");
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> f;
            std::size_t start = 0;
            for (std::size_t i = 0; i <= line.size(); ++i)
                if (i == line.size() || line[i] == ',') {
                    f.push_back(line.substr(start, i - start));
                    start = i + 1;
                }
            if (f.size() != 5) throw std::runtime_error("EstimateTable: bad CSV row: " + line);
            t.rows.push_back({std::stol(f[0]), f[1], std::stod(f[2]), std::stod(f[3]),
                              std::stol(f[4])});
        }
        return t;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["metadata"] = nlohmann::json::object();
        for (const auto& [k, v] : metadata) j["metadata"][k] = v;
        j["rows"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json row;
            row["n"] = r.n;
            row["stat"] = r.stat;
            row["estimate"] = r.estimate;
            row["stderr"] = r.stderr_;
            row["replicas"] = r.replicas;
            j["rows"].push_back(std::move(row));
        }
        return j;
    }
};

namespace detail {

/// Static partition of replica indices over workers; results land in
/// per-replica slots, so the outcome is independent of the worker count.
template <typename T, typename Fn>
std::vector<T> map_replicas(long replicas, int workers, Fn fn) {
    std::vector<T> results(replicas);
    if (workers <= 1 || replicas == 1) {
        for (long i = 0; i < replicas; ++i) results[i] = fn(i);
        return results;
    }
    int w = std::min<long>(workers, replicas);
    std::vector<std::thread> threads;
    threads.reserve(w);
    long chunk = replicas / w, extra = replicas % w;
    long begin = 0;
    for (int t = 0; t < w; ++t) {
        long end = begin + chunk + (t < extra ? 1 : 0);
        threads.emplace_back([&results, &fn, begin, end]() {
            for (long i = begin; i < end; ++i) results[i] = fn(i);
        });
        begin = end;
    }
    for (auto& th : threads) th.join();
    return results;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    double variance = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe out;
    if (xs.empty()) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / xs.size();
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.variance = ss / (xs.size() - 1);
    out.se = std::sqrt(out.variance / xs.size());
    return out;
}

inline void echo_config(EstimateTable& t, const ExperimentConfig& cfg) {
    t.meta("model", to_string(cfg.model.kind));
    t.meta("alpha", format_double(cfg.model.alpha));
    t.meta("m", std::to_string(cfg.model.m));
    std::string grid;
    for (long n : cfg.n_grid) grid += (grid.empty() ? "" : ",") + std::to_string(n);
    t.meta("ngrid", grid);
    t.meta("replicas", std::to_string(cfg.replicas));
    t.meta("seed", std::to_string(cfg.seed));
    t.meta("workers", std::to_string(cfg.workers));
    t.meta("version", "palab 0.1.0");
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

enum : std::uint64_t {
    kOpSentence = 1,
    kOpCycleRate = 2,
    kOpDegrees = 3,
    kOpLocalLimit = 4,
    kOpProfile = 5,
};

inline Multigraph replica_graph(const ExperimentConfig& cfg, std::uint64_t op, long n,
                                long replica) {
    ModelConfig mc = cfg.model;
    mc.n = n;
    mc.seed = derive_seed(cfg.seed, op, (std::uint64_t)n, (std::uint64_t)replica);
    return generate(mc);
}

/// Union of B_r balls around `roots`, relabeled compactly into a Multigraph.
inline Multigraph induced_union_balls(const Multigraph& g, const std::vector<Vertex>& roots,
                                      int r) {
    std::map<Vertex, int> dist = bfs_from_set(g, roots, r);
    std::map<Vertex, Vertex> remap;
    for (const auto& [v, d] : dist) {
        (void)d;
        Vertex next = (Vertex)remap.size() + 1;
        remap[v] = next;
    }
    Multigraph out((int)remap.size(), g.m(), g.meta());
    for (const auto& [v, idx] : remap)
        for (const auto& [w, mult] : g.neighbors(v)) {
            auto it = remap.find(w);
            if (it == remap.end() || v >= w) continue;
            for (int i = 0; i < mult; ++i) out.add_edge(it->second, idx);
        }
    out.finalize();
    return out;
}

}  // namespace detail

/// P(G_n |= sentence) per n, with binomial standard errors. The optional
/// locality mode evaluates on the union of sampled balls instead of the full
/// graph and is flagged in the metadata as an approximation.
struct SentenceOptions {
    std::optional<int> locality_radius;
    long locality_samples = 32;
    double cost_budget = 2e10;  // evaluation is exponential in quantifier rank
};

inline EstimateTable estimate_sentence_probability(const ExperimentConfig& cfg,
                                                   const std::string& sentence_text,
                                                   SentenceOptions opts = {}) {
    cfg.validate();
    detail::Stopwatch clock;
    fo::FormulaPtr sentence = fo::parse_sentence(sentence_text);
    int qr = fo::quantifier_rank(sentence);
    int nodes = fo::node_count(sentence);
    if (!opts.locality_radius) {
        double cost = 0.0;
        for (long n : cfg.n_grid) cost += (double)cfg.replicas * nodes * std::pow((double)n, qr);
        if (cost > opts.cost_budget)
            throw std::runtime_error(
                "estimate_sentence_probability: infeasible at rank " + std::to_string(qr) +
                ": estimated cost " + format_double(cost) + " exceeds budget " +
                format_double(opts.cost_budget) +
                "; shrink n_grid/replicas or use locality mode");
    }
    EstimateTable table;
    detail::echo_config(table, cfg);
    table.meta("sentence", fo::print(sentence));
    table.meta("qr", std::to_string(qr));
    table.meta("mode", opts.locality_radius
                           ? "locality-approximation r=" + std::to_string(*opts.locality_radius)
                           : "full-graph");
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        long n = cfg.n_grid[ni];
        auto sat = detail::map_replicas<char>(cfg.replicas, cfg.workers, [&](long rep) -> char {
            Multigraph g = detail::replica_graph(cfg, detail::kOpSentence, n, rep);
            if (opts.locality_radius) {
                Rng rng(derive_seed(cfg.seed, detail::kOpSentence + 100, (std::uint64_t)n,
                                    (std::uint64_t)rep));
                std::vector<Vertex> roots;
                for (long i = 0; i < opts.locality_samples; ++i)
                    roots.push_back((Vertex)(rng.uniform_int(g.n()) + 1));
                Multigraph local = detail::induced_union_balls(g, roots, *opts.locality_radius);
                return fo::evaluate(local, sentence) ? 1 : 0;
            }
            return fo::evaluate(g, sentence) ? 1 : 0;
        });
        long hits = 0;
        for (char s : sat) hits += s;
        double p = (double)hits / (double)cfg.replicas;
        double se = std::sqrt(p * (1.0 - p) / (double)cfg.replicas);
        table.add(n, "p_sat", p, se, cfg.replicas);
    }
    table.meta("wall_ms", std::to_string(clock.ms()));
    return table;
}

/// Windowed estimate of the per-step creation rate of cycles of length
/// exactly l: counts at n(1-delta) and n, divided by the window width.
/// Reported raw and scaled by n and n/log n.
inline EstimateTable estimate_cycle_rate(const ExperimentConfig& cfg, int l,
                                         double window_delta = 0.1) {
    cfg.validate();
    if (l < 2) throw std::invalid_argument("estimate_cycle_rate: l must be >= 2");
    detail::Stopwatch clock;
    EstimateTable table;
    detail::echo_config(table, cfg);
    table.meta("l", std::to_string(l));
    table.meta("window_delta", format_double(window_delta));
    auto count_exact = [&](const Multigraph& g) -> long {
        long c = 0;
        for (const Cycle& cyc : enumerate_cycles(g, l))
            if (cyc.length() == l) ++c;
        return c;
    };
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        long n = cfg.n_grid[ni];
        long n0 = std::max<long>(2, (long)std::llround((double)n * (1.0 - window_delta)));
        if (n0 >= n) throw std::invalid_argument("estimate_cycle_rate: window collapsed");
        auto rates =
            detail::map_replicas<double>(cfg.replicas, cfg.workers, [&](long rep) -> double {
                std::uint64_t s =
                    derive_seed(cfg.seed, detail::kOpCycleRate, (std::uint64_t)n,
                                (std::uint64_t)rep);
                Grower grower(cfg.model.kind, cfg.model.m, cfg.model.alpha, s);
                grower.grow_to(n0);
                long c0 = (l == 3) ? grower.triangles() : count_exact(grower.snapshot());
                grower.grow_to(n);
                long c1 = (l == 3) ? grower.triangles() : count_exact(grower.snapshot());
                return (double)(c1 - c0) / (double)(n - n0);
            });
        auto stat = detail::mean_se(rates);
        table.add(n, "rho_l", stat.mean, stat.se, cfg.replicas);
        table.add(n, "n_rho_l", stat.mean * n, stat.se * n, cfg.replicas);
        double scale = (double)n / std::log((double)n);
        table.add(n, "n_over_logn_rho_l", stat.mean * scale, stat.se * scale, cfg.replicas);
    }
    table.meta("wall_ms", std::to_string(clock.ms()));
    return table;
}

/// Empirical mean and variance of D_n(k) for each k, with the paper-side
/// comparison values: the alpha=0 lower bound m(sqrt(n/k)-1)(1-1/k) and
/// variance shape n/k^2 + sqrt(n/k), or the alpha=1 harmonic mean
/// m(1 + H_{n-1} - H_{k-1}).
inline EstimateTable degree_profile(const ExperimentConfig& cfg, const std::vector<long>& ks) {
    cfg.validate();
    if (ks.empty()) throw std::invalid_argument("degree_profile: empty vertex list");
    detail::Stopwatch clock;
    EstimateTable table;
    detail::echo_config(table, cfg);
    auto harmonic = [](long n) {
        double h = 0.0;
        for (long i = 1; i <= n; ++i) h += 1.0 / (double)i;
        return h;
    };
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        long n = cfg.n_grid[ni];
        for (long k : ks)
            if (k < 1 || k > n)
                throw std::invalid_argument("degree_profile: vertex index outside [1, n]");
        auto degs = detail::map_replicas<std::vector<double>>(
            cfg.replicas, cfg.workers, [&](long rep) {
                std::uint64_t s = derive_seed(cfg.seed, detail::kOpDegrees, (std::uint64_t)n,
                                              (std::uint64_t)rep);
                Grower grower(cfg.model.kind, cfg.model.m, cfg.model.alpha, s);
                grower.grow_to(n);
                std::vector<double> row;
                row.reserve(ks.size());
                for (long k : ks) row.push_back((double)grower.degree((Vertex)k));
                return row;
            });
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            long k = ks[ki];
            std::vector<double> xs(cfg.replicas);
            for (long rep = 0; rep < cfg.replicas; ++rep) xs[rep] = degs[rep][ki];
            auto stat = detail::mean_se(xs);
            std::string tag = "[k=" + std::to_string(k) + "]";
            table.add(n, "mean_deg" + tag, stat.mean, stat.se, cfg.replicas);
            double var_se = stat.variance * std::sqrt(2.0 / std::max<long>(1, cfg.replicas - 1));
            table.add(n, "var_deg" + tag, stat.variance, var_se, cfg.replicas);
            if (cfg.model.alpha == 0.0) {
                double lb = cfg.model.m * (std::sqrt((double)n / k) - 1.0) * (1.0 - 1.0 / k);
                table.add(n, "lb_mean" + tag, lb, 0.0, cfg.replicas);
                double shape = (double)n / ((double)k * k) + std::sqrt((double)n / k);
                table.add(n, "var_shape" + tag, shape, 0.0, cfg.replicas);
            } else if (cfg.model.alpha == 1.0) {
                double ua = cfg.model.m * (1.0 + harmonic(n - 1) - harmonic(k - 1));
                table.add(n, "ua_mean" + tag, ua, 0.0, cfg.replicas);
            }
        }
    }
    table.meta("wall_ms", std::to_string(clock.ms()));
    return table;
}

namespace detail {

struct CodeHistogram {
    std::map<CanonicalCode, int> ids;
    std::vector<long> counts;
    std::vector<int> samples;  // interned sequence, for bootstrap

    void add(const CanonicalCode& code) {
        auto [it, fresh] = ids.emplace(code, (int)ids.size());
        if (fresh) counts.push_back(0);
        counts[it->second] += 1;
        samples.push_back(it->second);
    }
};

// TV over classes whose empirical mass reaches `floor` on either side.
inline double truncated_tv(const std::map<CanonicalCode, double>& p,
                           const std::map<CanonicalCode, double>& q, double floor) {
    double tv = 0.0;
    for (const auto& [code, mass] : p) {
        auto it = q.find(code);
        double qm = it == q.end() ? 0.0 : it->second;
        if (mass >= floor || qm >= floor) tv += std::abs(mass - qm);
    }
    for (const auto& [code, qm] : q)
        if (!p.count(code) && qm >= floor) tv += qm;
    return 0.5 * tv;
}

inline std::map<CanonicalCode, double> normalized(const CodeHistogram& h) {
    std::map<CanonicalCode, double> out;
    double total = (double)h.samples.size();
    for (const auto& [code, id] : h.ids) out[code] = (double)h.counts[id] / total;
    return out;
}

}  // namespace detail

/// TV distance between the neighborhood-code distribution of B_r(v) for a
/// uniform vertex of G_n and the depth-r local limit tree code distribution,
/// bootstrap standard errors. Classes below mass `mass_floor` are truncated.
inline EstimateTable local_limit_check(const ExperimentConfig& cfg, int r, long samples,
                                       double mass_floor = 1e-3, int bootstrap_rounds = 64) {
    cfg.validate();
    if (r < 0 || r > 2)
        throw std::invalid_argument("local_limit_check: r must lie in [0, 2]");
    if (samples < 1) throw std::invalid_argument("local_limit_check: samples must be >= 1");
    detail::Stopwatch clock;
    EstimateTable table;
    detail::echo_config(table, cfg);
    table.meta("r", std::to_string(r));
    table.meta("samples", std::to_string(samples));
    table.meta("mass_floor", format_double(mass_floor));
    ModelConstants mc = model_constants(cfg.model.alpha);

    // Tree-side sample, shared across the grid (the limit does not depend on n).
    detail::CodeHistogram tree_hist;
    {
        auto codes = detail::map_replicas<CanonicalCode>(
            samples, cfg.workers, [&](long i) -> CanonicalCode {
                Rng rng(derive_seed(cfg.seed, detail::kOpLocalLimit + 500, (std::uint64_t)i));
                PolyaPointTree t = sample_polya_point_tree(mc, cfg.model.m, r, std::nullopt, rng);
                return polya_point_code(t);
            });
        for (auto& c : codes) tree_hist.add(c);
    }
    auto tree_dist = detail::normalized(tree_hist);

    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        long n = cfg.n_grid[ni];
        long per_graph = (samples + cfg.replicas - 1) / cfg.replicas;
        auto chunks = detail::map_replicas<std::vector<CanonicalCode>>(
            cfg.replicas, cfg.workers, [&](long rep) {
                Multigraph g = detail::replica_graph(cfg, detail::kOpLocalLimit, n, rep);
                Rng rng(derive_seed(cfg.seed, detail::kOpLocalLimit + 900, (std::uint64_t)n,
                                    (std::uint64_t)rep));
                std::vector<CanonicalCode> codes;
                codes.reserve(per_graph);
                for (long i = 0; i < per_graph; ++i) {
                    Vertex v = (Vertex)(rng.uniform_int(g.n()) + 1);
                    codes.push_back(canonical_rooted_graph(ball(g, v, r)));
                }
                return codes;
            });
        detail::CodeHistogram graph_hist;
        long taken = 0;
        for (const auto& chunk : chunks)
            for (const auto& code : chunk) {
                if (taken == samples) break;
                graph_hist.add(code);
                ++taken;
            }
        auto graph_dist = detail::normalized(graph_hist);
        double tv = detail::truncated_tv(graph_dist, tree_dist, mass_floor);

        // Bootstrap both sides for the error bar.
        std::vector<double> boots;
        Rng brng(derive_seed(cfg.seed, detail::kOpLocalLimit + 1300, (std::uint64_t)n));
        std::vector<CanonicalCode> tree_codes_by_id(tree_hist.ids.size());
        for (const auto& [code, id] : tree_hist.ids) tree_codes_by_id[id] = code;
        std::vector<CanonicalCode> graph_codes_by_id(graph_hist.ids.size());
        for (const auto& [code, id] : graph_hist.ids) graph_codes_by_id[id] = code;
        for (int b = 0; b < bootstrap_rounds; ++b) {
            std::map<CanonicalCode, double> bp, bq;
            long ng = (long)graph_hist.samples.size();
            long nt = (long)tree_hist.samples.size();
            for (long i = 0; i < ng; ++i)
                bp[graph_codes_by_id[graph_hist.samples[brng.uniform_int(ng)]]] += 1.0 / ng;
            for (long i = 0; i < nt; ++i)
                bq[tree_codes_by_id[tree_hist.samples[brng.uniform_int(nt)]]] += 1.0 / nt;
            boots.push_back(detail::truncated_tv(bp, bq, mass_floor));
        }
        auto bstat = detail::mean_se(boots);
        double se = std::sqrt(bstat.variance);
        table.add(n, "tv", tv, se, cfg.replicas);
    }
    table.meta("wall_ms", std::to_string(clock.ms()));
    return table;
}

/// Mean Lambda_L(G_n) per canonical class over replicas, with per-class
/// stationary/diverging flags from the slope of mean count against n
/// (3-sigma). Class codes are aliased L00, L01, ... in lexicographic order;
/// the mapping is echoed in the metadata.
inline EstimateTable cycle_profile_census(const ExperimentConfig& cfg, int r) {
    cfg.validate();
    if (r < 1) throw std::invalid_argument("cycle_profile_census: r must be >= 1");
    detail::Stopwatch clock;
    EstimateTable table;
    detail::echo_config(table, cfg);
    table.meta("r", std::to_string(r));

    std::vector<std::map<CanonicalCode, detail::MeanSe>> per_n(cfg.n_grid.size());
    std::vector<detail::MeanSe> totals(cfg.n_grid.size());
    std::map<CanonicalCode, CycleComponent::Kind> kinds;
    std::map<CanonicalCode, long> sizes;

    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        long n = cfg.n_grid[ni];
        auto profiles = detail::map_replicas<CycleProfile>(
            cfg.replicas, cfg.workers, [&](long rep) {
                Multigraph g = detail::replica_graph(cfg, detail::kOpProfile, n, rep);
                return cycle_profile(g, r);
            });
        std::map<CanonicalCode, std::vector<double>> counts;
        std::vector<double> total_counts(cfg.replicas, 0.0);
        for (long rep = 0; rep < cfg.replicas; ++rep) {
            for (const auto& [code, info] : profiles[rep].classes) {
                auto& xs = counts[code];
                xs.resize(cfg.replicas, 0.0);
                xs[rep] = (double)info.count;
                total_counts[rep] += (double)info.count;
                if (!kinds.count(code)) {
                    kinds[code] = info.kind;
                    sizes[code] = info.size;
                }
            }
        }
        for (auto& [code, xs] : counts) {
            xs.resize(cfg.replicas, 0.0);
            per_n[ni][code] = detail::mean_se(xs);
        }
        totals[ni] = detail::mean_se(total_counts);
    }

    std::vector<CanonicalCode> all_codes;
    for (const auto& [code, kind] : kinds) {
        (void)kind;
        all_codes.push_back(code);
    }
    std::sort(all_codes.begin(), all_codes.end());
    std::map<CanonicalCode, std::string> alias;
    for (std::size_t i = 0; i < all_codes.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "L%02u", (unsigned)i);
        alias[all_codes[i]] = buf;
        table.meta(std::string("class:") + buf,
                   (kinds[all_codes[i]] == CycleComponent::Kind::Isolated ? "isolated|"
                                                                          : "multicycle|") +
                       std::to_string(sizes[all_codes[i]]) + "|" + all_codes[i]);
    }

    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        long n = cfg.n_grid[ni];
        table.add(n, "components_total", totals[ni].mean, totals[ni].se, cfg.replicas);
        for (const auto& code : all_codes) {
            auto it = per_n[ni].find(code);
            detail::MeanSe s = it == per_n[ni].end() ? detail::MeanSe{} : it->second;
            table.add(n, "count[" + alias[code] + "]", s.mean, s.se, cfg.replicas);
        }
    }

    // Diverging iff the WLS slope of mean count vs n exceeds 3 sigma.
    if (cfg.n_grid.size() >= 2) {
        for (const auto& code : all_codes) {
            double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
            for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
                auto it = per_n[ni].find(code);
                detail::MeanSe s = it == per_n[ni].end() ? detail::MeanSe{} : it->second;
                double se = std::max(s.se, 1e-9);
                double w = 1.0 / (se * se);
                double x = (double)cfg.n_grid[ni];
                sw += w;
                swx += w * x;
                swy += w * s.mean;
                swxx += w * x * x;
                swxy += w * x * s.mean;
            }
            double denom = sw * swxx - swx * swx;
            if (denom <= 0.0) continue;
            double slope = (sw * swxy - swx * swy) / denom;
            double slope_se = std::sqrt(sw / denom);
            double t = slope / std::max(slope_se, 1e-300);
            table.add(0, "diverging[" + alias[code] + "]", t > 3.0 ? 1.0 : 0.0, std::abs(t),
                      cfg.replicas);
        }
    }
    table.meta("wall_ms", std::to_string(clock.ms()));
    return table;
}

}  // namespace palab
