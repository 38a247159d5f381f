// Command-line front end: graph generation, formula evaluation, EF games,
// cycle statistics, chain simulators, and the Monte Carlo experiment suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "palab/chains.hpp"
#include "palab/ef_game.hpp"
#include "palab/experiments.hpp"
#include "palab/fo_logic.hpp"
#include "palab/generators.hpp"
#include "palab/graph_io.hpp"
#include "palab/multigraph.hpp"
#include "palab/neighborhoods.hpp"

namespace {

std::vector<long> parse_grid(const std::string& text) {
    std::vector<long> grid;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            std::string tok = text.substr(start, i - start);
            start = i + 1;
            if (tok.empty()) continue;
            grid.push_back((long)std::llround(std::stod(tok)));
        }
    }
    if (grid.empty()) throw CLI::ValidationError("--ngrid", "empty size grid");
    return grid;
}

std::vector<long> parse_longs(const std::string& text) {
    std::vector<long> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i)
        if (i == text.size() || text[i] == ',') {
            std::string tok = text.substr(start, i - start);
            start = i + 1;
            if (!tok.empty()) out.push_back(std::stol(tok));
        }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

struct XpCommon {
    std::string model = "sequential";
    double alpha = 0.0;
    int m = 1;
    std::string ngrid = "1e3,1e4,1e5";
    long replicas = 100;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out = "xp.csv";

    palab::ExperimentConfig to_config() const {
        palab::ExperimentConfig cfg;
        cfg.model.kind = palab::model_kind_from(model);
        cfg.model.alpha = alpha;
        cfg.model.m = m;
        cfg.n_grid = parse_grid(ngrid);
        cfg.replicas = replicas;
        cfg.seed = seed;
        cfg.workers = workers;
        return cfg;
    }
};

void add_common(CLI::App* cmd, XpCommon& common) {
    cmd->add_option("--model", common.model, "classical|sequential");
    cmd->add_option("--alpha", common.alpha, "uniform-mixing weight in [0,1]");
    cmd->add_option("--m", common.m, "edges per new vertex");
    cmd->add_option("--ngrid", common.ngrid, "comma-separated graph sizes, e.g. 1e3,1e4,1e5");
    cmd->add_option("--replicas", common.replicas, "replicas per size");
    cmd->add_option("--seed", common.seed, "base RNG seed");
    cmd->add_option("--workers", common.workers, "parallel workers");
    cmd->add_option("--out", common.out, "CSV output path (JSON mirror at <out>.json)");
    cmd->set_config("--config", "", "flat key=value config file; flags override");
}

void emit_table(const palab::EstimateTable& table, const std::string& out_path) {
    write_file(out_path, table.to_csv());
    write_file(out_path + ".json", table.to_json().dump(2) + "\n");
    std::cout << table.to_csv();
    std::cerr << "wrote " << out_path << " and " << out_path << ".json\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"preferential attachment graph laboratory"};
    app.require_subcommand(1);

    // --- generate ---
    auto* gen = app.add_subcommand("generate", "sample a preferential attachment graph");
    std::string gen_model = "sequential", gen_out = "graph.txt";
    long gen_n = 100;
    int gen_m = 1;
    double gen_alpha = 0.0;
    std::uint64_t gen_seed = 0;
    bool gen_dot = false;
    gen->add_option("--model", gen_model, "classical|sequential")->capture_default_str();
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--m", gen_m, "edges per new vertex")->capture_default_str();
    gen->add_option("--alpha", gen_alpha, "uniform-mixing weight")->capture_default_str();
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output file")->required();
    gen->add_flag("--dot", gen_dot, "also write DOT next to the output");

    // --- eval / qr ---
    auto* eval = app.add_subcommand("eval", "evaluate a sentence on a graph file");
    std::string eval_graph, eval_formula;
    eval->add_option("--graph", eval_graph, "graph file")->required();
    eval->add_option("--formula", eval_formula, "sentence text")->required();

    auto* qr = app.add_subcommand("qr", "quantifier rank of a formula");
    std::string qr_formula;
    qr->add_option("--formula", qr_formula, "formula text")->required();

    // --- efgame ---
    auto* ef = app.add_subcommand("efgame", "decide k-elementary equivalence");
    std::string ef_a, ef_b;
    int ef_k = 1;
    bool ef_witness = false;
    ef->add_option("--a", ef_a, "graph file A")->required();
    ef->add_option("--b", ef_b, "graph file B")->required();
    ef->add_option("--k", ef_k, "rounds")->required();
    ef->add_flag("--witness", ef_witness, "print a Spoiler strategy when distinguishable");

    // --- cycles ---
    auto* cyc = app.add_subcommand("cycles", "cycle components and profile");
    std::string cyc_graph, cyc_profile_out;
    int cyc_r = 1;
    cyc->add_option("--graph", cyc_graph, "graph file")->required();
    cyc->add_option("--r", cyc_r, "radius")->required();
    cyc->add_option("--profile", cyc_profile_out, "write profile JSON here");

    // --- chain ---
    auto* chain = app.add_subcommand("chain", "inhomogeneous chain simulators");
    chain->require_subcommand(1);
    auto* slow = chain->add_subcommand("slow", "conditioned birth-death chain");
    std::string slow_rho = "1", slow_tau = "1";
    long slow_steps = 100000;
    std::uint64_t slow_seed = 0;
    bool slow_json = false;
    slow->add_option("--rho", slow_rho, "birth rate expression")->capture_default_str();
    slow->add_option("--tau", slow_tau, "death rate expression")->capture_default_str();
    slow->add_option("--steps", slow_steps, "steps")->capture_default_str();
    slow->add_option("--seed", slow_seed, "RNG seed")->capture_default_str();
    slow->add_flag("--json", slow_json, "JSON output");

    auto* mart = chain->add_subcommand("martingale", "martingale counter process");
    std::string mart_p = "1*n^-0.5";
    int mart_K = 1, mart_m = 1;
    long mart_steps = 100000;
    std::uint64_t mart_seed = 0;
    bool mart_json = false;
    mart->add_option("--p", mart_p, "up-rate expression: c | c*n^-a | c*(1+1/n)")
        ->capture_default_str();
    mart->add_option("--K", mart_K, "down-rate coefficient")->capture_default_str();
    mart->add_option("--m", mart_m, "down-step size")->capture_default_str();
    mart->add_option("--steps", mart_steps, "steps")->capture_default_str();
    mart->add_option("--seed", mart_seed, "RNG seed")->capture_default_str();
    mart->add_flag("--json", mart_json, "JSON output");

    // --- xp ---
    auto* xp = app.add_subcommand("xp", "Monte Carlo experiments");
    xp->require_subcommand(1);

    XpCommon cs, cc, cd, cl, cp;
    auto* xp_sentence = xp->add_subcommand("sentence", "P(G_n satisfies a sentence)");
    std::string xps_formula;
    add_common(xp_sentence, cs);
    xp_sentence->add_option("--formula", xps_formula, "sentence text")->required();

    auto* xp_cyclerate = xp->add_subcommand("cyclerate", "cycle creation rate");
    int xpc_l = 3;
    add_common(xp_cyclerate, cc);
    xp_cyclerate->add_option("--l", xpc_l, "cycle length")->capture_default_str();

    auto* xp_degrees = xp->add_subcommand("degrees", "degree mean/variance profile");
    std::string xpd_ks = "10,100";
    add_common(xp_degrees, cd);
    xp_degrees->add_option("--ks", xpd_ks, "comma-separated vertex indices")
        ->capture_default_str();

    auto* xp_locallimit = xp->add_subcommand("locallimit", "neighborhood TV vs the limit tree");
    int xpl_r = 1;
    long xpl_samples = 10000;
    add_common(xp_locallimit, cl);
    xp_locallimit->add_option("--r", xpl_r, "ball radius <= 2")->capture_default_str();
    xp_locallimit->add_option("--samples", xpl_samples, "vertex samples per size")
        ->capture_default_str();

    auto* xp_profile = xp->add_subcommand("profile", "cycle profile census");
    int xpp_r = 2;
    add_common(xp_profile, cp);
    xp_profile->add_option("--r", xpp_r, "radius")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            palab::ModelConfig cfg;
            cfg.kind = palab::model_kind_from(gen_model);
            cfg.n = gen_n;
            cfg.m = gen_m;
            cfg.alpha = gen_alpha;
            cfg.seed = gen_seed;
            palab::Multigraph g = palab::generate(cfg);
            palab::save_graph(g, gen_out);
            if (gen_dot) write_file(gen_out + ".dot", palab::to_dot(g));
            std::cerr << "wrote " << gen_out << " (n=" << g.n()
                      << ", edges=" << g.edge_list().size() << ")\n";
        } else if (*eval) {
            palab::Multigraph g = palab::load_graph(eval_graph);
            auto sentence = palab::fo::parse_sentence(eval_formula);
            std::cout << (palab::fo::evaluate(g, sentence) ? "true" : "false") << "\n";
        } else if (*qr) {
            std::cout << palab::fo::quantifier_rank(palab::fo::parse_formula(qr_formula))
                      << "\n";
        } else if (*ef) {
            palab::Multigraph A = palab::load_graph(ef_a);
            palab::Multigraph B = palab::load_graph(ef_b);
            bool eq = palab::equivalent_k(A, B, ef_k);
            std::cout << (eq ? "equivalent" : "distinguishable") << "\n";
            if (!eq && ef_witness) {
                auto w = palab::spoiler_witness(A, B, ef_k);
                std::cout << palab::witness_to_json(*w).dump(2) << "\n";
            }
        } else if (*cyc) {
            palab::Multigraph g = palab::load_graph(cyc_graph);
            auto comps = palab::cycle_components(g, cyc_r);
            long isolated = 0, multi = 0;
            for (const auto& c : comps)
                (c.kind == palab::CycleComponent::Kind::Isolated ? isolated : multi) += 1;
            std::cout << "components " << comps.size() << "\n"
                      << "isolated " << isolated << "\n"
                      << "multicycles " << multi << "\n";
            if (!cyc_profile_out.empty()) {
                auto profile = palab::cycle_profile(g, cyc_r);
                write_file(cyc_profile_out, palab::profile_to_json(profile).dump(2) + "\n");
                std::cerr << "wrote " << cyc_profile_out << "\n";
            }
        } else if (*slow) {
            palab::SlowChainConfig cfg;
            cfg.rho = palab::RateExpr::parse(slow_rho);
            cfg.tau = palab::RateExpr::parse(slow_tau);
            cfg.steps = slow_steps;
            cfg.seed = slow_seed;
            palab::Occupancy occ = palab::simulate_slow_chain(cfg);
            if (slow_json) {
                nlohmann::json j;
                j["steps_counted"] = occ.steps_counted;
                j["final_state"] = occ.final_state;
                j["occupancy"] = nlohmann::json::object();
                for (const auto& [s, f] : occ.freq) j["occupancy"][std::to_string(s)] = f;
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& [s, f] : occ.freq)
                    std::cout << s << " " << palab::format_double(f) << "\n";
            }
        } else if (*mart) {
            palab::MartingaleConfig cfg;
            cfg.p = palab::RateExpr::parse(mart_p);
            cfg.K = mart_K;
            cfg.m = mart_m;
            cfg.steps = mart_steps;
            cfg.seed = mart_seed;
            palab::MartingaleResult res = palab::simulate_martingale(cfg);
            if (mart_json) {
                nlohmann::json j;
                j["s"] = res.s;
                j["M"] = res.M;
                j["mu"] = res.mu;
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "final_M " << palab::format_double(res.M.back()) << "\n"
                          << "final_mu " << palab::format_double(res.mu.back()) << "\n";
            }
        } else if (*xp_sentence) {
            emit_table(palab::estimate_sentence_probability(cs.to_config(), xps_formula),
                       cs.out);
        } else if (*xp_cyclerate) {
            emit_table(palab::estimate_cycle_rate(cc.to_config(), xpc_l), cc.out);
        } else if (*xp_degrees) {
            emit_table(palab::degree_profile(cd.to_config(), parse_longs(xpd_ks)), cd.out);
        } else if (*xp_locallimit) {
            emit_table(palab::local_limit_check(cl.to_config(), xpl_r, xpl_samples), cl.out);
        } else if (*xp_profile) {
            emit_table(palab::cycle_profile_census(cp.to_config(), xpp_r), cp.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
