#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "multigraph.hpp"

namespace palab {

/// Shortest decimal that round-trips the double exactly.
inline std::string format_double(double x) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::stod(buf) == x) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Text format: header `n m alpha model seed`, then one line per distinct
/// edge `u v multiplicity`, sorted by (u,v). Round-trips bit-exactly.
inline std::string write_graph_text(const Multigraph& g) {
    std::ostringstream out;
    out << g.n() << ' ' << g.m() << ' ' << format_double(g.meta().alpha) << ' '
        << g.meta().model << ' ' << g.meta().seed << '\n';
    for (const auto& [u, v, mult] : g.sorted_edges())
        out << u << ' ' << v << ' ' << mult << '\n';
    return out.str();
}

inline Multigraph read_graph_text(std::istream& in) {
    int n = 0, m = 0;
    double alpha = 0.0;
    std::string model;
    std::uint64_t seed = 0;
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("graph file: missing header");
    {
        std::istringstream hs(header);
        if (!(hs >> n >> m >> alpha >> model >> seed))
            throw std::runtime_error("graph file: malformed header: " + header);
    }
    GraphMeta meta{model, alpha, seed};
    Multigraph g(n, m, meta);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int u = 0, v = 0, mult = 0;
        if (!(ls >> u >> v >> mult) || mult < 1)
            throw std::runtime_error("graph file: malformed edge line: " + line);
        for (int i = 0; i < mult; ++i) g.add_edge(v, u);  // creator = later vertex
    }
    g.finalize();
    return g;
}

inline Multigraph read_graph_text(const std::string& text) {
    std::istringstream in(text);
    return read_graph_text(in);
}

inline void save_graph(const Multigraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << write_graph_text(g);
}

inline Multigraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_graph_text(in);
}

/// DOT export, capped at 10^3 vertices.
inline std::string to_dot(const Multigraph& g) {
    if (g.n() > 1000)
        throw std::invalid_argument("to_dot: graph too large for DOT export (> 1000 vertices)");
    std::ostringstream out;
    out << "graph G {\n";
    for (Vertex v = 1; v <= g.n(); ++v) out << "  " << v << ";\n";
    for (const auto& [u, v, mult] : g.sorted_edges())
        for (int i = 0; i < mult; ++i) out << "  " << u << " -- " << v << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace palab
