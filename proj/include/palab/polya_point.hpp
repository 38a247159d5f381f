#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "canonical.hpp"
#include "generators.hpp"
#include "rng.hpp"

namespace palab {

/// Node of the local limit tree. Left children are the m uniform "older"
/// neighbors; right children come from the Poisson process on [x, 1].
struct PolyaPointNode {
    enum class Tag { Root, Left, Right };

    double position = 0.0;
    Tag tag = Tag::Root;
    double gamma = std::numeric_limits<double>::quiet_NaN();  // unset on the alpha=1 path
    std::vector<PolyaPointNode> children;

    std::size_t node_count() const {
        std::size_t c = 1;
        for (const auto& ch : children) c += ch.node_count();
        return c;
    }
};

struct PolyaPointTree {
    PolyaPointNode root;
    int depth = 0;
    int m = 1;
    double alpha = 0.0;
};

namespace detail {

// Total mass of the intensity on [x,1] and inverse-CDF position sampling.
// For chi < 1 the density is proportional to t^{(1-2chi)/chi}; with
// e = (1-chi)/chi the mass integrates to gamma * (x^-e - 1) and
// F^-1(u) = (x^e + u(1-x^e))^(1/e). For chi = 1 (uniform attachment) the
// process is Poisson with mean m log(b/a) and density 1/t.
struct RightChildLaw {
    double chi;
    double x;

    double mass(double gamma_weight, int m) const {
        if (chi == 1.0) return m * std::log(1.0 / x);
        double e = (1.0 - chi) / chi;
        return gamma_weight * (std::pow(x, -e) - 1.0);
    }

    double position(double u) const {
        if (chi == 1.0) return std::pow(x, 1.0 - u);
        double e = (1.0 - chi) / chi;
        double xe = std::pow(x, e);
        return std::pow(xe + u * (1.0 - xe), 1.0 / e);
    }
};

inline void extend_point_node(PolyaPointNode& node, const ModelConstants& mc, int m,
                              double mu2,  // 2mu, 0 when alpha = 0
                              int depth_left, Rng& rng) {
    if (depth_left == 0) return;
    double x = node.position;
    // m uniform left children for every interior node, the root included.
    for (int i = 0; i < m; ++i) {
        PolyaPointNode child;
        child.tag = PolyaPointNode::Tag::Left;
        do {
            child.position = rng.uniform(x);
        } while (child.position <= 0.0);
        node.children.push_back(std::move(child));
    }
    RightChildLaw law{mc.chi, x};
    double weight = 0.0;
    if (mc.chi < 1.0) {
        double shape = m + mu2 + (node.tag == PolyaPointNode::Tag::Left ? 1.0 : 0.0);
        node.gamma = rng.gamma(shape, 1.0);
        weight = node.gamma;
    }
    long count = rng.poisson(law.mass(weight, m));
    std::vector<double> positions(count);
    for (long i = 0; i < count; ++i) positions[i] = law.position(rng.uniform());
    std::sort(positions.begin(), positions.end());
    for (double p : positions) {
        PolyaPointNode child;
        child.tag = PolyaPointNode::Tag::Right;
        child.position = p;
        node.children.push_back(std::move(child));
    }
    for (auto& child : node.children) extend_point_node(child, mc, m, mu2, depth_left - 1, rng);
}

}  // namespace detail

/// Recursive construction to depth r. Root position X_0 = Y^chi with Y
/// uniform unless x0 is given (x0 = 0 rejected: the intensity diverges).
inline PolyaPointTree sample_polya_point_tree(const ModelConstants& mc, int m, int r,
                                              std::optional<double> x0, Rng& rng) {
    if (m < 1) throw std::invalid_argument("sample_polya_point_tree: m must be >= 1");
    if (r < 0) throw std::invalid_argument("sample_polya_point_tree: depth must be >= 0");
    if (x0 && !(*x0 > 0.0 && *x0 <= 1.0))
        throw std::invalid_argument("sample_polya_point_tree: x0 must lie in (0,1]");
    PolyaPointTree tree;
    tree.depth = r;
    tree.m = m;
    tree.alpha = (mc.chi == 1.0) ? 1.0 : mc.u / (1.0 + mc.u);
    tree.root.tag = PolyaPointNode::Tag::Root;
    if (x0) {
        tree.root.position = *x0;
    } else {
        double y;
        do {
            y = rng.uniform();
        } while (y <= 0.0);
        tree.root.position = std::pow(y, mc.chi);
    }
    double mu2 = std::isinf(mc.u) ? 0.0 : 2.0 * m * mc.u;
    detail::extend_point_node(tree.root, mc, m, mu2, r, rng);
    return tree;
}

inline PolyaPointTree sample_polya_point_tree(double alpha, int m, int r,
                                              std::optional<double> x0, Rng& rng) {
    return sample_polya_point_tree(model_constants(alpha), m, r, x0, rng);
}

namespace detail {

inline std::string point_tree_shape(const PolyaPointNode& node) {
    std::vector<std::string> entries;
    entries.reserve(node.children.size());
    for (const auto& c : node.children) entries.push_back("1:" + point_tree_shape(c));
    return ahu_wrap(entries);
}

inline nlohmann::json point_node_json(const PolyaPointNode& node, const std::string& height) {
    nlohmann::json j;
    j["position"] = node.position;
    switch (node.tag) {
        case PolyaPointNode::Tag::Root: j["tag"] = "root"; break;
        case PolyaPointNode::Tag::Left: j["tag"] = "left"; break;
        case PolyaPointNode::Tag::Right: j["tag"] = "right"; break;
    }
    j["height"] = height;
    if (!std::isnan(node.gamma)) j["gamma"] = node.gamma;
    j["children"] = nlohmann::json::array();
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        std::string h = height.empty() ? std::to_string(i + 1)
                                       : height + "," + std::to_string(i + 1);
        j["children"].push_back(point_node_json(node.children[i], h));
    }
    return j;
}

}  // namespace detail

/// Canonical code of the tree's shape, byte-compatible with
/// canonical_rooted_tree on unit-multiplicity balls.
inline CanonicalCode polya_point_code(const PolyaPointTree& tree) {
    return "T" + detail::point_tree_shape(tree.root);
}

inline nlohmann::json polya_point_json(const PolyaPointTree& tree) {
    nlohmann::json j;
    j["depth"] = tree.depth;
    j["m"] = tree.m;
    j["alpha"] = tree.alpha;
    j["root"] = detail::point_node_json(tree.root, "");
    return j;
}

}  // namespace palab
