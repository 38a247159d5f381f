#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "multigraph.hpp"
#include "rng.hpp"

namespace palab::fo {

enum class Kind { Equal, Adj, Not, And, Or, Implies, Iff, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable AST over the multigraph signature: equality, the adjacency
/// family adj_j ("joined by at least j parallel edges"), Boolean connectives
/// and quantifiers.
struct Formula {
    Kind kind;
    std::string var1, var2;  // atoms
    int adj_j = 1;           // Adj only
    FormulaPtr left, right;  // connectives (Not uses left)
    std::string var;         // quantifiers
    FormulaPtr body;
};

inline FormulaPtr f_equal(std::string a, std::string b) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Equal;
    f->var1 = std::move(a);
    f->var2 = std::move(b);
    return f;
}

inline FormulaPtr f_adj(std::string a, std::string b, int j = 1) {
    if (j < 1) throw std::invalid_argument("adj: multiplicity threshold must be >= 1");
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Adj;
    f->var1 = std::move(a);
    f->var2 = std::move(b);
    f->adj_j = j;
    return f;
}

inline FormulaPtr f_not(FormulaPtr a) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Not;
    f->left = std::move(a);
    return f;
}

inline FormulaPtr f_binary(Kind k, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->left = std::move(a);
    f->right = std::move(b);
    return f;
}

inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return f_binary(Kind::And, std::move(a), std::move(b)); }
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return f_binary(Kind::Or, std::move(a), std::move(b)); }
inline FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return f_binary(Kind::Implies, std::move(a), std::move(b)); }
inline FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return f_binary(Kind::Iff, std::move(a), std::move(b)); }

inline FormulaPtr f_quantifier(Kind k, std::string var, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->var = std::move(var);
    f->body = std::move(body);
    return f;
}

inline FormulaPtr f_forall(std::string v, FormulaPtr body) { return f_quantifier(Kind::Forall, std::move(v), std::move(body)); }
inline FormulaPtr f_exists(std::string v, FormulaPtr body) { return f_quantifier(Kind::Exists, std::move(v), std::move(body)); }

inline bool equal_ast(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::Equal: return a->var1 == b->var1 && a->var2 == b->var2;
        case Kind::Adj:
            return a->var1 == b->var1 && a->var2 == b->var2 && a->adj_j == b->adj_j;
        case Kind::Not: return equal_ast(a->left, b->left);
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Iff: return equal_ast(a->left, b->left) && equal_ast(a->right, b->right);
        case Kind::Forall:
        case Kind::Exists: return a->var == b->var && equal_ast(a->body, b->body);
    }
    return false;
}

inline int node_count(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::Equal:
        case Kind::Adj: return 1;
        case Kind::Not: return 1 + node_count(f->left);
        case Kind::Forall:
        case Kind::Exists: return 1 + node_count(f->body);
        default: return 1 + node_count(f->left) + node_count(f->right);
    }
}

/// qr: 0 on atoms, transparent through negation, max over Boolean arguments,
/// +1 per quantifier.
inline int quantifier_rank(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::Equal:
        case Kind::Adj: return 0;
        case Kind::Not: return quantifier_rank(f->left);
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Iff:
            return std::max(quantifier_rank(f->left), quantifier_rank(f->right));
        case Kind::Forall:
        case Kind::Exists: return 1 + quantifier_rank(f->body);
    }
    return 0;
}

inline void collect_free_vars(const FormulaPtr& f, std::vector<std::string>& scope,
                              std::vector<std::string>& out) {
    auto is_bound = [&](const std::string& v) {
        return std::find(scope.begin(), scope.end(), v) != scope.end();
    };
    switch (f->kind) {
        case Kind::Equal:
        case Kind::Adj:
            if (!is_bound(f->var1)) out.push_back(f->var1);
            if (!is_bound(f->var2)) out.push_back(f->var2);
            break;
        case Kind::Not: collect_free_vars(f->left, scope, out); break;
        case Kind::Forall:
        case Kind::Exists:
            scope.push_back(f->var);
            collect_free_vars(f->body, scope, out);
            scope.pop_back();
            break;
        default:
            collect_free_vars(f->left, scope, out);
            collect_free_vars(f->right, scope, out);
            break;
    }
}

inline std::vector<std::string> free_vars(const FormulaPtr& f) {
    std::vector<std::string> scope, out;
    collect_free_vars(f, scope, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool is_sentence(const FormulaPtr& f) { return free_vars(f).empty(); }

// --- printer ------------------------------------------------------------

namespace detail {

// Precedence: quantifier 0, <-> 1, -> 2, | 3, & 4, ! 5, atom 6.
// -> and <-> associate to the right, | and & to the left.
inline int precedence(Kind k) {
    switch (k) {
        case Kind::Forall:
        case Kind::Exists: return 0;
        case Kind::Iff: return 1;
        case Kind::Implies: return 2;
        case Kind::Or: return 3;
        case Kind::And: return 4;
        case Kind::Not: return 5;
        default: return 6;
    }
}

inline void print_to(const FormulaPtr& f, int min_prec, std::string& out) {
    int prec = precedence(f->kind);
    bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (f->kind) {
        case Kind::Equal:
            out += f->var1 + " = " + f->var2;
            break;
        case Kind::Adj:
            out += f->adj_j == 1 ? "adj" : "adj" + std::to_string(f->adj_j);
            out += "(" + f->var1 + "," + f->var2 + ")";
            break;
        case Kind::Not:
            out += '!';
            print_to(f->left, 5, out);
            break;
        case Kind::And:
            print_to(f->left, 4, out);
            out += " & ";
            print_to(f->right, 5, out);
            break;
        case Kind::Or:
            print_to(f->left, 3, out);
            out += " | ";
            print_to(f->right, 4, out);
            break;
        case Kind::Implies:
            print_to(f->left, 3, out);
            out += " -> ";
            print_to(f->right, 2, out);
            break;
        case Kind::Iff:
            print_to(f->left, 2, out);
            out += " <-> ";
            print_to(f->right, 1, out);
            break;
        case Kind::Forall:
        case Kind::Exists:
            out += (f->kind == Kind::Forall ? "forall " : "exists ");
            out += f->var + ". ";
            print_to(f->body, 0, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace detail

inline std::string print(const FormulaPtr& f) {
    std::string out;
    detail::print_to(f, 0, out);
    return out;
}

// --- parser --------------------------------------------------------------

struct ParseError : std::runtime_error {
    int position;
    ParseError(const std::string& msg, int pos)
        : std::runtime_error("parse error at " + std::to_string(pos) + ": " + msg),
          position(pos) {}
};

namespace detail {

struct Token {
    enum Type { Ident, Forall, Exists, Adj, LParen, RParen, Comma, Dot, Eq, Not, And, Or,
                Implies, Iff, Number, End } type;
    std::string text;
    int adj_j = 1;
    int pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
        tok_.pos = (int)i_;
        if (i_ >= s_.size()) {
            tok_.type = Token::End;
            return;
        }
        char c = s_[i_];
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() && (std::isalnum((unsigned char)s_[j]) || s_[j] == '_')) ++j;
            std::string word = s_.substr(i_, j - i_);
            i_ = j;
            if (word == "forall") tok_.type = Token::Forall;
            else if (word == "exists") tok_.type = Token::Exists;
            else if (word == "adj" || word == "adjk") {
                tok_.type = Token::Adj;
                tok_.adj_j = (word == "adjk") ? -1 : 1;  // -1: threshold given as argument
            } else if (word.size() > 3 && word.compare(0, 3, "adj") == 0 &&
                       std::all_of(word.begin() + 3, word.end(),
                                   [](char d) { return std::isdigit((unsigned char)d); })) {
                tok_.type = Token::Adj;
                tok_.adj_j = std::stoi(word.substr(3));
            } else {
                tok_.type = Token::Ident;
                tok_.text = std::move(word);
            }
            return;
        }
        if (std::isdigit((unsigned char)c)) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit((unsigned char)s_[j])) ++j;
            tok_.type = Token::Number;
            tok_.text = s_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        if (s_.compare(i_, 3, "<->") == 0) { tok_.type = Token::Iff; i_ += 3; return; }
        if (s_.compare(i_, 2, "->") == 0) { tok_.type = Token::Implies; i_ += 2; return; }
        switch (c) {
            case '(': tok_.type = Token::LParen; break;
            case ')': tok_.type = Token::RParen; break;
            case ',': tok_.type = Token::Comma; break;
            case '.': tok_.type = Token::Dot; break;
            case '=': tok_.type = Token::Eq; break;
            case '!': tok_.type = Token::Not; break;
            case '&': tok_.type = Token::And; break;
            case '|': tok_.type = Token::Or; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", (int)i_);
        }
        ++i_;
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    FormulaPtr parse() {
        FormulaPtr f = parse_iff();
        if (lex_.peek().type != Token::End)
            throw ParseError("trailing input", lex_.peek().pos);
        return f;
    }

private:
    FormulaPtr parse_iff() {
        FormulaPtr left = parse_implies();
        if (lex_.peek().type == Token::Iff) {
            lex_.next();
            return f_iff(std::move(left), parse_iff());
        }
        return left;
    }

    FormulaPtr parse_implies() {
        FormulaPtr left = parse_or();
        if (lex_.peek().type == Token::Implies) {
            lex_.next();
            return f_implies(std::move(left), parse_implies());
        }
        return left;
    }

    FormulaPtr parse_or() {
        FormulaPtr left = parse_and();
        while (lex_.peek().type == Token::Or) {
            lex_.next();
            left = f_or(std::move(left), parse_and());
        }
        return left;
    }

    FormulaPtr parse_and() {
        FormulaPtr left = parse_unary();
        while (lex_.peek().type == Token::And) {
            lex_.next();
            left = f_and(std::move(left), parse_unary());
        }
        return left;
    }

    FormulaPtr parse_unary() {
        if (lex_.peek().type == Token::Not) {
            lex_.next();
            return f_not(parse_unary());
        }
        return parse_primary();
    }

    FormulaPtr parse_primary() {
        Token t = lex_.next();
        switch (t.type) {
            case Token::LParen: {
                FormulaPtr f = parse_iff();
                expect(Token::RParen, ")");
                return f;
            }
            case Token::Forall:
            case Token::Exists: {
                Token v = expect(Token::Ident, "variable");
                expect(Token::Dot, ".");
                FormulaPtr body = parse_iff();
                return t.type == Token::Forall ? f_forall(v.text, std::move(body))
                                               : f_exists(v.text, std::move(body));
            }
            case Token::Adj: {
                expect(Token::LParen, "(");
                Token a = expect(Token::Ident, "variable");
                expect(Token::Comma, ",");
                Token b = expect(Token::Ident, "variable");
                int j = t.adj_j;
                if (j == -1) {  // adjk(u,v,j)
                    expect(Token::Comma, ",");
                    Token num = expect(Token::Number, "multiplicity threshold");
                    j = std::stoi(num.text);
                    if (j < 1) throw ParseError("multiplicity threshold must be >= 1", num.pos);
                }
                expect(Token::RParen, ")");
                return f_adj(a.text, b.text, j);
            }
            case Token::Ident: {
                expect(Token::Eq, "=");
                Token b = expect(Token::Ident, "variable");
                return f_equal(t.text, b.text);
            }
            default:
                throw ParseError("expected a formula", t.pos);
        }
    }

    Token expect(Token::Type type, const std::string& what) {
        Token t = lex_.next();
        if (t.type != type) throw ParseError("expected " + what, t.pos);
        return t;
    }

    Lexer lex_;
};

}  // namespace detail

/// Parse a formula; free variables allowed.
inline FormulaPtr parse_formula(const std::string& text) {
    return detail::Parser(text).parse();
}

/// Parse a sentence: rejects free variables.
inline FormulaPtr parse_sentence(const std::string& text) {
    FormulaPtr f = parse_formula(text);
    auto fv = free_vars(f);
    if (!fv.empty())
        throw ParseError("free variables in sentence position: " + fv.front(), 0);
    return f;
}

// --- evaluator -----------------------------------------------------------

namespace detail {

struct CompiledNode {
    int slot1 = -1, slot2 = -1;   // atom variables, or the quantifier's slot
    std::vector<int> free_slots;  // sorted, for memo keys
};

class Evaluator {
public:
    explicit Evaluator(const Multigraph& g) : g_(g) {}

    bool run(const FormulaPtr& f) {
        std::vector<std::pair<std::string, int>> scope;
        compile(f, scope);
        std::vector<Vertex> env(max_slot_ + 1, 0);
        return eval(f, env);
    }

private:
    // Assign quantifier slots by depth and record per-node free slots.
    std::vector<int> compile(const FormulaPtr& f, std::vector<std::pair<std::string, int>>& scope) {
        auto& info = info_[f.get()];
        auto resolve = [&](const std::string& v) {
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == v) return it->second;
            throw std::invalid_argument("evaluate: unbound variable " + v);
        };
        std::vector<int> free;
        switch (f->kind) {
            case Kind::Equal:
            case Kind::Adj:
                info.slot1 = resolve(f->var1);
                info.slot2 = resolve(f->var2);
                free = {info.slot1, info.slot2};
                break;
            case Kind::Not:
                free = compile(f->left, scope);
                break;
            case Kind::Forall:
            case Kind::Exists: {
                int slot = (int)scope.size();
                max_slot_ = std::max(max_slot_, slot);
                info_[f.get()].slot1 = slot;
                scope.emplace_back(f->var, slot);
                free = compile(f->body, scope);
                scope.pop_back();
                free.erase(std::remove(free.begin(), free.end(), slot), free.end());
                break;
            }
            default: {
                free = compile(f->left, scope);
                auto rf = compile(f->right, scope);
                free.insert(free.end(), rf.begin(), rf.end());
                break;
            }
        }
        std::sort(free.begin(), free.end());
        free.erase(std::unique(free.begin(), free.end()), free.end());
        info.free_slots = free;
        return free;
    }

    bool eval(const FormulaPtr& f, std::vector<Vertex>& env) {
        const CompiledNode& info = info_[f.get()];
        switch (f->kind) {
            case Kind::Equal:
                return env[info.slot1] == env[info.slot2];
            case Kind::Adj: {
                Vertex a = env[info.slot1], b = env[info.slot2];
                return a != b && g_.multiplicity(a, b) >= f->adj_j;
            }
            case Kind::Not:
                return !eval(f->left, env);
            case Kind::And:
                return eval(f->left, env) && eval(f->right, env);
            case Kind::Or:
                return eval(f->left, env) || eval(f->right, env);
            case Kind::Implies:
                return !eval(f->left, env) || eval(f->right, env);
            case Kind::Iff:
                return eval(f->left, env) == eval(f->right, env);
            case Kind::Forall:
            case Kind::Exists: {
                // Memo on (node, assignment restricted to its free slots).
                std::vector<Vertex> key;
                key.reserve(info.free_slots.size());
                for (int s : info.free_slots) key.push_back(env[s]);
                auto& cache = memo_[f.get()];
                auto it = cache.find(key);
                if (it != cache.end()) return it->second;
                int slot = info.slot1;
                bool want = f->kind == Kind::Exists;
                bool result = !want;
                for (Vertex v = 1; v <= g_.n(); ++v) {
                    env[slot] = v;
                    if (eval(f->body, env) == want) {
                        result = want;
                        break;
                    }
                }
                env[slot] = 0;
                cache.emplace(std::move(key), result);
                return result;
            }
        }
        return false;
    }

    const Multigraph& g_;
    std::map<const Formula*, CompiledNode> info_;
    std::map<const Formula*, std::map<std::vector<Vertex>, bool>> memo_;
    int max_slot_ = -1;
};

}  // namespace detail

/// Truth of a closed sentence in g by direct recursive evaluation with
/// short-circuiting quantifiers and per-subformula memoization.
inline bool evaluate(const Multigraph& g, const FormulaPtr& sentence) {
    if (g.n() < 1) throw std::invalid_argument("evaluate: empty structure");
    detail::Evaluator ev(g);
    return ev.run(sentence);
}

// --- sentence sampler ------------------------------------------------------

namespace detail {

inline FormulaPtr sample_formula(Rng& rng, int qr_budget, int size_budget,
                                 std::vector<std::string>& scope);

inline FormulaPtr sample_atom(Rng& rng, std::vector<std::string>& scope) {
    const std::string& a = scope[(std::size_t)rng.uniform_int((long)scope.size())];
    const std::string& b = scope[(std::size_t)rng.uniform_int((long)scope.size())];
    if (rng.bernoulli(0.4)) return f_equal(a, b);
    int j = rng.bernoulli(0.25) ? 2 : 1;
    return f_adj(a, b, j);
}

inline FormulaPtr sample_formula(Rng& rng, int qr_budget, int size_budget,
                                 std::vector<std::string>& scope) {
    bool can_quantify = qr_budget >= 1 && size_budget >= 2;
    bool can_atom = !scope.empty();
    if (!can_atom || (can_quantify && rng.bernoulli(scope.empty() ? 1.0 : 0.35))) {
        std::string var = "x" + std::to_string(scope.size());
        scope.push_back(var);
        FormulaPtr body = sample_formula(rng, qr_budget - 1, size_budget - 1, scope);
        scope.pop_back();
        return rng.bernoulli(0.5) ? f_forall(var, std::move(body))
                                  : f_exists(var, std::move(body));
    }
    if (size_budget >= 3 && rng.bernoulli(0.45)) {
        int left_budget = 1 + (int)rng.uniform_int(size_budget - 2);
        FormulaPtr l = sample_formula(rng, qr_budget, left_budget, scope);
        FormulaPtr r = sample_formula(rng, qr_budget, size_budget - 1 - node_count(l), scope);
        switch (rng.uniform_int(4)) {
            case 0: return f_and(std::move(l), std::move(r));
            case 1: return f_or(std::move(l), std::move(r));
            case 2: return f_implies(std::move(l), std::move(r));
            default: return f_iff(std::move(l), std::move(r));
        }
    }
    if (size_budget >= 2 && rng.bernoulli(0.2))
        return f_not(sample_formula(rng, qr_budget, size_budget - 1, scope));
    return sample_atom(rng, scope);
}

}  // namespace detail

/// Random closed sentence with quantifier_rank <= max_qr and node count
/// <= max_size.
inline FormulaPtr sample_sentence(int max_qr, int max_size, Rng& rng) {
    if (max_qr < 1) throw std::invalid_argument("sample_sentence: max_qr must be >= 1");
    if (max_size < 2) max_size = 2;
    std::vector<std::string> scope;
    return detail::sample_formula(rng, max_qr, max_size, scope);
}

inline FormulaPtr sample_sentence(int max_qr, int max_size, std::uint64_t seed) {
    Rng rng(seed);
    return sample_sentence(max_qr, max_size, rng);
}

}  // namespace palab::fo
