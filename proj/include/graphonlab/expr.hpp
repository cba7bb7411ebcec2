#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphonlab/config.hpp"
#include "graphonlab/cr.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/spectral.hpp"

namespace graphonlab {

// Parenthesized, whitespace-separated graphon expressions:
//   (const c) | (half) | (levelset (poly (i j c)...)) | (step (w...) ((v...)...))
//   | (graph FILE NAME) | (complement E) | (affine a b E) | (dsum (w E)+)
//   | (pprod E E) | (oprod E E [m]) | (tensor E E)
//   | (cr binary) | (cr cf ALPHA DEPTH) | (cr file PATH)
//   | (specsolve (coeffs a1..an) E)

struct SExpr {
    bool atom = false;
    std::string text;
    std::vector<SExpr> items;
    int line = 1, col = 1;
};

namespace detail {

struct Token {
    std::string text;
    int line, col;
};

inline std::vector<Token> tokenize_expr(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::string cur;
    int cl = 1, cc = 1;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back({cur, cl, cc});
            cur.clear();
        }
    };
    for (char ch : src) {
        if (ch == '\n') {
            flush();
            ++line;
            col = 1;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            flush();
        } else if (ch == '(' || ch == ')') {
            flush();
            out.push_back({std::string(1, ch), line, col});
        } else {
            if (cur.empty()) {
                cl = line;
                cc = col;
            }
            cur.push_back(ch);
        }
        ++col;
    }
    flush();
    return out;
}

inline SExpr parse_sexpr(const std::vector<Token>& toks, std::size_t& pos) {
    if (pos >= toks.size()) throw parse_error(toks.empty() ? 1 : toks.back().line, "unexpected end of expression");
    const Token& t = toks[pos];
    if (t.text == ")") throw parse_error(t.line, "unexpected ')' at column " + std::to_string(t.col));
    SExpr e;
    e.line = t.line;
    e.col = t.col;
    if (t.text == "(") {
        ++pos;
        while (pos < toks.size() && toks[pos].text != ")") e.items.push_back(parse_sexpr(toks, pos));
        if (pos >= toks.size()) throw parse_error(t.line, "missing ')' for '(' at column " + std::to_string(t.col));
        ++pos;
        return e;
    }
    e.atom = true;
    e.text = t.text;
    ++pos;
    return e;
}

inline double num(const SExpr& e, const char* what) {
    if (!e.atom) throw parse_error(e.line, std::string("expected ") + what + " at column " + std::to_string(e.col));
    try {
        std::size_t used = 0;
        double v = std::stod(e.text, &used);
        if (used != e.text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw parse_error(e.line, std::string("bad number '") + e.text + "' at column " + std::to_string(e.col));
    }
}

inline long long integer(const SExpr& e, const char* what) {
    double v = num(e, what);
    long long n = static_cast<long long>(v);
    if (static_cast<double>(n) != v)
        throw parse_error(e.line, std::string("expected integer ") + what + " at column " + std::to_string(e.col));
    return n;
}

inline const std::string& word(const SExpr& e, const char* what) {
    if (!e.atom) throw parse_error(e.line, std::string("expected ") + what + " at column " + std::to_string(e.col));
    return e.text;
}

}  // namespace detail

inline SExpr parse_expression(const std::string& src) {
    auto toks = detail::tokenize_expr(src);
    std::size_t pos = 0;
    SExpr e = detail::parse_sexpr(toks, pos);
    if (pos != toks.size()) throw parse_error(toks[pos].line, "trailing tokens after expression");
    return e;
}

inline Graphon build_graphon(const SExpr& e, const Config& cfg = Config::defaults());

namespace detail {

inline Poly2 build_poly(const SExpr& e) {
    if (e.atom || e.items.empty() || !e.items[0].atom || e.items[0].text != "poly")
        throw parse_error(e.line, "expected (poly (i j c)...)");
    Poly2 p;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& t = e.items[i];
        if (t.atom || t.items.size() != 3) throw parse_error(t.line, "poly terms are (i j c)");
        p.add_term(static_cast<int>(integer(t.items[0], "exponent")),
                   static_cast<int>(integer(t.items[1], "exponent")), num(t.items[2], "coefficient"));
    }
    if (!p.symmetric()) throw parse_error(e.line, "poly terms must be given symmetrically");
    return p;
}

}  // namespace detail

inline Graphon build_graphon(const SExpr& e, const Config& cfg) {
    using detail::integer;
    using detail::num;
    using detail::word;
    if (e.atom) throw parse_error(e.line, "expected a parenthesized constructor");
    if (e.items.empty() || !e.items[0].atom) throw parse_error(e.line, "empty constructor");
    const std::string& head = e.items[0].text;
    auto argc = e.items.size() - 1;
    auto arity = [&](std::size_t lo, std::size_t hi, const char* usage) {
        if (argc < lo || argc > hi)
            throw parse_error(e.line, std::string("usage: ") + usage);
    };

    if (head == "const") {
        arity(1, 1, "(const c)");
        return constant_graphon(num(e.items[1], "constant"));
    }
    if (head == "half") {
        arity(0, 0, "(half)");
        return half_graphon();
    }
    if (head == "levelset") {
        arity(1, 1, "(levelset (poly ...))");
        return levelset_graphon(detail::build_poly(e.items[1]));
    }
    if (head == "step") {
        arity(2, 2, "(step (w...) ((v...)...))");
        const SExpr &ws = e.items[1], &rows = e.items[2];
        if (ws.atom || rows.atom) throw parse_error(e.line, "step needs weight and value lists");
        StepStructure s;
        for (const auto& t : ws.items) s.weights.push_back(num(t, "weight"));
        const int m = static_cast<int>(s.weights.size());
        if (static_cast<int>(rows.items.size()) != m) throw parse_error(rows.line, "step needs m value rows");
        s.values.assign(static_cast<std::size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) {
            const SExpr& row = rows.items[i];
            if (row.atom || static_cast<int>(row.items.size()) != m)
                throw parse_error(row.line, "step value rows must have m entries");
            for (int j = 0; j < m; ++j) s.at(i, j) = num(row.items[j], "value");
        }
        return Graphon::from_steps(std::move(s), "(step)");
    }
    if (head == "graph") {
        arity(2, 2, "(graph FILE NAME)");
        const std::string& file = word(e.items[1], "file path");
        const std::string& name = word(e.items[2], "graph name");
        std::ifstream in(file);
        if (!in) throw parse_error(e.line, "cannot open graph file '" + file + "'");
        auto named = parse_graphs(in);
        auto it = named.find(name);
        if (it == named.end()) throw parse_error(e.line, "no graph named '" + name + "' in " + file);
        return graphon_of_graph(it->second, "(graph " + name + ")");
    }
    if (head == "complement") {
        arity(1, 1, "(complement E)");
        return complement(build_graphon(e.items[1], cfg));
    }
    if (head == "affine") {
        arity(3, 3, "(affine a b E)");
        return affine(num(e.items[1], "a"), num(e.items[2], "b"), build_graphon(e.items[3], cfg));
    }
    if (head == "dsum") {
        arity(1, static_cast<std::size_t>(-1), "(dsum (w E)+)");
        std::vector<std::pair<double, Graphon>> parts;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            const SExpr& p = e.items[i];
            if (p.atom || p.items.size() != 2) throw parse_error(p.line, "dsum parts are (w E)");
            parts.push_back({num(p.items[0], "weight"), build_graphon(p.items[1], cfg)});
        }
        return direct_sum(parts);
    }
    if (head == "pprod") {
        arity(2, 2, "(pprod E E)");
        return pointwise_product(build_graphon(e.items[1], cfg), build_graphon(e.items[2], cfg));
    }
    if (head == "oprod") {
        arity(2, 3, "(oprod E E [m])");
        int m = argc == 3 ? static_cast<int>(integer(e.items[3], "resolution")) : cfg.oprod_resolution;
        return operator_product(build_graphon(e.items[1], cfg), build_graphon(e.items[2], cfg), m);
    }
    if (head == "tensor") {
        arity(2, 2, "(tensor E E)");
        return tensor_graphon(build_graphon(e.items[1], cfg), build_graphon(e.items[2], cfg));
    }
    if (head == "cr") {
        if (argc >= 1 && e.items[1].atom && e.items[1].text == "binary") {
            arity(1, 1, "(cr binary)");
            return binary_graphon(cfg.cr_max_depth);
        }
        if (argc >= 1 && e.items[1].atom && e.items[1].text == "lexpower") {
            arity(1, 1, "(cr lexpower)");
            return lexpower_graphon(cfg.cr_max_depth);
        }
        if (argc >= 1 && e.items[1].atom && e.items[1].text == "cf") {
            arity(3, 3, "(cr cf ALPHA DEPTH)");
            Scalar alpha(Rational::parse(word(e.items[2], "alpha")));
            int depth = static_cast<int>(integer(e.items[3], "depth"));
            auto wt = make_cf(alpha, depth);
            return cr_graphon(wt, cfg.cr_max_depth, "(cr cf " + e.items[2].text + ")");
        }
        if (argc >= 1 && e.items[1].atom && e.items[1].text == "file") {
            arity(2, 2, "(cr file PATH)");
            const std::string& path = word(e.items[2], "path");
            std::ifstream in(path);
            if (!in) throw parse_error(e.line, "cannot open tree file '" + path + "'");
            auto tf = parse_tree(in);
            WeightedCRTree wt = tf.f.empty() ? regular_weights(tf.tree) : weights_from_f(tf.tree, tf.f);
            return cr_graphon(wt, cfg.cr_max_depth, "(cr file " + path + ")");
        }
        throw parse_error(e.line, "usage: (cr binary | lexpower | cf ALPHA DEPTH | file PATH)");
    }
    if (head == "specsolve") {
        arity(2, 2, "(specsolve (coeffs a1..an) E)");
        const SExpr& cs = e.items[1];
        if (cs.atom || cs.items.empty() || !cs.items[0].atom || cs.items[0].text != "coeffs")
            throw parse_error(cs.line, "expected (coeffs a1..an)");
        std::vector<double> a;
        for (std::size_t i = 1; i < cs.items.size(); ++i) a.push_back(num(cs.items[i], "coefficient"));
        Graphon u = build_graphon(e.items[2], cfg);
        return spectral_solve(u, Poly1(a), cfg).w;
    }
    throw parse_error(e.line, "unknown constructor '" + head + "'");
}

inline Graphon build_graphon(const std::string& src, const Config& cfg = Config::defaults()) {
    return build_graphon(parse_expression(src), cfg);
}

}  // namespace graphonlab
