#pragma once

#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphonlab/graph.hpp"
#include "graphonlab/scalar.hpp"

namespace graphonlab {

// Formal finite linear combination of canonical graphs. All stored terms
// share the same label count; zero has none and combines with anything.
class QuantumGraph {
  public:
    QuantumGraph() = default;
    QuantumGraph(const Graph& g, const Scalar& c = Scalar(1)) { add_term(g, c); }

    const std::map<Graph, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // -1 when zero (compatible with any label count).
    int label_count() const { return terms_.empty() ? -1 : terms_.begin()->first.label_count(); }

    bool exact() const {
        for (const auto& [g, c] : terms_)
            if (!c.exact()) return false;
        return true;
    }

    void add_term(const Graph& g, const Scalar& c) {
        if (c.is_zero()) return;
        Graph key = g.canonical();
        if (!terms_.empty() && key.label_count() != label_count())
            throw std::invalid_argument("mixed label counts in a quantum graph");
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    QuantumGraph& operator+=(const QuantumGraph& o) {
        for (const auto& [g, c] : o.terms_) add_term(g, c);
        return *this;
    }
    QuantumGraph& operator-=(const QuantumGraph& o) {
        for (const auto& [g, c] : o.terms_) add_term(g, -c);
        return *this;
    }
    friend QuantumGraph operator+(QuantumGraph a, const QuantumGraph& b) { return a += b; }
    friend QuantumGraph operator-(QuantumGraph a, const QuantumGraph& b) { return a -= b; }

    QuantumGraph scaled(const Scalar& s) const {
        QuantumGraph r;
        for (const auto& [g, c] : terms_) r.add_term(g, c * s);
        return r;
    }

    friend bool operator==(const QuantumGraph& a, const QuantumGraph& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const QuantumGraph& a, const QuantumGraph& b) { return !(a == b); }

  private:
    std::map<Graph, Scalar> terms_;
};

// ---- gluing product ---------------------------------------------------------

namespace detail {

inline Graph glue(const Graph& f1, const Graph& f2, bool simple) {
    const int k = f1.label_count();
    const int n1 = f1.node_count(), n2 = f2.node_count();
    Graph g(k + (n1 - k) + (n2 - k));

    std::vector<int> m1(n1), m2(n2);
    {
        std::vector<bool> lab1(n1, false), lab2(n2, false);
        for (int p = 1; p <= k; ++p) {
            m1[f1.label_node(p)] = p - 1;
            m2[f2.label_node(p)] = p - 1;
            lab1[f1.label_node(p)] = lab2[f2.label_node(p)] = true;
        }
        int next = k;
        for (int u = 0; u < n1; ++u)
            if (!lab1[u]) m1[u] = next++;
        for (int u = 0; u < n2; ++u)
            if (!lab2[u]) m2[u] = next++;
    }
    for (int u = 0; u < n1; ++u)
        for (int v = u + 1; v < n1; ++v)
            if (f1.blue_mult(u, v)) g.add_edge(m1[u], m1[v], Color::blue, f1.blue_mult(u, v));
    for (int u = 0; u < n2; ++u)
        for (int v = u + 1; v < n2; ++v)
            if (f2.blue_mult(u, v)) g.add_edge(m2[u], m2[v], Color::blue, f2.blue_mult(u, v));
    for (int p = 1; p <= k; ++p) g.set_label(p, p - 1);

    if (!simple) return g;
    Graph s(g.node_count());
    for (int u = 0; u < g.node_count(); ++u)
        for (int v = u + 1; v < g.node_count(); ++v)
            if (g.blue_mult(u, v)) s.add_edge(u, v, Color::blue, 1);
    for (int p = 1; p <= k; ++p) s.set_label(p, p - 1);
    return s;
}

}  // namespace detail

// Glued product of k-labeled quantum graphs: disjoint union with nodes of
// equal label identified. simple=true reduces parallel edges afterwards.
inline QuantumGraph product(const QuantumGraph& f1, const QuantumGraph& f2, bool simple = false) {
    if (f1.is_zero() || f2.is_zero()) return {};
    if (f1.label_count() != f2.label_count())
        throw std::invalid_argument("product requires equal label counts");
    for (const auto* f : {&f1, &f2})
        for (const auto& [g, c] : f->terms())
            if (!g.all_blue()) throw std::invalid_argument("product is defined for blue graphs only");
    QuantumGraph out;
    for (const auto& [g1, c1] : f1.terms())
        for (const auto& [g2, c2] : f2.terms()) out.add_term(detail::glue(g1, g2, simple), c1 * c2);
    return out;
}

// ---- contraction ------------------------------------------------------------

struct Partition {
    std::vector<std::vector<int>> blocks;  // of label positions 1..k

    void validate(int k) const {
        std::vector<bool> seen(k + 1, false);
        if (blocks.empty()) throw std::invalid_argument("empty partition");
        for (const auto& b : blocks) {
            if (b.empty()) throw std::invalid_argument("empty partition block");
            for (int p : b) {
                if (p < 1 || p > k) throw std::invalid_argument("partition element out of range");
                if (seen[p]) throw std::invalid_argument("partition blocks are not disjoint");
                seen[p] = true;
            }
        }
        for (int p = 1; p <= k; ++p)
            if (!seen[p]) throw std::invalid_argument("partition does not cover 1..k");
    }
};

struct illegitimate_partition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Merges the labeled nodes within each block; block i becomes label i.
// Each block must be independent in every term.
inline QuantumGraph contract(const QuantumGraph& f, const Partition& p) {
    if (f.is_zero()) return {};
    const int k = f.label_count();
    p.validate(k);
    QuantumGraph out;
    int term_idx = 0;
    for (const auto& [g, c] : f.terms()) {
        ++term_idx;
        for (std::size_t b = 0; b < p.blocks.size(); ++b)
            for (std::size_t i = 0; i < p.blocks[b].size(); ++i)
                for (std::size_t j = i + 1; j < p.blocks[b].size(); ++j) {
                    int u = g.label_node(p.blocks[b][i]);
                    int v = g.label_node(p.blocks[b][j]);
                    if (g.pair_mult(u, v) > 0)
                        throw illegitimate_partition("block " + std::to_string(b + 1) +
                                                     " is not independent in term " +
                                                     std::to_string(term_idx));
                }
        const int n = g.node_count();
        std::vector<int> dest(n, -1);
        for (std::size_t b = 0; b < p.blocks.size(); ++b)
            for (int pos : p.blocks[b]) dest[g.label_node(pos)] = static_cast<int>(b);
        int next = static_cast<int>(p.blocks.size());
        for (int u = 0; u < n; ++u)
            if (dest[u] < 0) dest[u] = next++;
        Graph merged(next);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                if (dest[u] == dest[v]) continue;
                if (g.blue_mult(u, v)) merged.add_edge(dest[u], dest[v], Color::blue, g.blue_mult(u, v));
                if (g.red_mult(u, v)) merged.add_edge(dest[u], dest[v], Color::red, g.red_mult(u, v));
            }
        for (std::size_t b = 0; b < p.blocks.size(); ++b) merged.set_label(static_cast<int>(b) + 1, static_cast<int>(b));
        out.add_term(merged, c);
    }
    return out;
}

// ---- unlabeling -------------------------------------------------------------

inline QuantumGraph unlabel(const QuantumGraph& f, const std::set<int>& positions) {
    if (f.is_zero()) return {};
    const int k = f.label_count();
    for (int p : positions)
        if (p < 1 || p > k) throw std::invalid_argument("unknown label position " + std::to_string(p));
    QuantumGraph out;
    for (const auto& [g, c] : f.terms()) {
        Graph h = g.unlabeled();
        int next = 1;
        for (int p = 1; p <= k; ++p)
            if (!positions.count(p)) h.set_label(next++, g.label_node(p));
        out.add_term(h, c);
    }
    return out;
}

inline QuantumGraph unlabel_all(const QuantumGraph& f) {
    std::set<int> all;
    for (int p = 1; p <= f.label_count(); ++p) all.insert(p);
    return unlabel(f, all);
}

// f^r unlabeled, r even: vanishing of the result detects vanishing of f a.e.
inline QuantumGraph power_unlabel(const QuantumGraph& f, int r) {
    if (r <= 0 || r % 2 != 0) throw std::invalid_argument("power_unlabel needs an even positive power");
    if (f.is_zero()) return {};
    QuantumGraph acc = f;
    for (int i = 1; i < r; ++i) acc = product(acc, f, false);
    return unlabel_all(acc);
}

// Square-free unlabeling: 2^k copies f_X indexed by X subset of [k]; the
// label-i nodes of copies X and X symmetric-difference {i} are identified.
// Output is simple whenever every term of f is.
inline QuantumGraph unlabel_square_free(const QuantumGraph& f) {
    if (f.is_zero()) return {};
    const int k = f.label_count();
    if (k < 1) throw std::invalid_argument("unlabel_square_free needs k >= 1");
    for (const auto& [g, c] : f.terms())
        if (!g.simple()) throw std::invalid_argument("unlabel_square_free requires simple terms");

    std::vector<const Graph*> term_graphs;
    std::vector<Scalar> term_coeffs;
    for (const auto& [g, c] : f.terms()) {
        term_graphs.push_back(&g);
        term_coeffs.push_back(c);
    }
    const int copies = 1 << k;
    const std::size_t nterms = term_graphs.size();

    // Shared class node for (X minus {i}, i).
    std::map<std::pair<int, int>, int> class_node;
    int next_node = 0;
    for (int i = 0; i < k; ++i)
        for (int x = 0; x < copies; ++x)
            if (!(x & (1 << i))) class_node[{x, i}] = next_node++;
    const int shared = next_node;

    QuantumGraph out;
    std::vector<std::size_t> choice(copies, 0);  // term index per copy
    while (true) {
        Scalar coeff(1);
        int total_nodes = shared;
        for (int x = 0; x < copies; ++x) {
            coeff *= term_coeffs[choice[x]];
            total_nodes += term_graphs[choice[x]]->node_count() - k;
        }
        Graph big(total_nodes);
        int free_base = shared;
        for (int x = 0; x < copies; ++x) {
            const Graph& t = *term_graphs[choice[x]];
            const int n = t.node_count();
            std::vector<int> map(n, -1);
            for (int p = 1; p <= k; ++p) {
                int i = p - 1;
                map[t.label_node(p)] = class_node[{x & ~(1 << i), i}];
            }
            for (int u = 0; u < n; ++u)
                if (map[u] < 0) map[u] = free_base++;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) {
                    if (t.blue_mult(u, v)) big.add_edge(map[u], map[v], Color::blue, t.blue_mult(u, v));
                    if (t.red_mult(u, v)) big.add_edge(map[u], map[v], Color::red, t.red_mult(u, v));
                }
        }
        out.add_term(big, coeff);

        int pos = 0;
        while (pos < copies && ++choice[pos] == nterms) choice[pos++] = 0;
        if (pos == copies) break;
    }
    return out;
}

// ---- 2-edge-colored expansion ----------------------------------------------

// Inclusion-exclusion over red edges: every red multiplicity m becomes the
// binomial expansion of (1-W)^m, yielding an all-blue signed combination with
// identical density on every graphon.
inline QuantumGraph color_expand(const Graph& g0) {
    Graph g = g0.canonical();
    const int n = g.node_count();
    std::vector<std::pair<int, int>> red_pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (g.red_mult(u, v)) red_pairs.push_back({u, v});

    QuantumGraph out;
    std::vector<int> take(red_pairs.size(), 0);
    auto binom = [](int m, int j) {
        long long r = 1;
        for (int i = 1; i <= j; ++i) r = r * (m - i + 1) / i;
        return r;
    };
    while (true) {
        Graph h(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (g.blue_mult(u, v)) h.add_edge(u, v, Color::blue, g.blue_mult(u, v));
        Scalar coeff(1);
        for (std::size_t e = 0; e < red_pairs.size(); ++e) {
            auto [u, v] = red_pairs[e];
            int m = g.red_mult(u, v);
            int j = take[e];
            if (j) h.add_edge(u, v, Color::blue, j);
            coeff *= Scalar(Rational(((j % 2) ? -1 : 1) * binom(m, j)));
        }
        for (int p = 1; p <= g.label_count(); ++p) h.set_label(p, g.label_node(p));
        out.add_term(h, coeff);

        std::size_t pos = 0;
        while (pos < red_pairs.size()) {
            auto [u, v] = red_pairs[pos];
            if (++take[pos] <= g.red_mult(u, v)) break;
            take[pos++] = 0;
        }
        if (pos == red_pairs.size()) break;
    }
    return out;
}

inline QuantumGraph color_expand(const QuantumGraph& f) {
    QuantumGraph out;
    for (const auto& [g, c] : f.terms()) out += color_expand(g).scaled(c);
    return out;
}

// ---- Razborov derivatives ---------------------------------------------------

enum class RazborovMode { dag, ddag };

// dag:  sum over nodes of F with that node labeled 1.
// ddag: sum over unordered edges ij of (F - ij, labels i,j), averaged over
//       the two orientations so the variational formula holds verbatim.
inline QuantumGraph razborov(const Graph& f0, RazborovMode mode) {
    if (f0.label_count() != 0) throw std::invalid_argument("razborov expects an unlabeled graph");
    if (!f0.all_blue() || !f0.simple()) throw std::invalid_argument("razborov expects a simple blue graph");
    Graph f = f0.canonical();
    const int n = f.node_count();
    QuantumGraph out;
    if (mode == RazborovMode::dag) {
        for (int i = 0; i < n; ++i) {
            Graph h = f;
            h.set_label(1, i);
            out.add_term(h, Scalar(1));
        }
        return out;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!f.blue_mult(i, j)) continue;
            Graph base(n);
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (f.blue_mult(u, v) && !(u == i && v == j)) base.add_edge(u, v);
            Graph h1 = base, h2 = base;
            h1.set_label(1, i);
            h1.set_label(2, j);
            h2.set_label(1, j);
            h2.set_label(2, i);
            out.add_term(h1, Scalar(Rational(1, 2)));
            out.add_term(h2, Scalar(Rational(1, 2)));
        }
    return out;
}

// ---- quantum graph files ----------------------------------------------------
//
// Lines `term <rational> <graph-name>` referencing graphs defined in the same
// file (see parse_graphs for the graph block syntax).

inline QuantumGraph parse_quantum(std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    std::istringstream gin(text);
    auto named = parse_graphs(gin);
    QuantumGraph out;
    std::istringstream tin(text);
    std::string line;
    int nline = 0;
    while (std::getline(tin, line)) {
        ++nline;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok != "term") continue;
        std::string coeff, name;
        if (!(ls >> coeff >> name)) throw parse_error(nline, "bad term line");
        auto it = named.find(name);
        if (it == named.end()) throw parse_error(nline, "term references unknown graph '" + name + "'");
        out.add_term(it->second, Scalar(Rational::parse(coeff)));
    }
    return out;
}

}  // namespace graphonlab
