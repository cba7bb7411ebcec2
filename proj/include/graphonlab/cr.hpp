#pragma once

#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphonlab/config.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/scalar.hpp"

namespace graphonlab {

// Rooted tree with explicit nodes. CR-graphon semantics: points of [0,1]
// descend to root paths through nested weight intervals; two points are
// adjacent exactly when their last common node has odd depth (root depth 0),
// and a shared leaf acts as its own last common node, so leaf blocks at odd
// depth are cliques.
struct FiniteTree {
    struct Node {
        int parent = -1;
        int depth = 0;
        std::vector<int> kids;
    };
    std::vector<Node> nodes;
    int root = 0;

    int add_root() {
        nodes.push_back({});
        return static_cast<int>(nodes.size()) - 1;
    }
    int add_child(int parent) {
        Node n;
        n.parent = parent;
        n.depth = nodes[parent].depth + 1;
        nodes.push_back(n);
        int id = static_cast<int>(nodes.size()) - 1;
        nodes[parent].kids.push_back(id);
        return id;
    }
    bool leaf(int u) const { return nodes[u].kids.empty(); }
    int size() const { return static_cast<int>(nodes.size()); }
    int depth(int u) const { return nodes[u].depth; }

    int lca(int u, int v) const {
        while (u != v) {
            if (nodes[u].depth >= nodes[v].depth)
                u = nodes[u].parent;
            else
                v = nodes[v].parent;
        }
        return u;
    }

    // Non-leaf nodes other than the root need >= 2 children.
    void validate() const {
        for (int u = 0; u < size(); ++u) {
            if (u == root) continue;
            if (!leaf(u) && nodes[u].kids.size() < 2)
                throw std::invalid_argument("internal node " + std::to_string(u) + " has fewer than 2 children");
        }
    }
};

// Tree plus the weight calculus: f is the block measure (additive down the
// tree), c the regular-degree weight with c(leaf) = 0 and c(u) + c(v) = f(v)
// for every child v. frontier marks prefix cut nodes of an implicit tree,
// which are exempt from the child-sum identity.
struct WeightedCRTree {
    FiniteTree tree;
    std::vector<Scalar> f, c;
    std::vector<bool> frontier;

    Scalar degree() const { return c[tree.root] / f[tree.root]; }
};

// ---- regular weights on a finite tree ----------------------------------------

// Bottom-up existence recursion: a leaf has degree 0; an internal node with
// child degrees d_i gets d = 1 / sum(1/(1-d_i)) and child measures scaled by
// a_i = d/(1-d_i). Exact rational arithmetic throughout.
inline WeightedCRTree regular_weights(const FiniteTree& t) {
    t.validate();
    const int n = t.size();
    std::vector<Scalar> deg(n);
    // Children always follow their parent in construction order, so a
    // reverse scan is bottom-up.
    for (int u = n - 1; u >= 0; --u) {
        if (t.leaf(u)) {
            deg[u] = Scalar(0);
            continue;
        }
        Scalar inv_sum(0);
        for (int v : t.nodes[u].kids) inv_sum += Scalar(1) / (Scalar(1) - deg[v]);
        deg[u] = Scalar(1) / inv_sum;
    }
    WeightedCRTree out;
    out.tree = t;
    out.f.assign(n, Scalar(0));
    out.c.assign(n, Scalar(0));
    out.frontier.assign(n, false);
    out.f[t.root] = Scalar(1);
    for (int u = 0; u < n; ++u) {
        if (u != t.root) {
            int p = t.nodes[u].parent;
            out.f[u] = out.f[p] * (deg[p] / (Scalar(1) - deg[u]));
        }
        out.c[u] = deg[u] * out.f[u];
    }
    return out;
}

// Validates the additive identity and derives c from given f weights;
// requires the weighting to be regular (c(u)+c(v)=f(v) consistent across
// children).
inline WeightedCRTree weights_from_f(const FiniteTree& t, const std::vector<Scalar>& f) {
    t.validate();
    const int n = t.size();
    if (static_cast<int>(f.size()) != n) throw std::invalid_argument("weight vector size mismatch");
    if (!(f[t.root] == Scalar(1))) throw std::invalid_argument("f(root) must be 1");
    for (int u = 0; u < n; ++u) {
        if (t.leaf(u)) continue;
        Scalar sum(0);
        for (int v : t.nodes[u].kids) sum += f[v];
        if (!(sum == f[u]) && std::abs(sum.value() - f[u].value()) > 1e-12)
            throw std::invalid_argument("f is not additive at node " + std::to_string(u));
    }
    WeightedCRTree out;
    out.tree = t;
    out.f = f;
    out.c.assign(n, Scalar(0));
    out.frontier.assign(n, false);
    // c bottom-up: c(u) = f(v) - c(v) for every child v; all children must
    // agree or the weighting is not regular.
    for (int u = n - 1; u >= 0; --u) {
        if (t.leaf(u)) continue;
        bool first = true;
        Scalar cu(0);
        for (int v : t.nodes[u].kids) {
            Scalar cand = f[v] - out.c[v];
            if (first) {
                cu = cand;
                first = false;
            } else if (!(cand == cu) && std::abs(cand.value() - cu.value()) > 1e-10) {
                throw std::invalid_argument("weights are not regular at node " + std::to_string(u));
            }
        }
        out.c[u] = cu;
    }
    return out;
}

// ---- degree from a root path --------------------------------------------------

// c(v0) from the f values (f(v0), f(v1), ...) along a maximal path:
// telescoping f(v) = c(parent) + c(child) gives
// c(v0) = f(v1) - f(v2) + f(v3) - ..., with the finite sum closing via
// c(leaf) = 0 on leaf-terminated paths.
inline double degree_from_path(const std::vector<double>& f_values, double tail_cutoff = 1e-12) {
    if (f_values.size() < 1) throw std::invalid_argument("empty path");
    for (std::size_t i = 0; i + 1 < f_values.size(); ++i)
        if (f_values[i + 1] > f_values[i] + 1e-12)
            throw std::invalid_argument("f values must be monotone non-increasing along a path");
    double acc = 0;
    double sign = 1;
    for (std::size_t k = 1; k < f_values.size(); ++k) {
        if (f_values[k] < tail_cutoff) break;
        acc += sign * f_values[k];
        sign = -sign;
    }
    return acc;
}

// ---- adjacency evaluators ------------------------------------------------------

namespace detail {

// 64-bit fixed point carrying the non-terminating binary expansion: dyadic
// inputs read as ...0111, which makes boundary ties descend left.
inline std::uint64_t fixed64_nt(double x) {
    if (x <= 0.0) return 0;
    if (x >= 1.0) return ~0ULL;
    auto u = static_cast<std::uint64_t>(std::ldexp(x, 64));
    return u == 0 ? 0 : u - 1;
}

}  // namespace detail

// Complete binary tree hung below a single-child root: points are binary
// digit streams, the last common node of x and y sits at the depth of their
// first differing digit, and odd depth means adjacent.
inline int binary_eval(double x, double y, int max_depth = 64) {
    std::uint64_t ux = detail::fixed64_nt(x), uy = detail::fixed64_nt(y);
    std::uint64_t diff = ux ^ uy;
    if (diff == 0) throw undetermined_point();
    int digit = std::countl_zero(diff) + 1;
    if (digit > max_depth) throw undetermined_point();
    return digit & 1;
}

// Infinite lexicographic power of C4: base-4 digit streams with adjacency of
// the first differing digit decided in the 4-cycle. The cycle is laid out
// 0-2-1-3-0 so the digit geometry lines up with the binary-tree evaluator.
inline int lexpower_c4_eval(double x, double y, int max_depth = 64) {
    static const int c4adj[4][4] = {{0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}};
    std::uint64_t ux = detail::fixed64_nt(x), uy = detail::fixed64_nt(y);
    std::uint64_t diff = ux ^ uy;
    if (diff == 0) throw undetermined_point();
    int bitpos = std::countl_zero(diff) + 1;
    if (bitpos > max_depth) throw undetermined_point();
    int d4 = (bitpos + 1) / 2;           // base-4 digit index, 1-based
    int shift = 64 - 2 * d4;
    int a = static_cast<int>((ux >> shift) & 3);
    int b = static_cast<int>((uy >> shift) & 3);
    return c4adj[a][b];
}

inline double f_node(const WeightedCRTree& wt, int u) { return wt.f[u].value(); }

// Interval descent on an explicit weighted tree. Returns the parity bit of
// the last common node; same-leaf pairs take the leaf's own parity.
inline int eval_adjacency(const WeightedCRTree& wt, double x, double y, int max_depth = 64) {
    const FiniteTree& t = wt.tree;
    int node = t.root;
    double lo = 0.0, hi = 1.0;
    for (int step = 0; step <= max_depth; ++step) {
        if (t.leaf(node)) return t.depth(node) & 1;
        double span = hi - lo;
        double fx = f_node(wt, node);
        // Locate the child interval of each point; ties descend left.
        int cx = -1, cy = -1;
        double cx_lo = lo, cx_hi = lo, cy_lo = lo, cy_hi = lo;
        double cursor = lo;
        for (int kid : t.nodes[node].kids) {
            double w = span * f_node(wt, kid) / fx;
            double next = cursor + w;
            if (cx < 0 && (x <= next || kid == t.nodes[node].kids.back())) {
                cx = kid;
                cx_lo = cursor;
                cx_hi = next;
            }
            if (cy < 0 && (y <= next || kid == t.nodes[node].kids.back())) {
                cy = kid;
                cy_lo = cursor;
                cy_hi = next;
            }
            cursor = next;
            if (cx >= 0 && cy >= 0) break;
        }
        if (cx != cy) return t.depth(node) & 1;
        node = cx;
        lo = cx_lo;
        hi = cx_hi;
        (void)cy_lo;
        (void)cy_hi;
    }
    throw undetermined_point();
}

// ---- graphon wrappers ----------------------------------------------------------

inline Graphon cr_graphon(const WeightedCRTree& wt, int max_depth = 64, std::string desc = "(cr tree)") {
    auto sp = std::make_shared<const WeightedCRTree>(wt);
    auto f = [sp, max_depth](double x, double y) {
        return static_cast<double>(eval_adjacency(*sp, x, y, max_depth));
    };
    return Graphon::from_eval(f, 0.0, 1.0, std::move(desc));
}

inline Graphon binary_graphon(int max_depth = 64) {
    return Graphon::from_eval(
        [max_depth](double x, double y) { return static_cast<double>(binary_eval(x, y, max_depth)); }, 0.0,
        1.0, "(cr binary)");
}

inline Graphon lexpower_graphon(int max_depth = 64) {
    return Graphon::from_eval(
        [max_depth](double x, double y) { return static_cast<double>(lexpower_c4_eval(x, y, max_depth)); },
        0.0, 1.0, "(cr lexpower-c4)");
}

// ---- the complete binary tree ---------------------------------------------------

// Explicit prefix of the binary-tree model: root, a single child, then a
// complete binary tree; f halves per level below depth 1. Nodes at the cut
// depth are frontier nodes. Subtree degrees: 2/3 at the root, 1/3 below.
inline WeightedCRTree make_binary_prefix(int depth) {
    if (depth < 1) throw std::invalid_argument("prefix depth must be >= 1");
    WeightedCRTree out;
    int root = out.tree.add_root();
    out.f.push_back(Scalar(1));
    out.c.push_back(Scalar(Rational(2, 3)));
    out.frontier.push_back(false);
    int trunk = out.tree.add_child(root);
    out.f.push_back(Scalar(1));
    out.c.push_back(Scalar(Rational(1, 3)));
    out.frontier.push_back(depth == 1);
    std::vector<int> level = {trunk};
    for (int d = 2; d <= depth; ++d) {
        Scalar fd = (d - 1) <= 60 ? Scalar(Rational(1, 1LL << (d - 1)))
                                  : Scalar::approx(std::ldexp(1.0, -(d - 1)));
        std::vector<int> next;
        for (int u : level)
            for (int i = 0; i < 2; ++i) {
                int v = out.tree.add_child(u);
                out.f.push_back(fd);
                out.c.push_back(fd / Scalar(3));
                out.frontier.push_back(d == depth);
                next.push_back(v);
            }
        level = std::move(next);
    }
    return out;
}

// ---- continued-fraction caterpillars --------------------------------------------

namespace detail {

inline long long scalar_floor(const Scalar& s) {
    if (s.exact()) {
        long long q = s.rat().num() / s.rat().den();
        if (Rational(q) > s.rat()) --q;  // floor toward -inf
        return q;
    }
    return static_cast<long long>(std::floor(s.value()));
}

}  // namespace detail

// Leaf counts n_k of the caterpillar for density alpha: n_k is the unique
// integer with a <= 1 - n_k a < 2a for the running density a, which is the
// continued fraction expansion of alpha with the first entry shifted by one.
// Densities above 1/2 recurse on the complement; rational alpha terminates.
inline std::vector<long long> cf_sequence(Scalar alpha, int count) {
    if (!(alpha.value() > 0.0 && alpha.value() < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
    std::vector<long long> seq;
    Scalar cur = alpha;
    if (cur > Scalar(Rational(1, 2))) cur = Scalar(1) - cur;
    for (int k = 0; k < count; ++k) {
        if (cur.is_zero() || cur.value() <= 1e-15) break;  // terminated (rational alpha)
        Scalar ratio = (Scalar(1) - cur) / cur;
        long long n = detail::scalar_floor(ratio);
        if (n < 1) n = 1;
        seq.push_back(n);
        Scalar s = Scalar(1) - Scalar(Rational(n)) * cur;
        Scalar next = (s - cur) / s;
        if (next.value() < 0) next = Scalar(0);
        cur = next;
    }
    return seq;
}

// Caterpillar tree of a density-alpha regular CR-graphon without induced C4
// or its complement: each spine node carries n_k leaf blocks plus one spine
// child, complementation alternating with depth parity. Truncated at `depth`
// spine levels, closing the residual spine block as a leaf (clique or empty
// by parity). Rational alpha terminates exactly.
inline WeightedCRTree make_cf(Scalar alpha, int depth) {
    if (!(alpha.value() > 0.0 && alpha.value() < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    WeightedCRTree out;
    int root = out.tree.add_root();
    out.f.push_back(Scalar(1));
    out.c.push_back(alpha);
    out.frontier.push_back(false);

    Scalar cur = alpha;
    int spine = root;
    if (cur > Scalar(Rational(1, 2))) {
        cur = Scalar(1) - cur;
        spine = out.tree.add_child(root);
        out.f.push_back(Scalar(1));
        out.c.push_back(cur);
        out.frontier.push_back(false);
    }

    for (int level = 0; level < depth; ++level) {
        if (cur.is_zero() || cur.value() <= 1e-15) break;
        Scalar fs = out.f[spine];
        Scalar ratio = (Scalar(1) - cur) / cur;
        long long n = detail::scalar_floor(ratio);
        if (n < 1) n = 1;
        for (long long i = 0; i < n; ++i) {
            out.tree.add_child(spine);
            out.f.push_back(fs * cur);
            out.c.push_back(Scalar(0));
            out.frontier.push_back(false);
        }
        Scalar s = Scalar(1) - Scalar(Rational(n)) * cur;
        Scalar next = (s - cur) / s;
        if (next.value() < 0) next = Scalar(0);
        int child = out.tree.add_child(spine);
        out.f.push_back(fs * s);
        out.c.push_back(next * fs * s);
        out.frontier.push_back(false);
        if (next.is_zero() || next.value() <= 1e-15) {
            spine = child;  // exact termination: residual block is a leaf
            break;
        }
        spine = child;
        cur = next;
    }
    // If truncated rather than terminated, the final spine node stays a leaf
    // and is marked as a cut of the infinite caterpillar.
    if (!(out.c[spine].is_zero()) && out.tree.leaf(spine)) out.frontier[spine] = true;
    return out;
}

// ---- truncation to a stepfunction ------------------------------------------------

// Steps = leaves within the cut plus nodes at the cut depth, in left-to-right
// order; block values from the parity of pairwise last common nodes, and the
// within-block value from the cut node's own parity. Total variation error is
// bounded by the sum of squared cut-node measures.
inline Graphon truncate_graphon(const WeightedCRTree& wt, int depth) {
    if (depth < 1) throw std::invalid_argument("truncation depth must be >= 1");
    const FiniteTree& t = wt.tree;
    std::vector<int> cut;
    // DFS in child order for the deterministic left-to-right layout.
    std::vector<int> walk = {t.root};
    while (!walk.empty()) {
        int u = walk.back();
        walk.pop_back();
        if (t.leaf(u) || t.depth(u) >= depth) {
            cut.push_back(u);
            continue;
        }
        const auto& kids = t.nodes[u].kids;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) walk.push_back(*it);
    }
    const int m = static_cast<int>(cut.size());
    StepStructure s;
    s.weights.resize(m);
    double total = 0;
    for (int i = 0; i < m; ++i) {
        s.weights[i] = wt.f[cut[i]].value();
        total += s.weights[i];
    }
    for (auto& w : s.weights) w /= total;  // guard rounding drift
    s.values.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            int anc = (i == j) ? cut[i] : t.lca(cut[i], cut[j]);
            double v = static_cast<double>(t.depth(anc) & 1);
            s.at(i, j) = v;
            s.at(j, i) = v;
        }
    return Graphon::from_steps(std::move(s), "(cr truncate " + std::to_string(depth) + ")");
}

// ---- tree file format -------------------------------------------------------------
//
//   root <id>
//   node <id> children <id list>
//   f <id> <p/q>         (optional; omitted weights -> regular recursion)

struct TreeFile {
    FiniteTree tree;
    std::vector<Scalar> f;  // empty when the file carries no weights
    std::map<int, int> id_map;
};

inline TreeFile parse_tree(std::istream& in) {
    std::map<int, std::vector<int>> children;
    std::map<int, Rational> weights;
    int root_id = -1;
    std::string line;
    int nline = 0;
    while (std::getline(in, line)) {
        ++nline;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "root") {
            if (!(ls >> root_id)) throw parse_error(nline, "bad root line");
        } else if (tok == "node") {
            int id;
            std::string kw;
            if (!(ls >> id >> kw) || kw != "children") throw parse_error(nline, "bad node line");
            std::vector<int> kids;
            int k;
            while (ls >> k) kids.push_back(k);
            children[id] = kids;
        } else if (tok == "f") {
            int id;
            std::string r;
            if (!(ls >> id >> r)) throw parse_error(nline, "bad weight line");
            weights[id] = Rational::parse(r);
        } else {
            throw parse_error(nline, "unknown directive '" + tok + "'");
        }
    }
    if (root_id < 0) throw std::invalid_argument("tree file has no root");

    TreeFile out;
    // Materialize in DFS order from the root.
    std::vector<int> stack = {root_id};
    out.tree.add_root();
    out.id_map[root_id] = 0;
    std::vector<int> dfs = {root_id};
    while (!dfs.empty()) {
        int id = dfs.back();
        dfs.pop_back();
        auto it = children.find(id);
        if (it == children.end()) continue;
        for (int kid : it->second) {
            if (out.id_map.count(kid)) throw std::invalid_argument("node listed under two parents");
            out.id_map[kid] = out.tree.add_child(out.id_map[id]);
            dfs.push_back(kid);
        }
    }
    out.tree.validate();
    if (!weights.empty()) {
        out.f.assign(out.tree.size(), Scalar(0));
        for (auto& [id, r] : weights) {
            auto it = out.id_map.find(id);
            if (it == out.id_map.end()) throw std::invalid_argument("weight for unknown node");
            out.f[it->second] = Scalar(r);
        }
    }
    return out;
}

inline std::string tree_to_text(const WeightedCRTree& wt) {
    std::ostringstream os;
    os << "root 0\n";
    for (int u = 0; u < wt.tree.size(); ++u) {
        if (wt.tree.leaf(u)) continue;
        os << "node " << u << " children";
        for (int k : wt.tree.nodes[u].kids) os << " " << k;
        os << "\n";
    }
    for (int u = 0; u < wt.tree.size(); ++u) {
        os << "f " << u << " " << (wt.f[u].exact() ? wt.f[u].rat().str() : std::to_string(wt.f[u].value()))
           << "\n";
    }
    return os.str();
}

}  // namespace graphonlab
