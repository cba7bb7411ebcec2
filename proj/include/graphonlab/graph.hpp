#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphonlab {

enum class Color : std::uint8_t { blue, red };

struct graph_size_error : std::runtime_error {
    graph_size_error(int n)
        : std::runtime_error("graph on " + std::to_string(n) +
                             " nodes exceeds the 12-node canonicalization cap") {}
};

// Finite multigraph with optional node labels 1..k and blue/red edge colors.
// Nodes are 0-based internally; parallel edges are stored as multiplicities.
// Canonical form: labeled nodes are pinned to positions 0..k-1 (label order)
// and the unlabeled nodes are ordered to minimize the column-major encoding
// of the multiplicity matrices, so isomorphic labeled graphs compare equal.
class Graph {
  public:
    static constexpr int kMaxNodes = 12;

    Graph() = default;
    explicit Graph(int n) : n_(n), blue_(n * n, 0), red_(n * n, 0) {
        if (n < 0) throw std::invalid_argument("negative node count");
    }

    int node_count() const { return n_; }
    int label_count() const { return static_cast<int>(labels_.size()); }
    // 0-based node carrying label position pos (1-based).
    int label_node(int pos) const { return labels_.at(pos - 1); }

    void add_edge(int u, int v, Color c = Color::blue, int mult = 1) {
        check_node(u);
        check_node(v);
        if (u == v) throw std::invalid_argument("loops are not allowed");
        auto& m = (c == Color::blue) ? blue_ : red_;
        int cur = m[u * n_ + v];
        if (cur + mult > 255) throw std::overflow_error("edge multiplicity overflow");
        m[u * n_ + v] = m[v * n_ + u] = static_cast<std::uint8_t>(cur + mult);
        canonical_ = false;
    }

    // Assigns label position pos (1-based) to node. Positions must end up
    // forming a prefix 1..k; validated by canonicalize().
    void set_label(int pos, int node) {
        check_node(node);
        if (pos < 1) throw std::invalid_argument("label positions are 1-based");
        if (static_cast<int>(labels_.size()) < pos) labels_.resize(pos, -1);
        labels_[pos - 1] = node;
        canonical_ = false;
    }

    int blue_mult(int u, int v) const { return blue_[u * n_ + v]; }
    int red_mult(int u, int v) const { return red_[u * n_ + v]; }
    int pair_mult(int u, int v) const { return blue_mult(u, v) + red_mult(u, v); }

    bool simple() const {
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (pair_mult(u, v) > 1) return false;
        return true;
    }

    bool all_blue() const {
        for (auto r : red_)
            if (r) return false;
        return true;
    }

    int edge_instances(Color c) const {
        const auto& m = (c == Color::blue) ? blue_ : red_;
        int total = 0;
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v) total += m[u * n_ + v];
        return total;
    }
    int edge_instances() const { return edge_instances(Color::blue) + edge_instances(Color::red); }

    bool is_labeled(int node) const {
        for (int x : labels_)
            if (x == node) return true;
        return false;
    }

    bool is_canonical() const { return canonical_; }

    Graph canonical() const;

    // Stable total order / equality on canonical forms.
    friend bool operator==(const Graph& a, const Graph& b) { return a.cmp(b) == 0; }
    friend bool operator!=(const Graph& a, const Graph& b) { return a.cmp(b) != 0; }
    friend bool operator<(const Graph& a, const Graph& b) { return a.cmp(b) < 0; }

    // Structural helpers used by the quantum-graph algebra. perm maps old
    // node index -> new node index and must be a bijection.
    Graph permuted(const std::vector<int>& perm) const {
        Graph g(n_);
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v) {
                if (blue_mult(u, v)) g.add_edge(perm[u], perm[v], Color::blue, blue_mult(u, v));
                if (red_mult(u, v)) g.add_edge(perm[u], perm[v], Color::red, red_mult(u, v));
            }
        for (std::size_t p = 0; p < labels_.size(); ++p) g.set_label(static_cast<int>(p) + 1, perm[labels_[p]]);
        return g;
    }

    Graph unlabeled() const {
        Graph g = *this;
        g.labels_.clear();
        g.canonical_ = false;
        return g;
    }

    std::string to_text(const std::string& name) const;

    void validate() const {
        for (std::size_t p = 0; p < labels_.size(); ++p) {
            if (labels_[p] < 0 || labels_[p] >= n_)
                throw std::invalid_argument("label position " + std::to_string(p + 1) + " unassigned");
            for (std::size_t q = p + 1; q < labels_.size(); ++q)
                if (labels_[p] == labels_[q]) throw std::invalid_argument("label map is not injective");
        }
    }

  private:
    int n_ = 0;
    std::vector<int> labels_;        // position p-1 -> node
    std::vector<std::uint8_t> blue_; // n*n symmetric multiplicity matrix
    std::vector<std::uint8_t> red_;
    bool canonical_ = false;

    void check_node(int u) const {
        if (u < 0 || u >= n_) throw std::out_of_range("node index out of range");
    }

    int cmp(const Graph& b) const {
        const Graph& a = *this;
        if (a.n_ != b.n_) return a.n_ < b.n_ ? -1 : 1;
        if (a.labels_.size() != b.labels_.size()) return a.labels_.size() < b.labels_.size() ? -1 : 1;
        for (int v = 0; v < a.n_; ++v)
            for (int u = 0; u < v; ++u) {
                if (a.blue_mult(u, v) != b.blue_mult(u, v)) return a.blue_mult(u, v) < b.blue_mult(u, v) ? -1 : 1;
                if (a.red_mult(u, v) != b.red_mult(u, v)) return a.red_mult(u, v) < b.red_mult(u, v) ? -1 : 1;
            }
        return 0;
    }

    // Column of pair codes of candidate c against the already-placed order.
    std::vector<std::uint16_t> column_codes(const std::vector<int>& placed, int c) const {
        std::vector<std::uint16_t> col(placed.size());
        for (std::size_t i = 0; i < placed.size(); ++i)
            col[i] = static_cast<std::uint16_t>((blue_mult(placed[i], c) << 8) | red_mult(placed[i], c));
        return col;
    }

    bool twins(int a, int b) const {
        for (int w = 0; w < n_; ++w) {
            if (w == a || w == b) continue;
            if (blue_mult(a, w) != blue_mult(b, w) || red_mult(a, w) != red_mult(b, w)) return false;
        }
        return true;
    }
};

inline Graph Graph::canonical() const {
    if (canonical_) return *this;
    validate();
    if (n_ > kMaxNodes) throw graph_size_error(n_);
    const int k = label_count();

    std::vector<int> order(labels_.begin(), labels_.end());
    if (k < n_ && edge_instances() == 0) {
        for (int u = 0; u < n_; ++u)
            if (!is_labeled(u)) order.push_back(u);
    } else if (k < n_) {
        // Breadth-wise frontier of all prefix orders achieving the minimal
        // encoding so far; twin candidates are interchangeable and deduped.
        std::vector<std::vector<int>> frontier = {order};
        for (int depth = k; depth < n_; ++depth) {
            std::vector<std::vector<int>> next;
            std::vector<std::uint16_t> best_col;
            bool have_best = false;
            for (const auto& prefix : frontier) {
                std::vector<int> tried;
                for (int c = 0; c < n_; ++c) {
                    if (std::find(prefix.begin(), prefix.end(), c) != prefix.end()) continue;
                    bool dup = false;
                    for (int t : tried)
                        if (twins(t, c)) { dup = true; break; }
                    if (dup) continue;
                    tried.push_back(c);
                    auto col = column_codes(prefix, c);
                    if (!have_best || col < best_col) {
                        best_col = col;
                        have_best = true;
                        next.clear();
                    }
                    if (col == best_col) {
                        next.push_back(prefix);
                        next.back().push_back(c);
                    }
                }
            }
            if (next.size() > 2'000'000) throw std::runtime_error("canonicalization frontier blow-up");
            frontier = std::move(next);
        }
        order = frontier.front();
    }

    // order[new] = old; build the inverse map for permuted().
    std::vector<int> perm(n_);
    for (int pos = 0; pos < n_; ++pos) perm[order[pos]] = pos;
    Graph g = permuted(perm);
    g.canonical_ = true;
    return g;
}

// ---- text format -----------------------------------------------------------
//
//   graph <name>
//   n <node_count>
//   e <u> <v> [b|r]      (1-indexed endpoints; repeat the line for multiplicity)
//   l <position> <node>
//   end

inline std::string Graph::to_text(const std::string& name) const {
    std::ostringstream os;
    os << "graph " << name << "\n";
    os << "n " << n_ << "\n";
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v) {
            for (int m = 0; m < blue_mult(u, v); ++m) os << "e " << u + 1 << " " << v + 1 << " b\n";
            for (int m = 0; m < red_mult(u, v); ++m) os << "e " << u + 1 << " " << v + 1 << " r\n";
        }
    for (std::size_t p = 0; p < labels_.size(); ++p) os << "l " << p + 1 << " " << labels_[p] + 1 << "\n";
    os << "end\n";
    return os.str();
}

struct parse_error : std::runtime_error {
    parse_error(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

inline std::map<std::string, Graph> parse_graphs(std::istream& in) {
    std::map<std::string, Graph> out;
    std::string line, name;
    bool open = false;
    Graph cur;
    int nline = 0;
    std::vector<std::array<int, 3>> pending_edges;  // u, v, color
    std::vector<std::array<int, 2>> pending_labels;
    int declared_n = -1;
    while (std::getline(in, line)) {
        ++nline;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "graph") {
            if (open) throw parse_error(nline, "nested graph block");
            if (!(ls >> name)) throw parse_error(nline, "graph block without a name");
            open = true;
            declared_n = -1;
            pending_edges.clear();
            pending_labels.clear();
        } else if (tok == "n") {
            if (!open) throw parse_error(nline, "'n' outside a graph block");
            if (!(ls >> declared_n) || declared_n < 1) throw parse_error(nline, "bad node count");
        } else if (tok == "e") {
            if (!open) throw parse_error(nline, "'e' outside a graph block");
            int u, v;
            std::string c = "b";
            if (!(ls >> u >> v)) throw parse_error(nline, "bad edge line");
            ls >> c;
            if (c != "b" && c != "r") throw parse_error(nline, "edge color must be b or r");
            pending_edges.push_back({u, v, c == "b" ? 0 : 1});
        } else if (tok == "l") {
            if (!open) throw parse_error(nline, "'l' outside a graph block");
            int p, node;
            if (!(ls >> p >> node)) throw parse_error(nline, "bad label line");
            pending_labels.push_back({p, node});
        } else if (tok == "term") {
            continue;  // quantum-combination lines; handled by parse_quantum
        } else if (tok == "end") {
            if (!open) throw parse_error(nline, "'end' without a graph block");
            if (declared_n < 1) throw parse_error(nline, "graph block missing 'n'");
            cur = Graph(declared_n);
            try {
                for (auto& e : pending_edges)
                    cur.add_edge(e[0] - 1, e[1] - 1, e[2] == 0 ? Color::blue : Color::red);
                for (auto& l : pending_labels) cur.set_label(l[0], l[1] - 1);
                cur.validate();
            } catch (const std::exception& ex) {
                throw parse_error(nline, std::string("in graph '") + name + "': " + ex.what());
            }
            out.emplace(name, cur);
            open = false;
        } else {
            throw parse_error(nline, "unknown directive '" + tok + "'");
        }
    }
    if (open) throw parse_error(nline, "unterminated graph block");
    return out;
}

// ---- named small graphs ----------------------------------------------------

namespace graphs {

inline Graph empty(int n) { return Graph(n); }

inline Graph path(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

inline Graph cycle(int n) {
    Graph g = path(n);
    g.add_edge(n - 1, 0);
    return g;
}

inline Graph complete(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

inline Graph biclique(int a, int b) {
    Graph g(a + b);
    for (int u = 0; u < a; ++u)
        for (int v = 0; v < b; ++v) g.add_edge(u, a + v);
    return g;
}

inline Graph k2() { return complete(2); }
inline Graph p3() { return path(3); }
inline Graph k3() { return complete(3); }
inline Graph c4() { return cycle(4); }

// K2 with one endnode labeled 1.
inline Graph a_flag() {
    Graph g = k2();
    g.set_label(1, 0);
    return g;
}

// Complete graph on V(F) with F's edges blue and the complementary edges red.
inline Graph hat(const Graph& f) {
    if (!f.all_blue() || !f.simple()) throw std::invalid_argument("hat() expects a simple blue graph");
    Graph g(f.node_count());
    for (int u = 0; u < f.node_count(); ++u)
        for (int v = u + 1; v < f.node_count(); ++v)
            g.add_edge(u, v, f.blue_mult(u, v) ? Color::blue : Color::red);
    for (int p = 1; p <= f.label_count(); ++p) g.set_label(p, f.label_node(p));
    return g;
}

// Blue and red swapped.
inline Graph color_swapped(const Graph& f) {
    Graph g(f.node_count());
    for (int u = 0; u < f.node_count(); ++u)
        for (int v = u + 1; v < f.node_count(); ++v) {
            if (f.blue_mult(u, v)) g.add_edge(u, v, Color::red, f.blue_mult(u, v));
            if (f.red_mult(u, v)) g.add_edge(u, v, Color::blue, f.red_mult(u, v));
        }
    for (int p = 1; p <= f.label_count(); ++p) g.set_label(p, f.label_node(p));
    return g;
}

// Unlabeled 4-cycle with two opposite edges red, two blue.
inline Graph c4_alternating() {
    Graph g(4);
    g.add_edge(0, 1, Color::blue);
    g.add_edge(2, 3, Color::blue);
    g.add_edge(1, 2, Color::red);
    g.add_edge(3, 0, Color::red);
    return g;
}

// Two nodes joined by two blue and two red parallel edges.
inline Graph b4_parallel() {
    Graph g(2);
    g.add_edge(0, 1, Color::blue, 2);
    g.add_edge(0, 1, Color::red, 2);
    return g;
}

// K4 with a spanning path blue and the complementary path red.
inline Graph p4_hat() { return hat(path(4)); }

}  // namespace graphs

}  // namespace graphonlab
