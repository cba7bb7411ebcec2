#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphonlab/graph.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/rng.hpp"

namespace graphonlab {

// W-random graph: latent uniform points, one independent coin per pair with
// success probability W(x_i, x_j). Latents are retained for diagnostics.
struct SampledGraph {
    int n = 0;
    std::vector<std::uint8_t> adj;  // n*n symmetric 0/1
    std::vector<double> latents;
    std::uint64_t seed = 0;

    bool edge(int i, int j) const { return adj[static_cast<std::size_t>(i) * n + j] != 0; }
    int degree(int i) const {
        int d = 0;
        for (int j = 0; j < n; ++j) d += edge(i, j);
        return d;
    }
    int edge_count() const {
        int e = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) e += edge(i, j);
        return e;
    }

    std::string edge_list(const std::string& graphon_desc) const {
        std::ostringstream os;
        os << "# wrandom n=" << n << " seed=" << seed << " graphon=" << graphon_desc << "\n";
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (edge(i, j)) os << i + 1 << " " << j + 1 << "\n";
        return os.str();
    }
};

inline SampledGraph sample_graph(const Graphon& w, int n, std::uint64_t seed) {
    if (!w.in_w0()) throw std::invalid_argument("sampling requires a graphon with range in [0,1]");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    SampledGraph g;
    g.n = n;
    g.seed = seed;
    g.adj.assign(static_cast<std::size_t>(n) * n, 0);
    g.latents.resize(n);
    for (int i = 0; i < n; ++i) g.latents[i] = CounterRng(seed, i).next_double();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            CounterRng rng(seed, static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(i) * n + j);
            double p;
            try {
                p = w.eval(g.latents[i], g.latents[j]);
            } catch (const undetermined_point&) {
                p = 0.0;  // measure-zero tie; resolved as a non-edge
            }
            if (rng.next_coin(p)) g.adj[static_cast<std::size_t>(i) * n + j] = g.adj[static_cast<std::size_t>(j) * n + i] = 1;
        }
    return g;
}

// ---- degree statistics and the concentration bound --------------------------------

struct DegreeReport {
    double max_normalized = 0, min_normalized = 0;
    double max_deviation = 0;    // from the expected degree d
    double azuma_bound = 0;      // 1 - 2n e^{-(n-1) eps^2}; may be negative
    bool within_eps = false;     // every normalized degree within eps of d
};

inline DegreeReport degree_report(const SampledGraph& g, double d, double eps) {
    DegreeReport r;
    if (g.n < 2) throw std::invalid_argument("degree report needs n >= 2");
    r.min_normalized = 1.0;
    r.max_normalized = 0.0;
    for (int i = 0; i < g.n; ++i) {
        double nd = static_cast<double>(g.degree(i)) / (g.n - 1);
        r.max_normalized = std::max(r.max_normalized, nd);
        r.min_normalized = std::min(r.min_normalized, nd);
        r.max_deviation = std::max(r.max_deviation, std::abs(nd - d));
    }
    r.azuma_bound = 1.0 - 2.0 * g.n * std::exp(-(g.n - 1) * eps * eps);
    r.within_eps = r.max_deviation < eps;
    return r;
}

// ---- induced path detection ---------------------------------------------------------

// Exhaustive quadruple scan; a 4-subset induces a path exactly when it spans
// 3 edges with degree multiset {1,1,2,2}.
inline long long induced_p4_count(const SampledGraph& g, int cap = 200) {
    if (g.n > cap) throw std::invalid_argument("induced-P4 scan capped at n=200");
    long long count = 0;
    const int n = g.n;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    int v[4] = {a, b, c, d};
                    int deg[4] = {0, 0, 0, 0};
                    int edges = 0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = i + 1; j < 4; ++j)
                            if (g.edge(v[i], v[j])) {
                                ++edges;
                                ++deg[i];
                                ++deg[j];
                            }
                    if (edges != 3) continue;
                    int ones = 0, twos = 0;
                    for (int i = 0; i < 4; ++i) {
                        ones += deg[i] == 1;
                        twos += deg[i] == 2;
                    }
                    if (ones == 2 && twos == 2) ++count;
                }
    return count;
}

inline bool induced_p4_free(const SampledGraph& g, int cap = 200) { return induced_p4_count(g, cap) == 0; }

// ---- exact small-graph densities -----------------------------------------------------

namespace detail {

// Homomorphism count via adjacency-matrix algebra for the standard shapes,
// brute force fallback for anything else small.
inline double hom_density(const Graph& f0, const SampledGraph& g) {
    Graph f = f0.canonical();
    if (!f.all_blue() || !f.simple() || f.label_count() != 0)
        throw std::invalid_argument("sampled-graph densities need plain simple graphs");
    const int n = g.n;
    const int nf = f.node_count();
    const double nn = static_cast<double>(n);

    auto matvec = [&](const std::vector<double>& x) {
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            const std::uint8_t* row = &g.adj[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
        return y;
    };
    std::vector<double> ones(n, 1.0);

    auto is = [&](const Graph& h) { return f == h.canonical(); };

    if (is(graphs::empty(nf))) return 1.0;
    if (is(graphs::k2())) {
        auto a1 = matvec(ones);
        double s = 0;
        for (double v : a1) s += v;
        return s / std::pow(nn, 2);
    }
    for (int len = 3; len <= 5; ++len)
        if (is(graphs::path(len))) {
            auto v = ones;
            for (int s = 0; s < len - 1; ++s) v = matvec(v);
            double total = 0;
            for (double x : v) total += x;
            return total / std::pow(nn, len);
        }
    if (is(graphs::k3())) {
        auto a1 = matvec(ones);
        (void)a1;
        double tr = 0;
        for (int i = 0; i < n; ++i) {
            std::vector<double> e(n, 0.0);
            e[i] = 1.0;
            auto a3 = matvec(matvec(matvec(e)));
            tr += a3[i];
        }
        return tr / std::pow(nn, 3);
    }
    if (is(graphs::c4())) {
        // tr(A^4) = Frobenius norm of A^2; compute row by row.
        double total = 0;
        for (int i = 0; i < n; ++i) {
            std::vector<double> e(n, 0.0);
            e[i] = 1.0;
            auto a2 = matvec(matvec(e));
            for (double v : a2) total += v * v;
        }
        return total / std::pow(nn, 4);
    }
    if (is(graphs::cycle(5))) {
        double total = 0;
        for (int i = 0; i < n; ++i) {
            std::vector<double> e(n, 0.0);
            e[i] = 1.0;
            auto a5 = matvec(matvec(matvec(matvec(matvec(e)))));
            total += a5[i];
        }
        return total / std::pow(nn, 5);
    }
    for (int leaves = 3; leaves <= 4; ++leaves)
        if (is(graphs::biclique(1, leaves))) {
            auto a1 = matvec(ones);
            double s = 0;
            for (double v : a1) s += std::pow(v, leaves);
            return s / std::pow(nn, leaves + 1);
        }

    // Brute force over maps V(F) -> V(G).
    if (std::pow(nn, nf) > 2e7) throw std::invalid_argument("graph too large for exact counting");
    std::vector<int> map(nf, 0);
    long long good = 0;
    while (true) {
        bool ok = true;
        for (int u = 0; u < nf && ok; ++u)
            for (int v = u + 1; v < nf && ok; ++v)
                if (f.blue_mult(u, v) && !g.edge(map[u], map[v])) ok = false;
        good += ok;
        int pos = 0;
        while (pos < nf && ++map[pos] == n) map[pos++] = 0;
        if (pos == nf) break;
    }
    return static_cast<double>(good) / std::pow(nn, nf);
}

}  // namespace detail

inline double sampled_density(const Graph& f, const SampledGraph& g) { return detail::hom_density(f, g); }

// ---- convergence experiment ----------------------------------------------------------

struct ConvergenceRow {
    int n = 0;
    double mean = 0, spread = 0;  // spread = sample standard deviation
    double target = 0;
};

inline std::vector<ConvergenceRow> convergence_experiment(const Graphon& w, const Graph& f,
                                                          const std::vector<int>& n_list, int trials,
                                                          std::uint64_t seed, double target) {
    if (f.node_count() > 5) throw std::invalid_argument("convergence experiment limited to |V(F)| <= 5");
    std::vector<ConvergenceRow> rows;
    for (int n : n_list) {
        ConvergenceRow row;
        row.n = n;
        row.target = target;
        std::vector<double> vals;
        for (int t = 0; t < trials; ++t) {
            auto g = sample_graph(w, n, mix64(seed + 1000003ULL * t) ^ static_cast<std::uint64_t>(n));
            vals.push_back(sampled_density(f, g));
        }
        double mean = 0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double var = 0;
        for (double v : vals) var += (v - mean) * (v - mean);
        row.mean = mean;
        row.spread = vals.size() > 1 ? std::sqrt(var / (vals.size() - 1)) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace graphonlab
