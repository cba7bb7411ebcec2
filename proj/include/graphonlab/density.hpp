#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphonlab/config.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/parallel.hpp"
#include "graphonlab/quantum.hpp"
#include "graphonlab/rng.hpp"

namespace graphonlab {

enum class Method { exact_step, mc, grid };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::exact_step: return "exact_step";
        case Method::mc: return "mc";
        case Method::grid: return "grid";
    }
    return "?";
}

struct DensityEstimate {
    double value = 0.0;
    double stderr_ = 0.0;  // 0 for exact
    Method method = Method::exact_step;
    std::size_t n = 0;  // samples or grid resolution
    std::uint64_t seed = 0;
    std::size_t excluded = 0;  // undetermined samples skipped (CR evaluators)

    std::string csv_row(const std::string& graph, const std::string& graphon) const;
};

struct density_cap_error : std::runtime_error {
    density_cap_error() : std::runtime_error("exact step density exceeds the summand cap") {}
};

namespace detail {

// Exact density of one term with labeled nodes pinned to given blocks.
// Sums over all block assignments of the unlabeled nodes.
inline double term_exact_blocks(const Graph& g, const StepStructure& s,
                                const std::vector<int>& label_blocks, double cap) {
    const int n = g.node_count();
    const int k = g.label_count();
    const int m = s.size();
    const int free_count = n - k;
    if (free_count > 0 && std::pow(static_cast<double>(m), free_count) > cap) throw density_cap_error();

    std::vector<int> node_block(n, -1);
    std::vector<int> free_nodes;
    for (int p = 1; p <= k; ++p) node_block[g.label_node(p)] = label_blocks[p - 1];
    for (int u = 0; u < n; ++u)
        if (node_block[u] < 0) free_nodes.push_back(u);

    struct PairRef {
        int u, v, bm, rm;
    };
    std::vector<PairRef> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (g.pair_mult(u, v)) pairs.push_back({u, v, g.blue_mult(u, v), g.red_mult(u, v)});

    std::vector<int> assign(free_nodes.size(), 0);
    double total = 0.0;
    while (true) {
        for (std::size_t i = 0; i < free_nodes.size(); ++i) node_block[free_nodes[i]] = assign[i];
        double prod = 1.0;
        for (std::size_t i = 0; i < free_nodes.size(); ++i) prod *= s.weights[assign[i]];
        for (const auto& pr : pairs) {
            double v = s.at(node_block[pr.u], node_block[pr.v]);
            for (int t = 0; t < pr.bm; ++t) prod *= v;
            for (int t = 0; t < pr.rm; ++t) prod *= (1.0 - v);
            if (prod == 0.0) break;
        }
        total += prod;

        std::size_t pos = 0;
        while (pos < assign.size() && ++assign[pos] == m) assign[pos++] = 0;
        if (pos == assign.size()) break;
    }
    return total;
}

// One Monte Carlo sample of a quantum graph: every term gets fresh points
// for its unlabeled nodes from the per-sample stream; labeled coordinates
// are shared and fixed.
inline double sample_value(const QuantumGraph& f, const Graphon& w, const std::vector<double>& labels,
                           CounterRng& rng) {
    double val = 0.0;
    std::vector<double> pts;
    for (const auto& [g, c] : f.terms()) {
        const int n = g.node_count();
        const int k = g.label_count();
        pts.assign(n, 0.0);
        std::vector<bool> labeled(n, false);
        for (int p = 1; p <= k; ++p) {
            pts[g.label_node(p)] = labels[p - 1];
            labeled[g.label_node(p)] = true;
        }
        for (int u = 0; u < n; ++u)
            if (!labeled[u]) pts[u] = rng.next_double();
        double prod = 1.0;
        for (int u = 0; u < n && prod != 0.0; ++u)
            for (int v = u + 1; v < n; ++v) {
                int bm = g.blue_mult(u, v), rm = g.red_mult(u, v);
                if (!bm && !rm) continue;
                double x = w.eval(pts[u], pts[v]);
                for (int t = 0; t < bm; ++t) prod *= x;
                for (int t = 0; t < rm; ++t) prod *= (1.0 - x);
            }
        val += c.value() * prod;
    }
    return val;
}

}  // namespace detail

// t^k evaluated exactly on a stepfunction with the labels pinned to blocks.
inline double tk_exact_blocks(const QuantumGraph& f, const Graphon& w, const std::vector<int>& blocks,
                              const Config& cfg = Config::defaults()) {
    const auto* s = w.steps();
    if (!s) throw std::invalid_argument("exact evaluation requires a step structure");
    double total = 0.0;
    for (const auto& [g, c] : f.terms())
        total += c.value() * detail::term_exact_blocks(g, *s, blocks, cfg.exact_cap);
    return total;
}

inline DensityEstimate t_exact_step(const QuantumGraph& f, const Graphon& w,
                                    const Config& cfg = Config::defaults()) {
    DensityEstimate e;
    e.method = Method::exact_step;
    e.n = w.steps() ? static_cast<std::size_t>(w.steps()->size()) : 0;
    if (!f.is_zero() && f.label_count() != 0)
        throw std::invalid_argument("t_exact_step expects an unlabeled quantum graph");
    e.value = tk_exact_blocks(f, w, {}, cfg);
    return e;
}

// Partially labeled density at a point tuple: exact when a step structure is
// present, Monte Carlo over the unlabeled coordinates otherwise.
inline DensityEstimate tk_eval(const QuantumGraph& f, const Graphon& w, const std::vector<double>& x,
                               std::size_t n, std::uint64_t seed,
                               const Config& cfg = Config::defaults()) {
    if (!f.is_zero() && f.label_count() != static_cast<int>(x.size()))
        throw std::invalid_argument("label tuple arity mismatch");
    if (const auto* s = w.steps()) {
        std::vector<int> blocks;
        blocks.reserve(x.size());
        for (double xi : x) blocks.push_back(s->block_of(xi));
        DensityEstimate e;
        e.method = Method::exact_step;
        e.n = static_cast<std::size_t>(s->size());
        e.seed = seed;
        e.value = tk_exact_blocks(f, w, blocks, cfg);
        return e;
    }

    DensityEstimate e;
    e.method = Method::mc;
    e.n = n;
    e.seed = seed;
    if (n == 0) throw std::invalid_argument("mc needs n >= 1");

    const std::size_t chunk = cfg.mc_chunk;
    const std::size_t chunks = (n + chunk - 1) / chunk;
    struct Acc {
        double sum = 0, sumsq = 0;
        std::size_t count = 0, excluded = 0;
    };
    std::vector<Acc> acc(chunks);
    parallel_chunks(chunks, [&](std::size_t c) {
        std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
        Acc a;
        for (std::size_t i = lo; i < hi; ++i) {
            CounterRng rng(seed, i);
            try {
                double v = detail::sample_value(f, w, x, rng);
                a.sum += v;
                a.sumsq += v * v;
                ++a.count;
            } catch (const undetermined_point&) {
                ++a.excluded;
            }
        }
        acc[c] = a;
    });
    double sum = 0, sumsq = 0;
    std::size_t count = 0, excluded = 0;
    for (const auto& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
        count += a.count;
        excluded += a.excluded;
    }
    if (count == 0) throw std::runtime_error("all samples excluded");
    e.value = sum / count;
    if (count > 1) {
        double var = (sumsq - count * e.value * e.value) / (count - 1);
        e.stderr_ = std::sqrt(std::max(var, 0.0) / count);
    }
    e.excluded = excluded;
    return e;
}

inline DensityEstimate t_mc(const QuantumGraph& f, const Graphon& w, std::size_t n, std::uint64_t seed,
                            const Config& cfg = Config::defaults()) {
    if (!f.is_zero() && f.label_count() != 0)
        throw std::invalid_argument("t_mc expects an unlabeled quantum graph (use tk_eval)");
    Graphon wf = w;
    if (w.steps()) {
        // Force the sampling path even for stepfunctions.
        Graphon base = w;
        wf = Graphon::from_eval([base](double a, double b) { return base.eval(a, b); }, w.lo(), w.hi(),
                                w.desc());
    }
    return tk_eval(f, wf, {}, n, seed, cfg);
}

// Density by the best available route: exact on stepfunctions, MC otherwise.
inline DensityEstimate t_auto(const QuantumGraph& f, const Graphon& w,
                              const Config& cfg = Config::defaults()) {
    if (w.steps()) return t_exact_step(f, w, cfg);
    return tk_eval(f, w, {}, cfg.mc_samples, cfg.seed, cfg);
}

inline DensityEstimate t_grid(const QuantumGraph& f, const Graphon& w, int resolution,
                              const Config& cfg = Config::defaults()) {
    Graphon d = discretize(w, resolution, cfg.discretize_subsample);
    DensityEstimate e = t_exact_step(f, d, cfg);
    e.method = Method::grid;
    e.n = resolution;
    return e;
}

// Statistical proxy for "t^k(f,W) = 0 almost everywhere": random label
// tuples, each estimate within max(3*stderr, 1e-9) of zero. Falsifiable
// evidence, not a proof.
inline bool tk_is_zero(const QuantumGraph& f, const Graphon& w, std::uint64_t seed,
                       const Config& cfg = Config::defaults(), std::size_t mc_n = 20000) {
    if (f.is_zero()) return true;
    const int k = f.label_count();
    for (int t = 0; t < cfg.ae_zero_samples; ++t) {
        CounterRng rng(seed ^ 0xae0ull, t);
        std::vector<double> x(k);
        for (auto& xi : x) xi = rng.next_double();
        DensityEstimate e = tk_eval(f, w, x, mc_n, seed + t, cfg);
        double tol = std::max(3 * e.stderr_, 1e-9);
        if (std::abs(e.value) > tol) return false;
    }
    return true;
}

// ---- one-variable moments ----------------------------------------------------

// A one-variable function: stepfunction (exact moments) or closure
// (composite Gauss-Legendre quadrature).
class OneVarFunc {
  public:
    static OneVarFunc step(std::vector<double> cell_lengths, std::vector<double> values) {
        if (cell_lengths.size() != values.size() || values.empty())
            throw std::invalid_argument("step function shape mismatch");
        OneVarFunc f;
        f.lengths_ = std::move(cell_lengths);
        f.values_ = std::move(values);
        double tot = 0;
        for (double l : f.lengths_) {
            if (l <= 0) throw std::invalid_argument("step cells must have positive length");
            tot += l;
        }
        if (std::abs(tot - 1.0) > 1e-9) throw std::invalid_argument("step cells must cover [0,1]");
        return f;
    }
    static OneVarFunc closure(std::function<double(double)> fn) {
        OneVarFunc f;
        f.fn_ = std::move(fn);
        return f;
    }

    bool is_step() const { return !values_.empty(); }
    const std::vector<double>& lengths() const { return lengths_; }
    const std::vector<double>& values() const { return values_; }

    double eval(double x) const {
        if (!is_step()) return fn_(x);
        double c = 0;
        for (std::size_t i = 0; i < lengths_.size(); ++i) {
            c += lengths_[i];
            if (x < c || i + 1 == lengths_.size()) return values_[i];
        }
        return values_.back();
    }

  private:
    std::vector<double> lengths_, values_;
    std::function<double(double)> fn_;
};

namespace detail {

inline double gauss_legendre_01(const std::function<double(double)>& f, int panels = 256) {
    // 5-point Gauss-Legendre nodes/weights on [-1,1].
    static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    double total = 0;
    double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        double a = p * h, mid = a + h / 2, half = h / 2;
        for (int i = 0; i < 5; ++i) total += ws[i] * f(mid + half * xs[i]);
    }
    return total * (0.5 / panels);
}

}  // namespace detail

// M(w, a) = integral over [0,1] of prod_i w_i(x)^{a_i}.
inline double moments(const std::vector<OneVarFunc>& w, const std::vector<int>& a, int panels = 256) {
    if (w.size() != a.size()) throw std::invalid_argument("moment arity mismatch");
    for (int ai : a)
        if (ai < 0) throw std::invalid_argument("moment exponents must be nonnegative");
    bool all_steps = true;
    for (const auto& f : w) all_steps = all_steps && f.is_step();
    if (all_steps && !w.empty()) {
        // Merge breakpoints, then sum cell length x product of powers.
        std::vector<double> cuts = {0.0};
        for (const auto& f : w) {
            double c = 0;
            for (std::size_t i = 0; i + 1 < f.lengths().size(); ++i) {
                c += f.lengths()[i];
                cuts.push_back(c);
            }
        }
        cuts.push_back(1.0);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double a_, double b_) { return std::abs(a_ - b_) < 1e-15; }),
                   cuts.end());
        double total = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double mid = 0.5 * (cuts[i] + cuts[i + 1]);
            double prod = 1.0;
            for (std::size_t j = 0; j < w.size(); ++j) prod *= std::pow(w[j].eval(mid), a[j]);
            total += (cuts[i + 1] - cuts[i]) * prod;
        }
        return total;
    }
    auto integrand = [&](double x) {
        double prod = 1.0;
        for (std::size_t j = 0; j < w.size(); ++j) prod *= std::pow(w[j].eval(x), a[j]);
        return prod;
    };
    if (w.empty()) return 1.0;
    return detail::gauss_legendre_01(integrand, panels);
}

// Finite-rank expansion: for W = sum_k lambda_k w_k(x) w_k(y),
// t(F,W) = sum over edge colorings phi of lambda_phi prod_i M(w, d(phi, i)).
inline double finite_rank_density(const Graph& f0, const std::vector<double>& lambdas,
                                  const std::vector<OneVarFunc>& w, double cap = 1e7) {
    Graph f = f0.canonical();
    if (!f.all_blue() || !f.simple()) throw std::invalid_argument("finite_rank_density expects a simple blue graph");
    if (lambdas.size() != w.size()) throw std::invalid_argument("rank mismatch");
    const int r = static_cast<int>(lambdas.size());
    const int n = f.node_count();
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (f.blue_mult(u, v)) edges.push_back({u, v});
    if (std::pow(static_cast<double>(r), static_cast<double>(edges.size())) > cap)
        throw density_cap_error();

    std::map<std::vector<int>, double> mcache;
    auto moment_of = [&](const std::vector<int>& d) {
        auto it = mcache.find(d);
        if (it != mcache.end()) return it->second;
        double v = moments(w, d);
        mcache.emplace(d, v);
        return v;
    };

    std::vector<int> phi(edges.size(), 0);
    double total = 0;
    while (true) {
        double lam = 1.0;
        for (int t : phi) lam *= lambdas[t];
        std::vector<std::vector<int>> deg(n, std::vector<int>(r, 0));
        for (std::size_t e = 0; e < edges.size(); ++e) {
            deg[edges[e].first][phi[e]]++;
            deg[edges[e].second][phi[e]]++;
        }
        double prod = lam;
        for (int i = 0; i < n && prod != 0.0; ++i) prod *= moment_of(deg[i]);
        total += prod;

        std::size_t pos = 0;
        while (pos < phi.size() && ++phi[pos] == r) phi[pos++] = 0;
        if (pos == phi.size() || edges.empty()) break;
    }
    return total;
}

// ---- variational derivative check --------------------------------------------

struct VariationalResult {
    double lhs = 0, rhs = 0, rel_error = 0;
};

// Central difference of t(F, w + t*delta) against the pairing of delta with
// the edge-derivative t^2(F ddag, w); both sides exact on the shared
// partition.
inline VariationalResult variational_check(const Graph& f, const Graphon& w, const Graphon& delta,
                                           double h, const Config& cfg = Config::defaults()) {
    const StepStructure *sw = w.steps(), *sd = delta.steps();
    if (!sw || !sd || sw->weights.size() != sd->weights.size())
        throw std::invalid_argument("variational_check requires one shared step partition");
    for (std::size_t i = 0; i < sw->weights.size(); ++i)
        if (std::abs(sw->weights[i] - sd->weights[i]) > 1e-12)
            throw std::invalid_argument("variational_check: partitions differ");

    QuantumGraph qf(f);
    Graphon plus = step_combine(w, delta, [h](double a, double b) { return a + h * b; }, "(w+h*d)");
    Graphon minus = step_combine(w, delta, [h](double a, double b) { return a - h * b; }, "(w-h*d)");
    double lhs = (t_exact_step(qf, plus, cfg).value - t_exact_step(qf, minus, cfg).value) / (2 * h);

    QuantumGraph ddag = razborov(f, RazborovMode::ddag);
    const int m = sw->size();
    double rhs = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double tij = tk_exact_blocks(ddag, w, {i, j}, cfg);
            rhs += sw->weights[i] * sw->weights[j] * sd->at(i, j) * tij;
        }
    VariationalResult r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.rel_error = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
    return r;
}

inline std::string DensityEstimate::csv_row(const std::string& graph, const std::string& graphon) const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.17g,%.17g,%zu,%llu", graph.c_str(), graphon.c_str(),
                  method_name(method), value, stderr_, n,
                  static_cast<unsigned long long>(seed));
    return buf;
}

}  // namespace graphonlab
