#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphonlab/graph.hpp"
#include "graphonlab/poly.hpp"
#include "graphonlab/rng.hpp"

namespace graphonlab {

// Raised by evaluators that cannot decide a point pair (tree descent past
// max_depth). Monte Carlo layers count and skip such samples.
struct undetermined_point : std::runtime_error {
    undetermined_point() : std::runtime_error("point pair undetermined at max depth") {}
};

// Stepfunction data: m blocks with positive weights summing to 1 and a
// symmetric m x m value matrix.
struct StepStructure {
    std::vector<double> weights;
    std::vector<double> values;  // row-major m*m
    std::vector<double> cum;     // m+1 prefix sums of weights

    int size() const { return static_cast<int>(weights.size()); }
    double at(int i, int j) const { return values[i * size() + j]; }
    double& at(int i, int j) { return values[i * size() + j]; }

    void finalize() {
        const int m = size();
        if (m == 0) throw std::invalid_argument("empty step structure");
        if (values.size() != static_cast<std::size_t>(m) * m)
            throw std::invalid_argument("step value matrix size mismatch");
        double total = 0;
        for (double w : weights) {
            if (w <= 0) throw std::invalid_argument("step weights must be positive");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("step weights must sum to 1");
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < i; ++j)
                if (std::abs(at(i, j) - at(j, i)) > 1e-12)
                    throw std::invalid_argument("step value matrix must be symmetric");
        cum.assign(m + 1, 0.0);
        for (int i = 0; i < m; ++i) cum[i + 1] = cum[i] + weights[i];
        cum[m] = 1.0;
    }

    // Ties at cumulative boundaries resolve to the earlier block (measure
    // zero; keeps every interval descent in the library consistent).
    int block_of(double x) const {
        if (x <= 0) return 0;
        if (x >= 1) return size() - 1;
        int it = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), x) - cum.begin()) - 1;
        return std::min(std::max(it, 0), size() - 1);
    }

    double eval(double x, double y) const { return at(block_of(x), block_of(y)); }

    double min_value() const { return *std::min_element(values.begin(), values.end()); }
    double max_value() const { return *std::max_element(values.begin(), values.end()); }
};

// Immutable symmetric bounded kernel on [0,1]^2: a pure two-point evaluator
// plus metadata (bounds, exact step structure when available, level-set
// boundary polynomial when available).
class Graphon {
  public:
    Graphon() = default;

    static Graphon from_eval(std::function<double(double, double)> f, double lo, double hi,
                             std::string desc) {
        Graphon w;
        w.eval_ = std::move(f);
        w.lo_ = lo;
        w.hi_ = hi;
        w.desc_ = std::move(desc);
        return w;
    }

    static Graphon from_steps(StepStructure s, std::string desc) {
        s.finalize();
        auto sp = std::make_shared<const StepStructure>(std::move(s));
        Graphon w;
        w.eval_ = [sp](double x, double y) { return sp->eval(x, y); };
        w.lo_ = sp->min_value();
        w.hi_ = sp->max_value();
        w.steps_ = sp;
        w.desc_ = std::move(desc);
        return w;
    }

    double eval(double x, double y) const { return eval_(x, y); }
    double operator()(double x, double y) const { return eval_(x, y); }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool in_w0() const { return lo_ >= 0.0 && hi_ <= 1.0; }

    const StepStructure* steps() const { return steps_.get(); }
    const Poly2* levelset_poly() const { return levelset_.get(); }
    const std::string& desc() const { return desc_; }

    Graphon with_levelset(const Poly2& p) const {
        Graphon w = *this;
        w.levelset_ = std::make_shared<const Poly2>(p);
        return w;
    }

  private:
    std::function<double(double, double)> eval_;
    double lo_ = 0.0, hi_ = 0.0;
    std::shared_ptr<const StepStructure> steps_;
    std::shared_ptr<const Poly2> levelset_;
    std::string desc_;
};

// ---- constructors -----------------------------------------------------------

inline Graphon constant_graphon(double c) {
    StepStructure s;
    s.weights = {1.0};
    s.values = {c};
    return Graphon::from_steps(std::move(s), "(const " + std::to_string(c) + ")");
}

inline Graphon levelset_graphon(const Poly2& p, std::string desc = "") {
    if (!p.symmetric()) throw std::invalid_argument("level-set polynomial must be symmetric");
    auto f = [p](double x, double y) { return p.eval(x, y) >= 0.0 ? 1.0 : 0.0; };
    if (desc.empty()) desc = "(levelset ...)";
    return Graphon::from_eval(f, 0.0, 1.0, std::move(desc)).with_levelset(p);
}

// 1_{x+y<=1}, the limit of half-graphs.
inline Graphon half_graphon() {
    Graphon w = levelset_graphon(poly_half(), "(half)");
    return w;
}

inline Graphon graphon_of_graph(const Graph& g0, std::string desc = "") {
    Graph g = g0.canonical();
    if (!g.all_blue() || !g.simple()) throw std::invalid_argument("graphon_of_graph expects a simple blue graph");
    const int n = g.node_count();
    StepStructure s;
    s.weights.assign(n, 1.0 / n);
    s.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.at(i, j) = g.blue_mult(i, j) ? 1.0 : 0.0;
    return Graphon::from_steps(std::move(s), desc.empty() ? "(graph)" : desc);
}

inline Graphon complement(const Graphon& w) {
    if (const auto* st = w.steps()) {
        StepStructure s = *st;
        for (auto& v : s.values) v = 1.0 - v;
        return Graphon::from_steps(std::move(s), "(complement " + w.desc() + ")");
    }
    return Graphon::from_eval([w](double x, double y) { return 1.0 - w.eval(x, y); }, 1.0 - w.hi(),
                              1.0 - w.lo(), "(complement " + w.desc() + ")");
}

inline Graphon affine(double a, double b, const Graphon& w) {
    double v1 = a * w.lo() + b, v2 = a * w.hi() + b;
    if (const auto* st = w.steps()) {
        StepStructure s = *st;
        for (auto& v : s.values) v = a * v + b;
        return Graphon::from_steps(std::move(s), "(affine)");
    }
    return Graphon::from_eval([a, b, w](double x, double y) { return a * w.eval(x, y) + b; },
                              std::min(v1, v2), std::max(v1, v2), "(affine)");
}

// Weighted direct sum: blocks laid out left to right in argument order,
// zero off the diagonal blocks.
inline Graphon direct_sum(const std::vector<std::pair<double, Graphon>>& parts) {
    if (parts.empty()) throw std::invalid_argument("direct sum needs at least one part");
    double total = 0;
    for (const auto& [a, w] : parts) {
        if (a <= 0) throw std::invalid_argument("direct sum weights must be positive");
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("direct sum weights must sum to 1");

    bool all_steps = true;
    for (const auto& [a, w] : parts) all_steps = all_steps && w.steps();
    if (all_steps) {
        StepStructure s;
        std::vector<int> offset;
        for (const auto& [a, w] : parts) {
            offset.push_back(static_cast<int>(s.weights.size()));
            for (double pw : w.steps()->weights) s.weights.push_back(a * pw);
        }
        const int m = static_cast<int>(s.weights.size());
        s.values.assign(static_cast<std::size_t>(m) * m, 0.0);
        for (std::size_t p = 0; p < parts.size(); ++p) {
            const auto* st = parts[p].second.steps();
            for (int i = 0; i < st->size(); ++i)
                for (int j = 0; j < st->size(); ++j) s.at(offset[p] + i, offset[p] + j) = st->at(i, j);
        }
        return Graphon::from_steps(std::move(s), "(dsum)");
    }

    std::vector<double> cuts(parts.size() + 1, 0.0);
    for (std::size_t p = 0; p < parts.size(); ++p) cuts[p + 1] = cuts[p] + parts[p].first;
    cuts.back() = 1.0;
    auto locate = [cuts](double x) {  // ties resolve to the earlier block
        int lo = 0, hi = static_cast<int>(cuts.size()) - 2;
        while (lo < hi) {
            int mid = (lo + hi + 1) / 2;
            if (x > cuts[mid])
                lo = mid;
            else
                hi = mid - 1;
        }
        return lo;
    };
    double lo = 0.0, hi = 0.0;
    for (const auto& [a, w] : parts) {
        lo = std::min(lo, w.lo());
        hi = std::max(hi, w.hi());
    }
    auto parts_copy = parts;
    auto f = [parts_copy, cuts, locate](double x, double y) -> double {
        int bx = locate(x), by = locate(y);
        if (bx != by) return 0.0;
        double a = parts_copy[bx].first;
        return parts_copy[bx].second.eval((x - cuts[bx]) / a, (y - cuts[bx]) / a);
    };
    return Graphon::from_eval(f, lo, hi, "(dsum)");
}

inline Graphon pointwise_product(const Graphon& u, const Graphon& w) {
    const auto *su = u.steps(), *sw = w.steps();
    if (su && sw && su->weights.size() == sw->weights.size()) {
        bool same = true;
        for (std::size_t i = 0; i < su->weights.size(); ++i)
            same = same && std::abs(su->weights[i] - sw->weights[i]) < 1e-12;
        if (same) {
            StepStructure s = *su;
            for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= sw->values[i];
            return Graphon::from_steps(std::move(s), "(pprod)");
        }
    }
    double c[4] = {u.lo() * w.lo(), u.lo() * w.hi(), u.hi() * w.lo(), u.hi() * w.hi()};
    return Graphon::from_eval([u, w](double x, double y) { return u.eval(x, y) * w.eval(x, y); },
                              *std::min_element(c, c + 4), *std::max_element(c, c + 4), "(pprod)");
}

// Deterministic cell averaging over an s x s subsample of each grid cell.
inline Graphon discretize(const Graphon& w, int m, int subsample = 3) {
    if (m < 1) throw std::invalid_argument("resolution must be >= 1");
    if (const auto* st = w.steps()) {
        // Already a uniform m-step function: block averages reproduce it.
        if (st->size() == m) {
            bool uniform = true;
            for (double wt : st->weights) uniform = uniform && std::abs(wt - 1.0 / m) < 1e-15;
            if (uniform) return w;
        }
    }
    StepStructure s;
    s.weights.assign(m, 1.0 / m);
    s.values.assign(static_cast<std::size_t>(m) * m, 0.0);
    const int ss = std::max(1, subsample);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double acc = 0;
            for (int a = 0; a < ss; ++a)
                for (int b = 0; b < ss; ++b) {
                    double x = (i + (a + 0.5) / ss) / m;
                    double y = (j + (b + 0.5) / ss) / m;
                    acc += w.eval(x, y);
                }
            double v = acc / (ss * ss);
            s.at(i, j) = v;
            s.at(j, i) = v;
        }
    return Graphon::from_steps(std::move(s), "(discretize " + std::to_string(m) + " " + w.desc() + ")");
}

// Kernel-operator product (U o W)(x,y) = int U(x,z) W(z,y) dz. Exact when the
// operands share a step partition; otherwise both are discretized at
// resolution m first (O(1/m) accuracy heuristic for indicator kernels).
inline Graphon operator_product(const Graphon& u, const Graphon& w, int m = 1024) {
    const StepStructure *su = u.steps(), *sw = w.steps();
    bool shared = su && sw && su->weights.size() == sw->weights.size();
    if (shared)
        for (std::size_t i = 0; i < su->weights.size(); ++i)
            shared = shared && std::abs(su->weights[i] - sw->weights[i]) < 1e-12;
    Graphon ud = shared ? u : discretize(u, m);
    Graphon wd = shared ? w : discretize(w, m);
    su = ud.steps();
    sw = wd.steps();
    const int n = su->size();
    StepStructure s;
    s.weights = su->weights;
    s.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0;
            for (int k = 0; k < n; ++k) acc += su->at(i, k) * su->weights[k] * sw->at(k, j);
            s.at(i, j) = acc;
        }
    // Guard against asymmetric rounding when u != w.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            double v = 0.5 * (s.at(i, j) + s.at(j, i));
            s.at(i, j) = s.at(j, i) = v;
        }
    return Graphon::from_steps(std::move(s), "(oprod)");
}

namespace detail {

// Measure-preserving map [0,1] -> [0,1]^2 by binary digit interleaving:
// odd-indexed digits form the first coordinate, even-indexed the second.
inline std::pair<double, double> interleave_split(double x) {
    std::uint64_t bits = static_cast<std::uint64_t>(std::ldexp(std::min(std::max(x, 0.0), 0x1.fffffffffffffp-1), 64));
    std::uint64_t a = 0, b = 0;
    for (int i = 0; i < 32; ++i) {
        a = (a << 1) | ((bits >> (63 - 2 * i)) & 1u);
        b = (b << 1) | ((bits >> (62 - 2 * i)) & 1u);
    }
    return {std::ldexp(static_cast<double>(a), -32), std::ldexp(static_cast<double>(b), -32)};
}

}  // namespace detail

// Tensor product evaluated through the digit-interleaving map; any
// measure-preserving choice gives a weakly isomorphic graphon.
inline Graphon tensor_graphon(const Graphon& u, const Graphon& w) {
    double c[4] = {u.lo() * w.lo(), u.lo() * w.hi(), u.hi() * w.lo(), u.hi() * w.hi()};
    auto f = [u, w](double x, double y) {
        auto [x1, x2] = detail::interleave_split(x);
        auto [y1, y2] = detail::interleave_split(y);
        return u.eval(x1, y1) * w.eval(x2, y2);
    };
    return Graphon::from_eval(f, *std::min_element(c, c + 4), *std::max_element(c, c + 4),
                              "(tensor " + u.desc() + " " + w.desc() + ")");
}

// Pointwise combination of two stepfunctions on one partition.
inline Graphon step_combine(const Graphon& a, const Graphon& b,
                            const std::function<double(double, double)>& f, const std::string& desc) {
    const StepStructure *sa = a.steps(), *sb = b.steps();
    if (!sa || !sb || sa->weights.size() != sb->weights.size())
        throw std::invalid_argument("step_combine requires stepfunctions on one partition");
    for (std::size_t i = 0; i < sa->weights.size(); ++i)
        if (std::abs(sa->weights[i] - sb->weights[i]) > 1e-12)
            throw std::invalid_argument("step_combine: partitions differ");
    StepStructure s = *sa;
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = f(sa->values[i], sb->values[i]);
    return Graphon::from_steps(std::move(s), desc);
}

// Symmetry / bounds spot check: every implementation must evaluate exactly
// symmetrically; values must respect the declared bounds.
inline bool spot_check(const Graphon& w, int pairs = 10000, std::uint64_t seed = 17) {
    CounterRng rng(seed, 0);
    for (int i = 0; i < pairs; ++i) {
        double x = rng.next_double(), y = rng.next_double();
        double a, b;
        try {
            a = w.eval(x, y);
            b = w.eval(y, x);
        } catch (const undetermined_point&) {
            continue;
        }
        if (a != b) return false;
        if (a < w.lo() - 1e-12 || a > w.hi() + 1e-12) return false;
    }
    return true;
}

}  // namespace graphonlab
