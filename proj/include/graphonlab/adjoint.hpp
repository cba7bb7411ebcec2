#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "graphonlab/quantum.hpp"
#include "graphonlab/scalar.hpp"

namespace graphonlab {

// Descriptors of graphon operators W -> F(W) that admit an adjoint on quantum
// graphs, i.e. t(F, F(W)) = t(F*(F), W).

struct ScaleOp {  // W -> lambda * W
    Scalar lambda;
};
struct ShiftOp {  // W -> W + lambda
    Scalar lambda;
};
struct TensorFixedOp {  // W -> A tensor W for a fixed graphon A
    std::function<double(const Graph&)> density_in_a;  // F -> t(F, A)
    std::string desc;
};
struct TensorPowerOp {  // W -> k-th tensor power of W
    int k = 1;
};
struct PolyKernelOp {  // W -> p(W) as a kernel operator, p(z) = sum a_i z^i
    std::vector<Scalar> coeffs;  // a_1..a_n
};
struct EdgeSubstituteOp {  // W -> t^2(H, W)(x, y) for a symmetric 2-labeled H
    Graph h;
};

using OperatorDescriptor =
    std::variant<ScaleOp, ShiftOp, TensorFixedOp, TensorPowerOp, PolyKernelOp, EdgeSubstituteOp>;

inline std::string operator_name(const OperatorDescriptor& op) {
    struct V {
        std::string operator()(const ScaleOp& o) { return "scale(" + o.lambda.str() + ")"; }
        std::string operator()(const ShiftOp& o) { return "shift(" + o.lambda.str() + ")"; }
        std::string operator()(const TensorFixedOp& o) { return "tensor_fixed(" + o.desc + ")"; }
        std::string operator()(const TensorPowerOp& o) { return "tensor_power(" + std::to_string(o.k) + ")"; }
        std::string operator()(const PolyKernelOp& o) {
            std::string s = "poly_kernel(";
            for (std::size_t i = 0; i < o.coeffs.size(); ++i) s += (i ? "," : "") + o.coeffs[i].str();
            return s + ")";
        }
        std::string operator()(const EdgeSubstituteOp&) { return "edge_substitute(H)"; }
    };
    return std::visit(V{}, op);
}

namespace detail {

inline std::vector<std::pair<int, int>> blue_pairs(const Graph& g) {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < g.node_count(); ++u)
        for (int v = u + 1; v < g.node_count(); ++v)
            if (g.blue_mult(u, v)) out.push_back({u, v});
    return out;
}

inline void require_plain(const Graph& f, const char* who) {
    if (f.label_count() != 0 || !f.all_blue())
        throw std::invalid_argument(std::string(who) + " expects an unlabeled blue graph");
}

// H must have an automorphism interchanging its two labeled nodes.
inline bool label_swap_symmetric(const Graph& h) {
    if (h.label_count() != 2) return false;
    Graph swapped = h;
    int a = h.label_node(1), b = h.label_node(2);
    swapped.set_label(1, b);
    swapped.set_label(2, a);
    return h.canonical() == swapped.canonical();
}

}  // namespace detail

// F*(F) for each descriptor; the spectral content lives in the graphon-side
// transforms, this is pure graph algebra.
inline QuantumGraph adjoint_map(const Graph& f0, const OperatorDescriptor& op) {
    Graph f = f0.canonical();
    detail::require_plain(f, "adjoint_map");
    const int n = f.node_count();

    if (const auto* o = std::get_if<ScaleOp>(&op)) {
        return QuantumGraph(f, o->lambda.pow(f.edge_instances()));
    }

    if (const auto* o = std::get_if<ShiftOp>(&op)) {
        // Binomial expansion of prod (W + lambda) over edge instances:
        // sum over kept-copy counts j_e of lambda^{|E|-|Z|} C(m_e, j_e) (V, Z).
        auto pairs = detail::blue_pairs(f);
        QuantumGraph out;
        std::vector<int> keep(pairs.size(), 0);
        auto binom = [](int m, int j) {
            long long r = 1;
            for (int i = 1; i <= j; ++i) r = r * (m - i + 1) / i;
            return r;
        };
        while (true) {
            Graph h(n);
            Scalar coeff(1);
            for (std::size_t e = 0; e < pairs.size(); ++e) {
                auto [u, v] = pairs[e];
                int m = f.blue_mult(u, v), j = keep[e];
                if (j) h.add_edge(u, v, Color::blue, j);
                coeff *= Scalar(Rational(binom(m, j))) * o->lambda.pow(m - j);
            }
            out.add_term(h, coeff);
            std::size_t pos = 0;
            while (pos < pairs.size()) {
                auto [u, v] = pairs[pos];
                if (++keep[pos] <= f.blue_mult(u, v)) break;
                keep[pos++] = 0;
            }
            if (pairs.empty() || pos == pairs.size()) break;
        }
        return out;
    }

    if (const auto* o = std::get_if<TensorFixedOp>(&op)) {
        return QuantumGraph(f, Scalar::approx(o->density_in_a(f)));
    }

    if (const auto* o = std::get_if<TensorPowerOp>(&op)) {
        if (o->k < 1) throw std::invalid_argument("tensor power must be >= 1");
        QuantumGraph acc(f);
        for (int i = 1; i < o->k; ++i) acc = product(acc, QuantumGraph(f), false);
        return acc;  // 0-labeled product = disjoint union
    }

    if (const auto* o = std::get_if<PolyKernelOp>(&op)) {
        const int deg = static_cast<int>(o->coeffs.size());
        if (deg < 1) throw std::invalid_argument("poly_kernel needs at least one coefficient");
        auto pairs = detail::blue_pairs(f);
        // Expand multiplicities into individual edge instances.
        std::vector<std::pair<int, int>> inst;
        for (auto [u, v] : pairs)
            for (int m = 0; m < f.blue_mult(u, v); ++m) inst.push_back({u, v});
        QuantumGraph out;
        std::vector<int> kappa(inst.size(), 1);  // subdivision count per instance
        while (true) {
            Scalar coeff(1);
            for (int ke : kappa) coeff *= o->coeffs[ke - 1];
            if (!coeff.is_zero()) {
                int extra = 0;
                for (int ke : kappa) extra += ke - 1;
                Graph h(n + extra);
                int next = n;
                for (std::size_t e = 0; e < inst.size(); ++e) {
                    auto [u, v] = inst[e];
                    int prev = u;
                    for (int s = 0; s < kappa[e] - 1; ++s) {
                        h.add_edge(prev, next);
                        prev = next++;
                    }
                    h.add_edge(prev, v);
                }
                out.add_term(h, coeff);
            }
            std::size_t pos = 0;
            while (pos < kappa.size() && ++kappa[pos] > deg) kappa[pos++] = 1;
            if (inst.empty() || pos == kappa.size()) break;
        }
        return out;
    }

    const auto& o = std::get<EdgeSubstituteOp>(op);
    if (!detail::label_swap_symmetric(o.h))
        throw std::invalid_argument("edge_substitute needs a 2-labeled H with a label-swapping automorphism");
    Graph h = o.h;
    const int hn = h.node_count();
    auto pairs = detail::blue_pairs(f);
    std::vector<std::pair<int, int>> inst;
    for (auto [u, v] : pairs)
        for (int m = 0; m < f.blue_mult(u, v); ++m) inst.push_back({u, v});
    int extra_per = hn - 2;
    Graph big(n + extra_per * static_cast<int>(inst.size()));
    int next = n;
    for (auto [u, v] : inst) {
        std::vector<int> map(hn, -1);
        map[h.label_node(1)] = u;
        map[h.label_node(2)] = v;
        for (int w = 0; w < hn; ++w)
            if (map[w] < 0) map[w] = next++;
        for (int a = 0; a < hn; ++a)
            for (int b = a + 1; b < hn; ++b) {
                if (h.blue_mult(a, b)) big.add_edge(map[a], map[b], Color::blue, h.blue_mult(a, b));
                if (h.red_mult(a, b)) big.add_edge(map[a], map[b], Color::red, h.red_mult(a, b));
            }
    }
    return QuantumGraph(big);
}

}  // namespace graphonlab
