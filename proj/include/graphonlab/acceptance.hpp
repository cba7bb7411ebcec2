#pragma once

#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "graphonlab/cr.hpp"
#include "graphonlab/density.hpp"
#include "graphonlab/expr.hpp"
#include "graphonlab/spectral.hpp"
#include "graphonlab/verify.hpp"
#include "graphonlab/wrandom.hpp"

namespace graphonlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

namespace acceptance_detail {

inline Graphon random_3step(std::uint64_t seed, double lo = 0.15, double hi = 0.85) {
    CounterRng rng(seed, 4242);
    StepStructure s;
    double w0 = 0.2 + 0.6 * rng.next_double();
    double w1 = (1.0 - w0) * (0.3 + 0.4 * rng.next_double());
    s.weights = {w0, w1, 1.0 - w0 - w1};
    s.values.assign(9, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double v = lo + (hi - lo) * rng.next_double();
            s.at(i, j) = v;
            s.at(j, i) = v;
        }
    return Graphon::from_steps(std::move(s), "(random3 seed=" + std::to_string(seed) + ")");
}

inline Graphon random_3step_delta(std::uint64_t seed) {
    CounterRng rng(seed, 777);
    StepStructure base = *random_3step(seed).steps();
    StepStructure s;
    s.weights = base.weights;
    s.values.assign(9, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double v = 2.0 * rng.next_double() - 1.0;
            s.at(i, j) = v;
            s.at(j, i) = v;
        }
    return Graphon::from_steps(std::move(s), "(delta3)");
}

// Plain bisection, independent of the polynomial inverse used by the
// spectral solver.
inline double bisect_cubic_plus_linear(double target) {
    double lo = 0.0, hi = 1.0;
    while (hi * hi * hi + hi < target) hi *= 2;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid * mid * mid + mid < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct Checker {
    std::ostringstream detail;
    bool pass = true;
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
    void note(const std::string& s) { detail << s << " "; }
};

}  // namespace acceptance_detail

inline std::vector<CriterionResult> run_acceptance(std::ostream* live = nullptr) {
    using namespace acceptance_detail;
    namespace chrono = std::chrono;
    std::vector<CriterionResult> results;
    Config cfg;

    auto run = [&](int id, const std::string& name, auto&& body) {
        auto t0 = chrono::steady_clock::now();
        Checker ck;
        try {
            body(ck);
        } catch (const std::exception& ex) {
            ck.pass = false;
            ck.detail << "[exception: " << ex.what() << "]";
        }
        CriterionResult r;
        r.id = id;
        r.name = name;
        r.pass = ck.pass;
        r.detail = ck.detail.str();
        r.seconds = chrono::duration<double>(chrono::steady_clock::now() - t0).count();
        results.push_back(r);
        if (live) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " (%.1fs)", r.seconds);
            (*live) << (r.pass ? "[pass]" : "[FAIL]") << " criterion " << id << ": " << name << buf
                    << "\n";
            if (!r.detail.empty()) (*live) << "       " << r.detail << "\n";
            live->flush();
        }
    };

    QuantumGraph K2{graphs::k2()}, P3{graphs::p3()}, K3{graphs::k3()}, C4{graphs::c4()};

    run(1, "exact quasirandom values on const 1/2", [&](Checker& ck) {
        auto c = constant_graphon(0.5);
        double tc4 = t_exact_step(C4, c).value;
        double tk2 = t_exact_step(K2, c).value;
        ck.expect(std::abs(tc4 - 1.0 / 16) <= 1e-12, "t(C4)=1/16");
        ck.expect(std::abs(tk2 - 0.5) <= 1e-12, "t(K2)=1/2");
        ck.note("t(C4)=" + std::to_string(tc4) + " t(K2)=" + std::to_string(tk2));
    });

    run(2, "half-graphon suite (MC n=1e6)", [&](Checker& ck) {
        auto wh = half_graphon();
        auto ek = t_mc(K2, wh, 1'000'000, 20);
        auto ep = t_mc(P3, wh, 1'000'000, 21);
        ck.expect(std::abs(ek.value - 0.5) <= 3 * ek.stderr_, "t(K2)=1/2 within 3se");
        ck.expect(std::abs(ep.value - 1.0 / 3) <= 3 * ep.stderr_, "t(P3)=1/3 within 3se");
        auto ec = t_mc(QuantumGraph(graphs::c4_alternating()), wh, 1'000'000, 22);
        ck.expect(ec.value == 0.0 && ec.stderr_ == 0.0, "t(C4hat') estimator exactly 0");
        double lin = ep.value - ek.value + 1.0 / 6;
        ck.expect(std::abs(lin) <= 1e-3, "t(P3)-t(K2)+1/6 within 1e-3");
        ck.note("t(K2)=" + std::to_string(ek.value) + " t(P3)=" + std::to_string(ep.value) +
                " linear=" + std::to_string(lin));
    });

    run(3, "Stokes identity a=b=1 on the half-graphon", [&](Checker& ck) {
        auto st = stokes_check(half_graphon(), 1, 1);
        ck.expect(std::abs(st.lhs - 1.0 / 3) <= 1e-6, "lhs=1/3 within 1e-6");
        ck.expect(std::abs(st.rhs - 1.0 / 3) <= 1e-6, "rhs=1/3 within 1e-6");
        ck.note("lhs=" + std::to_string(st.lhs) + " rhs=" + std::to_string(st.rhs));
    });

    const double pi = std::numbers::pi;
    run(4, "spectrum of 1_{x+y>1} at resolution 512", [&](Checker& ck) {
        auto u = discretize(complement(half_graphon()), 512, cfg.discretize_subsample);
        auto pairs = eigendecompose(u, 10);
        std::vector<double> pos;
        for (const auto& p : pairs)
            if (p.value > 0) pos.push_back(p.value);
        double targets[3] = {2 / pi, 2 / (5 * pi), 2 / (9 * pi)};
        for (int i = 0; i < 3; ++i)
            ck.expect(std::abs(pos[i] - targets[i]) / targets[i] <= 0.02,
                      "eigenvalue " + std::to_string(i) + " within 2%");
        ck.note("top positive: " + std::to_string(pos[0]) + ", " + std::to_string(pos[1]) + ", " +
                std::to_string(pos[2]));
    });

    run(5, "spectral solve of W o W o W + W = U", [&](Checker& ck) {
        auto u = discretize(complement(half_graphon()), 512, cfg.discretize_subsample);
        Poly1 cubic({1.0, 0.0, 1.0});
        auto sol = spectral_solve(u, cubic, cfg);
        auto forward = apply_operator_poly(sol.w, cubic);
        double maxdiff = 0;
        const auto *sf = forward.steps(), *su = u.steps();
        for (std::size_t i = 0; i < su->values.size(); ++i)
            maxdiff = std::max(maxdiff, std::abs(sf->values[i] - su->values[i]));
        ck.expect(maxdiff <= 1e-6, "forward-applied p(W) matches U entrywise <= 1e-6");
        double mu1 = eigendecompose(u, 1)[0].value;
        double root = bisect_cubic_plus_linear(mu1);
        double top = eigendecompose(sol.w, 1)[0].value;
        ck.expect(std::abs(top - root) <= 1e-9, "top eigenvalue solves z^3+z=mu1 to 1e-9");
        // Discretized mu1 is within 2% of 2/pi (criterion 4), so the root
        // tracks the closed-form target at the same accuracy.
        double root_closed = bisect_cubic_plus_linear(2 / pi);
        ck.expect(std::abs(top - root_closed) / root_closed <= 0.02, "root near the 2/pi target");
        double spread = sol.w.steps()->max_value() - sol.w.steps()->min_value();
        ck.expect(spread >= 0.1, "value spread >= 0.1");
        ck.note("forward diff=" + std::to_string(maxdiff) + " top=" + std::to_string(top) +
                " spread=" + std::to_string(spread));
    });

    run(6, "binary-tree suite, tree and lexicographic evaluators", [&](Checker& ck) {
        QuantumGraph A{graphs::a_flag()}, Bh{detail::b_hat()}, Bb{graphs::color_swapped(detail::b_hat())};
        QuantumGraph Ch{detail::c_hat()}, Dh{detail::d_hat()};
        QuantumGraph P4h{graphs::p4_hat()};
        struct Q {
            const QuantumGraph* f;
            std::vector<double> x;
            double target;
            const char* label;
        };
        std::vector<Q> quantities = {
            {&A, {0.61}, 2.0 / 3, "t1(A)"},
            {&Bh, {0.61}, 8.0 / 45, "t1(Bhat)"},
            {&Bb, {0.61}, 2.0 / 45, "t1(Bbar)"},
            {&Ch, {0.13, 0.36}, 1.0 / 6, "t2(Chat)@depth2"},
            {&Dh, {0.13, 0.36}, 1.0 / 90, "t2(Dhat)@depth2"},
        };
        Graphon evals[2] = {binary_graphon(cfg.cr_max_depth), lexpower_graphon(cfg.cr_max_depth)};
        const char* enames[2] = {"tree", "lexpower"};
        double est[2][5], se[2][5];
        for (int e = 0; e < 2; ++e) {
            for (std::size_t q = 0; q < quantities.size(); ++q) {
                auto r = tk_eval(*quantities[q].f, evals[e], quantities[q].x, 1'000'000,
                                 600 + 10 * e + q, cfg);
                est[e][q] = r.value;
                se[e][q] = r.stderr_;
                ck.expect(std::abs(r.value - quantities[q].target) <= 3 * r.stderr_,
                          std::string(quantities[q].label) + " on " + enames[e] + " within 3se");
            }
            auto p4 = t_mc(P4h, evals[e], 200'000, 31 + e);
            ck.expect(p4.value == 0.0 && p4.stderr_ == 0.0,
                      std::string("t(P4hat) exactly 0 per sample on ") + enames[e]);
            double resid = 2 * est[e][3] * est[e][3] - 5 * est[e][4];
            double rse = std::sqrt(16 * est[e][3] * est[e][3] * se[e][3] * se[e][3] +
                                   25 * se[e][4] * se[e][4]);
            ck.expect(std::abs(resid) <= 3 * rse,
                      std::string("2 t2(Chat)^2 = 5 t2(Dhat) on ") + enames[e]);
        }
        for (std::size_t q = 0; q < quantities.size(); ++q) {
            double joint = std::sqrt(se[0][q] * se[0][q] + se[1][q] * se[1][q]);
            ck.expect(std::abs(est[0][q] - est[1][q]) <= 3 * std::max(joint, 1e-12),
                      std::string("evaluators agree on ") + quantities[q].label);
        }
        ck.note("t1(A)=" + std::to_string(est[0][0]) + " t2(Chat)=" + std::to_string(est[0][3]) +
                " t2(Dhat)=" + std::to_string(est[0][4]));
    });

    run(7, "regular CR weights: star and depth-2 binary, exact rationals", [&](Checker& ck) {
        for (int k : {2, 3, 5, 8}) {
            FiniteTree t;
            t.add_root();
            for (int i = 0; i < k; ++i) t.add_child(0);
            auto wt = regular_weights(t);
            ck.expect(wt.degree() == Scalar(Rational(1, k)), "star degree 1/" + std::to_string(k));
            for (int i = 1; i <= k; ++i)
                ck.expect(wt.f[i] == Scalar(Rational(1, k)), "star block weight 1/k");
        }
        FiniteTree t;
        t.add_root();
        int a = t.add_child(0), b = t.add_child(0);
        t.add_child(a);
        t.add_child(a);
        t.add_child(b);
        t.add_child(b);
        auto wt = regular_weights(t);
        ck.expect(wt.degree() == Scalar(Rational(1, 4)), "depth-2 binary degree 1/4");
        ck.expect(wt.c[a] / wt.f[a] == Scalar(Rational(1, 2)), "child subtree degree 1/2");
        // Full invariant family as exact rational identities, including the
        // child-count bounds. Frontier nodes of implicit-tree prefixes are
        // cut points, not true leaves, so c(leaf)=0 does not apply to them;
        // the sibling bound needs the parent to have at least two children.
        auto check_tree = [&](const WeightedCRTree& w) {
            ck.expect(w.f[w.tree.root] == Scalar(1), "f(root)=1");
            for (int u = 0; u < w.tree.size(); ++u) {
                if (w.tree.leaf(u)) {
                    if (!w.frontier[u]) ck.expect(w.c[u] == Scalar(0), "c(leaf)=0");
                    continue;
                }
                Scalar sum(0);
                int r = static_cast<int>(w.tree.nodes[u].kids.size());
                for (int v : w.tree.nodes[u].kids) {
                    sum += w.f[v];
                    ck.expect(w.c[u] + w.c[v] == w.f[v], "c(u)+c(v)=f(v)");
                    int rv = static_cast<int>(w.tree.nodes[v].kids.size());
                    if (rv >= 2 && r >= 2)
                        ck.expect(w.f[u] >= (Scalar(2) - Scalar(1) / Scalar(rv)) * w.f[v],
                                  "f(u) >= (2-1/r) f(v)");
                }
                ck.expect(sum == w.f[u], "f additivity");
                ck.expect(w.c[u] * Scalar(r) <= w.f[u], "c(u) <= f(u)/r");
            }
        };
        check_tree(wt);
        check_tree(make_binary_prefix(10));
        check_tree(make_cf(Scalar(Rational(2, 5)), 10));
        ck.note("degree(depth-2 binary)=" + wt.degree().str());
    });

    run(8, "continued fractions: fixed point and MC degree", [&](Checker& ck) {
        double alpha = (3.0 - std::sqrt(5.0)) / 2.0;
        auto seq = cf_sequence(Scalar::approx(alpha), 10);
        bool all_ones = seq.size() == 10;
        for (auto n : seq) all_ones = all_ones && n == 1;
        ck.expect(all_ones, "cf_sequence((3-sqrt5)/2, 10) = ten 1s");
        auto wt = make_cf(Scalar::approx(alpha), 40);
        auto g = cr_graphon(wt, cfg.cr_max_depth, "(cr cf golden)");
        auto d = t_mc(K2, g, 1'000'000, 80);
        ck.expect(std::abs(d.value - alpha) <= std::max(3 * d.stderr_, 1e-3),
                  "MC degree within max(3se, 1e-3) of alpha");
        ck.note("degree=" + std::to_string(d.value) + " target=" + std::to_string(alpha));
    });

    run(9, "adjoint identities: six descriptors, four graphs, five stepfunctions", [&](Checker& ck) {
        VerifyOptions opt;
        opt.samples = 200'000;
        opt.cfg = cfg;
        std::vector<Graph> fs = {graphs::k2(), graphs::p3(), graphs::k3(), graphs::c4()};
        Graph h = graphs::k3();
        h.set_label(1, 0);
        h.set_label(2, 1);
        auto wh = half_graphon();
        for (std::uint64_t s = 1; s <= 5; ++s) {
            auto w = random_3step(s);
            opt.seed = 9000 + s;
            for (const auto& F : fs) {
                auto c1 = adjoint_identity_check(ScaleOp{Scalar(Rational(3, 4))}, F, w, opt);
                ck.expect(c1.exact_path && c1.gap <= 1e-9, "scale exact gap <= 1e-9");
                auto c2 = adjoint_identity_check(ShiftOp{Scalar(Rational(1, 4))}, F, w, opt);
                ck.expect(c2.exact_path && c2.gap <= 1e-9, "shift exact gap <= 1e-9");
                auto c3 = adjoint_identity_check(PolyKernelOp{{Scalar(0), Scalar(1)}}, F, w, opt);
                ck.expect(c3.exact_path && c3.gap <= 1e-9, "poly_kernel exact gap <= 1e-9");
                auto c4_ = adjoint_identity_check(EdgeSubstituteOp{h}, F, w, opt);
                ck.expect(c4_.exact_path && c4_.gap <= 1e-9, "edge_substitute exact gap <= 1e-9");
                auto c5 = adjoint_identity_check(TensorPowerOp{2}, F, w, opt);
                ck.expect(c5.gap <= 4 * c5.joint_se, "tensor_power gap <= 4se");
                auto c6 = adjoint_identity_check_tensor_fixed(wh, F, w, opt);
                ck.expect(c6.gap <= 4 * c6.joint_se, "tensor_fixed gap <= 4se");
            }
        }
    });

    run(10, "variational derivative against the edge-derivative pairing", [&](Checker& ck) {
        for (std::uint64_t s = 1; s <= 3; ++s) {
            auto w = random_3step(100 + s, 0.25, 0.75);
            auto delta = random_3step_delta(100 + s);
            for (const auto& F : {graphs::k2(), graphs::p3(), graphs::c4()}) {
                auto r = variational_check(F, w, delta, 1e-4, cfg);
                ck.expect(r.rel_error <= 1e-3,
                          "rel err <= 1e-3 (F on " + std::to_string(F.node_count()) + " nodes, got " +
                              std::to_string(r.rel_error) + ")");
            }
        }
    });

    run(11, "finite-rank expansion equals direct density (rank 2)", [&](Checker& ck) {
        auto onef = OneVarFunc::closure([](double) { return 1.0; });
        auto lin = OneVarFunc::closure([](double x) { return 2 * x - 1; });
        auto w = Graphon::from_eval(
            [](double x, double y) { return 0.5 + 0.5 * (2 * x - 1) * (2 * y - 1); }, 0.0, 1.0,
            "(rank2)");
        int seed = 110;
        for (const auto& F : {graphs::k2(), graphs::p3(), graphs::c4()}) {
            double expansion = finite_rank_density(F, {0.5, 0.5}, {onef, lin});
            auto mc = t_mc(QuantumGraph(F), w, 1'000'000, seed++);
            ck.expect(std::abs(expansion - mc.value) <= 3 * mc.stderr_,
                      "rank-2 expansion matches MC for |V|=" + std::to_string(F.node_count()));
        }
    });

    run(12, "W-random: CR preservation and half-graphon edge density", [&](Checker& ck) {
        auto ub = binary_graphon(cfg.cr_max_depth);
        for (std::uint64_t s = 0; s < 20; ++s) {
            auto g = sample_graph(ub, 60, 1200 + s);
            ck.expect(induced_p4_free(g), "G(U_B,60) seed " + std::to_string(s) + " induced-P4-free");
        }
        int hits = 0, cond_hits = 0;
        auto wh = half_graphon();
        for (std::uint64_t s = 0; s < 20; ++s) {
            auto g = sample_graph(wh, 400, 1300 + s);
            double density = 2.0 * g.edge_count() / (400.0 * 399.0);
            if (std::abs(density - 0.5) <= 0.02) ++hits;
            double cond = 0;
            for (int i = 0; i < g.n; ++i)
                for (int j = i + 1; j < g.n; ++j) cond += wh.eval(g.latents[i], g.latents[j]);
            cond /= 400.0 * 399.0 / 2.0;
            if (std::abs(density - cond) <= 0.02) ++cond_hits;
        }
        // As stated this clause cannot be met by an unbiased sampler: the
        // latent-point variance alone puts the edge density at stderr
        // ~0.029 for n=400, so |density - 1/2| <= 0.02 holds for roughly
        // half of all seeds. The binomial part (density vs its conditional
        // mean given the latents, stderr ~0.0018) is reported alongside.
        ck.expect(hits >= 18, "edge density within 0.02 of 1/2 in >= 18/20 seeds");
        ck.note("half-graphon density hits: " + std::to_string(hits) +
                "/20 (latent-variance stderr ~0.029 caps the per-seed rate near 1/2); binomial-only"
                " deviation <=0.02 in " + std::to_string(cond_hits) + "/20");
    });

    run(13, "unlabeling soundness: vanishing detectors", [&](Checker& ck) {
        auto chalf = constant_graphon(0.5);
        auto wk2 = graphon_of_graph(graphs::k2());
        auto generic = random_3step(555);

        Graph e1 = graphs::a_flag();                 // 1-labeled edge
        Graph n1 = graphs::empty(2);
        n1.set_label(1, 0);                          // 1-labeled edgeless pair
        QuantumGraph f1 = QuantumGraph(e1) - QuantumGraph(n1).scaled(Scalar(Rational(1, 2)));

        Graph e2 = graphs::k2();
        e2.set_label(1, 0);
        e2.set_label(2, 1);
        Graph n2 = graphs::empty(2);
        n2.set_label(1, 0);
        n2.set_label(2, 1);
        QuantumGraph f2 = QuantumGraph(e2) - QuantumGraph(n2).scaled(Scalar(Rational(1, 2)));

        Graph p3c = graphs::p3();
        p3c.set_label(1, 1);                         // path centered at the label
        Graph n3 = graphs::empty(3);
        n3.set_label(1, 0);
        QuantumGraph f3 = QuantumGraph(p3c) - QuantumGraph(n3).scaled(Scalar(Rational(1, 4)));

        struct Case {
            QuantumGraph f;
            Graphon w;
            const char* label;
        };
        std::vector<Case> cases = {{f1, chalf, "deg-1/2 on const1/2"},
                                   {f2, chalf, "edge-1/2 on const1/2"},
                                   {f3, chalf, "cherry-1/4 on const1/2"},
                                   {f1, wk2, "deg-1/2 on W_K2"}};
        for (auto& c : cases) {
            // The labeled function itself vanishes at every block tuple.
            const int k = c.f.label_count();
            const int m = c.w.steps()->size();
            std::vector<int> blocks(k, 0);
            while (true) {
                double v = tk_exact_blocks(c.f, c.w, blocks, cfg);
                ck.expect(v == 0.0, std::string("t^k(f,W)=0 at blocks for ") + c.label);
                int pos = 0;
                while (pos < k && ++blocks[pos] == m) blocks[pos++] = 0;
                if (pos == k) break;
            }
            auto g_pow = power_unlabel(c.f, 2);
            auto g_sq = unlabel_square_free(c.f);
            double tp = t_exact_step(g_pow, c.w, cfg).value;
            double ts = t_exact_step(g_sq, c.w, cfg).value;
            ck.expect(tp == 0.0, std::string("power_unlabel vanishes for ") + c.label);
            ck.expect(ts == 0.0, std::string("unlabel_square_free vanishes for ") + c.label);
            double tp_g = t_exact_step(g_pow, generic, cfg).value;
            double ts_g = t_exact_step(g_sq, generic, cfg).value;
            ck.expect(tp_g > 1e-12, std::string("power_unlabel positive on generic for ") + c.label);
            ck.expect(ts_g > 1e-12, std::string("unlabel_square_free positive on generic for ") + c.label);
        }
    });

    return results;
}

inline int acceptance_exit_code(const std::vector<CriterionResult>& rs) {
    for (const auto& r : rs)
        if (!r.pass) return 1;
    return 0;
}

}  // namespace graphonlab
