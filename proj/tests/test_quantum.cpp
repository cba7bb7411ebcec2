#include <catch2/catch.hpp>

#include <sstream>

#include "graphonlab/density.hpp"
#include "graphonlab/quantum.hpp"
#include "support/oracles.hpp"

using namespace graphonlab;

TEST_CASE("product glues at labels") {
    QuantumGraph A(graphs::a_flag());
    auto AA = product(A, A);
    REQUIRE(AA.term_count() == 1);
    const Graph& g = AA.terms().begin()->first;
    REQUIRE(g.node_count() == 3);
    REQUIRE(g.label_count() == 1);
    REQUIRE(g.edge_instances() == 2);
    // Both edges meet the labeled node.
    int lab = g.label_node(1);
    REQUIRE(g.blue_mult(lab, (lab + 1) % 3) + g.blue_mult(lab, (lab + 2) % 3) == 2);

    Graph e2 = graphs::k2();
    e2.set_label(1, 0);
    e2.set_label(2, 1);
    auto dbl = product(QuantumGraph(e2), QuantumGraph(e2), false);
    auto simple = product(QuantumGraph(e2), QuantumGraph(e2), true);
    REQUIRE(dbl.terms().begin()->first.blue_mult(0, 1) == 2);
    REQUIRE(simple.terms().begin()->first.blue_mult(0, 1) == 1);

    REQUIRE_THROWS(product(A, QuantumGraph(e2)));  // mismatched label counts
}

TEST_CASE("product is multiplicative under t^k on stepfunctions") {
    auto w = oracles::random_step(7, 3);
    Graph f1 = graphs::p3();
    f1.set_label(1, 0);
    f1.set_label(2, 2);
    Graph f2 = graphs::k2();
    // two 2-labeled graphs sharing label count
    Graph g2(3);
    g2.add_edge(0, 1);
    g2.set_label(1, 0);
    g2.set_label(2, 2);
    QuantumGraph q1(f1), q2(g2);
    auto q12 = product(q1, q2);
    CounterRng rng(3, 0);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x = {rng.next_double(), rng.next_double()};
        double lhs = tk_eval(q12, w, x, 1, 0).value;
        double rhs = tk_eval(q1, w, x, 1, 0).value * tk_eval(q2, w, x, 1, 0).value;
        REQUIRE(lhs == Approx(rhs).margin(1e-12));
    }
    (void)f2;
}

TEST_CASE("simple product is multiplicative on 0-1 valued graphons") {
    auto w = graphon_of_graph(graphs::c4());
    Graph a(2);
    a.add_edge(0, 1);
    a.set_label(1, 0);
    a.set_label(2, 1);
    QuantumGraph qa(a);
    auto star = product(qa, qa, true);  // reduces the doubled edge
    CounterRng rng(4, 0);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x = {rng.next_double(), rng.next_double()};
        double lhs = tk_eval(star, w, x, 1, 0).value;
        double rhs = std::pow(tk_eval(qa, w, x, 1, 0).value, 2);
        REQUIRE(lhs == Approx(rhs).margin(1e-12));
    }
}

TEST_CASE("contract merges independent label blocks") {
    // P3 with both endpoints labeled, blocks {{1,2}} -> double edge.
    Graph p = graphs::p3();
    p.set_label(1, 0);
    p.set_label(2, 2);
    auto out = contract(QuantumGraph(p), Partition{{{1, 2}}});
    REQUIRE(out.term_count() == 1);
    const Graph& m = out.terms().begin()->first;
    REQUIRE(m.node_count() == 2);
    REQUIRE(m.blue_mult(0, 1) == 2);
    REQUIRE(m.label_count() == 1);

    // K2 with both endpoints labeled: block not independent.
    Graph e = graphs::k2();
    e.set_label(1, 0);
    e.set_label(2, 1);
    REQUIRE_THROWS_AS(contract(QuantumGraph(e), Partition{{{1, 2}}}), illegitimate_partition);

    // 4-cycle with opposite nodes labeled, merged: pair of double edges.
    Graph c = graphs::c4();
    c.set_label(1, 0);
    c.set_label(2, 2);
    auto out2 = contract(QuantumGraph(c), Partition{{{1, 2}}});
    const Graph& m2 = out2.terms().begin()->first;
    REQUIRE(m2.node_count() == 3);
    std::vector<int> mults;
    for (int u = 0; u < 3; ++u)
        for (int v = u + 1; v < 3; ++v)
            if (m2.blue_mult(u, v)) mults.push_back(m2.blue_mult(u, v));
    REQUIRE(mults == std::vector<int>{2, 2});
}

TEST_CASE("contraction preserves exact vanishing") {
    // f = (2-labeled path with free middle) - 1/4 (2-labeled edgeless pair)
    // vanishes on const 1/2; its contraction vanishes as well.
    Graph p = graphs::p3();
    p.set_label(1, 0);
    p.set_label(2, 2);
    Graph n(2);
    n.set_label(1, 0);
    n.set_label(2, 1);
    QuantumGraph f = QuantumGraph(p) - QuantumGraph(n).scaled(Scalar(Rational(1, 4)));
    auto w = constant_graphon(0.5);
    REQUIRE(tk_exact_blocks(f, w, {0, 0}) == 0.0);
    auto fc = contract(f, Partition{{{1, 2}}});
    REQUIRE(tk_exact_blocks(fc, w, {0}) == 0.0);
}

TEST_CASE("unlabel repacks and matches integral semantics") {
    QuantumGraph A(graphs::a_flag());
    auto k2 = unlabel(A, {1});
    REQUIRE(k2.terms().begin()->first == graphs::k2().canonical());
    auto same = unlabel(A, {});
    REQUIRE(same == A);
    REQUIRE_THROWS(unlabel(A, {2}));

    // integral of t^1(A, W_h) over the label equals t(K2, W_h) = 1/2
    auto wh = half_graphon();
    auto est = t_mc(unlabel_all(A), wh, 200000, 5);
    REQUIRE(std::abs(est.value - 0.5) < 4 * est.stderr_);
}

TEST_CASE("power_unlabel squares and unlabels") {
    QuantumGraph A(graphs::a_flag());
    REQUIRE_THROWS(power_unlabel(A, 3));
    REQUIRE_THROWS(power_unlabel(A, 0));
    auto g = power_unlabel(A, 2);
    REQUIRE(g.terms().begin()->first == graphs::p3().canonical());

    // nonnegativity of t(f^2 unlabeled) on random stepfunctions
    Graph n1(2);
    n1.set_label(1, 0);
    QuantumGraph f = A - QuantumGraph(n1).scaled(Scalar(Rational(1, 3)));
    for (std::uint64_t s = 1; s <= 5; ++s) {
        auto w = oracles::random_step(s);
        REQUIRE(t_exact_step(power_unlabel(f, 2), w).value >= -1e-15);
    }

    // the zero quantum graph stays zero
    QuantumGraph zero = A - A;
    REQUIRE(power_unlabel(zero, 2).is_zero());
}

TEST_CASE("unlabel_square_free: construction shape") {
    auto g = unlabel_square_free(QuantumGraph(graphs::a_flag()));
    REQUIRE(g.term_count() == 1);
    REQUIRE(g.terms().begin()->first == graphs::p3().canonical());
    REQUIRE(g.terms().begin()->first.simple());

    // node-count formula 2^k |V| - k 2^{k-1} for a single term, k <= 3
    for (int k = 1; k <= 3; ++k) {
        int nv = k == 3 ? 3 : k + 1;  // keep the glued graph within 12 nodes
        Graph f(nv);
        for (int p = 1; p <= k; ++p) f.set_label(p, p - 1);
        if (nv > k) f.add_edge(0, nv - 1);
        auto out = unlabel_square_free(QuantumGraph(f));
        int expect = (1 << k) * nv - k * (1 << (k - 1));
        REQUIRE(out.terms().begin()->first.node_count() == expect);
        REQUIRE(out.terms().begin()->first.simple());
    }

    Graph dbl(2);
    dbl.add_edge(0, 1, Color::blue, 2);
    dbl.set_label(1, 0);
    REQUIRE_THROWS(unlabel_square_free(QuantumGraph(dbl)));
}

TEST_CASE("color_expand: sieve over red edges") {
    Graph c2(2);
    c2.add_edge(0, 1, Color::blue);
    c2.add_edge(0, 1, Color::red);
    auto q = color_expand(c2);
    REQUIRE(q.term_count() == 2);
    Graph single = graphs::k2();
    Graph dbl(2);
    dbl.add_edge(0, 1, Color::blue, 2);
    REQUIRE(q.terms().at(single.canonical()) == Scalar(1));
    REQUIRE(q.terms().at(dbl.canonical()) == Scalar(-1));

    // all blue input stays itself
    auto id = color_expand(graphs::k3());
    REQUIRE(id == QuantumGraph(graphs::k3()));

    // P4-hat expands over the 8 red-edge subsets; isomorphic subsets merge
    // into 5 canonical terms (P4, paw x2, C4, diamond x3, K4) whose signed
    // coefficients sum to 0, and the densities match exactly.
    auto p4h = graphs::p4_hat();
    auto expanded = color_expand(p4h);
    REQUIRE(expanded.term_count() == 5);
    Scalar coeff_sum(0);
    std::vector<long long> mags;
    for (const auto& [g, coef] : expanded.terms()) {
        coeff_sum += coef;
        mags.push_back(std::llabs(coef.rat().num()));
    }
    std::sort(mags.begin(), mags.end());
    REQUIRE(coeff_sum == Scalar(0));
    REQUIRE(mags == std::vector<long long>{1, 1, 1, 2, 3});
    for (std::uint64_t s = 1; s <= 3; ++s) {
        auto w = oracles::random_step(s);
        double direct = t_exact_step(QuantumGraph(p4h), w).value;
        double sieved = t_exact_step(expanded, w).value;
        REQUIRE(direct == Approx(sieved).margin(1e-12));
    }
}

TEST_CASE("razborov derivatives") {
    auto r = razborov(graphs::k3(), RazborovMode::dag);
    REQUIRE(r.term_count() == 1);
    REQUIRE(r.terms().begin()->second == Scalar(3));

    auto rp = razborov(graphs::p3(), RazborovMode::dag);
    REQUIRE(rp.term_count() == 2);
    std::vector<Scalar> coeffs;
    for (auto& [g, c] : rp.terms()) coeffs.push_back(c);
    REQUIRE(((coeffs[0] == Scalar(1) && coeffs[1] == Scalar(2)) ||
             (coeffs[0] == Scalar(2) && coeffs[1] == Scalar(1))));

    auto rd = razborov(graphs::k2(), RazborovMode::ddag);
    REQUIRE(rd.term_count() == 1);
    REQUIRE(rd.terms().begin()->second == Scalar(1));
    REQUIRE(rd.terms().begin()->first.edge_instances() == 0);

    Graph labeled = graphs::a_flag();
    REQUIRE_THROWS(razborov(labeled, RazborovMode::dag));
    Graph colored(2);
    colored.add_edge(0, 1, Color::red);
    REQUIRE_THROWS(razborov(colored, RazborovMode::ddag));
}

TEST_CASE("quantum files parse term lines") {
    std::istringstream in(
        "graph k2\nn 2\ne 1 2\nend\n"
        "graph p3\nn 3\ne 1 2\ne 2 3\nend\n"
        "term 1/2 k2\nterm -1/3 p3\n");
    auto q = parse_quantum(in);
    REQUIRE(q.term_count() == 2);
    REQUIRE(q.terms().at(graphs::k2().canonical()) == Scalar(Rational(1, 2)));
    REQUIRE(q.terms().at(graphs::p3().canonical()) == Scalar(Rational(-1, 3)));
}

TEST_CASE("density is linear in the quantum argument") {
    auto w = oracles::random_step(11);
    QuantumGraph a(graphs::k3()), b(graphs::c4());
    QuantumGraph combo = a.scaled(Scalar(Rational(2, 7))) - b.scaled(Scalar(Rational(5, 3)));
    double lhs = t_exact_step(combo, w).value;
    double rhs = 2.0 / 7 * t_exact_step(a, w).value - 5.0 / 3 * t_exact_step(b, w).value;
    REQUIRE(lhs == Approx(rhs).margin(1e-12));
}
