#include <catch2/catch.hpp>

#include <fstream>

#include "graphonlab/density.hpp"
#include "graphonlab/expr.hpp"
#include "graphonlab/graphon.hpp"
#include "support/oracles.hpp"

using namespace graphonlab;

TEST_CASE("builders: half, dsum, step, const") {
    auto wh = half_graphon();
    REQUIRE(wh.eval(0.2, 0.7) == 1.0);
    REQUIRE(wh.eval(0.6, 0.7) == 0.0);
    REQUIRE(wh.eval(0.3, 0.7) == 1.0);  // closed boundary

    auto wd = build_graphon("(dsum (0.5 (const 1)) (0.5 (const 1)))");
    REQUIRE(wd.eval(0.25, 0.75) == 0.0);
    REQUIRE(wd.eval(0.25, 0.4) == 1.0);
    REQUIRE(wd.steps() != nullptr);

    REQUIRE(constant_graphon(0.3).eval(0.9, 0.1) == 0.3);
    REQUIRE_THROWS(build_graphon("(dsum (0.5 (const 1)) (0.6 (const 1)))"));
}

TEST_CASE("every built graphon passes the symmetry and bound spot check") {
    std::vector<std::string> exprs = {
        "(const 0.4)",
        "(half)",
        "(levelset (poly (0 0 1) (2 0 -1) (0 2 -1)))",
        "(complement (half))",
        "(affine 0.5 0.25 (half))",
        "(dsum (0.3 (half)) (0.7 (const 0.2)))",
        "(pprod (half) (const 0.5))",
        "(oprod (half) (half) 64)",
        "(tensor (half) (const 0.5))",
        "(cr binary)",
        "(cr cf 0.3819660113 20)",
        "(step (0.5 0.5) ((1 0.25) (0.25 0)))",
        "(specsolve (coeffs 1 0 1) (step (0.5 0.5) ((0.6 0.2) (0.2 0.4))))",
    };
    for (const auto& e : exprs) {
        auto w = build_graphon(e);
        INFO(e);
        REQUIRE(spot_check(w, 2000));
    }
}

TEST_CASE("discretize: cell averages and refinement") {
    auto c = discretize(constant_graphon(0.37), 4);
    for (double v : c.steps()->values) REQUIRE(v == Approx(0.37));

    auto h2 = discretize(half_graphon(), 2);
    REQUIRE(h2.steps()->at(0, 0) == Approx(1.0).margin(0.2));
    REQUIRE(h2.steps()->at(0, 1) == Approx(0.5).margin(0.2));
    REQUIRE(h2.steps()->at(1, 1) == Approx(0.0).margin(0.2));

    QuantumGraph k2(graphs::k2());
    for (int m : {4, 8, 16, 32, 64, 128}) {
        double err = std::abs(t_exact_step(k2, discretize(half_graphon(), m)).value - 0.5);
        REQUIRE(err <= 2.0 / m);
    }
}

TEST_CASE("direct-sum density law for connected graphs") {
    auto w1 = oracles::random_step(21, 2);
    auto w2 = oracles::random_step(22, 3);
    auto sum = direct_sum({{0.4, w1}, {0.6, w2}});
    for (const Graph& f : {graphs::k2(), graphs::p3(), graphs::k3()}) {
        QuantumGraph q(f);
        double lhs = t_exact_step(q, sum).value;
        double rhs = std::pow(0.4, f.node_count()) * t_exact_step(q, w1).value +
                     std::pow(0.6, f.node_count()) * t_exact_step(q, w2).value;
        REQUIRE(lhs == Approx(rhs).margin(1e-12));
    }
}

TEST_CASE("affine scaling multiplies densities by lambda^edges") {
    auto w = oracles::random_step(23);
    for (const Graph& f : {graphs::k2(), graphs::p3(), graphs::c4()}) {
        QuantumGraph q(f);
        double lhs = t_exact_step(q, affine(0.6, 0.0, w)).value;
        double rhs = std::pow(0.6, f.edge_instances()) * t_exact_step(q, w).value;
        REQUIRE(lhs == Approx(rhs).margin(1e-12));
    }
}

TEST_CASE("operator product is associative within grid tolerance") {
    auto w = half_graphon();
    auto a = operator_product(operator_product(w, w, 128), w, 128);
    auto b = operator_product(w, operator_product(w, w, 128), 128);
    const auto *sa = a.steps(), *sb = b.steps();
    double maxdiff = 0;
    for (std::size_t i = 0; i < sa->values.size(); ++i)
        maxdiff = std::max(maxdiff, std::abs(sa->values[i] - sb->values[i]));
    REQUIRE(maxdiff <= 1e-9);
}

TEST_CASE("tensor product matches the product measure") {
    auto wt = build_graphon("(tensor (half) (half))");
    auto est = t_mc(QuantumGraph(graphs::k2()), wt, 200000, 5);
    REQUIRE(std::abs(est.value - 0.25) < 4 * est.stderr_);
    // K3 in W tensor W = t(K3,W)^2 for the half graphon: t(K3, half) first.
    auto k3half = t_mc(QuantumGraph(graphs::k3()), half_graphon(), 200000, 6);
    auto k3tens = t_mc(QuantumGraph(graphs::k3()), wt, 200000, 7);
    double joint = std::sqrt(std::pow(2 * k3half.value * k3half.stderr_, 2) +
                             std::pow(k3tens.stderr_, 2));
    REQUIRE(std::abs(k3tens.value - k3half.value * k3half.value) < 4 * joint);
}

TEST_CASE("expression grammar reports positions and usage errors") {
    REQUIRE_THROWS_AS(build_graphon("(const 0.5"), parse_error);
    REQUIRE_THROWS_AS(build_graphon("(wat 1)"), parse_error);
    REQUIRE_THROWS_AS(build_graphon("(const x)"), parse_error);
    REQUIRE_THROWS_AS(build_graphon("(levelset (poly (1 0 -1)))"), parse_error);  // asymmetric
    try {
        build_graphon("(dsum\n  (0.5 (const 1)\n  )");
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        REQUIRE(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("specsolve expression requires a step operand") {
    REQUIRE_THROWS(build_graphon("(specsolve (coeffs 1 0 1) (half))"));
    auto w = build_graphon("(specsolve (coeffs 1) (step (0.5 0.5) ((0.5 0.1) (0.1 0.3))))");
    REQUIRE(w.steps() != nullptr);
    REQUIRE(w.steps()->at(0, 0) == Approx(0.5).margin(1e-9));
}

TEST_CASE("graph and cr file constructors resolve paths") {
    {
        std::ofstream out("/tmp/graphonlab_test_graphs.g");
        out << graphs::k2().to_text("k2") << graphs::c4().to_text("c4");
    }
    auto w = build_graphon("(graph /tmp/graphonlab_test_graphs.g k2)");
    REQUIRE(w.steps()->size() == 2);
    REQUIRE(t_exact_step(QuantumGraph(graphs::k2()), w).value == Approx(0.5));
    REQUIRE_THROWS_AS(build_graphon("(graph /tmp/graphonlab_test_graphs.g nope)"), parse_error);
    REQUIRE_THROWS_AS(build_graphon("(graph /tmp/definitely_missing.g k2)"), parse_error);

    {
        std::ofstream out("/tmp/graphonlab_test_tree.t");
        out << "root 0\nnode 0 children 1 2 3\n";
    }
    auto cr = build_graphon("(cr file /tmp/graphonlab_test_tree.t)");
    auto d = t_mc(QuantumGraph(graphs::k2()), cr, 100000, 9);
    REQUIRE(std::abs(d.value - 1.0 / 3) < 4 * d.stderr_);
}

TEST_CASE("graphon of a finite graph") {
    auto wg = graphon_of_graph(graphs::k2());
    REQUIRE(wg.steps()->size() == 2);
    REQUIRE(wg.eval(0.1, 0.9) == 1.0);
    REQUIRE(wg.eval(0.1, 0.2) == 0.0);
    Graph multi(2);
    multi.add_edge(0, 1, Color::blue, 2);
    REQUIRE_THROWS(graphon_of_graph(multi));
}
