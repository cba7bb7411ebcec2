#include <catch2/catch.hpp>

#include "graphonlab/cr.hpp"
#include "graphonlab/wrandom.hpp"
#include "support/oracles.hpp"

using namespace graphonlab;

TEST_CASE("degenerate graphons sample complete and empty graphs") {
    auto kn = sample_graph(constant_graphon(1.0), 20, 3);
    REQUIRE(kn.edge_count() == 190);
    auto en = sample_graph(constant_graphon(0.0), 20, 3);
    REQUIRE(en.edge_count() == 0);
    REQUIRE_THROWS(sample_graph(affine(2.0, 0.0, constant_graphon(1.0)), 5, 0));
}

TEST_CASE("sampling is deterministic per (seed, n)") {
    auto a = sample_graph(half_graphon(), 50, 9);
    auto b = sample_graph(half_graphon(), 50, 9);
    REQUIRE(a.adj == b.adj);
    REQUIRE(a.latents == b.latents);
    auto c = sample_graph(half_graphon(), 50, 10);
    REQUIRE(a.adj != c.adj);
}

TEST_CASE("matrix-formula densities agree with brute force") {
    auto g = sample_graph(oracles::random_step(3), 25, 17);
    for (const Graph& f : {graphs::k2(), graphs::p3(), graphs::path(4), graphs::path(5), graphs::k3(),
                           graphs::c4(), graphs::cycle(5), graphs::biclique(1, 3)}) {
        INFO("|V| = " << f.node_count());
        REQUIRE(sampled_density(f, g) == Approx(oracles::brute_hom_density(f, g)).margin(1e-12));
    }
}

TEST_CASE("induced path detection") {
    SampledGraph p4;
    p4.n = 4;
    p4.adj.assign(16, 0);
    auto link = [&](int i, int j) { p4.adj[i * 4 + j] = p4.adj[j * 4 + i] = 1; };
    link(0, 1);
    link(1, 2);
    link(2, 3);
    REQUIRE(induced_p4_count(p4) == 1);
    link(3, 0);  // now a C4: no induced path
    REQUIRE(induced_p4_count(p4) == 0);

    auto gs = sample_graph(binary_graphon(), 60, 4);
    REQUIRE(induced_p4_free(gs));
    SampledGraph too_big;
    too_big.n = 201;
    too_big.adj.assign(201 * 201, 0);
    REQUIRE_THROWS(induced_p4_count(too_big));
}

TEST_CASE("degree report and the concentration bound") {
    auto kn = sample_graph(constant_graphon(1.0), 30, 1);
    auto rep = degree_report(kn, 1.0, 0.1);
    REQUIRE(rep.max_normalized == 1.0);
    REQUIRE(rep.min_normalized == 1.0);
    REQUIRE(rep.max_deviation == 0.0);
    REQUIRE(rep.within_eps);

    // bound value: 1 - 2 n exp(-(n-1) eps^2)
    auto g = sample_graph(constant_graphon(0.5), 400, 2);
    auto r2 = degree_report(g, 0.5, 0.1);
    REQUIRE(r2.azuma_bound == Approx(1.0 - 800 * std::exp(-3.99)).margin(1e-12));

    // nontrivial bound at n = 1600: regular graphon degrees concentrate
    auto big = sample_graph(constant_graphon(0.5), 1600, 3);
    auto r3 = degree_report(big, 0.5, 0.1);
    REQUIRE(r3.azuma_bound > 0.999);
    REQUIRE(r3.within_eps);

    // at n = 400 the bound is vacuous (negative), so any trial outcome
    // respects it; the report just carries the numbers
    auto ub = sample_graph(binary_graphon(), 400, 4);
    auto r4 = degree_report(ub, 2.0 / 3, 0.1);
    REQUIRE(r4.azuma_bound < 0.0);
    REQUIRE(r4.max_normalized <= 1.0);
    REQUIRE(r4.min_normalized >= 0.0);
    bool vacuous_ok = r4.within_eps || r4.azuma_bound <= 0.0;
    REQUIRE(vacuous_ok);
}

TEST_CASE("edge density of G(const p, n) concentrates binomially") {
    const double p = 0.3;
    const int n = 50, trials = 50;
    const double pairs = n * (n - 1) / 2.0;
    double sum = 0;
    for (int t = 0; t < trials; ++t) {
        auto g = sample_graph(constant_graphon(p), n, 400 + t);
        sum += g.edge_count() / pairs;
    }
    double mean = sum / trials;
    double se = std::sqrt(p * (1 - p) / (pairs * trials));
    REQUIRE(std::abs(mean - p) <= 4 * se);
}

TEST_CASE("convergence experiment approaches graphon densities") {
    auto rows = convergence_experiment(constant_graphon(0.5), graphs::c4(), {30, 60}, 6, 11, 1.0 / 16);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) REQUIRE(std::abs(r.mean - 1.0 / 16) <= std::max(4 * r.spread, 0.02));

    auto rows2 = convergence_experiment(half_graphon(), graphs::k2(), {40, 160}, 8, 12, 0.5);
    REQUIRE(std::abs(rows2[1].mean - 0.5) <= 0.1);
    REQUIRE(rows2[1].spread < rows2[0].spread + 0.05);  // shrinking with n at desk scale

    auto cf = cr_graphon(make_cf(Scalar(Rational(2, 5)), 12));
    auto rows3 = convergence_experiment(cf, graphs::k2(), {80}, 8, 13, 0.4);
    REQUIRE(std::abs(rows3[0].mean - 0.4) <= 0.08);

    REQUIRE_THROWS(convergence_experiment(constant_graphon(0.5), graphs::complete(6), {10}, 2, 0, 0));
}

TEST_CASE("edge list format carries the header") {
    auto g = sample_graph(constant_graphon(1.0), 3, 5);
    auto text = g.edge_list("(const 1)");
    REQUIRE(text.find("# wrandom n=3 seed=5 graphon=(const 1)") == 0);
    REQUIRE(text.find("1 2") != std::string::npos);
}
