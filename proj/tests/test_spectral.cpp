#include <catch2/catch.hpp>

#include <numbers>

#include "graphonlab/spectral.hpp"
#include "support/oracles.hpp"

using namespace graphonlab;

TEST_CASE("rank-one and two-block spectra") {
    auto pairs = eigendecompose(constant_graphon(0.5), 0);
    REQUIRE(pairs.size() == 1);
    REQUIRE(pairs[0].value == Approx(0.5).margin(1e-14));
    REQUIRE(pairs[0].func[0] == Approx(1.0).margin(1e-12));  // weighted-normalized constant

    auto pg = eigendecompose(graphon_of_graph(graphs::k2()), 0);
    REQUIRE(pg.size() == 2);
    REQUIRE(std::abs(pg[0].value) == Approx(0.5).margin(1e-14));
    REQUIRE(pg[0].value + pg[1].value == Approx(0.0).margin(1e-14));
}

TEST_CASE("eigenfunctions are orthonormal in the weighted inner product") {
    auto w = oracles::random_step(41, 5);
    auto pairs = eigendecompose(w, 0);
    const auto* s = w.steps();
    for (std::size_t a = 0; a < pairs.size(); ++a)
        for (std::size_t b = a; b < pairs.size(); ++b) {
            double dot = 0;
            for (int i = 0; i < s->size(); ++i) dot += s->weights[i] * pairs[a].func[i] * pairs[b].func[i];
            REQUIRE(dot == Approx(a == b ? 1.0 : 0.0).margin(1e-10));
        }
    REQUIRE(reconstruction_error(w, pairs) <= 1e-8);
}

TEST_CASE("corner-indicator kernel has the 2/(pi(4k+1)) spectrum") {
    const double pi = std::numbers::pi;
    auto u = discretize(complement(half_graphon()), 512);
    auto pairs = eigendecompose(u, 8);
    std::vector<double> pos, neg;
    for (const auto& p : pairs) (p.value > 0 ? pos : neg).push_back(p.value);
    REQUIRE(std::abs(pos[0] - 2 / pi) / (2 / pi) < 0.02);
    REQUIRE(std::abs(pos[1] - 2 / (5 * pi)) / (2 / (5 * pi)) < 0.02);
    REQUIRE(std::abs(pos[2] - 2 / (9 * pi)) / (2 / (9 * pi)) < 0.02);
    // negative branch k = -1, -2 of the same formula
    REQUIRE(std::abs(neg[0] + 2 / (3 * pi)) / (2 / (3 * pi)) < 0.02);
    REQUIRE(std::abs(neg[1] + 2 / (7 * pi)) / (2 / (7 * pi)) < 0.02);
}

TEST_CASE("spectral solve: identity, cubic, and error paths") {
    auto w = oracles::random_step(42, 4);
    auto id = spectral_solve(w, Poly1({1.0}));
    const auto *si = id.w.steps(), *sw = w.steps();
    for (std::size_t i = 0; i < sw->values.size(); ++i)
        REQUIRE(si->values[i] == Approx(sw->values[i]).margin(1e-9));

    auto u = discretize(complement(half_graphon()), 256);
    Poly1 cubic({1.0, 0.0, 1.0});
    auto sol = spectral_solve(u, cubic);
    auto forward = apply_operator_poly(sol.w, cubic);
    for (std::size_t i = 0; i < u.steps()->values.size(); ++i)
        REQUIRE(forward.steps()->values[i] == Approx(u.steps()->values[i]).margin(1e-6));
    double mu1 = eigendecompose(u, 1)[0].value;
    double z = cubic.inverse(mu1, 1e-13);
    REQUIRE(z * z * z + z == Approx(mu1).margin(1e-12));
    REQUIRE(eigendecompose(sol.w, 1)[0].value == Approx(z).margin(1e-9));

    REQUIRE_THROWS(spectral_solve(w, Poly1({0.0, 1.0})));  // z^2: not bijective
    REQUIRE_THROWS(spectral_solve(w, Poly1({-1.0, 0.0, 1.0})));  // decreasing near 0
    REQUIRE_THROWS(spectral_solve(half_graphon(), cubic));  // no step structure
}

TEST_CASE("polynomial inverse is safeguarded") {
    Poly1 p({2.0, 0.0, 5.0});
    for (double target : {-11.0, -0.3, 0.0, 0.7, 123.0}) {
        double z = p.inverse(target, 1e-13);
        REQUIRE(p.eval(z) == Approx(target).margin(1e-10));
    }
}
