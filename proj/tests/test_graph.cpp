#include <catch2/catch.hpp>

#include <sstream>

#include "graphonlab/graph.hpp"
#include "graphonlab/rng.hpp"
#include "support/oracles.hpp"

using namespace graphonlab;

TEST_CASE("canonical form is isomorphism-invariant on all 3-node labeled graphs") {
    // Enumerate every blue graph on 3 nodes with 0 or 1 labels and check the
    // canonical keys against the brute-force isomorphism oracle.
    std::vector<Graph> zoo;
    for (int mask = 0; mask < 8; ++mask)
        for (int lab = -1; lab < 3; ++lab) {
            Graph g(3);
            if (mask & 1) g.add_edge(0, 1);
            if (mask & 2) g.add_edge(1, 2);
            if (mask & 4) g.add_edge(0, 2);
            if (lab >= 0) g.set_label(1, lab);
            zoo.push_back(g);
        }
    for (const auto& a : zoo)
        for (const auto& b : zoo) {
            bool iso = oracles::isomorphic(a, b);
            bool same_key = a.canonical() == b.canonical();
            REQUIRE(iso == same_key);
        }
}

TEST_CASE("canonical form: named examples") {
    Graph t1(3);
    t1.add_edge(0, 1);
    t1.add_edge(1, 2);
    t1.add_edge(2, 0);
    Graph t2(3);
    t2.add_edge(2, 1);
    t2.add_edge(0, 2);
    t2.add_edge(1, 0);
    REQUIRE(t1.canonical() == t2.canonical());

    Graph pa = graphs::p3();
    pa.set_label(1, 0);
    Graph pb = graphs::p3();
    pb.set_label(1, 2);
    Graph pm = graphs::p3();
    pm.set_label(1, 1);
    REQUIRE(pa.canonical() == pb.canonical());
    REQUIRE(pa.canonical() != pm.canonical());
}

TEST_CASE("canonical form is stable and permutation-invariant on random graphs") {
    CounterRng rng(99, 0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.next_u64() % 6);
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                if (rng.next_coin(0.4)) g.add_edge(u, v, Color::blue, 1 + (rng.next_u64() % 2));
                if (rng.next_coin(0.2)) g.add_edge(u, v, Color::red);
            }
        int k = static_cast<int>(rng.next_u64() % std::min(n, 3));
        std::vector<int> nodes(n);
        std::iota(nodes.begin(), nodes.end(), 0);
        for (int p = 1; p <= k; ++p) g.set_label(p, nodes[p - 1]);

        Graph c1 = g.canonical();
        REQUIRE(c1.canonical() == c1);  // idempotent

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
        REQUIRE(g.permuted(perm).canonical() == c1);
    }
}

TEST_CASE("canonicalization caps at 12 nodes") {
    Graph big(13);
    big.add_edge(0, 1);
    REQUIRE_THROWS_AS(big.canonical(), graph_size_error);
    Graph ring = graphs::cycle(12);
    REQUIRE(ring.canonical().node_count() == 12);  // C12 stays feasible
}

TEST_CASE("graph invariants are validated") {
    Graph g(3);
    REQUIRE_THROWS(g.add_edge(0, 0));
    REQUIRE_THROWS(g.add_edge(0, 5));
    g.add_edge(0, 1);
    g.set_label(1, 0);
    g.set_label(2, 0);  // non-injective
    REQUIRE_THROWS(g.canonical());
}

TEST_CASE("graph text format round-trips") {
    Graph g(4);
    g.add_edge(0, 1, Color::blue, 2);
    g.add_edge(1, 2, Color::red);
    g.add_edge(2, 3);
    g.set_label(1, 3);
    std::istringstream in(g.to_text("demo"));
    auto named = parse_graphs(in);
    REQUIRE(named.count("demo") == 1);
    REQUIRE(named.at("demo").canonical() == g.canonical());
}

TEST_CASE("graph parse reports line numbers") {
    std::istringstream bad("graph x\nn 2\ne 1 5\nend\n");
    try {
        parse_graphs(bad);
        FAIL("expected parse error");
    } catch (const parse_error& e) {
        REQUIRE(std::string(e.what()).find("line 4") != std::string::npos);
    }
    std::istringstream bad2("graph y\ne 1 2\nend\n");
    REQUIRE_THROWS_AS(parse_graphs(bad2), parse_error);
}

TEST_CASE("simple and color predicates") {
    Graph g(2);
    g.add_edge(0, 1, Color::blue);
    REQUIRE(g.simple());
    g.add_edge(0, 1, Color::red);
    REQUIRE_FALSE(g.simple());
    REQUIRE_FALSE(g.all_blue());
    REQUIRE(g.edge_instances() == 2);
}
