#include <catch2/catch.hpp>

#include "graphonlab/cr.hpp"
#include "graphonlab/expr.hpp"
#include "graphonlab/verify.hpp"
#include "support/oracles.hpp"

using namespace graphonlab;

namespace {
VerifyOptions quick() {
    VerifyOptions opt;
    opt.samples = 150000;
    opt.pointwise_samples = 8000;
    return opt;
}
}  // namespace

TEST_CASE("defining graphons pass their own families") {
    auto opt = quick();
    auto chalf = constant_graphon(0.5);
    REQUIRE(verify_family(chalf, {Family::cgw}, opt).pass);
    FamilySpec reg;
    reg.kind = Family::regular;
    reg.degree = 0.5;
    REQUIRE(verify_family(chalf, reg, opt).pass);
    REQUIRE(verify_family(chalf, {Family::regular_any}, opt).pass);

    auto wh = half_graphon();
    REQUIRE(verify_family(wh, {Family::halfgraphon}, opt).pass);
    REQUIRE(verify_family(wh, {Family::monotone}, opt).pass);
    REQUIRE(verify_family(graphon_of_graph(graphs::c4()), {Family::zero_one}, opt).pass);

    FamilySpec mp;
    mp.kind = Family::monpoly;
    mp.poly = poly_half();
    REQUIRE(verify_family(wh, mp, opt).pass);
}

TEST_CASE("negative controls fail with the expected values") {
    auto opt = quick();
    auto chalf = constant_graphon(0.5);
    auto z = verify_family(chalf, {Family::zero_one}, opt);
    REQUIRE_FALSE(z.pass);
    REQUIRE(z.conditions[0].estimate == Approx(1.0 / 16).margin(1e-12));

    auto wh = half_graphon();
    auto c = verify_family(wh, {Family::cgw}, opt);
    REQUIRE_FALSE(c.pass);
    // t(C4, half) = 1/6, not 1/16
    REQUIRE(c.conditions[1].estimate == Approx(1.0 / 6).margin(0.01));

    // half-graphon is not regular
    auto r = verify_family(wh, {Family::regular_any}, opt);
    REQUIRE_FALSE(r.pass);
}

TEST_CASE("halfgraphon family reports the printed sign variant as info") {
    auto opt = quick();
    auto rep = verify_family(half_graphon(), {Family::halfgraphon}, opt);
    bool saw_info = false;
    for (const auto& c : rep.conditions)
        if (c.informational) {
            saw_info = true;
            REQUIRE(std::abs(c.estimate - 1.0 / 3) < 0.01);  // the printed form misses by 1/3
            REQUIRE_FALSE(std::abs(c.estimate - c.target) <= c.tol);
        }
    REQUIRE(saw_info);
    REQUIRE(rep.pass);  // info rows do not affect the verdict
}

TEST_CASE("CR graphons are regular at their stated degrees") {
    VerifyOptions opt;
    opt.samples = 400000;
    FamilySpec reg;
    reg.kind = Family::regular;
    reg.degree = 2.0 / 3;
    REQUIRE(verify_family(binary_graphon(), reg, opt).pass);

    // terminating rational caterpillar: exact stepfunction, exact check
    reg.degree = 0.4;
    auto cf = truncate_graphon(make_cf(Scalar(Rational(2, 5)), 10), 10);
    REQUIRE(verify_family(cf, reg, opt).pass);

    reg.degree = (3.0 - std::sqrt(5.0)) / 2.0;
    auto golden = cr_graphon(make_cf(Scalar::approx(reg.degree), 40));
    auto rep = verify_family(golden, reg, opt);
    INFO(rep.text());
    REQUIRE(rep.pass);
}

TEST_CASE("binary-tree constants by exact evaluation on the truncation") {
    // A second, Monte-Carlo-free route to the tree constants: exact block
    // sums on the depth-12 truncated stepfunction. Truncation shifts the
    // values by at most a few parts in 2^11.
    auto g = truncate_graphon(make_binary_prefix(12), 12);
    const auto* s = g.steps();
    int bx = s->block_of(0.13), by = s->block_of(0.36), bz = s->block_of(0.61);

    QuantumGraph A(graphs::a_flag());
    REQUIRE(tk_exact_blocks(A, g, {bz}) == Approx(2.0 / 3).margin(0.01));
    QuantumGraph Bh(detail::b_hat()), Bb(graphs::color_swapped(detail::b_hat()));
    REQUIRE(tk_exact_blocks(Bh, g, {bz}) == Approx(8.0 / 45).margin(0.01));
    REQUIRE(tk_exact_blocks(Bb, g, {bz}) == Approx(2.0 / 45).margin(0.01));

    QuantumGraph Ch(detail::c_hat());
    double c_val = tk_exact_blocks(Ch, g, {bx, by});
    REQUIRE(c_val == Approx(1.0 / 6).margin(0.01));
    // The D evaluation has two free nodes: 2048^2 summands, still exact.
    QuantumGraph Dh(detail::d_hat());
    double d_val = tk_exact_blocks(Dh, g, {bx, by});
    REQUIRE(d_val == Approx(1.0 / 90).margin(0.005));
    REQUIRE(2 * c_val * c_val - 5 * d_val == Approx(0.0).margin(0.01));

    // Barred twin at a depth-1-separated pair.
    int bu = s->block_of(0.21), bv = s->block_of(0.77);
    QuantumGraph Cb(graphs::color_swapped(detail::c_hat()));
    QuantumGraph Db(graphs::color_swapped(detail::d_hat()));
    double cb = tk_exact_blocks(Cb, g, {bu, bv});
    double db = tk_exact_blocks(Db, g, {bu, bv});
    REQUIRE(cb == Approx(1.0 / 3).margin(0.01));
    REQUIRE(db == Approx(2.0 / 45).margin(0.005));
    REQUIRE(2 * cb * cb - 5 * db == Approx(0.0).margin(0.01));
}

TEST_CASE("binary-tree family verifies U_B quickly") {
    VerifyOptions opt;
    opt.samples = 120000;
    opt.pointwise_samples = 12000;
    opt.cfg.pointwise_samples = 8;  // fewer sampled tuples for the unit run
    auto rep = verify_family(binary_graphon(), {Family::binary_tree}, opt);
    INFO(rep.text());
    REQUIRE(rep.pass);
    auto bad = verify_family(constant_graphon(2.0 / 3), {Family::binary_tree}, opt);
    REQUIRE_FALSE(bad.pass);  // right degree, wrong structure
}

TEST_CASE("stokes identities on level sets") {
    auto wh = half_graphon();
    auto st = stokes_check(wh, 1, 1);
    REQUIRE(st.lhs == Approx(1.0 / 3).margin(1e-6));
    REQUIRE(st.rhs == Approx(1.0 / 3).margin(1e-9));
    REQUIRE(st.gap <= 1e-6);

    auto s12 = stokes_check(wh, 1, 2);
    REQUIRE(s12.gap <= 1e-6);

    // a=b=0: curve integral of (n1+n2) along the hypotenuse is 2 and the
    // right side is t(K_{1,0}) + t(K_{0,1}) = 2.
    auto s00 = stokes_check(wh, 0, 0);
    REQUIRE(s00.lhs == Approx(2.0).margin(1e-6));
    REQUIRE(s00.rhs == Approx(2.0).margin(1e-12));

    // area form: t(K_{1,1}) = area of the level set = 1/2
    REQUIRE(detail::kab_levelset(poly_half(), 1, 1) == Approx(0.5).margin(1e-9));

    Poly2 circ;
    circ.add_term(0, 0, 1.0);
    circ.add_term(2, 0, -1.0);
    circ.add_term(0, 2, -1.0);
    auto sc = stokes_check(levelset_graphon(circ), 2, 1);
    REQUIRE(sc.gap <= 1e-6);

    REQUIRE_THROWS(stokes_check(constant_graphon(0.5), 1, 1));  // no boundary curve
    Poly2 rising;
    rising.add_term(1, 0, 1.0);
    rising.add_term(0, 1, 1.0);
    rising.add_term(0, 0, -1.0);
    REQUIRE_THROWS(stokes_check(levelset_graphon(rising), 1, 1));  // not decreasing
}

TEST_CASE("gram probe finds the constant-kernel dependency and nothing else") {
    auto opt = quick();
    Graph e2 = graphs::k2();
    e2.set_label(1, 0);
    e2.set_label(2, 1);
    Graph n2 = graphs::empty(2);
    n2.set_label(1, 0);
    n2.set_label(2, 1);
    auto dep = find_2labeled_dependency(constant_graphon(0.5), {e2, n2}, 60, opt);
    REQUIRE(dep.found);
    REQUIRE(dep.reverified);
    REQUIRE(dep.coefficients[0] / dep.coefficients[1] == Approx(-2.0).margin(1e-6));

    // generic stepfunction, independent basis: no dependency
    Graph cherry = graphs::p3();
    cherry.set_label(1, 0);
    cherry.set_label(2, 2);
    auto none = find_2labeled_dependency(oracles::random_step(77), {e2, n2, cherry}, 60, opt);
    REQUIRE_FALSE(none.found);

    // monotone identity: the alternating 4-cycle labeled at opposite nodes
    // has t^2 = 0 almost everywhere on the half-graphon.
    Graph c4m = graphs::c4_alternating();
    c4m.set_label(1, 0);
    c4m.set_label(2, 2);
    auto mono = find_2labeled_dependency(half_graphon(), {c4m}, 40, opt);
    REQUIRE(mono.found);
    REQUIRE(mono.reverified);

    REQUIRE_THROWS(find_2labeled_dependency(constant_graphon(0.5), {graphs::k2()}, 10, opt));
}

TEST_CASE("adjoint identity checks per descriptor") {
    auto opt = quick();
    auto w = oracles::random_step(31);
    Graph h = graphs::k3();
    h.set_label(1, 0);
    h.set_label(2, 1);
    for (const Graph& F : {graphs::k2(), graphs::p3(), graphs::k3(), graphs::c4()}) {
        REQUIRE(adjoint_identity_check(ScaleOp{Scalar(Rational(3, 4))}, F, w, opt).pass);
        REQUIRE(adjoint_identity_check(ShiftOp{Scalar(Rational(1, 4))}, F, w, opt).pass);
        REQUIRE(adjoint_identity_check(PolyKernelOp{{Scalar(0), Scalar(1)}}, F, w, opt).pass);
        REQUIRE(adjoint_identity_check(TensorPowerOp{2}, F, w, opt).pass);
        REQUIRE(adjoint_identity_check(EdgeSubstituteOp{h}, F, w, opt).pass);
        REQUIRE(adjoint_identity_check_tensor_fixed(half_graphon(), F, w, opt).pass);
    }
    // p(z) = z^3 + z on K2: the adjoint is K2 + P4 and both sides agree.
    REQUIRE(adjoint_identity_check(PolyKernelOp{{Scalar(1), Scalar(0), Scalar(1)}}, graphs::k2(), w, opt)
                .pass);
}

TEST_CASE("edge substitution needs the label-swap automorphism") {
    auto opt = quick();
    Graph bad = graphs::p3();
    bad.set_label(1, 0);  // end
    bad.set_label(2, 1);  // middle: no swap automorphism
    REQUIRE_THROWS(adjoint_identity_check(EdgeSubstituteOp{bad}, graphs::k2(),
                                          oracles::random_step(3), opt));
    REQUIRE_THROWS(adjoint_map(graphs::k2(), EdgeSubstituteOp{bad}));
}

TEST_CASE("unknown family names are rejected") {
    REQUIRE_THROWS_AS(family_from_name("nope"), std::invalid_argument);
    REQUIRE(family_from_name("cgw") == Family::cgw);
}
