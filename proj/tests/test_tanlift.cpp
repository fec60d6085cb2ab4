#include "dirac/tanlift.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

using namespace dirac;

namespace {

Expr P(const std::string& s, const PatchPtr& p) { return parse_expr(s, p); }

VField V(const PatchPtr& p, std::vector<std::string> c) {
    std::vector<Expr> e;
    for (auto& s : c)
        e.push_back(P(s, p));
    return VField(p, e);
}

KForm F(const PatchPtr& p, std::vector<std::string> c) {
    std::vector<Expr> e;
    for (auto& s : c)
        e.push_back(P(s, p));
    return KForm::one_form(p, e);
}

KForm two(const PatchPtr& p, std::size_t i, std::size_t j, const std::string& c) {
    return wedge(KForm::differential(p, i), KForm::differential(p, j)).scaled(P(c, p));
}

std::vector<std::string> strs(const PolyMap& m) {
    std::vector<std::string> out;
    for (const auto& e : m.comps())
        out.push_back(e.to_string());
    return out;
}

bool same_map(const PolyMap& a, const PolyMap& b) {
    if (!same_patch(a.source(), b.source()) || !same_patch(a.target(), b.target()))
        return false;
    return a.comps() == b.comps();
}

VField random_field(gen::Rng& rng, const PatchPtr& p) {
    std::vector<Expr> c;
    for (std::size_t i = 0; i < p->dim(); ++i)
        c.push_back(rng.poly(p, 2, 3));
    return VField(p, c);
}

KForm random_one_form(gen::Rng& rng, const PatchPtr& p) {
    std::vector<Expr> c;
    for (std::size_t i = 0; i < p->dim(); ++i)
        c.push_back(rng.poly(p, 2, 3));
    return KForm::one_form(p, c);
}

PatchPtr R1() { return make_patch("R1", {"x"}); }
PatchPtr R2() { return make_patch("R2", {"x", "y"}); }

} // namespace

TEST(Naming, TangentAndCotangent) {
    auto tm = tangent_patch(R2());
    EXPECT_EQ(tm.total->coords(), (std::vector<std::string>{"x", "y", "x'", "y'"}));
    auto ttm = tangent_patch(tm.total);
    EXPECT_EQ(ttm.total->coords(), (std::vector<std::string>{"x", "y", "x'", "y'", "Dx", "Dy", "Dx'", "Dy'"}));
    EXPECT_EQ(cotangent_patch(R2()).total->coords(), (std::vector<std::string>{"x", "y", "p_x", "p_y"}));
}

TEST(LiftFunction, Examples) {
    auto b = R1();
    auto tm = tangent_patch(b);
    EXPECT_EQ(lift_function(P("x", b), tm, Lift::tangent), P("x'", tm.total));
    EXPECT_EQ(lift_function(P("x^2", b), tm, Lift::tangent), P("2*x*x'", tm.total));
    EXPECT_TRUE(lift_function(Expr(b, 7), tm, Lift::tangent).is_zero());
    EXPECT_EQ(lift_function(P("x^2", b), tm, Lift::vertical), P("x^2", tm.total));
}

TEST(LiftVectorField, Examples) {
    auto b = R1();
    auto tm = tangent_patch(b);
    EXPECT_EQ(lift_vector_field(V(b, {"1"}), tm, Lift::vertical), V(tm.total, {"0", "1"}));
    EXPECT_EQ(lift_vector_field(V(b, {"x"}), tm, Lift::tangent), V(tm.total, {"x", "x'"}));
    EXPECT_EQ(lift_vector_field(V(b, {"1"}), tm, Lift::tangent), V(tm.total, {"1", "0"}));
}

TEST(LiftOneForm, Examples) {
    auto b = R2();
    auto tm = tangent_patch(b);
    EXPECT_EQ(lift_one_form(F(b, {"1", "0"}), tm, Lift::tangent), F(tm.total, {"0", "0", "1", "0"}));
    EXPECT_EQ(lift_one_form(F(b, {"1", "0"}), tm, Lift::vertical), F(tm.total, {"1", "0", "0", "0"}));
    EXPECT_EQ(lift_one_form(F(b, {"0", "x"}), tm, Lift::tangent), F(tm.total, {"0", "x'", "0", "x"}));
}

TEST(CanonicalInvolution, Examples) {
    auto tt = tangent_patch(tangent_patch(R1()).total);
    PolyMap j = canonical_involution(tt);
    EXPECT_EQ(strs(j), (std::vector<std::string>{"x", "Dx", "x'", "Dx'"}));
    EXPECT_TRUE(j.after(j).is_identity());
    EXPECT_THROW(canonical_involution(tangent_patch(make_patch("odd", {"a", "b", "c"}))), WrongShape);
    EXPECT_THROW(canonical_involution(tangent_patch(make_patch("flat", {"a", "b"}))), WrongShape);

    auto tm = tangent_patch(R1());
    VField x = V(R1(), {"x"});
    EXPECT_TRUE(same_map(j.after(tangent_section(x, tm)), section_map(lift_vector_field(x, tm, Lift::tangent), tm)));
    EXPECT_TRUE(same_map(j.after(core_section(x, tm)), section_map(lift_vector_field(x, tm, Lift::vertical), tm)));
}

TEST(Tulczyjew, Examples) {
    auto b = R1();
    PolyMap th = tulczyjew_map(b);
    // Source (x, p_x, x', p_x'), target (x, x', p_x, p_x').
    EXPECT_EQ(th.source()->coords(), (std::vector<std::string>{"x", "p_x", "x'", "p_x'"}));
    EXPECT_EQ(th.target()->coords(), (std::vector<std::string>{"x", "x'", "p_x", "p_x'"}));
    EXPECT_EQ(strs(th), (std::vector<std::string>{"x", "x'", "p_x'", "p_x"}));

    auto r2 = R2();
    auto tm = tangent_patch(r2);
    PolyMap th2 = tulczyjew_map(r2);
    KForm a = F(r2, {"0", "x"});
    EXPECT_TRUE(same_map(th2.after(tangent_section(a, tm)), section_map(lift_one_form(a, tm, Lift::tangent), tm)));
    KForm dx = F(r2, {"1", "0"});
    EXPECT_TRUE(same_map(th2.after(core_section(dx, tm)), section_map(lift_one_form(dx, tm, Lift::vertical), tm)));
}

TEST(Legendre, Examples) {
    auto a = make_patch("A", {"x", "u"});
    PolyMap r = legendre_map(a, 1);
    EXPECT_EQ(r.source()->coords(), (std::vector<std::string>{"x", "xi1", "p_x", "p_xi1"}));
    EXPECT_EQ(r.target()->coords(), (std::vector<std::string>{"x", "u", "p_x", "p_u"}));
    EXPECT_EQ(strs(r), (std::vector<std::string>{"x", "p_xi1", "-p_x", "xi1"}));

    KForm w_a = canonical_symplectic(cotangent_patch(a));
    KForm w_dual = canonical_symplectic(cotangent_patch(dual_bundle_patch(a, 1)));
    EXPECT_EQ(pullback_form(r, w_a), w_dual.scaled(Expr(-1)));
    EXPECT_EQ(r[0], Expr::var(r.source(), 0));

    auto big = make_patch("A2", {"x", "y", "u", "v"});
    PolyMap r2 = legendre_map(big, 2);
    EXPECT_EQ(pullback_form(r2, canonical_symplectic(cotangent_patch(big))),
              canonical_symplectic(cotangent_patch(dual_bundle_patch(big, 2))).scaled(Expr(-1)));
}

TEST(TangentLiftDirac, Examples) {
    auto b = R2();
    auto tm = tangent_patch(b);
    Frame all = foliation_frame(b, {VField::coordinate(b, 0), VField::coordinate(b, 1)});
    Frame lifted = tangent_lift_dirac(all);
    ASSERT_EQ(lifted.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_EQ(lifted[i], GSec::vector(VField::coordinate(tm.total, i)));

    Frame g = tangent_lift_dirac(graph_two_form(two(b, 0, 1, "1")));
    // dx'^dy + dx^dy'
    KForm target = two(tm.total, 2, 1, "1") + two(tm.total, 0, 3, "1");
    EXPECT_TRUE(same_span(g, graph_two_form(target)));
    EXPECT_FALSE(same_span(g, graph_two_form(two(tm.total, 0, 1, "1"))));

    Frame pb = tangent_lift_dirac(graph_bivector(wedge(VField::coordinate(b, 0), VField::coordinate(b, 1))));
    Bivector pt = wedge(VField::coordinate(tm.total, 0), VField::coordinate(tm.total, 3)) +
                  wedge(VField::coordinate(tm.total, 2), VField::coordinate(tm.total, 1));
    EXPECT_TRUE(same_span(pb, graph_bivector(pt)));
}

TEST(TangentMu, Examples) {
    auto p = make_patch("R3", {"x", "y", "z"});
    Report closed = check_tangent_mu_identity(graph_two_form(two(p, 0, 1, "x")));
    EXPECT_TRUE(closed.pass);
    Report nonclosed = check_tangent_mu_identity(graph_two_form(two(p, 0, 1, "z")));
    EXPECT_TRUE(nonclosed.pass);
    // Both sides are nonzero here.
    auto mu = courant_tensor(tangent_lift_dirac(graph_two_form(two(p, 0, 1, "z"))));
    EXPECT_FALSE(std::all_of(mu.begin(), mu.end(), [](const Expr& e) { return e.is_zero(); }));
    Bivector bad(p);
    bad.set(0, 1, P("x", p));
    bad.set(1, 2, P("y", p));
    bad.set(2, 0, P("z", p));
    EXPECT_TRUE(check_tangent_mu_identity(graph_bivector(bad)).pass);
    EXPECT_THROW(check_tangent_mu_identity(Frame(p, {GSec::vector(VField::coordinate(p, 0))})), NotLagrangian);
}

// ---------------------------------------------------------------- properties

TEST(Property, DefiningIdentities) {
    gen::Rng rng(41);
    auto b = R2();
    auto tm = tangent_patch(b);
    auto v = [&](const Expr& f) { return lift_function(f, tm, Lift::vertical); };
    auto t = [&](const Expr& f) { return lift_function(f, tm, Lift::tangent); };
    for (int it = 0; it < 25; ++it) {
        VField x = random_field(rng, b);
        KForm a = random_one_form(rng, b);
        Expr f = rng.poly(b, 2, 3);
        VField xv = lift_vector_field(x, tm, Lift::vertical), xt = lift_vector_field(x, tm, Lift::tangent);
        ASSERT_TRUE(xv.apply(v(f)).is_zero());
        ASSERT_EQ(xv.apply(t(f)), v(x.apply(f)));
        ASSERT_EQ(xt.apply(v(f)), v(x.apply(f)));
        ASSERT_EQ(xt.apply(t(f)), t(x.apply(f)));
        KForm av = lift_one_form(a, tm, Lift::vertical), at = lift_one_form(a, tm, Lift::tangent);
        ASSERT_TRUE(av.evaluate({xv}).is_zero());
        ASSERT_EQ(av.evaluate({xt}), v(a.evaluate({x})));
        ASSERT_EQ(at.evaluate({xv}), v(a.evaluate({x})));
        ASSERT_EQ(at.evaluate({xt}), t(a.evaluate({x})));
    }
}

TEST(Property, LiftBracketIdentities) {
    gen::Rng rng(42);
    auto b = R2();
    auto tm = tangent_patch(b);
    for (int it = 0; it < 20; ++it) {
        GSec s1(random_field(rng, b), random_one_form(rng, b));
        GSec s2(random_field(rng, b), random_one_form(rng, b));
        GSec br = courant_bracket(s1, s2);
        auto T = [&](const GSec& s) { return lift_section(s, tm, Lift::tangent); };
        auto Vl = [&](const GSec& s) { return lift_section(s, tm, Lift::vertical); };
        ASSERT_TRUE(courant_bracket(Vl(s1), Vl(s2)).is_zero());
        ASSERT_EQ(courant_bracket(T(s1), Vl(s2)), Vl(br));
        ASSERT_EQ(courant_bracket(T(s1), T(s2)), T(br));
    }
}

TEST(Property, InvolutionAndTulczyjewOnRandomSections) {
    gen::Rng rng(43);
    auto b = R2();
    auto tm = tangent_patch(b);
    PolyMap j = canonical_involution(tangent_patch(tm.total));
    PolyMap th = tulczyjew_map(b);
    ASSERT_TRUE(j.after(j).is_identity());
    for (int it = 0; it < 20; ++it) {
        VField x = random_field(rng, b);
        KForm a = random_one_form(rng, b);
        ASSERT_TRUE(
            same_map(j.after(tangent_section(x, tm)), section_map(lift_vector_field(x, tm, Lift::tangent), tm)));
        ASSERT_TRUE(same_map(th.after(tangent_section(a, tm)), section_map(lift_one_form(a, tm, Lift::tangent), tm)));
        ASSERT_TRUE(same_map(th.after(core_section(a, tm)), section_map(lift_one_form(a, tm, Lift::vertical), tm)));
    }
}

TEST(Property, TulczyjewHasPolynomialInverse) {
    auto b = R2();
    PolyMap th = tulczyjew_map(b);
    // Inverse: (x, x', p_x, p_x') -> (x, p = p_x', x', p' = p_x).
    const auto& t = th.target();
    PolyMap inv(t, th.source(),
                {Expr::var(t, 0), Expr::var(t, 1), Expr::var(t, 6), Expr::var(t, 7), Expr::var(t, 2), Expr::var(t, 3),
                 Expr::var(t, 4), Expr::var(t, 5)});
    EXPECT_TRUE(th.after(inv).is_identity());
    EXPECT_TRUE(inv.after(th).is_identity());
}

TEST(Property, TangentMuAndDiracLiftsOnRandomLibrary) {
    gen::Rng rng(44);
    auto p = make_patch("R3", {"x", "y", "z"});
    int instances = 0;
    for (int it = 0; it < 20; ++it) {
        KForm w(p, 2);
        for (int k = 0; k < 2; ++k) {
            std::size_t i = static_cast<std::size_t>(rng.range(0, 2));
            std::size_t j = static_cast<std::size_t>(rng.range(0, 2));
            w.add({i, j}, rng.poly(p, 2, 2));
        }
        Frame l = graph_two_form(w);
        ASSERT_TRUE(check_tangent_mu_identity(l).pass) << w.to_string();
        bool dirac = check_dirac(l).pass;
        if (dirac)
            ASSERT_TRUE(check_dirac(tangent_lift_dirac(l)).pass);
        ++instances;
    }
    EXPECT_GE(instances, 20);
}
