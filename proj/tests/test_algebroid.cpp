#include "dirac/algebroid.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

using namespace dirac;

namespace {

Expr P(const std::string& s, const PatchPtr& p) { return parse_expr(s, p); }

AlgebroidPatch so3() { return lie_algebra(3, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}}); }
AlgebroidPatch bad3() { return lie_algebra(3, {{0, 1, 0, 1}, {1, 2, 1, 1}, {2, 0, 2, 1}}); }
AlgebroidPatch abelian(std::size_t r) { return lie_algebra(r, {}); }
AlgebroidPatch affine() { return lie_algebra(2, {{0, 1, 0, 1}}); }
AlgebroidPatch heisenberg() { return lie_algebra(3, {{0, 1, 2, 1}}); }

KForm two(const PatchPtr& p, std::size_t i, std::size_t j, const std::string& c) {
    return wedge(KForm::differential(p, i), KForm::differential(p, j)).scaled(P(c, p));
}

// sigma(u) = i_u beta for A = TM.
IMTwoForm flat_of(const KForm& beta) {
    const std::size_t n = beta.patch()->dim();
    ExprMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < n; ++a)
            s.at(i, a) = beta.at({a, i});
    return {s};
}

Section sec(const PatchPtr& p, std::vector<std::string> c) {
    Section s;
    for (auto& e : c)
        s.push_back(P(e, p));
    return s;
}

ExprMatrix zero_matrix(std::size_t q, const PatchPtr& p) {
    ExprMatrix m(q, q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
            m.at(i, j) = Expr(p, 0);
    return m;
}

} // namespace

TEST(LieAlgebroid, Examples) {
    auto m = make_patch("R2", {"x", "y"});
    EXPECT_TRUE(check_lie_algebroid(tangent_algebroid(m)).pass);
    EXPECT_TRUE(check_lie_algebroid(so3()).pass);
    Report r = check_lie_algebroid(bad3());
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.part("jacobi")->pass);
}

TEST(LieAlgebroid, JacobiatorOracle) {
    // Independent expansion over a point: J_{123} = sum_cyc c^m_{ab} c^k_{mc}.
    auto g = bad3();
    for (std::size_t k = 0; k < 3; ++k) {
        Expr j(0);
        const std::size_t cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
        for (auto& t : cyc)
            for (std::size_t m = 0; m < 3; ++m)
                j += g.c(m, t[0], t[1]) * g.c(k, m, t[2]);
        EXPECT_FALSE(j.is_zero()) << k;
    }
}

TEST(LieAlgebroid, AnchorMustPreserveBrackets) {
    auto m = make_patch("R1", {"x"});
    AlgebroidPatch a(m, 2);
    a.set_anchor(0, 0, Expr(m, 1));
    a.set_anchor(0, 1, P("x", m));
    // [e1, e2] = 0 but [d/dx, x d/dx] = d/dx.
    Report r = check_lie_algebroid(a);
    EXPECT_FALSE(r.part("anchor")->pass);
    a.set_c(0, 0, 1, Expr(m, 1));
    EXPECT_TRUE(check_lie_algebroid(a).pass);
}

TEST(DualLinearPoisson, Examples) {
    Bivector pi = dual_linear_poisson(so3());
    auto p = pi.patch();
    EXPECT_EQ(p->coords(), (std::vector<std::string>{"xi1", "xi2", "xi3"}));
    EXPECT_EQ(pi.at(0, 1), P("xi3", p));
    EXPECT_EQ(pi.at(1, 2), P("xi1", p));
    EXPECT_EQ(pi.at(2, 0), P("xi2", p));
    EXPECT_TRUE(dual_linear_poisson(abelian(3)).is_zero());
    auto m = make_patch("R2", {"x", "y"});
    Bivector can = dual_linear_poisson(tangent_algebroid(m));
    auto q = can.patch();
    EXPECT_EQ(can.at(0, 2), Expr(q, 1));
    EXPECT_EQ(can.at(1, 3), Expr(q, 1));
    EXPECT_TRUE(can.at(0, 3).is_zero());
    EXPECT_TRUE(can.at(0, 1).is_zero());
    EXPECT_THROW(dual_linear_poisson(bad3()), NotAlgebroid);
}

TEST(Bialgebroid, Examples) {
    auto m = make_patch("R2", {"x", "y"});
    AlgebroidPatch zero_dual(m, 2);
    EXPECT_TRUE(check_lie_bialgebroid(tangent_algebroid(m), zero_dual).pass);
    EXPECT_TRUE(check_lie_bialgebroid(abelian(2), affine()).pass);
    EXPECT_FALSE(check_lie_bialgebroid(so3(), so3()).pass);
    EXPECT_THROW(check_lie_bialgebroid(abelian(5), abelian(5)), RankTooLarge);
    EXPECT_THROW(check_lie_bialgebroid(bad3(), abelian(3)), NotAlgebroid);
}

TEST(Bialgebroid, TangentWithCanonicalDual) {
    // Constant pi = d/dx ^ d/dy makes T*M an algebroid with anchor pi^sharp
    // and zero bracket on dx, dy; (TM, T*M_pi) is a bialgebroid.
    auto m = make_patch("R2", {"x", "y"});
    AlgebroidPatch cot(m, 2);
    cot.set_anchor(1, 0, Expr(m, 1));  // pi^sharp(dx) = d/dy
    cot.set_anchor(0, 1, Expr(m, -1)); // pi^sharp(dy) = -d/dx
    EXPECT_TRUE(check_lie_bialgebroid(tangent_algebroid(m), cot).pass);
    // Breaking anchor antisymmetry: rho_* = identity.
    AlgebroidPatch bad(m, 2);
    bad.set_anchor(0, 0, Expr(m, 1));
    bad.set_anchor(1, 1, Expr(m, 1));
    Report r = check_lie_bialgebroid(tangent_algebroid(m), bad);
    EXPECT_FALSE(r.pass);
}

TEST(IMTwoForm, Examples) {
    auto m = make_patch("R3", {"x", "y", "z"});
    auto tm = tangent_algebroid(m);
    EXPECT_TRUE(check_im_two_form(tm, flat_of(two(m, 0, 1, "1"))).pass);
    Report bad = check_im_two_form(tm, flat_of(two(m, 0, 1, "z")));
    EXPECT_FALSE(bad.pass);
    EXPECT_TRUE(bad.part("skew")->pass);
    EXPECT_FALSE(bad.part("bracket")->pass);
    EXPECT_TRUE(check_im_two_form(tm, IMTwoForm{ExprMatrix(3, 3)}).pass);
}

TEST(IMFoliation, Examples) {
    auto m = make_patch("R2", {"x", "y"});
    auto tm = tangent_algebroid(m);
    VField dx = VField::coordinate(m, 0);
    IMFoliation good{{dx}, {sec(m, {"1", "0"})}, {zero_matrix(1, m)}, std::nullopt};
    EXPECT_EQ(quotient_columns(tm, good.k), (std::vector<std::size_t>{1}));
    EXPECT_TRUE(check_im_foliation(tm, good).pass);

    IMFoliation skewed{{dx}, {sec(m, {"1", "x"})}, {zero_matrix(1, m)}, std::nullopt};
    Report r = check_im_foliation(tm, skewed);
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.part("kernel_stable")->pass);

    IMFoliation full{{dx, VField::coordinate(m, 1)}, {sec(m, {"1", "0"}), sec(m, {"0", "1"})},
                     {zero_matrix(0, m), zero_matrix(0, m)}, std::nullopt};
    EXPECT_TRUE(check_im_foliation(tm, full).pass);

    IMFoliation jump{{dx, VField::coordinate(m, 0).scaled(Expr(2))}, {}, {zero_matrix(2, m), zero_matrix(2, m)},
                     std::nullopt};
    EXPECT_THROW(check_im_foliation(tm, jump), RankJump);
}

TEST(IMFoliation, AnchorNotTangentAndCurvature) {
    auto m = make_patch("R2", {"x", "y"});
    auto tm = tangent_algebroid(m);
    VField dx = VField::coordinate(m, 0);
    IMFoliation off{{dx}, {sec(m, {"0", "1"})}, {zero_matrix(1, m)}, std::nullopt};
    Report r = check_im_foliation(tm, off);
    EXPECT_FALSE(r.part("anchor_tangent")->pass);

    // F_M = TM with one quotient direction and a curved connection:
    // G_x = 0, G_y = x gives curvature d/dx(x) = 1.
    IMFoliation curved{{dx, VField::coordinate(m, 1)}, {sec(m, {"1", "0"})}, {zero_matrix(1, m), zero_matrix(1, m)},
                       std::nullopt};
    curved.nabla[1].at(0, 0) = P("x", m);
    Report c = check_im_foliation(tm, curved);
    EXPECT_FALSE(c.part("flat")->pass);
    EXPECT_EQ(c.part("flat")->witness, "curvature[1,2,1,1] = 1");
}

TEST(IMFoliation, SuppliedFlatGenerators) {
    // K = span{e_x}, trivial connection on the quotient frame e_y. x*e_y is
    // not flat along d/dx; x*e_x + (y + 1)*e_y is.
    auto m = make_patch("R2", {"x", "y"});
    auto tm = tangent_algebroid(m);
    VField dx = VField::coordinate(m, 0);
    IMFoliation f{{dx}, {sec(m, {"1", "0"})}, {zero_matrix(1, m)}, std::vector<Section>{sec(m, {"0", "x"})}};
    EXPECT_FALSE(check_im_foliation(tm, f).part("flat_generators")->pass);
    f.flat = std::vector<Section>{sec(m, {"x", "y + 1"})};
    EXPECT_TRUE(check_im_foliation(tm, f).part("flat_generators")->pass);
}

TEST(LieBialgebra, Examples) {
    EXPECT_TRUE(check_lie_bialgebra({abelian(2), affine()}).pass);
    EXPECT_TRUE(check_lie_bialgebra({so3(), abelian(3)}, std::vector<std::size_t>{0, 1, 2}).pass);
    Report r = check_lie_bialgebra({so3(), so3()});
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.part("cocycle")->pass);
    EXPECT_THROW(check_lie_bialgebra({bad3(), abelian(3)}), NotLie);
    // span{e1} is not an ideal of so(3).
    EXPECT_THROW(check_lie_bialgebra({so3(), abelian(3)}, std::vector<std::size_t>{0}), NotIdeal);
    // Heisenberg centre span{e3} is an ideal; the quotient is abelian.
    EXPECT_TRUE(check_lie_bialgebra({heisenberg(), abelian(3)}, std::vector<std::size_t>{2}).pass);
}

TEST(LieBialgebra, CocycleOracle) {
    // Hand expansion at x = e1, y = e2, entry (1,2):
    //   delta[e1,e2]^{12}       = delta(e3)^{12}             =  1
    //   (ad_e1 delta e2)^{12}   = [e1,e3]^2 delta(e2)^{13}   = (-1)(-1) = 1
    //   (ad_e2 delta e1)^{12}   = [e2,e3]^1 delta(e1)^{32}   = (1)(-1) = -1
    // so the defect is 1 - 1 + (-1) = -1.
    Report r = check_lie_bialgebra({so3(), so3()});
    EXPECT_EQ(r.part("cocycle")->witness, "cocycle[1,2,1,2] = -1");
}

TEST(Linearity, Examples) {
    // Linear Poisson on so(3)* over a point passes.
    Frame lin = graph_bivector(dual_linear_poisson(so3()));
    EXPECT_TRUE(check_linearity(lin, 0).pass);
    auto u = make_patch("U", {"u1", "u2"});
    Frame cst = graph_bivector(wedge(VField::coordinate(u, 0), VField::coordinate(u, 1)));
    EXPECT_FALSE(check_linearity(cst, 0).pass);
    // -sigma^* omega_can for sigma(x, u) = (x, u s(x)) is -s dx^du.
    auto a = make_patch("A", {"x", "u"});
    EXPECT_TRUE(check_linearity(graph_two_form(two(a, 0, 1, "-x^2 - 1")), 1).pass);
    EXPECT_THROW(check_linearity(Frame(a, {GSec::vector(VField::coordinate(a, 0))}), 1), NotLagrangian);
}

// ---------------------------------------------------------------- properties

TEST(Property, DualPoissonIsPoisson) {
    auto m = make_patch("R2", {"x", "y"});
    AlgebroidPatch act(m, 1); // action algebroid of the field x d/dy
    act.set_anchor(1, 0, P("x", m));
    std::vector<AlgebroidPatch> lib = {so3(), heisenberg(), affine(), abelian(2), tangent_algebroid(m), act};
    for (const auto& a : lib) {
        ASSERT_TRUE(check_lie_algebroid(a).pass);
        auto j = schouten_jacobiator(dual_linear_poisson(a));
        for (const auto& e : j)
            ASSERT_TRUE(e.is_zero());
    }
}

TEST(Property, IMTwoFormIffClosed) {
    auto m = make_patch("R3", {"x", "y", "z"});
    auto tm = tangent_algebroid(m);
    std::vector<KForm> lib = {two(m, 0, 1, "1"),   two(m, 0, 1, "x") + two(m, 1, 2, "z"), two(m, 0, 2, "y^2"),
                              two(m, 0, 1, "z"),   two(m, 1, 2, "x*y"),                    two(m, 0, 2, "x*z + y")};
    for (const auto& b : lib)
        EXPECT_EQ(check_im_two_form(tm, flat_of(b)).pass, exterior_derivative(b).is_zero()) << b.to_string();
}

TEST(Property, BialgebroidSymmetric) {
    std::vector<AlgebroidPatch> lib = {so3(), heisenberg(), abelian(3), bad3()};
    std::vector<AlgebroidPatch> two_d = {affine(), abelian(2), lie_algebra(2, {{0, 1, 1, 1}})};
    int pairs = 0;
    for (const auto* group : {&lib, &two_d})
        for (const auto& a : *group)
            for (const auto& b : *group) {
                if (!check_lie_algebroid(a).pass || !check_lie_algebroid(b).pass)
                    continue;
                EXPECT_EQ(check_lie_bialgebroid(a, b).pass, check_lie_bialgebroid(b, a).pass)
                    << a.to_string() << " / " << b.to_string();
                ++pairs;
            }
    EXPECT_GE(pairs, 10);
}

TEST(Property, BialgebroidOverPointAgreesWithBialgebra) {
    std::vector<AlgebroidPatch> lib = {so3(), heisenberg(), abelian(3)};
    for (const auto& a : lib)
        for (const auto& b : lib)
            EXPECT_EQ(check_lie_bialgebroid(a, b).pass, check_lie_bialgebra({a, b}).pass);
}

TEST(Property, VerifiedBialgebraGivesLinearDirac) {
    // Over a point the dual Poisson structure of g* lives on g** = g.
    std::vector<std::pair<AlgebroidPatch, AlgebroidPatch>> lib = {
        {abelian(2), affine()}, {heisenberg(), abelian(3)}, {abelian(3), so3()}};
    for (const auto& [g, gs] : lib) {
        ASSERT_TRUE(check_lie_bialgebroid(g, gs).pass);
        Frame l = graph_bivector(dual_linear_poisson(gs));
        EXPECT_TRUE(check_dirac(l).pass);
        EXPECT_TRUE(check_linearity(l, 0).pass);
    }
}

TEST(Property, LinearityMatchesProvenance) {
    auto a = make_patch("A", {"x", "u1", "u2"});
    auto m = make_patch("R1", {"x"});
    AlgebroidPatch act(m, 2);
    act.set_anchor(0, 0, Expr(m, 1));
    act.set_c(1, 0, 1, Expr(m, 1));
    Bivector lin = dual_linear_poisson(act);
    auto p = lin.patch();
    Bivector shifted = lin + wedge(VField::coordinate(p, 1), VField::coordinate(p, 2));

    struct Case {
        Frame frame;
        std::size_t base;
        bool linear;
    };
    std::vector<Case> cases = {
        {graph_bivector(lin), 1, true},
        {graph_bivector(shifted), 1, false},
        {graph_bivector(dual_linear_poisson(so3())), 0, true},
        {graph_two_form(two(a, 0, 1, "1") + two(a, 0, 2, "x")), 1, true},
        {graph_two_form(two(a, 0, 1, "1") + two(a, 1, 2, "1")), 1, false},
        {graph_two_form(two(a, 0, 1, "u2")), 1, false},
    };
    for (std::size_t i = 0; i < cases.size(); ++i)
        EXPECT_EQ(check_linearity(cases[i].frame, cases[i].base).pass, cases[i].linear) << i;
}
