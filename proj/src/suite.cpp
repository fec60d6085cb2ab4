#include "dirac/suite.hpp"
#include "dirac/groupoid.hpp"

#include <random>

namespace dirac {

namespace {

Expr P(const std::string& s, const PatchPtr& p) { return parse_expr(s, p); }

KForm two(const PatchPtr& p, std::size_t i, std::size_t j, const std::string& c) {
    return wedge(KForm::differential(p, i), KForm::differential(p, j)).scaled(P(c, p));
}

Bivector biv(const PatchPtr& p, std::size_t i, std::size_t j, const std::string& c) {
    return wedge(VField::coordinate(p, i), VField::coordinate(p, j)).scaled(P(c, p));
}

VField V(const PatchPtr& p, const std::vector<std::string>& c) {
    std::vector<Expr> e;
    for (const auto& s : c)
        e.push_back(P(s, p));
    return VField(p, e);
}

PatchPtr r2() { return make_patch("R2", {"x", "y"}); }
PatchPtr r3() { return make_patch("R3", {"x", "y", "z"}); }

Expectation verdict(bool pass) { return pass ? Expectation::pass : Expectation::fail; }

// Raw engine output, so the libraries are identical on every platform.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    int range(int lo, int hi) { return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

    Rational nonzero() {
        int n = range(1, 5) * (range(0, 1) ? 1 : -1);
        return Rational(n, range(1, 3));
    }

    Expr poly(const PatchPtr& p, int max_deg, int max_terms) {
        Expr e(p, 0);
        int terms = range(0, max_terms);
        for (int t = 0; t < terms; ++t) {
            Expr m(p, nonzero());
            int deg = range(0, max_deg);
            for (int k = 0; k < deg; ++k)
                m *= Expr::var(p, static_cast<std::size_t>(range(0, static_cast<int>(p->dim()) - 1)));
            e += m;
        }
        return e;
    }

    VField field(const PatchPtr& p) {
        std::vector<Expr> c;
        for (std::size_t i = 0; i < p->dim(); ++i)
            c.push_back(poly(p, 2, 3));
        return VField(p, c);
    }

    KForm one_form(const PatchPtr& p) {
        std::vector<Expr> c;
        for (std::size_t i = 0; i < p->dim(); ++i)
            c.push_back(poly(p, 2, 3));
        return KForm::one_form(p, c);
    }

private:
    std::mt19937_64 eng_;
};

void same(Report& r, const std::string& label, const Expr& lhs, const Expr& rhs) {
    Expr d = lhs - rhs;
    r.add(d.is_zero() ? Report::ok(label) : Report::fail(label, label + " defect = " + d.to_string()));
}

void same(Report& r, const std::string& label, const std::vector<Expr>& lhs, const std::vector<Expr>& rhs) {
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (Expr d = lhs[i] - rhs[i]; !d.is_zero()) {
            r.add(Report::fail(label, index_witness(label, {i}, d)));
            return;
        }
    r.add(Report::ok(label));
}

void holds(Report& r, const Report& part) { r.add(part); }

// ---------------------------------------------------------------- 1 to 3

void integrability(std::vector<Job>& jobs) {
    std::vector<KForm> forms = {two(r2(), 0, 1, "1"),         two(r2(), 0, 1, "x*y + 1"),
                                two(r3(), 0, 1, "x") + two(r3(), 1, 2, "z"),
                                two(r3(), 0, 1, "z"),         two(r3(), 1, 2, "x"),
                                two(r3(), 0, 2, "y^2") + two(r3(), 0, 1, "1")};
    for (const auto& w : forms) {
        bool closed = exterior_derivative(w).is_zero();
        Frame l = graph_two_form(w);
        jobs.push_back({"c1 dirac graph_two_form(" + w.to_string() + ") on " + w.patch()->name(),
                        [l] { return check_dirac(l); }, verdict(closed)});
    }

    auto q = make_patch("R3", {"x1", "x2", "x3"});
    std::vector<Bivector> bivs = {biv(q, 0, 1, "x3") + biv(q, 1, 2, "x1") + biv(q, 2, 0, "x2"),
                                  biv(q, 0, 1, "x1") + biv(q, 1, 2, "x2") + biv(q, 2, 0, "x3"),
                                  biv(q, 0, 1, "1"),
                                  biv(q, 0, 1, "x3^2 + x1"),
                                  biv(q, 0, 1, "1") + biv(q, 1, 2, "x1"),
                                  biv(q, 0, 1, "x2") + biv(q, 0, 2, "x3")};
    for (const auto& p : bivs) {
        bool poisson = true;
        for (const auto& e : schouten_jacobiator(p))
            poisson = poisson && e.is_zero();
        Frame l = graph_bivector(p);
        jobs.push_back({"c2 dirac graph_bivector(" + p.to_string() + ")", [l] { return check_dirac(l); },
                        verdict(poisson)});
    }

    auto p = r3();
    std::vector<std::vector<VField>> fols = {
        {VField::coordinate(p, 0)},
        {VField::coordinate(p, 0), V(p, {"0", "1", "x"})},
        {V(p, {"1", "0", "y"}), VField::coordinate(p, 1)},
        {V(p, {"x", "y", "0"}), V(p, {"-y", "x", "0"})},
        {V(p, {"0", "-z", "y"}), V(p, {"z", "0", "-x"})},
        {VField::coordinate(p, 0), VField::coordinate(p, 1), VField::coordinate(p, 2)},
    };
    for (const auto& f : fols) {
        std::vector<std::vector<Expr>> cols;
        std::string name;
        for (const auto& v : f) {
            cols.push_back(v.comps());
            name += (name.empty() ? "" : ", ") + v.to_string();
        }
        ExprMatrix span = ExprMatrix::from_columns(cols, p->dim());
        bool involutive = true;
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::size_t b = a + 1; b < f.size(); ++b)
                involutive = involutive && in_span(span, lie_bracket(f[a], f[b]).comps());
        Frame l = foliation_frame(p, f);
        jobs.push_back({"c3 dirac foliation(" + name + ")", [l] { return check_dirac(l); }, verdict(involutive)});
    }
}

// ---------------------------------------------------------------- 4

Report lift_instance(std::uint64_t seed) {
    Gen g(seed);
    auto b = r2();
    auto tm = tangent_patch(b);
    Report r = Report::ok("lift identities");

    VField x = g.field(b);
    KForm a = g.one_form(b);
    Expr f = g.poly(b, 2, 3);
    auto v = [&](const Expr& e) { return lift_function(e, tm, Lift::vertical); };
    auto t = [&](const Expr& e) { return lift_function(e, tm, Lift::tangent); };
    VField xv = lift_vector_field(x, tm, Lift::vertical), xt = lift_vector_field(x, tm, Lift::tangent);
    KForm av = lift_one_form(a, tm, Lift::vertical), at = lift_one_form(a, tm, Lift::tangent);
    same(r, "X^v(f^v)", xv.apply(v(f)), Expr(tm.total, 0));
    same(r, "X^v(f^T)", xv.apply(t(f)), v(x.apply(f)));
    same(r, "X^T(f^v)", xt.apply(v(f)), v(x.apply(f)));
    same(r, "X^T(f^T)", xt.apply(t(f)), t(x.apply(f)));
    same(r, "a^v(X^v)", av.evaluate({xv}), Expr(tm.total, 0));
    same(r, "a^v(X^T)", av.evaluate({xt}), v(a.evaluate({x})));
    same(r, "a^T(X^v)", at.evaluate({xv}), v(a.evaluate({x})));
    same(r, "a^T(X^T)", at.evaluate({xt}), t(a.evaluate({x})));

    GSec s1(g.field(b), g.one_form(b)), s2(g.field(b), g.one_form(b));
    GSec br = courant_bracket(s1, s2);
    auto T = [&](const GSec& s) { return lift_section(s, tm, Lift::tangent); };
    auto Vl = [&](const GSec& s) { return lift_section(s, tm, Lift::vertical); };
    same(r, "[s1^v,s2^v]", courant_bracket(Vl(s1), Vl(s2)).coefficients(), GSec::zero(tm.total).coefficients());
    same(r, "[s1^T,s2^v]", courant_bracket(T(s1), Vl(s2)).coefficients(), Vl(br).coefficients());
    same(r, "[s1^T,s2^T]", courant_bracket(T(s1), T(s2)).coefficients(), T(br).coefficients());

    PolyMap j = canonical_involution(tangent_patch(tm.total));
    PolyMap th = tulczyjew_map(b);
    same(r, "J(TX)", j.after(tangent_section(x, tm)).comps(),
         section_map(lift_vector_field(x, tm, Lift::tangent), tm).comps());
    same(r, "Theta(Ta)", th.after(tangent_section(a, tm)).comps(), section_map(at, tm).comps());
    same(r, "Theta(core a)", th.after(core_section(a, tm)).comps(), section_map(av, tm).comps());

    auto p = r3();
    KForm w(p, 2);
    for (int k = 0; k < 2; ++k) {
        auto i = static_cast<std::size_t>(g.range(0, 2)), jj = static_cast<std::size_t>(g.range(0, 2));
        w.add({i, jj}, g.poly(p, 2, 2));
    }
    holds(r, check_tangent_mu_identity(graph_two_form(w)));
    // Any two-form in two variables is closed, so its graph is Dirac.
    Frame closed = graph_two_form(two(b, 0, 1, "1").scaled(g.poly(b, 2, 3)));
    holds(r, check_dirac(tangent_lift_dirac(closed)));
    return r;
}

void tangent_lifts(std::vector<Job>& jobs) {
    jobs.push_back({"c4 J o J = id on TT(R2)",
                    [] {
                        PolyMap j = canonical_involution(tangent_patch(tangent_patch(r2()).total));
                        Report r = Report::ok("involution");
                        same(r, "JJ", j.after(j).comps(), PolyMap::identity(j.source()).comps());
                        return r;
                    },
                    std::nullopt});
    for (std::uint64_t k = 1; k <= 20; ++k)
        jobs.push_back({"c4 lift identities, random instance " + std::to_string(k), [k] { return lift_instance(k); },
                        std::nullopt});
}

// ---------------------------------------------------------------- 5

void bfields(std::vector<Job>& jobs) {
    auto p = r3();
    // Vector parts span TM, so dB is seen on every triple.
    std::vector<std::pair<std::string, Frame>> frames = {
        {"graph_two_form(x*dx^dy)", graph_two_form(two(p, 0, 1, "x"))},
        {"foliation(@x, @y, @z)",
         foliation_frame(p, {VField::coordinate(p, 0), VField::coordinate(p, 1), VField::coordinate(p, 2)})}};
    std::vector<KForm> fields = {two(p, 0, 1, "1") + two(p, 1, 2, "y"), two(p, 0, 1, "z")};
    for (const auto& [name, l] : frames) {
        Frame frame = l;
        jobs.push_back({"c5 dirac " + name, [frame] { return check_dirac(frame); }, Expectation::pass});
        for (const auto& b : fields) {
            Frame t = bfield_transform(l, b);
            bool closed = exterior_derivative(b).is_zero();
            jobs.push_back({"c5 dirac bfield(" + name + ", " + b.to_string() + ")", [t] { return check_dirac(t); },
                            verdict(closed)});
        }
    }
}

// ---------------------------------------------------------------- 6

void functoriality(std::vector<Job>& jobs) {
    std::vector<std::pair<std::string, GroupoidPatch>> lib = {
        {"pair_groupoid(R2)", pair_groupoid(r2())}, {"abelian_group(2)", abelian_group(2)}, {"heisenberg3()", heisenberg3()}};
    for (const auto& [name, g] : lib) {
        GroupoidPatch grp = g;
        jobs.push_back({"c6 groupoid " + name, [grp] { return check_groupoid_axioms(grp); }, Expectation::pass});
        jobs.push_back({"c6 groupoid tangent_groupoid(" + name + ")",
                        [grp] { return check_groupoid_axioms(tangent_groupoid(grp)); }, Expectation::pass});
        jobs.push_back({"c6 lie_algebroid lie_algebroid_of(" + name + ")",
                        [grp] { return check_lie_algebroid(lie_algebroid_of(grp)); }, Expectation::pass});
    }
    jobs.push_back({"c6 lie_algebroid_of(pair_groupoid(R2)) = TR2",
                    [] {
                        auto m = r2();
                        AlgebroidPatch a = lie_algebroid_of(pair_groupoid(m));
                        AlgebroidPatch tm = tangent_algebroid(m);
                        Report r = Report::ok("tangent");
                        if (a.rank() != tm.rank())
                            return Report::fail("tangent", index_witness("rank", {0}, Expr(long(a.rank()))));
                        for (std::size_t i = 0; i < 2; ++i)
                            same(r, "anchor", a.anchor().row(i), tm.anchor().row(i));
                        for (std::size_t k = 0; k < 2; ++k)
                            same(r, "c", {a.c(k, 0, 1)}, {tm.c(k, 0, 1)});
                        return r;
                    },
                    std::nullopt});
    // Hand oracle: right translation h -> h g on (a, b, c) moves e_1 to
    // d/da + b d/dc and e_2, e_3 to d/db, d/dc.
    jobs.push_back({"c6 lie_algebroid_of(heisenberg3()) matches right-invariant fields",
                    [] {
                        GroupoidPatch h = heisenberg3();
                        auto t = h.total;
                        std::vector<VField> hand = {VField(t, {Expr(t, 1), Expr(t, 0), P("b", t)}),
                                                    VField::coordinate(t, 1), VField::coordinate(t, 2)};
                        Report r = Report::ok("heisenberg");
                        auto rf = right_invariant_fields(h);
                        for (std::size_t a = 0; a < 3; ++a)
                            same(r, "X" + std::to_string(a + 1), rf[a].comps(), hand[a].comps());
                        AlgebroidPatch alg = lie_algebroid_of(h);
                        for (std::size_t a = 0; a < 3; ++a)
                            for (std::size_t b = a + 1; b < 3; ++b) {
                                // Expand [X_a, X_b] in the triangular frame X.
                                VField br = lie_bracket(hand[a], hand[b]);
                                std::vector<Expr> k = {br[0], br[1], br[2] - P("b", t) * br[0]};
                                for (std::size_t i = 0; i < 3; ++i) {
                                    std::string label = "c^" + std::to_string(i + 1) + "_" + std::to_string(a + 1) +
                                                        std::to_string(b + 1);
                                    if (!k[i].is_constant())
                                        r.add(Report::fail(label, label + " oracle = " + k[i].to_string()));
                                    else
                                        same(r, label, alg.c(i, a, b), Expr(k[i].constant_value()));
                                }
                            }
                        same(r, "c^3_12", alg.c(2, 0, 1), Expr(-1));
                        return r;
                    },
                    std::nullopt});
}

// ---------------------------------------------------------------- 7

Expr factor(const Expr& e, const GroupoidPatch& g, std::size_t k) {
    const std::size_t n = g.base->dim();
    std::vector<Expr> img;
    for (std::size_t i = 0; i < n; ++i)
        img.push_back(Expr::var(g.total, k * n + i));
    return e.substitute(img) + Expr(g.total, 0);
}

KForm telescoping(const GroupoidPatch& g, const KForm& b) {
    const std::size_t n = g.base->dim();
    KForm w(g.total, 2);
    for (const auto& [idx, c] : b.coeffs()) {
        w.add({idx[0], idx[1]}, factor(c, g, 0));
        w.add({n + idx[0], n + idx[1]}, -factor(c, g, 1));
    }
    return w;
}

VField doubled(const GroupoidPatch& g, const VField& x) {
    std::vector<Expr> c;
    for (std::size_t k = 0; k < 2; ++k)
        for (const auto& e : x.comps())
            c.push_back(factor(e, g, k));
    return VField(g.total, c);
}

KForm opposed(const GroupoidPatch& g, const KForm& a) {
    std::vector<Expr> c;
    for (const auto& e : a.components())
        c.push_back(factor(e, g, 0));
    for (const auto& e : a.components())
        c.push_back(-factor(e, g, 1));
    return KForm::one_form(g.total, c);
}

Report agreement(const Report& direct, const Report& frame) {
    if (direct.pass == frame.pass)
        return Report::ok("agree", direct.witness);
    const Report& failing = direct.pass ? frame : direct;
    return Report::fail("agree", failing.witness);
}

void multiplicativity(std::vector<Job>& jobs) {
    GroupoidPatch g = pair_groupoid(r2());
    auto t = g.total;
    GroupoidPatch ab = abelian_group(2);
    std::vector<std::pair<GroupoidPatch, KForm>> forms = {
        {g, telescoping(g, two(g.base, 0, 1, "1"))},
        {g, telescoping(g, two(g.base, 0, 1, "x^2 + y"))},
        {g, two(t, 0, 1, "1")},
        {g, two(t, 0, 2, "1")},
        {g, telescoping(g, two(g.base, 0, 1, "1")) + two(t, 2, 3, "x_1")},
        {ab, two(ab.total, 0, 1, "1")},
        {ab, two(ab.total, 0, 1, "x1")},
    };
    for (const auto& [grp, w] : forms) {
        GroupoidPatch gg = grp;
        KForm ww = w;
        jobs.push_back({"c7 multiplicative_form agrees with multiplicative graph_two_form on " + gg.name + ": " +
                            ww.to_string(),
                        [gg, ww] {
                            return agreement(check_multiplicative_two_form(gg, ww),
                                             check_multiplicative_frame(gg, graph_two_form(ww)));
                        },
                        std::nullopt});
    }

    GroupoidPatch a2 = abelian_group(2), a3 = abelian_group(3), h = heisenberg3();
    auto t2 = a2.total, t3 = a3.total, th = h.total;
    std::vector<std::pair<GroupoidPatch, Bivector>> bivs = {
        {a2, biv(t2, 0, 1, "x1")},
        {a2, biv(t2, 0, 1, "x1 + 2*x2")},
        {a2, biv(t2, 0, 1, "1")},
        {a2, biv(t2, 0, 1, "x1^2")},
        {a3, biv(t3, 0, 1, "x3") + biv(t3, 1, 2, "x1") + biv(t3, 2, 0, "x2")},
        {a3, biv(t3, 0, 1, "x1") + biv(t3, 1, 2, "x2") + biv(t3, 2, 0, "x3")},
        {h, Bivector(th)},
        {h, biv(th, 0, 1, "1")},
        {h, biv(th, 0, 2, "a")},
    };
    for (const auto& [grp, p] : bivs) {
        GroupoidPatch gg = grp;
        Bivector pp = p;
        std::string shown = pp.is_zero() ? "0" : pp.to_string();
        jobs.push_back({"c7 multiplicative_bivector agrees with multiplicative graph_bivector on " + gg.name + ": " +
                            shown,
                        [gg, pp] {
                            return agreement(check_multiplicative_bivector(gg, pp),
                                             check_multiplicative_frame(gg, graph_bivector(pp)));
                        },
                        std::nullopt});
    }
}

// ---------------------------------------------------------------- 8

void correspondence(std::vector<Job>& jobs) {
    for (auto [m, beta] : {std::pair{r2(), std::string("1")}, std::pair{r2(), std::string("x*y")},
                           std::pair{r3(), std::string("z")}}) {
        GroupoidPatch g = pair_groupoid(m);
        KForm b = two(m, 0, 1, beta);
        KForm w = telescoping(g, b);
        bool closed = exterior_derivative(b).is_zero();
        jobs.push_back({"c8 im_two_form induced from pr1*b - pr2*b, b = " + b.to_string() + " on " + m->name(),
                        [g, w] { return check_im_two_form(lie_algebroid_of(g), induced_im_two_form(g, w)); },
                        verdict(closed)});
    }

    jobs.push_back({"c8 induced_dual_bracket(abelian_group(2), x1*@x1^@x2) is the affine algebra",
                    [] {
                        GroupoidPatch a2 = abelian_group(2);
                        AlgebroidPatch d = induced_dual_bracket(a2, biv(a2.total, 0, 1, "x1"));
                        AlgebroidPatch affine = lie_algebra(2, {{0, 1, 0, Rational(1)}});
                        Report r = Report::ok("affine");
                        for (std::size_t k = 0; k < 2; ++k)
                            same(r, "c", {d.c(k, 0, 1)}, {affine.c(k, 0, 1)});
                        holds(r, check_lie_bialgebra({lie_algebroid_of(a2), d}));
                        return r;
                    },
                    std::nullopt});
    jobs.push_back({"c8 lie_bialgebra induced from the so(3) bivector on abelian_group(3)",
                    [] {
                        GroupoidPatch a3 = abelian_group(3);
                        auto t = a3.total;
                        Bivector so3 = biv(t, 0, 1, "x3") + biv(t, 1, 2, "x1") + biv(t, 2, 0, "x2");
                        return check_lie_bialgebra({lie_algebroid_of(a3), induced_dual_bracket(a3, so3)});
                    },
                    Expectation::pass});

    GroupoidPatch g = pair_groupoid(r2());
    auto gt = g.total;
    std::vector<std::pair<std::string, std::vector<VField>>> fols = {
        {"@x_1, @x_2", {VField::coordinate(gt, 0), VField::coordinate(gt, 2)}},
        {"@y_1, @y_2", {VField::coordinate(gt, 1), VField::coordinate(gt, 3)}},
        {"@x_1, @y_1, @x_2, @y_2",
         {VField::coordinate(gt, 0), VField::coordinate(gt, 1), VField::coordinate(gt, 2), VField::coordinate(gt, 3)}},
    };
    for (const auto& [name, f] : fols) {
        auto fields = f;
        jobs.push_back({"c8 im_foliation induced from foliation(" + name + ") on " + g.name,
                        [g, fields] {
                            Frame l = foliation_frame(g.total, fields);
                            Report r = Report::ok("foliation");
                            holds(r, check_dirac(l));
                            holds(r, check_multiplicative_frame(g, l));
                            holds(r, check_im_foliation(lie_algebroid_of(g), induced_im_foliation(g, fields)));
                            return r;
                        },
                        Expectation::pass});
    }
}

// ---------------------------------------------------------------- 9

void ca_identities(std::vector<Job>& jobs) {
    for (std::size_t n = 1; n <= 3; ++n) {
        jobs.push_back({"c9 ca_identities on abelian_group(" + std::to_string(n) + ")",
                        [n] {
                            Gen gen(100 + n);
                            GroupoidPatch g = abelian_group(n);
                            auto t = g.total;
                            std::vector<MRelated> fams = {{GSec::zero(t), GSec::zero(t), GSec::zero(t)}};
                            for (int f = 0; f < 3; ++f) {
                                // A linear field with a constant form is translation compatible.
                                std::vector<Expr> x, a;
                                for (std::size_t i = 0; i < n; ++i) {
                                    Expr c(t, 0);
                                    for (std::size_t j = 0; j < n; ++j)
                                        c += Expr(t, gen.nonzero()) * Expr::var(t, j);
                                    x.push_back(c);
                                    a.push_back(Expr(t, gen.nonzero()));
                                }
                                GSec s(VField(t, x), KForm::one_form(t, a));
                                fams.push_back({s, s, s});
                            }
                            return check_ca_identities(g, fams);
                        },
                        Expectation::pass});
    }
    jobs.push_back({"c9 ca_identities on pair_groupoid(R2)",
                    [] {
                        GroupoidPatch g = pair_groupoid(r2());
                        auto m = g.base;
                        VField x = V(m, {"y^2", "x + 1"}), y = V(m, {"x*y", "2"});
                        KForm a = KForm::one_form(m, {P("x", m), P("y^2 - x", m)});
                        std::vector<MRelated> fams;
                        for (const auto& s : {GSec::vector(doubled(g, x)), GSec::form(opposed(g, a)),
                                              GSec(doubled(g, y), opposed(g, a)), GSec::zero(g.total)})
                            fams.push_back({s, s, s});
                        return check_ca_identities(g, fams);
                    },
                    Expectation::pass});
}

// ---------------------------------------------------------------- 10

void linearity(std::vector<Job>& jobs) {
    auto a = make_patch("A", {"x", "u1", "u2"});
    auto m = make_patch("R1", {"x"});
    AlgebroidPatch act(m, 2);
    act.set_anchor(0, 0, Expr(m, 1));
    act.set_c(1, 0, 1, Expr(m, 1));
    Bivector lin = dual_linear_poisson(act);
    auto p = lin.patch();
    Bivector shifted = lin + wedge(VField::coordinate(p, 1), VField::coordinate(p, 2));
    AlgebroidPatch so3 = lie_algebra(3, {{0, 1, 2, Rational(1)}, {1, 2, 0, Rational(1)}, {2, 0, 1, Rational(1)}});
    Bivector lin_so3 = dual_linear_poisson(so3);
    auto ps = lin_so3.patch();
    Bivector shifted_so3 = lin_so3 + wedge(VField::coordinate(ps, 0), VField::coordinate(ps, 1));

    struct Case {
        std::string name;
        Frame frame;
        std::size_t base;
        bool linear;
    };
    std::vector<Case> cases = {
        {"graph_bivector(" + lin.to_string() + ")", graph_bivector(lin), 1, true},
        {"graph_bivector(" + shifted.to_string() + ")", graph_bivector(shifted), 1, false},
        {"graph_bivector(" + lin_so3.to_string() + ")", graph_bivector(lin_so3), 0, true},
        {"graph_bivector(" + shifted_so3.to_string() + ")", graph_bivector(shifted_so3), 0, false},
        {"graph_two_form(dx^du1 + x*dx^du2)", graph_two_form(two(a, 0, 1, "1") + two(a, 0, 2, "x")), 1, true},
        {"graph_two_form(dx^du1 + du1^du2)", graph_two_form(two(a, 0, 1, "1") + two(a, 1, 2, "1")), 1, false},
        {"graph_two_form(u2*dx^du1)", graph_two_form(two(a, 0, 1, "u2")), 1, false},
    };
    for (const auto& c : cases) {
        Frame l = c.frame;
        std::size_t base = c.base;
        jobs.push_back({"c10 linear " + c.name + " " + std::to_string(base), [l, base] { return check_linearity(l, base); },
                        verdict(c.linear)});
    }
}

} // namespace

std::vector<std::string> suite_names() { return {"paper-examples"}; }

std::vector<Job> suite_jobs(const std::string& suite, int criterion) {
    if (suite != "paper-examples")
        throw UnknownReference("unknown suite '" + suite + "'");
    std::vector<Job> all;
    integrability(all);
    tangent_lifts(all);
    bfields(all);
    functoriality(all);
    multiplicativity(all);
    correspondence(all);
    ca_identities(all);
    linearity(all);
    if (criterion == 0)
        return all;
    std::string prefix = "c" + std::to_string(criterion) + " ";
    std::vector<Job> out;
    for (auto& j : all)
        if (j.name.rfind(prefix, 0) == 0)
            out.push_back(std::move(j));
    return out;
}

} // namespace dirac
