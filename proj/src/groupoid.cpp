#include "dirac/groupoid.hpp"

#include <optional>

namespace dirac {

namespace {

using Vec = std::vector<Expr>;

Expr on(const PatchPtr& p, const Expr& e) { return e + Expr(p, 0); }

Vec vars(const PatchPtr& p) {
    Vec v;
    for (std::size_t i = 0; i < p->dim(); ++i)
        v.push_back(Expr::var(p, i));
    return v;
}

Vec zeros(std::size_t n) { return Vec(n, Expr(0)); }

Vec image(const PolyMap& f, const Vec& pt) {
    Vec out;
    for (const auto& c : f.comps())
        out.push_back(c.substitute(pt));
    return out;
}

Vec at(const Vec& v, const Vec& pt) {
    Vec out;
    for (const auto& e : v)
        out.push_back(e.substitute(pt));
    return out;
}

ExprMatrix at(const ExprMatrix& m, const Vec& pt) {
    ExprMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out.at(i, j) = m.at(i, j).substitute(pt);
    return out;
}

Vec concat(Vec a, const Vec& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Vec slice(const Vec& v, std::size_t from, std::size_t len) {
    return Vec(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + len));
}

Vec scaled(Vec v, const Expr& f) {
    for (auto& e : v)
        e = e * f;
    return v;
}

ExprMatrix block(const ExprMatrix& m, std::size_t r0, std::size_t rows) {
    ExprMatrix out(rows, m.cols());
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out.at(i, j) = m.at(r0 + i, j);
    return out;
}

ExprMatrix negated(ExprMatrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m.at(i, j) = -m.at(i, j);
    return m;
}

// Index and value of the first nonzero entry of a - b.
std::optional<std::pair<std::size_t, Expr>> mismatch(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        Expr d = a[i] - b[i];
        if (!d.is_zero())
            return std::make_pair(i, d);
    }
    return std::nullopt;
}

Report identity(const std::string& name, const Vec& lhs, const Vec& rhs) {
    if (auto m = mismatch(lhs, rhs))
        return Report::fail(name, index_witness(name, {m->first}, m->second));
    return Report::ok(name);
}

// Divides a kernel vector by its leading entry when that keeps it polynomial.
Vec normalize(Vec v) {
    for (const auto& lead : v) {
        if (lead.is_zero())
            continue;
        Vec out;
        for (const auto& e : v) {
            auto q = e.divide_exact(lead);
            if (!q)
                return v;
            out.push_back(*q);
        }
        return out;
    }
    return v;
}

// Keeps the vectors that raise the generic rank.
std::vector<Vec> independent(const std::vector<Vec>& vs, std::size_t dim) {
    std::vector<Vec> kept;
    std::size_t rank = 0;
    for (const auto& v : vs) {
        auto next = kept;
        next.push_back(v);
        std::size_t nr = generic_rank(ExprMatrix::from_columns(next, dim));
        if (nr > rank) {
            kept = std::move(next);
            rank = nr;
        }
    }
    return kept;
}

// The composable-pair chart in projection form.
struct Pairing {
    std::vector<std::size_t> g_var;
    std::vector<std::size_t> h_var;
    std::size_t dim = 0;

    // Chart point of the pair (g, h); shared coordinates are read from g.
    Vec point(const Vec& g, const Vec& h) const {
        Vec out(dim, Expr(0));
        std::vector<bool> set(dim, false);
        for (std::size_t i = 0; i < g_var.size(); ++i) {
            out[g_var[i]] = g[i];
            set[g_var[i]] = true;
        }
        for (std::size_t k = 0; k < h_var.size(); ++k)
            if (!set[h_var[k]])
                out[h_var[k]] = h[k];
        return out;
    }

    // Jg^T a + Jh^T b: the covector (a, b) pulled back to the chart.
    Vec pull(const Vec& a, const Vec& b) const {
        Vec out(dim, Expr(0));
        for (std::size_t i = 0; i < g_var.size(); ++i)
            out[g_var[i]] += a[i];
        for (std::size_t k = 0; k < h_var.size(); ++k)
            out[h_var[k]] += b[k];
        return out;
    }
};

std::optional<Pairing> projection_form(const GroupoidPatch& g) {
    Pairing p;
    p.dim = g.comp->dim();
    std::vector<bool> covered(p.dim, false);
    auto scan = [&](const PolyMap& f, std::vector<std::size_t>& out) {
        std::vector<bool> seen(p.dim, false);
        for (const auto& c : f.comps()) {
            std::optional<std::size_t> hit;
            for (std::size_t j = 0; j < p.dim && !hit; ++j)
                if (c == Expr::var(g.comp, j))
                    hit = j;
            if (!hit || seen[*hit])
                return false;
            seen[*hit] = covered[*hit] = true;
            out.push_back(*hit);
        }
        return true;
    };
    if (!scan(g.g_of, p.g_var) || !scan(g.h_of, p.h_var))
        return std::nullopt;
    for (bool c : covered)
        if (!c)
            return std::nullopt;
    return p;
}

Pairing require_pairing(const GroupoidPatch& g) {
    auto p = projection_form(g);
    if (!p)
        throw TranslationNotDerivable(g.name + ": composable-pair chart does not list the coordinates of both factors");
    return *p;
}

// Translations, unit frame and invariant fields of a groupoid.
struct Calc {
    const GroupoidPatch& g;
    Pairing pr;
    std::size_t n = 0, dim = 0, r = 0;
    ExprMatrix js, jt; // on G
    ExprMatrix jm;     // on comp
    ExprMatrix je;     // on M
    ExprMatrix jt_e;   // Tt along the units, on M
    std::vector<Vec> u;
    std::vector<VField> right; // right-invariant X_a
    std::vector<VField> left;  // v_a(g) = Tl_g(u_a - Tt u_a) at s(g)

    explicit Calc(const GroupoidPatch& gp) : g(gp), pr(require_pairing(gp)) {
        n = g.base->dim();
        dim = g.total->dim();
        js = g.src.jacobian();
        jt = g.tgt.jacobian();
        jm = g.mul.jacobian();
        je = g.unit.jacobian();
        jt_e = at(jt, g.unit.comps());
        u = unit_frame(g);
        r = u.size();

        const Vec q = vars(g.total);
        const Vec tq = g.tgt.comps(), sq = g.src.comps();
        const ExprMatrix jm_right = at(jm, pr.point(image(g.unit, tq), q));
        const ExprMatrix jm_left = at(jm, pr.point(q, image(g.unit, sq)));
        for (const auto& ua : u) {
            Vec x = jm_right * pr.point(at(ua, tq), zeros(dim));
            right.emplace_back(g.total, on_total(x));
            Vec w = ua;
            Vec tw = je * (jt_e * ua);
            for (std::size_t i = 0; i < dim; ++i)
                w[i] -= tw[i];
            Vec y = jm_left * pr.point(zeros(dim), at(w, sq));
            left.emplace_back(g.total, on_total(y));
        }
    }

    Vec on_total(Vec v) const {
        for (auto& e : v)
            e = on(g.total, e);
        return v;
    }

    Vec compose(const Vec& a, const Vec& b) const { return image(g.mul, pr.point(a, b)); }

    // Matrix with columns u_a, on M.
    ExprMatrix frame() const { return ExprMatrix::from_columns(u, dim); }

    // s-tilde and t-tilde fibre parts of a covector a at the point q.
    Vec s_fibre(const Vec& q, const Vec& a) const { return fibre(left, q, a); }
    Vec t_fibre(const Vec& q, const Vec& a) const { return fibre(right, q, a); }

    Vec fibre(const std::vector<VField>& fields, const Vec& q, const Vec& a) const {
        Vec out;
        for (const auto& f : fields) {
            Expr s(0);
            for (std::size_t i = 0; i < dim; ++i)
                s += a[i] * f[i].substitute(q);
            out.push_back(s);
        }
        return out;
    }

    // The covector at m(c) pulling back to Jg^T a + Jh^T b, as num / den.
    Solution compose_covectors(const ExprMatrix& jm_c, const Vec& a, const Vec& b) const {
        if (generic_rank(jm_c) < dim)
            throw UnderdeterminedSpan(g.name + ": multiplication is not a submersion on the chart");
        return solve_linear(jm_c.transpose(), pr.pull(a, b));
    }

    // Unit of TG + T*G over (v, xi) at the base point x, scaled by the common
    // denominator of the covector part.
    Vec unit_embedding(const Vec& x, const Vec& v, const Vec& xi) const {
        ExprMatrix e = at(je.hcat(frame()), x);
        Solution cov = solve_linear(e.transpose(), concat(zeros(n), xi));
        return concat(scaled(at(je, x) * v, cov.den), cov.num);
    }
};

PolyMap tangent_map(const PolyMap& f, const PatchPtr& ts, const PatchPtr& tt) {
    const std::size_t m = f.source()->dim();
    const ExprMatrix j = f.jacobian();
    Vec c;
    for (const auto& e : f.comps())
        c.push_back(e.embed(ts));
    for (std::size_t i = 0; i < f.comps().size(); ++i) {
        Expr d(ts, 0);
        for (std::size_t k = 0; k < m; ++k)
            d += j.at(i, k).embed(ts) * Expr::var(ts, m + k);
        c.push_back(d);
    }
    return PolyMap(ts, tt, c);
}

PatchPtr suffixed(const std::string& name, const std::vector<std::vector<std::string>>& blocks,
                  const std::vector<std::string>& suffixes) {
    std::vector<std::string> coords;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (const auto& c : blocks[b])
            coords.push_back(c + suffixes[b]);
    return make_patch(name, coords);
}

Vec pick(const PatchPtr& p, std::size_t from, std::size_t len) { return slice(vars(p), from, len); }

} // namespace

GroupoidPatch pair_groupoid(const PatchPtr& m) {
    const auto& c = m->coords();
    const std::size_t n = m->dim();
    GroupoidPatch g;
    g.name = "Pair(" + m->name() + ")";
    g.base = m;
    g.total = suffixed(m->name() + "x" + m->name(), {c, c}, {"_1", "_2"});
    g.comp = suffixed(m->name() + "^3", {c, c, c}, {"_1", "_2", "_3"});
    g.tgt = PolyMap(g.total, m, pick(g.total, 0, n));
    g.src = PolyMap(g.total, m, pick(g.total, n, n));
    g.unit = PolyMap(m, g.total, concat(vars(m), vars(m)));
    g.inv = PolyMap(g.total, g.total, concat(pick(g.total, n, n), pick(g.total, 0, n)));
    g.g_of = PolyMap(g.comp, g.total, pick(g.comp, 0, 2 * n));
    g.h_of = PolyMap(g.comp, g.total, pick(g.comp, n, 2 * n));
    g.mul = PolyMap(g.comp, g.total, concat(pick(g.comp, 0, n), pick(g.comp, 2 * n, n)));
    return g;
}

namespace {

GroupoidPatch group_shell(const std::string& name, const PatchPtr& total, const PatchPtr& comp) {
    GroupoidPatch g;
    g.name = name;
    g.base = point_patch();
    g.total = total;
    g.comp = comp;
    const std::size_t d = total->dim();
    g.src = PolyMap(total, g.base, {});
    g.tgt = PolyMap(total, g.base, {});
    g.unit = PolyMap(g.base, total, zeros(d));
    g.g_of = PolyMap(comp, total, pick(comp, 0, d));
    g.h_of = PolyMap(comp, total, pick(comp, d, d));
    return g;
}

} // namespace

GroupoidPatch abelian_group(std::size_t n) {
    std::vector<std::string> x, y;
    for (std::size_t i = 1; i <= n; ++i) {
        x.push_back("x" + std::to_string(i));
        y.push_back("y" + std::to_string(i));
    }
    auto total = make_patch("R" + std::to_string(n), x);
    auto comp = suffixed("R" + std::to_string(n) + "^2", {x, y}, {"", ""});
    GroupoidPatch g = group_shell("(R" + std::to_string(n) + ",+)", total, comp);
    Vec q = vars(total), neg, sum;
    for (auto& e : q)
        neg.push_back(-e);
    for (std::size_t i = 0; i < n; ++i)
        sum.push_back(Expr::var(comp, i) + Expr::var(comp, n + i));
    g.inv = PolyMap(total, total, neg);
    g.mul = PolyMap(comp, total, sum);
    return g;
}

GroupoidPatch heisenberg3() {
    auto total = make_patch("H3", {"a", "b", "c"});
    auto comp = suffixed("H3^2", {total->coords(), total->coords()}, {"_1", "_2"});
    GroupoidPatch g = group_shell("Heisenberg", total, comp);
    auto v = [&](std::size_t i) { return Expr::var(comp, i); };
    auto q = [&](std::size_t i) { return Expr::var(total, i); };
    g.inv = PolyMap(total, total, {-q(0), -q(1), q(0) * q(1) - q(2)});
    g.mul = PolyMap(comp, total, {v(0) + v(3), v(1) + v(4), v(2) + v(5) + v(0) * v(4)});
    return g;
}

MultReport check_groupoid_axioms(const GroupoidPatch& g) {
    auto pr = projection_form(g);
    if (!pr)
        throw ChartMismatch(g.name + ": composable-pair chart does not list the coordinates of both factors");
    const std::size_t n = g.base->dim(), d = g.total->dim();
    if (g.comp->dim() != 2 * d - n)
        throw ChartMismatch(g.name + ": composable-pair chart has dimension " + std::to_string(g.comp->dim()) +
                            ", expected " + std::to_string(2 * d - n));
    const Vec gq = g.g_of.comps(), hq = g.h_of.comps(), mq = g.mul.comps();
    if (auto m = mismatch(image(g.src, gq), image(g.tgt, hq)))
        throw ChartMismatch(g.name + ": s(g) - t(h) = " + m->second.to_string() + " on the composable-pair chart");

    auto compose = [&](const Vec& a, const Vec& b) { return image(g.mul, pr->point(a, b)); };
    MultReport rep = Report::ok("groupoid_axioms");

    rep.add(identity("source_target", concat(image(g.src, mq), image(g.tgt, mq)),
                     concat(image(g.src, hq), image(g.tgt, gq))));

    // Triples (g, h, k): a chart point for (g, h) plus the coordinates that
    // only the second factor of (h, k) carries.
    std::vector<bool> in_g(pr->dim, false);
    for (auto j : pr->g_var)
        in_g[j] = true;
    std::vector<std::string> coords = g.comp->coords();
    for (std::size_t j = 0; j < pr->dim; ++j)
        if (!in_g[j])
            coords.push_back(g.comp->coords()[j] + "#");
    auto tri = make_patch(g.comp->name() + "#", coords);
    const Vec a = pick(tri, 0, pr->dim);
    const Vec t1 = image(g.g_of, a), t2 = image(g.h_of, a);
    Vec b(pr->dim, Expr(0));
    for (std::size_t i = 0; i < pr->g_var.size(); ++i)
        b[pr->g_var[i]] = t2[i];
    for (std::size_t j = 0, extra = pr->dim; j < pr->dim; ++j)
        if (!in_g[j])
            b[j] = Expr::var(tri, extra++);
    const Vec t3 = image(g.h_of, b);
    rep.add(identity("associativity", compose(compose(t1, t2), t3), compose(t1, compose(t2, t3))));

    const Vec x = vars(g.base), q = vars(g.total);
    const Vec sq = g.src.comps(), tq = g.tgt.comps();
    const Vec eps = g.unit.comps();
    Report units = identity("units", concat(image(g.src, eps), image(g.tgt, eps)), concat(x, x));
    if (units.pass)
        units = identity("units", concat(compose(image(g.unit, tq), q), compose(q, image(g.unit, sq))), concat(q, q));
    rep.add(units);

    const Vec iq = g.inv.comps();
    Report inv = identity("inverses", concat(image(g.src, iq), image(g.tgt, iq)), concat(tq, sq));
    if (inv.pass)
        inv = identity("inverses", concat(compose(q, iq), compose(iq, q)),
                       concat(image(g.unit, tq), image(g.unit, sq)));
    rep.add(inv);
    return rep;
}

GroupoidPatch tangent_groupoid(const GroupoidPatch& g) {
    auto tm = tangent_patch(g.base).total;
    auto tg = tangent_patch(g.total).total;
    auto tc = tangent_patch(g.comp).total;
    GroupoidPatch t;
    t.name = "T" + g.name;
    t.base = tm;
    t.total = tg;
    t.comp = tc;
    t.src = tangent_map(g.src, tg, tm);
    t.tgt = tangent_map(g.tgt, tg, tm);
    t.unit = tangent_map(g.unit, tm, tg);
    t.inv = tangent_map(g.inv, tg, tg);
    t.g_of = tangent_map(g.g_of, tc, tg);
    t.h_of = tangent_map(g.h_of, tc, tg);
    t.mul = tangent_map(g.mul, tc, tg);
    return t;
}

std::vector<std::vector<Expr>> unit_frame(const GroupoidPatch& g) {
    const std::size_t n = g.base->dim(), d = g.total->dim();
    ExprMatrix jse = at(g.src.jacobian(), g.unit.comps());
    if (n && generic_rank(jse) != n)
        throw RankJump(g.name + ": Ts drops rank along the units");
    std::vector<Vec> out;
    if (!n) {
        for (std::size_t a = 0; a < d; ++a) {
            Vec e = zeros(d);
            e[a] = Expr(1);
            out.push_back(e);
        }
        return out;
    }
    for (auto& v : kernel_basis(jse)) {
        Vec w = normalize(v);
        for (auto& e : w)
            e = on(g.base, e);
        out.push_back(w);
    }
    return out;
}

std::vector<VField> right_invariant_fields(const GroupoidPatch& g) { return Calc(g).right; }

AlgebroidPatch lie_algebroid_of(const GroupoidPatch& g) {
    Calc c(g);
    AlgebroidPatch a(g.base, c.r);
    for (std::size_t k = 0; k < c.r; ++k) {
        Vec rho = c.jt_e * c.u[k];
        for (std::size_t i = 0; i < c.n; ++i)
            a.set_anchor(i, k, rho[i]);
    }
    const ExprMatrix frame = c.frame();
    const Vec eps = g.unit.comps();
    for (std::size_t x = 0; x < c.r; ++x)
        for (std::size_t y = x + 1; y < c.r; ++y) {
            Vec w = at(lie_bracket(c.right[x], c.right[y]).comps(), eps);
            Vec coef = solve_linear(frame, w).polynomial();
            for (std::size_t k = 0; k < c.r; ++k)
                a.set_c(k, x, y, coef[k]);
        }
    return a;
}

CotangentMaps cotangent_source_target(const GroupoidPatch& g) {
    Calc c(g);
    auto ct = cotangent_patch(g.total).total;
    auto dual = dual_total_patch(AlgebroidPatch(g.base, c.r));
    const Vec q = pick(ct, 0, c.dim), p = pick(ct, c.dim, c.dim);
    auto build = [&](const PolyMap& base, const Vec& fibre) {
        Vec comps;
        for (const auto& e : base.comps())
            comps.push_back(e.embed(ct));
        return PolyMap(ct, dual, concat(comps, fibre));
    };
    return {build(g.src, c.s_fibre(q, p)), build(g.tgt, c.t_fibre(q, p))};
}

Covector cotangent_compose(const GroupoidPatch& g, const Covector& a, const Covector& b) {
    Calc c(g);
    if (a.point.size() != c.dim || b.point.size() != c.dim || a.value.size() != c.dim || b.value.size() != c.dim)
        throw WrongShape("cotangent_compose: covectors must have " + std::to_string(c.dim) + " entries");
    if (auto m = mismatch(image(g.src, a.point), image(g.tgt, b.point)))
        throw NotComposable("base points differ: s(g) - t(h) = " + m->second.to_string());
    if (auto m = mismatch(c.s_fibre(a.point, a.value), c.t_fibre(b.point, b.value)))
        throw NotComposable("s~(a) - t~(b) = " + m->second.to_string() + " in fibre entry " +
                            std::to_string(m->first + 1));
    const Vec pt = c.pr.point(a.point, b.point);
    Solution s = c.compose_covectors(at(c.jm, pt), a.value, b.value);
    return {image(g.mul, pt), s.polynomial()};
}

MultReport check_multiplicative_two_form(const GroupoidPatch& g, const KForm& w) {
    if (!same_patch(w.patch(), g.total))
        throw PatchMismatch("check_multiplicative_two_form: form does not live on " + g.total->name());
    KForm lhs = pullback_form(g.mul, w);
    KForm rhs = pullback_form(g.g_of, w) + pullback_form(g.h_of, w);
    KForm diff = lhs - rhs;
    MultReport rep = Report::ok("multiplicative_two_form");
    if (diff.is_zero())
        return rep.add(Report::ok("identity"));
    const auto& [idx, v] = *diff.coeffs().begin();
    return rep.add(Report::fail("identity", index_witness("defect", idx, v)));
}

MultReport check_multiplicative_bivector(const GroupoidPatch& g, const Bivector& p) {
    if (!g.is_group())
        throw NotAGroup(g.name + " is not a group; use check_multiplicative_frame on graph_bivector");
    if (!same_patch(p.patch(), g.total))
        throw PatchMismatch("check_multiplicative_bivector: bivector does not live on " + g.total->name());
    Pairing pr = require_pairing(g);
    const std::size_t d = g.total->dim();
    const ExprMatrix jm = g.mul.jacobian();
    ExprMatrix jg(d, d), jh(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            jg.at(i, k) = jm.at(i, pr.g_var[k]);
            jh.at(i, k) = jm.at(i, pr.h_var[k]);
        }
    const ExprMatrix pm = p.matrix();
    ExprMatrix lhs = at(pm, g.mul.comps());
    ExprMatrix l_g = congruence(jh, at(pm, g.h_of.comps()));
    ExprMatrix r_h = congruence(jg, at(pm, g.g_of.comps()));
    MultReport rep = Report::ok("multiplicative_bivector");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            Expr defect = lhs.at(i, j) - l_g.at(i, j) - r_h.at(i, j);
            if (!defect.is_zero())
                return rep.add(Report::fail("identity", index_witness("defect", {i, j}, defect)));
        }
    return rep.add(Report::ok("identity"));
}

MultReport check_multiplicative_frame(const GroupoidPatch& g, const Frame& l) {
    if (!same_patch(l.patch(), g.total))
        throw PatchMismatch("check_multiplicative_frame: frame does not live on " + g.total->name());
    if (!check_lagrangian(l).pass)
        throw NotLagrangian("check_multiplicative_frame needs a Lagrangian frame");
    Calc c(g);
    const std::size_t d = c.dim, n = c.n, r = c.r, k = l.size();
    const ExprMatrix L = l.matrix();
    const Vec eps = g.unit.comps();
    const ExprMatrix l_units = at(L, eps);
    if (generic_rank(l_units) < generic_rank(L))
        throw RankJump("frame drops rank along the units");

    // Composable pairs (sum lambda_j l_j(g), sum mu_j l_j(h)).
    const Vec gq = g.g_of.comps(), hq = g.h_of.comps();
    const ExprMatrix lg = at(L, gq), lh = at(L, hq);
    const ExprMatrix xg = block(lg, 0, d), ag = block(lg, d, d);
    const ExprMatrix xh = block(lh, 0, d), ah = block(lh, d, d);
    ExprMatrix vg(r, d), rh(r, d);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t i = 0; i < d; ++i) {
            vg.at(a, i) = c.left[a][i].substitute(gq);
            rh.at(a, i) = c.right[a][i].substitute(hq);
        }
    ExprMatrix top = (at(c.js, gq) * xg).hcat(negated(at(c.jt, hq) * xh));
    ExprMatrix bottom = (vg * ag).hcat(negated(rh * ah));
    ExprMatrix constraints(n + r, 2 * k);
    for (std::size_t j = 0; j < 2 * k; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            constraints.at(i, j) = top.at(i, j);
        for (std::size_t a = 0; a < r; ++a)
            constraints.at(n + a, j) = bottom.at(a, j);
    }
    const auto pairs = kernel_basis(constraints);

    std::vector<Vec> products;
    for (const auto& kv : pairs) {
        const Vec lam = slice(kv, 0, k), mu = slice(kv, k, k);
        Vec x = xg * lam, y = xh * mu;
        Solution cov = c.compose_covectors(c.jm, ag * lam, ah * mu);
        products.push_back(concat(scaled(c.jm * c.pr.point(x, y), cov.den), cov.num));
    }
    const ExprMatrix lm = at(L, g.mul.comps());
    auto first_outside = [](const ExprMatrix& span, const std::vector<Vec>& vs) -> std::optional<std::size_t> {
        if (vs.empty() || generic_rank(span.hcat(ExprMatrix::from_columns(vs, span.rows()))) == generic_rank(span))
            return std::nullopt;
        for (std::size_t i = 0; i < vs.size(); ++i)
            if (!in_span(span, vs[i]))
                return i;
        return std::nullopt;
    };

    MultReport rep = Report::ok("multiplicative_frame");
    if (auto bad = first_outside(lm, products))
        rep.add(Report::fail("products", index_witness("product", {*bad}, Expr(1)),
                             "composable pair " + std::to_string(*bad + 1) + " of " +
                                 std::to_string(products.size()) + " leaves the frame"));
    else
        rep.add(Report::ok("products", std::to_string(products.size()) + " composable generators"));

    // Sources and targets of frame elements must be units of L.
    const Vec q = vars(g.total), sq = g.src.comps(), tq = g.tgt.comps();
    std::vector<Vec> sources, targets;
    for (std::size_t j = 0; j < k; ++j) {
        Vec col = L.column(j);
        Vec x = slice(col, 0, d), a = slice(col, d, d);
        sources.push_back(c.unit_embedding(sq, c.js * x, c.s_fibre(q, a)));
        targets.push_back(c.unit_embedding(tq, c.jt * x, c.t_fibre(q, a)));
    }
    Report units = Report::ok("units");
    if (auto bad = first_outside(at(L, image(g.unit, sq)), sources))
        units = Report::fail("units", index_witness("source", {*bad}, Expr(1)), "source not a unit of the frame");
    else if (auto bad2 = first_outside(at(L, image(g.unit, tq)), targets))
        units = Report::fail("units", index_witness("target", {*bad2}, Expr(1)), "target not a unit of the frame");

    // E = L over the units intersected with TM + A*G.
    std::vector<Vec> unit_cols;
    const Vec x = vars(g.base);
    for (std::size_t i = 0; i < n + r; ++i) {
        Vec v = zeros(n), xi = zeros(r);
        (i < n ? v[i] : xi[i - n]) = Expr(1);
        unit_cols.push_back(c.unit_embedding(x, v, xi));
    }
    const ExprMatrix units_m = ExprMatrix::from_columns(unit_cols, 2 * d);
    const std::size_t rl = generic_rank(l_units), ru = generic_rank(units_m);
    const std::size_t e_rank = rl + ru - generic_rank(l_units.hcat(units_m));
    units.note += (units.note.empty() ? "" : "; ") + std::string("E has rank ") + std::to_string(e_rank) +
                  " in TM + A*G of rank " + std::to_string(n + r);
    rep.add(units);
    rep.note = "E rank " + std::to_string(e_rank);
    return rep;
}

IMTwoForm induced_im_two_form(const GroupoidPatch& g, const KForm& w) {
    if (w.degree() != 2 || !same_patch(w.patch(), g.total))
        throw WrongShape("induced_im_two_form needs a 2-form on " + g.total->name());
    const auto u = unit_frame(g);
    const std::size_t n = g.base->dim(), d = g.total->dim();
    const ExprMatrix je = g.unit.jacobian();
    const Vec eps = g.unit.comps();
    ExprMatrix s(n, u.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < u.size(); ++a) {
            Expr v(g.base, 0);
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t m = 0; m < d; ++m)
                    v += w.at({j, m}).substitute(eps) * u[a][j] * je.at(m, i);
            s.at(i, a) = v;
        }
    return {s};
}

AlgebroidPatch induced_dual_bracket(const GroupoidPatch& g, const Bivector& p) {
    if (!g.is_group())
        throw NotAGroup(g.name + " is not a group");
    MultReport chk = check_multiplicative_bivector(g, p);
    if (!chk.pass)
        throw NotMultiplicative("bivector is not multiplicative: " + chk.witness);
    const auto u = unit_frame(g);
    const std::size_t d = g.total->dim();
    const ExprMatrix frame = ExprMatrix::from_columns(u, d);
    const Vec eps = g.unit.comps();
    AlgebroidPatch out(point_patch(), d);
    for (std::size_t k = 0; k < d; ++k) {
        // D = u_k(p) at the identity, then its components in the frame.
        ExprMatrix dm(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                Expr v(0);
                for (std::size_t l = 0; l < d; ++l)
                    v += u[k][l] * p.at(i, j).diff(l).substitute(eps);
                dm.at(i, j) = v;
            }
        std::vector<Vec> y;
        for (std::size_t j = 0; j < d; ++j)
            y.push_back(solve_linear(frame, dm.column(j)).polynomial());
        // Column a of U^-1 (U^-1 D)^T is row a of U^-1 D U^-T.
        ExprMatrix yt = ExprMatrix::from_columns(y, d).transpose();
        for (std::size_t a = 0; a < d; ++a) {
            Vec row = solve_linear(frame, yt.column(a)).polynomial();
            for (std::size_t b = a + 1; b < d; ++b)
                out.set_c(k, a, b, row[b]);
        }
    }
    return out;
}

IMFoliation induced_im_foliation(const GroupoidPatch& g, const std::vector<VField>& f) {
    Calc c(g);
    const std::size_t d = c.dim, n = c.n, r = c.r;
    std::vector<Vec> cols;
    for (const auto& v : f) {
        if (!same_patch(v.patch(), g.total))
            throw PatchMismatch("induced_im_foliation: field does not live on " + g.total->name());
        cols.push_back(v.comps());
    }
    const ExprMatrix fm = ExprMatrix::from_columns(cols, d);
    const Vec eps = g.unit.comps();
    const ExprMatrix fe = at(fm, eps);
    const ExprMatrix frame = c.frame();

    auto restricted = [&](const ExprMatrix& emb, std::size_t len) {
        std::vector<Vec> out;
        for (const auto& v : kernel_basis(emb.hcat(negated(fe))))
            out.push_back(normalize(slice(v, 0, len)));
        return independent(out, len);
    };
    IMFoliation res;
    for (auto& v : restricted(c.je, n)) {
        for (auto& e : v)
            e = on(g.base, e);
        res.f_m.emplace_back(g.base, v);
    }
    for (auto& v : restricted(frame, r)) {
        for (auto& e : v)
            e = on(g.base, e);
        res.k.push_back(v);
    }

    AlgebroidPatch alg = lie_algebroid_of(g);
    const auto quot = quotient_columns(alg, res.k);
    std::vector<Vec> kq = res.k;
    for (auto b : quot)
        kq.push_back(alg.frame(b));
    const ExprMatrix kq_m = ExprMatrix::from_columns(kq, r);
    const ExprMatrix split = c.je.hcat(frame);
    const Vec tq = g.tgt.comps();

    for (const auto& x : res.f_m) {
        // Extend X to a section of F through phi(t(g)).
        Vec phi = solve_linear(fe, c.je * x.comps()).polynomial();
        VField lift = VField::zero(g.total);
        for (std::size_t j = 0; j < f.size(); ++j)
            lift = lift + f[j].scaled(on(g.total, phi[j].substitute(tq)));
        ExprMatrix nabla(quot.size(), quot.size());
        for (std::size_t b = 0; b < quot.size(); ++b) {
            Vec w = at(lie_bracket(lift, c.right[quot[b]]).comps(), eps);
            Vec beta = slice(solve_linear(split, w).polynomial(), n, r);
            Vec y = solve_linear(kq_m, beta).polynomial();
            for (std::size_t a = 0; a < quot.size(); ++a)
                nabla.at(a, b) = on(g.base, y[res.k.size() + a]);
        }
        res.nabla.push_back(nabla);
    }
    return res;
}

MultReport check_ca_identities(const GroupoidPatch& g, const std::vector<MRelated>& fams) {
    Calc c(g);
    const std::size_t d = c.dim;
    const Vec gq = g.g_of.comps(), hq = g.h_of.comps(), mq = g.mul.comps();
    if (generic_rank(c.jm) < d)
        throw UnderdeterminedSpan(g.name + ": multiplication is not a submersion on the chart");

    // Residuals of "product = left * right" on the chart; empty when related.
    auto defect = [&](const GSec& left, const GSec& right, const GSec& prod) -> std::optional<std::pair<std::size_t, Expr>> {
        for (const auto* s : {&left, &right, &prod})
            if (!same_patch(s->patch(), g.total))
                throw PatchMismatch("check_ca_identities: section does not live on " + g.total->name());
        const Vec a = at(left.coefficients(), gq), b = at(right.coefficients(), hq);
        const Vec p = at(prod.coefficients(), mq);
        const Vec x = slice(a, 0, d), al = slice(a, d, d), y = slice(b, 0, d), be = slice(b, d, d);
        Vec lhs = concat(at(c.js, gq) * x, c.s_fibre(gq, al));
        Vec rhs = concat(at(c.jt, hq) * y, c.t_fibre(hq, be));
        lhs = concat(lhs, concat(slice(p, 0, d), c.jm.transpose() * slice(p, d, d)));
        rhs = concat(rhs, concat(c.jm * c.pr.point(x, y), c.pr.pull(al, be)));
        return mismatch(lhs, rhs);
    };
    for (std::size_t i = 0; i < fams.size(); ++i)
        if (auto m = defect(fams[i].left, fams[i].right, fams[i].product))
            throw HypothesisFails("family " + std::to_string(i + 1) + " is not m-related: residual " +
                                  m->second.to_string() + " in entry " + std::to_string(m->first + 1));

    MultReport rep = Report::ok("ca_identities");
    Report pair = Report::ok("pairing");
    for (std::size_t i = 0; i < fams.size() && pair.pass; ++i)
        for (std::size_t j = i; j < fams.size() && pair.pass; ++j) {
            Expr lhs = pairing(fams[i].product, fams[j].product).substitute(mq);
            Expr rhs = pairing(fams[i].left, fams[j].left).substitute(gq) +
                       pairing(fams[i].right, fams[j].right).substitute(hq);
            if (lhs != rhs)
                pair = Report::fail("pairing", index_witness("pairing", {i, j}, lhs - rhs));
        }
    rep.add(pair);

    Report br = Report::ok("bracket");
    for (std::size_t i = 0; i < fams.size() && br.pass; ++i)
        for (std::size_t j = 0; j < fams.size() && br.pass; ++j) {
            auto m = defect(courant_bracket(fams[i].left, fams[j].left), courant_bracket(fams[i].right, fams[j].right),
                            courant_bracket(fams[i].product, fams[j].product));
            if (m)
                br = Report::fail("bracket", index_witness("bracket", {i, j, m->first}, m->second));
        }
    rep.add(br);
    return rep;
}

} // namespace dirac
