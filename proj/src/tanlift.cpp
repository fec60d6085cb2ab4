#include "dirac/tanlift.hpp"

#include <algorithm>

namespace dirac {

namespace {

std::vector<std::string> velocity_names(const std::vector<std::string>& coords) {
    bool primed = std::any_of(coords.begin(), coords.end(),
                              [](const std::string& c) { return c.find('\'') != std::string::npos; });
    std::vector<std::string> out;
    for (const auto& c : coords)
        out.push_back(primed ? "D" + c : c + "'");
    return out;
}

void require_base(const TangentPatch& tm, const PatchPtr& p, const char* what) {
    if (!same_patch(tm.base, p))
        throw PatchMismatch(std::string(what) + ": object does not live on the base " + tm.base->name());
}

Expr var(const PatchPtr& p, std::size_t i) { return Expr::var(p, i); }

} // namespace

TangentPatch tangent_patch(const PatchPtr& base) {
    auto coords = base->coords();
    auto vel = velocity_names(coords);
    coords.insert(coords.end(), vel.begin(), vel.end());
    return {base, make_patch("T" + base->name(), coords)};
}

CotangentPatch cotangent_patch(const PatchPtr& base) {
    auto coords = base->coords();
    for (const auto& c : base->coords())
        coords.push_back("p_" + c);
    return {base, make_patch("T*" + base->name(), coords)};
}

Expr lift_function(const Expr& f, const TangentPatch& tm, Lift kind) {
    if (f.patch())
        require_base(tm, f.patch(), "lift_function");
    Expr base = f + Expr(tm.base, 0);
    if (kind == Lift::vertical)
        return base.embed(tm.total);
    Expr r(tm.total, 0);
    for (std::size_t j = 0; j < tm.n(); ++j)
        r += var(tm.total, tm.n() + j) * base.diff(j).embed(tm.total);
    return r;
}

VField lift_vector_field(const VField& x, const TangentPatch& tm, Lift kind) {
    require_base(tm, x.patch(), "lift_vector_field");
    const std::size_t n = tm.n();
    std::vector<Expr> c(2 * n, Expr(tm.total, 0));
    for (std::size_t i = 0; i < n; ++i) {
        Expr xi = x[i].embed(tm.total);
        if (kind == Lift::vertical) {
            c[n + i] = xi;
        } else {
            c[i] = xi;
            c[n + i] = lift_function(x[i], tm, Lift::tangent);
        }
    }
    return VField(tm.total, c);
}

KForm lift_one_form(const KForm& a, const TangentPatch& tm, Lift kind) {
    require_base(tm, a.patch(), "lift_one_form");
    const std::size_t n = tm.n();
    auto ac = a.components();
    std::vector<Expr> c(2 * n, Expr(tm.total, 0));
    for (std::size_t i = 0; i < n; ++i) {
        if (kind == Lift::vertical) {
            c[i] = ac[i].embed(tm.total);
        } else {
            c[i] = lift_function(ac[i], tm, Lift::tangent);
            c[n + i] = ac[i].embed(tm.total);
        }
    }
    return KForm::one_form(tm.total, c);
}

GSec lift_section(const GSec& s, const TangentPatch& tm, Lift kind) {
    return GSec(lift_vector_field(s.vf, tm, kind), lift_one_form(s.of, tm, kind));
}

PolyMap canonical_involution(const TangentPatch& tt) {
    const std::size_t d = tt.base->dim();
    if (d % 2 != 0)
        throw WrongShape("canonical involution needs TTM; base " + tt.base->name() + " has odd dimension");
    const std::size_t n = d / 2;
    std::vector<std::string> first(tt.base->coords().begin(), tt.base->coords().begin() + static_cast<long>(n));
    auto inner = tangent_patch(make_patch("M", first));
    if (inner.total->coords() != tt.base->coords())
        throw WrongShape("canonical involution needs TTM; " + tt.base->name() + " is not a tangent patch");
    std::vector<Expr> c;
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(tt.total, i));
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(tt.total, 2 * n + i));
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(tt.total, n + i));
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(tt.total, 3 * n + i));
    return PolyMap(tt.total, tt.total, c);
}

PolyMap tulczyjew_map(const PatchPtr& base) {
    const std::size_t n = base->dim();
    auto ttstar = tangent_patch(cotangent_patch(base).total).total; // (x, p, x', p')
    auto tstart = cotangent_patch(tangent_patch(base).total).total; // (x, x', p_x, p_x')
    std::vector<Expr> c;
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(ttstar, i));
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(ttstar, 2 * n + i));
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(ttstar, 3 * n + i));
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(ttstar, n + i));
    return PolyMap(ttstar, tstart, c);
}

PatchPtr dual_bundle_patch(const PatchPtr& a_total, std::size_t base_dim) {
    if (base_dim > a_total->dim())
        throw WrongShape("base dimension exceeds bundle dimension");
    std::vector<std::string> coords(a_total->coords().begin(), a_total->coords().begin() + static_cast<long>(base_dim));
    for (std::size_t a = 0; a + base_dim < a_total->dim(); ++a)
        coords.push_back("xi" + std::to_string(a + 1));
    return make_patch(a_total->name() + "*", coords);
}

PolyMap legendre_map(const PatchPtr& a_total, std::size_t base_dim) {
    const std::size_t m = base_dim;
    const std::size_t r = a_total->dim() - std::min(base_dim, a_total->dim());
    auto src = cotangent_patch(dual_bundle_patch(a_total, base_dim)).total; // (x, xi, p_x, p_xi)
    auto dst = cotangent_patch(a_total).total;                               // (x, u, p_x, p_u)
    const std::size_t n = m + r;
    std::vector<Expr> c;
    for (std::size_t i = 0; i < m; ++i)
        c.push_back(var(src, i));
    for (std::size_t a = 0; a < r; ++a)
        c.push_back(var(src, n + m + a));
    for (std::size_t i = 0; i < m; ++i)
        c.push_back(-var(src, n + i));
    for (std::size_t a = 0; a < r; ++a)
        c.push_back(var(src, m + a));
    return PolyMap(src, dst, c);
}

KForm canonical_symplectic(const CotangentPatch& ct) {
    KForm w(ct.total, 2);
    for (std::size_t i = 0; i < ct.n(); ++i)
        w.add({i, ct.n() + i}, Expr(ct.total, 1));
    return w;
}

namespace {

// (x, v) -> (x, first, v, second) with first/second on the base or TM.
PolyMap block_map(const TangentPatch& tm, const PatchPtr& target, const std::vector<Expr>& first,
                  const std::vector<Expr>& second) {
    const std::size_t n = tm.n();
    std::vector<Expr> c;
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(tm.total, i));
    for (const auto& e : first)
        c.push_back(e.embed(tm.total));
    for (std::size_t i = 0; i < n; ++i)
        c.push_back(var(tm.total, n + i));
    for (const auto& e : second)
        c.push_back(e.embed(tm.total));
    return PolyMap(tm.total, target, c);
}

std::vector<Expr> tangent_parts(const std::vector<Expr>& comps, const TangentPatch& tm) {
    std::vector<Expr> out;
    for (const auto& e : comps)
        out.push_back(lift_function(e, tm, Lift::tangent));
    return out;
}

} // namespace

PolyMap tangent_section(const VField& x, const TangentPatch& tm) {
    require_base(tm, x.patch(), "tangent_section");
    return block_map(tm, tangent_patch(tm.total).total, x.comps(), tangent_parts(x.comps(), tm));
}

PolyMap core_section(const VField& x, const TangentPatch& tm) {
    require_base(tm, x.patch(), "core_section");
    return block_map(tm, tangent_patch(tm.total).total, std::vector<Expr>(tm.n(), Expr(tm.base, 0)), x.comps());
}

PolyMap tangent_section(const KForm& a, const TangentPatch& tm) {
    require_base(tm, a.patch(), "tangent_section");
    auto ttstar = tangent_patch(cotangent_patch(tm.base).total).total;
    auto ac = a.components();
    return block_map(tm, ttstar, ac, tangent_parts(ac, tm));
}

PolyMap core_section(const KForm& a, const TangentPatch& tm) {
    require_base(tm, a.patch(), "core_section");
    auto ttstar = tangent_patch(cotangent_patch(tm.base).total).total;
    return block_map(tm, ttstar, std::vector<Expr>(tm.n(), Expr(tm.base, 0)), a.components());
}

PolyMap section_map(const VField& x, const TangentPatch& tm) {
    if (!same_patch(x.patch(), tm.total))
        throw PatchMismatch("section_map: vector field does not live on " + tm.total->name());
    std::vector<Expr> c;
    for (std::size_t i = 0; i < tm.total->dim(); ++i)
        c.push_back(var(tm.total, i));
    for (const auto& e : x.comps())
        c.push_back(e);
    return PolyMap(tm.total, tangent_patch(tm.total).total, c);
}

PolyMap section_map(const KForm& a, const TangentPatch& tm) {
    if (!same_patch(a.patch(), tm.total))
        throw PatchMismatch("section_map: form does not live on " + tm.total->name());
    std::vector<Expr> c;
    for (std::size_t i = 0; i < tm.total->dim(); ++i)
        c.push_back(var(tm.total, i));
    for (const auto& e : a.components())
        c.push_back(e);
    return PolyMap(tm.total, cotangent_patch(tm.total).total, c);
}

Frame tangent_lift_dirac(const Frame& l) {
    auto tm = tangent_patch(l.patch());
    std::vector<GSec> s;
    for (const auto& g : l.secs())
        s.push_back(lift_section(g, tm, Lift::tangent));
    for (const auto& g : l.secs())
        s.push_back(lift_section(g, tm, Lift::vertical));
    return Frame(tm.total, s);
}

Report check_tangent_mu_identity(const Frame& l) {
    Report lag = check_lagrangian(l);
    if (!lag.pass)
        throw NotLagrangian("frame is not Lagrangian: " + lag.witness);
    auto tm = tangent_patch(l.patch());
    const std::size_t m = l.size();
    Tensor3 mu = courant_tensor(l);
    Tensor3 lifted = courant_tensor(tangent_lift_dirac(l));
    const std::size_t M = 2 * m;
    auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> const Expr& { return lifted[(i * M + j) * M + k]; };

    Report r = Report::ok("tangent_mu");
    Report linear = Report::ok("linear");
    Report one_core = Report::ok("one_core");
    Report two_core = Report::ok("two_core");
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            for (std::size_t k = 0; k < M; ++k) {
                std::size_t cores = (i >= m) + (j >= m) + (k >= m);
                const Expr& lhs = at(i, j, k);
                std::size_t bi = i % m, bj = j % m, bk = k % m;
                const Expr& base = mu[(bi * m + bj) * m + bk];
                Expr rhs(tm.total, 0);
                if (cores == 0)
                    rhs = lift_function(base, tm, Lift::tangent);
                else if (cores == 1)
                    rhs = lift_function(base, tm, Lift::vertical);
                Expr diff = lhs - rhs;
                if (diff.is_zero())
                    continue;
                Report& target = cores == 0 ? linear : cores == 1 ? one_core : two_core;
                if (target.pass)
                    target = Report::fail(target.name, index_witness("mu_TM", {i, j, k}, diff));
            }
    r.add(linear);
    r.add(one_core);
    r.add(two_core);
    return r;
}

} // namespace dirac
