#include "dirac/algebroid.hpp"

#include <sstream>

namespace dirac {

namespace {

Expr on(const PatchPtr& p, const Expr& e) { return e + Expr(p, 0); }

ExprMatrix columns(const std::vector<std::vector<Expr>>& cols, std::size_t rows) {
    return ExprMatrix::from_columns(cols, rows);
}

bool span_contains(const std::vector<std::vector<Expr>>& gens, std::size_t rows, const std::vector<Expr>& v) {
    if (std::all_of(v.begin(), v.end(), [](const Expr& e) { return e.is_zero(); }))
        return true;
    if (gens.empty())
        return false;
    return in_span(columns(gens, rows), v);
}

Section add(Section a, const Section& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

Section scale(Section a, const Expr& f) {
    for (auto& e : a)
        e *= f;
    return a;
}

const Expr* first_nonzero_of(const std::vector<Expr>& v, std::size_t& at) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) {
            at = i;
            return &v[i];
        }
    return nullptr;
}

} // namespace

// ---------------------------------------------------------------- AlgebroidPatch

AlgebroidPatch::AlgebroidPatch(PatchPtr base, std::size_t rank)
    : base_(std::move(base)), rank_(rank), anchor_(base_->dim(), rank) {
    for (std::size_t i = 0; i < anchor_.rows(); ++i)
        for (std::size_t a = 0; a < rank; ++a)
            anchor_.at(i, a) = Expr(base_, 0);
    c_.assign(rank * rank * rank, Expr(base_, 0));
}

void AlgebroidPatch::set_anchor(std::size_t i, std::size_t a, const Expr& v) {
    if (i >= n() || a >= rank_)
        throw WrongShape("anchor index out of range");
    anchor_.at(i, a) = on(base_, v);
}

void AlgebroidPatch::set_c(std::size_t k, std::size_t a, std::size_t b, const Expr& v) {
    if (k >= rank_ || a >= rank_ || b >= rank_)
        throw WrongShape("structure function index out of range");
    if (a == b) {
        if (!v.is_zero())
            throw WrongShape("structure functions must be antisymmetric");
        return;
    }
    c_[(k * rank_ + a) * rank_ + b] = on(base_, v);
    c_[(k * rank_ + b) * rank_ + a] = on(base_, -v);
}

VField AlgebroidPatch::rho(const Section& u) const {
    std::vector<Expr> comps(n(), Expr(base_, 0));
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t a = 0; a < rank_; ++a)
            if (!anchor_.at(i, a).is_zero())
                comps[i] += anchor_.at(i, a) * u[a];
    return VField(base_, comps);
}

Section AlgebroidPatch::bracket(const Section& u, const Section& v) const {
    Section r = zero();
    VField ru = rho(u), rv = rho(v);
    for (std::size_t k = 0; k < rank_; ++k) {
        Expr s = ru.apply(v[k]) - rv.apply(u[k]);
        for (std::size_t a = 0; a < rank_; ++a) {
            if (u[a].is_zero())
                continue;
            for (std::size_t b = 0; b < rank_; ++b)
                if (!v[b].is_zero() && !c(k, a, b).is_zero())
                    s += u[a] * v[b] * c(k, a, b);
        }
        r[k] = s;
    }
    return r;
}

Section AlgebroidPatch::frame(std::size_t a) const {
    Section s = zero();
    s.at(a) = Expr(base_, 1);
    return s;
}

Section AlgebroidPatch::zero() const { return Section(rank_, Expr(base_, 0)); }

std::string AlgebroidPatch::to_string() const {
    std::ostringstream os;
    os << "algebroid(rank " << rank_ << " over " << base_->name() << ")";
    return os.str();
}

AlgebroidPatch tangent_algebroid(const PatchPtr& base) {
    AlgebroidPatch a(base, base->dim());
    for (std::size_t i = 0; i < base->dim(); ++i)
        a.set_anchor(i, i, Expr(base, 1));
    return a;
}

AlgebroidPatch lie_algebra(std::size_t r,
                           const std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Rational>>& c) {
    AlgebroidPatch g(point_patch(), r);
    for (const auto& [a, b, k, v] : c)
        g.set_c(k, a, b, g.c(k, a, b) + Expr(g.base(), v));
    return g;
}

Report check_lie_algebroid(const AlgebroidPatch& a) {
    const std::size_t r = a.rank();
    Report rep = Report::ok("lie_algebroid");
    Report jac = Report::ok("jacobi");
    for (std::size_t x = 0; x < r && jac.pass; ++x)
        for (std::size_t y = x + 1; y < r && jac.pass; ++y)
            for (std::size_t z = y + 1; z < r && jac.pass; ++z) {
                Section ex = a.frame(x), ey = a.frame(y), ez = a.frame(z);
                Section j = add(add(a.bracket(a.bracket(ex, ey), ez), a.bracket(a.bracket(ey, ez), ex)),
                                a.bracket(a.bracket(ez, ex), ey));
                std::size_t k = 0;
                if (const Expr* v = first_nonzero_of(j, k))
                    jac = Report::fail("jacobi", index_witness("jacobi", {x, y, z, k}, *v));
            }
    rep.add(jac);
    Report anc = Report::ok("anchor");
    for (std::size_t x = 0; x < r && anc.pass; ++x)
        for (std::size_t y = x + 1; y < r && anc.pass; ++y) {
            VField lhs = a.rho(a.bracket(a.frame(x), a.frame(y)));
            VField rhs = lie_bracket(a.rho(a.frame(x)), a.rho(a.frame(y)));
            std::size_t i = 0;
            auto d = (lhs - rhs).comps();
            if (const Expr* v = first_nonzero_of(d, i))
                anc = Report::fail("anchor", index_witness("anchor", {x, y, i}, *v));
        }
    rep.add(anc);
    return rep;
}

PatchPtr dual_total_patch(const AlgebroidPatch& a) {
    auto coords = a.base()->coords();
    for (std::size_t k = 0; k < a.rank(); ++k)
        coords.push_back("xi" + std::to_string(k + 1));
    return make_patch(a.base()->name() + "*", coords);
}

Bivector dual_linear_poisson(const AlgebroidPatch& a) {
    Report chk = check_lie_algebroid(a);
    if (!chk.pass)
        throw NotAlgebroid("not a Lie algebroid: " + chk.witness);
    auto p = dual_total_patch(a);
    const std::size_t n = a.n(), r = a.rank();
    Bivector pi(p);
    for (std::size_t x = 0; x < r; ++x)
        for (std::size_t y = x + 1; y < r; ++y) {
            Expr v(p, 0);
            for (std::size_t k = 0; k < r; ++k)
                v += a.c(k, x, y).embed(p) * Expr::var(p, n + k);
            pi.set(n + x, n + y, v);
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t x = 0; x < r; ++x)
            pi.set(i, n + x, a.anchor().at(i, x).embed(p));
    return pi;
}

// ---------------------------------------------------------------- bialgebroids

namespace {

using Square = std::vector<std::vector<Expr>>; // r x r antisymmetric coefficients

Square zero_square(const AlgebroidPatch& a) {
    return Square(a.rank(), std::vector<Expr>(a.rank(), Expr(a.base(), 0)));
}

// (d_* u)^{ab} = rho_*^a(u^b) - rho_*^b(u^a) - sum_k c*^k_ab u^k
Square d_star(const AlgebroidPatch& dual, const Section& u) {
    Square p = zero_square(dual);
    const std::size_t r = dual.rank();
    std::vector<VField> rho_star;
    for (std::size_t x = 0; x < r; ++x)
        rho_star.push_back(dual.rho(dual.frame(x)));
    for (std::size_t x = 0; x < r; ++x)
        for (std::size_t y = 0; y < r; ++y) {
            Expr v = rho_star[x].apply(u[y]) - rho_star[y].apply(u[x]);
            for (std::size_t k = 0; k < r; ++k)
                if (!dual.c(k, x, y).is_zero())
                    v -= dual.c(k, x, y) * u[k];
            p[x][y] = v;
        }
    return p;
}

// (L_u P)^{ab} = rho(u) P^{ab} + sum_c [u,e_c]^a P^{cb} + sum_c [u,e_c]^b P^{ac}
Square lie_on_square(const AlgebroidPatch& a, const Section& u, const Square& p) {
    const std::size_t r = a.rank();
    VField ru = a.rho(u);
    std::vector<Section> ue;
    for (std::size_t c = 0; c < r; ++c)
        ue.push_back(a.bracket(u, a.frame(c)));
    Square out = zero_square(a);
    for (std::size_t x = 0; x < r; ++x)
        for (std::size_t y = 0; y < r; ++y) {
            Expr v = ru.apply(p[x][y]);
            for (std::size_t c = 0; c < r; ++c) {
                if (!ue[c][x].is_zero())
                    v += ue[c][x] * p[c][y];
                if (!ue[c][y].is_zero())
                    v += ue[c][y] * p[x][c];
            }
            out[x][y] = v;
        }
    return out;
}

// d_*[u,v] - L_u d_*v + L_v d_*u; first nonzero entry or nothing.
std::optional<std::pair<std::pair<std::size_t, std::size_t>, Expr>>
derivation_defect(const AlgebroidPatch& a, const AlgebroidPatch& dual, const Section& u, const Section& v) {
    Square lhs = d_star(dual, a.bracket(u, v));
    Square lu = lie_on_square(a, u, d_star(dual, v));
    Square lv = lie_on_square(a, v, d_star(dual, u));
    for (std::size_t x = 0; x < a.rank(); ++x)
        for (std::size_t y = 0; y < a.rank(); ++y) {
            Expr d = lhs[x][y] - lu[x][y] + lv[x][y];
            if (!d.is_zero())
                return std::make_pair(std::make_pair(x, y), d);
        }
    return std::nullopt;
}

} // namespace

Report check_lie_bialgebroid(const AlgebroidPatch& a, const AlgebroidPatch& dual) {
    if (!same_patch(a.base(), dual.base()) || a.rank() != dual.rank())
        throw WrongShape("bialgebroid needs two algebroids of equal rank on one base");
    if (a.rank() > 4)
        throw RankTooLarge("bialgebroid check supports rank at most 4, got " + std::to_string(a.rank()));
    for (const auto* x : {&a, &dual}) {
        Report chk = check_lie_algebroid(*x);
        if (!chk.pass)
            throw NotAlgebroid("not a Lie algebroid: " + chk.witness);
    }
    const std::size_t r = a.rank(), n = a.n();
    Report rep = Report::ok("lie_bialgebroid");

    // rho rho_*^T + rho_* rho^T = 0
    Report anchors = Report::ok("anchors");
    for (std::size_t i = 0; i < n && anchors.pass; ++i)
        for (std::size_t j = i; j < n && anchors.pass; ++j) {
            Expr s(a.base(), 0);
            for (std::size_t x = 0; x < r; ++x)
                s += a.anchor().at(i, x) * dual.anchor().at(j, x) + dual.anchor().at(i, x) * a.anchor().at(j, x);
            if (!s.is_zero())
                anchors = Report::fail("anchors", index_witness("anchors", {i, j}, s));
        }
    rep.add(anchors);

    Report der = Report::ok("derivation");
    for (std::size_t x = 0; x < r && der.pass; ++x)
        for (std::size_t y = x + 1; y < r && der.pass; ++y)
            if (auto d = derivation_defect(a, dual, a.frame(x), a.frame(y)))
                der = Report::fail("derivation",
                                   index_witness("derivation", {x, y, d->first.first, d->first.second}, d->second));
    // Function multiples: u = x^i e_a.
    for (std::size_t i = 0; i < n && der.pass; ++i)
        for (std::size_t x = 0; x < r && der.pass; ++x)
            for (std::size_t y = 0; y < r && der.pass; ++y)
                if (auto d = derivation_defect(a, dual, scale(a.frame(x), Expr::var(a.base(), i)), a.frame(y)))
                    der = Report::fail("derivation", "with " + a.base()->coords()[i] + " multiple: " +
                                                         index_witness("derivation",
                                                                       {x, y, d->first.first, d->first.second},
                                                                       d->second));
    rep.add(der);
    return rep;
}

// ---------------------------------------------------------------- IM-2-forms

Report check_im_two_form(const AlgebroidPatch& a, const IMTwoForm& s) {
    Report chk = check_lie_algebroid(a);
    if (!chk.pass)
        throw NotAlgebroid("not a Lie algebroid: " + chk.witness);
    const std::size_t n = a.n(), r = a.rank();
    if (s.sigma.rows() != n || s.sigma.cols() != r)
        throw WrongShape("IM-2-form must be an n x r matrix");
    const auto& base = a.base();
    auto sigma = [&](const Section& u) {
        std::vector<Expr> c(n, Expr(base, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t x = 0; x < r; ++x)
                c[i] += on(base, s.sigma.at(i, x)) * u[x];
        return KForm::one_form(base, c);
    };
    auto pair = [&](const Section& u, const Section& v) { return sigma(u).evaluate({a.rho(v)}); };
    auto second = [&](const Section& u, const Section& v) {
        KForm lhs = sigma(a.bracket(u, v));
        KForm rhs = lie_derivative(a.rho(u), sigma(v)) - lie_derivative(a.rho(v), sigma(u)) +
                    exterior_derivative(KForm::function(pair(u, v)));
        return (lhs - rhs).components();
    };

    Report rep = Report::ok("im_two_form");
    Report sym = Report::ok("skew");
    for (std::size_t x = 0; x < r && sym.pass; ++x)
        for (std::size_t y = x; y < r && sym.pass; ++y) {
            Expr v = pair(a.frame(x), a.frame(y)) + pair(a.frame(y), a.frame(x));
            if (!v.is_zero())
                sym = Report::fail("skew", index_witness("skew", {x, y}, v));
        }
    rep.add(sym);

    Report br = Report::ok("bracket");
    std::vector<std::pair<Section, std::string>> us;
    for (std::size_t x = 0; x < r; ++x) {
        us.emplace_back(a.frame(x), "e" + std::to_string(x + 1));
        for (std::size_t i = 0; i < n; ++i)
            us.emplace_back(scale(a.frame(x), Expr::var(base, i)),
                            base->coords()[i] + "*e" + std::to_string(x + 1));
    }
    for (const auto& [u, uname] : us) {
        for (std::size_t y = 0; y < r && br.pass; ++y) {
            auto d = second(u, a.frame(y));
            std::size_t i = 0;
            if (const Expr* v = first_nonzero_of(d, i))
                br = Report::fail("bracket", "u = " + uname + ", v = e" + std::to_string(y + 1) + ": " +
                                                 index_witness("dx", {i}, *v));
        }
        if (!br.pass)
            break;
    }
    rep.add(br);
    return rep;
}

// ---------------------------------------------------------------- IM-foliations

std::vector<std::size_t> quotient_columns(const AlgebroidPatch& a, const std::vector<Section>& k) {
    const std::size_t r = a.rank();
    std::vector<std::vector<Expr>> cur = k;
    std::size_t rank = cur.empty() ? 0 : generic_rank(columns(cur, r));
    std::vector<std::size_t> q;
    for (std::size_t x = 0; x < r && rank < r; ++x) {
        auto next = cur;
        next.push_back(a.frame(x));
        std::size_t nr = generic_rank(columns(next, r));
        if (nr > rank) {
            cur = next;
            rank = nr;
            q.push_back(x);
        }
    }
    return q;
}

namespace {

struct FoliationContext {
    const AlgebroidPatch& a;
    const IMFoliation& f;
    std::vector<std::size_t> q;
    ExprMatrix adapted; // [K | e_Q], invertible

    // Numerators of nabla_{f_i}(u + K) in the quotient frame (common
    // denominator dropped).
    std::vector<Expr> defect(const Section& u, std::size_t i) const {
        Solution s = solve_linear(adapted, u);
        const std::size_t nk = f.k.size();
        std::vector<Expr> num(s.num.begin() + static_cast<long>(nk), s.num.end());
        const VField& x = f.f_m[i];
        Expr dd = x.apply(s.den);
        std::vector<Expr> out;
        for (std::size_t b = 0; b < q.size(); ++b) {
            Expr v = x.apply(num[b]) * s.den - num[b] * dd;
            for (std::size_t c = 0; c < q.size(); ++c)
                if (!f.nabla[i].at(b, c).is_zero())
                    v += s.den * f.nabla[i].at(b, c) * num[c];
            out.push_back(v);
        }
        return out;
    }
};

} // namespace

Report check_im_foliation(const AlgebroidPatch& a, const IMFoliation& f) {
    const std::size_t n = a.n(), r = a.rank();
    const auto& base = a.base();
    std::vector<std::vector<Expr>> fcols;
    for (const auto& v : f.f_m) {
        if (!same_patch(v.patch(), base))
            throw PatchMismatch("F_M fields must live on the algebroid base");
        fcols.push_back(v.comps());
    }
    if (!fcols.empty() && generic_rank(columns(fcols, n)) != fcols.size())
        throw RankJump("F_M generators are not generically independent");
    if (!f.k.empty() && generic_rank(columns(f.k, r)) != f.k.size())
        throw RankJump("K generators are not generically independent");
    auto q = quotient_columns(a, f.k);
    if (f.nabla.size() != f.f_m.size())
        throw WrongShape("one connection matrix per F_M generator is required");
    for (const auto& m : f.nabla)
        if (m.rows() != q.size() || m.cols() != q.size())
            throw WrongShape("connection matrices must be " + std::to_string(q.size()) + " x " +
                             std::to_string(q.size()));

    std::vector<std::vector<Expr>> adapted_cols = f.k;
    for (auto x : q)
        adapted_cols.push_back(a.frame(x));
    FoliationContext ctx{a, f, q, columns(adapted_cols, r)};

    Report rep = Report::ok("im_foliation");

    Report inv = Report::ok("involutive");
    for (std::size_t i = 0; i < f.f_m.size() && inv.pass; ++i)
        for (std::size_t j = i + 1; j < f.f_m.size() && inv.pass; ++j)
            if (!span_contains(fcols, n, lie_bracket(f.f_m[i], f.f_m[j]).comps()))
                inv = Report::fail("involutive", "[f" + std::to_string(i + 1) + ", f" + std::to_string(j + 1) +
                                                     "] = " + lie_bracket(f.f_m[i], f.f_m[j]).to_string());
    rep.add(inv);

    Report sub = Report::ok("subalgebroid");
    for (std::size_t i = 0; i < f.k.size() && sub.pass; ++i)
        for (std::size_t j = i + 1; j < f.k.size() && sub.pass; ++j)
            if (!span_contains(f.k, r, a.bracket(f.k[i], f.k[j])))
                sub = Report::fail("subalgebroid",
                                   "[k" + std::to_string(i + 1) + ", k" + std::to_string(j + 1) + "] not in K");
    rep.add(sub);

    Report tangent = Report::ok("anchor_tangent");
    for (std::size_t i = 0; i < f.k.size() && tangent.pass; ++i) {
        VField rk = a.rho(f.k[i]);
        if (!span_contains(fcols, n, rk.comps()))
            tangent = Report::fail("anchor_tangent", "rho(k" + std::to_string(i + 1) + ") = " + rk.to_string());
    }
    rep.add(tangent);

    // Curvature: f_i(G_j) - f_j(G_i) + G_i G_j - G_j G_i - sum_l lambda_l G_l.
    Report flat = Report::ok("flat");
    const std::size_t m = q.size();
    for (std::size_t i = 0; i < f.f_m.size() && flat.pass && m > 0; ++i)
        for (std::size_t j = i + 1; j < f.f_m.size() && flat.pass; ++j) {
            Solution lam;
            try {
                lam = solve_linear(columns(fcols, n), lie_bracket(f.f_m[i], f.f_m[j]).comps());
            } catch (const Inconsistent&) {
                flat = Report::fail("flat", "not evaluated: F_M is not involutive");
                break;
            }
            const auto& gi = f.nabla[i];
            const auto& gj = f.nabla[j];
            for (std::size_t b = 0; b < m && flat.pass; ++b)
                for (std::size_t c = 0; c < m && flat.pass; ++c) {
                    Expr v = f.f_m[i].apply(on(base, gj.at(b, c))) - f.f_m[j].apply(on(base, gi.at(b, c)));
                    for (std::size_t d = 0; d < m; ++d)
                        v += gi.at(b, d) * gj.at(d, c) - gj.at(b, d) * gi.at(d, c);
                    v *= lam.den;
                    for (std::size_t l = 0; l < f.f_m.size(); ++l)
                        v -= lam.num[l] * f.nabla[l].at(b, c);
                    if (!v.is_zero())
                        flat = Report::fail("flat", index_witness("curvature", {i, j, b, c}, v));
                }
        }
    rep.add(flat);

    std::vector<Section> gens;
    if (f.flat) {
        gens = *f.flat;
    } else {
        for (auto x : q)
            gens.push_back(a.frame(x));
    }
    Report fg = Report::ok("flat_generators");
    {
        auto all = f.k;
        all.insert(all.end(), gens.begin(), gens.end());
        if (r > 0 && (all.empty() || generic_rank(columns(all, r)) != r))
            fg = Report::fail("flat_generators", "flat generators do not span A/K");
        for (std::size_t g = 0; g < gens.size() && fg.pass; ++g)
            for (std::size_t i = 0; i < f.f_m.size() && fg.pass; ++i) {
                auto d = ctx.defect(gens[g], i);
                std::size_t b = 0;
                if (const Expr* v = first_nonzero_of(d, b))
                    fg = Report::fail("flat_generators", index_witness("nabla", {i, g, b}, *v));
            }
    }
    rep.add(fg);

    Report ks = Report::ok("kernel_stable");
    for (std::size_t g = 0; g < gens.size() && ks.pass; ++g)
        for (std::size_t j = 0; j < f.k.size() && ks.pass; ++j) {
            Section b = a.bracket(gens[g], f.k[j]);
            if (!span_contains(f.k, r, b))
                ks = Report::fail("kernel_stable", "[u" + std::to_string(g + 1) + ", k" + std::to_string(j + 1) +
                                                       "] not in K");
        }
    rep.add(ks);

    Report fc = Report::ok("flat_closed");
    for (std::size_t g = 0; g < gens.size() && fc.pass; ++g)
        for (std::size_t h = g + 1; h < gens.size() && fc.pass; ++h) {
            Section b = a.bracket(gens[g], gens[h]);
            for (std::size_t i = 0; i < f.f_m.size() && fc.pass; ++i) {
                auto d = ctx.defect(b, i);
                std::size_t c = 0;
                if (const Expr* v = first_nonzero_of(d, c))
                    fc = Report::fail("flat_closed", index_witness("nabla_bracket", {g, h, i, c}, *v));
            }
        }
    rep.add(fc);

    Report ap = Report::ok("anchor_preserves");
    for (std::size_t g = 0; g < gens.size() && ap.pass; ++g)
        for (std::size_t i = 0; i < f.f_m.size() && ap.pass; ++i) {
            VField b = lie_bracket(a.rho(gens[g]), f.f_m[i]);
            if (!span_contains(fcols, n, b.comps()))
                ap = Report::fail("anchor_preserves", "[rho(u" + std::to_string(g + 1) + "), f" +
                                                          std::to_string(i + 1) + "] = " + b.to_string());
        }
    rep.add(ap);
    return rep;
}

// ---------------------------------------------------------------- Lie bialgebras

namespace {

AlgebroidPatch restrict_algebra(const AlgebroidPatch& g, const std::vector<std::size_t>& keep) {
    AlgebroidPatch out(g.base(), keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = a + 1; b < keep.size(); ++b)
            for (std::size_t k = 0; k < keep.size(); ++k)
                out.set_c(k, a, b, g.c(keep[k], keep[a], keep[b]));
    return out;
}

} // namespace

Report check_lie_bialgebra(const LieBialgebraData& d, const std::optional<std::vector<std::size_t>>& ideal) {
    if (d.g.n() != 0 || d.dual.n() != 0)
        throw WrongShape("Lie bialgebra data must live over a point");
    if (d.g.rank() != d.dual.rank())
        throw WrongShape("g and g* must have equal dimension");
    Report gj = check_lie_algebroid(d.g);
    if (!gj.pass)
        throw NotLie("g fails Jacobi: " + gj.witness);
    const std::size_t r = d.g.rank();
    Report rep = Report::ok("lie_bialgebra");

    AlgebroidPatch g = d.g, dual = d.dual;
    if (ideal) {
        std::vector<bool> in_h(r, false);
        for (auto i : *ideal) {
            if (i >= r)
                throw WrongShape("ideal index out of range");
            in_h[i] = true;
        }
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b)
                for (std::size_t k = 0; k < r; ++k)
                    if (in_h[b] && !in_h[k] && !d.g.c(k, a, b).is_zero())
                        throw NotIdeal(index_witness("bracket", {a, b, k}, d.g.c(k, a, b)) +
                                       " leaves the ideal");
        std::vector<std::size_t> keep;
        for (std::size_t a = 0; a < r; ++a)
            if (!in_h[a])
                keep.push_back(a);
        // h annihilator must be a subalgebra of g*.
        Report co = Report::ok("coideal");
        for (std::size_t a = 0; a < keep.size() && co.pass; ++a)
            for (std::size_t b = a + 1; b < keep.size() && co.pass; ++b)
                for (std::size_t k = 0; k < r && co.pass; ++k)
                    if (in_h[k] && !d.dual.c(k, keep[a], keep[b]).is_zero())
                        co = Report::fail("coideal",
                                          index_witness("dual_bracket", {keep[a], keep[b], k}, d.dual.c(k, keep[a], keep[b])));
        rep.add(co);
        g = restrict_algebra(d.g, keep);
        dual = restrict_algebra(d.dual, keep);
    }
    const std::size_t q = g.rank();

    Report dj = check_lie_algebroid(dual);
    dj.name = "dual_jacobi";
    rep.add(dj);

    // delta(e_k)^{ab} = c*^k_ab; cocycle delta[x,y] = ad_x delta(y) - ad_y delta(x).
    auto delta = [&](const Section& u) {
        Square p = zero_square(g);
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = 0; b < q; ++b)
                for (std::size_t k = 0; k < q; ++k)
                    p[a][b] += dual.c(k, a, b) * u[k];
        return p;
    };
    Report co = Report::ok("cocycle");
    for (std::size_t x = 0; x < q && co.pass; ++x)
        for (std::size_t y = x + 1; y < q && co.pass; ++y) {
            Section ex = g.frame(x), ey = g.frame(y);
            Square lhs = delta(g.bracket(ex, ey));
            Square ax = lie_on_square(g, ex, delta(ey));
            Square ay = lie_on_square(g, ey, delta(ex));
            for (std::size_t a = 0; a < q && co.pass; ++a)
                for (std::size_t b = 0; b < q && co.pass; ++b) {
                    Expr v = lhs[a][b] - ax[a][b] + ay[a][b];
                    if (!v.is_zero())
                        co = Report::fail("cocycle", index_witness("cocycle", {x, y, a, b}, v));
                }
        }
    rep.add(co);
    return rep;
}

// ---------------------------------------------------------------- linearity

Report check_linearity(const Frame& l, std::size_t base_dim) {
    Report lag = check_lagrangian(l);
    if (!lag.pass)
        throw NotLagrangian("frame is not Lagrangian: " + lag.witness);
    const auto& p = l.patch();
    const std::size_t dim = p->dim();
    if (base_dim > dim)
        throw WrongShape("base dimension exceeds patch dimension");
    std::string tname = "t";
    while (p->index_of(tname))
        tname += "_";
    auto coords = p->coords();
    coords.push_back(tname);
    auto pt = make_patch(p->name() + "[" + tname + "]", coords);
    Expr t = Expr::var(pt, dim);

    std::vector<Expr> images;
    for (std::size_t i = 0; i < dim; ++i)
        images.push_back(i < base_dim ? Expr::var(pt, i) : t * Expr::var(pt, i));

    std::vector<std::vector<Expr>> moved, psi;
    for (const auto& s : l.secs()) {
        auto c = s.coefficients();
        std::vector<Expr> at_tu, img;
        for (const auto& e : c)
            at_tu.push_back(e.substitute(images));
        for (std::size_t i = 0; i < 2 * dim; ++i) {
            Expr e = c[i].embed(pt);
            // Vector part: fibre components scale by t. Form part: base
            // components scale by t.
            bool fibre = (i % dim) >= base_dim;
            bool scale_t = i < dim ? fibre : !fibre;
            img.push_back(scale_t ? t * e : e);
        }
        moved.push_back(at_tu);
        psi.push_back(img);
    }
    Report rep = Report::ok("linearity");
    for (std::size_t k = 0; k < psi.size(); ++k)
        if (!span_contains(moved, 2 * dim, psi[k])) {
            rep = Report::fail("linearity", "psi_" + tname + "(s[" + std::to_string(k + 1) + "]) outside span at " +
                                                "fibre scaled by " + tname);
            break;
        }
    return rep;
}

} // namespace dirac
