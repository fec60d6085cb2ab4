#include "dirac/courant.hpp"

namespace dirac {

namespace {

void require_same(const PatchPtr& a, const PatchPtr& b, const char* what) {
    if (!same_patch(a, b))
        throw PatchMismatch(std::string(what) + ": sections live on different patches");
}

} // namespace

// ---------------------------------------------------------------- GSec

GSec::GSec(VField x, KForm a) : vf(std::move(x)), of(std::move(a)) {
    require_same(vf.patch(), of.patch(), "generalized section");
    if (of.degree() != 1)
        throw WrongShape("form part of a generalized section must be a one-form");
}

GSec GSec::zero(const PatchPtr& patch) { return GSec(VField::zero(patch), KForm(patch, 1)); }
GSec GSec::vector(const VField& x) { return GSec(x, KForm(x.patch(), 1)); }
GSec GSec::form(const KForm& a) { return GSec(VField::zero(a.patch()), a); }

GSec GSec::operator+(const GSec& o) const { return GSec(vf + o.vf, of + o.of); }
GSec GSec::operator-(const GSec& o) const { return GSec(vf - o.vf, of - o.of); }
GSec GSec::scaled(const Expr& f) const { return GSec(vf.scaled(f), of.scaled(f)); }
GSec GSec::embed(const PatchPtr& target) const { return GSec(vf.embed(target), of.embed(target)); }

std::vector<Expr> GSec::coefficients() const {
    std::vector<Expr> c = vf.comps();
    auto a = of.components();
    c.insert(c.end(), a.begin(), a.end());
    return c;
}

std::string GSec::to_string() const { return "(" + vf.to_string() + ", " + of.to_string() + ")"; }

bool operator==(const GSec& a, const GSec& b) { return a.vf == b.vf && a.of == b.of; }

// ---------------------------------------------------------------- Frame

Frame::Frame(PatchPtr patch, std::vector<GSec> secs) : patch_(std::move(patch)), secs_(std::move(secs)) {
    for (const auto& s : secs_)
        require_same(patch_, s.patch(), "frame");
}

ExprMatrix Frame::matrix() const {
    std::vector<std::vector<Expr>> cols;
    for (const auto& s : secs_)
        cols.push_back(s.coefficients());
    return ExprMatrix::from_columns(cols, 2 * patch_->dim());
}

Frame Frame::embed(const PatchPtr& target) const {
    std::vector<GSec> s;
    for (const auto& g : secs_)
        s.push_back(g.embed(target));
    return Frame(target, s);
}

std::string Frame::to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < secs_.size(); ++i)
        s += (i ? ", " : "") + secs_[i].to_string();
    return s + "}";
}

// ---------------------------------------------------------------- operations

Expr pairing(const GSec& a, const GSec& b) {
    require_same(a.patch(), b.patch(), "pairing");
    return a.of.evaluate({b.vf}) + b.of.evaluate({a.vf});
}

GSec courant_bracket(const GSec& a, const GSec& b) {
    require_same(a.patch(), b.patch(), "courant_bracket");
    return GSec(lie_bracket(a.vf, b.vf),
                lie_derivative(a.vf, b.of) - interior_product(b.vf, exterior_derivative(a.of)));
}

Frame graph_two_form(const KForm& w) {
    if (w.degree() != 2)
        throw WrongShape("graph_two_form needs a two-form");
    const auto& p = w.patch();
    std::vector<GSec> s;
    for (std::size_t i = 0; i < p->dim(); ++i) {
        VField e = VField::coordinate(p, i);
        s.emplace_back(e, interior_product(e, w));
    }
    return Frame(p, s);
}

Frame graph_bivector(const Bivector& pi) {
    const auto& p = pi.patch();
    std::vector<GSec> s;
    for (std::size_t i = 0; i < p->dim(); ++i) {
        KForm dx = KForm::differential(p, i);
        s.emplace_back(sharp_bivector(pi, dx), dx);
    }
    return Frame(p, s);
}

Frame foliation_frame(const PatchPtr& patch, const std::vector<VField>& f) {
    const std::size_t n = patch->dim();
    ExprMatrix m(f.size(), n);
    for (std::size_t a = 0; a < f.size(); ++a) {
        require_same(patch, f[a].patch(), "foliation_frame");
        for (std::size_t i = 0; i < n; ++i)
            m.at(a, i) = f[a][i];
    }
    if (generic_rank(m) != f.size())
        throw RankDeficient("spanning fields have generic rank " + std::to_string(generic_rank(m)) + ", expected " +
                            std::to_string(f.size()));
    std::vector<GSec> s;
    for (const auto& v : f)
        s.push_back(GSec::vector(v));
    if (f.empty()) {
        for (std::size_t i = 0; i < n; ++i)
            s.push_back(GSec::form(KForm::differential(patch, i)));
    } else {
        for (const auto& k : kernel_basis(m))
            s.push_back(GSec::form(KForm::one_form(patch, k)));
    }
    return Frame(patch, s);
}

Frame bfield_transform(const Frame& l, const KForm& b) {
    require_same(l.patch(), b.patch(), "bfield_transform");
    if (b.degree() != 2)
        throw WrongShape("B-field must be a two-form");
    std::vector<GSec> s;
    for (const auto& g : l.secs())
        s.emplace_back(g.vf, g.of + interior_product(g.vf, b));
    return Frame(l.patch(), s);
}

Report check_lagrangian(const Frame& l) {
    const std::size_t n = l.patch()->dim();
    Report r = Report::ok("lagrangian");
    Report iso = Report::ok("isotropic");
    for (std::size_t i = 0; i < l.size() && iso.pass; ++i)
        for (std::size_t j = i; j < l.size(); ++j) {
            Expr v = pairing(l[i], l[j]);
            if (!v.is_zero()) {
                iso = Report::fail("isotropic", index_witness("pairing", {i, j}, v));
                break;
            }
        }
    r.add(iso);
    std::size_t rank = l.size() ? generic_rank(l.matrix()) : 0;
    if (rank == n && l.size() == n)
        r.add(Report::ok("maximal"));
    else
        r.add(Report::fail("maximal", "rank = " + std::to_string(rank) + " with " + std::to_string(l.size()) +
                                          " sections, need " + std::to_string(n)));
    return r;
}

Tensor3 courant_tensor(const Frame& l) {
    Report lag = check_lagrangian(l);
    if (!lag.pass)
        throw NotLagrangian("frame is not Lagrangian: " + lag.witness);
    const std::size_t m = l.size();
    Tensor3 mu(m * m * m, Expr(l.patch(), 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            GSec br = courant_bracket(l[i], l[j]);
            for (std::size_t k = 0; k < m; ++k)
                mu[(i * m + j) * m + k] = pairing(br, l[k]);
        }
    return mu;
}

std::string first_nonzero(const Tensor3& t, std::size_t m, const std::string& label) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) {
                const Expr& v = t[(i * m + j) * m + k];
                if (!v.is_zero())
                    return index_witness(label, {i, j, k}, v);
            }
    return {};
}

Report check_dirac(const Frame& l) {
    Report r = Report::ok("dirac", "bracket: Dorfman ([X,Y], L_X b - i_Y da)");
    Report lag = check_lagrangian(l);
    bool lagrangian = lag.pass;
    r.add(std::move(lag));
    if (!lagrangian) {
        r.add(Report::fail("integrable", "not evaluated: frame is not Lagrangian"));
        r.witness = r.parts.front().witness;
        return r;
    }
    std::string w = first_nonzero(courant_tensor(l), l.size(), "mu");
    r.add(w.empty() ? Report::ok("integrable") : Report::fail("integrable", w));
    return r;
}

bool in_span(const ExprMatrix& m, const std::vector<Expr>& v) {
    std::size_t base = m.cols() ? generic_rank(m) : 0;
    ExprMatrix ext = ExprMatrix::from_columns({v}, v.size());
    if (m.cols())
        ext = m.hcat(ext);
    return generic_rank(ext) == base;
}

bool same_span(const Frame& a, const Frame& b) {
    if (!same_patch(a.patch(), b.patch()))
        return false;
    std::size_t ra = a.size() ? generic_rank(a.matrix()) : 0;
    std::size_t rb = b.size() ? generic_rank(b.matrix()) : 0;
    if (ra != rb)
        return false;
    if (!a.size())
        return true;
    return generic_rank(a.matrix().hcat(b.matrix())) == ra;
}

} // namespace dirac
