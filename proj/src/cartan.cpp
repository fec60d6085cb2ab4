#include "dirac/cartan.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace dirac {

namespace {

void require_same(const PatchPtr& a, const PatchPtr& b, const char* what) {
    if (!same_patch(a, b))
        throw PatchMismatch(std::string(what) + ": operands live on different patches (" +
                            (a ? a->name() : "?") + " vs " + (b ? b->name() : "?") + ")");
}

Expr on(const PatchPtr& p, const Expr& e) { return e + Expr(p, 0); }

// Sorts idx in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(KForm::Index& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j])
                return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    return sign;
}

// All strictly increasing tuples of length k from {0..n-1}.
std::vector<KForm::Index> increasing_tuples(std::size_t n, std::size_t k) {
    std::vector<KForm::Index> out;
    if (k > n)
        return out;
    KForm::Index idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return out;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

Expr determinant(const std::vector<std::vector<Expr>>& m) {
    const std::size_t k = m.size();
    if (k == 0)
        return Expr(1);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    Expr det(0);
    do {
        KForm::Index tmp(perm.begin(), perm.end());
        int s = sort_sign(tmp);
        Expr t(s);
        for (std::size_t i = 0; i < k && !t.is_zero(); ++i)
            t *= m[i][perm[i]];
        det += t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

} // namespace

std::string render_linear(const std::vector<std::pair<Expr, std::string>>& terms) {
    std::string out;
    for (const auto& [coef, sym] : terms) {
        if (coef.is_zero())
            continue;
        bool neg = false;
        std::string body;
        std::string s = coef.to_string();
        if (coef.size() == 1) {
            if (s == "1") {
                body = sym;
            } else if (s == "-1") {
                neg = true;
                body = sym;
            } else if (s[0] == '-') {
                neg = true;
                body = s.substr(1) + "*" + sym;
            } else {
                body = s + "*" + sym;
            }
        } else {
            body = "(" + s + ")*" + sym;
        }
        if (out.empty())
            out = (neg ? "-" : "") + body;
        else
            out += (neg ? " - " : " + ") + body;
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- VField

VField::VField(PatchPtr patch, std::vector<Expr> comps) : patch_(std::move(patch)), comps_(std::move(comps)) {
    if (comps_.size() != patch_->dim())
        throw WrongShape("vector field on " + patch_->name() + " needs " + std::to_string(patch_->dim()) +
                         " components");
    for (auto& c : comps_)
        c = on(patch_, c);
}

VField VField::zero(const PatchPtr& patch) { return VField(patch, std::vector<Expr>(patch->dim(), Expr(0))); }

VField VField::coordinate(const PatchPtr& patch, std::size_t i) {
    VField v = zero(patch);
    v.comps_.at(i) = Expr(patch, 1);
    return v;
}

bool VField::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const Expr& e) { return e.is_zero(); });
}

Expr VField::apply(const Expr& f) const {
    Expr r(patch_, 0);
    for (std::size_t i = 0; i < comps_.size(); ++i)
        if (!comps_[i].is_zero())
            r += comps_[i] * on(patch_, f).diff(i);
    return r;
}

VField VField::operator+(const VField& o) const {
    require_same(patch_, o.patch_, "vector field sum");
    VField r = *this;
    for (std::size_t i = 0; i < comps_.size(); ++i)
        r.comps_[i] += o.comps_[i];
    return r;
}

VField VField::operator-(const VField& o) const { return *this + o.scaled(Expr(-1)); }

VField VField::scaled(const Expr& f) const {
    VField r = *this;
    for (auto& c : r.comps_)
        c *= f;
    return r;
}

VField VField::embed(const PatchPtr& target) const {
    VField r = zero(target);
    for (std::size_t i = 0; i < comps_.size(); ++i)
        r.comps_[target->require(patch_->coords()[i])] = comps_[i].embed(target);
    return r;
}

std::string VField::to_string() const {
    std::vector<std::pair<Expr, std::string>> t;
    for (std::size_t i = 0; i < comps_.size(); ++i)
        t.emplace_back(comps_[i], "@" + patch_->coords()[i]);
    return render_linear(t);
}

bool operator==(const VField& a, const VField& b) {
    if (!same_patch(a.patch(), b.patch()))
        return false;
    return (a - b).is_zero();
}

// ---------------------------------------------------------------- KForm

KForm::KForm(PatchPtr patch, std::size_t degree) : patch_(std::move(patch)), degree_(degree) {}

KForm KForm::function(const Expr& f) {
    if (!f.patch())
        throw PatchMismatch("0-form needs a patch");
    KForm w(f.patch(), 0);
    if (!f.is_zero())
        w.coeffs_.emplace(Index{}, f);
    return w;
}

KForm KForm::differential(const PatchPtr& patch, std::size_t i) {
    KForm w(patch, 1);
    w.set({i}, Expr(patch, 1));
    return w;
}

KForm KForm::one_form(const PatchPtr& patch, const std::vector<Expr>& coeffs) {
    if (coeffs.size() != patch->dim())
        throw WrongShape("one-form on " + patch->name() + " needs " + std::to_string(patch->dim()) +
                         " coefficients");
    KForm w(patch, 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        w.set({i}, coeffs[i]);
    return w;
}

Expr KForm::at(const Index& idx) const {
    Index s = idx;
    int sign = sort_sign(s);
    if (sign == 0)
        return Expr(patch_, 0);
    auto it = coeffs_.find(s);
    if (it == coeffs_.end())
        return Expr(patch_, 0);
    return sign > 0 ? it->second : -it->second;
}

void KForm::set(const Index& idx, const Expr& value) {
    if (idx.size() != degree_)
        throw WrongShape("form index length does not match degree");
    Index s = idx;
    int sign = sort_sign(s);
    if (sign == 0) {
        if (!value.is_zero())
            throw WrongShape("nonzero coefficient on a repeated index");
        return;
    }
    for (auto i : s)
        if (i >= patch_->dim())
            throw WrongShape("form index out of range");
    Expr v = on(patch_, sign > 0 ? value : -value);
    if (v.is_zero())
        coeffs_.erase(s);
    else
        coeffs_[s] = v;
}

void KForm::add(const Index& idx, const Expr& value) {
    if (value.is_zero())
        return;
    Index s = idx;
    int sign = sort_sign(s);
    if (sign == 0)
        return;
    Expr cur = at(s);
    set(s, cur + (sign > 0 ? value : -value));
}

std::vector<Expr> KForm::components() const {
    if (degree_ != 1)
        throw WrongShape("components() needs a one-form");
    std::vector<Expr> c(patch_->dim(), Expr(patch_, 0));
    for (const auto& [idx, e] : coeffs_)
        c[idx[0]] = e;
    return c;
}

Expr KForm::value() const {
    if (degree_ != 0)
        throw WrongShape("value() needs a 0-form");
    return coeffs_.empty() ? Expr(patch_, 0) : coeffs_.begin()->second;
}

Expr KForm::evaluate(const std::vector<VField>& vectors) const {
    if (vectors.size() != degree_)
        throw WrongShape("form of degree " + std::to_string(degree_) + " evaluated on " +
                         std::to_string(vectors.size()) + " vectors");
    for (const auto& v : vectors)
        require_same(patch_, v.patch(), "form evaluation");
    Expr r(patch_, 0);
    for (const auto& [idx, w] : coeffs_) {
        std::vector<std::vector<Expr>> m(degree_, std::vector<Expr>(degree_));
        for (std::size_t a = 0; a < degree_; ++a)
            for (std::size_t b = 0; b < degree_; ++b)
                m[a][b] = vectors[a][idx[b]];
        r += w * determinant(m);
    }
    return r;
}

void KForm::check_compatible(const KForm& o) const {
    require_same(patch_, o.patch_, "form arithmetic");
    if (degree_ != o.degree_)
        throw WrongShape("form arithmetic: degrees differ");
}

KForm KForm::operator+(const KForm& o) const {
    check_compatible(o);
    KForm r = *this;
    for (const auto& [idx, e] : o.coeffs_)
        r.add(idx, e);
    return r;
}

KForm KForm::operator-(const KForm& o) const { return *this + o.scaled(Expr(-1)); }

KForm KForm::scaled(const Expr& f) const {
    KForm r(patch_, degree_);
    for (const auto& [idx, e] : coeffs_)
        r.set(idx, e * f);
    return r;
}

KForm KForm::embed(const PatchPtr& target) const {
    KForm r(target, degree_);
    for (const auto& [idx, e] : coeffs_) {
        Index t;
        for (auto i : idx)
            t.push_back(target->require(patch_->coords()[i]));
        r.add(t, e.embed(target));
    }
    return r;
}

std::string KForm::to_string() const {
    if (degree_ == 0)
        return value().to_string();
    std::vector<std::pair<Expr, std::string>> t;
    // Highest index tuples last so dx^dy precedes dx^dz.
    for (const auto& [idx, e] : coeffs_) {
        std::string sym;
        for (auto i : idx)
            sym += (sym.empty() ? "d" : "^d") + patch_->coords()[i];
        t.emplace_back(e, sym);
    }
    return render_linear(t);
}

bool operator==(const KForm& a, const KForm& b) {
    if (!same_patch(a.patch(), b.patch()) || a.degree() != b.degree())
        return false;
    return (a - b).is_zero();
}

KForm wedge(const KForm& a, const KForm& b) {
    require_same(a.patch(), b.patch(), "wedge");
    KForm r(a.patch(), a.degree() + b.degree());
    for (const auto& [i, f] : a.coeffs())
        for (const auto& [j, g] : b.coeffs()) {
            KForm::Index ij = i;
            ij.insert(ij.end(), j.begin(), j.end());
            r.add(ij, f * g);
        }
    return r;
}

// ---------------------------------------------------------------- Bivector

Bivector::Bivector(PatchPtr patch) : patch_(std::move(patch)) {
    m_.assign(dim() * dim(), Expr(patch_, 0));
}

void Bivector::set(std::size_t i, std::size_t j, const Expr& v) {
    if (i == j) {
        if (!v.is_zero())
            throw WrongShape("bivector diagonal must vanish");
        return;
    }
    m_.at(i * dim() + j) = on(patch_, v);
    m_.at(j * dim() + i) = on(patch_, -v);
}

void Bivector::add(std::size_t i, std::size_t j, const Expr& v) {
    if (i == j)
        return;
    set(i, j, at(i, j) + v);
}

bool Bivector::is_zero() const {
    return std::all_of(m_.begin(), m_.end(), [](const Expr& e) { return e.is_zero(); });
}

Expr Bivector::pair(const KForm& a, const KForm& b) const {
    auto ac = a.components();
    auto bc = b.components();
    Expr r(patch_, 0);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            if (!at(i, j).is_zero())
                r += at(i, j) * ac[i] * bc[j];
    return r;
}

Bivector Bivector::operator+(const Bivector& o) const {
    require_same(patch_, o.patch_, "bivector sum");
    Bivector r = *this;
    for (std::size_t k = 0; k < m_.size(); ++k)
        r.m_[k] += o.m_[k];
    return r;
}

Bivector Bivector::scaled(const Expr& f) const {
    Bivector r = *this;
    for (auto& e : r.m_)
        e *= f;
    return r;
}

ExprMatrix Bivector::matrix() const {
    ExprMatrix m(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            m.at(i, j) = at(i, j);
    return m;
}

Bivector Bivector::from_matrix(const PatchPtr& patch, const ExprMatrix& m) {
    Bivector b(patch);
    for (std::size_t i = 0; i < b.dim(); ++i) {
        if (!m.at(i, i).is_zero())
            throw WrongShape("bivector matrix has nonzero diagonal");
        for (std::size_t j = i + 1; j < b.dim(); ++j) {
            if (!(m.at(i, j) + m.at(j, i)).is_zero())
                throw WrongShape("bivector matrix is not antisymmetric");
            b.set(i, j, m.at(i, j));
        }
    }
    return b;
}

Bivector Bivector::embed(const PatchPtr& target) const {
    Bivector r(target);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j)
            r.set(target->require(patch_->coords()[i]), target->require(patch_->coords()[j]),
                  at(i, j).embed(target));
    return r;
}

std::string Bivector::to_string() const {
    std::vector<std::pair<Expr, std::string>> t;
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j)
            t.emplace_back(at(i, j), "@" + patch_->coords()[i] + "^@" + patch_->coords()[j]);
    return render_linear(t);
}

bool operator==(const Bivector& a, const Bivector& b) {
    if (!same_patch(a.patch(), b.patch()))
        return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (a.at(i, j) != b.at(i, j))
                return false;
    return true;
}

Bivector wedge(const VField& x, const VField& y) {
    require_same(x.patch(), y.patch(), "wedge of vector fields");
    Bivector b(x.patch());
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = i + 1; j < b.dim(); ++j)
            b.set(i, j, x[i] * y[j] - x[j] * y[i]);
    return b;
}

// ---------------------------------------------------------------- PolyMap

PolyMap::PolyMap(PatchPtr source, PatchPtr target, std::vector<Expr> comps)
    : source_(std::move(source)), target_(std::move(target)), comps_(std::move(comps)) {
    if (comps_.size() != target_->dim())
        throw WrongShape("map to " + target_->name() + " needs " + std::to_string(target_->dim()) +
                         " components");
    for (auto& c : comps_)
        c = on(source_, c);
}

PolyMap PolyMap::identity(const PatchPtr& patch) {
    std::vector<Expr> c;
    for (std::size_t i = 0; i < patch->dim(); ++i)
        c.push_back(Expr::var(patch, i));
    return PolyMap(patch, patch, c);
}

Expr PolyMap::pull(const Expr& e) const {
    if (e.patch() && !same_patch(e.patch(), target_))
        throw PatchMismatch("pull: function lives on " + e.patch()->name() + ", map targets " +
                            target_->name());
    return on(source_, e.substitute(comps_));
}

PolyMap PolyMap::after(const PolyMap& inner) const {
    require_same(inner.target_, source_, "map composition");
    std::vector<Expr> c;
    for (const auto& e : comps_)
        c.push_back(inner.pull(e));
    return PolyMap(inner.source_, target_, c);
}

ExprMatrix PolyMap::jacobian() const {
    ExprMatrix j(target_->dim(), source_->dim());
    for (std::size_t i = 0; i < target_->dim(); ++i)
        for (std::size_t k = 0; k < source_->dim(); ++k)
            j.at(i, k) = comps_[i].diff(k);
    return j;
}

bool PolyMap::is_identity() const {
    if (!same_patch(source_, target_))
        return false;
    for (std::size_t i = 0; i < comps_.size(); ++i)
        if (comps_[i] != Expr::var(source_, i))
            return false;
    return true;
}

std::string PolyMap::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < source_->dim(); ++i)
        s += (i ? ", " : "") + source_->coords()[i];
    s += ") -> (";
    for (std::size_t i = 0; i < comps_.size(); ++i)
        s += (i ? ", " : "") + comps_[i].to_string();
    return s + ")";
}

// ---------------------------------------------------------------- operations

VField lie_bracket(const VField& x, const VField& y) {
    require_same(x.patch(), y.patch(), "lie_bracket");
    std::vector<Expr> c;
    for (std::size_t i = 0; i < x.dim(); ++i)
        c.push_back(x.apply(y[i]) - y.apply(x[i]));
    return VField(x.patch(), c);
}

namespace {

KForm d_any(const KForm& w) {
    KForm r(w.patch(), w.degree() + 1);
    for (const auto& [idx, f] : w.coeffs())
        for (std::size_t j = 0; j < w.patch()->dim(); ++j) {
            KForm::Index t{j};
            t.insert(t.end(), idx.begin(), idx.end());
            r.add(t, f.diff(j));
        }
    return r;
}

} // namespace

KForm exterior_derivative(const KForm& w) {
    if (w.degree() > 2)
        throw DegreeTooHigh("exterior derivative is provided for forms of degree at most 2");
    return d_any(w);
}

KForm interior_product(const VField& x, const KForm& w) {
    require_same(x.patch(), w.patch(), "interior_product");
    if (w.degree() == 0)
        throw DegreeZero("interior product of a 0-form");
    KForm r(w.patch(), w.degree() - 1);
    for (const auto& [idx, f] : w.coeffs())
        for (std::size_t p = 0; p < idx.size(); ++p) {
            if (x[idx[p]].is_zero())
                continue;
            KForm::Index rest = idx;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
            Expr t = x[idx[p]] * f;
            r.add(rest, (p % 2) ? -t : t);
        }
    return r;
}

KForm lie_derivative(const VField& x, const KForm& w) {
    require_same(x.patch(), w.patch(), "lie_derivative");
    if (w.degree() == 0)
        return KForm::function(x.apply(w.value()));
    if (w.degree() >= 3)
        return lie_derivative_coordinate(x, w);
    return interior_product(x, d_any(w)) + d_any(interior_product(x, w));
}

KForm lie_derivative_coordinate(const VField& x, const KForm& w) {
    require_same(x.patch(), w.patch(), "lie_derivative");
    const std::size_t n = w.patch()->dim();
    KForm r(w.patch(), w.degree());
    for (const auto& idx : increasing_tuples(n, w.degree())) {
        Expr v = x.apply(w.at(idx));
        for (std::size_t p = 0; p < idx.size(); ++p)
            for (std::size_t j = 0; j < n; ++j) {
                Expr dx = x[j].diff(idx[p]);
                if (dx.is_zero())
                    continue;
                KForm::Index moved = idx;
                moved[p] = j;
                v += w.at(moved) * dx;
            }
        r.set(idx, v);
    }
    return r;
}

VField sharp_bivector(const Bivector& p, const KForm& a) {
    require_same(p.patch(), a.patch(), "sharp_bivector");
    auto ac = a.components();
    std::vector<Expr> c(p.dim(), Expr(0));
    for (std::size_t i = 0; i < p.dim(); ++i)
        for (std::size_t j = 0; j < p.dim(); ++j)
            if (!p.at(j, i).is_zero())
                c[i] += p.at(j, i) * ac[j];
    return VField(p.patch(), c);
}

Tensor3 schouten_jacobiator(const Bivector& p) {
    const std::size_t n = p.dim();
    // {x^i, g} = sum_b pi^{ib} d_b g
    auto bracket_with_coord = [&](std::size_t i, const Expr& g) {
        Expr r(p.patch(), 0);
        for (std::size_t b = 0; b < n; ++b)
            if (!p.at(i, b).is_zero())
                r += p.at(i, b) * g.diff(b);
        return r;
    };
    Tensor3 jac(n * n * n, Expr(p.patch(), 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                jac[(i * n + j) * n + k] = bracket_with_coord(i, p.at(j, k)) +
                                           bracket_with_coord(j, p.at(k, i)) +
                                           bracket_with_coord(k, p.at(i, j));
    return jac;
}

KForm pullback_form(const PolyMap& f, const KForm& w) {
    require_same(f.target(), w.patch(), "pullback_form");
    const auto& src = f.source();
    if (w.degree() == 0)
        return KForm::function(f.pull(w.value()));
    std::vector<KForm> dy;
    for (std::size_t i = 0; i < f.target()->dim(); ++i) {
        std::vector<Expr> c;
        for (std::size_t j = 0; j < src->dim(); ++j)
            c.push_back(f[i].diff(j));
        dy.push_back(KForm::one_form(src, c));
    }
    KForm r(src, w.degree());
    for (const auto& [idx, e] : w.coeffs()) {
        KForm t = KForm::function(on(src, f.pull(e)));
        for (auto i : idx)
            t = wedge(t, dy[i]);
        r = r + t;
    }
    return r;
}

ExprMatrix congruence(const ExprMatrix& j, const ExprMatrix& p) { return j * p * j.transpose(); }

Bivector pushforward_bivector(const PolyMap& f, const PolyMap& f_inverse, const Bivector& p) {
    require_same(f.source(), p.patch(), "pushforward_bivector");
    if (!same_patch(f_inverse.source(), f.target()) || !same_patch(f_inverse.target(), f.source()) ||
        !f.after(f_inverse).is_identity() || !f_inverse.after(f).is_identity())
        throw NotInverse("supplied map is not a two-sided polynomial inverse");
    ExprMatrix m = congruence(f.jacobian(), p.matrix());
    Bivector r(f.target());
    for (std::size_t i = 0; i < r.dim(); ++i)
        for (std::size_t k = i + 1; k < r.dim(); ++k)
            r.set(i, k, f_inverse.pull(m.at(i, k)));
    return r;
}

} // namespace dirac
