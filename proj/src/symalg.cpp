#include "dirac/symalg.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace dirac {

Patch::Patch(std::string name, std::vector<std::string> coords)
    : name_(std::move(name)), coords_(std::move(coords)) {
    std::unordered_set<std::string> seen;
    for (const auto& c : coords_) {
        if (c.empty())
            throw WrongShape("patch " + name_ + ": empty coordinate name");
        if (!seen.insert(c).second)
            throw WrongShape("patch " + name_ + ": duplicate coordinate " + c);
    }
}

std::optional<std::size_t> Patch::index_of(std::string_view coord) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] == coord)
            return i;
    return std::nullopt;
}

std::size_t Patch::require(std::string_view coord) const {
    if (auto i = index_of(coord))
        return *i;
    throw UnknownSymbol("unknown coordinate '" + std::string(coord) + "' on patch " + name_);
}

PatchPtr make_patch(std::string name, std::vector<std::string> coords) {
    return std::make_shared<const Patch>(std::move(name), std::move(coords));
}

PatchPtr point_patch() {
    static const PatchPtr pt = make_patch("pt", {});
    return pt;
}

bool same_patch(const PatchPtr& a, const PatchPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return a->name() == b->name() && a->coords() == b->coords();
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db)
        return da < db;
    // Equal degree: the monomial with the larger exponent at the first
    // differing coordinate is the larger one.
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        if (a[i] != b[i])
            return a[i] < b[i];
    return a.size() < b.size();
}

// ---------------------------------------------------------------- Expr

Expr::Expr(long c) : Expr(Rational(c)) {}

Expr::Expr(Rational c) {
    c.canonicalize();
    if (c != 0)
        terms_.emplace(Monomial{}, std::move(c));
}

Expr::Expr(PatchPtr patch, Rational c) : patch_(std::move(patch)) {
    c.canonicalize();
    if (c != 0)
        terms_.emplace(unit_monomial(), std::move(c));
}

Expr Expr::var(const PatchPtr& patch, std::size_t index) {
    if (!patch || index >= patch->dim())
        throw UnknownSymbol("coordinate index out of range");
    Expr e;
    e.patch_ = patch;
    Monomial m(patch->dim(), 0);
    m[index] = 1;
    e.terms_.emplace(std::move(m), Rational(1));
    return e;
}

Expr Expr::var(const PatchPtr& patch, std::string_view name) {
    return var(patch, patch->require(name));
}

Expr Expr::from_terms(PatchPtr patch, Terms terms) {
    Expr e;
    e.patch_ = std::move(patch);
    for (auto& [m, c] : terms)
        if (c != 0)
            e.terms_.emplace(m, c);
    return e;
}

Monomial Expr::unit_monomial() const {
    return Monomial(patch_ ? patch_->dim() : 0, 0);
}

bool Expr::is_constant() const {
    if (terms_.empty())
        return true;
    if (terms_.size() > 1)
        return false;
    const auto& m = terms_.begin()->first;
    return std::all_of(m.begin(), m.end(), [](unsigned e) { return e == 0; });
}

Rational Expr::constant_value() const {
    if (!is_constant())
        throw std::logic_error("constant_value of non-constant polynomial " + to_string());
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

int Expr::degree() const {
    if (terms_.empty())
        return -1;
    const auto& m = terms_.rbegin()->first;
    return static_cast<int>(std::accumulate(m.begin(), m.end(), 0u));
}

void Expr::adopt(const Expr& o) {
    if (!o.patch_ || same_patch(patch_, o.patch_))
        return;
    if (patch_)
        throw PatchMismatch("patch mismatch: " + patch_->name() + " vs " + o.patch_->name());
    // Bare constant joining a patch.
    patch_ = o.patch_;
    if (!terms_.empty()) {
        Rational c = terms_.begin()->second;
        terms_.clear();
        terms_.emplace(unit_monomial(), c);
    }
}

Expr Expr::operator-() const {
    Expr r = *this;
    for (auto& [m, c] : r.terms_)
        c = -c;
    return r;
}

Expr& Expr::operator+=(const Expr& o) {
    adopt(o);
    const bool bare = !o.patch_;
    for (const auto& [m, c] : o.terms_) {
        const Monomial& key = bare ? unit_monomial() : m;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr& Expr::operator*=(const Expr& o) {
    adopt(o);
    if (terms_.empty())
        return *this;
    if (o.terms_.empty()) {
        terms_.clear();
        return *this;
    }
    if (!o.patch_ || o.is_constant()) {
        Rational q = o.terms_.begin()->second;
        for (auto& [m, c] : terms_)
            c *= q;
        return *this;
    }
    if (!patch_ || is_constant()) {
        Rational q = terms_.begin()->second;
        Expr r = o;
        for (auto& [m, c] : r.terms_)
            c *= q;
        *this = std::move(r);
        return *this;
    }
    Terms out;
    const std::size_t n = patch_->dim();
    Monomial m(n);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            for (std::size_t i = 0; i < n; ++i)
                m[i] = ma[i] + mb[i];
            auto it = out.find(m);
            if (it == out.end()) {
                out.emplace(m, ca * cb);
            } else {
                it->second += ca * cb;
            }
        }
    }
    terms_.clear();
    for (auto& [k, c] : out)
        if (c != 0)
            terms_.emplace(k, c);
    return *this;
}

Expr Expr::pow(unsigned n) const {
    Expr result(1);
    if (patch_)
        result = Expr(patch_, 1);
    Expr base = *this;
    while (n) {
        if (n & 1u)
            result *= base;
        n >>= 1u;
        if (n)
            base *= base;
    }
    return result;
}

Expr Expr::scaled(const Rational& q) const {
    if (q == 0) {
        Expr z;
        z.patch_ = patch_;
        return z;
    }
    Expr r = *this;
    for (auto& [m, c] : r.terms_)
        c *= q;
    return r;
}

Expr Expr::diff(std::size_t index) const {
    Expr r;
    r.patch_ = patch_;
    if (!patch_)
        return r;
    if (index >= patch_->dim())
        throw UnknownSymbol("coordinate index out of range");
    for (const auto& [m, c] : terms_) {
        if (m[index] == 0)
            continue;
        Monomial d = m;
        --d[index];
        r.terms_.emplace(std::move(d), c * m[index]);
    }
    return r;
}

Rational Expr::eval(const std::vector<Rational>& point) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (unsigned k = 0; k < m[i]; ++k)
                t *= point.at(i);
        }
        sum += t;
    }
    return sum;
}

Expr Expr::substitute(const std::vector<Expr>& images) const {
    if (!patch_)
        return *this;
    if (images.size() != patch_->dim())
        throw WrongShape("substitute: expected " + std::to_string(patch_->dim()) + " images, got " +
                         std::to_string(images.size()));
    PatchPtr target;
    for (const auto& e : images)
        if (e.patch())
            target = e.patch();
    std::vector<std::vector<Expr>> powers(images.size());
    auto power = [&](std::size_t i, unsigned k) -> const Expr& {
        auto& p = powers[i];
        if (p.empty())
            p.push_back(target ? Expr(target, 1) : Expr(1));
        while (p.size() <= k)
            p.push_back(p.back() * images[i]);
        return p[k];
    };
    Expr r = target ? Expr(target, 0) : Expr(0);
    for (const auto& [m, c] : terms_) {
        Expr t = target ? Expr(target, c) : Expr(c);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i])
                t *= power(i, m[i]);
        r += t;
    }
    return r;
}

Expr Expr::embed(const PatchPtr& target) const {
    if (!patch_ || same_patch(patch_, target)) {
        Expr r = *this;
        r.adopt(Expr(target, 0));
        return r;
    }
    std::vector<std::size_t> map(patch_->dim());
    for (std::size_t i = 0; i < map.size(); ++i)
        map[i] = target->require(patch_->coords()[i]);
    Expr r;
    r.patch_ = target;
    for (const auto& [m, c] : terms_) {
        Monomial t(target->dim(), 0);
        for (std::size_t i = 0; i < m.size(); ++i)
            t[map[i]] += m[i];
        r.terms_.emplace(std::move(t), c);
    }
    return r;
}

std::optional<Expr> Expr::divide_exact(const Expr& d) const {
    if (d.is_zero())
        throw std::domain_error("division by the zero polynomial");
    if (d.is_constant()) {
        Rational q = 1 / d.constant_value();
        Expr r = scaled(q);
        r.adopt(d);
        return r;
    }
    Expr rem = *this;
    rem.adopt(d);
    Expr quo(rem.patch_, 0);
    const auto& [dm, dc] = *d.terms_.rbegin();
    while (!rem.is_zero()) {
        const auto& [rm, rc] = *rem.terms_.rbegin();
        Monomial q(rm.size());
        for (std::size_t i = 0; i < rm.size(); ++i) {
            if (rm[i] < dm[i])
                return std::nullopt;
            q[i] = rm[i] - dm[i];
        }
        Expr t;
        t.patch_ = rem.patch_;
        t.terms_.emplace(std::move(q), rc / dc);
        quo += t;
        rem -= t * d;
    }
    return quo;
}

namespace {

std::string monomial_string(const Monomial& m, const PatchPtr& p) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i])
            continue;
        if (!s.empty())
            s += '*';
        s += p->coords()[i];
        if (m[i] > 1)
            s += '^' + std::to_string(m[i]);
    }
    return s;
}

} // namespace

std::string Expr::to_string() const {
    if (terms_.empty())
        return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        const bool neg = c < 0;
        Rational a = neg ? Rational(-c) : c;
        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        first = false;
        std::string mono = patch_ ? monomial_string(m, patch_) : std::string();
        if (mono.empty()) {
            out += a.get_str();
        } else if (a == 1) {
            out += mono;
        } else {
            out += a.get_str() + "*" + mono;
        }
    }
    return out;
}

bool operator==(const Expr& a, const Expr& b) { return (a - b).is_zero(); }

Expr operator+(Expr a, const Expr& b) { return a += b; }
Expr operator-(Expr a, const Expr& b) { return a -= b; }
Expr operator*(Expr a, const Expr& b) { return a *= b; }

Expr differentiate(const Expr& e, std::string_view coord) {
    if (!e.patch())
        return Expr(0);
    return e.diff(e.patch()->require(coord));
}

// ---------------------------------------------------------------- parser

namespace {

class ExprParser {
public:
    ExprParser(std::string_view src, const PatchPtr& patch) : src_(src), patch_(patch) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != src_.size())
            fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, 0, pos_ + 1); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        skip_ws();
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        Expr e = term();
        if (neg)
            e = -e;
        for (;;) {
            if (eat('+'))
                e += term();
            else if (eat('-'))
                e -= term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = factor();
        while (eat('*'))
            e *= factor();
        return e;
    }

    Expr factor() {
        Expr b = base();
        if (eat('^')) {
            skip_ws();
            std::string digits = integer();
            if (digits.empty())
                fail("expected a non-negative integer exponent");
            if (digits.size() > 6)
                fail("exponent too large");
            b = b.pow(static_cast<unsigned>(std::stoul(digits)));
        }
        return b;
    }

    std::string integer() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        return std::string(src_.substr(start, pos_ - start));
    }

    Expr base() {
        skip_ws();
        if (pos_ >= src_.size())
            fail("unexpected end of input");
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = integer();
            std::string den = "1";
            std::size_t save = pos_;
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == '/') {
                ++pos_;
                skip_ws();
                den = integer();
                if (den.empty())
                    fail("expected an integer denominator");
            } else {
                pos_ = save;
            }
            mpz_class zn(num), zd(den);
            if (zd == 0)
                fail("zero denominator");
            Rational q(zn, zd);
            q.canonicalize();
            return Expr(patch_, q);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            while (pos_ < src_.size() && src_[pos_] == '\'')
                ++pos_;
            std::string name(src_.substr(start, pos_ - start));
            auto idx = patch_->index_of(name);
            if (!idx)
                throw UnknownSymbol("unknown symbol '" + name + "' on patch " + patch_->name());
            return Expr::var(patch_, *idx);
        }
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!eat(')'))
                fail("expected ')'");
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view src_;
    PatchPtr patch_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse_expr(std::string_view src, const PatchPtr& patch) { return ExprParser(src, patch).parse(); }

// ---------------------------------------------------------------- matrices

ExprMatrix::ExprMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Expr(0)) {}

ExprMatrix::ExprMatrix(const std::vector<std::vector<Expr>>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows[0].size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw WrongShape("ragged matrix rows");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

std::vector<Expr> ExprMatrix::column(std::size_t j) const {
    std::vector<Expr> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c.push_back(at(i, j));
    return c;
}

std::vector<Expr> ExprMatrix::row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

ExprMatrix ExprMatrix::transpose() const {
    ExprMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t.at(j, i) = at(i, j);
    return t;
}

ExprMatrix ExprMatrix::hcat(const ExprMatrix& o) const {
    if (rows_ != o.rows_ && cols_ && o.cols_)
        throw WrongShape("hcat: row count mismatch");
    std::size_t rows = cols_ ? rows_ : o.rows_;
    ExprMatrix r(rows, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols_; ++j)
            r.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < o.cols_; ++j)
            r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
}

ExprMatrix ExprMatrix::from_columns(const std::vector<std::vector<Expr>>& cols, std::size_t rows) {
    ExprMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows)
            throw WrongShape("from_columns: column length mismatch");
        for (std::size_t i = 0; i < rows; ++i)
            m.at(i, j) = cols[j][i];
    }
    return m;
}

std::vector<Expr> operator*(const ExprMatrix& m, const std::vector<Expr>& v) {
    if (v.size() != m.cols())
        throw WrongShape("matrix-vector size mismatch");
    std::vector<Expr> r(m.rows(), Expr(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_zero() && !v[j].is_zero())
                r[i] += m.at(i, j) * v[j];
    return r;
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
    if (a.cols() != b.rows())
        throw WrongShape("matrix product size mismatch");
    ExprMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a.at(i, k).is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (!b.at(k, j).is_zero())
                    r.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return r;
}

// ---------------------------------------------------------------- elimination

namespace {

Expr exact_quotient(const Expr& num, const Expr& den) {
    if (den.is_constant() && den.constant_value() == 1)
        return num;
    auto q = num.divide_exact(den);
    if (!q)
        throw std::logic_error("fraction-free elimination: inexact division");
    return *q;
}

// Cheapest nonzero pivot: fewest terms, then lowest degree.
std::optional<std::size_t> choose_pivot(const std::vector<std::vector<Expr>>& a, std::size_t from,
                                        std::size_t col) {
    std::optional<std::size_t> best;
    for (std::size_t i = from; i < a.size(); ++i) {
        const Expr& e = a[i][col];
        if (e.is_zero())
            continue;
        if (!best) {
            best = i;
            continue;
        }
        const Expr& b = a[*best][col];
        if (e.size() < b.size() || (e.size() == b.size() && e.degree() < b.degree()))
            best = i;
    }
    return best;
}

Reduced eliminate(const ExprMatrix& m, bool jordan) {
    Reduced out;
    out.rows.resize(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        out.rows[i] = m.row(i);
    auto& a = out.rows;
    Expr prev(1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        auto p = choose_pivot(a, r, c);
        if (!p)
            continue;
        std::swap(a[r], a[*p]);
        const Expr piv = a[r][c];
        for (std::size_t i = jordan ? 0 : r + 1; i < a.size(); ++i) {
            if (i == r)
                continue;
            const Expr f = a[i][c];
            for (std::size_t j = jordan ? 0 : c + 1; j < m.cols(); ++j) {
                if (j == c)
                    continue;
                Expr v = piv * a[i][j];
                if (!f.is_zero() && !a[r][j].is_zero())
                    v -= f * a[r][j];
                a[i][j] = exact_quotient(v, prev);
            }
            a[i][c] = Expr(0);
        }
        prev = piv;
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.pivot = prev;
    return out;
}

} // namespace

Reduced reduce_fraction_free(const ExprMatrix& m) { return eliminate(m, true); }

std::size_t generic_rank(const ExprMatrix& m) { return eliminate(m, false).pivot_cols.size(); }

std::vector<Expr> Solution::polynomial() const {
    std::vector<Expr> out;
    out.reserve(num.size());
    for (const auto& e : num) {
        auto q = e.divide_exact(den);
        if (!q)
            throw NonPolynomial("solution entry " + e.to_string() + " is not divisible by " +
                                den.to_string());
        out.push_back(std::move(*q));
    }
    return out;
}

namespace {

// Divides a column by a common factor when the division is exact everywhere,
// and otherwise makes the denominator monic in its leading coefficient.
void normalize(std::vector<Expr>& num, Expr& den) {
    std::vector<Expr> q;
    q.reserve(num.size());
    for (const auto& e : num) {
        auto d = e.divide_exact(den);
        if (!d)
            break;
        q.push_back(std::move(*d));
    }
    if (q.size() == num.size()) {
        num = std::move(q);
        den = Expr(1);
        return;
    }
    Rational lc = den.terms().rbegin()->second;
    if (lc != 1) {
        Rational inv = 1 / lc;
        for (auto& e : num)
            e = e.scaled(inv);
        den = den.scaled(inv);
    }
}

} // namespace

Solution solve_linear(const ExprMatrix& a, const std::vector<Expr>& b) {
    if (b.size() != a.rows())
        throw WrongShape("solve_linear: right-hand side has " + std::to_string(b.size()) +
                         " entries for " + std::to_string(a.rows()) + " rows");
    const std::size_t n = a.cols();
    ExprMatrix aug = a.hcat(ExprMatrix::from_columns({b}, b.size()));
    Reduced red = reduce_fraction_free(aug);
    Solution s;
    s.num.assign(n, Expr(0));
    for (std::size_t k = 0; k < red.pivot_cols.size(); ++k) {
        std::size_t c = red.pivot_cols[k];
        if (c == n)
            throw Inconsistent("linear system has no generic solution");
        s.num[c] = red.rows[k][n];
    }
    s.den = red.pivot;
    normalize(s.num, s.den);
    return s;
}

std::vector<std::vector<Expr>> kernel_basis(const ExprMatrix& m) {
    Reduced red = reduce_fraction_free(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : red.pivot_cols)
        is_pivot[c] = true;
    std::vector<std::vector<Expr>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        std::vector<Expr> v(m.cols(), Expr(0));
        v[f] = red.pivot;
        for (std::size_t k = 0; k < red.pivot_cols.size(); ++k)
            v[red.pivot_cols[k]] = -red.rows[k][f];
        Expr den = red.pivot;
        normalize(v, den);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace dirac
