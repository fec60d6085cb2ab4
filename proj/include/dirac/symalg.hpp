#pragma once

#include "dirac/errors.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirac {

using Rational = mpq_class;

// A named, ordered coordinate system. A patch with no coordinates stands for
// a point (the base of a group viewed as a groupoid).
class Patch {
public:
    Patch(std::string name, std::vector<std::string> coords);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return coords_.size(); }

    std::optional<std::size_t> index_of(std::string_view coord) const;
    // Throws UnknownSymbol.
    std::size_t require(std::string_view coord) const;

private:
    std::string name_;
    std::vector<std::string> coords_;
};

using PatchPtr = std::shared_ptr<const Patch>;

PatchPtr make_patch(std::string name, std::vector<std::string> coords);
PatchPtr point_patch();
bool same_patch(const PatchPtr& a, const PatchPtr& b);

// Graded lexicographic order: higher total degree first, ties broken by the
// exponent of the lowest-indexed coordinate.
using Monomial = std::vector<unsigned>;
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

// Polynomial with exact rational coefficients. An Expr without a patch is a
// bare constant and adopts the patch of whatever it is combined with.
class Expr {
public:
    using Terms = std::map<Monomial, Rational, GrlexLess>;

    Expr() = default;
    Expr(long c); // NOLINT(google-explicit-constructor)
    explicit Expr(Rational c);
    Expr(PatchPtr patch, Rational c);

    static Expr var(const PatchPtr& patch, std::size_t index);
    static Expr var(const PatchPtr& patch, std::string_view name);
    static Expr from_terms(PatchPtr patch, Terms terms);

    const PatchPtr& patch() const noexcept { return patch_; }
    const Terms& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const;
    // Value of a constant polynomial; throws std::logic_error otherwise.
    Rational constant_value() const;
    int degree() const; // -1 for zero
    std::size_t size() const noexcept { return terms_.size(); }

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o);
    Expr pow(unsigned n) const;
    Expr scaled(const Rational& q) const;

    Expr diff(std::size_t index) const;
    Rational eval(const std::vector<Rational>& point) const;
    // Replaces coordinate i by images[i]; the result lives on the images' patch.
    Expr substitute(const std::vector<Expr>& images) const;
    // Re-expresses the polynomial on another patch by coordinate name.
    Expr embed(const PatchPtr& target) const;
    // Exact quotient if d divides this polynomial, nullopt otherwise.
    std::optional<Expr> divide_exact(const Expr& d) const;

    std::string to_string() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    void adopt(const Expr& o);
    Monomial unit_monomial() const;

    PatchPtr patch_;
    Terms terms_;
};

Expr operator+(Expr a, const Expr& b);
Expr operator-(Expr a, const Expr& b);
Expr operator*(Expr a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

Expr parse_expr(std::string_view src, const PatchPtr& patch);
Expr differentiate(const Expr& e, std::string_view coord);
inline bool is_zero(const Expr& e) { return e.is_zero(); }

// Rectangular matrix of polynomials on one patch.
class ExprMatrix {
public:
    ExprMatrix() = default;
    ExprMatrix(std::size_t rows, std::size_t cols);
    explicit ExprMatrix(const std::vector<std::vector<Expr>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Expr& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Expr& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<Expr> column(std::size_t j) const;
    std::vector<Expr> row(std::size_t i) const;
    ExprMatrix transpose() const;
    // Appends columns of o to the right.
    ExprMatrix hcat(const ExprMatrix& o) const;
    static ExprMatrix from_columns(const std::vector<std::vector<Expr>>& cols, std::size_t rows);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Expr> data_;
};

std::vector<Expr> operator*(const ExprMatrix& m, const std::vector<Expr>& v);
ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);

// Element of the fraction field, stored as a column of numerators over one
// common denominator.
struct Solution {
    std::vector<Expr> num;
    Expr den;
    // Entries as polynomials when den divides all of them; throws NonPolynomial.
    std::vector<Expr> polynomial() const;
};

std::size_t generic_rank(const ExprMatrix& m);
// Throws Inconsistent when no solution exists at a generic point. Free
// unknowns are set to zero.
Solution solve_linear(const ExprMatrix& a, const std::vector<Expr>& b);
// Polynomial basis of the kernel over the fraction field.
std::vector<std::vector<Expr>> kernel_basis(const ExprMatrix& m);

// Fraction-free Gauss-Jordan reduction: every pivot row ends with the same
// pivot value, the last pivot of the elimination.
struct Reduced {
    std::vector<std::vector<Expr>> rows;
    std::vector<std::size_t> pivot_cols;
    Expr pivot;
};
Reduced reduce_fraction_free(const ExprMatrix& m);

} // namespace dirac
