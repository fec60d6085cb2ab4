#pragma once

#include "dirac/symalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace dirac {

// Vector field sum_i X^i d/dx^i.
class VField {
public:
    VField() = default;
    VField(PatchPtr patch, std::vector<Expr> comps);
    static VField zero(const PatchPtr& patch);
    // d/dx^i
    static VField coordinate(const PatchPtr& patch, std::size_t i);

    const PatchPtr& patch() const noexcept { return patch_; }
    const std::vector<Expr>& comps() const noexcept { return comps_; }
    const Expr& operator[](std::size_t i) const { return comps_[i]; }
    std::size_t dim() const noexcept { return comps_.size(); }
    bool is_zero() const;

    // X(f)
    Expr apply(const Expr& f) const;
    VField operator+(const VField& o) const;
    VField operator-(const VField& o) const;
    VField scaled(const Expr& f) const;
    VField embed(const PatchPtr& target) const;

    std::string to_string() const;

private:
    PatchPtr patch_;
    std::vector<Expr> comps_;
};

bool operator==(const VField& a, const VField& b);

// Differential form of degree k, stored on strictly increasing index tuples.
class KForm {
public:
    using Index = std::vector<std::size_t>;

    KForm() = default;
    KForm(PatchPtr patch, std::size_t degree);
    static KForm function(const Expr& f);
    // dx^i
    static KForm differential(const PatchPtr& patch, std::size_t i);
    // One-form with the given coefficients.
    static KForm one_form(const PatchPtr& patch, const std::vector<Expr>& coeffs);

    const PatchPtr& patch() const noexcept { return patch_; }
    std::size_t degree() const noexcept { return degree_; }
    const std::map<Index, Expr>& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    // Coefficient on an arbitrary index tuple (sign from sorting, zero on
    // repeats).
    Expr at(const Index& idx) const;
    // Sets the coefficient on an arbitrary tuple, keeping antisymmetry.
    void set(const Index& idx, const Expr& value);
    void add(const Index& idx, const Expr& value);

    // Coefficients of a one-form as a dense vector.
    std::vector<Expr> components() const;
    // Degree 0 value.
    Expr value() const;
    // w(v_1, ..., v_k)
    Expr evaluate(const std::vector<VField>& vectors) const;

    KForm operator+(const KForm& o) const;
    KForm operator-(const KForm& o) const;
    KForm scaled(const Expr& f) const;
    KForm embed(const PatchPtr& target) const;

    std::string to_string() const;

private:
    void check_compatible(const KForm& o) const;

    PatchPtr patch_;
    std::size_t degree_ = 0;
    std::map<Index, Expr> coeffs_;
};

bool operator==(const KForm& a, const KForm& b);
KForm wedge(const KForm& a, const KForm& b);

// Antisymmetric bivector with pi(dx^i, dx^j) = pi^{ij}.
class Bivector {
public:
    Bivector() = default;
    explicit Bivector(PatchPtr patch);

    const PatchPtr& patch() const noexcept { return patch_; }
    std::size_t dim() const noexcept { return patch_ ? patch_->dim() : 0; }
    const Expr& at(std::size_t i, std::size_t j) const { return m_[i * dim() + j]; }
    void set(std::size_t i, std::size_t j, const Expr& v);
    void add(std::size_t i, std::size_t j, const Expr& v);
    bool is_zero() const;

    // pi(a, b) for one-forms a, b.
    Expr pair(const KForm& a, const KForm& b) const;
    Bivector operator+(const Bivector& o) const;
    Bivector scaled(const Expr& f) const;
    ExprMatrix matrix() const;
    static Bivector from_matrix(const PatchPtr& patch, const ExprMatrix& m);
    Bivector embed(const PatchPtr& target) const;

    std::string to_string() const;

private:
    PatchPtr patch_;
    std::vector<Expr> m_;
};

bool operator==(const Bivector& a, const Bivector& b);
// X ^ Y, so that (X ^ Y)(a, b) = a(X) b(Y) - a(Y) b(X).
Bivector wedge(const VField& x, const VField& y);

// Polynomial map between patches, one component per target coordinate.
class PolyMap {
public:
    PolyMap() = default;
    PolyMap(PatchPtr source, PatchPtr target, std::vector<Expr> comps);
    static PolyMap identity(const PatchPtr& patch);

    const PatchPtr& source() const noexcept { return source_; }
    const PatchPtr& target() const noexcept { return target_; }
    const std::vector<Expr>& comps() const noexcept { return comps_; }
    const Expr& operator[](std::size_t i) const { return comps_[i]; }

    // f(e) for e on the target: pulls a function back to the source.
    Expr pull(const Expr& e) const;
    // Composition: (*this) after inner.
    PolyMap after(const PolyMap& inner) const;
    // Jacobian d f^i / d x^j, target dim by source dim.
    ExprMatrix jacobian() const;
    bool is_identity() const;

    std::string to_string() const;

private:
    PatchPtr source_;
    PatchPtr target_;
    std::vector<Expr> comps_;
};

// Dense n*n*n coefficient array.
using Tensor3 = std::vector<Expr>; // n*n*n, index (i*n + j)*n + k

VField lie_bracket(const VField& x, const VField& y);
KForm exterior_derivative(const KForm& w);
KForm interior_product(const VField& x, const KForm& w);
// Cartan formula L_x = i_x d + d i_x.
KForm lie_derivative(const VField& x, const KForm& w);
// Coordinate formula (L_x w)_I = x(w_I) + sum_p sum_j w_{I[p->j]} d_{I_p} x^j.
KForm lie_derivative_coordinate(const VField& x, const KForm& w);
VField sharp_bivector(const Bivector& p, const KForm& a);
Tensor3 schouten_jacobiator(const Bivector& p);
KForm pullback_form(const PolyMap& f, const KForm& w);
Bivector pushforward_bivector(const PolyMap& f, const PolyMap& f_inverse, const Bivector& p);

// J P J^T
ExprMatrix congruence(const ExprMatrix& j, const ExprMatrix& p);

// "c*sym + ..." rendering shared by vector fields, forms and bivectors.
std::string render_linear(const std::vector<std::pair<Expr, std::string>>& terms);

} // namespace dirac
