#pragma once

#include "dirac/courant.hpp"

#include <optional>

namespace dirac {

// A section of A in the trivializing frame: r coefficient Exprs.
using Section = std::vector<Expr>;

// Lie algebroid in a trivializing chart: anchor columns rho(e_a) and
// structure functions [e_a, e_b] = sum_k c^k_ab e_k.
class AlgebroidPatch {
public:
    AlgebroidPatch() = default;
    AlgebroidPatch(PatchPtr base, std::size_t rank);

    const PatchPtr& base() const noexcept { return base_; }
    std::size_t rank() const noexcept { return rank_; }
    std::size_t n() const noexcept { return base_->dim(); }

    const ExprMatrix& anchor() const noexcept { return anchor_; }
    void set_anchor(std::size_t i, std::size_t a, const Expr& v);
    const Expr& c(std::size_t k, std::size_t a, std::size_t b) const { return c_[(k * rank_ + a) * rank_ + b]; }
    // Sets c^k_ab and c^k_ba = -v.
    void set_c(std::size_t k, std::size_t a, std::size_t b, const Expr& v);

    // rho(u) as a vector field on the base.
    VField rho(const Section& u) const;
    Section bracket(const Section& u, const Section& v) const;
    Section frame(std::size_t a) const;
    Section zero() const;

    std::string to_string() const;

private:
    PatchPtr base_;
    std::size_t rank_ = 0;
    ExprMatrix anchor_;
    std::vector<Expr> c_;
};

AlgebroidPatch tangent_algebroid(const PatchPtr& base);
// Lie algebra over a point; constants given as (a, b, k, value) with
// [e_a, e_b] = value * e_k (0-based).
AlgebroidPatch lie_algebra(std::size_t r, const std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Rational>>& c);

Report check_lie_algebroid(const AlgebroidPatch& a);

// Patch (x^i, xi1..xir) of the dual bundle.
PatchPtr dual_total_patch(const AlgebroidPatch& a);
// Linear Poisson structure on A*: {xi_a, xi_b} = c^k_ab xi_k, {x^i, xi_a} = rho^i_a.
Bivector dual_linear_poisson(const AlgebroidPatch& a);

// Pass when (a, dual) is a Lie bialgebroid; the pairing identifies the frame
// of dual with the dual frame of a.
Report check_lie_bialgebroid(const AlgebroidPatch& a, const AlgebroidPatch& dual);

// sigma(e_a) = sum_i sigma(i, a) dx^i.
struct IMTwoForm {
    ExprMatrix sigma;
};
Report check_im_two_form(const AlgebroidPatch& a, const IMTwoForm& s);

// (F_M, K, nabla). K is spanned by the sections k. The quotient A/K uses the
// frame columns picked greedily to complement K; nabla[i] is the q x q matrix
// whose column b holds nabla_{f_m[i]} of the b-th quotient frame element.
// Flat generators default to the quotient frame; supply others when nabla is
// not trivial in that frame.
struct IMFoliation {
    std::vector<VField> f_m;
    std::vector<Section> k;
    std::vector<ExprMatrix> nabla;
    std::optional<std::vector<Section>> flat;
};
// Frame columns complementing span(k), in increasing order.
std::vector<std::size_t> quotient_columns(const AlgebroidPatch& a, const std::vector<Section>& k);
Report check_im_foliation(const AlgebroidPatch& a, const IMFoliation& f);

struct LieBialgebraData {
    AlgebroidPatch g;
    AlgebroidPatch dual; // g* as a Lie algebra on the dual frame
};
// ideal: indices of frame elements spanning h.
Report check_lie_bialgebra(const LieBialgebraData& d, const std::optional<std::vector<std::size_t>>& ideal = {});

// Homogeneity under h_t(x, u) = (x, t u). The first base_dim coordinates of
// the frame's patch are base coordinates.
Report check_linearity(const Frame& l, std::size_t base_dim);

} // namespace dirac
