#pragma once

#include "dirac/courant.hpp"

namespace dirac {

// TM over a base patch. Velocity coordinates append a prime to each base
// coordinate, or prefix "D" when the base already carries primes, so TTM of
// (x) is (x, x', Dx, Dx').
struct TangentPatch {
    PatchPtr base;
    PatchPtr total;
    std::size_t n() const { return base->dim(); }
};

// T*M with momenta named p_<coord>.
struct CotangentPatch {
    PatchPtr base;
    PatchPtr total;
    std::size_t n() const { return base->dim(); }
};

TangentPatch tangent_patch(const PatchPtr& base);
CotangentPatch cotangent_patch(const PatchPtr& base);

enum class Lift { vertical, tangent };

Expr lift_function(const Expr& f, const TangentPatch& tm, Lift kind);
VField lift_vector_field(const VField& x, const TangentPatch& tm, Lift kind);
KForm lift_one_form(const KForm& a, const TangentPatch& tm, Lift kind);
// (X, a)^T = (X^T, a^T) and (X, a)^v = (X^v, a^v).
GSec lift_section(const GSec& s, const TangentPatch& tm, Lift kind);

// J on TTM: (x, x', Dx, Dx') -> (x, Dx, x', Dx'). tt must be the tangent
// patch of some TM.
PolyMap canonical_involution(const TangentPatch& tt);
// Theta: TT*M -> T*TM, (x, p, x', p') -> (x, x', p', p).
PolyMap tulczyjew_map(const PatchPtr& base);
// R: T*A* -> T*A, (x, xi, p_x, p_xi) -> (x, p_xi, -p_x, xi). The first
// base_dim coordinates of a_total are the base; the dual fibre coordinates
// are named xi1..xir.
PolyMap legendre_map(const PatchPtr& a_total, std::size_t base_dim);
// Patch of A* matching legendre_map.
PatchPtr dual_bundle_patch(const PatchPtr& a_total, std::size_t base_dim);
// sum_i dq^i ^ dp_i
KForm canonical_symplectic(const CotangentPatch& ct);

// Linear section TX: TM -> TTM, (x, v) -> (x, X, v, v^j d_j X).
PolyMap tangent_section(const VField& x, const TangentPatch& tm);
// Core section: (x, v) -> (x, 0, v, X).
PolyMap core_section(const VField& x, const TangentPatch& tm);
// Same pair for one-forms, as maps TM -> TT*M.
PolyMap tangent_section(const KForm& a, const TangentPatch& tm);
PolyMap core_section(const KForm& a, const TangentPatch& tm);
// A vector field on TM as a section map TM -> TTM.
PolyMap section_map(const VField& x, const TangentPatch& tm);
// A one-form on TM as a section map TM -> T*TM.
PolyMap section_map(const KForm& a, const TangentPatch& tm);

// Frame {s_1^T..s_n^T, s_1^v..s_n^v} on TM.
Frame tangent_lift_dirac(const Frame& l);
Report check_tangent_mu_identity(const Frame& l);

} // namespace dirac
