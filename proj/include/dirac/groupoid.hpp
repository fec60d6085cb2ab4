#pragma once

#include "dirac/algebroid.hpp"
#include "dirac/tanlift.hpp"

#include <string>
#include <vector>

namespace dirac {

// Polynomial Lie groupoid G => M on global charts. Composable pairs (g, h)
// with s(g) = t(h) are parametrized by comp: g_of and h_of pick out the two
// factors and must each list distinct comp coordinates, together covering
// all of them. A group is a groupoid over point_patch().
struct GroupoidPatch {
    std::string name;
    PatchPtr base;
    PatchPtr total;
    PolyMap src;
    PolyMap tgt;
    PolyMap unit;
    PolyMap inv;
    PatchPtr comp;
    PolyMap g_of;
    PolyMap h_of;
    PolyMap mul;

    bool is_group() const { return base->dim() == 0; }
};

// Per-identity verdicts; overall pass iff every part passes.
using MultReport = Report;

// M x M with t = pr_1, s = pr_2 and (x, y)(y, z) = (x, z). Coordinates of
// the k-th factor carry the suffix _k.
GroupoidPatch pair_groupoid(const PatchPtr& m);
// (R^n, +) on x1..xn; composable pairs are (x, y).
GroupoidPatch abelian_group(std::size_t n);
// (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')
GroupoidPatch heisenberg3();

MultReport check_groupoid_axioms(const GroupoidPatch& g);
// Every structure map replaced by its tangent prolongation.
GroupoidPatch tangent_groupoid(const GroupoidPatch& g);

// Basis u_1..u_r of Ker(Ts) along the units: G-coordinate vectors with
// coefficients on M.
std::vector<std::vector<Expr>> unit_frame(const GroupoidPatch& g);
// Right-invariant extensions of unit_frame.
std::vector<VField> right_invariant_fields(const GroupoidPatch& g);
// Anchor Tt and bracket of right-invariant fields, in the unit_frame basis.
AlgebroidPatch lie_algebroid_of(const GroupoidPatch& g);

// Source and target of T*G => A*G as maps from cotangent_patch(G) to
// dual_total_patch(lie_algebroid_of(G)).
struct CotangentMaps {
    PolyMap source;
    PolyMap target;
};
CotangentMaps cotangent_source_target(const GroupoidPatch& g);

// A covector `value` at the point `point` of G. Entries may be constants or
// polynomials on any one parameter patch.
struct Covector {
    std::vector<Expr> point;
    std::vector<Expr> value;
};
Covector cotangent_compose(const GroupoidPatch& g, const Covector& a, const Covector& b);

// m* w = pr_1* w + pr_2* w on the composable-pair chart.
MultReport check_multiplicative_two_form(const GroupoidPatch& g, const KForm& w);
// p_{gh} = (l_g)_* p_h + (r_h)_* p_g; groups only.
MultReport check_multiplicative_bivector(const GroupoidPatch& g, const Bivector& p);
// Whether l spans a subgroupoid of TG + T*G. Parts "products" and "units";
// the note reports the rank of the unit subbundle E.
MultReport check_multiplicative_frame(const GroupoidPatch& g, const Frame& l);

// sigma(u) = i_u w restricted to the units.
IMTwoForm induced_im_two_form(const GroupoidPatch& g, const KForm& w);
// Lie algebra on g* from the linearization of p at the identity.
AlgebroidPatch induced_dual_bracket(const GroupoidPatch& g, const Bivector& p);
// (F_M, K, nabla) of the multiplicative foliation spanned by f.
IMFoliation induced_im_foliation(const GroupoidPatch& g, const std::vector<VField>& f);

// Sections of TG + T*G with product(gh) = left(g) * right(h) on every
// composable pair.
struct MRelated {
    GSec left;
    GSec right;
    GSec product;
};
// Parts "pairing" and "bracket": the pairing and the Dorfman bracket are
// compatible with the groupoid multiplication on the supplied families.
MultReport check_ca_identities(const GroupoidPatch& g, const std::vector<MRelated>& fams);

} // namespace dirac
