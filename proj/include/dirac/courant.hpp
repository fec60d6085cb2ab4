#pragma once

#include "dirac/cartan.hpp"
#include "dirac/report.hpp"

#include <string>
#include <vector>

namespace dirac {

// Generalized section X + a of TM + T*M.
struct GSec {
    VField vf;
    KForm of;

    GSec() = default;
    GSec(VField x, KForm a);
    static GSec zero(const PatchPtr& patch);
    static GSec vector(const VField& x);
    static GSec form(const KForm& a);

    const PatchPtr& patch() const noexcept { return vf.patch(); }
    bool is_zero() const { return vf.is_zero() && of.is_zero(); }
    GSec operator+(const GSec& o) const;
    GSec operator-(const GSec& o) const;
    GSec scaled(const Expr& f) const;
    GSec embed(const PatchPtr& target) const;
    // Coefficients (X^1..X^n, a_1..a_n).
    std::vector<Expr> coefficients() const;
    std::string to_string() const;
};

bool operator==(const GSec& a, const GSec& b);

// Ordered family of sections standing in for a subbundle. Lagrangian frames
// have exactly dim sections; check_lagrangian verifies that.
class Frame {
public:
    Frame() = default;
    Frame(PatchPtr patch, std::vector<GSec> secs);

    const PatchPtr& patch() const noexcept { return patch_; }
    const std::vector<GSec>& secs() const noexcept { return secs_; }
    const GSec& operator[](std::size_t i) const { return secs_[i]; }
    std::size_t size() const noexcept { return secs_.size(); }
    // 2n x k matrix whose columns are section coefficients.
    ExprMatrix matrix() const;
    Frame embed(const PatchPtr& target) const;
    std::string to_string() const;

private:
    PatchPtr patch_;
    std::vector<GSec> secs_;
};

Expr pairing(const GSec& a, const GSec& b);
// ([X,Y], L_X b - i_Y da)
GSec courant_bracket(const GSec& a, const GSec& b);

Frame graph_two_form(const KForm& w);
Frame graph_bivector(const Bivector& p);
Frame foliation_frame(const PatchPtr& patch, const std::vector<VField>& f);
Frame bfield_transform(const Frame& l, const KForm& b);

Report check_lagrangian(const Frame& l);
// mu(i,j,k) = <[[s_i, s_j]], s_k>, index (i*k + j)*k + k for k sections.
Tensor3 courant_tensor(const Frame& l);
Report check_dirac(const Frame& l);

// First nonzero entry of an m*m*m array as an index witness, or "" if none.
std::string first_nonzero(const Tensor3& t, std::size_t m, const std::string& label);

// Whether v lies in the span of the columns of m (generic rank test).
bool in_span(const ExprMatrix& m, const std::vector<Expr>& v);
// Frames spanning the same subbundle generically.
bool same_span(const Frame& a, const Frame& b);

} // namespace dirac
