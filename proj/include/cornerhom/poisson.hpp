#pragma once

#include <random>
#include <string>
#include <vector>

#include "cornerhom/sparse.hpp"

namespace cornerhom::poisson {

using qlinalg::Scalar;
using qlinalg::SparseMat;

/// One corner chart [0,1)^k x R^(n-k) of the punctured cotangent model:
/// defining functions x_1..x_k with one exponent c_j >= 1 each, interior
/// coordinates y_(k+1)..y_n, fiber coordinates xi_1..xi_n.  The chart fixes
/// the tensor
///     G = sum_(j>k) d/dxi_j ^ d/dy_j + sum_(j<=k) x_j^(c_j) d/dxi_j ^ d/dx_j
/// and the paired symplectic form with x_j^(-c_j) dx_j ^ dxi_j blocks, so the
/// vector field part stays tangent to the boundary faces.
struct Patch {
    int n = 1;
    int k = 0;
    std::vector<int> c; // size k, each >= 1

    void validate() const;

    /// One-form slots in the fixed global order dP_1 < dxi_1 < dP_2 < ...
    /// where the position covector dP_j means dx_j for blocks j < k and dy_j
    /// for the interior blocks (block indices from zero).
    int slots() const { return 2 * n; }
    int pos_slot(int j) const { return 2 * j; }
    int xi_slot(int j) const { return 2 * j + 1; }

    friend bool operator==(const Patch& a, const Patch& b) {
        return a.n == b.n && a.k == b.k && a.c == b.c;
    }
    friend bool operator!=(const Patch& a, const Patch& b) { return !(a == b); }
};

/// One monomial summand coeff * x^xe * y^ye * xi^ze * (wedge of slots).
/// x-exponents range over Z (Laurent along the boundary), y- and
/// xi-exponents over N; the wedge factor is a slot bitmask, implicitly in
/// ascending slot order.
struct FormTerm {
    Scalar coeff;
    std::vector<int> xe; // size k
    std::vector<int> ye; // size n-k
    std::vector<int> ze; // size n
    unsigned wedge = 0;

    int form_degree() const;
    /// Total xi-exponent plus the number of dxi factors: the weight of the
    /// radial scaling of the fiber.
    int radial_degree() const;

    bool operator==(const FormTerm&) const = default;
};

/// Finite sum of monomial terms on one patch, kept canonical: terms sorted
/// by (wedge, exponents), like terms combined, zero terms dropped, so that
/// equality of forms is equality of representations.
class LaurentForm {
  public:
    explicit LaurentForm(Patch p) : p_(std::move(p)) { p_.validate(); }

    /// slots must be strictly ascending (callers own any reordering signs).
    static LaurentForm monomial(const Patch& p, const Scalar& coeff,
                                std::vector<int> xe, std::vector<int> ye,
                                std::vector<int> ze, const std::vector<int>& slots);
    static LaurentForm from_terms(Patch p, std::vector<FormTerm> ts);

    const Patch& patch() const { return p_; }
    const std::vector<FormTerm>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    /// Degree accessors demand a nonzero form of pure degree; mixed sums are
    /// legal forms but have no single degree to report.
    bool pure_form_degree() const;
    bool radially_homogeneous() const;
    int form_degree() const;
    int radial_degree() const;

    LaurentForm operator-() const;
    LaurentForm& operator+=(const LaurentForm& o);
    LaurentForm& operator-=(const LaurentForm& o);
    friend LaurentForm operator+(LaurentForm a, const LaurentForm& b) { return a += b; }
    friend LaurentForm operator-(LaurentForm a, const LaurentForm& b) { return a -= b; }
    LaurentForm scaled(const Scalar& s) const;

    friend bool operator==(const LaurentForm& a, const LaurentForm& b) {
        return a.p_ == b.p_ && a.t_ == b.t_;
    }
    friend bool operator!=(const LaurentForm& a, const LaurentForm& b) { return !(a == b); }

    std::string str() const;

  private:
    Patch p_;
    std::vector<FormTerm> t_;
    void canon();
};

LaurentForm wedge(const LaurentForm& a, const LaurentForm& b);

LaurentForm exterior_d(const LaurentForm& f);

/// Contraction with G, term of shape g * u ^ v contracting as g * i_v(i_u(.)),
/// which pins the pairing <df ^ dg, G> and with it every sign downstream.
LaurentForm contract_G(const LaurentForm& f);

/// {f, g} = i_G(df ^ dg) for 0-forms, evaluated through the independent
/// partial-derivative expansion
///     sum_j g_j (dxi_j f * dP_j g  -  dP_j f * dxi_j g),
/// so that {x_j, xi_j} = -x_j^(c_j) and {y_j, xi_j} = -1.  This is the frozen
/// sign convention of the whole module.
LaurentForm poisson_bracket(const LaurentForm& f, const LaurentForm& g);

enum class DeltaRoute { contraction, local_formula, both };

/// The Poisson boundary delta = i_G d - d i_G, radially homogeneous of
/// degree -1.  The local_formula route instead expands, per monomial
/// f0 dv_1 ^ ... ^ dv_q,
///   sum_j (-1)^(j+1) {f0, v_j} dv_1..(no j)..dv_q
/// + sum_(i<j) (-1)^(i+j) f0 d{v_i, v_j} ^ dv_1..(no i, no j)..dv_q.
/// With route both the two expansions are computed independently and
/// compared; any discrepancy is an engine defect.
LaurentForm delta(const LaurentForm& f, DeltaRoute route = DeltaRoute::both);

/// Symplectic Hodge star: the unique monomial-wise solution of
///     beta ^ star(alpha) = Lambda(G)(alpha, beta) omega^n / n!
/// over monomial test forms beta, with the orientation fixed by the printed
/// omega.  An involution; sends form degree q, radial degree d to form
/// degree 2n - q, radial degree d + n - q, and conjugates delta to
/// (-1)^q d on q-forms.
LaurentForm hodge_star(const LaurentForm& f);

struct IdentityReport {
    int forms = 0; // nonzero samples checked
    int top_form_degree = 0;
};

/// Exact per-sample checks: d^2 = 0, both delta routes agree, delta^2 = 0,
/// the star is an involution with the stated bidegree shift, star delta star
/// = (-1)^q d, and delta drops the radial degree by exactly 1.  Samples must
/// be radially homogeneous of pure form degree (or zero).  Any failure is an
/// engine defect naming the offending form.
IdentityReport verify_identities(const Patch& p, const std::vector<LaurentForm>& samples);

/// Random monomial with exponents in [-3,3] (x) and [0,3] (y, xi), a uniform
/// wedge subset, and a small nonzero rational coefficient (sometimes
/// imaginary).
LaurentForm random_monomial(const Patch& p, std::mt19937& rng);

/// Exponent window cutting a homogeneity sector down to finite dimension.
/// delta never lowers an x-exponent (c_j >= 1) and never raises y- or
/// xi-exponents, so {all xe_j >= x_low} spans a subcomplex, {some xe_j >
/// x_high} spans a smaller subcomplex, and {all ye_j <= y_max} meets both as
/// a subcomplex again: the window is an honest subquotient on which
/// delta^2 = 0 holds structurally, not approximately.
struct ExponentBounds {
    int x_low = 0;
    int x_high = 0;
    int y_max = 0;

    ExponentBounds widened(int by) const {
        return {x_low - by, x_high + by, y_max + by};
    }
};

/// Monomial basis of the sector of pure form degree p0 and radial degree d
/// inside the window, in a fixed deterministic order.
std::vector<FormTerm> sector_basis(const Patch& p, int p0, int d,
                                   const ExponentBounds& b);

/// Matrix of delta from sector (p0, d) to (p0 - 1, d - 1) in those bases;
/// image terms leaving the window through the x-ceiling are cut by the
/// quotient structure, every other escape is an engine defect.
SparseMat delta_matrix(const Patch& p, int p0, int d, const ExponentBounds& b);

/// dim ker / im at (p0, d) inside one window, incoming delta from (p0+1, d+1).
int poisson_homology_dim(const Patch& p, int p0, int d, const ExponentBounds& b);

struct PoissonHomology {
    int dim = 0;
    ExponentBounds used;
    std::string certificate;
};

/// Window dimensions at successive enlargements of the base bounds, stopping
/// when two consecutive windows report the same dimension.  The certificate
/// records the agreeing pair; no comparison map between windows is asserted
/// (enlarging the window changes both sub and quotient).  The stable number
/// is the windowed sector's own homology dimension: classes pinned to a
/// window edge (cycles whose filler sits one step outside, or lines missed
/// because their source was cut) are counted when they travel with the
/// window, as in any truncated complex.  budget_error when max_steps
/// enlargements fail to stabilize or a sector outgrows the size cap.
PoissonHomology homogeneous_poisson_homology(const Patch& p, int p0, int d,
                                             ExponentBounds base, int max_steps = 6);

} // namespace cornerhom::poisson
