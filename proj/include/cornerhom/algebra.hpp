#pragma once

#include <compare>
#include <limits>
#include <string>
#include <vector>

#include "cornerhom/sparse.hpp"

namespace cornerhom::hochschild {

using qlinalg::Rational;
using qlinalg::Scalar;
using qlinalg::SparseMat;

/// A basis element of a bigraded algebra: w is the weight (monomial or
/// Fourier degree), o the order (filtration degree), e an index inside the
/// (w, o) slot for algebras whose slots are more than one-dimensional.
struct BasisKey {
    int w = 0;
    int o = 0;
    int e = 0;
    auto operator<=>(const BasisKey&) const = default;
};

using Term = std::pair<BasisKey, Scalar>;
using Tuple = std::vector<BasisKey>;

constexpr int kNoFloor = std::numeric_limits<int>::min() / 2;

/// Algebra with weight grading (additive under products) and an order
/// filtration (subadditive: the order of a product never exceeds the sum).
/// Products may have infinitely many terms of decreasing order; callers pass
/// an order floor and receive exactly the terms of order > floor.
class GradedAlgebra {
  public:
    virtual ~GradedAlgebra() = default;

    virtual int slot_dim(int w, int o) const = 0;
    virtual std::vector<Term> product(const BasisKey& a, const BasisKey& b,
                                      int floor) const = 0;
    /// The unit written in the basis; empty means the algebra has no unit.
    virtual std::vector<Term> unit_expansion() const = 0;
    virtual std::vector<int> weights_with_support(int wmax) const = 0;
    virtual std::vector<int> orders_with_support(int w, int omin, int omax) const = 0;
    virtual std::string describe(const BasisKey& k) const = 0;

    bool is_unital() const { return !unit_expansion().empty(); }
};

/// Structure-constant algebra on a finite basis; weights and orders all zero.
class FiniteAlgebra : public GradedAlgebra {
  public:
    FiniteAlgebra(int dim, std::vector<std::vector<std::vector<Term>>> table,
                  std::vector<Term> unit);

    int dim() const { return dim_; }
    int slot_dim(int w, int o) const override { return (w == 0 && o == 0) ? dim_ : 0; }
    std::vector<Term> product(const BasisKey& a, const BasisKey& b,
                              int floor) const override;
    std::vector<Term> unit_expansion() const override { return unit_; }
    std::vector<int> weights_with_support(int) const override { return {0}; }
    std::vector<int> orders_with_support(int w, int omin, int omax) const override {
        return (w == 0 && omin <= 0 && 0 <= omax) ? std::vector<int>{0}
                                                  : std::vector<int>{};
    }
    std::string describe(const BasisKey& k) const override;

    bool check_associative() const;
    bool check_unit() const;

    // stock examples
    static FiniteAlgebra upper_triangular2();       // span{E11, E22, E12}
    static FiniteAlgebra truncated_polynomial(int n); // k[x]/(x^n)
    static FiniteAlgebra product_of_fields(int n);    // k^n componentwise
    static FiniteAlgebra cyclic_group_algebra(int m); // k[Z/m]
    static FiniteAlgebra matrix2();                   // 2x2 matrices
    static FiniteAlgebra square_zero();               // non-unital, x*x = 0

  private:
    int dim_;
    std::vector<std::vector<std::vector<Term>>> table_; // table[i][j] = e_i e_j
    std::vector<Term> unit_;
};

/// Change of basis e'_j = sum_i T_{ij} e_i; exact, associativity preserved.
FiniteAlgebra conjugate(const FiniteAlgebra& a, const SparseMat& t);

/// Deterministic random invertible change of basis applied to a stock algebra.
FiniteAlgebra random_twist(const FiniteAlgebra& a, unsigned seed);

/// k[x]: basis x^w, w >= 0.
class PolynomialAlgebra : public GradedAlgebra {
  public:
    int slot_dim(int w, int o) const override { return (w >= 0 && o == 0) ? 1 : 0; }
    std::vector<Term> product(const BasisKey& a, const BasisKey& b, int) const override {
        return {{BasisKey{a.w + b.w, 0, 0}, Scalar(1)}};
    }
    std::vector<Term> unit_expansion() const override {
        return {{BasisKey{0, 0, 0}, Scalar(1)}};
    }
    std::vector<int> weights_with_support(int wmax) const override;
    std::vector<int> orders_with_support(int w, int omin, int omax) const override {
        return (w >= 0 && omin <= 0 && 0 <= omax) ? std::vector<int>{0}
                                                  : std::vector<int>{};
    }
    std::string describe(const BasisKey& k) const override;
};

/// k[r, r^-1]: basis r^w, w in Z. The circle ring looks the same with the
/// basis z^w over Q(i); only the evaluator cares about the distinction.
class LaurentAlgebra : public GradedAlgebra {
  public:
    int slot_dim(int w, int o) const override { return o == 0 ? 1 : 0; }
    std::vector<Term> product(const BasisKey& a, const BasisKey& b, int) const override {
        return {{BasisKey{a.w + b.w, 0, 0}, Scalar(1)}};
    }
    std::vector<Term> unit_expansion() const override {
        return {{BasisKey{0, 0, 0}, Scalar(1)}};
    }
    std::vector<int> weights_with_support(int wmax) const override;
    std::vector<int> orders_with_support(int w, int omin, int omax) const override {
        return (omin <= 0 && 0 <= omax) ? std::vector<int>{0} : std::vector<int>{};
    }
    std::string describe(const BasisKey& k) const override;
};

/// One Laurent branch of the full symbol ring on the circle: basis elements
/// u^w xi^o with u a unit mode and xi the symbol variable. Composition picks
/// up the usual derivative series
///     (u^a xi^j) (u^b xi^l) = sum_t binom(j, t) b^t u^{a+b} xi^{j+l-t},
/// which for j < 0 never terminates: the order floor is mandatory then.
class SymbolBranchAlgebra : public GradedAlgebra {
  public:
    int slot_dim(int, int) const override { return 1; }
    std::vector<Term> product(const BasisKey& a, const BasisKey& b,
                              int floor) const override;
    std::vector<Term> unit_expansion() const override {
        return {{BasisKey{0, 0, 0}, Scalar(1)}};
    }
    std::vector<int> weights_with_support(int wmax) const override;
    std::vector<int> orders_with_support(int w, int omin, int omax) const override;
    std::string describe(const BasisKey& k) const override;
};

/// Commutative shadow of the symbol branch: only the leading term survives.
class GrSymbolAlgebra : public GradedAlgebra {
  public:
    int slot_dim(int, int) const override { return 1; }
    std::vector<Term> product(const BasisKey& a, const BasisKey& b, int floor) const override;
    std::vector<Term> unit_expansion() const override {
        return {{BasisKey{0, 0, 0}, Scalar(1)}};
    }
    std::vector<int> weights_with_support(int wmax) const override;
    std::vector<int> orders_with_support(int w, int omin, int omax) const override;
    std::string describe(const BasisKey& k) const override;
};

/// Exact binomial coefficient with arbitrary (possibly negative) upper index.
Rational general_binomial(long j, long t);

/// Associativity inside the band: computes (ab)c and a(bc) with floors chosen
/// so both equal the full product modulo order <= pbot, and compares exactly.
bool triple_product_check(const GradedAlgebra& alg, const BasisKey& a,
                          const BasisKey& b, const BasisKey& c, int pbot);

} // namespace cornerhom::hochschild
