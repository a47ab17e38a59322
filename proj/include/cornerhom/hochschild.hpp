#pragma once

#include <map>

#include "cornerhom/algebra.hpp"
#include "cornerhom/mixed.hpp"
#include "cornerhom/spectral.hpp"

namespace cornerhom::hochschild {

/// A window of chain tuples a_0 x ... x a_n:
///   - total weight exactly mu (all operators preserve it),
///   - sum |w_i| <= wtot,
///   - sum max(o_i, 0) <= ctot,
///   - total order in the band (pbot, ptop].
/// Merges only lower the total order, rotations and unit insertions keep all
/// four quantities, so the span of these tuples is a subquotient of the full
/// chain module on which every operator identity holds exactly: a merged term
/// falling to order <= pbot is cut as a matter of structure, not approximation.
struct Window {
    int mu = 0;
    int wtot = 0;
    int ctot = 0;
    int pbot = -1;
    int ptop = 0;
};

class HochschildComplex {
  public:
    HochschildComplex(const GradedAlgebra& alg, Window win, int nmax);

    const GradedAlgebra& algebra() const { return *alg_; }
    const Window& window() const { return win_; }
    int top() const { return nmax_; }
    int dim(int n) const;
    const std::vector<Tuple>& tuples(int n) const;
    int index_of(int n, const Tuple& t) const; // -1 when absent

    SparseMat op_b(int n) const;
    SparseMat op_bprime(int n) const;
    SparseMat op_t(int n) const; // signed cyclic rotation
    SparseMat op_s(int n) const; // unit insertion, degree n -> n+1
    SparseMat op_B(int n) const;

    complexes::ChainComplex b_complex() const;
    complexes::ChainComplex bprime_complex() const;
    complexes::MixedComplex mixed() const; // validated exactly
    spectral::FilteredComplex filtered_by_order() const;

  private:
    const GradedAlgebra* alg_;
    Window win_;
    int nmax_;
    std::vector<std::vector<Tuple>> basis_;
    std::vector<std::map<Tuple, int>> index_;

    void enumerate(int n);
    SparseMat merge_sum(int n, bool cyclic) const;
};

/// Chain-level inclusion induced by widening wtot (all other window
/// parameters must agree).
complexes::ChainMap inclusion_map(const HochschildComplex& small,
                                  const HochschildComplex& big);

struct StabilizedDims {
    std::vector<int> dims; // degrees 0..qmax
    int wtot_used = 0;
    std::string certificate;
};

/// Homology of the b-complex at fixed total weight, with the |w|-budget
/// grown until two consecutive windows agree through isomorphisms. Throws
/// budget_error when wcap is reached without stabilizing.
StabilizedDims hh_stabilized(const GradedAlgebra& alg, int mu, int qmax,
                             Window base, int wcap);

/// The unit-insertion contraction forces the b'-complex to be exact for a
/// unital algebra; returns false when some degree 0..nmax-1 has homology.
bool h_unital_check(const GradedAlgebra& alg, const Window& win, int nmax);

} // namespace cornerhom::hochschild
