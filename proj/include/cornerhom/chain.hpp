#pragma once

#include <vector>

#include "cornerhom/sparse.hpp"

namespace cornerhom::complexes {

using qlinalg::Scalar;
using qlinalg::SparseMat;
using qlinalg::SVec;

/// Finite chain complex over Q(i), degrees 0..top, homological convention:
/// boundary(q) maps degree q to degree q-1.
class ChainComplex {
  public:
    ChainComplex() = default;

    /// diffs[q] must have shape dims[q-1] x dims[q]; diffs[0] may be empty.
    /// Shape errors throw engine_defect. d*d = 0 is NOT checked here; call
    /// check_squares_zero() where the construction warrants it.
    ChainComplex(std::vector<int> dims, std::vector<SparseMat> diffs);

    int top() const { return static_cast<int>(dims_.size()) - 1; }
    int dim(int q) const {
        return (q >= 0 && q <= top()) ? dims_[q] : 0;
    }

    /// d: C_q -> C_{q-1}; a zero matrix of the right shape at the edges.
    SparseMat boundary(int q) const;

    bool check_squares_zero() const;

    int betti(int q) const;
    std::vector<int> betti_all() const;
    long euler() const;

    int boundary_rank(int q) const; // cached

  private:
    std::vector<int> dims_;
    std::vector<SparseMat> d_;
    mutable std::vector<int> rank_cache_;
};

/// Homology in one degree with explicit cycle representatives and the ability
/// to read off coordinates of arbitrary cycles relative to those.
class HomologySpace {
  public:
    HomologySpace(const ChainComplex& c, int q);

    int dim() const { return space_.dim(); }
    const SparseMat& reps() const { return space_.reps(); } // dim(q) x dim()

    /// Coordinates of the class of a cycle. Not-a-cycle is an engine defect.
    std::vector<Scalar> coords(const SVec& cycle) const;

  private:
    const ChainComplex* c_;
    int q_;
    qlinalg::QuotientSpace space_; // cycles modulo boundaries
};

/// Degree-preserving chain map f[q]: C_q -> D_q (missing degrees are zero).
struct ChainMap {
    std::vector<SparseMat> f;
    SparseMat at(int q, const ChainComplex& src, const ChainComplex& dst) const;
    bool commutes(const ChainComplex& src, const ChainComplex& dst) const;
};

/// Matrix of the map induced on homology in degree q (hb x ha).
SparseMat induced_on_homology(const ChainMap& f, const ChainComplex& src,
                              const ChainComplex& dst, int q,
                              const HomologySpace& hsrc, const HomologySpace& hdst);

/// Long exact homology sequence of a short exact sequence of complexes
///     0 -> A -i-> B -p-> C -> 0.
/// Node order ... -> H_q(A) -a-> H_q(B) -b-> H_q(C) -delta-> H_{q-1}(A) -> ...
struct LongExactSequence {
    std::vector<int> ha, hb, hc;              // homology dims per degree
    std::vector<SparseMat> alpha, beta, delta; // delta[q]: H_q(C) -> H_{q-1}(A)
    bool exact = false;
};

LongExactSequence les_of_ses(const ChainComplex& a, const ChainComplex& b,
                             const ChainComplex& c, const ChainMap& incl,
                             const ChainMap& proj);

/// Pad `by` zero degrees at the bottom (degree q of the result is degree
/// q-by of the input).
ChainComplex shift_up(const ChainComplex& c, int by);

/// Keep degrees 0..new_top only.
ChainComplex truncate_top(const ChainComplex& c, int new_top);

/// Transpose every differential and reverse the grading, so that degree q of
/// the result carries the cohomology of degree top-q of the input.  Over a
/// field this reads off cohomology dimensions through the homology machinery.
ChainComplex dualize(const ChainComplex& c);

} // namespace cornerhom::complexes
