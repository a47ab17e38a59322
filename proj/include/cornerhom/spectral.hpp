#pragma once

#include <map>

#include "cornerhom/chain.hpp"

namespace cornerhom::spectral {

using complexes::ChainComplex;
using qlinalg::QuotientSpace;
using qlinalg::Scalar;
using qlinalg::SparseMat;
using qlinalg::SVec;

/// Increasing filtration F_kmin <= ... <= F_kmax = C, compatible with the
/// boundary. basis(k, q) spans F_k C_q; columns must be independent, nested
/// level to level, and the top level must span everything.
struct FilteredComplex {
    ChainComplex c;
    int kmin = 0;
    int kmax = 0;
    std::vector<std::vector<SparseMat>> level; // level[k - kmin][q]

    SparseMat basis(int k, int q) const;
    void validate() const; // throws engine_defect on a malformed filtration

    /// Complex of F_k / F_{k-1} with the induced differential.
    ChainComplex graded_piece(int k) const;
};

/// Pages of the homology spectral sequence of a filtered complex.
/// Entry (r, k, h): filtration k, complementary degree h, total n = k + h.
/// The page-r differential moves (k, h) to (k - r, h + r - 1).
class SpectralSequence {
  public:
    explicit SpectralSequence(const FilteredComplex& f);

    int dim(int r, int k, int h);
    SparseMat differential(int r, int k, int h); // dim(target) x dim(source)

    /// Pages stop moving once r exceeds the filtration width.
    int infinity_page() const { return f_->kmax - f_->kmin + 2; }

    /// dim E^1_{k,h} must equal the graded homology; engine self-check.
    bool first_page_matches_graded();

    struct Certificate {
        int stable_page = -1;            // first page equal to the last one
        std::vector<int> einf_by_degree; // sum over k of dim E^inf_{k, n-k}
        std::vector<int> betti;          // homology of the underlying complex
        bool converged = false;          // the two agree degree by degree
    };
    Certificate converge();

  private:
    const FilteredComplex* f_;
    // cycles-up-to-filtration spans and page entries, memoized
    std::map<std::tuple<int, int, int>, SparseMat> zcache_;
    std::map<std::tuple<int, int, int>, QuotientSpace> ecache_;

    SparseMat z_span(int r, int k, int q);       // Z^r_{k, q-k} as ambient span
    QuotientSpace& entry(int r, int k, int h);
};

} // namespace cornerhom::spectral
