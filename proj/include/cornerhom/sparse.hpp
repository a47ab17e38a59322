#pragma once

#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "cornerhom/scalar.hpp"

namespace cornerhom::qlinalg {

/// Sparse vector: (index, value) pairs, sorted by index, values nonzero.
using SVec = std::vector<std::pair<int, Scalar>>;

void svec_axpy(SVec& y, const Scalar& c, const SVec& x); // y += c*x
SVec svec_scaled(const SVec& x, const Scalar& c);
Scalar svec_at(const SVec& v, int i);
SVec svec_from_dense(const std::vector<Scalar>& v);
std::vector<Scalar> svec_to_dense(const SVec& v, int n);

/// Column-major exact sparse matrix over Q(i).
struct SparseMat {
    int rows = 0;
    int cols = 0;
    std::vector<SVec> col;

    SparseMat() = default;
    SparseMat(int r, int c) : rows(r), cols(c), col(c) {}

    static SparseMat identity(int n);
    static SparseMat from_triplets(int r, int c,
                                   const std::vector<std::tuple<int, int, Scalar>>& ts);

    Scalar at(int r, int c) const { return svec_at(col[c], r); }
    void set(int r, int c, const Scalar& v);
    int nnz() const;
    bool is_zero() const;

    SparseMat transpose() const;
    SparseMat hstack(const SparseMat& other) const;          // [this | other]
    SparseMat cols_subset(const std::vector<int>& idx) const;
    SparseMat rows_slice(int r0, int r1) const;               // rows [r0, r1)
    SVec apply(const SVec& v) const;                          // this * v
    std::vector<Scalar> apply_dense(const std::vector<Scalar>& v) const;

    friend SparseMat operator*(const SparseMat& a, const SparseMat& b);
    friend SparseMat operator+(const SparseMat& a, const SparseMat& b);
    friend SparseMat operator-(const SparseMat& a, const SparseMat& b);
    SparseMat scaled(const Scalar& c) const;
    friend bool operator==(const SparseMat& a, const SparseMat& b);
};

/// Incremental exact Gaussian elimination (column-at-a-time, Markowitz-style
/// pivot row choice). Tracks column combinations when asked, which yields
/// kernel vectors and solves.
class Eliminator {
  public:
    explicit Eliminator(bool track_combinations) : track_(track_combinations) {}

    /// Feed one column; returns true if it was independent of the ones so far.
    bool add_column(const SVec& v, int original_index);

    int rank() const { return static_cast<int>(pivots_.size()); }

    /// Kernel combinations collected so far (indices = original_index values).
    const std::vector<SVec>& kernel_combos() const { return kernel_; }

    /// Reduce v against current pivots without modifying state.
    /// If combo != nullptr, accumulates the subtracted pivot pre-images so that
    /// reduced = v + A * (*combo) where A is the matrix of added columns.
    SVec reduce(SVec v, SVec* combo = nullptr) const;

    bool in_span(const SVec& v) const { return reduce(v).empty(); }

    /// Coordinates x (over original column indices) with A x = v, if any.
    std::optional<SVec> coords_for(const SVec& v) const;

    /// Reduced pivot columns (a basis of the span of the added columns).
    std::vector<SVec> image_basis() const;

  private:
    struct Pivot {
        SVec colv;   // reduced column, normalized so that entry at prow is 1
        SVec combo;  // colv = A * combo
        int prow;
    };
    bool track_;
    std::vector<Pivot> pivots_;
    std::unordered_map<int, int> row_pivot_; // row -> index into pivots_
    std::unordered_map<int, int> row_count_; // occupancy across pivot columns
    std::vector<SVec> kernel_;
};

struct Decomposition {
    int rank = 0;
    SparseMat kernel; // cols x nullity
    SparseMat image;  // rows x rank
};

/// The quotient span(u)/span(v), with explicit representative vectors and
/// coordinate extraction for ambient vectors lying in span(u) + span(v).
class QuotientSpace {
  public:
    QuotientSpace() = default;
    QuotientSpace(const SparseMat& u, const SparseMat& v);

    int dim() const { return reps_.cols; }
    const SparseMat& reps() const { return reps_; }

    std::vector<Scalar> coords(const SVec& ambient) const;

  private:
    SparseMat reps_;
    Eliminator span_{true};
};

int rank_of(const SparseMat& a);
Decomposition decompose(const SparseMat& a, bool want_kernel = true, bool want_image = true);

/// Exact solve A x = b; std::nullopt means b is not in the image of A
/// (reported distinctly from the zero solution, which is an empty vector).
std::optional<std::vector<Scalar>> solve(const SparseMat& a, const std::vector<Scalar>& b);

/// Basis of the column span (independent subset, reduced).
SparseMat col_span_basis(const SparseMat& a);

/// dim( (span U + span V) / span V )
int quotient_dim(const SparseMat& u, const SparseMat& v);

} // namespace cornerhom::qlinalg
