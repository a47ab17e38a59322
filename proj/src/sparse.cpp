#include "cornerhom/sparse.hpp"

#include <algorithm>

#include "cornerhom/errors.hpp"

namespace cornerhom::qlinalg {

void svec_axpy(SVec& y, const Scalar& c, const SVec& x) {
    if (c.is_zero() || x.empty()) return;
    SVec out;
    out.reserve(y.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(y[i++]);
        } else if (i == y.size() || x[j].first < y[i].first) {
            Scalar v = c * x[j].second;
            if (!v.is_zero()) out.emplace_back(x[j].first, std::move(v));
            ++j;
        } else {
            Scalar v = y[i].second + c * x[j].second;
            if (!v.is_zero()) out.emplace_back(y[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    y = std::move(out);
}

SVec svec_scaled(const SVec& x, const Scalar& c) {
    SVec out;
    if (c.is_zero()) return out;
    out.reserve(x.size());
    for (const auto& [i, v] : x) out.emplace_back(i, c * v);
    return out;
}

Scalar svec_at(const SVec& v, int i) {
    auto it = std::lower_bound(v.begin(), v.end(), i,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != v.end() && it->first == i) return it->second;
    return Scalar(0);
}

SVec svec_from_dense(const std::vector<Scalar>& v) {
    SVec out;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (!v[i].is_zero()) out.emplace_back(i, v[i]);
    return out;
}

std::vector<Scalar> svec_to_dense(const SVec& v, int n) {
    std::vector<Scalar> out(n, Scalar(0));
    for (const auto& [i, x] : v) {
        require_engine(i >= 0 && i < n, "sparse vector index out of range");
        out[i] = x;
    }
    return out;
}

SparseMat SparseMat::identity(int n) {
    SparseMat m(n, n);
    for (int j = 0; j < n; ++j) m.col[j].emplace_back(j, Scalar(1));
    return m;
}

SparseMat SparseMat::from_triplets(int r, int c,
                                   const std::vector<std::tuple<int, int, Scalar>>& ts) {
    SparseMat m(r, c);
    for (const auto& [i, j, v] : ts) m.set(i, j, m.at(i, j) + v);
    return m;
}

void SparseMat::set(int r, int c, const Scalar& v) {
    require_engine(r >= 0 && r < rows && c >= 0 && c < cols, "matrix index out of range");
    SVec& cv = col[c];
    auto it = std::lower_bound(cv.begin(), cv.end(), r,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != cv.end() && it->first == r) {
        if (v.is_zero())
            cv.erase(it);
        else
            it->second = v;
    } else if (!v.is_zero()) {
        cv.insert(it, {r, v});
    }
}

int SparseMat::nnz() const {
    int n = 0;
    for (const auto& c : col) n += static_cast<int>(c.size());
    return n;
}

bool SparseMat::is_zero() const { return nnz() == 0; }

SparseMat SparseMat::transpose() const {
    SparseMat m(cols, rows);
    for (int j = 0; j < cols; ++j)
        for (const auto& [i, v] : col[j]) m.col[i].emplace_back(j, v);
    return m;
}

SparseMat SparseMat::hstack(const SparseMat& other) const {
    require_engine(rows == other.rows, "hstack: row mismatch");
    SparseMat m(rows, cols + other.cols);
    m.col.clear();
    m.col.insert(m.col.end(), col.begin(), col.end());
    m.col.insert(m.col.end(), other.col.begin(), other.col.end());
    return m;
}

SparseMat SparseMat::cols_subset(const std::vector<int>& idx) const {
    SparseMat m(rows, static_cast<int>(idx.size()));
    for (int j = 0; j < static_cast<int>(idx.size()); ++j) {
        require_engine(idx[j] >= 0 && idx[j] < cols, "cols_subset: index out of range");
        m.col[j] = col[idx[j]];
    }
    return m;
}

SparseMat SparseMat::rows_slice(int r0, int r1) const {
    require_engine(0 <= r0 && r0 <= r1 && r1 <= rows, "rows_slice: bad range");
    SparseMat m(r1 - r0, cols);
    for (int j = 0; j < cols; ++j)
        for (const auto& [i, v] : col[j])
            if (i >= r0 && i < r1) m.col[j].emplace_back(i - r0, v);
    return m;
}

SVec SparseMat::apply(const SVec& v) const {
    SVec out;
    for (const auto& [j, x] : v) {
        require_engine(j >= 0 && j < cols, "apply: index out of range");
        svec_axpy(out, x, col[j]);
    }
    return out;
}

std::vector<Scalar> SparseMat::apply_dense(const std::vector<Scalar>& v) const {
    require_engine(static_cast<int>(v.size()) == cols, "apply_dense: size mismatch");
    return svec_to_dense(apply(svec_from_dense(v)), rows);
}

SparseMat operator*(const SparseMat& a, const SparseMat& b) {
    require_engine(a.cols == b.rows, "matmul: shape mismatch");
    SparseMat m(a.rows, b.cols);
    for (int j = 0; j < b.cols; ++j) m.col[j] = a.apply(b.col[j]);
    return m;
}

SparseMat operator+(const SparseMat& a, const SparseMat& b) {
    require_engine(a.rows == b.rows && a.cols == b.cols, "add: shape mismatch");
    SparseMat m = a;
    for (int j = 0; j < b.cols; ++j) svec_axpy(m.col[j], Scalar(1), b.col[j]);
    return m;
}

SparseMat operator-(const SparseMat& a, const SparseMat& b) {
    require_engine(a.rows == b.rows && a.cols == b.cols, "sub: shape mismatch");
    SparseMat m = a;
    for (int j = 0; j < b.cols; ++j) svec_axpy(m.col[j], Scalar(-1), b.col[j]);
    return m;
}

SparseMat SparseMat::scaled(const Scalar& c) const {
    SparseMat m(rows, cols);
    for (int j = 0; j < cols; ++j) m.col[j] = svec_scaled(col[j], c);
    return m;
}

bool operator==(const SparseMat& a, const SparseMat& b) {
    return a.rows == b.rows && a.cols == b.cols && a.col == b.col;
}

// --- elimination -----------------------------------------------------------
//
// Invariant: every pivot column is reduced against all pivots created before it,
// so it has no entry in any earlier pivot row. Reducing a vector by always
// eliminating the entry whose pivot has the smallest creation index therefore
// strictly increases that index and terminates after at most rank() steps.

SVec Eliminator::reduce(SVec v, SVec* combo) const {
    for (;;) {
        int best = -1;
        int best_row = -1;
        for (const auto& [r, x] : v) {
            auto it = row_pivot_.find(r);
            if (it != row_pivot_.end() && (best == -1 || it->second < best)) {
                best = it->second;
                best_row = r;
            }
        }
        if (best == -1) return v;
        const Pivot& p = pivots_[best];
        Scalar coef = svec_at(v, best_row); // pivot entry normalized to 1
        svec_axpy(v, -coef, p.colv);
        if (combo != nullptr) svec_axpy(*combo, -coef, p.combo);
    }
}

bool Eliminator::add_column(const SVec& v, int original_index) {
    SVec combo;
    if (track_) combo.emplace_back(original_index, Scalar(1));
    SVec red = reduce(v, track_ ? &combo : nullptr);
    // combo now satisfies red = A * combo (with the new column included).
    if (red.empty()) {
        if (track_) kernel_.push_back(std::move(combo));
        return false;
    }
    int prow = -1;
    int occ = -1;
    for (const auto& [r, x] : red) {
        auto it = row_count_.find(r);
        int c = (it == row_count_.end()) ? 0 : it->second;
        if (prow == -1 || c < occ || (c == occ && r < prow)) {
            prow = r;
            occ = c;
        }
    }
    Scalar pv = svec_at(red, prow);
    Scalar inv = Scalar(1) / pv;
    Pivot p;
    p.colv = svec_scaled(red, inv);
    if (track_) p.combo = svec_scaled(combo, inv);
    p.prow = prow;
    for (const auto& [r, x] : p.colv) ++row_count_[r];
    row_pivot_[prow] = static_cast<int>(pivots_.size());
    pivots_.push_back(std::move(p));
    return true;
}

std::optional<SVec> Eliminator::coords_for(const SVec& v) const {
    require_engine(track_, "coords_for requires combination tracking");
    SVec combo;
    SVec red = reduce(v, &combo);
    if (!red.empty()) return std::nullopt;
    // 0 = v + A*combo  =>  A*(-combo) = v
    for (auto& [i, x] : combo) x = -x;
    return combo;
}

std::vector<SVec> Eliminator::image_basis() const {
    std::vector<SVec> out;
    out.reserve(pivots_.size());
    for (const auto& p : pivots_) out.push_back(p.colv);
    return out;
}

QuotientSpace::QuotientSpace(const SparseMat& u, const SparseMat& v) {
    require_engine(u.rows == v.rows, "quotient space: ambient mismatch");
    for (int j = 0; j < v.cols; ++j) span_.add_column(v.col[j], -1 - j);
    std::vector<SVec> chosen;
    for (int j = 0; j < u.cols; ++j)
        if (span_.add_column(u.col[j], static_cast<int>(chosen.size())))
            chosen.push_back(u.col[j]);
    reps_ = SparseMat(u.rows, static_cast<int>(chosen.size()));
    for (int j = 0; j < reps_.cols; ++j) reps_.col[j] = chosen[j];
}

std::vector<Scalar> QuotientSpace::coords(const SVec& ambient) const {
    auto combo = span_.coords_for(ambient);
    require_engine(combo.has_value(), "quotient coords: vector outside the span");
    std::vector<Scalar> out(reps_.cols, Scalar(0));
    for (const auto& [i, v] : *combo)
        if (i >= 0) out[i] = v; // negative indices belong to the collapsed part
    return out;
}

int rank_of(const SparseMat& a) {
    Eliminator e(false);
    for (int j = 0; j < a.cols; ++j) e.add_column(a.col[j], j);
    return e.rank();
}

Decomposition decompose(const SparseMat& a, bool want_kernel, bool want_image) {
    Eliminator e(want_kernel);
    for (int j = 0; j < a.cols; ++j) e.add_column(a.col[j], j);
    Decomposition d;
    d.rank = e.rank();
    if (want_kernel) {
        const auto& ks = e.kernel_combos();
        d.kernel = SparseMat(a.cols, static_cast<int>(ks.size()));
        for (int j = 0; j < static_cast<int>(ks.size()); ++j) d.kernel.col[j] = ks[j];
    }
    if (want_image) {
        auto im = e.image_basis();
        d.image = SparseMat(a.rows, static_cast<int>(im.size()));
        for (int j = 0; j < static_cast<int>(im.size()); ++j) d.image.col[j] = im[j];
    }
    return d;
}

std::optional<std::vector<Scalar>> solve(const SparseMat& a, const std::vector<Scalar>& b) {
    require_engine(static_cast<int>(b.size()) == a.rows, "solve: size mismatch");
    Eliminator e(true);
    for (int j = 0; j < a.cols; ++j) e.add_column(a.col[j], j);
    auto coords = e.coords_for(svec_from_dense(b));
    if (!coords) return std::nullopt;
    return svec_to_dense(*coords, a.cols);
}

SparseMat col_span_basis(const SparseMat& a) {
    return decompose(a, false, true).image;
}

int quotient_dim(const SparseMat& u, const SparseMat& v) {
    require_engine(u.rows == v.rows, "quotient_dim: row mismatch");
    return rank_of(v.hstack(u)) - rank_of(v);
}

} // namespace cornerhom::qlinalg
