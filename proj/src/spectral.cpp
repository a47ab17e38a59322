#include "cornerhom/spectral.hpp"

#include "cornerhom/errors.hpp"

namespace cornerhom::spectral {

using qlinalg::col_span_basis;
using qlinalg::Eliminator;
using qlinalg::rank_of;

SparseMat FilteredComplex::basis(int k, int q) const {
    if (q < 0 || q > c.top()) return SparseMat(c.dim(q), 0);
    if (k < kmin) return SparseMat(c.dim(q), 0);
    if (k > kmax) k = kmax;
    return level[k - kmin][q];
}

void FilteredComplex::validate() const {
    require_engine(kmin <= kmax, "filtration: empty level range");
    require_engine(static_cast<int>(level.size()) == kmax - kmin + 1,
                   "filtration: level count");
    for (int k = kmin; k <= kmax; ++k) {
        require_engine(static_cast<int>(level[k - kmin].size()) == c.top() + 1,
                       "filtration: per-degree basis count");
        for (int q = 0; q <= c.top(); ++q) {
            const SparseMat& b = basis(k, q);
            require_engine(b.rows == c.dim(q), "filtration: basis ambient dim");
            require_engine(rank_of(b) == b.cols, "filtration: basis not independent");
            // nested in the next level
            if (k < kmax) {
                Eliminator up(false);
                const SparseMat& nb = basis(k + 1, q);
                for (int j = 0; j < nb.cols; ++j) up.add_column(nb.col[j], j);
                for (int j = 0; j < b.cols; ++j)
                    require_engine(up.in_span(b.col[j]), "filtration: levels not nested");
            }
            // exhaustive at the top
            if (k == kmax)
                require_engine(b.cols == c.dim(q), "filtration: top level must span");
            // boundary preserves the level
            Eliminator down(false);
            const SparseMat& lb = basis(k, q - 1);
            for (int j = 0; j < lb.cols; ++j) down.add_column(lb.col[j], j);
            SparseMat db = c.boundary(q) * b;
            for (int j = 0; j < db.cols; ++j)
                require_engine(down.in_span(db.col[j]),
                               "filtration: boundary does not preserve levels");
        }
    }
}

ChainComplex FilteredComplex::graded_piece(int k) const {
    std::vector<QuotientSpace> qs;
    qs.reserve(c.top() + 1);
    for (int q = 0; q <= c.top(); ++q) qs.emplace_back(basis(k, q), basis(k - 1, q));
    std::vector<int> dims(c.top() + 1);
    std::vector<SparseMat> diffs(c.top() + 1);
    for (int q = 0; q <= c.top(); ++q) dims[q] = qs[q].dim();
    for (int q = 1; q <= c.top(); ++q) {
        SparseMat d(dims[q - 1], dims[q]);
        for (int j = 0; j < dims[q]; ++j) {
            SVec img = c.boundary(q).apply(qs[q].reps().col[j]);
            auto co = qs[q - 1].coords(img);
            for (int i = 0; i < dims[q - 1]; ++i)
                if (!co[i].is_zero()) d.set(i, j, co[i]);
        }
        diffs[q] = std::move(d);
    }
    return ChainComplex(std::move(dims), std::move(diffs));
}

SpectralSequence::SpectralSequence(const FilteredComplex& f) : f_(&f) {}

// Z^r_{k, h} = { x in F_k C_q : dx in F_{k-r} C_{q-1} },  q = k + h.
// The result only depends on which actual levels F_k and F_{k-r} clamp to,
// so the cache is keyed on the clamped pair.
SparseMat SpectralSequence::z_span(int r, int k, int q) {
    if (q < 0 || q > f_->c.top()) return SparseMat(f_->c.dim(q), 0);
    if (k < f_->kmin) return SparseMat(f_->c.dim(q), 0);
    int kc = std::min(k, f_->kmax);
    int tc = std::min(k - r, f_->kmax);
    if (tc < f_->kmin) tc = f_->kmin - 1; // empty level
    auto key = std::make_tuple(kc, tc, q);
    auto it = zcache_.find(key);
    if (it != zcache_.end()) return it->second;

    SparseMat fk = f_->basis(kc, q);
    SparseMat target = f_->basis(tc, q - 1);
    // kernel of [ d*fk | target ]: first block of coordinates gives the y's
    SparseMat dfk = f_->c.boundary(q) * fk;
    SparseMat ker = qlinalg::decompose(dfk.hstack(target), true, false).kernel;
    SparseMat ys = ker.rows_slice(0, fk.cols);
    SparseMat span = col_span_basis(fk * ys);
    zcache_[key] = span;
    return span;
}

QuotientSpace& SpectralSequence::entry(int r, int k, int h) {
    auto key = std::make_tuple(r, k, h);
    auto it = ecache_.find(key);
    if (it != ecache_.end()) return it->second;
    int q = k + h;
    SparseMat z = z_span(r, k, q);
    SparseMat inner = z_span(r - 1, k - 1, q);
    SparseMat dz_src = z_span(r - 1, k + r - 1, q + 1);
    SparseMat dz = col_span_basis(f_->c.boundary(q + 1) * dz_src);
    return ecache_.emplace(key, QuotientSpace(z, inner.hstack(dz))).first->second;
}

int SpectralSequence::dim(int r, int k, int h) {
    require_engine(r >= 1, "spectral page index must be >= 1");
    return entry(r, k, h).dim();
}

SparseMat SpectralSequence::differential(int r, int k, int h) {
    require_engine(r >= 1, "spectral page index must be >= 1");
    QuotientSpace& src = entry(r, k, h);
    QuotientSpace& dst = entry(r, k - r, h + r - 1);
    SparseMat out(dst.dim(), src.dim());
    int q = k + h;
    for (int j = 0; j < src.dim(); ++j) {
        SVec img = f_->c.boundary(q).apply(src.reps().col[j]);
        auto co = dst.coords(img);
        for (int i = 0; i < dst.dim(); ++i)
            if (!co[i].is_zero()) out.set(i, j, co[i]);
    }
    return out;
}

bool SpectralSequence::first_page_matches_graded() {
    for (int k = f_->kmin; k <= f_->kmax; ++k) {
        ChainComplex gr = f_->graded_piece(k);
        require_engine(gr.check_squares_zero(), "graded piece: d*d != 0");
        for (int n = 0; n <= f_->c.top(); ++n)
            if (dim(1, k, n - k) != gr.betti(n)) return false;
    }
    return true;
}

SpectralSequence::Certificate SpectralSequence::converge() {
    Certificate cert;
    int rinf = infinity_page();
    int top = f_->c.top();

    // composite of consecutive page differentials must vanish
    for (int r = 1; r < rinf; ++r)
        for (int k = f_->kmin; k <= f_->kmax; ++k)
            for (int n = 0; n <= top; ++n) {
                int h = n - k;
                if (dim(r, k, h) == 0) continue;
                SparseMat d1 = differential(r, k, h);
                SparseMat d2 = differential(r, k - r, h + r - 1);
                require_engine((d2 * d1).is_zero(), "page differential squares to nonzero");
            }

    auto page_dims = [&](int r) {
        std::vector<int> out;
        for (int k = f_->kmin; k <= f_->kmax; ++k)
            for (int n = 0; n <= top; ++n) out.push_back(dim(r, k, n - k));
        return out;
    };
    std::vector<int> einf = page_dims(rinf);
    cert.stable_page = rinf;
    for (int r = rinf - 1; r >= 1; --r) {
        if (page_dims(r) == einf)
            cert.stable_page = r;
        else
            break;
    }

    cert.einf_by_degree.assign(top + 1, 0);
    for (int n = 0; n <= top; ++n)
        for (int k = f_->kmin; k <= f_->kmax; ++k)
            cert.einf_by_degree[n] += dim(rinf, k, n - k);
    cert.betti = f_->c.betti_all();
    cert.converged = cert.einf_by_degree == cert.betti;
    require_engine(cert.converged, "spectral sequence does not abut to homology");
    return cert;
}

} // namespace cornerhom::spectral
