#include "cornerhom/chain.hpp"

#include "cornerhom/errors.hpp"

namespace cornerhom::complexes {

using qlinalg::Eliminator;
using qlinalg::svec_from_dense;
using qlinalg::svec_to_dense;

ChainComplex::ChainComplex(std::vector<int> dims, std::vector<SparseMat> diffs)
    : dims_(std::move(dims)), d_(std::move(diffs)) {
    require_engine(d_.size() == dims_.size(), "complex: need one matrix per degree");
    for (int q = 0; q <= top(); ++q) require_engine(dims_[q] >= 0, "complex: negative dim");
    if (!d_.empty()) d_[0] = SparseMat(0, dims_[0]);
    for (int q = 1; q <= top(); ++q)
        require_engine(d_[q].rows == dims_[q - 1] && d_[q].cols == dims_[q],
                       "complex: boundary shape mismatch");
    rank_cache_.assign(dims_.size(), -1);
}

SparseMat ChainComplex::boundary(int q) const {
    if (q >= 1 && q <= top()) return d_[q];
    return SparseMat(dim(q - 1), dim(q));
}

bool ChainComplex::check_squares_zero() const {
    for (int q = 2; q <= top(); ++q)
        if (!(d_[q - 1] * d_[q]).is_zero()) return false;
    return true;
}

int ChainComplex::boundary_rank(int q) const {
    if (q < 1 || q > top()) return 0;
    if (rank_cache_[q] < 0) rank_cache_[q] = qlinalg::rank_of(d_[q]);
    return rank_cache_[q];
}

int ChainComplex::betti(int q) const {
    if (q < 0 || q > top()) return 0;
    return dim(q) - boundary_rank(q) - boundary_rank(q + 1);
}

std::vector<int> ChainComplex::betti_all() const {
    std::vector<int> out(top() + 1);
    for (int q = 0; q <= top(); ++q) out[q] = betti(q);
    return out;
}

long ChainComplex::euler() const {
    long e = 0;
    for (int q = 0; q <= top(); ++q) e += (q % 2 == 0 ? 1 : -1) * static_cast<long>(dims_[q]);
    return e;
}

HomologySpace::HomologySpace(const ChainComplex& c, int q)
    : c_(&c),
      q_(q),
      space_(qlinalg::decompose(c.boundary(q), true, false).kernel,
             qlinalg::col_span_basis(c.boundary(q + 1))) {}

std::vector<Scalar> HomologySpace::coords(const SVec& cycle) const {
    require_engine(c_->boundary(q_).apply(cycle).empty(),
                   "homology coords requested for a non-cycle");
    return space_.coords(cycle);
}

SparseMat ChainMap::at(int q, const ChainComplex& src, const ChainComplex& dst) const {
    if (q >= 0 && q < static_cast<int>(f.size()) && f[q].cols == src.dim(q) &&
        f[q].rows == dst.dim(q))
        return f[q];
    return SparseMat(dst.dim(q), src.dim(q));
}

bool ChainMap::commutes(const ChainComplex& src, const ChainComplex& dst) const {
    int t = std::max(src.top(), dst.top());
    for (int q = 1; q <= t; ++q) {
        SparseMat lhs = at(q - 1, src, dst) * src.boundary(q);
        SparseMat rhs = dst.boundary(q) * at(q, src, dst);
        if (!(lhs - rhs).is_zero()) return false;
    }
    return true;
}

SparseMat induced_on_homology(const ChainMap& f, const ChainComplex& src,
                              const ChainComplex& dst, int q,
                              const HomologySpace& hsrc, const HomologySpace& hdst) {
    SparseMat fq = f.at(q, src, dst);
    SparseMat out(hdst.dim(), hsrc.dim());
    for (int j = 0; j < hsrc.dim(); ++j) {
        SVec img = fq.apply(hsrc.reps().col[j]);
        auto co = hdst.coords(img);
        for (int i = 0; i < hdst.dim(); ++i)
            if (!co[i].is_zero()) out.set(i, j, co[i]);
    }
    return out;
}

namespace {

// exactness of  X -g-> Y -h-> Z  at Y, given matrices of g and h
bool exact_at(const SparseMat& g, const SparseMat& h) {
    if (!(h * g).is_zero()) return false;
    return qlinalg::rank_of(g) + qlinalg::rank_of(h) == g.rows;
}

} // namespace

LongExactSequence les_of_ses(const ChainComplex& a, const ChainComplex& b,
                             const ChainComplex& c, const ChainMap& incl,
                             const ChainMap& proj) {
    int t = std::max({a.top(), b.top(), c.top()});
    require_engine(incl.commutes(a, b), "ses: inclusion is not a chain map");
    require_engine(proj.commutes(b, c), "ses: projection is not a chain map");
    for (int q = 0; q <= t; ++q) {
        SparseMat iq = incl.at(q, a, b);
        SparseMat pq = proj.at(q, b, c);
        require_engine(qlinalg::rank_of(iq) == a.dim(q), "ses: inclusion not injective");
        require_engine(qlinalg::rank_of(pq) == c.dim(q), "ses: projection not surjective");
        require_engine((pq * iq).is_zero() &&
                           qlinalg::rank_of(iq) + qlinalg::rank_of(pq) == b.dim(q),
                       "ses: not exact in the middle");
    }

    std::vector<HomologySpace> HA, HB, HC;
    HA.reserve(t + 1);
    for (int q = 0; q <= t; ++q) {
        HA.emplace_back(a, q);
        HB.emplace_back(b, q);
        HC.emplace_back(c, q);
    }

    LongExactSequence les;
    les.ha.resize(t + 1);
    les.hb.resize(t + 1);
    les.hc.resize(t + 1);
    les.alpha.resize(t + 1);
    les.beta.resize(t + 1);
    les.delta.resize(t + 1);
    for (int q = 0; q <= t; ++q) {
        les.ha[q] = HA[q].dim();
        les.hb[q] = HB[q].dim();
        les.hc[q] = HC[q].dim();
        les.alpha[q] = induced_on_homology(incl, a, b, q, HA[q], HB[q]);
        les.beta[q] = induced_on_homology(proj, b, c, q, HB[q], HC[q]);
    }

    // Connecting map: lift a C-cycle through p, push with d, pull back through i.
    for (int q = 0; q <= t; ++q) {
        SparseMat iq1 = incl.at(q - 1, a, b);
        SparseMat pq = proj.at(q, b, c);
        SparseMat dm(q >= 1 ? HA[q - 1].dim() : 0, HC[q].dim());
        for (int j = 0; j < HC[q].dim(); ++j) {
            auto lift = qlinalg::solve(pq, qlinalg::svec_to_dense(HC[q].reps().col[j], c.dim(q)));
            require_engine(lift.has_value(), "ses: lift through projection failed");
            std::vector<Scalar> db = b.boundary(q).apply_dense(*lift);
            auto pre = qlinalg::solve(iq1, db);
            require_engine(pre.has_value(), "ses: boundary of lift not in the subcomplex");
            if (q >= 1) {
                auto co = HA[q - 1].coords(qlinalg::svec_from_dense(*pre));
                for (int i = 0; i < HA[q - 1].dim(); ++i)
                    if (!co[i].is_zero()) dm.set(i, j, co[i]);
            }
        }
        les.delta[q] = dm;
    }

    les.exact = true;
    for (int q = 0; q <= t; ++q) {
        // at H_q(B): alpha then beta
        if (!exact_at(les.alpha[q], les.beta[q])) les.exact = false;
        // at H_q(C): beta then delta
        if (!exact_at(les.beta[q], les.delta[q])) les.exact = false;
        // at H_q(A): delta[q+1] then alpha[q]
        SparseMat din = (q + 1 <= t) ? les.delta[q + 1] : SparseMat(les.ha[q], 0);
        if (q + 1 <= t && !exact_at(din, les.alpha[q])) les.exact = false;
    }
    return les;
}

ChainComplex shift_up(const ChainComplex& c, int by) {
    require_engine(by >= 0, "shift_up: negative shift");
    std::vector<int> dims(c.top() + 1 + by, 0);
    std::vector<SparseMat> diffs(c.top() + 1 + by);
    for (int q = 0; q <= c.top(); ++q) dims[q + by] = c.dim(q);
    for (int q = 0; q <= c.top(); ++q) diffs[q + by] = c.boundary(q);
    for (int q = 0; q < by; ++q) diffs[q] = SparseMat(q > 0 ? 0 : 0, 0);
    // boundary at the seam: C_{by} -> 0 has the right shape already
    if (by > 0 && c.top() >= 0) diffs[by] = SparseMat(0, c.dim(0));
    return ChainComplex(std::move(dims), std::move(diffs));
}

ChainComplex truncate_top(const ChainComplex& c, int new_top) {
    require_engine(new_top >= 0, "truncate_top: negative degree");
    int t = std::min(new_top, c.top());
    std::vector<int> dims(t + 1);
    std::vector<SparseMat> diffs(t + 1);
    for (int q = 0; q <= t; ++q) {
        dims[q] = c.dim(q);
        diffs[q] = c.boundary(q);
    }
    return ChainComplex(std::move(dims), std::move(diffs));
}

ChainComplex dualize(const ChainComplex& c) {
    int t = c.top();
    std::vector<int> dims(t + 1);
    std::vector<SparseMat> diffs(t + 1);
    for (int q = 0; q <= t; ++q) dims[q] = c.dim(t - q);
    // the degree-q map of the dual is the transposed degree-(t-q+1) boundary
    for (int q = 1; q <= t; ++q) diffs[q] = c.boundary(t - q + 1).transpose();
    diffs[0] = SparseMat(0, dims[0]);
    return ChainComplex(std::move(dims), std::move(diffs));
}

} // namespace cornerhom::complexes
