#include "cornerhom/mixed.hpp"

#include "cornerhom/errors.hpp"

namespace cornerhom::complexes {

SparseMat MixedComplex::b_at(int q) const {
    if (q >= 1 && q <= top()) return b[q];
    return SparseMat(dim(q - 1), dim(q));
}

SparseMat MixedComplex::B_at(int q) const {
    if (q >= 0 && q < top() && q < static_cast<int>(Bop.size())) return Bop[q];
    return SparseMat(dim(q + 1), dim(q));
}

void MixedComplex::validate() const {
    require_engine(static_cast<int>(b.size()) == top() + 1, "mixed: b size");
    for (int q = 1; q <= top(); ++q)
        require_engine(b[q].rows == dims[q - 1] && b[q].cols == dims[q],
                       "mixed: b shape");
    for (int q = 0; q < top(); ++q)
        require_engine(B_at(q).rows == dims[q + 1] && B_at(q).cols == dims[q],
                       "mixed: B shape");
    for (int q = 2; q <= top(); ++q)
        require_engine((b_at(q - 1) * b_at(q)).is_zero(), "mixed: b*b != 0");
    for (int q = 0; q + 2 <= top(); ++q)
        require_engine((B_at(q + 1) * B_at(q)).is_zero(), "mixed: B*B != 0");
    // anticommutator, on degrees where all four corners exist
    for (int q = 0; q + 1 <= top(); ++q) {
        SparseMat acc = b_at(q + 1) * B_at(q);
        if (q >= 1) acc = acc + B_at(q - 1) * b_at(q);
        require_engine(acc.is_zero(), "mixed: bB + Bb != 0");
    }
}

ChainComplex MixedComplex::b_complex() const {
    std::vector<SparseMat> diffs(top() + 1);
    for (int q = 0; q <= top(); ++q) diffs[q] = b_at(q);
    return ChainComplex(dims, diffs);
}

CyclicTotal cyclic_total(const MixedComplex& m, int up_to) {
    require_engine(up_to >= 0 && up_to <= m.top(), "cyclic total: degree out of range");
    CyclicTotal t;
    t.offsets.resize(up_to + 1);
    std::vector<int> tdims(up_to + 1, 0);
    for (int n = 0; n <= up_to; ++n) {
        int off = 0;
        for (int k = 0; n - 2 * k >= 0; ++k) {
            t.offsets[n].push_back(off);
            off += m.dim(n - 2 * k);
        }
        tdims[n] = off;
    }
    std::vector<SparseMat> diffs(up_to + 1);
    for (int n = 1; n <= up_to; ++n) {
        SparseMat d(tdims[n - 1], tdims[n]);
        for (int k = 0; n - 2 * k >= 0; ++k) {
            int q = n - 2 * k;
            int src = t.offsets[n][k];
            // b: column k of T_n into column k of T_{n-1} (degree q-1 >= 0 needed)
            if (q >= 1) {
                SparseMat bq = m.b_at(q);
                int dst = t.offsets[n - 1][k];
                for (int j = 0; j < bq.cols; ++j)
                    for (const auto& [i, v] : bq.col[j]) d.set(dst + i, src + j, v);
            }
            // B: column k into column k-1 (degree q+1)
            if (k >= 1) {
                SparseMat Bq = m.B_at(q);
                int dst = t.offsets[n - 1][k - 1];
                for (int j = 0; j < Bq.cols; ++j)
                    for (const auto& [i, v] : Bq.col[j]) d.set(dst + i, src + j, v);
            }
        }
        diffs[n] = std::move(d);
    }
    t.total = ChainComplex(std::move(tdims), std::move(diffs));
    require_engine(t.total.check_squares_zero(), "cyclic total: d*d != 0");
    return t;
}

namespace {

std::vector<int> cyclic_dims_impl(const MixedComplex& m, int qmax, CyclicTotal* keep) {
    require_input(m.top() >= qmax + 1, "mixed complex too short for requested degree");
    CyclicTotal t = cyclic_total(m, qmax + 1);
    std::vector<int> out(qmax + 1);
    for (int q = 0; q <= qmax; ++q) out[q] = t.total.betti(q);
    if (keep != nullptr) *keep = std::move(t);
    return out;
}

} // namespace

std::vector<int> cyclic_homology_dims(const MixedComplex& m, int qmax) {
    return cyclic_dims_impl(m, qmax, nullptr);
}

SbiReport sbi_report(const MixedComplex& m, int qmax) {
    m.validate();
    SbiReport rep;
    rep.qmax = qmax;
    CyclicTotal t;
    rep.hc = cyclic_dims_impl(m, qmax, &t);
    int up_to = qmax + 1;

    ChainComplex bc = truncate_top(m.b_complex(), up_to);
    rep.hh.resize(qmax + 1);
    for (int q = 0; q <= qmax; ++q) rep.hh[q] = bc.betti(q);

    // shifted total, truncated so the projection stays degreewise surjective
    ChainComplex shifted = truncate_top(shift_up(t.total, 2), up_to);

    ChainMap incl;
    incl.f.resize(up_to + 1);
    for (int n = 0; n <= up_to; ++n) {
        SparseMat f(t.total.dim(n), bc.dim(n));
        // column 0 sits at offset 0
        for (int i = 0; i < bc.dim(n); ++i) f.set(i, i, Scalar(1));
        incl.f[n] = std::move(f);
    }

    ChainMap proj; // S: drop column 0, shift columns down
    proj.f.resize(up_to + 1);
    for (int n = 0; n <= up_to; ++n) {
        SparseMat f(shifted.dim(n), t.total.dim(n));
        if (n >= 2) {
            for (int k = 1; k < t.columns(n); ++k) {
                int src = t.offsets[n][k];
                int dst = t.offsets[n - 2][k - 1];
                for (int i = 0; i < m.dim(n - 2 * k); ++i) f.set(dst + i, src + i, Scalar(1));
            }
        }
        proj.f[n] = std::move(f);
    }

    rep.les = les_of_ses(bc, t.total, shifted, incl, proj);
    require_engine(rep.les.exact, "periodicity sequence failed exactness");
    return rep;
}

} // namespace cornerhom::complexes
