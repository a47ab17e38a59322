#include "cornerhom/tower.hpp"

#include "cornerhom/errors.hpp"

namespace cornerhom::spectral {

using complexes::HomologySpace;
using complexes::induced_on_homology;

void Tower::validate() const {
    require_engine(maps.size() + 1 == dims.size() || (dims.empty() && maps.empty()),
                   "tower: need one map between consecutive levels");
    for (std::size_t j = 0; j < maps.size(); ++j)
        require_engine(maps[j].rows == dims[j] && maps[j].cols == dims[j + 1],
                       "tower: map shape");
}

namespace {

bool is_isomorphism(const SparseMat& m) {
    return m.rows == m.cols && qlinalg::rank_of(m) == m.rows;
}

} // namespace

TowerLimits tower_limits(const Tower& t) {
    t.validate();
    require_input(!t.dims.empty(), "tower: no levels");
    TowerLimits out;
    switch (t.tail) {
        case TailPattern::constant:
            // an element is freely chosen at the stable end and pushed down
            out.lim = t.dims.back();
            out.lim1 = 0;
            out.certificate = "declared constant tail";
            return out;
        case TailPattern::zero:
            // eventually-zero systems have invertible shift-difference map
            out.lim = 0;
            out.lim1 = 0;
            out.certificate = "declared vanishing tail";
            return out;
        case TailPattern::none:
            if (t.maps.size() < 2)
                throw cornerhom::budget_error(
                    "tower window too short to certify a stable tail");
            if (!is_isomorphism(t.maps[t.maps.size() - 1]) ||
                !is_isomorphism(t.maps[t.maps.size() - 2]))
                throw cornerhom::budget_error(
                    "tower window shows no stable pattern; widen it or declare a tail");
            out.lim = t.dims.back();
            out.lim1 = 0;
            out.certificate = "stable window: last two maps are isomorphisms";
            return out;
    }
    throw cornerhom::engine_defect("tower: unreachable tail pattern");
}

void ComplexTower::validate() const {
    require_engine(maps.size() + 1 == levels.size(), "complex tower: map count");
    for (std::size_t j = 0; j < maps.size(); ++j)
        require_engine(maps[j].commutes(levels[j + 1], levels[j]),
                       "complex tower: structure map is not a chain map");
}

Tower ComplexTower::homology_tower(int q) const {
    Tower t;
    t.tail = tail;
    std::vector<HomologySpace> hs;
    hs.reserve(levels.size());
    for (const auto& c : levels) hs.emplace_back(c, q);
    for (const auto& h : hs) t.dims.push_back(h.dim());
    for (std::size_t j = 0; j < maps.size(); ++j)
        t.maps.push_back(
            induced_on_homology(maps[j], levels[j + 1], levels[j], q, hs[j + 1], hs[j]));
    return t;
}

std::vector<LimSequenceRow> exact_lim_sequence_check(const ComplexTower& ct, int qmax) {
    ct.validate();
    require_input(!ct.levels.empty(), "complex tower: no levels");
    for (std::size_t j = 0; j < ct.maps.size(); ++j) {
        const ChainComplex& src = ct.levels[j + 1];
        const ChainComplex& dst = ct.levels[j];
        for (int q = 0; q <= dst.top(); ++q)
            require_input(qlinalg::rank_of(ct.maps[j].at(q, src, dst)) == dst.dim(q),
                          "complex tower: structure map is not surjective at level " +
                              std::to_string(j));
    }
    if (ct.tail == TailPattern::none) {
        // the complexes themselves must be visibly stable for the last level
        // to stand in for the limit
        require_input(ct.maps.size() >= 2, "complex tower window too short");
        for (std::size_t j = ct.maps.size() - 2; j < ct.maps.size(); ++j) {
            const ChainComplex& src = ct.levels[j + 1];
            const ChainComplex& dst = ct.levels[j];
            for (int q = 0; q <= std::max(src.top(), dst.top()); ++q)
                if (!is_isomorphism(ct.maps[j].at(q, src, dst)))
                    throw cornerhom::budget_error(
                        "complex tower window shows no stable pattern");
        }
    }
    std::vector<LimSequenceRow> rows;
    const ChainComplex& last = ct.levels.back();
    for (int q = 0; q <= qmax; ++q) {
        LimSequenceRow row;
        row.q = q;
        row.h_of_lim = (ct.tail == TailPattern::zero) ? 0 : last.betti(q);
        row.lim_h = tower_limits(ct.homology_tower(q)).lim;
        row.lim1_h_above = tower_limits(ct.homology_tower(q + 1)).lim1;
        require_engine(row.h_of_lim == row.lim_h + row.lim1_h_above,
                       "limit sequence fails to balance dimensions");
        rows.push_back(row);
    }
    return rows;
}

PatternReport ml_pattern_check(const Tower& t, const std::vector<SparseMat>& sub) {
    t.validate();
    require_input(sub.size() == t.dims.size(),
                  "pattern check: one subspace basis per level");
    std::vector<int> bdim(sub.size());
    for (std::size_t n = 0; n < sub.size(); ++n) {
        require_input(sub[n].rows == t.dims[n], "pattern check: subspace ambient dim");
        bdim[n] = qlinalg::rank_of(sub[n]);
        require_input(bdim[n] == sub[n].cols, "pattern check: subspace basis dependent");
    }
    PatternReport rep;
    rep.quotient_dim = t.dims.empty() ? 0 : t.dims[0] - bdim[0];
    for (std::size_t j = 0; j < t.maps.size(); ++j) {
        SparseMat restricted = t.maps[j] * sub[j + 1];
        if (!restricted.is_zero()) {
            // distinguish a broken hypothesis from a broken precondition
            qlinalg::Eliminator span(false);
            for (int c = 0; c < sub[j].cols; ++c) span.add_column(sub[j].col[c], c);
            for (int c = 0; c < restricted.cols; ++c)
                require_input(span.in_span(restricted.col[c]),
                              "pattern check: subspace not preserved at level " +
                                  std::to_string(j));
            rep.failing_level = static_cast<int>(j);
            rep.reason = "map does not vanish on the subspace";
            return rep;
        }
        // induced quotient map: full rank between equal quotient dimensions
        int qsrc = t.dims[j + 1] - bdim[j + 1];
        int qdst = t.dims[j] - bdim[j];
        int above = qlinalg::rank_of(t.maps[j].hstack(sub[j])) - bdim[j];
        if (qsrc != qdst || above != qdst) {
            rep.failing_level = static_cast<int>(j);
            rep.reason = "induced quotient map is not an isomorphism";
            return rep;
        }
    }
    rep.ok = true;
    rep.failing_level = -1;
    return rep;
}

} // namespace cornerhom::spectral
