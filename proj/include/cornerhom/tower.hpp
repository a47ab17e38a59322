#pragma once

#include <string>

#include "cornerhom/chain.hpp"

namespace cornerhom::spectral {

using complexes::ChainComplex;
using complexes::ChainMap;
using qlinalg::SparseMat;

/// What happens beyond the materialized levels of an inverse system
/// V_0 <- V_1 <- V_2 <- ...
///   constant: all later spaces equal the last one, with identity maps
///   zero:     all later spaces vanish
///   none:     nothing declared; limits need a visibly stable window
enum class TailPattern { constant, zero, none };

struct Tower {
    std::vector<int> dims;
    std::vector<SparseMat> maps; // maps[j]: dims[j] x dims[j+1]
    TailPattern tail = TailPattern::none;

    int levels() const { return static_cast<int>(dims.size()); }
    void validate() const;
};

struct TowerLimits {
    int lim = 0;
    int lim1 = 0;
    std::string certificate; // how the tail was justified
};

/// lim and lim^1 of the system. For TailPattern::none the last two
/// transition maps must be isomorphisms (a visibly constant window);
/// otherwise this throws budget_error, because no finite window can
/// determine the limits of an undeclared tail.
TowerLimits tower_limits(const Tower& t);

/// Tower of chain complexes with structure maps levels[j+1] -> levels[j].
struct ComplexTower {
    std::vector<ChainComplex> levels;
    std::vector<ChainMap> maps;
    TailPattern tail = TailPattern::none;

    Tower homology_tower(int q) const; // induced tower of H_q
    void validate() const;             // chain maps commute, shapes line up
};

/// For a tower of complexes with surjective structure maps whose limit is
/// reached at the last level (constant tail or visibly constant window),
/// homology of the limit must split as an extension of lim H_q by
/// lim^1 H_{q+1}. Verifies
///     dim H_q(last level) == lim H_q + lim^1 H_{q+1}
/// for all q <= qmax and returns the three numbers per degree.
/// A non-surjective structure map is rejected as an input error.
struct LimSequenceRow {
    int q;
    int h_of_lim;
    int lim_h;
    int lim1_h_above;
};
std::vector<LimSequenceRow> exact_lim_sequence_check(const ComplexTower& ct, int qmax);

/// The two-hypothesis shortcut for towers that never become constant: each
/// level splits as a preserved subspace sub[n] inside level n, the maps
/// vanish on the subspaces and induce isomorphisms on the quotients. Both
/// limits are then decided by any single level: lim = quotient, lim^1 = 0.
/// A subspace not carried into the next one is an input error; a failed
/// hypothesis is reported with the level where it broke.
struct PatternReport {
    bool ok = false;
    int failing_level = -1;
    std::string reason;
    int quotient_dim = 0; // dim(level/sub), constant when ok
};
PatternReport ml_pattern_check(const Tower& t, const std::vector<SparseMat>& sub);

} // namespace cornerhom::spectral
