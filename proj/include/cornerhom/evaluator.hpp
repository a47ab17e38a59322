#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cornerhom/corners.hpp"
#include "cornerhom/hochschild.hpp"
#include "cornerhom/tower.hpp"

namespace cornerhom::evaluator {

using complexes::ChainComplex;
using corners::CornerManifold;
using corners::FaceSubset;
using hochschild::BasisKey;
using hochschild::Tuple;
using qlinalg::Scalar;
using qlinalg::SparseMat;

struct Budgets {
    int order_low = -4;  // order window bottom (band floor of chain windows)
    int order_high = 1;  // order window top
    int pole_bound = 4;  // |w| spread allowed in chain tuples
    int q_max = 2;
};

struct Assumptions {
    bool rational_iso = false;     // cosphere data transported from the base
    bool trivial_cosphere = false; // S*M = M x sphere over every face
};

struct Manifest {
    std::string name;
    CornerManifold m;
    FaceSubset x;
    std::map<int, int> contact; // hyperface id -> contact exponent
    Assumptions assumptions;
    Budgets budgets;
};

/// JSON manifest -> validated objects. Schema errors carry the offending
/// path; X must be a closed (downward-closed) union of faces.
Manifest parse_manifest(const std::string& text);
Manifest load_manifest_file(const std::string& path);

/// The cosphere bundle as a corner manifold over the same face lattice.
/// Under the trivial-cosphere flag each closed face picks up one sphere
/// factor: betti vectors by Kunneth, cells as one copy of the base cells
/// per fiber cell (the fiber sphere uses its minimal cell structure, so the
/// extra copy carries the base boundary shifted up by n-1).
struct CosphereModel {
    CornerManifold base;
    CornerManifold cosphere;
    int n = 0; // dim of the base; dim of the cosphere is 2n-1
};
CosphereModel build_cosphere(const Manifest& man);

/// Hochschild dims of the Laurent completion, read off the glued cosphere:
/// p[j] is the degree-j relative cohomology of the glued space modulo the
/// preimage of X, and hh[q] = p[2n-q] + p[2n-q-1] (the cyclic circle).
/// Refuses manifests that do not declare the rational-isomorphism
/// hypothesis; X != empty needs cell data.
struct LaurentTable {
    std::vector<int> p;  // degrees 0..2n-1
    std::vector<int> hh; // degrees 0..2n
};
LaurentTable eval_hh_laurent(const Manifest& man);

enum class HPVariant { full, order_zero, laurent };
struct HPDims {
    int even = 0;
    int odd = 0;
};
/// Periodic dims as (even, odd) totals. full: the whole symbol algebra,
/// cosphere times the cyclic circle; order_zero: cosphere only; laurent:
/// totals of eval_hh_laurent (the collapsed tower).
HPDims eval_hp(const Manifest& man, HPVariant v);

/// HC_m = sum_{k>=0} HH_{m-2k}; negative m gives 0.
int eval_hc(const Manifest& man, int m);
/// Stable range m > dim of the cosphere: HC_m must equal the full
/// one-parity sweep of the relative table, and HC_{m+2} must agree.
bool hc_stable_range_check(const Manifest& man, int m);

struct QuotientTraces {
    std::vector<int> quotient_hh; // degrees 0..2n
    bool les_fit = false;         // pair sequence closes up exactly
    int trace_count = 0;          // minimal faces of the base
    int h_top_dim = 0;            // top cohomology over the minimal faces
    std::string note;
};
/// Quotient dims from the preimage of X, the long-exact-sequence fit of the
/// pair, and the trace census over minimal faces. For n >= 2 with orientable
/// minimal faces the equality trace_count == h_top_dim is asserted; for
/// n = 1 both numbers are only reported (disconnected fiber).
QuotientTraces eval_quotient_and_traces(const Manifest& man);

/// The circle symbol model: one branch algebra per component of the
/// cosphere (two rays), exact composition, chain-level truncation only.
struct SymbolModel {
    hochschild::SymbolBranchAlgebra branch;
    int branches = 2;
    Budgets budgets;
};
SymbolModel build_symbol_model(const Budgets& b);
/// Basis count of one weight slot of one branch inside the order window.
int model_slot_count(const SymbolModel& model, int w);

/// Windowed Hochschild dims of the model at Fourier weight 0, stabilized
/// over growing order windows. Truncation budgets manufacture classes of
/// their own (a top-order line whose killer sits one order above the band,
/// floor cycles whose image was cut, cycles whose filler needs more weight
/// spread than the window allows), so the stable number is the rank of the
/// zigzag
///     shallow band <- deep band -> taller band, wider band:
/// honest classes survive every comparison map, truncation classes die on
/// at least one side. Dims are per model (both branches). Throws
/// budget_error when the allowed number of window enlargements passes
/// without two consecutive stages agreeing.
struct StabilizedHH {
    std::vector<int> hh; // degrees 0..qmax
    hochschild::Window window_used;
    int stable_page = -1;     // degeneration page of the last spectral run
    bool einf_consistent = false;
    int steps = 0;
};
StabilizedHH spectral_hh_stabilized(const SymbolModel& model, int qmax,
                                    int max_steps = 5);

/// Forms on one branch of the punctured cotangent space of the circle:
/// coefficients c u^m xi^j with wedge part 1, dx, dxi or dx^dxi.
struct RayForm {
    // (m, j, part) -> coefficient; part indexes {1, dx, dxi, dx^dxi}
    std::map<std::tuple<int, int, int>, Scalar> terms;

    bool operator==(const RayForm&) const = default;
    bool is_zero() const { return terms.empty(); }
    void add(int m, int j, int part, const Scalar& c);
    /// Keep only terms of radial degree r (xi-exponent plus the dxi flag).
    RayForm radial_part(int r) const;
    std::string str() const;
};

/// chi_l(a_0 x ... x a_l) = (1/l!) a_0 da_1 ^ ... ^ da_l.
RayForm ray_chi(const Tuple& t);
/// The codifferential on branch forms; homogeneous of radial degree -1.
RayForm ray_delta(const RayForm& f);
/// Antisymmetrization over the last l slots, no normalization.
std::vector<std::pair<Tuple, Scalar>> antisymmetrize(const Tuple& t);

/// One chain through the first-page identity: b is applied to the
/// antisymmetrized chain with products kept down to two orders below the
/// chain's radial degree T. Passing means the radial-T part of chi(b(...))
/// vanishes and the radial-(T-1) part equals -i delta(chi(...)).
struct D1Sample {
    RayForm lhs_top;  // radial-T part of chi b q(eta): the Gr level
    RayForm lhs_sub;  // radial-(T-1) part: the first-order level
    RayForm rhs;      // -i delta chi q(eta)
    bool ok = false;
};
D1Sample d1_sample(const Tuple& t);

struct D1Report {
    int samples = 0;
    bool ok = true;
    std::string failing; // description of the first bad chain, if any
};
/// Random monomial chains of length 2..4; throws engine_defect on a
/// mismatch, naming the chain.
D1Report d1_check(const SymbolModel& model, int samples, unsigned seed);

/// One cell of the first page of the order-filtered cyclic-type total
/// complex. engine_dim comes from the spectral engine, layer_dim from the
/// per-layer oracle (the same window's graded layer through its own mixed
/// complex); the two must agree exactly. stable_dim is the rank of the
/// map induced by one widening of the width budgets, which strips the
/// classes that only exist because a filler fell outside the window.
struct EC1Cell {
    int k = 0; // order layer (filtration index)
    int h = 0; // complementary degree; total is k+h
    int engine_dim = 0;
    int layer_dim = 0;
    int stable_dim = 0;
};
struct EC1Report {
    std::vector<EC1Cell> cells;            // both branches totalled
    bool engine_matches_layers = false;
    bool negative_tail_vanishes = false;   // k<0, k+h > 1: no stable classes
    std::map<std::pair<int, int>, int> s_rank; // (k, m): S on layer HC_m
    int s_rank_nonzero_offdiag = 0;        // S-ranks seen on k != 0 layers
};
/// Runs the order filtration on the cyclic total complexes of the model
/// window and of its order-capped companion, compares every first-page
/// cell with the graded-layer oracle, certifies the high-degree vanishing
/// below the axis through the widening ranks, and measures the page-1
/// action of the periodicity map on each layer.
EC1Report ec1_check(const SymbolModel& model, int hmax);

} // namespace cornerhom::evaluator
