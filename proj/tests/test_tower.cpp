#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cornerhom/tower.hpp"

using namespace cornerhom::spectral;
using cornerhom::qlinalg::Scalar;
namespace cxs = cornerhom::complexes;

namespace {

SparseMat ones(int n) { return SparseMat::identity(n); }

ChainComplex circle() {
    SparseMat d1 = SparseMat::from_triplets(
        2, 2,
        {{0, 0, Scalar(-1)}, {1, 0, Scalar(1)}, {0, 1, Scalar(-1)}, {1, 1, Scalar(1)}});
    return ChainComplex({2, 2}, {SparseMat(), d1});
}

} // namespace

TEST_CASE("declared constant tail") {
    Tower t;
    t.dims = {1, 1, 1};
    SparseMat z(1, 1);
    t.maps = {z, ones(1)}; // bottom map kills, tail is identities
    t.tail = TailPattern::constant;
    auto l = tower_limits(t);
    CHECK(l.lim == 1);
    CHECK(l.lim1 == 0);
}

TEST_CASE("declared vanishing tail") {
    Tower t;
    t.dims = {3, 2, 1};
    t.maps = {SparseMat(3, 2), SparseMat(2, 1)};
    t.tail = TailPattern::zero;
    auto l = tower_limits(t);
    CHECK(l.lim == 0);
    CHECK(l.lim1 == 0);
}

TEST_CASE("undeclared tail needs a stable window") {
    Tower good;
    good.dims = {2, 1, 1, 1};
    SparseMat drop(2, 1);
    drop.set(0, 0, Scalar(1));
    good.maps = {drop, ones(1), ones(1)};
    auto l = tower_limits(good);
    CHECK(l.lim == 1);
    CHECK(l.lim1 == 0);
    CHECK(l.certificate.find("stable window") != std::string::npos);

    Tower bad;
    bad.dims = {1, 1, 1};
    bad.maps = {SparseMat(1, 1), SparseMat(1, 1)}; // zero maps, never stable
    CHECK_THROWS_AS(tower_limits(bad), cornerhom::budget_error);

    Tower tiny;
    tiny.dims = {1, 1};
    tiny.maps = {ones(1)};
    CHECK_THROWS_AS(tower_limits(tiny), cornerhom::budget_error);
}

TEST_CASE("limit sequence of a constant complex tower") {
    ComplexTower ct;
    for (int j = 0; j < 4; ++j) ct.levels.push_back(circle());
    for (int j = 0; j < 3; ++j) {
        cxs::ChainMap m;
        m.f = {ones(2), ones(2)};
        ct.maps.push_back(m);
    }
    ct.tail = TailPattern::none; // stable window does the certifying
    auto rows = exact_lim_sequence_check(ct, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].h_of_lim == 1);
    CHECK(rows[0].lim_h == 1);
    CHECK(rows[0].lim1_h_above == 0);
    CHECK(rows[1].h_of_lim == 1);
    CHECK(rows[1].lim_h == 1);
}

TEST_CASE("homology tower of shrinking complexes") {
    // levels: circle <- circle <- circle, but the first map collapses the
    // second edge; homology tower H_1: 1 <- 1 <- 1 with an isomorphism window
    ComplexTower ct;
    for (int j = 0; j < 3; ++j) ct.levels.push_back(circle());
    cxs::ChainMap flip; // exchange the two edges: a degree-1 automorphism
    SparseMat s(2, 2);
    s.set(0, 1, Scalar(1));
    s.set(1, 0, Scalar(1));
    flip.f = {ones(2), s};
    cxs::ChainMap ident;
    ident.f = {ones(2), ones(2)};
    ct.maps = {flip, ident};
    ct.tail = TailPattern::none;
    ct.validate();
    Tower h1 = ct.homology_tower(1);
    CHECK(h1.dims == std::vector<int>{1, 1, 1});
    // the swap acts as -1 on H_1: the induced map is still invertible
    CHECK(!h1.maps[0].at(0, 0).is_zero());
    auto l = tower_limits(h1);
    CHECK(l.lim == 1);
}

TEST_CASE("pattern shortcut certifies non-constant towers") {
    // level = Q^2, subspace = second coordinate, map keeps the first
    // coordinate and kills the second: never an isomorphism window, but the
    // two hypotheses hold at every level
    Tower t;
    t.dims = {2, 2, 2};
    SparseMat keep(2, 2);
    keep.set(0, 0, Scalar(1));
    t.maps = {keep, keep};
    SparseMat e2(2, 1);
    e2.set(1, 0, Scalar(1));
    std::vector<SparseMat> sub = {e2, e2, e2};
    auto rep = ml_pattern_check(t, sub);
    CHECK(rep.ok);
    CHECK(rep.quotient_dim == 1);
    CHECK(rep.failing_level == -1);

    // the raw window alone cannot certify this tower
    CHECK_THROWS_AS(tower_limits(t), cornerhom::budget_error);
}

TEST_CASE("pattern shortcut: trivial and degenerate shapes") {
    Tower constant;
    constant.dims = {3, 3};
    constant.maps = {ones(3)};
    std::vector<SparseMat> none = {SparseMat(3, 0), SparseMat(3, 0)};
    auto a = ml_pattern_check(constant, none);
    CHECK(a.ok);
    CHECK(a.quotient_dim == 3);

    Tower zero;
    zero.dims = {2, 2};
    zero.maps = {SparseMat(2, 2)};
    std::vector<SparseMat> all = {ones(2), ones(2)};
    auto b = ml_pattern_check(zero, all);
    CHECK(b.ok);
    CHECK(b.quotient_dim == 0);
}

TEST_CASE("pattern shortcut reports the broken hypothesis") {
    Tower t;
    t.dims = {2, 2};
    t.maps = {ones(2)}; // identity does not vanish on the subspace
    SparseMat e2(2, 1);
    e2.set(1, 0, Scalar(1));
    auto rep = ml_pattern_check(t, {e2, e2});
    CHECK(!rep.ok);
    CHECK(rep.failing_level == 0);
    CHECK(rep.reason.find("vanish") != std::string::npos);

    // zero map vanishes on the subspace but collapses the quotient
    Tower s;
    s.dims = {2, 2};
    s.maps = {SparseMat(2, 2)};
    auto rep2 = ml_pattern_check(s, {e2, e2});
    CHECK(!rep2.ok);
    CHECK(rep2.reason.find("isomorphism") != std::string::npos);

    // a subspace pushed outside its target is a precondition violation
    Tower p;
    p.dims = {2, 2};
    SparseMat swap(2, 2);
    swap.set(0, 1, Scalar(1));
    swap.set(1, 0, Scalar(1));
    p.maps = {swap};
    CHECK_THROWS_AS(ml_pattern_check(p, {e2, e2}), cornerhom::input_error);
}

TEST_CASE("limit sequence rejects non-surjective towers") {
    // zero differentials so any degreewise map is a chain map
    ChainComplex flat({2, 2}, {SparseMat(), SparseMat(2, 2)});
    ComplexTower ct;
    ct.levels = {flat, flat};
    cxs::ChainMap half; // drops one line in degree 1
    SparseMat d(2, 2);
    d.set(0, 0, Scalar(1));
    half.f = {ones(2), d};
    ct.maps = {half};
    ct.tail = TailPattern::constant;
    CHECK_THROWS_AS(exact_lim_sequence_check(ct, 1), cornerhom::input_error);
}
