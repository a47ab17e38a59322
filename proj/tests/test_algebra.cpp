#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "cornerhom/algebra.hpp"

using namespace cornerhom::hochschild;

namespace {

std::map<BasisKey, Scalar> as_map(const std::vector<Term>& ts) {
    std::map<BasisKey, Scalar> m;
    for (const auto& [k, c] : ts) {
        m[k] += c;
        if (m[k].is_zero()) m.erase(k);
    }
    return m;
}

} // namespace

TEST_CASE("stock finite algebras are associative and unital") {
    for (const FiniteAlgebra& a :
         {FiniteAlgebra::upper_triangular2(), FiniteAlgebra::truncated_polynomial(2),
          FiniteAlgebra::truncated_polynomial(3), FiniteAlgebra::product_of_fields(2),
          FiniteAlgebra::cyclic_group_algebra(3), FiniteAlgebra::matrix2()}) {
        CHECK(a.check_associative());
        CHECK(a.check_unit());
    }
    FiniteAlgebra z = FiniteAlgebra::square_zero();
    CHECK(z.check_associative());
    CHECK(!z.is_unital());
}

TEST_CASE("conjugated algebras stay associative and unital") {
    for (unsigned seed : {1u, 2u, 3u}) {
        FiniteAlgebra a = random_twist(FiniteAlgebra::upper_triangular2(), seed);
        CHECK(a.check_associative());
        CHECK(a.check_unit());
        FiniteAlgebra b = random_twist(FiniteAlgebra::matrix2(), seed);
        CHECK(b.check_associative());
        CHECK(b.check_unit());
    }
}

TEST_CASE("generalized binomials") {
    CHECK(general_binomial(3, 2) == Rational(3));
    CHECK(general_binomial(2, 5) == Rational(0));
    CHECK(general_binomial(-1, 2) == Rational(1));
    CHECK(general_binomial(-2, 3) == Rational(-4));
    CHECK(general_binomial(5, 0) == Rational(1));
}

TEST_CASE("symbol branch: canonical commutator") {
    SymbolBranchAlgebra s;
    BasisKey a{1, 1, 0};  // u xi
    BasisKey b{-1, 0, 0}; // u^-1
    auto ab = as_map(s.product(a, b, -5));
    auto ba = as_map(s.product(b, a, -5));
    // ab = xi - 1, ba = xi: the commutator is the constant -1
    std::map<BasisKey, Scalar> comm;
    for (const auto& [k, c] : ab) comm[k] += c;
    for (const auto& [k, c] : ba) comm[k] -= c;
    for (auto it = comm.begin(); it != comm.end();)
        it = it->second.is_zero() ? comm.erase(it) : std::next(it);
    REQUIRE(comm.size() == 1);
    CHECK(comm.begin()->first == BasisKey{0, 0, 0});
    CHECK(comm.begin()->second == Scalar(-1));
}

TEST_CASE("symbol branch: floors stay consistent under reassociation") {
    SymbolBranchAlgebra s;
    // this triple breaks naive per-factor truncation; the band discipline
    // must make both associations agree exactly
    CHECK(triple_product_check(s, BasisKey{0, 2, 0}, BasisKey{0, 2, 0},
                               BasisKey{0, -2, 0}, -3));

    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> w(-2, 2), o(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        BasisKey a{w(rng), o(rng), 0}, b{w(rng), o(rng), 0}, c{w(rng), o(rng), 0};
        int pbot = -6 + static_cast<int>(rng() % 4);
        CHECK(triple_product_check(s, a, b, c, pbot));
    }
}

TEST_CASE("symbol branch: series shape") {
    SymbolBranchAlgebra s;
    // xi^2 * (u xi^-1) has a finite derivative series of length 3
    auto ts = s.product(BasisKey{0, 2, 0}, BasisKey{1, -1, 0}, -10);
    REQUIRE(ts.size() == 3);
    CHECK(ts[0].first == BasisKey{1, 1, 0});
    CHECK(ts[0].second == Scalar(1));
    CHECK(ts[1].first == BasisKey{1, 0, 0});
    CHECK(ts[1].second == Scalar(2)); // binom(2,1) * 1
    CHECK(ts[2].first == BasisKey{1, -1, 0});
    CHECK(ts[2].second == Scalar(1)); // binom(2,2) * 1
    // negative order against a moving factor: infinite series, cut at floor
    auto neg = s.product(BasisKey{0, -1, 0}, BasisKey{1, 0, 0}, -4);
    REQUIRE(neg.size() == 3); // orders -1, -2, -3
    CHECK(neg[1].second == Scalar(-1)); // binom(-1,1) * 1
    CHECK(neg[2].second == Scalar(1));  // binom(-1,2) * 1
}

TEST_CASE("gr symbol multiplies by adding degrees") {
    GrSymbolAlgebra g;
    auto ts = g.product(BasisKey{2, -1, 0}, BasisKey{-1, 3, 0}, kNoFloor);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].first == BasisKey{1, 2, 0});
    auto cut = g.product(BasisKey{0, 1, 0}, BasisKey{0, 1, 0}, 2);
    CHECK(cut.empty());
}

TEST_CASE("laurent and polynomial supports") {
    PolynomialAlgebra p;
    CHECK(p.slot_dim(3, 0) == 1);
    CHECK(p.slot_dim(-1, 0) == 0);
    CHECK(p.weights_with_support(2) == std::vector<int>{0, 1, 2});
    LaurentAlgebra l;
    CHECK(l.weights_with_support(1) == std::vector<int>{-1, 0, 1});
    CHECK(l.slot_dim(-5, 0) == 1);
    CHECK(l.slot_dim(0, 1) == 0);
}
