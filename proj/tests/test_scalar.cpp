#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cornerhom/scalar.hpp"

using cornerhom::input_error;
using cornerhom::qlinalg::parse_scalar;
using cornerhom::qlinalg::Rational;
using cornerhom::qlinalg::Scalar;

TEST_CASE("field axioms on sampled values") {
    std::vector<Scalar> samples = {
        Scalar(0), Scalar(1), Scalar(-3), Scalar::i(),
        Scalar(Rational(2, 3)), Scalar(Rational(-1, 7), Rational(5, 2)),
        Scalar(Rational(4), Rational(-4)),
    };
    for (const auto& a : samples)
        for (const auto& b : samples) {
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK(a - b == -(b - a));
            for (const auto& c : samples) {
                CHECK((a + b) + c == a + (b + c));
                CHECK((a * b) * c == a * (b * c));
                CHECK(a * (b + c) == a * b + a * c);
            }
            if (!b.is_zero()) CHECK((a / b) * b == a);
        }
}

TEST_CASE("i squares to -1") {
    CHECK(Scalar::i() * Scalar::i() == Scalar(-1));
    CHECK(Scalar::i().conj() == -Scalar::i());
    CHECK((Scalar(3) + Scalar::i()).norm() == Rational(10));
}

TEST_CASE("division by zero is an engine defect") {
    CHECK_THROWS_AS(Scalar(1) / Scalar(0), cornerhom::engine_defect);
}

TEST_CASE("printing is canonical") {
    CHECK(Scalar(0).str() == "0");
    CHECK(Scalar(Rational(3, 4)).str() == "3/4");
    CHECK(Scalar::i().str() == "i");
    CHECK((-Scalar::i() * Scalar(2)).str() == "-2i");
    CHECK((Scalar(1) + Scalar::i() * Scalar(2)).str() == "1+2i");
    CHECK((Scalar(1) - Scalar::i() * Scalar(Rational(3, 4))).str() == "1-3/4i");
}

TEST_CASE("parsing round-trips and rejects junk") {
    for (const char* s : {"0", "1", "-5", "3/4", "-3/4", "i", "-i", "2i",
                          "1+2i", "1-3/4i", "-1/2+i"}) {
        Scalar v = parse_scalar(s);
        CHECK(parse_scalar(v.str()) == v);
    }
    CHECK(parse_scalar("3/4") == Scalar(Rational(3, 4)));
    CHECK(parse_scalar("-1/2+i") == Scalar(Rational(-1, 2), Rational(1)));
    CHECK_THROWS_AS(parse_scalar(""), input_error);
    CHECK_THROWS_AS(parse_scalar("1/0"), input_error);
    CHECK_THROWS_AS(parse_scalar("abc"), input_error);
    CHECK_THROWS_AS(parse_scalar("1+"), input_error);
    CHECK_THROWS_AS(parse_scalar("2.5"), input_error);
}

TEST_CASE("exactness survives long alternating sums") {
    // 1/3 added 3000 times, minus 1000, is exactly zero.
    Scalar acc(0);
    Scalar third(Rational(1, 3));
    for (int k = 0; k < 3000; ++k) acc += third;
    acc -= Scalar(1000);
    CHECK(acc.is_zero());
}
