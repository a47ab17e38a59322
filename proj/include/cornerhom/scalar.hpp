#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "cornerhom/errors.hpp"

namespace cornerhom::qlinalg {

using Rational = mpq_class;

/// Element of Q(i): exact rational real and imaginary parts.
/// All arithmetic is exact; there is no floating point anywhere downstream.
struct Scalar {
    Rational re;
    Rational im;

    Scalar() : re(0), im(0) {}
    Scalar(long v) : re(v), im(0) {} // NOLINT: implicit by design
    // The mpq_class(num, den) constructor does not reduce fractions, and GMP
    // arithmetic assumes reduced inputs, so normalize at this boundary.
    Scalar(Rational r) : re(std::move(r)), im(0) { re.canonicalize(); }
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {
        re.canonicalize();
        im.canonicalize();
    }

    static Scalar i() { return Scalar(Rational(0), Rational(1)); }
    static Scalar of_fraction(long num, long den) {
        require_input(den != 0, "zero denominator");
        return Scalar(Rational(num, den));
    }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    Scalar conj() const { return Scalar(re, -im); }
    Rational norm() const { return re * re + im * im; }

    Scalar operator-() const { return Scalar(-re, -im); }

    Scalar& operator+=(const Scalar& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        if (sgn(im) == 0 && sgn(o.im) == 0) {
            re *= o.re;
            return *this;
        }
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        if (o.is_zero()) throw engine_defect("scalar division by zero");
        if (sgn(o.im) == 0) {
            re /= o.re;
            im /= o.re;
            return *this;
        }
        Rational n = o.norm();
        Rational r = (re * o.re + im * o.im) / n;
        im = (im * o.re - re * o.im) / n;
        re = std::move(r);
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // total order for use as map keys; not a meaningful field order
    friend bool operator<(const Scalar& a, const Scalar& b) {
        int c = cmp(a.re, b.re);
        if (c != 0) return c < 0;
        return cmp(a.im, b.im) < 0;
    }

    std::string str() const {
        if (sgn(im) == 0) return re.get_str();
        std::string imag = im.get_str() + "i";
        if (im == 1) imag = "i";
        if (im == -1) imag = "-i";
        if (sgn(re) == 0) return imag;
        if (sgn(im) > 0) return re.get_str() + "+" + imag;
        return re.get_str() + imag;
    }
};

/// Parse "p", "p/q", optionally with a trailing i-part ("3/2", "-1", "i", "2i", "1+i", "1-2i").
inline Scalar parse_scalar(const std::string& text) {
    auto parse_rat = [](const std::string& s) -> Rational {
        std::string t = (!s.empty() && s.front() == '+') ? s.substr(1) : s;
        if (t.empty()) throw input_error("empty rational literal");
        Rational r;
        if (r.set_str(t, 10) != 0) throw input_error("bad rational literal: " + s);
        if (sgn(r.get_den()) == 0) throw input_error("zero denominator: " + s);
        r.canonicalize();
        return r;
    };
    std::string s = text;
    if (s.empty()) throw input_error("empty scalar literal");
    if (s.back() == 'i') {
        // split at the last +/- that is not the leading sign and not inside a denominator
        std::string body = s.substr(0, s.size() - 1);
        for (size_t pos = body.size(); pos-- > 1;) {
            if ((body[pos] == '+' || body[pos] == '-') && body[pos - 1] != '/') {
                std::string rp = body.substr(0, pos);
                std::string ip = body.substr(pos);
                if (ip == "+") ip = "1";
                if (ip == "-") ip = "-1";
                return Scalar(parse_rat(rp), parse_rat(ip));
            }
        }
        if (body.empty() || body == "+") return Scalar::i();
        if (body == "-") return Scalar(Rational(0), Rational(-1));
        return Scalar(Rational(0), parse_rat(body));
    }
    return Scalar(parse_rat(s));
}

} // namespace cornerhom::qlinalg
