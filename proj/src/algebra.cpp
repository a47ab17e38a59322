#include "cornerhom/algebra.hpp"

#include <map>
#include <random>

#include "cornerhom/errors.hpp"

namespace cornerhom::hochschild {

Rational general_binomial(long j, long t) {
    require_engine(t >= 0, "binomial: negative lower index");
    Rational num(1);
    for (long s = 0; s < t; ++s) num *= Rational(j - s);
    Rational den(1);
    for (long s = 2; s <= t; ++s) den *= Rational(s);
    Rational out = num / den;
    out.canonicalize();
    return out;
}

// --- FiniteAlgebra -----------------------------------------------------------

FiniteAlgebra::FiniteAlgebra(int dim, std::vector<std::vector<std::vector<Term>>> table,
                             std::vector<Term> unit)
    : dim_(dim), table_(std::move(table)), unit_(std::move(unit)) {
    require_engine(static_cast<int>(table_.size()) == dim_, "algebra table rows");
    for (const auto& row : table_)
        require_engine(static_cast<int>(row.size()) == dim_, "algebra table cols");
}

std::vector<Term> FiniteAlgebra::product(const BasisKey& a, const BasisKey& b,
                                         int floor) const {
    require_engine(a.w == 0 && a.o == 0 && b.w == 0 && b.o == 0, "finite algebra keys");
    require_engine(a.e >= 0 && a.e < dim_ && b.e >= 0 && b.e < dim_, "key out of range");
    if (floor >= 0) return {};
    return table_[a.e][b.e];
}

std::string FiniteAlgebra::describe(const BasisKey& k) const {
    return "e" + std::to_string(k.e);
}

bool FiniteAlgebra::check_associative() const {
    auto mul = [&](const std::vector<Term>& xs, int j) {
        std::vector<Scalar> out(dim_, Scalar(0));
        for (const auto& [k, c] : xs)
            for (const auto& [k2, c2] : table_[k.e][j]) out[k2.e] += c * c2;
        return out;
    };
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int l = 0; l < dim_; ++l) {
                // (e_i e_j) e_l
                std::vector<Scalar> left = mul(table_[i][j], l);
                // e_i (e_j e_l)
                std::vector<Scalar> right(dim_, Scalar(0));
                for (const auto& [k, c] : table_[j][l])
                    for (const auto& [k2, c2] : table_[i][k.e]) right[k2.e] += c * c2;
                if (left != right) return false;
            }
    return true;
}

bool FiniteAlgebra::check_unit() const {
    if (unit_.empty()) return false;
    for (int i = 0; i < dim_; ++i) {
        std::vector<Scalar> left(dim_, Scalar(0)), right(dim_, Scalar(0));
        for (const auto& [u, c] : unit_) {
            for (const auto& [k, c2] : table_[u.e][i]) left[k.e] += c * c2;
            for (const auto& [k, c2] : table_[i][u.e]) right[k.e] += c * c2;
        }
        for (int j = 0; j < dim_; ++j) {
            if (!(left[j] == (j == i ? Scalar(1) : Scalar(0)))) return false;
            if (!(right[j] == (j == i ? Scalar(1) : Scalar(0)))) return false;
        }
    }
    return true;
}

namespace {

std::vector<std::vector<std::vector<Term>>> empty_table(int n) {
    return std::vector<std::vector<std::vector<Term>>>(
        n, std::vector<std::vector<Term>>(n));
}

Term one(int e) { return {BasisKey{0, 0, e}, Scalar(1)}; }

} // namespace

FiniteAlgebra FiniteAlgebra::upper_triangular2() {
    // basis: 0 = E11, 1 = E22, 2 = E12
    auto t = empty_table(3);
    t[0][0] = {one(0)};
    t[1][1] = {one(1)};
    t[0][2] = {one(2)};
    t[2][1] = {one(2)};
    return FiniteAlgebra(3, std::move(t), {one(0), one(1)});
}

FiniteAlgebra FiniteAlgebra::truncated_polynomial(int n) {
    require_input(n >= 1, "truncated polynomial: degree must be positive");
    auto t = empty_table(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i + j < n) t[i][j] = {one(i + j)};
    return FiniteAlgebra(n, std::move(t), {one(0)});
}

FiniteAlgebra FiniteAlgebra::product_of_fields(int n) {
    require_input(n >= 1, "product of fields: need at least one factor");
    auto t = empty_table(n);
    std::vector<Term> unit;
    for (int i = 0; i < n; ++i) {
        t[i][i] = {one(i)};
        unit.push_back(one(i));
    }
    return FiniteAlgebra(n, std::move(t), std::move(unit));
}

FiniteAlgebra FiniteAlgebra::cyclic_group_algebra(int m) {
    require_input(m >= 1, "group algebra: order must be positive");
    auto t = empty_table(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t[i][j] = {one((i + j) % m)};
    return FiniteAlgebra(m, std::move(t), {one(0)});
}

FiniteAlgebra FiniteAlgebra::matrix2() {
    // basis: 0 = E11, 1 = E12, 2 = E21, 3 = E22; E_ab E_cd = [b==c] E_ad
    auto t = empty_table(4);
    auto idx = [](int a, int b) { return 2 * a + b; };
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    if (b == c) t[idx(a, b)][idx(c, d)] = {one(idx(a, d))};
    return FiniteAlgebra(4, std::move(t), {one(idx(0, 0)), one(idx(1, 1))});
}

FiniteAlgebra FiniteAlgebra::square_zero() {
    return FiniteAlgebra(1, empty_table(1), {});
}

FiniteAlgebra conjugate(const FiniteAlgebra& a, const SparseMat& t) {
    int n = a.dim();
    require_input(t.rows == n && t.cols == n, "conjugate: shape");
    auto coords = [&](const std::vector<Scalar>& v) {
        auto x = qlinalg::solve(t, v);
        require_input(x.has_value(), "conjugate: matrix not invertible");
        return *x;
    };
    auto table = empty_table(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Scalar> v(n, Scalar(0));
            for (const auto& [ai, ac] : t.col[i])
                for (const auto& [bj, bc] : t.col[j])
                    for (const auto& [k, c] :
                         a.product(BasisKey{0, 0, ai}, BasisKey{0, 0, bj}, kNoFloor))
                        v[k.e] += ac * bc * c;
            std::vector<Scalar> x = coords(v);
            for (int k = 0; k < n; ++k)
                if (!x[k].is_zero()) table[i][j].push_back({BasisKey{0, 0, k}, x[k]});
        }
    std::vector<Term> unit;
    if (a.is_unital()) {
        std::vector<Scalar> u(n, Scalar(0));
        for (const auto& [k, c] : a.unit_expansion()) u[k.e] += c;
        std::vector<Scalar> x = coords(u);
        for (int k = 0; k < n; ++k)
            if (!x[k].is_zero()) unit.push_back({BasisKey{0, 0, k}, x[k]});
    }
    return FiniteAlgebra(n, std::move(table), std::move(unit));
}

FiniteAlgebra random_twist(const FiniteAlgebra& a, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> entry(-2, 2);
    int n = a.dim();
    for (;;) {
        SparseMat t(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                int v = entry(rng);
                if (v != 0) t.set(i, j, Scalar(v));
            }
        if (qlinalg::rank_of(t) == n) return conjugate(a, t);
    }
}

// --- graded families ---------------------------------------------------------

std::vector<int> PolynomialAlgebra::weights_with_support(int wmax) const {
    std::vector<int> out;
    for (int w = 0; w <= wmax; ++w) out.push_back(w);
    return out;
}

std::string PolynomialAlgebra::describe(const BasisKey& k) const {
    return k.w == 0 ? "1" : "x^" + std::to_string(k.w);
}

std::vector<int> LaurentAlgebra::weights_with_support(int wmax) const {
    std::vector<int> out;
    for (int w = -wmax; w <= wmax; ++w) out.push_back(w);
    return out;
}

std::string LaurentAlgebra::describe(const BasisKey& k) const {
    return k.w == 0 ? "1" : "r^" + std::to_string(k.w);
}

std::vector<Term> SymbolBranchAlgebra::product(const BasisKey& a, const BasisKey& b,
                                               int floor) const {
    std::vector<Term> out;
    long jl = static_cast<long>(a.o) + b.o;
    long tmax;
    if (b.w == 0) {
        tmax = 0;
    } else if (a.o >= 0) {
        tmax = a.o;
    } else {
        require_engine(floor > kNoFloor, "symbol product with infinite tail needs a floor");
        tmax = jl - floor - 1;
    }
    if (floor > kNoFloor) tmax = std::min(tmax, jl - floor - 1);
    Rational bw_pow(1);
    for (long t = 0; t <= tmax; ++t) {
        Rational coeff = general_binomial(a.o, t) * bw_pow;
        coeff.canonicalize();
        if (sgn(coeff) != 0)
            out.push_back({BasisKey{a.w + b.w, static_cast<int>(jl - t), 0},
                           Scalar(coeff)});
        bw_pow *= Rational(b.w);
    }
    return out;
}

std::vector<int> SymbolBranchAlgebra::weights_with_support(int wmax) const {
    std::vector<int> out;
    for (int w = -wmax; w <= wmax; ++w) out.push_back(w);
    return out;
}

std::vector<int> SymbolBranchAlgebra::orders_with_support(int, int omin, int omax) const {
    std::vector<int> out;
    for (int o = omin; o <= omax; ++o) out.push_back(o);
    return out;
}

std::string SymbolBranchAlgebra::describe(const BasisKey& k) const {
    return "u^" + std::to_string(k.w) + " xi^" + std::to_string(k.o);
}

std::vector<Term> GrSymbolAlgebra::product(const BasisKey& a, const BasisKey& b,
                                           int floor) const {
    if (a.o + b.o <= floor) return {};
    return {{BasisKey{a.w + b.w, a.o + b.o, 0}, Scalar(1)}};
}

std::vector<int> GrSymbolAlgebra::weights_with_support(int wmax) const {
    std::vector<int> out;
    for (int w = -wmax; w <= wmax; ++w) out.push_back(w);
    return out;
}

std::vector<int> GrSymbolAlgebra::orders_with_support(int, int omin, int omax) const {
    std::vector<int> out;
    for (int o = omin; o <= omax; ++o) out.push_back(o);
    return out;
}

std::string GrSymbolAlgebra::describe(const BasisKey& k) const {
    return "gr u^" + std::to_string(k.w) + " xi^" + std::to_string(k.o);
}

bool triple_product_check(const GradedAlgebra& alg, const BasisKey& a,
                          const BasisKey& b, const BasisKey& c, int pbot) {
    std::map<BasisKey, Scalar> left, right;
    auto add = [](std::map<BasisKey, Scalar>& m, const BasisKey& k, const Scalar& v) {
        auto it = m.find(k);
        if (it == m.end())
            m.emplace(k, v);
        else {
            it->second += v;
            if (it->second.is_zero()) m.erase(it);
        }
    };
    // dropped factors of ab have order <= pbot - c.o and cannot reach above
    // pbot after multiplying by c; same on the other side
    for (const auto& [k, v] : alg.product(a, b, pbot - c.o))
        for (const auto& [k2, v2] : alg.product(k, c, pbot)) add(left, k2, v * v2);
    for (const auto& [k, v] : alg.product(b, c, pbot - a.o))
        for (const auto& [k2, v2] : alg.product(a, k, pbot)) add(right, k2, v * v2);
    return left == right;
}

} // namespace cornerhom::hochschild
