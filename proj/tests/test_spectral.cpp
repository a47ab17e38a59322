#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cornerhom/spectral.hpp"

using namespace cornerhom::spectral;
using cornerhom::qlinalg::Eliminator;
using cornerhom::qlinalg::rank_of;

namespace {

// standard-basis filtration: vector i of degree q lives at level lv[q][i]
FilteredComplex assemble(std::vector<std::vector<int>> lv,
                         std::vector<SparseMat> diffs, int kmin, int kmax) {
    FilteredComplex f;
    f.kmin = kmin;
    f.kmax = kmax;
    std::vector<int> dims;
    for (const auto& d : lv) dims.push_back(static_cast<int>(d.size()));
    f.c = ChainComplex(dims, std::move(diffs));
    f.level.resize(kmax - kmin + 1);
    for (int k = kmin; k <= kmax; ++k) {
        f.level[k - kmin].resize(lv.size());
        for (std::size_t q = 0; q < lv.size(); ++q) {
            std::vector<int> pick;
            for (int i = 0; i < static_cast<int>(lv[q].size()); ++i)
                if (lv[q][i] <= k) pick.push_back(i);
            SparseMat b(dims[q], static_cast<int>(pick.size()));
            for (int j = 0; j < static_cast<int>(pick.size()); ++j)
                b.col[j] = {{pick[j], Scalar(1)}};
            f.level[k - kmin][q] = std::move(b);
        }
    }
    return f;
}

SparseMat inverse_of(const SparseMat& t) {
    SparseMat inv(t.rows, t.cols);
    for (int j = 0; j < t.cols; ++j) {
        std::vector<Scalar> e(t.rows, Scalar(0));
        e[j] = Scalar(1);
        auto x = cornerhom::qlinalg::solve(t, e);
        REQUIRE(x.has_value());
        inv.col[j] = cornerhom::qlinalg::svec_from_dense(*x);
    }
    return inv;
}

struct RandomFiltered {
    FilteredComplex plain;
    FilteredComplex conjugated;
};

// a pile of cones and free generators scattered across levels, then an
// optional flag-preserving change of basis that must not move any page
RandomFiltered random_filtered(std::mt19937& rng, int kmax, int top) {
    std::vector<std::vector<int>> lv(top + 1);
    std::vector<std::vector<std::pair<int, int>>> cone; // per degree q: (e_idx in q, f_idx in q-1)
    cone.resize(top + 1);
    std::uniform_int_distribution<int> level(0, kmax);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int q = 0; q <= top; ++q) {
        int firsts = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < firsts; ++i) lv[q].push_back(level(rng));
    }
    for (int q = 1; q <= top; ++q) {
        int pairs = static_cast<int>(rng() % 3);
        for (int i = 0; i < pairs; ++i) {
            int fl = level(rng);
            int el = fl + static_cast<int>(rng() % (kmax - fl + 1));
            lv[q - 1].push_back(fl);
            lv[q].push_back(el);
            cone[q].push_back({static_cast<int>(lv[q].size()) - 1,
                               static_cast<int>(lv[q - 1].size()) - 1});
        }
    }
    std::vector<SparseMat> diffs(top + 1);
    for (int q = 1; q <= top; ++q) {
        SparseMat d(static_cast<int>(lv[q - 1].size()), static_cast<int>(lv[q].size()));
        for (auto [e, fidx] : cone[q]) d.set(fidx, e, Scalar(1));
        diffs[q] = std::move(d);
    }

    RandomFiltered out;
    out.plain = assemble(lv, diffs, 0, kmax);
    out.plain.validate();

    // conjugate by a unitriangular flag-preserving map per degree
    std::vector<SparseMat> T(top + 1), Tinv(top + 1);
    std::uniform_int_distribution<int> entry(-2, 2);
    for (int q = 0; q <= top; ++q) {
        int n = static_cast<int>(lv[q].size());
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return lv[q][a] < lv[q][b]; });
        SparseMat t = SparseMat::identity(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < a; ++b)
                if (coin(rng) != 0) t.set(order[b], order[a], Scalar(entry(rng)));
        Tinv[q] = inverse_of(t);
        T[q] = std::move(t);
    }
    std::vector<SparseMat> cdiffs(top + 1);
    for (int q = 1; q <= top; ++q) cdiffs[q] = T[q - 1] * diffs[q] * Tinv[q];
    out.conjugated = assemble(lv, cdiffs, 0, kmax);
    out.conjugated.validate();
    return out;
}

} // namespace

TEST_CASE("two-level cone dies on page two") {
    // one generator in degree 0 at level 0, its cone in degree 1 at level 1
    SparseMat d1(1, 1);
    d1.set(0, 0, Scalar(1));
    FilteredComplex f = assemble({{0}, {1}}, {SparseMat(), d1}, 0, 1);
    f.validate();

    SpectralSequence ss(f);
    CHECK(ss.dim(1, 0, 0) == 1);
    CHECK(ss.dim(1, 1, 0) == 1);
    SparseMat d = ss.differential(1, 1, 0);
    REQUIRE(d.rows == 1);
    REQUIRE(d.cols == 1);
    CHECK(!d.at(0, 0).is_zero());
    CHECK(ss.dim(2, 0, 0) == 0);
    CHECK(ss.dim(2, 1, 0) == 0);
    CHECK(ss.first_page_matches_graded());

    auto cert = ss.converge();
    CHECK(cert.converged);
    CHECK(cert.stable_page == 2);
    CHECK(cert.einf_by_degree == std::vector<int>{0, 0});
}

TEST_CASE("trivial filtration stops on page one") {
    SparseMat d1 = SparseMat::from_triplets(
        2, 2,
        {{0, 0, Scalar(-1)}, {1, 0, Scalar(1)}, {0, 1, Scalar(-1)}, {1, 1, Scalar(1)}});
    FilteredComplex f = assemble({{0, 0}, {0, 0}}, {SparseMat(), d1}, 0, 0);
    f.validate();
    SpectralSequence ss(f);
    CHECK(ss.dim(1, 0, 0) == 1);
    CHECK(ss.dim(1, 0, 1) == 1);
    auto cert = ss.converge();
    CHECK(cert.stable_page == 1);
    CHECK(cert.einf_by_degree == std::vector<int>{1, 1});
}

TEST_CASE("random filtrations: graded match, conjugation invariance, convergence") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 12; ++trial) {
        int kmax = 1 + static_cast<int>(rng() % 2);
        int top = 2 + static_cast<int>(rng() % 2);
        RandomFiltered rf = random_filtered(rng, kmax, top);

        SpectralSequence a(rf.plain);
        SpectralSequence b(rf.conjugated);
        CHECK(a.first_page_matches_graded());
        CHECK(b.first_page_matches_graded());
        for (int r = 1; r <= a.infinity_page(); ++r)
            for (int k = 0; k <= kmax; ++k)
                for (int n = 0; n <= top; ++n)
                    CHECK(a.dim(r, k, n - k) == b.dim(r, k, n - k));
        auto ca = a.converge();
        auto cb = b.converge();
        CHECK(ca.converged);
        CHECK(cb.converged);
        CHECK(ca.einf_by_degree == cb.einf_by_degree);
    }
}
