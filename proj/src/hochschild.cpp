#include "cornerhom/hochschild.hpp"

#include <algorithm>
#include <functional>
#include <memory>

#include "cornerhom/errors.hpp"

namespace cornerhom::hochschild {

using complexes::ChainComplex;
using complexes::ChainMap;
using complexes::MixedComplex;

HochschildComplex::HochschildComplex(const GradedAlgebra& alg, Window win, int nmax)
    : alg_(&alg), win_(win), nmax_(nmax) {
    require_input(nmax >= 0, "chain length must be nonnegative");
    require_input(win.wtot >= 0 && win.ctot >= 0 && win.pbot < win.ptop,
                  "malformed window");
    basis_.resize(nmax + 1);
    index_.resize(nmax + 1);
    for (int n = 0; n <= nmax; ++n) enumerate(n);
}

void HochschildComplex::enumerate(int n) {
    const int len = n + 1;
    std::vector<int> wsup = alg_->weights_with_support(win_.wtot);
    const int olo = win_.pbot - win_.ctot + 1;
    const int ohi = win_.ctot;

    std::vector<int> ws(len), os(len);
    Tuple tuple(len);

    // innermost: slot indices
    std::function<void(int)> pick_extra = [&](int i) {
        if (i == len) {
            basis_[n].push_back(tuple);
            return;
        }
        int sd = alg_->slot_dim(ws[i], os[i]);
        for (int e = 0; e < sd; ++e) {
            tuple[i] = BasisKey{ws[i], os[i], e};
            pick_extra(i + 1);
        }
    };

    // middle: orders, with positive-part and band pruning
    std::function<void(int, int, int)> pick_order = [&](int i, int possum, int total) {
        if (i == len) {
            if (total > win_.pbot && total <= win_.ptop) pick_extra(0);
            return;
        }
        int remaining = len - i;
        // even if every later order is as negative as allowed, the total
        // cannot come down below this:
        if (total + remaining * olo > win_.ptop) return;
        // and it cannot climb above this:
        if (total + (win_.ctot - possum) <= win_.pbot) return;
        for (int o : alg_->orders_with_support(ws[i], olo, ohi)) {
            int np = possum + std::max(o, 0);
            if (np > win_.ctot) continue;
            os[i] = o;
            pick_order(i + 1, np, total + o);
        }
    };

    // outermost: weights summing to mu within the |w| budget
    std::function<void(int, int, int)> pick_weight = [&](int i, int used, int sum) {
        if (i == len) {
            if (sum == win_.mu) pick_order(0, 0, 0);
            return;
        }
        for (int w : wsup) {
            int nu = used + std::abs(w);
            if (nu > win_.wtot) continue;
            // the rest must be able to bridge the gap to mu
            if (std::abs(win_.mu - (sum + w)) > win_.wtot - nu) continue;
            ws[i] = w;
            pick_weight(i + 1, nu, sum + w);
        }
    };

    pick_weight(0, 0, 0);
    std::sort(basis_[n].begin(), basis_[n].end());
    for (int j = 0; j < static_cast<int>(basis_[n].size()); ++j)
        index_[n].emplace(basis_[n][j], j);
}

int HochschildComplex::dim(int n) const {
    if (n < 0 || n > nmax_) return 0;
    return static_cast<int>(basis_[n].size());
}

const std::vector<Tuple>& HochschildComplex::tuples(int n) const { return basis_[n]; }

int HochschildComplex::index_of(int n, const Tuple& t) const {
    auto it = index_[n].find(t);
    return it == index_[n].end() ? -1 : it->second;
}

SparseMat HochschildComplex::merge_sum(int n, bool cyclic) const {
    SparseMat out(dim(n - 1), dim(n));
    if (n < 1) return out;
    for (int col = 0; col < dim(n); ++col) {
        const Tuple& tp = basis_[n][col];
        int total = 0;
        for (const auto& k : tp) total += k.o;
        auto emit = [&](const Tuple& nt, const Scalar& coeff) {
            int row = index_of(n - 1, nt);
            require_engine(row >= 0, "window closure violated by a merge");
            out.set(row, col, out.at(row, col) + coeff);
        };
        for (int i = 0; i < n; ++i) {
            int floor = win_.pbot - (total - tp[i].o - tp[i + 1].o);
            Scalar sign((i % 2 == 0) ? 1 : -1);
            Tuple nt;
            nt.reserve(n);
            nt.insert(nt.end(), tp.begin(), tp.begin() + i);
            nt.push_back(BasisKey{});
            nt.insert(nt.end(), tp.begin() + i + 2, tp.end());
            for (const auto& [k, c] : alg_->product(tp[i], tp[i + 1], floor)) {
                nt[i] = k;
                emit(nt, sign * c);
            }
        }
        if (cyclic) {
            int floor = win_.pbot - (total - tp[n].o - tp[0].o);
            Scalar sign((n % 2 == 0) ? 1 : -1);
            Tuple nt;
            nt.reserve(n);
            nt.push_back(BasisKey{});
            nt.insert(nt.end(), tp.begin() + 1, tp.begin() + n);
            for (const auto& [k, c] : alg_->product(tp[n], tp[0], floor)) {
                nt[0] = k;
                emit(nt, sign * c);
            }
        }
    }
    return out;
}

SparseMat HochschildComplex::op_b(int n) const { return merge_sum(n, true); }
SparseMat HochschildComplex::op_bprime(int n) const { return merge_sum(n, false); }

SparseMat HochschildComplex::op_t(int n) const {
    SparseMat out(dim(n), dim(n));
    Scalar sign((n % 2 == 0) ? 1 : -1);
    for (int col = 0; col < dim(n); ++col) {
        const Tuple& tp = basis_[n][col];
        Tuple nt;
        nt.reserve(n + 1);
        nt.push_back(tp[n]);
        nt.insert(nt.end(), tp.begin(), tp.begin() + n);
        int row = index_of(n, nt);
        require_engine(row >= 0, "window closure violated by a rotation");
        out.set(row, col, sign);
    }
    return out;
}

SparseMat HochschildComplex::op_s(int n) const {
    require_engine(n + 1 <= nmax_, "unit insertion runs over the top degree");
    auto unit = alg_->unit_expansion();
    require_engine(!unit.empty(), "unit insertion on a non-unital algebra");
    SparseMat out(dim(n + 1), dim(n));
    for (int col = 0; col < dim(n); ++col) {
        const Tuple& tp = basis_[n][col];
        Tuple nt;
        nt.reserve(n + 2);
        nt.push_back(BasisKey{});
        nt.insert(nt.end(), tp.begin(), tp.end());
        for (const auto& [u, c] : unit) {
            nt[0] = u;
            int row = index_of(n + 1, nt);
            require_engine(row >= 0, "window closure violated by unit insertion");
            out.set(row, col, out.at(row, col) + c);
        }
    }
    return out;
}

SparseMat HochschildComplex::op_B(int n) const {
    SparseMat tn = op_t(n);
    SparseMat acc = SparseMat::identity(dim(n));
    SparseMat cycles = acc;
    for (int k = 1; k <= n; ++k) {
        cycles = tn * cycles;
        acc = acc + cycles;
    }
    SparseMat norm = op_s(n) * acc;
    return norm - op_t(n + 1) * norm;
}

ChainComplex HochschildComplex::b_complex() const {
    std::vector<int> dims(nmax_ + 1);
    std::vector<SparseMat> diffs(nmax_ + 1);
    for (int q = 0; q <= nmax_; ++q) {
        dims[q] = dim(q);
        diffs[q] = op_b(q);
    }
    ChainComplex c(std::move(dims), std::move(diffs));
    require_engine(c.check_squares_zero(), "b*b != 0 on the window");
    return c;
}

ChainComplex HochschildComplex::bprime_complex() const {
    std::vector<int> dims(nmax_ + 1);
    std::vector<SparseMat> diffs(nmax_ + 1);
    for (int q = 0; q <= nmax_; ++q) {
        dims[q] = dim(q);
        diffs[q] = op_bprime(q);
    }
    ChainComplex c(std::move(dims), std::move(diffs));
    require_engine(c.check_squares_zero(), "b'*b' != 0 on the window");
    return c;
}

MixedComplex HochschildComplex::mixed() const {
    MixedComplex m;
    m.dims.resize(nmax_ + 1);
    m.b.resize(nmax_ + 1);
    m.Bop.resize(nmax_);
    for (int q = 0; q <= nmax_; ++q) {
        m.dims[q] = dim(q);
        m.b[q] = op_b(q);
    }
    for (int q = 0; q < nmax_; ++q) m.Bop[q] = op_B(q);
    m.validate();
    return m;
}

spectral::FilteredComplex HochschildComplex::filtered_by_order() const {
    spectral::FilteredComplex f;
    f.c = b_complex();
    f.kmin = win_.pbot + 1;
    f.kmax = win_.ptop;
    f.level.resize(f.kmax - f.kmin + 1);
    for (int k = f.kmin; k <= f.kmax; ++k) {
        f.level[k - f.kmin].resize(nmax_ + 1);
        for (int n = 0; n <= nmax_; ++n) {
            std::vector<int> pick;
            for (int j = 0; j < dim(n); ++j) {
                int total = 0;
                for (const auto& key : basis_[n][j]) total += key.o;
                if (total <= k) pick.push_back(j);
            }
            SparseMat b(dim(n), static_cast<int>(pick.size()));
            for (int j = 0; j < static_cast<int>(pick.size()); ++j)
                b.col[j] = {{pick[j], Scalar(1)}};
            f.level[k - f.kmin][n] = std::move(b);
        }
    }
    return f;
}

ChainMap inclusion_map(const HochschildComplex& small, const HochschildComplex& big) {
    const Window& a = small.window();
    const Window& b = big.window();
    require_engine(a.mu == b.mu && a.ctot == b.ctot && a.pbot == b.pbot &&
                       a.ptop == b.ptop && a.wtot <= b.wtot,
                   "inclusion: windows not nested");
    int t = std::min(small.top(), big.top());
    ChainMap f;
    f.f.resize(t + 1);
    for (int n = 0; n <= t; ++n) {
        SparseMat m(big.dim(n), small.dim(n));
        for (int j = 0; j < small.dim(n); ++j) {
            int row = big.index_of(n, small.tuples(n)[j]);
            require_engine(row >= 0, "inclusion: tuple missing from the larger window");
            m.set(row, j, Scalar(1));
        }
        f.f[n] = std::move(m);
    }
    return f;
}

StabilizedDims hh_stabilized(const GradedAlgebra& alg, int mu, int qmax,
                             Window base, int wcap) {
    require_input(wcap >= base.wtot, "wcap below the starting budget");
    // |w_i| and w_i have equal parity, so sum |w_i| = mu (mod 2) on every
    // tuple of weight mu: only every other budget level can hold anything
    // new.  Walking in steps of one would let two literally identical
    // complexes certify each other, so stay in the parity class of mu.
    int w0 = base.wtot;
    if (((w0 % 2) + 2) % 2 != ((mu % 2) + 2) % 2) ++w0;
    std::unique_ptr<HochschildComplex> prev;
    std::vector<int> prev_betti;
    complexes::ChainComplex prev_bc;
    for (int w = w0; w <= wcap; w += 2) {
        Window win = base;
        win.mu = mu;
        win.wtot = w;
        auto cur = std::make_unique<HochschildComplex>(alg, win, qmax + 1);
        complexes::ChainComplex bc = cur->b_complex();
        std::vector<int> betti(qmax + 1);
        for (int q = 0; q <= qmax; ++q) betti[q] = bc.betti(q);
        if (prev && betti == prev_betti) {
            bool iso = true;
            ChainMap incl = inclusion_map(*prev, *cur);
            for (int q = 0; q <= qmax && iso; ++q) {
                complexes::HomologySpace hs(prev_bc, q), hb(bc, q);
                SparseMat ind = complexes::induced_on_homology(incl, prev_bc, bc, q, hs, hb);
                if (ind.rows != ind.cols || qlinalg::rank_of(ind) != ind.rows) iso = false;
            }
            if (iso) {
                StabilizedDims out;
                out.dims = betti;
                out.wtot_used = w;
                out.certificate = "two consecutive weight windows agree through "
                                  "isomorphisms";
                return out;
            }
        }
        prev = std::move(cur);
        prev_betti = std::move(betti);
        prev_bc = std::move(bc);
    }
    throw cornerhom::budget_error("weight windows did not stabilize within the cap");
}

bool h_unital_check(const GradedAlgebra& alg, const Window& win, int nmax) {
    HochschildComplex hc(alg, win, nmax);
    ChainComplex c = hc.bprime_complex();
    for (int q = 0; q < nmax; ++q)
        if (c.betti(q) != 0) return false;
    return true;
}

} // namespace cornerhom::hochschild
