#include "cornerhom/poisson.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <tuple>

namespace cornerhom::poisson {

namespace {

constexpr unsigned kXiBits = 0xAAAAAAAAu; // odd slots carry dxi factors

int sign_pow(int s) { return (s % 2 == 0) ? 1 : -1; }

int bits_below(unsigned mask, int slot) {
    return std::popcount(mask & ((1u << slot) - 1u));
}

// #{(a, b) : a in hi, b in lo, a > b}, the wedge reordering parity.
int crossings(unsigned hi, unsigned lo) {
    int inv = 0;
    for (unsigned m = lo; m != 0; m &= m - 1) {
        int b = std::countr_zero(m);
        inv += std::popcount(hi & ~((2u << b) - 1u));
    }
    return inv;
}

std::tuple<unsigned, const std::vector<int>&, const std::vector<int>&,
           const std::vector<int>&>
term_key(const FormTerm& t) {
    return {t.wedge, t.xe, t.ye, t.ze};
}

// Multiply the monomial part of t by x_j^(c) when the block is a corner
// block; interior blocks carry the constant 1 instead.
void mul_block_weight(const Patch& p, FormTerm& t, int j) {
    if (j < p.k) t.xe[j] += p.c[j];
}

// d/dv of the monomial part; false when the derivative vanishes.
enum class Var { x, y, xi };
bool derive(FormTerm& t, Var v, int j, int k) {
    int* e = nullptr;
    switch (v) {
        case Var::x: e = &t.xe[j]; break;
        case Var::y: e = &t.ye[j - k]; break;
        case Var::xi: e = &t.ze[j]; break;
    }
    if (*e == 0) return false;
    t.coeff *= Scalar(*e);
    *e -= 1;
    return true;
}

FormTerm mono_mul(const FormTerm& a, const FormTerm& b) {
    FormTerm r = a;
    r.coeff *= b.coeff;
    for (size_t i = 0; i < r.xe.size(); ++i) r.xe[i] += b.xe[i];
    for (size_t i = 0; i < r.ye.size(); ++i) r.ye[i] += b.ye[i];
    for (size_t i = 0; i < r.ze.size(); ++i) r.ze[i] += b.ze[i];
    return r;
}

std::vector<int> mask_slots(unsigned mask) {
    std::vector<int> s;
    for (unsigned m = mask; m != 0; m &= m - 1) s.push_back(std::countr_zero(m));
    return s;
}

LaurentForm coordinate_form(const Patch& p, int slot) {
    std::vector<int> xe(p.k, 0), ye(p.n - p.k, 0), ze(p.n, 0);
    int j = slot / 2;
    if (slot % 2 == 1)
        ze[j] = 1;
    else if (j < p.k)
        xe[j] = 1;
    else
        ye[j - p.k] = 1;
    return LaurentForm::monomial(p, Scalar(1), std::move(xe), std::move(ye),
                                 std::move(ze), {});
}

} // namespace

void Patch::validate() const {
    require_input(n >= 1, "patch base dimension must be positive");
    require_input(k >= 0 && k <= n, "corner codimension out of range");
    require_input(static_cast<int>(c.size()) == k,
                  "patch needs one exponent per defining function");
    for (int cj : c) require_input(cj >= 1, "calculus exponents must be >= 1");
    require_input(n <= 15, "patch too large for the slot mask");
}

int FormTerm::form_degree() const { return std::popcount(wedge); }

int FormTerm::radial_degree() const {
    int d = std::popcount(wedge & kXiBits);
    for (int e : ze) d += e;
    return d;
}

LaurentForm LaurentForm::monomial(const Patch& p, const Scalar& coeff,
                                  std::vector<int> xe, std::vector<int> ye,
                                  std::vector<int> ze,
                                  const std::vector<int>& slots) {
    LaurentForm f(p);
    require_input(static_cast<int>(xe.size()) == p.k, "x-exponent count != k");
    require_input(static_cast<int>(ye.size()) == p.n - p.k,
                  "y-exponent count != n - k");
    require_input(static_cast<int>(ze.size()) == p.n, "xi-exponent count != n");
    for (int e : ye) require_input(e >= 0, "y-exponents must be nonnegative");
    for (int e : ze) require_input(e >= 0, "xi-exponents must be nonnegative");
    FormTerm t{coeff, std::move(xe), std::move(ye), std::move(ze), 0};
    int prev = -1;
    for (int s : slots) {
        require_input(s > prev, "wedge slots must be strictly ascending");
        require_input(s >= 0 && s < p.slots(), "wedge slot out of range");
        t.wedge |= 1u << s;
        prev = s;
    }
    f.t_.push_back(std::move(t));
    f.canon();
    return f;
}

LaurentForm LaurentForm::from_terms(Patch p, std::vector<FormTerm> ts) {
    LaurentForm f(std::move(p));
    for (const FormTerm& t : ts) {
        require_input(static_cast<int>(t.xe.size()) == f.p_.k &&
                          static_cast<int>(t.ye.size()) == f.p_.n - f.p_.k &&
                          static_cast<int>(t.ze.size()) == f.p_.n,
                      "term exponent vectors do not fit the patch");
        require_input((t.wedge >> f.p_.slots()) == 0, "wedge slot out of range");
    }
    f.t_ = std::move(ts);
    f.canon();
    return f;
}

void LaurentForm::canon() {
    std::sort(t_.begin(), t_.end(), [](const FormTerm& a, const FormTerm& b) {
        return term_key(a) < term_key(b);
    });
    std::vector<FormTerm> out;
    for (FormTerm& t : t_) {
        if (!out.empty() && term_key(out.back()) == term_key(t))
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
        if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
    }
    t_ = std::move(out);
}

bool LaurentForm::pure_form_degree() const {
    for (const FormTerm& t : t_)
        if (t.form_degree() != t_.front().form_degree()) return false;
    return true;
}

bool LaurentForm::radially_homogeneous() const {
    for (const FormTerm& t : t_)
        if (t.radial_degree() != t_.front().radial_degree()) return false;
    return true;
}

int LaurentForm::form_degree() const {
    require_input(!t_.empty() && pure_form_degree(),
                  "form degree undefined for zero or mixed forms");
    return t_.front().form_degree();
}

int LaurentForm::radial_degree() const {
    require_input(!t_.empty() && radially_homogeneous(),
                  "radial degree undefined for zero or inhomogeneous forms");
    return t_.front().radial_degree();
}

LaurentForm LaurentForm::operator-() const { return scaled(Scalar(-1)); }

LaurentForm& LaurentForm::operator+=(const LaurentForm& o) {
    require_input(p_ == o.p_, "forms live on different patches");
    t_.insert(t_.end(), o.t_.begin(), o.t_.end());
    canon();
    return *this;
}

LaurentForm& LaurentForm::operator-=(const LaurentForm& o) {
    return *this += -o;
}

LaurentForm LaurentForm::scaled(const Scalar& s) const {
    LaurentForm r = *this;
    for (FormTerm& t : r.t_) t.coeff *= s;
    r.canon();
    return r;
}

std::string LaurentForm::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const FormTerm& t : t_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << t.coeff.str() << ")";
        for (int j = 0; j < p_.k; ++j)
            if (t.xe[j] != 0) os << " x" << j + 1 << "^" << t.xe[j];
        for (int j = p_.k; j < p_.n; ++j)
            if (t.ye[j - p_.k] != 0) os << " y" << j + 1 << "^" << t.ye[j - p_.k];
        for (int j = 0; j < p_.n; ++j)
            if (t.ze[j] != 0) os << " xi" << j + 1 << "^" << t.ze[j];
        for (int s : mask_slots(t.wedge)) {
            int j = s / 2;
            if (s % 2 == 1)
                os << " dxi" << j + 1;
            else
                os << (j < p_.k ? " dx" : " dy") << j + 1;
        }
    }
    return os.str();
}

LaurentForm wedge(const LaurentForm& a, const LaurentForm& b) {
    require_input(a.patch() == b.patch(), "forms live on different patches");
    std::vector<FormTerm> out;
    for (const FormTerm& ta : a.terms())
        for (const FormTerm& tb : b.terms()) {
            if ((ta.wedge & tb.wedge) != 0) continue;
            FormTerm r = mono_mul(ta, tb);
            r.coeff *= Scalar(sign_pow(crossings(ta.wedge, tb.wedge)));
            r.wedge = ta.wedge | tb.wedge;
            out.push_back(std::move(r));
        }
    return LaurentForm::from_terms(a.patch(), std::move(out));
}

LaurentForm exterior_d(const LaurentForm& f) {
    const Patch& p = f.patch();
    std::vector<FormTerm> out;
    auto push = [&](const FormTerm& base, Var v, int j, int slot) {
        if ((base.wedge & (1u << slot)) != 0) return; // dv ^ dv = 0
        FormTerm t = base;
        if (!derive(t, v, j, p.k)) return;
        t.coeff *= Scalar(sign_pow(bits_below(t.wedge, slot)));
        t.wedge |= 1u << slot;
        out.push_back(std::move(t));
    };
    for (const FormTerm& t : f.terms())
        for (int j = 0; j < p.n; ++j) {
            push(t, j < p.k ? Var::x : Var::y, j, p.pos_slot(j));
            push(t, Var::xi, j, p.xi_slot(j));
        }
    return LaurentForm::from_terms(p, std::move(out));
}

LaurentForm contract_G(const LaurentForm& f) {
    const Patch& p = f.patch();
    std::vector<FormTerm> out;
    for (const FormTerm& t : f.terms())
        for (int j = 0; j < p.n; ++j) {
            unsigned sx = 1u << p.xi_slot(j), sp = 1u << p.pos_slot(j);
            if ((t.wedge & sx) == 0 || (t.wedge & sp) == 0) continue;
            FormTerm r = t;
            r.coeff *= Scalar(sign_pow(bits_below(r.wedge, p.xi_slot(j))));
            r.wedge &= ~sx;
            r.coeff *= Scalar(sign_pow(bits_below(r.wedge, p.pos_slot(j))));
            r.wedge &= ~sp;
            mul_block_weight(p, r, j);
            out.push_back(std::move(r));
        }
    return LaurentForm::from_terms(p, std::move(out));
}

LaurentForm poisson_bracket(const LaurentForm& f, const LaurentForm& g) {
    const Patch& p = f.patch();
    require_input(p == g.patch(), "forms live on different patches");
    for (const FormTerm& t : f.terms())
        require_input(t.wedge == 0, "bracket arguments must be 0-forms");
    for (const FormTerm& t : g.terms())
        require_input(t.wedge == 0, "bracket arguments must be 0-forms");
    std::vector<FormTerm> out;
    auto half = [&](const FormTerm& a, const FormTerm& b, int j, int sg) {
        FormTerm da = a, db = b;
        if (!derive(da, Var::xi, j, p.k)) return;
        if (!derive(db, j < p.k ? Var::x : Var::y, j, p.k)) return;
        FormTerm r = mono_mul(da, db);
        r.coeff *= Scalar(sg);
        mul_block_weight(p, r, j);
        out.push_back(std::move(r));
    };
    for (const FormTerm& ta : f.terms())
        for (const FormTerm& tb : g.terms())
            for (int j = 0; j < p.n; ++j) {
                half(ta, tb, j, 1);
                half(tb, ta, j, -1);
            }
    return LaurentForm::from_terms(p, std::move(out));
}

namespace {

LaurentForm delta_contraction(const LaurentForm& f) {
    return contract_G(exterior_d(f)) - exterior_d(contract_G(f));
}

LaurentForm delta_local(const LaurentForm& f) {
    const Patch& p = f.patch();
    LaurentForm acc(p);
    for (const FormTerm& t : f.terms()) {
        std::vector<int> slots = mask_slots(t.wedge);
        int q = static_cast<int>(slots.size());
        FormTerm f0 = t;
        f0.wedge = 0;
        LaurentForm f0form = LaurentForm::from_terms(p, {f0});
        for (int j = 0; j < q; ++j) {
            FormTerm rest{Scalar(sign_pow(j)), std::vector<int>(p.k, 0),
                          std::vector<int>(p.n - p.k, 0), std::vector<int>(p.n, 0),
                          t.wedge & ~(1u << slots[j])};
            acc += wedge(poisson_bracket(f0form, coordinate_form(p, slots[j])),
                         LaurentForm::from_terms(p, {rest}));
        }
        for (int i = 0; i < q; ++i)
            for (int j = i + 1; j < q; ++j) {
                // (-1)^(i+j) with 1-based summation indices
                FormTerm rest = f0;
                rest.coeff *= Scalar(sign_pow(i + j + 2));
                rest.wedge = t.wedge & ~(1u << slots[i]) & ~(1u << slots[j]);
                LaurentForm br = poisson_bracket(coordinate_form(p, slots[i]),
                                                 coordinate_form(p, slots[j]));
                acc += wedge(exterior_d(br), LaurentForm::from_terms(p, {rest}));
            }
    }
    return acc;
}

} // namespace

LaurentForm delta(const LaurentForm& f, DeltaRoute route) {
    if (route == DeltaRoute::contraction) return delta_contraction(f);
    if (route == DeltaRoute::local_formula) return delta_local(f);
    LaurentForm a = delta_contraction(f);
    LaurentForm b = delta_local(f);
    require_engine(a == b, "delta routes disagree on " + f.str() + ": contraction " +
                               a.str() + " vs local " + b.str());
    return a;
}

LaurentForm hodge_star(const LaurentForm& f) {
    const Patch& p = f.patch();
    const unsigned full = (1u << p.slots()) - 1u;
    std::vector<FormTerm> out;
    for (const FormTerm& t : f.terms()) {
        unsigned w = t.wedge;
        unsigned wp = ((w & ~kXiBits) << 1) | ((w & kXiBits) >> 1); // partners
        FormTerm r = t;
        // det of the G-pairing between the sorted slots of w and of wp: one
        // nonzero entry per row, so a signed product over partner pairs.
        std::vector<int> rows = mask_slots(w), cols = mask_slots(wp);
        std::vector<int> perm;
        for (int s : rows) {
            int partner = (s % 2 == 0) ? s + 1 : s - 1;
            perm.push_back(static_cast<int>(
                std::lower_bound(cols.begin(), cols.end(), partner) - cols.begin()));
            if (s % 2 == 0) r.coeff = -r.coeff; // {P_j, xi_j} = -g_j
            mul_block_weight(p, r, s / 2);
        }
        int inv = 0;
        for (size_t a = 0; a < perm.size(); ++a)
            for (size_t b = a + 1; b < perm.size(); ++b)
                if (perm[a] > perm[b]) ++inv;
        unsigned wc = full & ~wp;
        inv += crossings(wp, wc);
        r.coeff *= Scalar(sign_pow(inv));
        for (int j = 0; j < p.k; ++j) r.xe[j] -= p.c[j]; // omega^n/n! weight
        r.wedge = wc;
        out.push_back(std::move(r));
    }
    return LaurentForm::from_terms(p, std::move(out));
}

IdentityReport verify_identities(const Patch& p, const std::vector<LaurentForm>& samples) {
    p.validate();
    IdentityReport rep;
    for (const LaurentForm& f : samples) {
        require_input(f.patch() == p, "sample lives on a different patch");
        if (f.is_zero()) continue;
        require_input(f.pure_form_degree() && f.radially_homogeneous(),
                      "samples must be homogeneous: " + f.str());
        int q = f.form_degree();
        int d = f.radial_degree();

        require_engine(exterior_d(exterior_d(f)).is_zero(), "d^2 != 0 on " + f.str());
        LaurentForm df = delta(f, DeltaRoute::both);
        require_engine(delta(df, DeltaRoute::both).is_zero(), "delta^2 != 0 on " + f.str());
        if (!df.is_zero())
            require_engine(df.radially_homogeneous() && df.radial_degree() == d - 1,
                           "delta does not drop the radial degree on " + f.str());

        LaurentForm sf = hodge_star(f);
        require_engine(hodge_star(sf) == f, "star not an involution on " + f.str());
        require_engine(sf.form_degree() == 2 * p.n - q &&
                           sf.radial_degree() == d + p.n - q,
                       "star bidegree rule fails on " + f.str());
        LaurentForm lhs = hodge_star(delta(sf, DeltaRoute::both));
        LaurentForm rhs = exterior_d(f).scaled(Scalar(sign_pow(q)));
        require_engine(lhs == rhs, "star delta star != (-1)^q d on " + f.str());

        ++rep.forms;
        rep.top_form_degree = std::max(rep.top_form_degree, q);
    }
    return rep;
}

LaurentForm random_monomial(const Patch& p, std::mt19937& rng) {
    std::uniform_int_distribution<int> xd(-3, 3), nd(0, 3), cd(-4, 4), dd(1, 3),
        md(0, (1 << p.slots()) - 1), im(0, 3);
    std::vector<int> xe(p.k), ye(p.n - p.k), ze(p.n);
    for (int& e : xe) e = xd(rng);
    for (int& e : ye) e = nd(rng);
    for (int& e : ze) e = nd(rng);
    int num = 0;
    while (num == 0) num = cd(rng);
    Scalar coeff = Scalar(qlinalg::Rational(num, dd(rng)));
    if (im(rng) == 0) coeff *= Scalar::i();
    FormTerm t{coeff, std::move(xe), std::move(ye), std::move(ze),
               static_cast<unsigned>(md(rng))};
    return LaurentForm::from_terms(p, {t});
}

std::vector<FormTerm> sector_basis(const Patch& p, int p0, int d,
                                   const ExponentBounds& b) {
    p.validate();
    require_input(b.x_low <= b.x_high && b.y_max >= 0, "empty exponent window");
    std::vector<FormTerm> basis;
    if (p0 < 0 || p0 > p.slots() || d < 0) return basis;
    for (unsigned w = 0; w < (1u << p.slots()); ++w) {
        if (std::popcount(w) != p0) continue;
        int zsum = d - std::popcount(w & kXiBits);
        if (zsum < 0) continue;
        FormTerm t{Scalar(1), std::vector<int>(p.k, b.x_low),
                   std::vector<int>(p.n - p.k, 0), std::vector<int>(p.n, 0), w};
        // odometer over x, y, then xi-compositions of zsum
        std::vector<int>& ze = t.ze;
        auto emit_ze = [&](auto&& self, int j, int left) -> void {
            if (j == p.n - 1) {
                ze[j] = left;
                basis.push_back(t);
                if (basis.size() > 200000)
                    throw budget_error("sector basis exceeds the size cap");
                ze[j] = 0;
                return;
            }
            for (int e = 0; e <= left; ++e) {
                ze[j] = e;
                self(self, j + 1, left - e);
            }
            ze[j] = 0;
        };
        auto emit_y = [&](auto&& self, int j) -> void {
            if (j == p.n - p.k) {
                emit_ze(emit_ze, 0, zsum);
                return;
            }
            for (int e = 0; e <= b.y_max; ++e) {
                t.ye[j] = e;
                self(self, j + 1);
            }
            t.ye[j] = 0;
        };
        auto emit_x = [&](auto&& self, int j) -> void {
            if (j == p.k) {
                emit_y(emit_y, 0);
                return;
            }
            for (int e = b.x_low; e <= b.x_high; ++e) {
                t.xe[j] = e;
                self(self, j + 1);
            }
            t.xe[j] = b.x_low;
        };
        emit_x(emit_x, 0);
    }
    return basis;
}

SparseMat delta_matrix(const Patch& p, int p0, int d, const ExponentBounds& b) {
    std::vector<FormTerm> src = sector_basis(p, p0, d, b);
    std::vector<FormTerm> dst = sector_basis(p, p0 - 1, d - 1, b);
    std::map<std::tuple<unsigned, std::vector<int>, std::vector<int>, std::vector<int>>, int>
        where;
    for (size_t i = 0; i < dst.size(); ++i) where[term_key(dst[i])] = static_cast<int>(i);
    SparseMat m(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (size_t j = 0; j < src.size(); ++j) {
        LaurentForm img = delta(LaurentForm::from_terms(p, {src[j]}), DeltaRoute::both);
        for (const FormTerm& t : img.terms()) {
            bool above = false;
            for (int i = 0; i < p.k; ++i) {
                require_engine(t.xe[i] >= b.x_low, "delta dropped below the x-floor");
                above = above || t.xe[i] > b.x_high;
            }
            for (int e : t.ye)
                require_engine(e <= b.y_max, "delta raised a y-exponent");
            if (above) continue; // cut by the quotient at the x-ceiling
            auto it = where.find(term_key(t));
            require_engine(it != where.end(), "delta image escaped its sector");
            m.set(it->second, static_cast<int>(j), t.coeff);
        }
    }
    return m;
}

int poisson_homology_dim(const Patch& p, int p0, int d, const ExponentBounds& b) {
    std::vector<FormTerm> mid = sector_basis(p, p0, d, b);
    SparseMat out = delta_matrix(p, p0, d, b);
    SparseMat in = delta_matrix(p, p0 + 1, d + 1, b);
    require_engine((out * in).is_zero(), "windowed delta^2 != 0");
    return static_cast<int>(mid.size()) - qlinalg::rank_of(out) - qlinalg::rank_of(in);
}

PoissonHomology homogeneous_poisson_homology(const Patch& p, int p0, int d,
                                             ExponentBounds base, int max_steps) {
    int prev = -1;
    for (int step = 0; step <= max_steps; ++step) {
        ExponentBounds b = base.widened(step);
        int dim = poisson_homology_dim(p, p0, d, b);
        if (step > 0 && dim == prev) {
            std::ostringstream cert;
            cert << "windows [" << b.x_low + 1 << "," << b.x_high - 1 << "]x[0,"
                 << b.y_max - 1 << "] and [" << b.x_low << "," << b.x_high
                 << "]x[0," << b.y_max << "] both report dim " << dim;
            return {dim, b, cert.str()};
        }
        prev = dim;
    }
    throw budget_error("poisson homology did not stabilize within " +
                       std::to_string(max_steps) + " window enlargements");
}

} // namespace cornerhom::poisson
