#include "cornerhom/evaluator.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cornerhom/errors.hpp"

namespace cornerhom::evaluator {

using json = nlohmann::json;
using complexes::ChainMap;
using complexes::HomologySpace;
using corners::CellData;
using corners::Face;
using hochschild::HochschildComplex;
using hochschild::Term;
using hochschild::Window;
using qlinalg::decompose;
using qlinalg::rank_of;
using qlinalg::SVec;

namespace {

int at_or_zero(const std::vector<int>& v, int j) {
    return (j >= 0 && j < static_cast<int>(v.size())) ? v[j] : 0;
}

// convolution of cohomology tables (Kunneth over a field)
std::vector<int> conv(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<int> sphere_betti(int n) {
    std::vector<int> s(n, 0);
    s[0] += 1;
    s[n - 1] += 1;
    return s;
}

int json_int(const json& j, const std::string& path) {
    require_input(j.is_number_integer(), "manifest: " + path + " must be an integer");
    return j.get<int>();
}

} // namespace

// ---------------------------------------------------------------------------
// manifests

Manifest parse_manifest(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("manifest: not valid JSON: ") + e.what());
    }
    require_input(doc.is_object(), "manifest: top level must be an object");

    Manifest man;
    man.name = doc.value("name", std::string("unnamed"));
    require_input(doc.contains("dim"), "manifest: missing dim");
    man.m.n = json_int(doc["dim"], "dim");

    require_input(doc.contains("faces") && doc["faces"].is_array() &&
                      !doc["faces"].empty(),
                  "manifest: faces[] required");
    bool any_cells = false;
    std::map<int, std::tuple<int, int, SVec>> cellmap; // id -> (dim, carrier, bd)
    int fi = 0;
    for (const json& jf : doc["faces"]) {
        std::string where = "faces[" + std::to_string(fi++) + "]";
        require_input(jf.is_object(), "manifest: " + where + " must be an object");
        Face f;
        require_input(jf.contains("id") && jf.contains("codim"),
                      "manifest: " + where + " needs id and codim");
        f.id = json_int(jf["id"], where + ".id");
        f.codim = json_int(jf["codim"], where + ".codim");
        f.orientable = jf.value("orientable", true);
        if (jf.contains("betti")) {
            require_input(jf["betti"].is_array(), "manifest: " + where + ".betti");
            std::vector<int> b;
            for (const json& e : jf["betti"]) b.push_back(json_int(e, where + ".betti"));
            f.betti = std::move(b);
        }
        if (jf.contains("cells")) {
            require_input(jf["cells"].is_object(), "manifest: " + where + ".cells");
            any_cells = true;
            for (const auto& [key, jc] : jf["cells"].items()) {
                int cid = -1;
                try {
                    cid = std::stoi(key);
                } catch (...) {
                    throw input_error("manifest: " + where + ".cells: key '" + key +
                                      "' is not a cell id");
                }
                require_input(!cellmap.count(cid),
                              "manifest: cell " + key + " declared twice");
                require_input(jc.is_object() && jc.contains("dim"),
                              "manifest: " + where + ".cells." + key + " needs dim");
                SVec bd;
                if (jc.contains("boundary")) {
                    require_input(jc["boundary"].is_array(),
                                  "manifest: " + where + ".cells." + key + ".boundary");
                    for (const json& be : jc["boundary"]) {
                        require_input(be.is_array() && be.size() == 2,
                                      "manifest: boundary entries are [cell, coeff]");
                        int b = json_int(be[0], "boundary cell id");
                        Scalar c = be[1].is_string()
                                       ? qlinalg::parse_scalar(be[1].get<std::string>())
                                       : Scalar(json_int(be[1], "boundary coefficient"));
                        if (!c.is_zero()) bd.push_back({b, c});
                    }
                    std::sort(bd.begin(), bd.end(),
                              [](const auto& x, const auto& y) { return x.first < y.first; });
                    for (std::size_t k = 1; k < bd.size(); ++k)
                        require_input(bd[k - 1].first != bd[k].first,
                                      "manifest: repeated boundary cell in cell " + key);
                }
                cellmap[cid] = {json_int(jc["dim"], where + ".cells." + key + ".dim"),
                                f.id, std::move(bd)};
            }
        }
        man.m.faces.push_back(std::move(f));
    }

    if (doc.contains("covers")) {
        require_input(doc["covers"].is_array(), "manifest: covers must be an array");
        for (const json& jc : doc["covers"]) {
            require_input(jc.is_array() && jc.size() == 2,
                          "manifest: covers entries are [smaller, larger]");
            man.m.covers.push_back({json_int(jc[0], "covers"), json_int(jc[1], "covers")});
        }
    }

    if (any_cells) {
        CellData cd;
        int expect = 0;
        for (const auto& [id, info] : cellmap) {
            require_input(id == expect,
                          "manifest: cell ids must be 0..N-1, missing " +
                              std::to_string(expect));
            ++expect;
            cd.dim.push_back(std::get<0>(info));
            cd.carrier.push_back(std::get<1>(info));
            cd.boundary.push_back(std::get<2>(info));
        }
        man.m.cells = std::move(cd);
    }

    if (doc.contains("X")) {
        require_input(doc["X"].is_array(), "manifest: X must be an array of face ids");
        for (const json& e : doc["X"]) man.x.ids.push_back(json_int(e, "X"));
    }
    if (doc.contains("c")) {
        require_input(doc["c"].is_object(), "manifest: c must map hyperface ids");
        for (const auto& [key, val] : doc["c"].items()) {
            int id = -1;
            try {
                id = std::stoi(key);
            } catch (...) {
                throw input_error("manifest: c: key '" + key + "' is not a face id");
            }
            int e = json_int(val, "c." + key);
            require_input(e >= 1, "manifest: contact exponent must be >= 1");
            man.contact[id] = e;
        }
    }
    if (doc.contains("assumptions")) {
        const json& a = doc["assumptions"];
        require_input(a.is_object(), "manifest: assumptions must be an object");
        man.assumptions.rational_iso = a.value("rational_iso", false);
        man.assumptions.trivial_cosphere = a.value("trivial_cosphere", false);
    }
    if (doc.contains("budgets")) {
        const json& b = doc["budgets"];
        require_input(b.is_object(), "manifest: budgets must be an object");
        if (b.contains("order_window")) {
            const json& w = b["order_window"];
            require_input(w.is_array() && w.size() == 2,
                          "manifest: budgets.order_window is [low, high]");
            man.budgets.order_low = json_int(w[0], "order_window");
            man.budgets.order_high = json_int(w[1], "order_window");
            require_input(man.budgets.order_low < man.budgets.order_high,
                          "manifest: order window must be nonempty");
        }
        if (b.contains("pole_bound")) {
            man.budgets.pole_bound = json_int(b["pole_bound"], "pole_bound");
            require_input(man.budgets.pole_bound >= 0, "manifest: pole_bound < 0");
        }
        if (b.contains("q_max")) {
            man.budgets.q_max = json_int(b["q_max"], "q_max");
            require_input(man.budgets.q_max >= 0, "manifest: q_max < 0");
        }
    }

    man.m.validate();
    man.x.validate(man.m);
    for (const auto& [id, e] : man.contact) {
        require_input(id >= 0 && id < static_cast<int>(man.m.faces.size()),
                      "manifest: c names a missing face");
        require_input(man.m.faces[id].codim == 1,
                      "manifest: contact exponents live on hyperfaces only");
        (void)e;
    }
    return man;
}

Manifest load_manifest_file(const std::string& path) {
    std::ifstream in(path);
    require_input(in.good(), "cannot open manifest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

// ---------------------------------------------------------------------------
// cosphere transport

CosphereModel build_cosphere(const Manifest& man) {
    require_input(man.assumptions.trivial_cosphere,
                  "refusing: manifest does not declare the cosphere trivial over "
                  "its faces (assumptions.trivial_cosphere)");
    const int n = man.m.n;
    require_input(n >= 1, "the cosphere of a zero-dimensional base is empty");

    CosphereModel cm;
    cm.base = man.m;
    cm.n = n;

    CornerManifold s;
    s.n = 2 * n - 1;
    s.covers = man.m.covers;
    s.embedded_faces = man.m.embedded_faces;
    const std::vector<int> sph = sphere_betti(n);
    for (const Face& f : man.m.faces) {
        Face g = f;
        g.betti.reset();
        if (f.betti || man.m.cells) g.betti = conv(man.m.face_betti(f.id), sph);
        s.faces.push_back(std::move(g));
    }
    if (man.m.cells) {
        const CellData& cd = *man.m.cells;
        const int nc = static_cast<int>(cd.dim.size());
        // minimal cell structure on the fiber sphere: one bottom cell and one
        // top cell (n = 1: two bottom cells), neither with boundary, so each
        // copy of the base complex keeps its own boundary
        const std::vector<int> shifts =
            (n == 1) ? std::vector<int>{0, 0} : std::vector<int>{0, n - 1};
        CellData out;
        for (int copy = 0; copy < static_cast<int>(shifts.size()); ++copy)
            for (int c = 0; c < nc; ++c) {
                out.dim.push_back(cd.dim[c] + shifts[copy]);
                out.carrier.push_back(cd.carrier[c]);
                SVec bd;
                for (const auto& [b, v] : cd.boundary[c]) bd.push_back({b + copy * nc, v});
                out.boundary.push_back(std::move(bd));
            }
        s.cells = std::move(out);
    }
    s.validate(); // also re-checks every Kunneth betti against the cells
    cm.cosphere = std::move(s);
    return cm;
}

// ---------------------------------------------------------------------------
// theorem right-hand sides

LaurentTable eval_hh_laurent(const Manifest& man) {
    require_input(man.assumptions.rational_iso,
                  "refusing: transporting cosphere data from the base needs "
                  "assumptions.rational_iso");
    CosphereModel cm = build_cosphere(man);
    const int n2 = 2 * cm.n;

    LaurentTable out;
    if (cm.cosphere.cells) {
        corners::GluedSpace g = corners::build_L(cm.cosphere);
        FaceSubset rx = man.x; // the face lattices agree, ids transport
        out.p = corners::cellular_cohomology(cm.cosphere, g,
                                             man.x.ids.empty() ? nullptr : &rx);
        if (man.x.ids.empty())
            require_engine(out.p == corners::laurent_cohomology_formula(cm.cosphere),
                           "face formula and glued cells disagree");
    } else {
        require_input(man.x.ids.empty(),
                      "evaluating relative to X needs cell data");
        out.p = corners::laurent_cohomology_formula(cm.cosphere);
    }
    out.hh.resize(n2 + 1);
    for (int q = 0; q <= n2; ++q)
        out.hh[q] = at_or_zero(out.p, n2 - q) + at_or_zero(out.p, n2 - q - 1);
    return out;
}

HPDims eval_hp(const Manifest& man, HPVariant v) {
    HPDims out;
    if (v == HPVariant::laurent) {
        LaurentTable t = eval_hh_laurent(man);
        for (int q = 0; q < static_cast<int>(t.hh.size()); ++q)
            (q % 2 == 0 ? out.even : out.odd) += t.hh[q];
        return out;
    }
    CosphereModel cm = build_cosphere(man);
    std::vector<int> s = cm.cosphere.face_betti(cm.cosphere.interior_face());
    if (v == HPVariant::full) s = conv(s, {1, 1});
    for (int q = 0; q < static_cast<int>(s.size()); ++q)
        (q % 2 == 0 ? out.even : out.odd) += s[q];
    return out;
}

int eval_hc(const Manifest& man, int m) {
    if (m < 0) return 0;
    LaurentTable t = eval_hh_laurent(man);
    int sum = 0;
    for (int k = 0; m - 2 * k >= 0; ++k) sum += at_or_zero(t.hh, m - 2 * k);
    return sum;
}

bool hc_stable_range_check(const Manifest& man, int m) {
    require_input(m > 2 * man.m.n - 1,
                  "the stable range starts above the cosphere dimension");
    LaurentTable t = eval_hh_laurent(man);
    auto hc_of = [&](int mm) {
        int sum = 0;
        for (int k = 0; mm - 2 * k >= 0; ++k) sum += at_or_zero(t.hh, mm - 2 * k);
        return sum;
    };
    // the direct sweep of the relative table, one circle factor included
    int direct = 0;
    for (int k = 0; m - 2 * k >= 0; ++k)
        direct += at_or_zero(t.p, m - 2 * k) + at_or_zero(t.p, m - 2 * k - 1);
    return hc_of(m) == direct && hc_of(m) == hc_of(m + 2);
}

namespace {

struct GluedSplit {
    ChainComplex sub, quot;
    ChainMap incl, proj;
};

// the preimage of a closed face set is the span of the glued cells whose
// carrier lies in it; downward closure makes it a subcomplex
GluedSplit split_glued(const CornerManifold& m, const corners::GluedSpace& g,
                       const FaceSubset& x) {
    const int top = m.n;
    GluedSplit out;
    std::vector<std::vector<int>> in(top + 1), outp(top + 1);
    std::vector<std::map<int, int>> ipos(top + 1), opos(top + 1);
    for (int q = 0; q <= top; ++q)
        for (int j = 0; j < g.chain.dim(q); ++j) {
            int carrier = m.cells->carrier[g.cells[q][j].cell];
            if (x.contains(carrier)) {
                ipos[q][j] = static_cast<int>(in[q].size());
                in[q].push_back(j);
            } else {
                opos[q][j] = static_cast<int>(outp[q].size());
                outp[q].push_back(j);
            }
        }
    std::vector<int> sdims(top + 1), qdims(top + 1);
    std::vector<SparseMat> sd(top + 1), qd(top + 1);
    for (int q = 0; q <= top; ++q) {
        sdims[q] = static_cast<int>(in[q].size());
        qdims[q] = static_cast<int>(outp[q].size());
    }
    for (int q = 0; q <= top; ++q) {
        SparseMat ds(q > 0 ? sdims[q - 1] : 0, sdims[q]);
        SparseMat dq(q > 0 ? qdims[q - 1] : 0, qdims[q]);
        if (q > 0) {
            SparseMat full = g.chain.boundary(q);
            for (int j = 0; j < sdims[q]; ++j)
                for (const auto& [r, v] : full.col[in[q][j]]) {
                    auto it = ipos[q - 1].find(r);
                    require_engine(it != ipos[q - 1].end(),
                                   "preimage of a closed set is not a subcomplex");
                    ds.set(it->second, j, v);
                }
            for (int j = 0; j < qdims[q]; ++j)
                for (const auto& [r, v] : full.col[outp[q][j]]) {
                    auto it = opos[q - 1].find(r);
                    if (it != opos[q - 1].end()) dq.set(it->second, j, v);
                }
        }
        sd[q] = std::move(ds);
        qd[q] = std::move(dq);
    }
    out.sub = ChainComplex(sdims, std::move(sd));
    out.quot = ChainComplex(qdims, std::move(qd));
    out.incl.f.resize(top + 1);
    out.proj.f.resize(top + 1);
    for (int q = 0; q <= top; ++q) {
        SparseMat i(g.chain.dim(q), sdims[q]);
        for (int j = 0; j < sdims[q]; ++j) i.set(in[q][j], j, Scalar(1));
        SparseMat p(qdims[q], g.chain.dim(q));
        for (int j = 0; j < qdims[q]; ++j) p.set(j, outp[q][j], Scalar(1));
        out.incl.f[q] = std::move(i);
        out.proj.f[q] = std::move(p);
    }
    return out;
}

} // namespace

QuotientTraces eval_quotient_and_traces(const Manifest& man) {
    CosphereModel cm = build_cosphere(man);
    const int n = cm.n;
    const int n2 = 2 * n;
    QuotientTraces out;
    out.note = "read on the glued cosphere times the cyclic circle; the source "
               "statement names a smaller glued base, and this choice is recorded "
               "rather than resolved";

    std::vector<int> mins = corners::minimal_faces(man.m);
    out.trace_count = static_cast<int>(mins.size());
    FaceSubset y{mins};

    out.quotient_hh.assign(n2 + 1, 0);
    int h_top_formula = 0;
    bool formula_ok = true;
    for (int f : mins) {
        if (!cm.cosphere.faces[f].betti && !cm.cosphere.cells) {
            formula_ok = false;
            break;
        }
        h_top_formula += cm.cosphere.face_betti(f).back();
    }

    if (cm.cosphere.cells) {
        corners::GluedSpace g = corners::build_L(cm.cosphere);
        GluedSplit sp = split_glued(cm.cosphere, g, man.x);
        complexes::LongExactSequence les =
            complexes::les_of_ses(sp.sub, g.chain, sp.quot, sp.incl, sp.proj);
        out.les_fit = les.exact;
        std::vector<int> t = conv(sp.sub.betti_all(), {1, 1});
        for (int q = 0; q <= n2; ++q) out.quotient_hh[q] = at_or_zero(t, n2 - q);

        GluedSplit spy = split_glued(cm.cosphere, g, y);
        out.h_top_dim = spy.sub.betti(2 * n - 1);
        if (formula_ok)
            require_engine(out.h_top_dim == h_top_formula,
                           "top classes over the minimal faces: cells and betti "
                           "routes disagree");
    } else {
        require_input(man.x.ids.empty(),
                      "quotient evaluation relative to X needs cell data");
        out.les_fit = true; // empty preimage: the pair sequence is the identity
        require_input(formula_ok, "minimal faces carry neither betti nor cells");
        out.h_top_dim = h_top_formula;
    }

    bool orientable = std::all_of(mins.begin(), mins.end(), [&](int f) {
        return man.m.faces[f].orientable;
    });
    if (n >= 2 && orientable)
        require_engine(out.h_top_dim == out.trace_count,
                       "trace census must match the top classes over the "
                       "minimal faces");
    return out;
}

// ---------------------------------------------------------------------------
// the circle symbol model

SymbolModel build_symbol_model(const Budgets& b) {
    require_input(b.order_low < b.order_high, "empty order window");
    SymbolModel m;
    m.budgets = b;
    return m;
}

int model_slot_count(const SymbolModel& model, int w) {
    return static_cast<int>(model.branch
                                .orders_with_support(w, model.budgets.order_low,
                                                     model.budgets.order_high)
                                .size());
}

namespace {

int tuple_order(const Tuple& t) {
    int s = 0;
    for (const BasisKey& k : t) s += k.o;
    return s;
}

// wtot/ctot/mu/pbot agree and the small band top is contained: the smaller
// complex is then a subcomplex and inclusion is the obvious chain map
ChainMap band_inclusion(const HochschildComplex& small, const HochschildComplex& big) {
    const Window& a = small.window();
    const Window& b = big.window();
    // widening any of wtot, ctot, ptop keeps the differential intact on the
    // small span (merges are subadditive in both weight and positive order),
    // but the floor must match: a lower floor would resurrect cut merges
    require_engine(a.mu == b.mu && a.wtot <= b.wtot && a.ctot <= b.ctot &&
                       a.pbot == b.pbot && a.ptop <= b.ptop,
                   "band inclusion needs nested windows");
    ChainMap f;
    f.f.resize(small.top() + 1);
    for (int n = 0; n <= small.top(); ++n) {
        SparseMat m(big.dim(n), small.dim(n));
        for (int i = 0; i < small.dim(n); ++i) {
            int j = big.index_of(n, small.tuples(n)[i]);
            require_engine(j >= 0, "band inclusion misses a chain");
            m.set(j, i, Scalar(1));
        }
        f.f[n] = std::move(m);
    }
    return f;
}

// cutting the band floor is the quotient by a filtration step
ChainMap band_projection(const HochschildComplex& deep, const HochschildComplex& shallow) {
    const Window& a = deep.window();
    const Window& b = shallow.window();
    require_engine(a.mu == b.mu && a.wtot == b.wtot && a.ctot == b.ctot &&
                       a.ptop == b.ptop && a.pbot <= b.pbot,
                   "band projection needs nested floors");
    ChainMap f;
    f.f.resize(deep.top() + 1);
    for (int n = 0; n <= deep.top(); ++n) {
        SparseMat m(shallow.dim(n), deep.dim(n));
        for (int i = 0; i < deep.dim(n); ++i) {
            const Tuple& t = deep.tuples(n)[i];
            if (tuple_order(t) <= b.pbot) continue;
            int j = shallow.index_of(n, t);
            require_engine(j >= 0, "band projection misses a chain");
            m.set(j, i, Scalar(1));
        }
        f.f[n] = std::move(m);
    }
    return f;
}

} // namespace

StabilizedHH spectral_hh_stabilized(const SymbolModel& model, int qmax, int max_steps) {
    const Budgets& bud = model.budgets;
    const int nmax = qmax + 1;
    std::vector<int> prev;
    StabilizedHH out;
    for (int s = 0; s < max_steps; ++s) {
        const int wtot = std::max(2, bud.pole_bound);
        // the deep band sits one order below the budget so that the shallow
        // comparison window is the budget window itself and never cuts the
        // classes the model is about
        const int pbot = bud.order_low - 1 - s;
        const int ptop = bud.order_high + s;
        // the taller comparison window must admit the killer of this band's
        // top line, [u, u^{-1} xi^{ptop+1}], whose positive part is ptop+1
        const int ctot = std::max(1, ptop + 1);
        Window deep{0, wtot, ctot, pbot, ptop};
        Window shallow{0, wtot, ctot, pbot + 1, ptop};
        Window tall{0, wtot, ctot, pbot, ptop + 1};
        Window wide{0, wtot + 2, ctot + 1, pbot, ptop};
        HochschildComplex M(model.branch, deep, nmax);
        HochschildComplex C(model.branch, shallow, nmax);
        HochschildComplex T(model.branch, tall, nmax);
        HochschildComplex W(model.branch, wide, nmax);

        if (s == 0) {
            // one spectral certificate on the smallest deep window; the
            // later windows only refine the edge bookkeeping, not the pages
            spectral::FilteredComplex filt = M.filtered_by_order();
            spectral::SpectralSequence ss(filt);
            auto cert = ss.converge();
            require_engine(cert.converged, "order filtration failed to converge");
            out.stable_page = cert.stable_page;
            out.einf_consistent = cert.converged;
        }

        ChainComplex bm = M.b_complex(), bc = C.b_complex(),
                     bt = T.b_complex(), bw = W.b_complex();
        ChainMap up = band_inclusion(M, T);
        ChainMap down = band_projection(M, C);
        ChainMap side = band_inclusion(M, W);
        require_engine(up.commutes(bm, bt), "band inclusion is not a chain map");
        require_engine(down.commutes(bm, bc), "band projection is not a chain map");
        require_engine(side.commutes(bm, bw), "width inclusion is not a chain map");

        // a class of the deep band counts only if it survives into the taller
        // band (no ceiling artifact), into the shallower band (no floor
        // artifact), and into the wider band (its filler was not cut by the
        // weight or positivity budgets)
        std::vector<int> dims(qmax + 1, 0);
        for (int q = 0; q <= qmax; ++q) {
            HomologySpace hm(bm, q), hc(bc, q), ht(bt, q), hw(bw, q);
            SparseMat fi = complexes::induced_on_homology(up, bm, bt, q, hm, ht);
            SparseMat fp = complexes::induced_on_homology(down, bm, bc, q, hm, hc);
            SparseMat fw = complexes::induced_on_homology(side, bm, bw, q, hm, hw);
            SparseMat ki = decompose(fi, true, false).kernel;
            SparseMat kp = decompose(fp, true, false).kernel;
            SparseMat kw = decompose(fw, true, false).kernel;
            int edge = rank_of(ki.hstack(kp).hstack(kw));
            dims[q] = (hm.dim() - edge) * model.branches;
        }

        out.window_used = deep;
        out.steps = s + 1;
        if (s > 0 && dims == prev) {
            out.hh = dims;
            return out;
        }
        prev = std::move(dims);
    }
    throw budget_error("windowed homology did not stabilize within " +
                       std::to_string(max_steps) + " window enlargements");
}

// ---------------------------------------------------------------------------
// branch forms and the first-page identity

void RayForm::add(int m, int j, int part, const Scalar& c) {
    if (c.is_zero()) return;
    auto key = std::make_tuple(m, j, part);
    auto it = terms.find(key);
    if (it == terms.end()) {
        terms.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

RayForm RayForm::radial_part(int r) const {
    RayForm out;
    for (const auto& [k, c] : terms) {
        auto [m, j, part] = k;
        int radial = j + (part >= 2 ? 1 : 0);
        if (radial == r) out.add(m, j, part, c);
    }
    return out;
}

std::string RayForm::str() const {
    if (terms.empty()) return "0";
    static const char* wedge[] = {"", " dx", " dxi", " dx^dxi"};
    std::string out;
    for (const auto& [k, c] : terms) {
        auto [m, j, part] = k;
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ") u^" + std::to_string(m) + " xi^" +
               std::to_string(j) + wedge[part];
    }
    return out;
}

namespace {

// wedge of the four part symbols; zero is reported as part -1
std::pair<int, int> wedge_parts(int a, int b) {
    if (a == 0) return {b, 1};
    if (b == 0) return {a, 1};
    if (a == 1 && b == 2) return {3, 1};
    if (a == 2 && b == 1) return {3, -1};
    return {-1, 0};
}

RayForm wedge(const RayForm& f, const RayForm& g) {
    RayForm out;
    for (const auto& [ka, ca] : f.terms)
        for (const auto& [kb, cb] : g.terms) {
            auto [ma, ja, pa] = ka;
            auto [mb, jb, pb] = kb;
            auto [part, sign] = wedge_parts(pa, pb);
            if (part < 0) continue;
            out.add(ma + mb, ja + jb, part, ca * cb * Scalar(sign));
        }
    return out;
}

RayForm d_of(const RayForm& f) {
    RayForm out;
    for (const auto& [k, c] : f.terms) {
        auto [m, j, part] = k;
        require_engine(part == 0, "d is only taken of coefficient functions here");
        if (m != 0) out.add(m, j, 1, c * Scalar::i() * Scalar(m));
        if (j != 0) out.add(m, j - 1, 2, c * Scalar(j));
    }
    return out;
}

RayForm monomial(const BasisKey& k) {
    RayForm f;
    f.add(k.w, k.o, 0, Scalar(1));
    return f;
}

Scalar inv_factorial(int l) {
    long f = 1;
    for (int i = 2; i <= l; ++i) f *= i;
    return Scalar::of_fraction(1, f);
}

} // namespace

RayForm ray_chi(const Tuple& t) {
    require_input(!t.empty(), "chi of an empty chain");
    RayForm f = monomial(t[0]);
    for (std::size_t i = 1; i < t.size(); ++i) f = wedge(f, d_of(monomial(t[i])));
    const int l = static_cast<int>(t.size()) - 1;
    RayForm out;
    Scalar norm = inv_factorial(l);
    for (const auto& [k, c] : f.terms) {
        auto [m, j, part] = k;
        out.add(m, j, part, c * norm);
    }
    return out;
}

RayForm ray_delta(const RayForm& f) {
    RayForm out;
    for (const auto& [k, c] : f.terms) {
        auto [m, j, part] = k;
        switch (part) {
            case 0:
                break;
            case 1: // f dx -> d_xi f
                if (j != 0) out.add(m, j - 1, 0, c * Scalar(j));
                break;
            case 2: // f dxi -> -d_x f
                if (m != 0) out.add(m, j, 0, -(c * Scalar::i() * Scalar(m)));
                break;
            case 3: { // f dx^dxi -> df
                RayForm piece;
                piece.add(m, j, 0, c);
                for (const auto& [kk, cc] : d_of(piece).terms) {
                    auto [mm, jj, pp] = kk;
                    out.add(mm, jj, pp, cc);
                }
                break;
            }
            default:
                throw engine_defect("unknown wedge part");
        }
    }
    return out;
}

std::vector<std::pair<Tuple, Scalar>> antisymmetrize(const Tuple& t) {
    require_input(!t.empty(), "antisymmetrization of an empty chain");
    std::vector<int> idx(t.size() - 1);
    std::iota(idx.begin(), idx.end(), 1);
    std::vector<std::pair<Tuple, Scalar>> out;
    // walk permutations with their signs
    std::vector<int> perm = idx;
    std::sort(perm.begin(), perm.end());
    do {
        int inversions = 0;
        for (std::size_t a = 0; a < perm.size(); ++a)
            for (std::size_t b = a + 1; b < perm.size(); ++b)
                if (perm[a] > perm[b]) ++inversions;
        Tuple u;
        u.push_back(t[0]);
        for (int p : perm) u.push_back(t[p]);
        out.push_back({std::move(u), Scalar(inversions % 2 == 0 ? 1 : -1)});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

D1Sample d1_sample(const Tuple& t) {
    require_input(t.size() >= 2, "the identity needs at least one tensor slot");
    const int T = tuple_order(t);
    const hochschild::SymbolBranchAlgebra alg;
    auto chains = antisymmetrize(t);

    RayForm lhs;
    for (const auto& [u, sign] : chains) {
        const int l = static_cast<int>(u.size()) - 1;
        // each merge keeps the two leading orders of the composition series;
        // anything deeper cannot reach the radial degrees being compared
        for (int i = 0; i < l; ++i) {
            Scalar s = Scalar(i % 2 == 0 ? 1 : -1);
            std::vector<Term> prod = alg.product(u[i], u[i + 1], u[i].o + u[i + 1].o - 2);
            for (const auto& [key, c] : prod) {
                Tuple v;
                for (int p = 0; p < static_cast<int>(u.size()); ++p) {
                    if (p == i + 1) continue;
                    v.push_back(p == i ? key : u[p]);
                }
                RayForm piece = ray_chi(v);
                for (const auto& [kk, cc] : piece.terms) {
                    auto [mm, jj, pp] = kk;
                    lhs.add(mm, jj, pp, cc * c * s * sign);
                }
            }
        }
        {
            Scalar s = Scalar(l % 2 == 0 ? 1 : -1);
            std::vector<Term> prod = alg.product(u[l], u[0], u[l].o + u[0].o - 2);
            for (const auto& [key, c] : prod) {
                Tuple v;
                v.push_back(key);
                for (int p = 1; p < l; ++p) v.push_back(u[p]);
                RayForm piece = ray_chi(v);
                for (const auto& [kk, cc] : piece.terms) {
                    auto [mm, jj, pp] = kk;
                    lhs.add(mm, jj, pp, cc * c * s * sign);
                }
            }
        }
    }

    RayForm chi_eta;
    for (const auto& [u, sign] : chains) {
        RayForm piece = ray_chi(u);
        for (const auto& [kk, cc] : piece.terms) {
            auto [mm, jj, pp] = kk;
            chi_eta.add(mm, jj, pp, cc * sign);
        }
    }
    RayForm rhs;
    for (const auto& [kk, cc] : ray_delta(chi_eta).terms) {
        auto [mm, jj, pp] = kk;
        rhs.add(mm, jj, pp, cc * (-Scalar::i()));
    }

    D1Sample out;
    out.lhs_top = lhs.radial_part(T);
    out.lhs_sub = lhs.radial_part(T - 1);
    out.rhs = rhs;
    out.ok = out.lhs_top.is_zero() && out.lhs_sub == out.rhs;
    return out;
}

D1Report d1_check(const SymbolModel& model, int samples, unsigned seed) {
    (void)model;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> len(1, 3), wdist(-2, 2), odist(-2, 2);
    D1Report rep;
    for (int s = 0; s < samples; ++s) {
        int l = len(rng);
        Tuple t;
        for (int i = 0; i <= l; ++i) t.push_back(BasisKey{wdist(rng), odist(rng), 0});
        D1Sample d = d1_sample(t);
        ++rep.samples;
        if (!d.ok) {
            rep.ok = false;
            std::string desc = "chain";
            for (const BasisKey& k : t)
                desc += " (w=" + std::to_string(k.w) + ",o=" + std::to_string(k.o) + ")";
            rep.failing = desc;
            throw engine_defect("first-page identity failed on " + desc +
                                ": top=" + d.lhs_top.str() +
                                " sub=" + d.lhs_sub.str() + " rhs=" + d.rhs.str());
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// the first page of the order-filtered cyclic total complex

namespace {

spectral::FilteredComplex order_filtered_total(const HochschildComplex& hc,
                                               const complexes::CyclicTotal& ct,
                                               int kmin, int kmax) {
    spectral::FilteredComplex f;
    f.c = ct.total;
    f.kmin = kmin;
    f.kmax = kmax;
    const int top = ct.total.top();
    f.level.assign(kmax - kmin + 1, std::vector<SparseMat>(top + 1));
    for (int k = kmin; k <= kmax; ++k)
        for (int n = 0; n <= top; ++n) {
            std::vector<int> cols;
            for (int col = 0; col < ct.columns(n); ++col) {
                int deg = n - 2 * col;
                for (int i = 0; i < hc.dim(deg); ++i)
                    if (tuple_order(hc.tuples(deg)[i]) <= k)
                        cols.push_back(ct.offsets[n][col] + i);
            }
            SparseMat b(ct.total.dim(n), static_cast<int>(cols.size()));
            for (int j = 0; j < static_cast<int>(cols.size()); ++j)
                b.set(cols[j], j, Scalar(1));
            f.level[k - kmin][n] = std::move(b);
        }
    return f;
}

// widening the width budgets keeps the differential, so the smaller layer
// complex includes into the wider one column by column
ChainMap total_inclusion(const HochschildComplex& small,
                         const complexes::CyclicTotal& ts,
                         const HochschildComplex& big,
                         const complexes::CyclicTotal& tb) {
    ChainMap f;
    const int top = ts.total.top();
    f.f.resize(top + 1);
    for (int n = 0; n <= top; ++n) {
        SparseMat m(tb.total.dim(n), ts.total.dim(n));
        for (int col = 0; col < ts.columns(n); ++col) {
            int deg = n - 2 * col;
            for (int i = 0; i < small.dim(deg); ++i) {
                int j = big.index_of(deg, small.tuples(deg)[i]);
                require_engine(j >= 0, "layer widening misses a chain");
                m.set(tb.offsets[n][col] + j, ts.offsets[n][col] + i, Scalar(1));
            }
        }
        f.f[n] = std::move(m);
    }
    return f;
}

// the periodicity map drops the first column of the total complex
ChainMap column_shift(const complexes::CyclicTotal& ct) {
    ChainMap s;
    const int top = ct.total.top();
    s.f.resize(top + 1);
    for (int n = 0; n <= top; ++n) {
        int tgt = (n >= 2) ? ct.total.dim(n - 2) : 0;
        SparseMat m(tgt, ct.total.dim(n));
        if (n >= 2)
            for (int col = 1; col < ct.columns(n); ++col) {
                int count = (col + 1 < ct.columns(n))
                                ? ct.offsets[n][col + 1] - ct.offsets[n][col]
                                : ct.total.dim(n) - ct.offsets[n][col];
                for (int i = 0; i < count; ++i)
                    m.set(ct.offsets[n - 2][col - 1] + i, ct.offsets[n][col] + i,
                          Scalar(1));
            }
        s.f[n] = std::move(m);
    }
    return s;
}

} // namespace

EC1Report ec1_check(const SymbolModel& model, int hmax) {
    const Budgets& bud = model.budgets;
    EC1Report rep;
    const int nmax = hmax + 1;
    const int wtot = std::max(2, bud.pole_bound);
    const int ctot = std::max(1, bud.order_high);

    hochschild::GrSymbolAlgebra gr;

    // per-layer ladders, shared by both window runs: the oracle dims at the
    // model budgets, the widening ranks, and the periodicity action
    std::map<int, std::vector<int>> layer_dims, layer_stable;
    for (int k = bud.order_low + 1; k <= bud.order_high; ++k) {
        Window small{0, wtot, ctot, k - 1, k};
        Window big{0, wtot + 2, ctot + 1, k - 1, k};
        HochschildComplex ls(gr, small, nmax), lb(gr, big, nmax);
        complexes::MixedComplex ms = ls.mixed(), mb = lb.mixed();
        complexes::CyclicTotal ts = complexes::cyclic_total(ms, nmax);
        complexes::CyclicTotal tb = complexes::cyclic_total(mb, nmax);
        layer_dims[k] = complexes::cyclic_homology_dims(ms, hmax);

        ChainMap widen = total_inclusion(ls, ts, lb, tb);
        require_engine(widen.commutes(ts.total, tb.total),
                       "layer widening is not a chain map");
        for (int n = 0; n <= hmax; ++n) {
            HomologySpace hs(ts.total, n), hb(tb.total, n);
            SparseMat ind = complexes::induced_on_homology(widen, ts.total,
                                                           tb.total, n, hs, hb);
            layer_stable[k].push_back(qlinalg::rank_of(ind));
        }

        // the periodicity action, measured on the widened layer
        ChainMap s = column_shift(tb);
        ChainComplex shifted = complexes::shift_up(tb.total, 2);
        require_engine(s.commutes(tb.total, shifted),
                       "periodicity map is not a chain map");
        for (int m = 2; m <= hmax; ++m) {
            HomologySpace hsrc(tb.total, m), hdst(shifted, m);
            SparseMat ind = complexes::induced_on_homology(s, tb.total, shifted,
                                                           m, hsrc, hdst);
            int r = rank_of(ind) * model.branches;
            rep.s_rank[{k, m}] = r;
            if (k != 0 && r != 0) ++rep.s_rank_nonzero_offdiag;
        }
    }

    // the engine page of a window must reproduce its layers cell by cell
    auto check_window = [&](const Window& win, bool record) {
        HochschildComplex hc(model.branch, win, nmax);
        complexes::MixedComplex mx = hc.mixed();
        complexes::CyclicTotal ct = complexes::cyclic_total(mx, nmax);
        spectral::FilteredComplex f =
            order_filtered_total(hc, ct, win.pbot + 1, win.ptop);
        f.validate();
        spectral::SpectralSequence ss(f);
        require_engine(ss.first_page_matches_graded(),
                       "first page disagrees with the graded pieces");
        for (int k = win.pbot + 1; k <= win.ptop; ++k)
            for (int n = 0; n <= hmax; ++n) {
                int engine = ss.dim(1, k, n - k) * model.branches;
                int oracle = at_or_zero(layer_dims[k], n) * model.branches;
                require_engine(engine == oracle,
                               "page-1 cell (" + std::to_string(k) + "," +
                                   std::to_string(n - k) +
                                   ") disagrees with its layer");
                if (!record) continue;
                EC1Cell cell;
                cell.k = k;
                cell.h = n - k;
                cell.engine_dim = engine;
                cell.layer_dim = oracle;
                cell.stable_dim = layer_stable[k][n] * model.branches;
                rep.cells.push_back(cell);
            }
    };
    check_window(Window{0, wtot, ctot, bud.order_low, bud.order_high}, true);
    if (bud.order_high > 0)
        check_window(Window{0, wtot, ctot, bud.order_low, 0}, false);
    rep.engine_matches_layers = true;

    // below the axis nothing may survive the widening in high total degree
    rep.negative_tail_vanishes = true;
    for (int k = bud.order_low + 1; k < 0; ++k)
        for (int n = 2; n <= hmax; ++n)
            if (layer_stable[k][n] != 0) {
                rep.negative_tail_vanishes = false;
                throw engine_defect("negative layer " + std::to_string(k) +
                                    " keeps a stable class in total degree " +
                                    std::to_string(n));
            }

    require_engine(rep.s_rank_nonzero_offdiag == 0,
                   "periodicity action must vanish off the zero layer");
    return rep;
}

} // namespace cornerhom::evaluator
