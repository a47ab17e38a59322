#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cornerhom/errors.hpp"
#include "cornerhom/evaluator.hpp"

using namespace cornerhom;
using namespace cornerhom::evaluator;
using hochschild::BasisKey;
using hochschild::Term;
using qlinalg::Scalar;

namespace {

const char* kCircle = R"({
  "name": "circle", "dim": 1,
  "faces": [
    {"id": 0, "codim": 0, "orientable": true,
     "cells": {"0": {"dim": 0}, "1": {"dim": 1}}}
  ],
  "covers": [],
  "X": [],
  "assumptions": {"rational_iso": true, "trivial_cosphere": true},
  "budgets": {"order_window": [-2, 1], "pole_bound": 2, "q_max": 2}
})";

std::string interval_json(bool relative) {
    std::string x = relative ? "[1, 2]" : "[]";
    return R"({
  "name": "interval", "dim": 1,
  "faces": [
    {"id": 0, "codim": 0,
     "cells": {"2": {"dim": 1, "boundary": [[0, -1], [1, 1]]}}},
    {"id": 1, "codim": 1, "cells": {"0": {"dim": 0}}},
    {"id": 2, "codim": 1, "cells": {"1": {"dim": 0}}}
  ],
  "covers": [[1, 0], [2, 0]],
  "X": )" + x + R"(,
  "assumptions": {"rational_iso": true, "trivial_cosphere": true}
})";
}

const char* kSquare = R"({
  "name": "square", "dim": 2,
  "faces": [
    {"id": 0, "codim": 0,
     "cells": {"8": {"dim": 2, "boundary": [[4, 1], [5, 1], [6, 1], [7, 1]]}}},
    {"id": 1, "codim": 1, "cells": {"4": {"dim": 1, "boundary": [[0, -1], [1, 1]]}}},
    {"id": 2, "codim": 1, "cells": {"5": {"dim": 1, "boundary": [[1, -1], [2, 1]]}}},
    {"id": 3, "codim": 1, "cells": {"6": {"dim": 1, "boundary": [[2, -1], [3, 1]]}}},
    {"id": 4, "codim": 1, "cells": {"7": {"dim": 1, "boundary": [[3, -1], [0, 1]]}}},
    {"id": 5, "codim": 2, "cells": {"0": {"dim": 0}}},
    {"id": 6, "codim": 2, "cells": {"1": {"dim": 0}}},
    {"id": 7, "codim": 2, "cells": {"2": {"dim": 0}}},
    {"id": 8, "codim": 2, "cells": {"3": {"dim": 0}}}
  ],
  "covers": [[1, 0], [2, 0], [3, 0], [4, 0],
             [5, 1], [5, 4], [6, 1], [6, 2], [7, 2], [7, 3], [8, 3], [8, 4]],
  "X": [],
  "assumptions": {"rational_iso": true, "trivial_cosphere": true}
})";

// the 3-cube by face codes in {*,0,1}^3, betti vectors only (all faces are
// contractible), which forces every downstream number through the formula path
std::string cube_json() {
    using nlohmann::json;
    std::vector<std::string> codes;
    std::map<std::string, int> id;
    for (char a : {'*', '0', '1'})
        for (char b : {'*', '0', '1'})
            for (char c : {'*', '0', '1'}) {
                std::string code{a, b, c};
                id[code] = static_cast<int>(codes.size());
                codes.push_back(code);
            }
    json faces = json::array(), covers = json::array();
    for (const std::string& code : codes) {
        int fixed = 0;
        for (char ch : code)
            if (ch != '*') ++fixed;
        faces.push_back({{"id", id[code]},
                         {"codim", fixed},
                         {"betti", {1}},
                         {"orientable", true}});
        for (int i = 0; i < 3; ++i)
            if (code[i] == '*')
                for (char v : {'0', '1'}) {
                    std::string sub = code;
                    sub[i] = v;
                    covers.push_back({id[sub], id[code]});
                }
    }
    json doc = {{"name", "cube"},
                {"dim", 3},
                {"faces", faces},
                {"covers", covers},
                {"X", json::array()},
                {"assumptions", {{"rational_iso", true}, {"trivial_cosphere", true}}}};
    return doc.dump();
}

RayForm form_of(int m, int j, int part, const Scalar& c) {
    RayForm f;
    f.add(m, j, part, c);
    return f;
}

int cell_stable(const EC1Report& rep, int k, int n) {
    for (const EC1Cell& c : rep.cells)
        if (c.k == k && c.k + c.h == n) return c.stable_dim;
    FAIL("missing page cell");
    return -1;
}

} // namespace

TEST_CASE("manifests parse and validate") {
    Manifest c = parse_manifest(kCircle);
    CHECK(c.name == "circle");
    CHECK(c.m.n == 1);
    CHECK(c.m.cells->dim.size() == 2);
    CHECK(c.budgets.order_low == -2);
    CHECK(c.budgets.order_high == 1);
    CHECK(c.assumptions.rational_iso);

    Manifest i = parse_manifest(interval_json(true));
    CHECK(i.m.faces.size() == 3);
    CHECK(i.x.ids == std::vector<int>{1, 2});

    Manifest s = parse_manifest(kSquare);
    CHECK(s.m.faces.size() == 9);
    CHECK(s.m.cells->dim.size() == 9);
}

TEST_CASE("manifest parsing names what is wrong") {
    CHECK_THROWS_AS(parse_manifest("{"), input_error);
    CHECK_THROWS_AS(parse_manifest("[1, 2]"), input_error);

    // X must be closed: an open edge without its vertices is rejected
    nlohmann::json doc = nlohmann::json::parse(kSquare);
    doc["X"] = {1};
    CHECK_THROWS_AS(parse_manifest(doc.dump()), input_error);
    doc["X"] = {1, 5, 6};
    CHECK_NOTHROW(parse_manifest(doc.dump()));

    // contact exponents live on hyperfaces and start at 1
    doc["X"] = nlohmann::json::array();
    doc["c"] = {{"0", 2}};
    CHECK_THROWS_AS(parse_manifest(doc.dump()), input_error);
    doc["c"] = {{"1", 0}};
    CHECK_THROWS_AS(parse_manifest(doc.dump()), input_error);
    doc["c"] = {{"1", 2}, {"2", 1}};
    Manifest m = parse_manifest(doc.dump());
    CHECK(m.contact.at(1) == 2);

    // cell ids must be contiguous
    nlohmann::json gap = nlohmann::json::parse(kCircle);
    gap["faces"][0]["cells"] = {{"0", {{"dim", 0}}}, {"2", {{"dim", 1}}}};
    CHECK_THROWS_AS(parse_manifest(gap.dump()), input_error);
}

TEST_CASE("cosphere models double the base and verify their own betti") {
    CosphereModel c = build_cosphere(parse_manifest(kCircle));
    CHECK(c.n == 1);
    CHECK(c.cosphere.n == 1);
    CHECK(c.cosphere.face_betti(0) == std::vector<int>{2, 2});
    CHECK(c.cosphere.cells->dim.size() == 4);

    CosphereModel s = build_cosphere(parse_manifest(kSquare));
    CHECK(s.cosphere.n == 3);
    CHECK(s.cosphere.face_betti(0) == std::vector<int>{1, 1, 0, 0});
    CHECK(s.cosphere.face_betti(5) == std::vector<int>{1, 1});

    nlohmann::json doc = nlohmann::json::parse(kCircle);
    doc["assumptions"]["trivial_cosphere"] = false;
    CHECK_THROWS_AS(build_cosphere(parse_manifest(doc.dump())), input_error);

    const char* point = R"({
      "name": "point", "dim": 0,
      "faces": [{"id": 0, "codim": 0, "betti": [1]}],
      "assumptions": {"rational_iso": true, "trivial_cosphere": true}
    })";
    CHECK_THROWS_AS(build_cosphere(parse_manifest(point)), input_error);
}

TEST_CASE("laurent tables match the hand computations") {
    LaurentTable c = eval_hh_laurent(parse_manifest(kCircle));
    CHECK(c.p == std::vector<int>{2, 2});
    CHECK(c.hh == std::vector<int>{2, 4, 2});

    LaurentTable i = eval_hh_laurent(parse_manifest(interval_json(false)));
    CHECK(i.p == std::vector<int>{2, 4});
    CHECK(i.hh == std::vector<int>{4, 6, 2});

    LaurentTable ir = eval_hh_laurent(parse_manifest(interval_json(true)));
    CHECK(ir.p == std::vector<int>{0, 2});
    CHECK(ir.hh == std::vector<int>{2, 2, 0});

    // the square runs the cellular route and the face formula side by side
    LaurentTable s = eval_hh_laurent(parse_manifest(kSquare));
    CHECK(s.p == std::vector<int>{1, 5, 8, 4});
    CHECK(s.hh == std::vector<int>{4, 12, 13, 6, 1});

    nlohmann::json doc = nlohmann::json::parse(kCircle);
    doc["assumptions"]["rational_iso"] = false;
    CHECK_THROWS_AS(eval_hh_laurent(parse_manifest(doc.dump())), input_error);
}

TEST_CASE("periodic dims split by parity") {
    Manifest c = parse_manifest(kCircle);
    HPDims full = eval_hp(c, HPVariant::full);
    CHECK(full.even == 4);
    CHECK(full.odd == 4);
    HPDims zero = eval_hp(c, HPVariant::order_zero);
    CHECK(zero.even == 2);
    CHECK(zero.odd == 2);
    HPDims lau = eval_hp(c, HPVariant::laurent);
    CHECK(lau.even == 4);
    CHECK(lau.odd == 4);

    Manifest i = parse_manifest(interval_json(false));
    HPDims ifull = eval_hp(i, HPVariant::full);
    CHECK(ifull.even == 2);
    CHECK(ifull.odd == 2);
    HPDims izero = eval_hp(i, HPVariant::order_zero);
    CHECK(izero.even == 2);
    CHECK(izero.odd == 0);

    Manifest s = parse_manifest(kSquare);
    HPDims sfull = eval_hp(s, HPVariant::full);
    CHECK(sfull.even == 2);
    CHECK(sfull.odd == 2);
}

TEST_CASE("cyclic dims follow the two-step sums and stabilize") {
    Manifest c = parse_manifest(kCircle);
    CHECK(eval_hc(c, -1) == 0);
    CHECK(eval_hc(c, 0) == 2);
    CHECK(eval_hc(c, 1) == 4);
    CHECK(eval_hc(c, 2) == 4);
    CHECK(eval_hc(c, 3) == 4);
    CHECK(eval_hc(c, 5) == 4);
    CHECK(hc_stable_range_check(c, 2));
    CHECK(hc_stable_range_check(c, 3));
    CHECK_THROWS_AS(hc_stable_range_check(c, 1), input_error);

    Manifest s = parse_manifest(kSquare);
    CHECK(eval_hc(s, 4) == 18);
    CHECK(eval_hc(s, 5) == 18);
    CHECK(hc_stable_range_check(s, 4));
    CHECK(hc_stable_range_check(s, 5));

    // excision: relative interval against its own table
    Manifest ir = parse_manifest(interval_json(true));
    CHECK(eval_hc(ir, 0) == 2);
    CHECK(eval_hc(ir, 1) == 2);
    CHECK(eval_hc(ir, 2) == 2);
    CHECK(hc_stable_range_check(ir, 2));
}

TEST_CASE("quotients, the pair sequence, and the trace census") {
    QuotientTraces i = eval_quotient_and_traces(parse_manifest(interval_json(true)));
    CHECK(i.quotient_hh == std::vector<int>{4, 8, 4});
    CHECK(i.les_fit);
    CHECK(i.trace_count == 2);
    CHECK(i.h_top_dim == 4);

    QuotientTraces c = eval_quotient_and_traces(parse_manifest(kCircle));
    CHECK(c.trace_count == 1);
    CHECK(c.h_top_dim == 2);
    CHECK(c.les_fit);
    CHECK(c.quotient_hh == std::vector<int>{0, 0, 0});

    // n >= 2 runs the census assertion internally
    QuotientTraces s = eval_quotient_and_traces(parse_manifest(kSquare));
    CHECK(s.trace_count == 4);
    CHECK(s.h_top_dim == 4);
    CHECK(s.les_fit);

    QuotientTraces q = eval_quotient_and_traces(parse_manifest(cube_json()));
    CHECK(q.trace_count == 8);
    CHECK(q.h_top_dim == 8);
}

TEST_CASE("the symbol model composes exactly") {
    SymbolModel m = build_symbol_model(Budgets{-2, 2, 2, 2});
    CHECK(model_slot_count(m, 0) == 5);
    CHECK(model_slot_count(m, -3) == 5);

    // [u xi, u^{-1}] = -1, the relation every downstream number leans on
    BasisKey a{1, 1, 0}, b{-1, 0, 0};
    auto ab = m.branch.product(a, b, hochschild::kNoFloor);
    auto ba = m.branch.product(b, a, hochschild::kNoFloor);
    std::map<BasisKey, Scalar> comm;
    for (const Term& t : ab) comm[t.first] += t.second;
    for (const Term& t : ba) comm[t.first] -= t.second;
    std::erase_if(comm, [](const auto& kv) { return kv.second.is_zero(); });
    CHECK(comm.size() == 1);
    CHECK(comm.begin()->first == BasisKey{0, 0, 0});
    CHECK(comm.begin()->second == Scalar(-1));

    CHECK_THROWS_AS(build_symbol_model(Budgets{1, 1, 2, 2}), input_error);
}

TEST_CASE("windowed dims stabilize through the zigzag") {
    SymbolModel m = build_symbol_model(Budgets{-2, 1, 2, 1});
    StabilizedHH st = spectral_hh_stabilized(m, 1, 4);
    CHECK(st.hh == std::vector<int>{2, 4});
    CHECK(st.einf_consistent);
    CHECK(st.steps >= 2);
    CHECK(st.window_used.pbot <= -3);
}

TEST_CASE("branch calculus: chi, delta, antisymmetrize") {
    BasisKey xi{0, 1, 0}, u{1, 0, 0};
    RayForm chi = ray_chi({xi, u});
    CHECK(chi == form_of(1, 1, 1, Scalar::i()));

    RayForm del = ray_delta(chi);
    CHECK(del == form_of(1, 0, 0, Scalar::i()));

    // volume part: delta(f dx^dxi) = df
    RayForm vol = form_of(1, 2, 3, Scalar(1));
    RayForm dv = ray_delta(vol);
    RayForm expect;
    expect.add(1, 2, 1, Scalar::i());
    expect.add(1, 1, 2, Scalar(2));
    CHECK(dv == expect);

    auto anti = antisymmetrize({u, xi, u});
    REQUIRE(anti.size() == 2);
    CHECK(anti[0].second == -anti[1].second);

    // radial slicing
    RayForm mix;
    mix.add(0, 2, 0, Scalar(1)); // radial 2
    mix.add(0, 1, 2, Scalar(1)); // radial 2 via the dxi flag
    mix.add(0, 1, 1, Scalar(1)); // radial 1
    CHECK(mix.radial_part(2).terms.size() == 2);
    CHECK(mix.radial_part(1).terms.size() == 1);
}

TEST_CASE("the first-page identity holds on pinned and random chains") {
    BasisKey xi{0, 1, 0}, u{1, 0, 0};
    D1Sample one = d1_sample({xi, u});
    CHECK(one.ok);
    CHECK(one.lhs_top.is_zero());
    CHECK(one.rhs == form_of(1, 0, 0, Scalar(1)));

    // repeated entries antisymmetrize to zero on both sides
    D1Sample degen = d1_sample({u, xi, xi});
    CHECK(degen.ok);
    CHECK(degen.rhs.is_zero());

    SymbolModel m = build_symbol_model(Budgets{-2, 1, 2, 1});
    D1Report rep = d1_check(m, 40, 7u);
    CHECK(rep.ok);
    CHECK(rep.samples == 40);
}

TEST_CASE("page one of the order filtration matches its layers") {
    SymbolModel m = build_symbol_model(Budgets{-2, 1, 2, 2});
    EC1Report rep = ec1_check(m, 2);
    CHECK(rep.engine_matches_layers);
    CHECK(rep.negative_tail_vanishes);
    CHECK(rep.s_rank_nonzero_offdiag == 0);

    // weight-0 grid over both branches: functions and one-form classes on
    // the nonzero layers, the constant tail on layer zero
    CHECK(cell_stable(rep, 1, 0) == 2);
    CHECK(cell_stable(rep, 1, 1) == 2);
    CHECK(cell_stable(rep, 1, 2) == 0);
    CHECK(cell_stable(rep, -1, 0) == 2);
    CHECK(cell_stable(rep, -1, 1) == 2);
    CHECK(cell_stable(rep, -1, 2) == 0);
    CHECK(cell_stable(rep, 0, 0) == 2);
    CHECK(cell_stable(rep, 0, 1) == 4);
    CHECK(cell_stable(rep, 0, 2) == 4);

    CHECK(rep.s_rank.at({0, 2}) == 2);
    CHECK(rep.s_rank.at({1, 2}) == 0);
    CHECK(rep.s_rank.at({-1, 2}) == 0);
}
