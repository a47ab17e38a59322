// cornerhom: command-line front end over the engine library.
//
// Every subcommand prints one TSV table on stdout (stable column layout,
// no trailing whitespace) so outputs can be diffed byte-for-byte against
// golden fixtures.  Diagnostics go to stderr.  Exit codes follow the
// library's error contract: 0 ok, 2 bad input, 3 budget exhausted,
// 4 engine defect.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <cornerhom/algebra.hpp>
#include <cornerhom/chain.hpp>
#include <cornerhom/corners.hpp>
#include <cornerhom/errors.hpp>
#include <cornerhom/evaluator.hpp>
#include <cornerhom/hochschild.hpp>
#include <cornerhom/poisson.hpp>
#include <cornerhom/spectral.hpp>

using nlohmann::json;
using namespace cornerhom;
using evaluator::Manifest;

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out.empty() ? "-" : out;
}

void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) std::fputc('\t', stdout);
        std::fputs(c.c_str(), stdout);
        first = false;
    }
    std::fputc('\n', stdout);
}

std::string num(long v) { return std::to_string(v); }

// The toy circle model all builtin subcommands share: symbol orders in
// (-2, 1], Fourier spread 2.  Small enough that every command answers in
// well under a second, wide enough that the homology is the honest one.
evaluator::Budgets builtin_budgets() {
    evaluator::Budgets b;
    b.order_low = -2;
    b.order_high = 1;
    b.pole_bound = 2;
    b.q_max = 1;
    return b;
}

hochschild::Window builtin_window(int weight, const evaluator::Budgets& b) {
    hochschild::Window w;
    w.mu = weight;
    w.wtot = std::max(2, b.pole_bound);
    w.pbot = b.order_low - 1;
    w.ptop = b.order_high;
    w.ctot = std::max(1, w.ptop + 1);
    return w;
}

// --- validate ---------------------------------------------------------

void cmd_validate(const std::string& path) {
    Manifest man = evaluator::load_manifest_file(path);
    const corners::CornerManifold& m = man.m;
    row({"manifest", man.name});
    row({"dim", num(m.n)});
    row({"faces", num((long)m.faces.size())});
    row({"cells", num(m.cells ? (long)m.cells->dim.size() : 0)});
    std::vector<int> mins = corners::minimal_faces(m);
    std::sort(mins.begin(), mins.end());
    row({"minimal", join_ints(mins)});
    row({"relative_faces", join_ints(man.x.ids)});
    for (const auto& f : m.faces)
        row({"face", num(f.id), num(f.codim), f.orientable ? "1" : "0",
             join_ints(m.face_betti(f.id))});
    row({"status", "ok"});
}

// --- cohomology -------------------------------------------------------

void cmd_cohomology(const std::string& path, bool relative, const std::string& route) {
    Manifest man = evaluator::load_manifest_file(path);
    const corners::CornerManifold& m = man.m;
    bool want_formula = route != "cellular";
    bool want_cellular = route != "formula";
    require_input(!relative || !want_formula,
                  "relative cohomology has no per-face formula route; "
                  "use --route cellular");
    require_input(!want_cellular || m.cells.has_value(),
                  "route " + route + " needs cell data in the manifest");
    require_input(!relative || !man.x.ids.empty(),
                  "--relative needs a nonempty X in the manifest");

    std::vector<int> formula, cellular;
    if (want_formula) formula = corners::laurent_cohomology_formula(m);
    if (want_cellular) {
        corners::GluedSpace g = corners::build_L(m);
        cellular = corners::cellular_cohomology(m, g, relative ? &man.x : nullptr);
    }
    size_t top = std::max(formula.size(), cellular.size());
    if (top == 0) top = (size_t)m.n + 1;
    formula.resize(top, 0);
    cellular.resize(top, 0);

    row({"space", "L(" + man.name + ")"});
    row({"relative", relative ? "yes" : "no"});
    row({"route", route});
    for (size_t p = 0; p < top; ++p)
        row({"H", num((long)p), want_formula ? num(formula[p]) : "-",
             want_cellular ? num(cellular[p]) : "-"});
    if (want_formula && want_cellular) {
        require_engine(formula == cellular,
                       "face-decomposition and cellular routes disagree");
        row({"agree", "yes"});
    }
}

// --- evaluate ---------------------------------------------------------

void cmd_evaluate(const std::string& path, const std::string& theorem,
                  const std::string& variant) {
    Manifest man = evaluator::load_manifest_file(path);
    const int n = man.m.n;
    row({"manifest", man.name});
    row({"theorem", theorem});
    if (theorem == "hh") {
        evaluator::LaurentTable t = evaluator::eval_hh_laurent(man);
        for (size_t j = 0; j < t.p.size(); ++j) row({"p", num((long)j), num(t.p[j])});
        for (size_t q = 0; q < t.hh.size(); ++q) row({"HH", num((long)q), num(t.hh[q])});
    } else if (theorem == "hp") {
        evaluator::HPVariant v = evaluator::HPVariant::full;
        if (variant == "order0") v = evaluator::HPVariant::order_zero;
        else if (variant == "laurent") v = evaluator::HPVariant::laurent;
        else require_input(variant == "full", "unknown variant " + variant);
        evaluator::HPDims d = evaluator::eval_hp(man, v);
        row({"variant", variant});
        row({"HP", "even", num(d.even)});
        row({"HP", "odd", num(d.odd)});
    } else if (theorem == "hc") {
        for (int m = 0; m <= 2 * n + 2; ++m)
            row({"HC", num(m), num(evaluator::eval_hc(man, m))});
        require_engine(evaluator::hc_stable_range_check(man, 2 * n),
                       "cyclic dims keep moving in the stable range");
        row({"stable_from", num(2 * n)});
    } else if (theorem == "quotient") {
        evaluator::QuotientTraces qt = evaluator::eval_quotient_and_traces(man);
        for (size_t q = 0; q < qt.quotient_hh.size(); ++q)
            row({"HHrel", num((long)q), num(qt.quotient_hh[q])});
        row({"les_fit", qt.les_fit ? "yes" : "no"});
        if (!qt.note.empty()) row({"note", qt.note});
    } else if (theorem == "traces") {
        evaluator::QuotientTraces qt = evaluator::eval_quotient_and_traces(man);
        std::vector<int> mins = corners::minimal_faces(man.m);
        std::sort(mins.begin(), mins.end());
        row({"minimal", join_ints(mins)});
        row({"trace_count", num(qt.trace_count)});
        row({"h_top", num(qt.h_top_dim)});
    } else {
        throw input_error("unknown theorem " + theorem);
    }
}

// --- hochschild -------------------------------------------------------

hochschild::FiniteAlgebra load_algebra(const std::string& path, std::string& name) {
    std::ifstream in(path);
    require_input(in.good(), "cannot open algebra file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw input_error(std::string("algebra file: ") + e.what());
    }
    require_input(j.is_object() && j.contains("dim") && j["dim"].is_number_integer(),
                  "algebra: need an object with an integer dim");
    int dim = j["dim"].get<int>();
    require_input(dim > 0, "algebra: dim must be positive");
    name = j.value("name", std::string("algebra"));

    auto terms_of = [&](const json& arr, const std::string& where) {
        require_input(arr.is_array(), where + ": expected an array of [index, coeff]");
        std::vector<hochschild::Term> out;
        for (const auto& t : arr) {
            require_input(t.is_array() && t.size() == 2 && t[0].is_number_integer(),
                          where + ": entries are [index, coeff]");
            int e = t[0].get<int>();
            require_input(0 <= e && e < dim, where + ": index out of range");
            qlinalg::Scalar c = t[1].is_string()
                                    ? qlinalg::parse_scalar(t[1].get<std::string>())
                                    : qlinalg::Scalar(t[1].get<long>());
            out.push_back({hochschild::BasisKey{0, 0, e}, c});
        }
        return out;
    };

    require_input(j.contains("table") && j["table"].is_array() &&
                      (int)j["table"].size() == dim,
                  "algebra: table must list dim rows");
    std::vector<std::vector<std::vector<hochschild::Term>>> table(dim);
    for (int i = 0; i < dim; ++i) {
        const json& rowj = j["table"][i];
        require_input(rowj.is_array() && (int)rowj.size() == dim,
                      "algebra: table row " + std::to_string(i) + " must have dim entries");
        table[i].resize(dim);
        for (int k = 0; k < dim; ++k)
            table[i][k] = terms_of(rowj[k], "table[" + std::to_string(i) + "][" +
                                                std::to_string(k) + "]");
    }
    std::vector<hochschild::Term> unit;
    if (j.contains("unit")) unit = terms_of(j["unit"], "unit");

    hochschild::FiniteAlgebra alg(dim, std::move(table), std::move(unit));
    require_input(alg.check_associative(), "algebra: product is not associative");
    require_input(unit.empty() || alg.check_unit(), "algebra: declared unit is not a unit");
    return alg;
}

void print_windowed_table(const hochschild::GradedAlgebra& alg,
                          const hochschild::Window& win, int qmax, int copies) {
    hochschild::HochschildComplex hc(alg, win, qmax + 1);
    row({"window", num(win.pbot), num(win.ptop), num(win.wtot), num(win.ctot)});
    for (int d = 0; d <= qmax + 1; ++d) row({"C", num(d), num(hc.dim(d))});
    complexes::ChainComplex bc = hc.b_complex();
    for (int q = 0; q <= qmax; ++q) {
        complexes::HomologySpace h(bc, q);
        row({"HH", num(q), num(h.dim() * copies)});
    }
}

void cmd_hochschild(const std::string& algebra_path, const std::string& builtin,
                    int weight, int qmax) {
    require_input(algebra_path.empty() != builtin.empty(),
                  "pass exactly one of --algebra and --builtin");
    if (!builtin.empty()) {
        require_input(builtin == "s1-symbols", "unknown builtin " + builtin);
        evaluator::SymbolModel model = evaluator::build_symbol_model(builtin_budgets());
        row({"algebra", builtin});
        row({"weight", num(weight)});
        row({"branches", num(model.branches)});
        print_windowed_table(model.branch, builtin_window(weight, model.budgets),
                             qmax, model.branches);
    } else {
        std::string name;
        hochschild::FiniteAlgebra alg = load_algebra(algebra_path, name);
        require_input(weight == 0, "finite algebras are concentrated in weight 0");
        row({"algebra", name});
        row({"weight", "0"});
        row({"branches", "1"});
        print_windowed_table(alg, hochschild::Window{0, 0, 0, -1, 0}, qmax, 1);
    }
}

// --- spectral ---------------------------------------------------------

void cmd_spectral(const std::string& builtin, int page, bool page_given) {
    require_input(builtin == "s1-symbols", "unknown builtin " + builtin);
    evaluator::SymbolModel model = evaluator::build_symbol_model(builtin_budgets());
    const int qmax = model.budgets.q_max;
    hochschild::Window win = builtin_window(0, model.budgets);
    hochschild::HochschildComplex hc(model.branch, win, qmax + 1);
    spectral::FilteredComplex filt = hc.filtered_by_order();
    spectral::SpectralSequence ss(filt);
    row({"model", builtin});
    row({"window", num(win.pbot), num(win.ptop)});
    if (page_given) {
        require_input(page >= 0, "--page wants a non-negative page");
        for (int k = filt.kmin; k <= filt.kmax; ++k)
            for (int t = 0; t <= qmax; ++t)
                row({"E", num(page), num(k), num(t - k),
                     num(ss.dim(page, k, t - k) * model.branches)});
    }
    auto cert = ss.converge();
    require_engine(cert.converged, "order filtration failed to converge");
    row({"stable_page", num(cert.stable_page)});
    row({"converged", "yes"});
    for (int q = 0; q <= qmax && q < (int)cert.betti.size(); ++q)
        row({"HH", num(q), num(cert.betti[q] * model.branches)});
}

// --- poisson-check ----------------------------------------------------

void cmd_poisson_check(int n, int k, std::vector<int> c, int samples, unsigned seed) {
    poisson::Patch p;
    p.n = n;
    p.k = k;
    p.c = std::move(c);
    p.validate();
    std::mt19937 rng(seed);
    std::vector<poisson::LaurentForm> forms;
    forms.reserve(samples);
    for (int i = 0; i < samples; ++i) forms.push_back(poisson::random_monomial(p, rng));
    poisson::IdentityReport rep = poisson::verify_identities(p, forms);
    row({"patch", "n=" + num(n), "k=" + num(k), "c=" + join_ints(p.c)});
    row({"samples", num(samples)});
    row({"nonzero_forms", num(rep.forms)});
    row({"top_form_degree", num(rep.top_form_degree)});
    row({"status", "ok"});
}

// --- d1-check ---------------------------------------------------------

void cmd_d1_check(int samples, unsigned seed) {
    evaluator::SymbolModel model = evaluator::build_symbol_model(builtin_budgets());
    evaluator::D1Report rep = evaluator::d1_check(model, samples, seed);
    row({"samples", num(rep.samples)});
    row({"status", rep.ok ? "ok" : "fail"});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact homology engine for symbol algebras on manifolds with corners"};
    app.require_subcommand(1);

    std::string manifest_path, route = "both", theorem, variant = "full";
    std::string algebra_path, builtin;
    bool relative = false;
    int weight = 0, qmax = 1, page = 0;
    int pn = 2, pk = 1, samples = 100;
    unsigned seed = 1;
    std::vector<int> pc;

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a manifest");
    validate->add_option("--manifest", manifest_path, "manifest JSON path")->required();

    CLI::App* coh = app.add_subcommand("cohomology", "cohomology of the glued space");
    coh->add_option("--manifest", manifest_path)->required();
    coh->add_flag("--relative", relative, "quotient by the preimage of X");
    coh->add_option("--route", route, "formula, cellular or both (default both)")
        ->check(CLI::IsMember({"formula", "cellular", "both"}));

    CLI::App* ev = app.add_subcommand("evaluate", "right-hand sides of the main theorems");
    ev->add_option("--manifest", manifest_path)->required();
    ev->add_option("--theorem", theorem, "hp, hh, hc, quotient or traces")
        ->required()
        ->check(CLI::IsMember({"hp", "hh", "hc", "quotient", "traces"}));
    ev->add_option("--variant", variant, "full, order0 or laurent (hp only)")
        ->check(CLI::IsMember({"full", "order0", "laurent"}));

    CLI::App* hoch = app.add_subcommand("hochschild", "windowed Hochschild table");
    hoch->add_option("--algebra", algebra_path, "finite algebra JSON path");
    hoch->add_option("--builtin", builtin, "builtin model name (s1-symbols)");
    hoch->add_option("--weight", weight, "weight slot (default 0)");
    hoch->add_option("--qmax", qmax, "top homology degree (default 1)");

    CLI::App* spec = app.add_subcommand("spectral", "order-filtration spectral sequence");
    spec->add_option("--builtin", builtin, "builtin model name (s1-symbols)")->required();
    CLI::Option* page_opt = spec->add_option("--page", page, "print this page's cells");

    CLI::App* pois = app.add_subcommand("poisson-check", "verify the form-calculus identities");
    pois->add_option("--n", pn, "patch dimension (default 2)");
    pois->add_option("--k", pk, "boundary coordinates (default 1)");
    pois->add_option("--c", pc, "contact exponents, comma separated")->delimiter(',');
    pois->add_option("--samples", samples, "random forms (default 100)");
    pois->add_option("--seed", seed, "RNG seed (default 1)");

    CLI::App* d1 = app.add_subcommand("d1-check", "verify the first-page differential identity");
    d1->add_option("--samples", samples, "random chains (default 100)");
    d1->add_option("--seed", seed, "RNG seed (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) cmd_validate(manifest_path);
        else if (coh->parsed()) cmd_cohomology(manifest_path, relative, route);
        else if (ev->parsed()) cmd_evaluate(manifest_path, theorem, variant);
        else if (hoch->parsed()) cmd_hochschild(algebra_path, builtin, weight, qmax);
        else if (spec->parsed()) cmd_spectral(builtin, page, page_opt->count() > 0);
        else if (pois->parsed()) {
            if (pc.empty()) pc.assign(pk, 1);
            cmd_poisson_check(pn, pk, pc, samples, seed);
        } else if (d1->parsed()) cmd_d1_check(samples, seed);
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const engine_defect& e) {
        std::cerr << "engine defect: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "engine defect: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
