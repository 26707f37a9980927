// Batch driver: every computation and verification suite as a subcommand.
// Exit codes: 0 pass, 1 check failure, 2 parse error, 3 semantic error, 4 unknown selector.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "branequant/verify/suites.hpp"

using namespace bq;
using io::json;

namespace {

enum Exit { kPass = 0, kCheckFail = 1, kParse = 2, kSemantic = 3, kUnknown = 4 };

struct Options {
    std::uint64_t seed = 42;
    std::vector<std::string> tol;
    std::optional<int> grid;
    std::optional<int> trunc;
    std::optional<int> trials;
    std::string out;
    std::string input;
};

json read_input(const Options& o) {
    if (o.input.empty()) throw io::ParseError("this command needs an input document (--json FILE, or - for stdin)");
    std::stringstream buf;
    if (o.input == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream f(o.input);
        if (!f) throw io::ParseError("cannot open '" + o.input + "'");
        buf << f.rdbuf();
    }
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw io::ParseError(std::string("malformed JSON: ") + e.what());
    }
}

void emit(const Options& o, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write '" + o.out + "'");
    f << text;
}

verify::RunConfig run_config(const Options& o) {
    verify::RunConfig cfg;
    cfg.seed = o.seed;
    if (o.grid) cfg.grid = *o.grid;
    if (o.trunc) cfg.trunc = *o.trunc;
    cfg.trials = o.trials;
    for (const auto& t : o.tol) {
        auto eq = t.find('=');
        try {
            if (eq == std::string::npos) cfg.tolerance = std::stod(t);
            else cfg.tol[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            throw io::ParseError("bad --tol value '" + t + "' (expected VALUE or TEST=VALUE)");
        }
    }
    cfg.validate();
    return cfg;
}

double single_tolerance(const Options& o, const std::string& name, double dflt) { return run_config(o).tolerance_for(name, dflt); }

std::pair<FourierPolynomial, FourierPolynomial> two_symbols(const json& doc) {
    auto charts = io::charts_from(doc);
    auto f = io::fourier_from(io::detail::field(doc, "f"), charts);
    auto g = io::fourier_from(io::detail::field(doc, "g"), charts);
    return {std::move(f), std::move(g)};
}

double hbar_for(const json& doc, const FourierPolynomial& f) {
    return doc.contains("hbar") ? io::detail::get<double>(doc, "hbar") : 1.0 / f.chart()->k;
}

int cmd_star(const Options& o, bool bracket) {
    json doc = read_input(o);
    auto [f, g] = two_symbols(doc);
    if (bracket) {
        emit(o, io::to_json(poisson_bracket(f, g)));
    } else {
        emit(o, io::to_json(star_product(f, g, hbar_for(doc, f))));
    }
    return kPass;
}

int cmd_dolbeault(const Options& o) {
    json doc = read_input(o);
    auto charts = io::charts_from(doc);
    if (doc.contains("form")) emit(o, io::to_json(dolbeault(io::dolbeault_from(doc.at("form"), charts))));
    else emit(o, io::to_json(dolbeault(DolbeaultForm::function(io::fourier_from(io::detail::field(doc, "f"), charts)))));
    return kPass;
}

int cmd_toeplitz(const Options& o, bool oracle) {
    json doc = read_input(o);
    auto charts = io::charts_from(doc);
    auto f = io::fourier_from(io::detail::field(doc, "f"), charts);
    auto fr = io::frame_from(io::detail::field(doc, "frame"), charts, o.trunc.value_or(10));
    auto cf = twisted_toeplitz_matrix(f, fr);
    json out{{"closed_form", io::to_json(cf)}, {"tail_bound", fr.tail_bound()}};
    if (!oracle) {
        emit(o, out);
        return kPass;
    }
    const int g = o.grid.value_or(256);
    auto qd = toeplitz_quadrature_oracle(f, fr, g);
    const double r = (cf.entries - qd.entries).cwiseAbs().maxCoeff();
    const double tol = single_tolerance(o, "toeplitz", 1e-6);
    out["quadrature"] = io::to_json(qd);
    out["check"] = {{"test", "toeplitz_quadrature"}, {"params", {{"G", g}, {"Q", fr.truncation}}}, {"residual", r}, {"tolerance", tol}, {"pass", r <= tol}};
    emit(o, out);
    return r <= tol ? kPass : kCheckFail;
}

int cmd_mirror_check(const Options& o) {
    json doc = read_input(o);
    auto charts = io::charts_from(doc);
    auto f = io::fourier_from(io::detail::field(doc, "f"), charts);
    auto g = io::fourier_from(io::detail::field(doc, "g"), charts);
    std::vector<ThetaFrame> pts;
    for (const auto& p : io::detail::field(doc, "frames")) pts.push_back(io::frame_from(p, charts, o.trunc.value_or(10)));
    if (pts.empty()) throw io::ParseError("'frames' must list at least one frame");
    for (const auto& fr : pts)
        if (!same_chart(fr.point.chart, f.chart())) throw Error(Errc::ChartMismatch, "frame and symbols live on different charts");
    const double r = mirror_homomorphism_check(f, g, pts);
    const double tol = single_tolerance(o, "mirror.homomorphism", 1e-10);
    emit(o, {{"test", "mirror.homomorphism"}, {"params", {{"points", pts.size()}, {"k", f.chart()->k}}}, {"residual", r}, {"tolerance", tol}, {"pass", r <= tol}});
    return r <= tol ? kPass : kCheckFail;
}

int cmd_reconstruct(const Options& o) {
    json doc = read_input(o);
    auto charts = io::charts_from(doc);
    auto f = io::fourier_from(io::detail::field(doc, "f"), charts);
    std::optional<int> band;
    if (doc.contains("band") && !doc.at("band").is_null()) band = io::detail::get<int>(doc, "band");
    const int samples = doc.contains("base_samples") ? io::detail::get<int>(doc, "base_samples") : 5;
    auto back = reconstruct_symbol(toeplitz_family(f, band, samples));
    const double r = back.max_abs_diff(f);
    const double tol = single_tolerance(o, "mirror.reconstruct_roundtrip", 1e-12);
    emit(o, {{"symbol", io::to_json(back)}, {"check", {{"test", "mirror.reconstruct_roundtrip"}, {"residual", r}, {"tolerance", tol}, {"pass", r <= tol}}}});
    return r <= tol ? kPass : kCheckFail;
}

int cmd_skew_smith(const Options& o) {
    json doc = read_input(o);
    if (doc.contains("matrix")) {
        emit(o, io::to_json(skew_smith_normal_form(io::int_matrix_from(doc.at("matrix")))));
        return kPass;
    }
    auto raw = io::raw_from(io::detail::field(doc, "raw"));
    auto inv = check_raw_invariants(raw);
    const int k = doc.contains("k") ? io::detail::get<int>(doc, "k") : 1;
    const std::string id = doc.contains("id") ? io::detail::get<std::string>(doc, "id") : std::string("reduced");
    auto res = reduce_to_skew_smith(raw, k, id);
    auto back = reassembly_check(raw, res);
    json out = io::to_json(res);
    out["form"] = io::to_json(*raw.form);
    out["raw_invariants"] = {{"g_jacobian_symmetric", inv.g_jacobian_symmetric}, {"inverse_identity", inv.inverse_identity}};
    out["reassembly"] = io::to_json(back);
    out["validate_chart"] = validate_chart(*res.chart).ok();
    emit(o, out);
    return back.ok() ? kPass : kCheckFail;
}

int cmd_siegel_act(const Options& o) {
    json doc = read_input(o);
    FormPtr form;
    if (doc.contains("h")) {
        form = std::make_shared<const IntSkewForm>(standard_skew_form(io::detail::get<std::vector<long>>(doc, "h")));
    } else {
        IntSkewForm f = skew_smith_normal_form(io::int_matrix_from(io::detail::field(doc, "form")));
        if (!f.is_normal()) throw Error(Errc::InvalidArgument, "form must be in normal form; reduce it with skew-smith first");
        form = std::make_shared<const IntSkewForm>(std::move(f));
    }
    auto a = TwistedSymplectic::make(io::int_matrix_from(io::detail::field(doc, "A")), form);
    auto om = io::siegel_from(io::detail::field(doc, "omega"));
    auto res = siegel_action(a, om);
    emit(o, {{"omega", io::to_json(res)}, {"min_imag_eigenvalue", res.min_imag_eigenvalue()}});
    return kPass;
}

int cmd_example(const Options& o, const std::string& name, long a, bool verify_cocycle, bool samples) {
    auto at = builtin_example(name, a);
    json out{{"atlas", io::to_json(at, samples)}};
    if (!verify_cocycle) {
        emit(o, out);
        return kPass;
    }
    const double tol = single_tolerance(o, "atlas.cocycle", 1e-12);
    json charts = json::array();
    bool ok = true;
    for (const auto& c : at.charts) {
        auto r = validate_chart(*c);
        json items = json::array();
        for (const auto& it : r.items) items.push_back({{"name", it.name}, {"pass", it.pass}, {"detail", it.detail}});
        charts.push_back({{"chart", c->id}, {"pass", r.ok()}, {"items", items}});
        ok = ok && r.ok();
    }
    json trans = json::array();
    for (const auto& t : at.transitions) {
        auto r = transition_consistency(at, t);
        trans.push_back({{"label", t.label}, {"target", t.target}, {"source", t.source}, {"pass", r.ok()}, {"detail", r.detail}});
        ok = ok && r.ok();
    }
    json cocycle = nullptr;
    if (!at.triples.empty()) {
        auto rep = cocycle_check(at);
        cocycle = io::to_json(rep);
        ok = ok && rep.max_defect <= tol;
    }
    out["report"] = {{"charts", charts}, {"transitions", trans}, {"cocycle", cocycle}, {"tolerance", tol}, {"pass", ok}};
    emit(o, out);
    return ok ? kPass : kCheckFail;
}

int cmd_verify(const Options& o, const std::string& suite) {
    if (!verify::known_suite(suite)) throw Error(Errc::UnknownExample, "unknown suite '" + suite + "'");
    auto rep = verify::run_suite(suite, run_config(o));
    emit(o, rep.to_json());
    for (const auto& c : rep.checks)
        if (!c.pass) std::cerr << "FAIL " << c.test << " residual=" << c.residual << " tolerance=" << c.tolerance << "\n";
    return rep.pass() ? kPass : kCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantization and mirror checks for semi-affine branes on torus fibrations"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--seed", o.seed, "seed for every random draw")->capture_default_str();
    app.add_option("--tol", o.tol, "tolerance override: VALUE for all checks or TEST=VALUE (repeatable)");
    app.add_option("--grid", o.grid, "quadrature points per fiber direction");
    app.add_option("--trunc", o.trunc, "theta series truncation radius");
    app.add_option("--trials", o.trials, "random sample count for verification suites");
    app.add_option("--out", o.out, "write the JSON result here instead of stdout");
    app.add_option("--json", o.input, "input JSON document (- for stdin)");

    std::function<int()> action;
    app.add_subcommand("star", "star product f ⋆_ħ g (ħ defaults to 1/k)")->callback([&] { action = [&] { return cmd_star(o, false); }; });
    app.add_subcommand("bracket", "Poisson bracket {f, g}")->callback([&] { action = [&] { return cmd_star(o, true); }; });
    app.add_subcommand("dolbeault", "∂̄ of a (0,p)-form or of a function f")->callback([&] { action = [&] { return cmd_dolbeault(o); }; });
    bool oracle = false;
    auto* tp = app.add_subcommand("toeplitz", "twisted Toeplitz matrix of f in a theta frame");
    tp->add_flag("--oracle", oracle, "also compute the quadrature matrix on --grid points and compare");
    tp->callback([&] { action = [&] { return cmd_toeplitz(o, oracle); }; });
    app.add_subcommand("mirror-check", "Φ_{f⋆g} against Φ_f Φ_g at the given frames")->callback([&] { action = [&] { return cmd_mirror_check(o); }; });
    app.add_subcommand("reconstruct", "recover f from its Toeplitz family")->callback([&] { action = [&] { return cmd_reconstruct(o); }; });
    app.add_subcommand("skew-smith", "normal form of an integer skew matrix, or reduction of raw brane data")->callback([&] { action = [&] { return cmd_skew_smith(o); }; });
    app.add_subcommand("siegel-act", "action of A ∈ Sp(ℤ^{2n}, H) on a Siegel point")->callback([&] { action = [&] { return cmd_siegel_act(o); }; });

    std::string example_name;
    long example_a = 0;
    bool verify_cocycle = false, no_samples = false;
    auto* ex = app.add_subcommand("example", "built-in atlas: cylinder2, kodaira-thurston, ooguri-vafa");
    ex->add_option("name", example_name, "example name")->required();
    ex->add_option("--a", example_a, "Kodaira-Thurston parameter (a = 0 gives the flat 4-torus)");
    ex->add_flag("--verify-cocycle", verify_cocycle, "validate charts, transitions and the cocycle condition");
    ex->add_flag("--no-samples", no_samples, "omit overlap sample points from the atlas output");
    ex->callback([&] { action = [&] { return cmd_example(o, example_name, example_a, verify_cocycle, !no_samples); }; });

    std::string suite;
    auto* vf = app.add_subcommand("verify", "run a verification suite: mirror, theta, bks, dga, atlas, siegel, all");
    vf->add_option("suite", suite, "suite name")->required();
    vf->callback([&] { action = [&] { return cmd_verify(o, suite); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kParse;
    }
    try {
        return action();
    } catch (const io::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::UnknownExample ? kUnknown : kSemantic;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSemantic;
    }
}
