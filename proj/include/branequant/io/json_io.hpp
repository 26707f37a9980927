#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "branequant/atlas/examples.hpp"
#include "branequant/mirror/reconstruct.hpp"
#include "branequant/theta/bks.hpp"

namespace bq::io {

using json = nlohmann::json;

// Malformed or incomplete input documents. Distinct from bq::Error, which signals
// well-formed input that is mathematically inconsistent.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

inline Rational rational_from(const json& j) {
    try {
        if (j.is_number_integer()) return Rational(j.get<long long>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad rational: ") + e.what());
    }
    throw ParseError("rational must be an integer or a \"p/q\" string");
}

inline json rational_to(const Rational& r) { return to_string(r); }

}  // namespace detail

// ---- integer matrices and Siegel points

inline json to_json(const IntMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(static_cast<long long>(m(i, j)));
        rows.push_back(row);
    }
    return {{"n", m.rows()}, {"rows", rows}};
}

inline IntMatrix int_matrix_from(const json& j) {
    const json& rows = detail::field(j, "rows");
    if (!rows.is_array() || rows.empty()) throw ParseError("matrix rows must be a nonempty array");
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows[0].size());
    if (j.contains("n") && detail::get<int>(j, "n") != r) throw ParseError("matrix field 'n' disagrees with the row count");
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (!rows[static_cast<size_t>(i)].is_array() || static_cast<int>(rows[static_cast<size_t>(i)].size()) != c)
            throw ParseError("matrix rows have different lengths");
        for (int k = 0; k < c; ++k) {
            const json& v = rows[static_cast<size_t>(i)][static_cast<size_t>(k)];
            if (v.is_number_integer()) m(i, k) = BigInt(v.get<long long>());
            else if (v.is_string()) {
                try {
                    m(i, k) = BigInt(v.get<std::string>());
                } catch (const std::exception&) {
                    throw ParseError("bad integer entry '" + v.get<std::string>() + "'");
                }
            } else throw ParseError("matrix entries must be integers");
        }
    }
    return m;
}

inline json to_json(const SiegelPoint& p) {
    json re = json::array(), im = json::array();
    for (int i = 0; i < p.n(); ++i) {
        json a = json::array(), b = json::array();
        for (int k = 0; k < p.n(); ++k) {
            a.push_back(p.omega(i, k).real());
            b.push_back(p.omega(i, k).imag());
        }
        re.push_back(a);
        im.push_back(b);
    }
    return {{"re", re}, {"im", im}};
}

inline SiegelPoint siegel_from(const json& j) {
    auto re = detail::get<std::vector<std::vector<double>>>(j, "re");
    auto im = detail::get<std::vector<std::vector<double>>>(j, "im");
    const int n = static_cast<int>(re.size());
    if (n == 0 || static_cast<int>(im.size()) != n) throw ParseError("Siegel point needs square re/im blocks");
    Eigen::MatrixXcd om(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(re[static_cast<size_t>(i)].size()) != n || static_cast<int>(im[static_cast<size_t>(i)].size()) != n)
            throw ParseError("Siegel point needs square re/im blocks");
        for (int k = 0; k < n; ++k) om(i, k) = cplx(re[static_cast<size_t>(i)][static_cast<size_t>(k)], im[static_cast<size_t>(i)][static_cast<size_t>(k)]);
    }
    return SiegelPoint::make(om);
}

// ---- polynomials: term lists sorted by exponent

inline json to_json(const RatPolynomial& p) {
    json out = json::array();
    for (const auto& [e, c] : p.terms()) out.push_back({{"exp", e}, {"c", detail::rational_to(c)}});
    return out;
}

inline RatPolynomial rat_polynomial_from(const json& j, int nvars) {
    if (!j.is_array()) throw ParseError("polynomial must be a term list");
    RatPolynomial p(nvars);
    for (const auto& t : j) {
        auto e = detail::get<std::vector<int>>(t, "exp");
        if (static_cast<int>(e.size()) != nvars) throw ParseError("polynomial exponent has wrong length");
        for (int v : e)
            if (v < 0) throw ParseError("negative exponent");
        p.add_term(e, detail::rational_from(detail::field(t, "c")));
    }
    return p;
}

inline json to_json(const BasePolynomial& p) {
    json out = json::array();
    for (const auto& [e, c] : p.terms()) out.push_back({{"exp", e}, {"re", c.real()}, {"im", c.imag()}});
    return out;
}

inline BasePolynomial base_polynomial_from(const json& j, int nvars) {
    if (!j.is_array()) throw ParseError("coefficient must be a term list");
    BasePolynomial p(nvars);
    for (const auto& t : j) {
        auto e = detail::get<std::vector<int>>(t, "exp");
        if (static_cast<int>(e.size()) != nvars) throw ParseError("coefficient exponent has wrong length");
        for (int v : e)
            if (v < 0) throw ParseError("negative exponent");
        double re = t.contains("re") ? detail::get<double>(t, "re") : 0.0;
        double im = t.contains("im") ? detail::get<double>(t, "im") : 0.0;
        p.add_term(e, cplx(re, im));
    }
    return p;
}

// ---- charts

inline json to_json(const BraneChart& c) {
    json h = json::array();
    for (int i = 0; i < c.n(); ++i) h.push_back(c.form->h_int(i));
    json g = json::array(), gc = json::array();
    for (const auto& p : c.g) g.push_back(to_json(p));
    for (const auto& r : c.gcheck) gc.push_back(detail::rational_to(r));
    json out{{"id", c.id}, {"h", h}, {"k", c.k}, {"g", g}, {"gcheck", gc}};
    if (!c.domain.empty()) {
        json dom = json::array();
        for (const auto& [lo, hi] : c.domain) dom.push_back({lo, hi});
        out["domain"] = dom;
    }
    return out;
}

// Either "h": invariant factors (standard form) or "form": a matrix already in
// normal form.
inline ChartPtr chart_from(const json& j) {
    std::string id = detail::get<std::string>(j, "id");
    FormPtr form;
    if (j.contains("h")) {
        auto h = detail::get<std::vector<long>>(j, "h");
        if (h.empty()) throw ParseError("chart 'h' must be nonempty");
        form = std::make_shared<const IntSkewForm>(standard_skew_form(h));
    } else {
        IntSkewForm f = skew_smith_normal_form(int_matrix_from(detail::field(j, "form")));
        if (!f.is_normal()) throw Error(Errc::InvalidArgument, "chart form must already be in skew-Smith normal form");
        form = std::make_shared<const IntSkewForm>(std::move(f));
    }
    const int d = 2 * form->n;
    std::vector<RatPolynomial> g;
    if (j.contains("g"))
        for (const auto& p : detail::field(j, "g")) g.push_back(rat_polynomial_from(p, d));
    std::vector<Rational> gc;
    if (j.contains("gcheck"))
        for (const auto& r : detail::field(j, "gcheck")) gc.push_back(detail::rational_from(r));
    int k = j.contains("k") ? detail::get<int>(j, "k") : 1;
    auto chart = BraneChart::make(id, form, std::move(g), std::move(gc), k);
    if (j.contains("domain")) {
        auto dom = detail::get<std::vector<std::pair<double, double>>>(j, "domain");
        if (static_cast<int>(dom.size()) != d) throw ParseError("chart domain needs one interval per base coordinate");
        auto copy = std::make_shared<BraneChart>(*chart);
        copy->domain = std::move(dom);
        return copy;
    }
    return chart;
}

using ChartTable = std::map<std::string, ChartPtr>;

inline ChartTable charts_from(const json& doc) {
    ChartTable t;
    for (const auto& c : detail::field(doc, "charts")) {
        auto ch = chart_from(c);
        if (!t.emplace(ch->id, ch).second) throw ParseError("duplicate chart id '" + ch->id + "'");
    }
    return t;
}

inline ChartPtr lookup(const ChartTable& t, const std::string& id) {
    auto it = t.find(id);
    if (it == t.end()) throw ParseError("unknown chart id '" + id + "'");
    return it->second;
}

// ---- Fourier polynomials and forms

inline json modes_to_json(const FourierPolynomial& f) {
    json modes = json::array();
    for (const auto& [m, p] : f.modes()) modes.push_back({{"m", m}, {"coeff", to_json(p)}});
    return modes;
}

inline json to_json(const FourierPolynomial& f) { return {{"chart", f.chart()->id}, {"modes", modes_to_json(f)}}; }

inline FourierPolynomial modes_from(const json& modes, const ChartPtr& c) {
    if (!modes.is_array()) throw ParseError("'modes' must be an array");
    FourierPolynomial f(c);
    for (const auto& t : modes) {
        auto m = detail::get<std::vector<int>>(t, "m");
        if (static_cast<int>(m.size()) != c->dim()) throw ParseError("mode has wrong length");
        f.add(m, base_polynomial_from(detail::field(t, "coeff"), c->dim()));
    }
    return f;
}

inline FourierPolynomial fourier_from(const json& j, const ChartTable& charts) {
    return modes_from(detail::field(j, "modes"), lookup(charts, detail::get<std::string>(j, "chart")));
}

inline json to_json(const DolbeaultForm& a) {
    json comps = json::array();
    for (const auto& [idx, f] : a.components()) comps.push_back({{"index", idx}, {"modes", modes_to_json(f)}});
    return {{"chart", a.chart()->id}, {"components", comps}};
}

inline DolbeaultForm dolbeault_from(const json& j, const ChartTable& charts) {
    auto c = lookup(charts, detail::get<std::string>(j, "chart"));
    DolbeaultForm a(c);
    for (const auto& t : detail::field(j, "components")) a.add(detail::get<std::vector<int>>(t, "index"), modes_from(detail::field(t, "modes"), c));
    return a;
}

// ---- frames, states, matrices

inline json to_json(const ThetaFrame& fr) {
    return {{"chart", fr.chart().id}, {"x", fr.point.x}, {"ycheck", fr.point.ycheck}, {"omega", to_json(fr.omega)}, {"truncation", fr.truncation}};
}

inline ThetaFrame frame_from(const json& j, const ChartTable& charts, int default_q = 10) {
    auto c = lookup(charts, detail::get<std::string>(j, "chart"));
    auto p = FiberPoint::make(c, detail::get<std::vector<double>>(j, "x"), detail::get<std::vector<double>>(j, "ycheck"));
    int q = j.contains("truncation") ? detail::get<int>(j, "truncation") : default_q;
    return ThetaFrame::make(std::move(p), siegel_from(detail::field(j, "omega")), q);
}

inline json to_json(const QuantumState& s) {
    json cs = json::array();
    for (Eigen::Index i = 0; i < s.coeffs.size(); ++i) cs.push_back({s.coeffs(i).real(), s.coeffs(i).imag()});
    return {{"frame", to_json(s.frame)}, {"coeffs", cs}};
}

inline QuantumState state_from(const json& j, const ChartTable& charts) {
    auto fr = frame_from(detail::field(j, "frame"), charts);
    auto cs = detail::get<std::vector<std::vector<double>>>(j, "coeffs");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(cs.size()));
    for (size_t i = 0; i < cs.size(); ++i) {
        if (cs[i].size() != 2) throw ParseError("state coefficient must be [re, im]");
        v(static_cast<Eigen::Index>(i)) = cplx(cs[i][0], cs[i][1]);
    }
    return QuantumState::make(std::move(fr), std::move(v));
}

inline json to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const EndoMatrix& m) {
    return {{"frame", to_json(m.frame)}, {"provenance", provenance_name(m.provenance)}, {"indices", m.frame.indices()}, {"entries", to_json(m.entries)}};
}

// ---- atlas

inline json to_json(const Transition& t) {
    json b = json::array(), c = json::array();
    for (const auto& r : t.b) b.push_back(detail::rational_to(r));
    for (const auto& r : t.c) c.push_back(detail::rational_to(r));
    return {{"target", t.target}, {"source", t.source}, {"label", t.label}, {"A", to_json(t.a.a)}, {"b", b}, {"c", c}, {"gauge", to_json(t.gauge_exponent)}};
}

inline json to_json(const TransitionKey& k) { return {{"target", k.target}, {"source", k.source}, {"label", k.label}}; }

inline TransitionKey key_from(const json& j) {
    return {detail::get<std::string>(j, "target"), detail::get<std::string>(j, "source"), detail::get<std::string>(j, "label")};
}

inline json to_json(const BraneAtlas& a, bool with_samples = true) {
    json charts = json::array(), regions = json::array(), trans = json::array(), triples = json::array();
    for (const auto& c : a.charts) charts.push_back(to_json(*c));
    for (const auto& r : a.regions) regions.push_back({{"polar", r.polar}, {"lo0", r.lo0}, {"hi0", r.hi0}, {"lo1", r.lo1}, {"hi1", r.hi1}});
    for (const auto& t : a.transitions) trans.push_back(to_json(t));
    for (const auto& t : a.triples) {
        json e{{"ab", to_json(t.ab)}, {"bc", to_json(t.bc)}, {"ac", t.ac ? to_json(*t.ac) : json(nullptr)}, {"sample_count", t.samples.size()}};
        if (with_samples) e["samples"] = t.samples;
        triples.push_back(e);
    }
    return {{"name", a.name}, {"charts", charts}, {"regions", regions}, {"transitions", trans}, {"triples", triples}, {"notes", a.notes}};
}

inline BraneAtlas atlas_from(const json& j) {
    BraneAtlas a;
    a.name = j.contains("name") ? detail::get<std::string>(j, "name") : std::string("atlas");
    ChartTable table = charts_from(j);
    for (const auto& c : detail::field(j, "charts")) a.charts.push_back(lookup(table, detail::get<std::string>(c, "id")));
    if (j.contains("regions"))
        for (const auto& r : j.at("regions"))
            a.regions.push_back({detail::get<bool>(r, "polar"), detail::get<double>(r, "lo0"), detail::get<double>(r, "hi0"), detail::get<double>(r, "lo1"),
                                 detail::get<double>(r, "hi1")});
    if (j.contains("transitions"))
        for (const auto& t : j.at("transitions")) {
            auto src = lookup(table, detail::get<std::string>(t, "source"));
            auto tgt = lookup(table, detail::get<std::string>(t, "target"));
            std::vector<Rational> b;
            for (const auto& r : detail::field(t, "b")) b.push_back(detail::rational_from(r));
            auto tr = Transition::make(*tgt, *src, detail::get<std::string>(t, "label"), int_matrix_from(detail::field(t, "A")), b,
                                       rat_polynomial_from(detail::field(t, "gauge"), xy_vars(src->n())));
            if (t.contains("c")) {
                std::vector<Rational> c;
                for (const auto& r : t.at("c")) c.push_back(detail::rational_from(r));
                if (c != tr.c) throw Error(Errc::InvalidArgument, "transition '" + tr.label + "': stated c disagrees with H(Aᵀg_t − g_s)");
            }
            a.transitions.push_back(std::move(tr));
        }
    if (j.contains("triples"))
        for (const auto& t : j.at("triples")) {
            CocycleTriple tr{key_from(detail::field(t, "ab")), key_from(detail::field(t, "bc")), std::nullopt, {}};
            if (t.contains("ac") && !t.at("ac").is_null()) tr.ac = key_from(t.at("ac"));
            if (t.contains("samples")) tr.samples = detail::get<std::vector<std::vector<double>>>(t, "samples");
            a.triples.push_back(std::move(tr));
        }
    if (j.contains("notes")) a.notes = detail::get<std::vector<std::string>>(j, "notes");
    return a;
}

inline json to_json(const CocycleReport& r) {
    json es = json::array();
    for (const auto& e : r.entries)
        es.push_back({{"overlap", e.description}, {"affine_defect", e.affine_defect}, {"gauge_defect", e.gauge_defect}, {"samples", e.samples}});
    return {{"max_defect", r.max_defect}, {"entries", es}};
}

// ---- raw brane data and reduction

inline RawBraneData raw_from(const json& j) {
    IntMatrix h = int_matrix_from(detail::field(j, "form"));
    const int d = h.rows();
    std::vector<RatPolynomial> f, gt;
    for (const auto& p : detail::field(j, "f")) f.push_back(rat_polynomial_from(p, d));
    if (j.contains("gtilde"))
        for (const auto& p : j.at("gtilde")) gt.push_back(rat_polynomial_from(p, d));
    std::vector<Rational> chi;
    if (j.contains("chi"))
        for (const auto& r : j.at("chi")) chi.push_back(detail::rational_from(r));
    return RawBraneData::make(std::move(f), std::move(gt), std::move(h), std::move(chi));
}

inline json to_json(const ModelComparison& m) {
    return {{"connection_equal", m.connection_equal}, {"phase_equal_mod_integers", m.phase_equal_mod_integers}, {"detail", m.detail}};
}

inline json to_json(const SkewSmithResult& r) {
    json steps = json::array();
    for (const auto& s : r.log.steps) steps.push_back({{"label", s.label}, {"exponent", to_json(s.exponent)}});
    json shift = r.log.parity_shift;
    return {{"chart", to_json(*r.chart)}, {"coordinate_change", to_json(r.log.coordinate_change)}, {"parity_shift", shift}, {"gauge_steps", steps}};
}

inline json to_json(const IntSkewForm& f) {
    json h = json::array();
    for (const auto& v : f.invariant_factors) h.push_back(static_cast<long long>(v));
    return {{"input", to_json(f.entries)}, {"invariant_factors", h}, {"normal_form", to_json(f.normal_form())}, {"reducer", to_json(f.reducer)}};
}

}  // namespace bq::io
