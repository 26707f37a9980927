#pragma once

#include "branequant/atlas/atlas.hpp"
#include "branequant/atlas/skew_smith.hpp"

namespace bq {

inline constexpr int kOverlapSamples = 50;

namespace detail {

inline RatPolynomial monomial(int nv, std::vector<std::pair<int, int>> powers, Rational c) {
    std::vector<int> e(static_cast<size_t>(nv), 0);
    for (auto [v, p] : powers) e[static_cast<size_t>(v)] += p;
    RatPolynomial out(nv);
    out.add_term(e, c);
    return out;
}

inline ChartPtr example_chart(std::string id, long h, std::vector<std::pair<double, double>> domain = {}) {
    auto form = std::make_shared<const IntSkewForm>(standard_skew_form({h}));
    auto c = BraneChart::make(std::move(id), form, {}, {}, 1);
    if (domain.empty()) return c;
    auto copy = std::make_shared<BraneChart>(*c);
    copy->domain = std::move(domain);
    return copy;
}

}  // namespace detail

// ℝ² × 𝕋² with connection x₁dx₂ + y²dy¹: a single chart with 𝑯 = (1).
inline BraneAtlas cylinder_atlas() {
    BraneAtlas a;
    a.name = "cylinder2";
    a.charts.push_back(detail::example_chart("cylinder", 1));
    a.regions.push_back({false, -2.0, 2.0, -2.0, 2.0});
    a.notes.push_back("single chart; no overlaps");
    return a;
}

// The same brane as raw data: f = (−x₂, x₁), g̃ = 0, H standard, χ canonical.
inline RawBraneData cylinder_raw_data() {
    RatPolynomial f0 = RatPolynomial::variable(2, 1, Rational(-1));
    RatPolynomial f1 = RatPolynomial::variable(2, 0);
    return RawBraneData::make({f0, f1}, {}, standard_skew_form({1}).entries, {});
}

// Deck transformation of the Kodaira–Thurston affine structure for m ∈ ℤ²:
// x' = [[1,0],[2am₁,1]] x + (m₁, m₂ + a m₁²), with gauge
// a m₁ x₁² + 2a m₁² x₁ + m₁ x₂ − a m₁ (y²)².
inline Transition kodaira_thurston_deck(const BraneChart& ch, long a, long m1, long m2) {
    IntMatrix am(2, 2);
    am(0, 0) = 1;
    am(1, 1) = 1;
    am(1, 0) = 2 * a * m1;
    // b = A⁻¹ t = (m₁, m₂ − a m₁²)
    std::vector<Rational> b{Rational(m1), Rational(m2 - a * m1 * m1)};
    const int nv = 4;
    RatPolynomial g(nv);
    g += detail::monomial(nv, {{0, 2}}, Rational(a * m1));
    g += detail::monomial(nv, {{0, 1}}, Rational(2 * a * m1 * m1));
    g += detail::monomial(nv, {{1, 1}}, Rational(m1));
    g += detail::monomial(nv, {{y_slot(1, 1), 2}}, Rational(-a * m1));
    return Transition::make(ch, ch, "m=(" + std::to_string(m1) + "," + std::to_string(m2) + ")", am, b, g);
}

// Kodaira–Thurston (a > 0) or 𝕋⁴ (a = 0): one chart on the universal cover of the
// base, deck transitions for m ∈ {−2..2}², and triples ψ_m ∘ ψ_m' = ψ_{m+m'} for
// m, m' ∈ {−1, 0, 1}².
inline BraneAtlas kodaira_thurston_atlas(long a) {
    if (a < 0) throw Error(Errc::InvalidArgument, "Kodaira–Thurston parameter must be a nonnegative integer");
    BraneAtlas at;
    at.name = "kodaira-thurston(a=" + std::to_string(a) + ")";
    at.charts.push_back(detail::example_chart("kt", 1));
    at.regions.push_back({false, 0.0, 1.0, 0.0, 1.0});
    const auto& ch = *at.charts.front();
    for (long m1 = -2; m1 <= 2; ++m1)
        for (long m2 = -2; m2 <= 2; ++m2) at.transitions.push_back(kodaira_thurston_deck(ch, a, m1, m2));
    auto label = [](long m1, long m2) { return "m=(" + std::to_string(m1) + "," + std::to_string(m2) + ")"; };
    auto samples = region_samples(at.regions.front(), kOverlapSamples);
    for (long m1 = -1; m1 <= 1; ++m1)
        for (long m2 = -1; m2 <= 1; ++m2)
            for (long n1 = -1; n1 <= 1; ++n1)
                for (long n2 = -1; n2 <= 1; ++n2)
                    at.triples.push_back({{"kt", "kt", label(m1, m2)}, {"kt", "kt", label(n1, n2)}, TransitionKey{"kt", "kt", label(m1 + n1, m2 + n2)},
                                          samples});
    return at;
}

// Three sectors of ℂ^× with 𝑯 = (2): φ_αβ and φ_βγ identities, monodromy
// x_γ = (x_α,1 + x_α,2, x_α,2) on U_γα with gauge ¼(x_α,2)² − (y_α¹)². Pairwise
// overlaps only: the three sectors have no common point.
inline BraneAtlas ooguri_vafa_atlas() {
    BraneAtlas at;
    at.name = "ooguri-vafa";
    at.charts = {detail::example_chart("alpha", 2), detail::example_chart("beta", 2), detail::example_chart("gamma", 2)};
    const double r0 = 0.5, r1 = 2.0;
    at.regions = {{true, r0, r1, 0.0, 1.5 * pi}, {true, r0, r1, pi, 2.0 * pi}, {true, r0, r1, -0.5 * pi, pi}};
    const auto& ca = *at.charts[0];
    const auto& cb = *at.charts[1];
    const auto& cg = *at.charts[2];
    IntMatrix id = IntMatrix::identity(2);
    std::vector<Rational> zero(2, Rational(0));
    at.transitions.push_back(Transition::make(ca, cb, "ab", id, zero, RatPolynomial(4)));
    at.transitions.push_back(Transition::make(cb, cg, "bg", id, zero, RatPolynomial(4)));
    IntMatrix mono(2, 2);
    mono(0, 0) = 1;
    mono(0, 1) = 1;
    mono(1, 1) = 1;
    RatPolynomial g = detail::monomial(4, {{1, 2}}, Rational(1, 4)) + detail::monomial(4, {{y_slot(1, 0), 2}}, Rational(-1));
    at.transitions.push_back(Transition::make(cg, ca, "ga", mono, zero, g));
    const size_t forward = at.transitions.size();
    for (size_t i = 0; i < forward; ++i) {
        const auto& t = at.transitions[i];
        std::string rl{t.label.rbegin(), t.label.rend()};
        at.transitions.push_back(t.inverse(rl));
    }
    // Overlap sectors in the standard angle: αβ (π, 3π/2), βγ (3π/2, 2π), γα (0, π).
    struct Ov {
        std::string a, b, lab, back;
        double t0, t1;
    };
    for (const auto& o : std::vector<Ov>{{"alpha", "beta", "ab", "ba", pi, 1.5 * pi},
                                         {"beta", "gamma", "bg", "gb", 1.5 * pi, 2.0 * pi},
                                         {"gamma", "alpha", "ga", "ag", 0.0, pi}}) {
        // points in the coordinates of the first chart of each loop
        auto pts_b = region_samples({true, r0, r1, o.t0, o.t1}, kOverlapSamples);
        auto pts_a = pts_b;
        const Transition* t = at.find({o.a, o.b, o.lab});
        for (auto& p : pts_a) {
            auto x = t->change().apply_x({p[0], p[1]});
            RatMatrix ait = inverse(to_rational(t->a.a)).transpose();
            const double y0 = p[2], y1 = p[3];
            p = {x[0], x[1], to_double(ait(0, 0)) * y0 + to_double(ait(0, 1)) * y1, to_double(ait(1, 0)) * y0 + to_double(ait(1, 1)) * y1};
        }
        at.triples.push_back({{o.a, o.b, o.lab}, {o.b, o.a, o.back}, std::nullopt, pts_a});
        at.triples.push_back({{o.b, o.a, o.back}, {o.a, o.b, o.lab}, std::nullopt, pts_b});
    }
    at.notes.push_back("no triple overlap: U_alpha ∩ U_beta ∩ U_gamma is empty");
    at.notes.push_back("overlap samples: r in (0.5, 2) on each angular sector, 50 points");
    return at;
}

inline BraneAtlas builtin_example(const std::string& name, long a = 0) {
    if (name == "cylinder2" || name == "cylinder") return cylinder_atlas();
    if (name == "kodaira-thurston" || name == "kodaira_thurston" || name == "kt") return kodaira_thurston_atlas(a);
    if (name == "ooguri-vafa" || name == "ooguri_vafa" || name == "ov") return ooguri_vafa_atlas();
    throw Error(Errc::UnknownExample, "unknown example '" + name + "'");
}

// Coframe (dx₁, dx₂ − 2a x₁dx₁, dy¹ + 2a x₁dy², dy²) on (x₁, x₂, y¹, y²).
inline std::vector<OneForm<RatPolynomial>> kodaira_thurston_coframe(long a) {
    const int nv = 4;
    auto zero = [&] { return OneForm<RatPolynomial>(4, RatPolynomial(nv)); };
    std::vector<OneForm<RatPolynomial>> al(4, zero());
    al[0][0] = RatPolynomial::constant(nv, Rational(1));
    al[1][1] = RatPolynomial::constant(nv, Rational(1));
    al[1][0] = RatPolynomial::variable(nv, 0, Rational(-2 * a));
    al[2][2] = RatPolynomial::constant(nv, Rational(1));
    al[2][3] = RatPolynomial::variable(nv, 0, Rational(2 * a));
    al[3][3] = RatPolynomial::constant(nv, Rational(1));
    return al;
}

struct CoframeReport {
    bool closed_124 = false;      // dα₁ = dα₂ = dα₄ = 0
    bool structure_eq = false;    // dα₃ = 2a α₁ ∧ α₄
    bool deck_invariant = false;  // ψ_m^* α_i = α_i for m ∈ {−1,0,1}²
    bool ok() const { return closed_124 && structure_eq && deck_invariant; }
};

inline CoframeReport kodaira_thurston_coframe_check(long a) {
    auto al = kodaira_thurston_coframe(a);
    CoframeReport r;
    r.closed_124 = is_zero_form(exterior_derivative(al[0])) && is_zero_form(exterior_derivative(al[1])) &&
                   is_zero_form(exterior_derivative(al[3]));
    TwoForm<RatPolynomial> rhs = wedge(al[0], al[3]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rhs(i, j) *= Rational(2 * a);
    r.structure_eq = exterior_derivative(al[2]) == rhs;
    r.deck_invariant = true;
    auto ch = detail::example_chart("kt", 1);
    for (long m1 = -1; m1 <= 1; ++m1)
        for (long m2 = -1; m2 <= 1; ++m2) {
            auto t = kodaira_thurston_deck(*ch, a, m1, m2);
            for (const auto& f : al)
                if (pull_back_form(f, t.change()) != f) r.deck_invariant = false;
        }
    return r;
}

}  // namespace bq
