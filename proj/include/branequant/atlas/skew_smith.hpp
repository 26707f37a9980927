#pragma once

#include "branequant/atlas/local_model.hpp"

namespace bq {

// Local brane data before normalization: connection ½f·dx + g̃·dy + ½y·H dy and
// automorphy χ(λ) e^{πi λ·H y}, over a general invertible integer skew form H.
struct RawBraneData {
    std::vector<RatPolynomial> f;       // 2n polynomials in x
    std::vector<RatPolynomial> gtilde;  // 2n polynomials in x
    FormPtr form;                       // H = form->entries
    SemiCharacter chi;                  // χ for the same H

    int n() const { return form->n; }

    static RawBraneData make(std::vector<RatPolynomial> f, std::vector<RatPolynomial> gtilde, const IntMatrix& h,
                             std::vector<Rational> chi_shift) {
        auto form = std::make_shared<const IntSkewForm>(skew_smith_normal_form(h));
        const int d = 2 * form->n;
        if (f.empty()) f.assign(static_cast<size_t>(d), RatPolynomial(d));
        if (gtilde.empty()) gtilde.assign(static_cast<size_t>(d), RatPolynomial(d));
        if (chi_shift.empty()) chi_shift.assign(static_cast<size_t>(d), Rational(0));
        if (static_cast<int>(f.size()) != d || static_cast<int>(gtilde.size()) != d || static_cast<int>(chi_shift.size()) != d)
            throw Error(Errc::InvalidArgument, "raw brane data has wrong arity");
        for (const auto& p : f)
            if (p.nvars() != d) throw Error(Errc::InvalidArgument, "f components must be polynomials in 2n variables");
        for (const auto& p : gtilde)
            if (p.nvars() != d) throw Error(Errc::InvalidArgument, "g̃ components must be polynomials in 2n variables");
        return {std::move(f), std::move(gtilde), form, SemiCharacter{std::move(chi_shift), form}};
    }
};

// Polynomial matrices of first derivatives: (Dp)_{ab} = ∂p_a/∂x_b.
inline Mat<RatPolynomial> jacobian_matrix(const std::vector<RatPolynomial>& p) {
    const int d = static_cast<int>(p.size());
    Mat<RatPolynomial> j(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) j(a, b) = p[static_cast<size_t>(a)].derivative(b);
    return j;
}

inline Mat<RatPolynomial> constant_matrix(const RatMatrix& m, int nvars) {
    Mat<RatPolynomial> out(m.rows(), m.cols());
    for (int a = 0; a < m.rows(); ++a)
        for (int b = 0; b < m.cols(); ++b) out(a, b) = RatPolynomial::constant(nvars, m(a, b));
    return out;
}

inline std::vector<RatPolynomial> apply_matrix(const RatMatrix& m, const std::vector<RatPolynomial>& v) {
    std::vector<RatPolynomial> out(static_cast<size_t>(m.rows()), RatPolynomial(v.front().nvars()));
    for (int a = 0; a < m.rows(); ++a)
        for (int b = 0; b < m.cols(); ++b)
            if (m(a, b) != 0) out[static_cast<size_t>(a)] += v[static_cast<size_t>(b)] * m(a, b);
    return out;
}

struct RawInvariantReport {
    bool g_jacobian_symmetric = false;
    bool inverse_identity = false;  // H⁻¹ = −(F + GHG)
    bool ok() const { return g_jacobian_symmetric && inverse_identity; }
};

// F = ½(Df − Dfᵀ), G = D(H^{-T} g̃).
inline RawInvariantReport check_raw_invariants(const RawBraneData& raw) {
    const int d = 2 * raw.n();
    RatMatrix h = to_rational(raw.form->entries);
    RatMatrix hinv = inverse(h);
    auto g = apply_matrix(hinv.transpose(), raw.gtilde);
    auto G = jacobian_matrix(g);
    auto Df = jacobian_matrix(raw.f);
    Mat<RatPolynomial> F(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) F(a, b) = (Df(a, b) - Df(b, a)) * Rational(1, 2);
    RawInvariantReport r;
    r.g_jacobian_symmetric = G == G.transpose();
    Mat<RatPolynomial> rhs = -(F + poly_matmul(poly_matmul(G, constant_matrix(h, d), d), G, d));
    r.inverse_identity = rhs == constant_matrix(hinv, d);
    return r;
}

struct GaugeStep {
    std::string label;
    RatPolynomial exponent;  // in normalized (x, y), full turns
};

// What reduce_to_skew_smith did: the integral affine change x_new = R x, the
// semi-character parity shift, and the gauge exponents in order.
struct GaugeLog {
    IntMatrix coordinate_change;
    std::vector<int> parity_shift;
    std::vector<GaugeStep> steps;
};

struct SkewSmithResult {
    ChartPtr chart;
    GaugeLog log;
};

namespace detail {

// Radial primitive of a closed polynomial 1-form on ℝ^d, zero at the origin.
inline RatPolynomial polynomial_primitive(const OneForm<RatPolynomial>& w) {
    const int d = static_cast<int>(w.size());
    RatPolynomial p(d);
    for (int v = 0; v < d; ++v)
        for (const auto& [e, c] : w[static_cast<size_t>(v)].terms()) {
            int deg = 0;
            for (int x : e) deg += x;
            auto ne = e;
            ne[static_cast<size_t>(v)] += 1;
            p.add_term(ne, c / Rational(deg + 1));
        }
    return p;
}

inline std::vector<int> slots_up_to(int d) {
    std::vector<int> s(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) s[static_cast<size_t>(i)] = i;
    return s;
}

}  // namespace detail

// Raw local model ½f·dx + g̃·dy + ½y·H dy, automorphy χ(λ)e^{πiλ·Hy}, in turns.
inline LocalModel raw_model(const RawBraneData& raw) {
    const int n = raw.n();
    const int d = 2 * n;
    const int nv = xy_vars(n);
    const int nl = xyl_vars(n);
    const auto& h = raw.form->entries;
    LocalModel m{n, OneForm<RatPolynomial>(static_cast<size_t>(2 * d), RatPolynomial(nv)), RatPolynomial(nl)};
    auto xs = detail::slots_up_to(d);
    for (int v = 0; v < d; ++v) {
        m.conn[static_cast<size_t>(v)] = raw.f[static_cast<size_t>(v)].embed(nv, xs) * Rational(1, 2);
        m.conn[static_cast<size_t>(y_slot(n, v))] = raw.gtilde[static_cast<size_t>(v)].embed(nv, xs);
        // ½ Σ_a y_a H_av dy_v
        for (int a = 0; a < d; ++a)
            if (h(a, v) != 0) m.conn[static_cast<size_t>(y_slot(n, v))] += RatPolynomial::variable(nv, y_slot(n, a), Rational(h(a, v), 2));
    }
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            if (h(a, b) == 0) continue;
            std::vector<int> e(static_cast<size_t>(nl), 0);
            e[static_cast<size_t>(lambda_slot(n, a))] += 1;
            e[static_cast<size_t>(y_slot(n, b))] += 1;
            m.phase.add_term(e, Rational(h(a, b), 2));
            if (a < b) {
                std::vector<int> q(static_cast<size_t>(nl), 0);
                q[static_cast<size_t>(lambda_slot(n, a))] += 1;
                q[static_cast<size_t>(lambda_slot(n, b))] += 1;
                m.phase.add_term(q, Rational(h(a, b), 2));
            }
        }
    for (int v = 0; v < d; ++v)
        if (raw.chi.gcheck[static_cast<size_t>(v)] != 0)
            m.phase += RatPolynomial::variable(nl, lambda_slot(n, v), raw.chi.gcheck[static_cast<size_t>(v)]);
    return m;
}

// Normalize raw data to a chart (x, g, ǧ, 𝑯):
//   1. x ↦ Rx with R H Rᵀ = [[0,−𝑯],[𝑯,0]]; χ re-expressed against the canonical one.
//   2. g = H^{-T} g̃, gauge −½ g·Hy.
//   3. gauge −½P with dP = f·dx − g·H dg − x·H⁻¹dx (polynomial primitive, P(0) = 0).
//   4. gauge ½(x₁·𝑯⁻¹x₂ + (y² + g²)·𝑯(y¹ + g¹)).
inline SkewSmithResult reduce_to_skew_smith(const RawBraneData& raw, int k = 1, std::string id = "reduced") {
    const int n = raw.n();
    const int d = 2 * n;
    const int nv = xy_vars(n);
    const IntMatrix& r = raw.form->reducer;
    RatMatrix rr = to_rational(r);
    RatMatrix rinv = inverse(rr);

    // Step 1: f'(x') = R^{-T} f(R⁻¹x'), g̃'(x') = R g̃(R⁻¹x').
    std::vector<RatPolynomial> back;
    for (int i = 0; i < d; ++i) {
        RatPolynomial p(d);
        for (int j = 0; j < d; ++j)
            if (rinv(i, j) != 0) p.add_term(AffineChange::unit_exponent(d, j), rinv(i, j));
        back.push_back(std::move(p));
    }
    std::vector<RatPolynomial> fs, gts;
    for (int i = 0; i < d; ++i) {
        fs.push_back(raw.f[static_cast<size_t>(i)].substitute(back));
        gts.push_back(raw.gtilde[static_cast<size_t>(i)].substitute(back));
    }
    auto f1 = apply_matrix(rinv.transpose(), fs);
    auto gt1 = apply_matrix(rr, gts);
    std::vector<long> h;
    for (int i = 0; i < n; ++i) h.push_back(raw.form->h_int(i));
    auto nform = std::make_shared<const IntSkewForm>(standard_skew_form(h));
    const IntMatrix& hn = nform->entries;

    // χ'(λ') = χ(Rᵀλ') = χ₀(λ') e^{2πi ǧ·λ'}: ǧ = R c + ½ε, ε_j the parity of q_H(Rᵀ e_j).
    GaugeLog log;
    log.coordinate_change = r;
    std::vector<Rational> gcheck(static_cast<size_t>(d), Rational(0));
    for (int j = 0; j < d; ++j) {
        std::vector<long> col(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) col[static_cast<size_t>(i)] = static_cast<long>(r(j, i));
        SemiCharacter chi0{std::vector<Rational>(static_cast<size_t>(d), Rational(0)), raw.form};
        const int eps = chi0.phase_turns(col) == 0 ? 0 : 1;
        log.parity_shift.push_back(eps);
        Rational g = Rational(eps, 2);
        for (int i = 0; i < d; ++i) g += rr(j, i) * raw.chi.gcheck[static_cast<size_t>(i)];
        gcheck[static_cast<size_t>(j)] = frac_part(g);
    }

    // Step 2.
    RatMatrix hnr = to_rational(hn);
    RatMatrix hninv = inverse(hnr);
    auto g = apply_matrix(hninv.transpose(), gt1);
    auto xs = detail::slots_up_to(d);
    RatPolynomial step2(nv);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (hn(a, b) != 0)
                step2 += g[static_cast<size_t>(a)].embed(nv, xs) * RatPolynomial::variable(nv, y_slot(n, b), Rational(-hn(a, b), 2));
    log.steps.push_back({"normalize g", step2});

    // Step 3.
    OneForm<RatPolynomial> w(static_cast<size_t>(d), RatPolynomial(d));
    for (int v = 0; v < d; ++v) {
        w[static_cast<size_t>(v)] = f1[static_cast<size_t>(v)];
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                if (hn(a, b) != 0) w[static_cast<size_t>(v)] -= g[static_cast<size_t>(a)] * g[static_cast<size_t>(b)].derivative(v) * Rational(hn(a, b));
        for (int a = 0; a < d; ++a)
            if (hninv(a, v) != 0) w[static_cast<size_t>(v)] -= RatPolynomial::variable(d, a, hninv(a, v));
    }
    if (!is_zero_form(exterior_derivative(w)))
        throw Error(Errc::NotClosed, "f·dx − g·H dg − x·H⁻¹dx is not closed; raw data violates H⁻¹ = −(F + GHG)");
    RatPolynomial prim = detail::polynomial_primitive(w);
    if (differential(prim) != w) throw Error(Errc::NotExactOnDomain, "no polynomial primitive for the base 1-form");
    log.steps.push_back({"base primitive", prim.embed(nv, xs) * Rational(-1, 2)});

    // Step 4.
    RatPolynomial step4(nv);
    for (int i = 0; i < n; ++i) {
        const Rational hi(h[static_cast<size_t>(i)]);
        step4 += RatPolynomial::variable(nv, i) * RatPolynomial::variable(nv, n + i, 1 / hi);
        RatPolynomial w2 = RatPolynomial::variable(nv, y_slot(n, n + i)) + g[static_cast<size_t>(n + i)].embed(nv, xs);
        RatPolynomial w1 = RatPolynomial::variable(nv, y_slot(n, i)) + g[static_cast<size_t>(i)].embed(nv, xs);
        step4 += w2 * w1 * hi;
    }
    log.steps.push_back({"skew-Smith", step4 * Rational(1, 2)});

    return {BraneChart::make(std::move(id), nform, std::move(g), std::move(gcheck), k), std::move(log)};
}

// Undo the pipeline starting from the chart's skew-Smith model and compare with the
// raw model: connection equal exactly, automorphy equal up to integers.
inline ModelComparison reassembly_check(const RawBraneData& raw, const SkewSmithResult& res) {
    LocalModel m = skew_smith_model(*res.chart);
    for (auto it = res.log.steps.rbegin(); it != res.log.steps.rend(); ++it) m = m.gauged(-it->exponent);
    const int d = 2 * raw.n();
    // normalized x' = R x: the normalized chart is the target of x' = R(x + 0).
    AffineChange ch{res.log.coordinate_change, std::vector<Rational>(static_cast<size_t>(d))};
    return compare_models(m.pulled_back(ch), raw_model(raw));
}

}  // namespace bq
