#pragma once

#include "branequant/atlas/local_model.hpp"

namespace bq {

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ChartReport {
    std::string chart_id;
    std::vector<CheckItem> items;
    bool ok() const {
        return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
    }
};

inline ChartReport validate_chart(const BraneChart& ch) {
    ChartReport r{ch.id, {}};
    const int n = ch.form ? ch.form->n : 0;
    const int d = 2 * n;
    r.items.push_back({"level k >= 1", ch.k >= 1, "k = " + std::to_string(ch.k)});
    bool positive = n > 0, chain = n > 0;
    for (int i = 0; i < n; ++i) {
        if (ch.form->invariant_factors[static_cast<size_t>(i)] <= 0) positive = false;
        if (i > 0 && ch.form->invariant_factors[static_cast<size_t>(i)] % ch.form->invariant_factors[static_cast<size_t>(i - 1)] != 0)
            chain = false;
    }
    r.items.push_back({"invariant factors positive", positive, ""});
    r.items.push_back({"invariant factors form a divisibility chain", chain, ""});
    r.items.push_back({"form in skew-Smith normal form", n > 0 && ch.form->is_normal(), ""});
    const bool arity = static_cast<int>(ch.g.size()) == d && static_cast<int>(ch.gcheck.size()) == d;
    r.items.push_back({"g and gcheck have 2n components", arity, ""});
    CheckItem sym{"Dg symmetric", arity, ""};
    if (arity) {
        auto j = ch.jacobian();
        for (int a = 0; a < d && sym.pass; ++a)
            for (int b = a + 1; b < d; ++b)
                if (j[static_cast<size_t>(a)][static_cast<size_t>(b)] != j[static_cast<size_t>(b)][static_cast<size_t>(a)]) {
                    sym.pass = false;
                    sym.detail = "dg^" + std::to_string(a) + "/dx_" + std::to_string(b) + " != dg^" + std::to_string(b) + "/dx_" +
                                 std::to_string(a);
                    break;
                }
    }
    r.items.push_back(sym);
    return r;
}

// Ω_X = F/(−2πi) + iω with F the curvature of the skew-Smith connection and
// ω = Σ dx_v ∧ dy_v, first on (x, y) and then in the coframe (dz, dz̄).
struct HolomorphicFormReport {
    TwoForm<CRatPolynomial> in_xy;
    TwoForm<CRatPolynomial> in_z;              // basis (dz_0..dz_{2n-1}, dz̄_0..dz̄_{2n-1})
    std::vector<CRatPolynomial> coefficients;  // of dz^i ∧ dz^{n+i}
    bool normal_form = false;                  // Ω_X = Σ (1/h_i) dz^i ∧ dz^{n+i}
};

inline HolomorphicFormReport holomorphic_symplectic_form(const BraneChart& ch) {
    const int n = ch.n();
    const int d = 2 * n;
    const int nv = xy_vars(n);
    const int dd = 2 * d;
    LocalModel m = skew_smith_model(ch);
    OneForm<CRatPolynomial> a;
    for (const auto& c : m.conn) a.push_back(to_complex(c));
    HolomorphicFormReport r;
    r.in_xy = exterior_derivative(a);
    const CRational ii = CRational::i();
    for (int v = 0; v < d; ++v) {
        r.in_xy(v, d + v) += CRatPolynomial::constant(nv, ii);
        r.in_xy(d + v, v) -= CRatPolynomial::constant(nv, ii);
    }

    // (dx, dy) = K (dz, dz̄) with w = y + g: dx = ½(dz + dz̄), dw from the imaginary
    // parts of z, dy = dw − Dg dx.
    Mat<CRatPolynomial> k(dd, dd);
    for (int a0 = 0; a0 < dd; ++a0)
        for (int b0 = 0; b0 < dd; ++b0) k(a0, b0) = CRatPolynomial(nv);
    const CRational half(Rational(1, 2));
    for (int v = 0; v < d; ++v) {
        k(v, v) = CRatPolynomial::constant(nv, half);
        k(v, d + v) = CRatPolynomial::constant(nv, half);
    }
    Mat<CRatPolynomial> w(d, dd);
    for (int a0 = 0; a0 < d; ++a0)
        for (int b0 = 0; b0 < dd; ++b0) w(a0, b0) = CRatPolynomial(nv);
    for (int i = 0; i < n; ++i) {
        const Rational h(ch.form->h_int(i));
        // w_{n+i} = i(z^i − z̄^i)/(2h), w_i = −i(z^{n+i} − z̄^{n+i})/(2h)
        const CRational c1(Rational(0), 1 / (2 * h));
        w(n + i, i) = CRatPolynomial::constant(nv, c1);
        w(n + i, d + i) = CRatPolynomial::constant(nv, -c1);
        w(i, n + i) = CRatPolynomial::constant(nv, -c1);
        w(i, d + n + i) = CRatPolynomial::constant(nv, c1);
    }
    auto jac = ch.jacobian();
    std::vector<int> xs(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) xs[static_cast<size_t>(i)] = i;
    for (int v = 0; v < d; ++v)
        for (int col = 0; col < dd; ++col) {
            CRatPolynomial e = w(v, col);
            for (int u = 0; u < d; ++u) {
                const auto& dg = jac[static_cast<size_t>(v)][static_cast<size_t>(u)];
                if (!dg.is_zero() && !k(u, col).is_zero()) e -= to_complex(dg.embed(nv, xs)) * k(u, col);
            }
            k(d + v, col) = e;
        }
    r.in_z = poly_matmul(poly_matmul(k.transpose(), r.in_xy, nv), k, nv);

    r.normal_form = true;
    for (int a0 = 0; a0 < dd; ++a0)
        for (int b0 = 0; b0 < dd; ++b0) {
            CRatPolynomial expect(nv);
            if (a0 < n && b0 == a0 + n) expect = CRatPolynomial::constant(nv, CRational(1 / Rational(ch.form->h_int(a0))));
            if (a0 >= n && a0 < d && b0 == a0 - n) expect = CRatPolynomial::constant(nv, CRational(-1 / Rational(ch.form->h_int(b0))));
            if (r.in_z(a0, b0) != expect) r.normal_form = false;
        }
    for (int i = 0; i < n; ++i) r.coefficients.push_back(r.in_z(i, n + i));
    return r;
}

}  // namespace bq
