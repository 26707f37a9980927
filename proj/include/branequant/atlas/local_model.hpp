#pragma once

#include <string>
#include <vector>

#include "branequant/fiber/chart.hpp"

namespace bq {

// Variable layout shared by the atlas code: x_0..x_{2n-1}, y_0..y_{2n-1}, and for
// automorphy phases λ_0..λ_{2n-1} after those.
inline int xy_vars(int n) { return 4 * n; }
inline int xyl_vars(int n) { return 6 * n; }
inline int x_slot(int, int v) { return v; }
inline int y_slot(int n, int v) { return 2 * n + v; }
inline int lambda_slot(int n, int v) { return 4 * n + v; }

// Exterior calculus on constant-rank forms with polynomial coefficients.
// A 2-form is stored as the antisymmetric matrix M with form = ½ Σ M_ab dv_a ∧ dv_b.
template <class P>
using OneForm = std::vector<P>;
template <class P>
using TwoForm = Mat<P>;

template <class P>
TwoForm<P> exterior_derivative(const OneForm<P>& w) {
    const int d = static_cast<int>(w.size());
    TwoForm<P> m(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) m(a, b) = P(w[static_cast<size_t>(b)].nvars());
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            P v = w[static_cast<size_t>(b)].derivative(a) - w[static_cast<size_t>(a)].derivative(b);
            m(a, b) = v;
            m(b, a) = -v;
        }
    return m;
}

template <class P>
TwoForm<P> wedge(const OneForm<P>& u, const OneForm<P>& v) {
    const int d = static_cast<int>(u.size());
    TwoForm<P> m(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            m(a, b) = u[static_cast<size_t>(a)] * v[static_cast<size_t>(b)] - u[static_cast<size_t>(b)] * v[static_cast<size_t>(a)];
    return m;
}

template <class P>
bool is_zero_form(const TwoForm<P>& m) {
    for (int a = 0; a < m.rows(); ++a)
        for (int b = 0; b < m.cols(); ++b)
            if (!m(a, b).is_zero()) return false;
    return true;
}

// Product of polynomial matrices; every entry must share `nvars`.
template <class P>
Mat<P> poly_matmul(const Mat<P>& a, const Mat<P>& b, int nvars) {
    if (a.cols() != b.rows()) throw Error(Errc::InvalidArgument, "matrix shape mismatch");
    Mat<P> c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            P acc(nvars);
            for (int k = 0; k < a.cols(); ++k)
                if (!a(i, k).is_zero() && !b(k, j).is_zero()) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    return c;
}

template <class P>
OneForm<P> differential(const P& f) {
    OneForm<P> w;
    for (int v = 0; v < f.nvars(); ++v) w.push_back(f.derivative(v));
    return w;
}

// An affine change of integral affine charts x_t = A(x_s + b), y_t = A^{-T} y_s,
// λ_t = A^{-T} λ_s, acting on polynomials written in target variables.
struct AffineChange {
    IntMatrix a;
    std::vector<Rational> b;

    static AffineChange identity(int d) { return {IntMatrix::identity(d), std::vector<Rational>(static_cast<size_t>(d))}; }

    int dim() const { return a.rows(); }

    // Images of the target variables (x, y[, λ]) as polynomials in source variables.
    std::vector<RatPolynomial> images(bool with_lambda) const {
        const int d = dim();
        const int n = d / 2;
        const int nv = with_lambda ? xyl_vars(n) : xy_vars(n);
        RatMatrix ait = inverse(to_rational(a)).transpose();
        std::vector<RatPolynomial> out;
        for (int i = 0; i < d; ++i) {
            RatPolynomial p(nv);
            Rational shift = 0;
            for (int j = 0; j < d; ++j) {
                Rational aij(a(i, j));
                if (aij != 0) p.add_term(unit_exponent(nv, x_slot(n, j)), aij);
                shift += aij * b[static_cast<size_t>(j)];
            }
            if (shift != 0) p.add_term(std::vector<int>(static_cast<size_t>(nv), 0), shift);
            out.push_back(std::move(p));
        }
        for (int base : {2 * n, 4 * n}) {
            if (base == 4 * n && !with_lambda) break;
            for (int i = 0; i < d; ++i) {
                RatPolynomial p(nv);
                for (int j = 0; j < d; ++j)
                    if (ait(i, j) != 0) p.add_term(unit_exponent(nv, base + j), ait(i, j));
                out.push_back(std::move(p));
            }
        }
        return out;
    }

    // x_t as doubles from x_s.
    std::vector<double> apply_x(const std::vector<double>& xs) const {
        const int d = dim();
        std::vector<double> out(static_cast<size_t>(d), 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out[static_cast<size_t>(i)] += to_double(a(i, j)) * (xs[static_cast<size_t>(j)] + to_double(b[static_cast<size_t>(j)]));
        return out;
    }

    // this ∘ o : source of o → target of this.
    AffineChange compose(const AffineChange& o) const {
        const int d = dim();
        IntMatrix ab = a * o.a;
        RatMatrix oinv = inverse(to_rational(o.a));
        std::vector<Rational> nb = o.b;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) nb[static_cast<size_t>(i)] += oinv(i, j) * b[static_cast<size_t>(j)];
        return {ab, nb};
    }

    AffineChange inverse_change() const {
        const int d = dim();
        IntMatrix ainv = unimodular_inverse(a);
        std::vector<Rational> nb(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) nb[static_cast<size_t>(i)] -= Rational(a(i, j)) * b[static_cast<size_t>(j)];
        return {ainv, nb};
    }

    friend bool operator==(const AffineChange& x, const AffineChange& y) { return x.a == y.a && x.b == y.b; }

    static std::vector<int> unit_exponent(int nv, int var) {
        std::vector<int> e(static_cast<size_t>(nv), 0);
        e[static_cast<size_t>(var)] = 1;
        return e;
    }
};

// Polynomial in target (x, y) variables rewritten in source (x, y) variables.
inline RatPolynomial pull_back_function(const RatPolynomial& f, const AffineChange& ch) {
    return f.substitute(ch.images(f.nvars() == xyl_vars(ch.dim() / 2)));
}

// 1-form on (x, y) space in target coordinates, pulled back to source coordinates.
inline OneForm<RatPolynomial> pull_back_form(const OneForm<RatPolynomial>& w, const AffineChange& ch) {
    const int d = ch.dim();
    auto img = ch.images(false);
    RatMatrix ainv = inverse(to_rational(ch.a));
    const int nv = xy_vars(d / 2);
    OneForm<RatPolynomial> out(static_cast<size_t>(2 * d), RatPolynomial(nv));
    std::vector<RatPolynomial> sub;
    for (const auto& c : w) sub.push_back(c.substitute(img));
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            // dx_t,i = Σ_j A_ij dx_s,j ; dy_t,i = Σ_j (A^{-T})_ij dy_s,j
            Rational aij(ch.a(i, j));
            if (aij != 0) out[static_cast<size_t>(j)] += sub[static_cast<size_t>(i)] * aij;
            if (ainv(j, i) != 0) out[static_cast<size_t>(d + j)] += sub[static_cast<size_t>(d + i)] * ainv(j, i);
        }
    return out;
}

// Trivial line bundle on U × ℝ^{2n} with connection d − 2πi Σ conn_v dv (v over x
// then y) and fiberwise factor of automorphy v ↦ e^{2πi phase(x, y, λ)} v on y ↦ y + λ.
// Everything is in full turns.
struct LocalModel {
    int n = 0;
    OneForm<RatPolynomial> conn;
    RatPolynomial phase;

    // s ↦ e^{2πi G} s: conn += dG, phase += G(x, y + λ) − G(x, y).
    LocalModel gauged(const RatPolynomial& g) const {
        LocalModel out = *this;
        auto dg = differential(g);
        for (size_t v = 0; v < conn.size(); ++v) out.conn[v] += dg[v];
        const int nv = xyl_vars(n);
        std::vector<int> slots(static_cast<size_t>(xy_vars(n)));
        for (int i = 0; i < xy_vars(n); ++i) slots[static_cast<size_t>(i)] = i;
        RatPolynomial ge = g.embed(nv, slots);
        std::vector<RatPolynomial> shift;
        for (int i = 0; i < nv; ++i) shift.push_back(RatPolynomial::variable(nv, i));
        for (int v = 0; v < 2 * n; ++v) shift[static_cast<size_t>(y_slot(n, v))] += RatPolynomial::variable(nv, lambda_slot(n, v));
        out.phase += ge.substitute(shift) - ge;
        return out;
    }

    // The model in source coordinates of `ch`, when *this is written in its target coordinates.
    LocalModel pulled_back(const AffineChange& ch) const {
        return {n, pull_back_form(conn, ch), pull_back_function(phase, ch)};
    }
};

// Connection forms agree exactly and the automorphy phases differ by a function of λ
// alone that is integer-valued on ℤ^{2n}.
struct ModelComparison {
    bool connection_equal = false;
    bool phase_equal_mod_integers = false;
    std::string detail;
    bool ok() const { return connection_equal && phase_equal_mod_integers; }
};

namespace detail {

// Integer-valuedness of a polynomial on ℤ^m: it suffices to test {0..deg}^m
// (Newton basis of binomials).
inline bool integer_valued(const RatPolynomial& p, const std::vector<int>& vars) {
    const int deg = p.degree_bound();
    std::vector<Rational> pt(static_cast<size_t>(p.nvars()), Rational(0));
    std::vector<int> digit(vars.size(), 0);
    for (;;) {
        for (size_t i = 0; i < vars.size(); ++i) pt[static_cast<size_t>(vars[i])] = digit[i];
        Rational v = p.evaluate<Rational>(pt);
        if (frac_part(v) != 0) return false;
        size_t i = 0;
        while (i < digit.size() && ++digit[i] > deg) digit[i++] = 0;
        if (i == digit.size()) return true;
    }
}

}  // namespace detail

inline ModelComparison compare_models(const LocalModel& a, const LocalModel& b) {
    ModelComparison r;
    r.connection_equal = a.conn == b.conn;
    if (!r.connection_equal) {
        for (size_t v = 0; v < a.conn.size(); ++v)
            if (a.conn[v] != b.conn[v]) {
                r.detail = "connection component " + std::to_string(v) + " differs";
                break;
            }
    }
    RatPolynomial diff = a.phase - b.phase;
    bool lambda_only = true;
    for (const auto& [e, c] : diff.terms())
        for (int v = 0; v < xy_vars(a.n); ++v)
            if (e[static_cast<size_t>(v)] != 0) lambda_only = false;
    std::vector<int> lam;
    for (int v = 0; v < 2 * a.n; ++v) lam.push_back(lambda_slot(a.n, v));
    r.phase_equal_mod_integers = lambda_only && detail::integer_valued(diff, lam);
    if (!r.phase_equal_mod_integers && r.detail.empty())
        r.detail = lambda_only ? "automorphy phases differ by a non-integer character" : "automorphy phases differ in (x, y)";
    return r;
}

// Skew-Smith model of a chart: connection x₁·𝑯⁻¹dx₂ + (y² + g²)·𝑯 d(y¹ + g¹) and
// automorphy ǧ·λ + λ²·𝑯(y¹ + g¹).
inline LocalModel skew_smith_model(const BraneChart& ch) {
    const int n = ch.n();
    const int d = 2 * n;
    const int nv = xy_vars(n);
    const int nl = xyl_vars(n);
    LocalModel m{n, OneForm<RatPolynomial>(static_cast<size_t>(2 * d), RatPolynomial(nv)), RatPolynomial(nl)};
    std::vector<int> xs(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) xs[static_cast<size_t>(i)] = i;
    for (int i = 0; i < n; ++i) {
        const Rational h(ch.form->h_int(i));
        m.conn[static_cast<size_t>(n + i)] += RatPolynomial::variable(nv, i, 1 / h);
        // w² = y_{n+i} + g^{n+i}
        RatPolynomial w2 = RatPolynomial::variable(nv, y_slot(n, n + i)) + ch.g[static_cast<size_t>(n + i)].embed(nv, xs);
        RatPolynomial coeff = w2 * h;
        RatPolynomial gi = ch.g[static_cast<size_t>(i)].embed(nv, xs);
        for (int v = 0; v < d; ++v) {
            RatPolynomial dv = gi.derivative(v);
            if (!dv.is_zero()) m.conn[static_cast<size_t>(v)] += coeff * dv;
        }
        m.conn[static_cast<size_t>(y_slot(n, i))] += coeff;
        RatPolynomial w1 = RatPolynomial::variable(nl, y_slot(n, i)) + ch.g[static_cast<size_t>(i)].embed(nl, xs);
        m.phase += RatPolynomial::variable(nl, lambda_slot(n, n + i), h) * w1;
    }
    for (int v = 0; v < d; ++v)
        if (ch.gcheck[static_cast<size_t>(v)] != 0) m.phase += RatPolynomial::variable(nl, lambda_slot(n, v), ch.gcheck[static_cast<size_t>(v)]);
    return m;
}

// Complex coordinates z = (x₁ − i𝑯(y² + g²), x₂ + i𝑯(y¹ + g¹)) as polynomials in (x, y).
inline std::vector<CRatPolynomial> complex_coordinates(const BraneChart& ch) {
    const int n = ch.n();
    const int d = 2 * n;
    const int nv = xy_vars(n);
    std::vector<int> xs(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) xs[static_cast<size_t>(i)] = i;
    std::vector<CRatPolynomial> z;
    for (int part = 0; part < 2; ++part)
        for (int i = 0; i < n; ++i) {
            const int other = part == 0 ? n + i : i;
            const CRational coef(Rational(0), Rational(part == 0 ? -ch.form->h_int(i) : ch.form->h_int(i)));
            RatPolynomial w = RatPolynomial::variable(nv, y_slot(n, other)) + ch.g[static_cast<size_t>(other)].embed(nv, xs);
            z.push_back(CRatPolynomial::variable(nv, part * n + i) + to_complex(w) * coef);
        }
    return z;
}

}  // namespace bq
