#pragma once

#include "branequant/mirror/toeplitz.hpp"

namespace bq {

// Z_a = ∂/∂ž_a or Z̄_a = ∂/∂ž̄_a, a ∈ [0, 2n).
struct Direction {
    bool bar = false;
    int index = 0;
};

// One covariant derivative on mirror sections ⟨s⟩(x, t): a constant-coefficient
// vector field in (x, t) plus π times a polynomial potential.
struct ConnectionComponent {
    std::vector<CRational> field;  // coefficient of ∂/∂v for v over (x, t)
    CRatPolynomial potential;      // A = π · potential
};

// The mirror connection on a chart. With t the ǔ₁ slot of ⟨s⟩, y̌₁ = t + kǧ₁ and
// ž = x + (i/k) y̌:
//   Z_i      = ½(∂x_i − ik ∂t_i) − kπ g^i
//   Z̄_i      = ½(∂x_i + ik ∂t_i) + kπ g^i
//   Z_{n+i}  = ½∂x_{n+i} − πi (k/h_i) ž̄_i − kπ g^{n+i}
//   Z̄_{n+i}  = ½∂x_{n+i} − πi (k/h_i) ž_i + kπ g^{n+i}
class MirrorConnection {
public:
    static MirrorConnection make(ChartPtr chart) {
        MirrorConnection c;
        c.chart_ = chart;
        const int n = chart->n();
        const int nv = 3 * n;
        const Rational k(chart->k);
        std::vector<int> slots(static_cast<size_t>(2 * n));
        for (int i = 0; i < 2 * n; ++i) slots[static_cast<size_t>(i)] = i;
        const CRational half(Rational(1, 2));
        const CRational ii = CRational::i();
        for (int bar = 0; bar < 2; ++bar)
            for (int a = 0; a < 2 * n; ++a) {
                ConnectionComponent comp{std::vector<CRational>(static_cast<size_t>(nv)), CRatPolynomial(nv)};
                comp.field[static_cast<size_t>(a)] = half;
                const CRational sgn = bar ? CRational(1) : CRational(-1);
                CRatPolynomial ga = to_complex(chart->g[static_cast<size_t>(a)].embed(nv, slots));
                comp.potential = ga * (sgn * CRational(k));
                if (a < n) {
                    comp.field[static_cast<size_t>(2 * n + a)] = sgn * ii * CRational(k / 2);
                } else {
                    const int i = a - n;
                    const Rational h(chart->form->h_int(i));
                    // ž_i = x_i + (i/k)(t_i + kǧ_i); Z_{n+i} uses its conjugate
                    CRational tc(Rational(0), bar ? Rational(1 / k) : Rational(-1 / k));
                    CRatPolynomial z = CRatPolynomial::variable(nv, i);
                    z += CRatPolynomial::variable(nv, 2 * n + i, tc);
                    z += CRatPolynomial::constant(nv, tc * CRational(k * chart->gcheck[static_cast<size_t>(i)]));
                    comp.potential += z * (-ii * CRational(k / h));
                }
                (bar ? c.zbar_ : c.z_).push_back(std::move(comp));
            }
        return c;
    }

    const ChartPtr& chart() const { return chart_; }
    const ConnectionComponent& component(Direction d) const {
        if (d.index < 0 || d.index >= chart_->dim()) throw Error(Errc::IndexOutOfRange, "direction index out of range");
        return (d.bar ? zbar_ : z_)[static_cast<size_t>(d.index)];
    }

private:
    ChartPtr chart_;
    std::vector<ConnectionComponent> z_, zbar_;
};

inline MirrorSectionRep connection_apply(const MirrorConnection& conn, Direction d, const MirrorSectionRep& s) {
    const auto& comp = conn.component(d);
    MirrorSectionRep out(s.n());
    for (size_t v = 0; v < comp.field.size(); ++v)
        if (!is_zero_value(comp.field[v])) out += comp.field[v].to_cplx() * s.derivative(static_cast<int>(v));
    if (!comp.potential.is_zero()) out += s.times(to_numeric(comp.potential) * cplx(pi));
    return out;
}

namespace detail {

inline CRatPolynomial apply_field(const std::vector<CRational>& field, const CRatPolynomial& p) {
    CRatPolynomial out(p.nvars());
    for (size_t v = 0; v < field.size(); ++v)
        if (!is_zero_value(field[v])) out += p.derivative(static_cast<int>(v)) * field[v];
    return out;
}

// [X + πP, Y + πQ] = π(X(Q) − Y(P)) for constant-coefficient X, Y.
inline CRatPolynomial bracket_over_pi(const ConnectionComponent& a, const ConnectionComponent& b) {
    return apply_field(a.field, b.potential) - apply_field(b.field, a.potential);
}

}  // namespace detail

// Curvature coefficients divided by π, computed in exact complex-rational arithmetic.
// mixed(a, b) is the coefficient of dž_a ∧ dž̄_b; the (2,0) and (0,2) parts are
// F(Z_a, Z_b) and F(Z̄_a, Z̄_b).
struct CurvatureForm {
    Mat<CRatPolynomial> mixed, holomorphic, antiholomorphic, expected;

    bool matches_expected() const { return mixed == expected; }
    bool pure_parts_vanish() const {
        for (int a = 0; a < holomorphic.rows(); ++a)
            for (int b = 0; b < holomorphic.cols(); ++b)
                if (!holomorphic(a, b).is_zero() || !antiholomorphic(a, b).is_zero()) return false;
        return true;
    }
};

// Expected mixed part: −ik H⁻¹ + k Dg (times π), i.e. −2πi (k/2)(H⁻¹ + i Dg).
inline CurvatureForm curvature_form(const MirrorConnection& conn) {
    const auto& ch = *conn.chart();
    const int d = ch.dim();
    const int n = ch.n();
    const int nv = 3 * n;
    CurvatureForm c{Mat<CRatPolynomial>(d, d), Mat<CRatPolynomial>(d, d), Mat<CRatPolynomial>(d, d), Mat<CRatPolynomial>(d, d)};
    auto jac = ch.jacobian();
    std::vector<int> slots(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) slots[static_cast<size_t>(i)] = i;
    const CRational k(Rational(ch.k));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            c.mixed(a, b) = detail::bracket_over_pi(conn.component({false, a}), conn.component({true, b}));
            c.holomorphic(a, b) = detail::bracket_over_pi(conn.component({false, a}), conn.component({false, b}));
            c.antiholomorphic(a, b) = detail::bracket_over_pi(conn.component({true, a}), conn.component({true, b}));
            CRatPolynomial e = to_complex(jac[static_cast<size_t>(a)][static_cast<size_t>(b)].embed(nv, slots)) * k;
            Rational hinv(0);
            if (a < n && b == a + n) hinv = Rational(1, ch.form->h_int(a));
            if (a >= n && b == a - n) hinv = -Rational(1, ch.form->h_int(b));
            if (hinv != 0) e += CRatPolynomial::constant(nv, -CRational::i() * k * CRational(hinv));
            c.expected(a, b) = e;
        }
    return c;
}

// Max over sample points of |⟨Φ_{∂̄_j f} s⟩ − ⟨[∇̌_{Z̄_j}, Φ_f] s⟩|.
inline double intertwining_residual(const MirrorConnection& conn, const FourierPolynomial& f, int j,
                                    const MirrorSectionRep& s, const std::vector<std::vector<double>>& xs,
                                    const std::vector<std::vector<double>>& ts) {
    Direction dir{true, j};
    MirrorSectionRep lhs = mirror_operator_apply(dbar_partial(f, j), s);
    MirrorSectionRep rhs = connection_apply(conn, dir, mirror_operator_apply(f, s)) -
                           mirror_operator_apply(f, connection_apply(conn, dir, s));
    double worst = 0.0;
    for (const auto& x : xs)
        for (const auto& t : ts) worst = std::max(worst, std::abs(lhs.eval(x, t) - rhs.eval(x, t)));
    return worst;
}

}  // namespace bq
