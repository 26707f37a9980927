#include <gtest/gtest.h>

#include <random>

#include "branequant/fiber/dolbeault.hpp"
#include "branequant/verify/random.hpp"

using namespace bq;

namespace {

ChartPtr flat(std::vector<long> h, int k = 1) { return BraneChart::flat(std::move(h), k); }

// g = ∇φ with φ = ½x₀²x₁ + ⅓x₁³, so Dg is symmetric.
ChartPtr curved_chart_n1() {
    auto form = std::make_shared<const IntSkewForm>(standard_skew_form({2}));
    RatPolynomial g0(2), g1(2);
    g0.add_term({1, 1}, Rational(1));
    g1.add_term({2, 0}, Rational(1, 2));
    g1.add_term({0, 2}, Rational(1));
    return BraneChart::make("curved", form, {g0, g1}, {Rational(1, 3), Rational(-1, 4)}, 1);
}

double rel_diff(const FourierPolynomial& a, const FourierPolynomial& b) {
    return a.max_abs_diff(b) / std::max(1.0, std::max(a.max_abs_coeff(), b.max_abs_coeff()));
}

}  // namespace

TEST(Star, Unit) {
    std::mt19937_64 rng(1);
    auto c = flat({1, 2});
    auto one = FourierPolynomial::constant(c, 1.0);
    for (int t = 0; t < 10; ++t) {
        auto g = random_fourier(c, 2, 1, 4, rng);
        EXPECT_EQ(star_product(one, g, 0.37), g);
        EXPECT_EQ(star_product(g, one, 0.37), g);
    }
}

TEST(Star, TwoGeneratorPhase) {
    auto c = flat({1});
    auto f = FourierPolynomial::single_mode(c, {1, 0});
    auto g = FourierPolynomial::single_mode(c, {0, 1});
    for (double hbar : {0.0, 0.3, 1.0}) {
        auto p = star_product(f, g, hbar);
        ASSERT_EQ(p.modes().size(), 1u);
        cplx expect = std::exp(cplx(0, -pi * hbar));
        EXPECT_LT(std::abs(p.coefficient_at({1, 1}, {0.0, 0.0}) - expect), 1e-15);
    }
}

TEST(Star, CommutativeAtIntegerPoint) {
    std::mt19937_64 rng(2);
    for (auto h : std::vector<std::vector<long>>{{1}, {1, 1}}) {
        auto c = flat(h);
        for (int t = 0; t < 10; ++t) {
            auto f = random_fourier(c, 2, 1, 4, rng);
            auto g = random_fourier(c, 2, 1, 4, rng);
            EXPECT_LT(rel_diff(star_product(f, g, 1.0), star_product(g, f, 1.0)), 1e-13);
        }
    }
    // with h = 2 the phase e^{∓πiθ} at θ = 1/2 does not commute
    auto c2 = flat({2});
    auto f = FourierPolynomial::single_mode(c2, {1, 0});
    auto g = FourierPolynomial::single_mode(c2, {0, 1});
    EXPECT_GT(rel_diff(star_product(f, g, 1.0), star_product(g, f, 1.0)), 0.5);
}

TEST(Star, Associative) {
    std::mt19937_64 rng(3);
    for (auto h : std::vector<std::vector<long>>{{1}, {2}, {1, 2}}) {
        auto c = flat(h);
        for (int t = 0; t < 10; ++t) {
            auto f = random_fourier(c, 2, 1, 3, rng);
            auto g = random_fourier(c, 2, 1, 3, rng);
            auto k = random_fourier(c, 2, 1, 3, rng);
            double hb = 0.1 + 0.2 * t;
            EXPECT_LT(rel_diff(star_product(star_product(f, g, hb), k, hb), star_product(f, star_product(g, k, hb), hb)), 1e-12);
        }
    }
}

TEST(Star, ZeroHbarIsPointwise) {
    std::mt19937_64 rng(4);
    for (auto c : {flat({1}), curved_chart_n1()}) {
        auto f = random_fourier(c, 2, 2, 4, rng);
        auto g = random_fourier(c, 2, 2, 4, rng);
        auto p = star_product(f, g, 0.0);
        auto grid = default_eval_grid(c->dim());
        double worst = 0.0;
        for (const auto& x : grid.base_points)
            for (int a = 0; a < 16; ++a)
                for (int b = 0; b < 16; ++b) {
                    std::vector<double> y{a / 16.0, b / 16.0};
                    worst = std::max(worst, std::abs(p.evaluate(x, y) - f.evaluate(x, y) * g.evaluate(x, y)));
                }
        EXPECT_LE(worst, 1e-12);
    }
}

TEST(Star, LocalAlongBase) {
    std::mt19937_64 rng(5);
    auto c = flat({1, 2});
    std::vector<double> x0{0.3, -0.2, 0.7, 0.1};
    // every coefficient carries the factor (x_2 − 0.7)
    BasePolynomial vanish = BasePolynomial::linear(4, {0, 0, 1, 0}, -0.7);
    FourierPolynomial f(c);
    auto base = random_fourier(c, 2, 1, 4, rng);
    for (const auto& [m, p] : base.modes()) f.add(m, p * vanish);
    auto g = random_fourier(c, 2, 2, 4, rng);
    auto p = star_product(f, g, 0.43);
    for (const auto& [m, q] : p.modes()) EXPECT_LT(std::abs(FourierPolynomial::eval_base(q, x0)), 1e-12);
}

TEST(Star, ChartMismatch) {
    auto f = FourierPolynomial::single_mode(flat({1}), {1, 0});
    auto g = FourierPolynomial::single_mode(flat({2}), {1, 0});
    try {
        star_product(f, g, 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ChartMismatch);
    }
}

TEST(Bracket, GeneratorsAndAntisymmetry) {
    auto c = flat({1});
    auto f = FourierPolynomial::single_mode(c, {1, 0});
    auto g = FourierPolynomial::single_mode(c, {0, 1});
    auto b = poisson_bracket(f, g);
    // (1/2π)(2πi)²·1 = −2π
    EXPECT_LT(std::abs(b.coefficient_at({1, 1}, {0, 0}) - cplx(-2.0 * pi, 0.0)), 1e-13);
    std::mt19937_64 rng(6);
    auto r = random_fourier(c, 2, 1, 4, rng);
    EXPECT_LT(poisson_bracket(r, r).max_abs_coeff(), 1e-12);
}

TEST(Bracket, MatchesFiniteDifferenceOfDisplayedFormula) {
    // oracle: central differences of f, g in y at a point of a flat chart
    auto c = flat({2});
    std::mt19937_64 rng(7);
    auto f = random_fourier(c, 2, 1, 3, rng);
    auto g = random_fourier(c, 2, 1, 3, rng);
    std::vector<double> x{0.2, -0.1}, y{0.31, 0.77};
    const double e = 1e-5;
    auto dy = [&](const FourierPolynomial& p, int j) {
        auto yp = y, ym = y;
        yp[j] += e;
        ym[j] -= e;
        return (p.evaluate(x, yp) - p.evaluate(x, ym)) / (2 * e);
    };
    cplx fd = (dy(f, 0) * dy(g, 1) - dy(f, 1) * dy(g, 0)) / (2 * pi * 2.0);
    EXPECT_LT(std::abs(fd - poisson_bracket(f, g).evaluate(x, y)), 1e-5 * std::max(1.0, std::abs(fd)));
}

TEST(Bracket, Jacobi) {
    std::mt19937_64 rng(8);
    auto c = flat({1, 2});
    for (int t = 0; t < 20; ++t) {
        auto f = random_fourier(c, 2, 1, 3, rng);
        auto g = random_fourier(c, 2, 1, 3, rng);
        auto k = random_fourier(c, 2, 1, 3, rng);
        auto j = poisson_bracket(f, poisson_bracket(g, k)) + poisson_bracket(g, poisson_bracket(k, f)) +
                 poisson_bracket(k, poisson_bracket(f, g));
        double scale = poisson_bracket(f, poisson_bracket(g, k)).max_abs_coeff();
        EXPECT_LT(j.max_abs_coeff(), 1e-12 * std::max(1.0, scale));
    }
}

TEST(Defect, ClosedFormMatchesCommutator) {
    std::mt19937_64 rng(9);
    auto c = flat({1, 2});
    for (double hbar : {0.2, 0.1, 0.05}) {
        auto f = random_fourier(c, 2, 1, 3, rng);
        auto g = random_fourier(c, 2, 1, 3, rng);
        auto oracle = (1.0 / hbar) * star_commutator(f, g, hbar) - cplx(0, 1) * poisson_bracket(f, g);
        auto closed = semiclassical_defect_symbol(f, g, hbar);
        EXPECT_LT(oracle.max_abs_diff(closed), 1e-10 * std::max(1.0, oracle.max_abs_coeff()));
    }
}

TEST(Defect, TrivialCases) {
    auto c = flat({1});
    auto f = FourierPolynomial::single_mode(c, {1, 0});
    auto g = FourierPolynomial::single_mode(c, {-2, 0}, 0.5);
    EXPECT_EQ(semiclassical_defect(f, g, 0.1), 0.0);
    auto h = FourierPolynomial::single_mode(c, {0, 1});
    EXPECT_EQ(semiclassical_defect(f, h, 0.0), 0.0);
    EXPECT_EQ(star_commutator(f, h, 0.0).max_abs_coeff(), 0.0);
}

TEST(Defect, DecaysQuadratically) {
    // the commutator expansion is odd in ħ, so the defect is O(ħ²)
    auto c = flat({1});
    auto f = FourierPolynomial::single_mode(c, {1, 0});
    auto g = FourierPolynomial::single_mode(c, {0, 1});
    double d1 = semiclassical_defect(f, g, 0.1), d2 = semiclassical_defect(f, g, 0.05);
    EXPECT_NEAR(d2 / d1, 0.25, 0.01);
    EXPECT_NEAR(d1, 2.0 * std::abs(std::sin(pi * 0.1) / 0.1 - pi), 1e-12);
}

TEST(Dolbeault, ConstantsAndCoordinates) {
    auto c = curved_chart_n1();
    EXPECT_TRUE(dolbeault(DolbeaultForm::function(FourierPolynomial::constant(c, 3.0))).is_zero());
    // x-part of z^0 = x_0 − i h u^1: ∂̄_0 x_0 = ½ and the u^1 part contributes ½ by the chain rule
    FourierPolynomial x0(c);
    x0.add({0, 0}, BasePolynomial::variable(2, 0));
    EXPECT_LT(std::abs(dbar_partial(x0, 0).coefficient_at({0, 0}, {0, 0}) - 0.5), 1e-15);
    EXPECT_TRUE(dbar_partial(x0, 1).is_zero());
    // mode part: e^{2π m z^1/h} = e^{2π m x_1/h} e^{2πi m u^0}; a degree-D Taylor truncation
    // of the base factor is annihilated up to its top term
    const int m = 1, deg = 6;
    const double h = 2.0, a = 2 * pi * m / h;
    BasePolynomial taylor(2);
    double coef = 1.0;
    for (int p = 0; p <= deg; ++p) {
        taylor.add_term({0, p}, coef);
        coef *= a / (p + 1);
    }
    auto w = FourierPolynomial::single_mode(c, {m, 0}, taylor);
    auto r = dbar_partial(w, 1).coefficient({m, 0});
    for (const auto& [e, v] : r.terms()) {
        if (e[1] != deg) {
            EXPECT_LT(std::abs(v), 1e-14);
        }
    }
    double top = 1.0;
    for (int p = 1; p <= deg; ++p) top *= a / p;
    EXPECT_LT(std::abs(r.coefficient({0, deg}) - cplx(-pi * m / h * top)), 1e-12);
    EXPECT_TRUE(dbar_partial(w, 0).is_zero());
}

TEST(Dolbeault, VectorFieldsMatchFiniteDifferences) {
    auto c = curved_chart_n1();
    std::vector<double> x{0.4, -0.3}, y{0.12, 0.55};
    const double e = 1e-5;
    for (int j = 0; j < 2; ++j) {
        Eigen::VectorXcd v = dbar_vector_field_xy(*c, j, x);
        Eigen::VectorXcd dz = Eigen::VectorXcd::Zero(2), dzb = Eigen::VectorXcd::Zero(2);
        for (int dir = 0; dir < 4; ++dir) {
            auto xp = x, xm = x, yp = y, ym = y;
            if (dir < 2) {
                xp[dir] += e;
                xm[dir] -= e;
            } else {
                yp[dir - 2] += e;
                ym[dir - 2] -= e;
            }
            Eigen::VectorXcd d = (chart_complex_coordinates(*c, xp, yp) - chart_complex_coordinates(*c, xm, ym)) / (2 * e);
            dz += v(dir) * d;
            dzb += v(dir) * d.conjugate();
        }
        for (int a = 0; a < 2; ++a) {
            EXPECT_LT(std::abs(dz(a)), 1e-8);
            EXPECT_LT(std::abs(dzb(a) - (a == j ? 1.0 : 0.0)), 1e-8);
        }
    }
}

TEST(Dolbeault, SquaresToZero) {
    std::mt19937_64 rng(10);
    for (auto c : {flat({1, 2}), curved_chart_n1()}) {
        for (int t = 0; t < 20; ++t) {
            auto a = random_form(c, t % 2, 2, 3, rng);
            auto dd = dolbeault(dolbeault(a));
            double scale = 0;
            for (const auto& [i, f] : a.components()) scale = std::max(scale, f.max_abs_coeff());
            for (const auto& [i, f] : dd.components()) EXPECT_LT(f.max_abs_coeff(), 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST(Dolbeault, LeibnizAndGradedStar) {
    std::mt19937_64 rng(11);
    auto c = flat({1, 2});
    for (int t = 0; t < 20; ++t) {
        int p = t % 3, q = (t / 3) % 2;
        auto a = random_form(c, p, 2, 2, rng);
        auto b = random_form(c, q, 2, 2, rng);
        double hb = 0.25;
        auto lhs = dolbeault(graded_star(a, b, hb));
        auto rhs = graded_star(dolbeault(a), b, hb) + cplx(p % 2 ? -1.0 : 1.0) * graded_star(a, dolbeault(b), hb);
        EXPECT_LT(lhs.max_abs_diff(rhs), 1e-11);
        // graded commutativity at ħ = 0
        auto ab = graded_star(a, b, 0.0), ba = graded_star(b, a, 0.0);
        EXPECT_LT(ab.max_abs_diff(cplx((p * q) % 2 ? -1.0 : 1.0) * ba), 1e-12);
    }
    auto dz0 = DolbeaultForm::basis(c, {0}, FourierPolynomial::constant(c, 1.0));
    EXPECT_TRUE(graded_star(dz0, dz0, 0.5).is_zero());
    auto f = random_fourier(c, 2, 1, 3, rng), g = random_fourier(c, 2, 1, 3, rng);
    EXPECT_EQ(graded_star(DolbeaultForm::function(f), DolbeaultForm::function(g), 0.3).component({}), star_product(f, g, 0.3));
}

TEST(Transition, IdentityAndTranslation) {
    std::mt19937_64 rng(12);
    auto c = flat({1, 2});
    auto f = random_fourier(c, 2, 2, 4, rng);
    auto id = TwistedSymplectic::identity(c->form);
    std::vector<double> zero(4, 0.0), b{0.5, -0.25, 1.0, 0.0};
    EXPECT_LT(chart_transition_pullback(f, id, zero, zero).max_abs_diff(f), 1e-15);
    auto t = chart_transition_pullback(f, id, b, zero);
    for (const auto& [m, p] : f.modes()) {
        // oracle: shifted polynomial evaluated directly
        std::vector<double> xp{0.1, 0.2, -0.3, 0.4}, xs(4);
        for (int i = 0; i < 4; ++i) xs[i] = xp[i] + b[i];
        EXPECT_LT(std::abs(t.coefficient_at(m, xp) - f.coefficient_at(m, xs)), 1e-12);
    }
    EXPECT_EQ(t.modes().size(), f.modes().size());
}

TEST(Transition, StarEquivariance) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto h : std::vector<std::vector<long>>{{1}, {2}, {1, 2}}) {
        auto c = flat(h);
        const int d = c->dim();
        for (int t = 0; t < 20; ++t) {
            auto a = random_twisted_symplectic(c->form, rng, 2);
            std::vector<double> b(d), cc(d);
            for (int i = 0; i < d; ++i) {
                b[i] = u(rng);
                cc[i] = u(rng);
            }
            auto f = random_fourier(c, 2, 1, 3, rng), g = random_fourier(c, 2, 1, 3, rng);
            auto lhs = star_product(chart_transition_pullback(f, a, b, cc), chart_transition_pullback(g, a, b, cc), 0.3);
            auto rhs = chart_transition_pullback(star_product(f, g, 0.3), a, b, cc);
            EXPECT_LT(rel_diff(lhs, rhs), 1e-11);
            auto lb = poisson_bracket(chart_transition_pullback(f, a, b, cc), chart_transition_pullback(g, a, b, cc));
            EXPECT_LT(rel_diff(lb, chart_transition_pullback(poisson_bracket(f, g), a, b, cc)), 1e-11);
        }
    }
}

TEST(Transition, RejectsNonStabilizer) {
    auto c = flat({1, 2});
    auto f = FourierPolynomial::single_mode(c, {1, 0, 0, 0});
    IntMatrix bad = IntMatrix::identity(4);
    bad(0, 3) = 1;
    std::vector<double> z(4, 0.0);
    try {
        chart_transition_pullback(f, bad, z, z);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotInStabilizer);
    }
}
