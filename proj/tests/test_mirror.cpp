#include <gtest/gtest.h>

#include <random>

#include "branequant/mirror/connection.hpp"
#include "branequant/mirror/reconstruct.hpp"
#include "branequant/theta/weil_brezin.hpp"
#include "branequant/verify/random.hpp"

using namespace bq;

namespace {

SiegelPoint om1(cplx w) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = w;
    return SiegelPoint::make(m);
}

ChartPtr chart_with(std::vector<long> h, int k, std::vector<RatPolynomial> g = {}, std::vector<Rational> gc = {}) {
    auto form = std::make_shared<const IntSkewForm>(standard_skew_form(h));
    return BraneChart::make("test", form, std::move(g), std::move(gc), k);
}

// g = S x with S symmetric, entries in {-1, 0, 1}/2.
std::vector<RatPolynomial> linear_g(int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(-2, 2);
    std::vector<std::vector<Rational>> s(static_cast<size_t>(d), std::vector<Rational>(static_cast<size_t>(d)));
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) s[static_cast<size_t>(a)][static_cast<size_t>(b)] = s[static_cast<size_t>(b)][static_cast<size_t>(a)] = Rational(pick(rng), 2);
    std::vector<RatPolynomial> g;
    for (int a = 0; a < d; ++a) {
        RatPolynomial p(d);
        for (int b = 0; b < d; ++b) {
            std::vector<int> e(static_cast<size_t>(d), 0);
            e[static_cast<size_t>(b)] = 1;
            p.add_term(e, s[static_cast<size_t>(a)][static_cast<size_t>(b)]);
        }
        g.push_back(p);
    }
    return g;
}

// Δ = −(1/(8πY)) (∂₂² + (2 Re Ω / h) ∂₁∂₂ + (|Ω|²/h²) ∂₁²) for n = 1, applied by
// fourth-order periodic central differences on an N×N grid.
double fd_heat_eigenvalue(const Mode& m, cplx om, double h, int npts) {
    const double step = 1.0 / npts;
    std::vector<cplx> f(static_cast<size_t>(npts * npts));
    auto at = [&](int i, int j) -> cplx& { return f[static_cast<size_t>(((i % npts + npts) % npts) * npts + (j % npts + npts) % npts)]; };
    for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j) at(i, j) = std::polar(1.0, 2.0 * pi * (m[0] * i + m[1] * j) * step);
    auto d1 = [&](int dir, int i, int j) {
        auto v = [&](int s) { return dir == 0 ? at(i + s, j) : at(i, j + s); };
        return (-v(2) + 8.0 * v(1) - 8.0 * v(-1) + v(-2)) / (12.0 * step);
    };
    auto d2 = [&](int dir, int i, int j) {
        auto v = [&](int s) { return dir == 0 ? at(i + s, j) : at(i, j + s); };
        return (-v(2) + 16.0 * v(1) - 30.0 * v(0) + 16.0 * v(-1) - v(-2)) / (12.0 * step * step);
    };
    const int i0 = 37, j0 = 101;
    cplx d12 = (-d1(1, i0 + 2, j0) + 8.0 * d1(1, i0 + 1, j0) - 8.0 * d1(1, i0 - 1, j0) + d1(1, i0 - 2, j0)) / (12.0 * step);
    const double y = om.imag();
    cplx lap = -(d2(1, i0, j0) + 2.0 * om.real() / h * d12 + std::norm(om) / (h * h) * d2(0, i0, j0)) / (8.0 * pi * y);
    return (lap / at(i0, j0)).real();
}

ThetaFrame frame_at(ChartPtr c, std::vector<double> x, std::vector<double> yc, SiegelPoint om) {
    return ThetaFrame::make(FiberPoint::make(std::move(c), std::move(x), std::move(yc)), std::move(om));
}

}  // namespace

TEST(HeatTwist, Examples) {
    auto form = standard_skew_form({1});
    EXPECT_EQ(heat_twist_scalar({0, 0}, SiegelPoint::scalar_i(1), 1, form), cplx(1.0));
    EXPECT_NEAR(std::abs(heat_twist_scalar({1, 0}, SiegelPoint::scalar_i(1), 1, form) - std::exp(pi / 2)), 0.0, 1e-13);
}

TEST(HeatTwist, FiniteDifferenceOracle) {
    struct Case { Mode m; cplx om; long h; int k; };
    for (const auto& c : {Case{{1, 0}, cplx(0, 1), 1, 1}, Case{{0, 1}, cplx(0, 1), 1, 1}, Case{{1, -2}, cplx(0.3, 1.2), 2, 2},
                          Case{{2, 1}, cplx(-0.5, 0.8), 1, 3}}) {
        double lam = fd_heat_eigenvalue(c.m, c.om, static_cast<double>(c.h), 512);
        cplx expect = std::exp(lam / c.k);
        cplx got = heat_twist_scalar(c.m, om1(c.om), c.k, standard_skew_form({c.h}));
        EXPECT_LE(std::abs(got - expect) / std::abs(expect), 1e-6);
    }
}

TEST(HeatTwist, BackwardHeatModulus) {
    Eigen::MatrixXcd om = Eigen::MatrixXcd::Zero(2, 2);
    om(0, 0) = cplx(0, 0.7);
    om(1, 1) = cplx(0, 1.9);
    auto form = std::make_shared<const IntSkewForm>(standard_skew_form({1, 2}));
    HeatTwist ht(SiegelPoint::make(om), 2, form);
    std::vector<long> c(4, 0);
    detail::for_box(c, 2, [&](const std::vector<long>& v) {
        Mode m(v.begin(), v.end());
        cplx mult = ht.multiplier(m);
        bool zero = std::all_of(m.begin(), m.end(), [](int x) { return x == 0; });
        if (zero) EXPECT_EQ(mult, cplx(1.0));
        else EXPECT_GT(std::abs(mult), 1.0);
        Mode neg = m;
        for (auto& x : neg) x = -x;
        EXPECT_NEAR(std::abs(ht.multiplier(neg) - std::conj(mult)), 0.0, 1e-12 * std::abs(mult));
    });
}

TEST(Toeplitz, UnitAndChartMismatch) {
    auto c = BraneChart::flat({2}, 2);
    auto fr = frame_at(c, {0.1, 0.2}, {0.3, 0.4}, SiegelPoint::scalar_i(1));
    auto one = FourierPolynomial::constant(c, 1.0);
    EXPECT_EQ(twisted_toeplitz_matrix(one, fr).entries, Eigen::MatrixXcd::Identity(4, 4));
    auto other = BraneChart::flat({1}, 2);
    EXPECT_THROW(twisted_toeplitz_matrix(FourierPolynomial::constant(other, 1.0), fr), Error);
    auto q = toeplitz_quadrature_oracle(one, fr, 64);
    EXPECT_LE((q.entries - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_THROW(toeplitz_quadrature_oracle(one, fr, 4), Error);
}

TEST(Toeplitz, CyclicShiftExample) {
    // n=1, h=1, k=2, f = e^{2πi u¹}, y̌ = 0, ǧ = 0: σ₀ ↦ σ₁, σ₁ ↦ σ₀ (q̃ = 1, ǔ₂ = 0)
    auto c = BraneChart::flat({1}, 2);
    auto fr = frame_at(c, {0.0, 0.0}, {0.0, 0.0}, SiegelPoint::scalar_i(1));
    auto m = twisted_toeplitz_matrix(FourierPolynomial::single_mode(c, {1, 0}), fr).entries;
    Eigen::MatrixXcd expect(2, 2);
    expect << 0.0, 1.0, 1.0, 0.0;
    EXPECT_LE((m - expect).cwiseAbs().maxCoeff(), 1e-15);
    auto q = toeplitz_quadrature_oracle(FourierPolynomial::single_mode(c, {1, 0}), fr, 128);
    EXPECT_LE((q.entries - expect).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Toeplitz, ClosedFormMatchesQuadrature) {
    for (long h : {1, 2})
        for (cplx w : {cplx(0, 1), cplx(1, 2)}) {
            auto c = chart_with({h}, 2, {}, {Rational(1, 3), Rational(1, 5)});
            auto fr = frame_at(c, {0.1, -0.2}, {0.35, -0.15}, om1(w));
            const int g = 128;
            auto basis = sample_theta_basis(fr, g);
            for (Mode m : {Mode{1, 0}, Mode{0, 1}, Mode{-1, 2}, Mode{2, -1}, Mode{2, 2}}) {
                auto f = FourierPolynomial::single_mode(c, m, cplx(0.6, -0.8));
                auto cf = twisted_toeplitz_matrix(f, fr);
                auto qd = toeplitz_quadrature_oracle(f, fr, g, basis);
                EXPECT_LE((cf.entries - qd.entries).cwiseAbs().maxCoeff(), 1e-6) << "h=" << h << " Ω=" << w << " m=" << m[0] << "," << m[1];
            }
        }
}

TEST(Toeplitz, QuadratureHermiticity) {
    auto c = chart_with({1}, 2, {}, {Rational(1, 4), Rational(0)});
    auto fr = frame_at(c, {0.0, 0.1}, {0.2, 0.6}, SiegelPoint::scalar_i(1));
    std::mt19937_64 rng(12);
    auto f = random_fourier(c, 1, 0, 3, rng);
    auto basis = sample_theta_basis(fr, 64);
    auto a = toeplitz_quadrature_oracle(f, fr, 64, basis).entries;
    auto b = toeplitz_quadrature_oracle(f.conj(), fr, 64, basis).entries;
    EXPECT_LE((b - a.adjoint()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Toeplitz, OmegaIndependenceAfterBks) {
    auto c = chart_with({1}, 2, {}, {Rational(1, 3), Rational(0)});
    auto p = FiberPoint::make(c, {0.05, 0.1}, {0.3, 0.2});
    auto fa = ThetaFrame::make(p, SiegelPoint::scalar_i(1));
    auto fb = ThetaFrame::make(p, om1(cplx(0.4, 1.3)));
    std::mt19937_64 rng(8);
    auto f = random_fourier(c, 1, 0, 3, rng);
    const int g = 128;
    auto ta = toeplitz_quadrature_oracle(f, fa, g).entries;
    auto tb = toeplitz_quadrature_oracle(f, fb, g).entries;
    Eigen::MatrixXcd b = bks_quadrature_matrix(fa, fb, g);
    Eigen::MatrixXcd conj = b * ta * b.inverse();
    EXPECT_LE((conj - tb).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Mirror, HomomorphismFunctions) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (long h : {1, 2})
        for (int k : {1, 2, 3}) {
            auto c = chart_with({h}, k, {}, {Rational(1, 7), Rational(-2, 5)});
            std::vector<ThetaFrame> pts;
            for (int s = 0; s < 5; ++s) pts.push_back(frame_at(c, {u(rng), u(rng)}, {u(rng), u(rng)}, SiegelPoint::scalar_i(1)));
            for (int t = 0; t < 5; ++t) {
                auto f = random_fourier(c, 3, 2, 4, rng);
                auto g = random_fourier(c, 3, 2, 4, rng);
                EXPECT_LE(mirror_homomorphism_check(f, g, pts), 1e-10);
            }
            auto one = FourierPolynomial::constant(c, 2.5);
            EXPECT_LE(mirror_homomorphism_check(one, random_fourier(c, 2, 1, 3, rng), pts), 1e-14);
        }
}

TEST(Mirror, HomomorphismForms) {
    std::mt19937_64 rng(22);
    auto c = chart_with({1, 2}, 2);
    std::vector<ThetaFrame> pts{frame_at(c, {0.1, 0.2, -0.1, 0.0}, {0.3, 0.1, 0.7, -0.2}, SiegelPoint::scalar_i(2))};
    for (int t = 0; t < 5; ++t) {
        auto a = random_form(c, 1, 1, 1, rng);
        auto b = random_form(c, 2, 1, 1, rng);
        EXPECT_LE(mirror_homomorphism_check(a, b, pts), 1e-10);
    }
}

TEST(Mirror, ShiftFormMatchesMatrices) {
    // Φ_f on ⟨σ_l⟩ re-expanded by Weil–Brezin equals Σ_l̃ M[l̃, l] σ_l̃.
    std::mt19937_64 rng(5);
    auto c = chart_with({2}, 2, {}, {Rational(1, 3), Rational(1, 6)});
    auto p = FiberPoint::make(c, {0.1, 0.3}, {0.2, -0.45});
    auto fr = ThetaFrame::make(p, om1(cplx(0.2, 1.1)));
    auto uc = p.ucheck();
    auto f = random_fourier(c, 2, 1, 3, rng);
    auto m = twisted_toeplitz_matrix(f, fr).entries;
    auto idx = fr.indices();
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (size_t col = 0; col < idx.size(); ++col) {
        auto data = MirrorSectionRep::gaussian(1, {uc[0] - idx[col][0]}, 60.0);
        auto img = weil_brezin_expand(mirror_operator_apply(f, data), fr);
        for (int t = 0; t < 5; ++t) {
            std::vector<double> y{u(rng), u(rng)};
            cplx expect = 0.0;
            for (size_t row = 0; row < idx.size(); ++row)
                expect += m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) * theta_basis_eval(fr, idx[row], y);
            EXPECT_LE(std::abs(img(y) - expect), 1e-8);
        }
    }
}

TEST(Connection, FlatDirectionIsPureDerivative) {
    auto c = chart_with({1}, 1);
    auto conn = MirrorConnection::make(c);
    auto s = MirrorSectionRep::gaussian(1, {0.3}, 2.0);
    auto z = connection_apply(conn, {false, 0}, s);
    auto expect = cplx(0.5) * s.derivative(0) + cplx(0, -0.5) * s.derivative(2);
    for (double t : {-0.5, 0.0, 0.4}) EXPECT_NEAR(std::abs(z.eval({0.1, 0.2}, {t}) - expect.eval({0.1, 0.2}, {t})), 0.0, 1e-14);
}

TEST(Connection, CurvatureExact) {
    std::mt19937_64 rng(30);
    for (int n : {1, 2})
        for (long h : {1, 2})
            for (int k : {1, 2})
                for (bool lin : {false, true}) {
                    std::vector<long> hs(static_cast<size_t>(n), 1);
                    hs.back() = h;
                    auto c = chart_with(hs, k, lin ? linear_g(2 * n, rng) : std::vector<RatPolynomial>{}, {});
                    auto curv = curvature_form(MirrorConnection::make(c));
                    EXPECT_TRUE(curv.matches_expected());
                    EXPECT_TRUE(curv.pure_parts_vanish());
                }
    auto flat = curvature_form(MirrorConnection::make(chart_with({1}, 1)));
    EXPECT_EQ(flat.mixed(0, 1), CRatPolynomial::constant(3, CRational(Rational(0), Rational(-1))));
    EXPECT_EQ(flat.mixed(1, 0), CRatPolynomial::constant(3, CRational(Rational(0), Rational(1))));
    EXPECT_TRUE(flat.mixed(0, 0).is_zero());
}

TEST(Connection, CurvatureDiagonalLinear) {
    RatPolynomial g0(2), g1(2);
    g0.add_term({1, 0}, Rational(1));
    g1.add_term({0, 1}, Rational(1));
    auto curv = curvature_form(MirrorConnection::make(chart_with({1}, 3, {g0, g1})));
    EXPECT_TRUE(curv.matches_expected());
    EXPECT_EQ(curv.mixed(0, 0), CRatPolynomial::constant(3, CRational(3)));
    EXPECT_EQ(curv.mixed(1, 1), CRatPolynomial::constant(3, CRational(3)));
}

TEST(Connection, AsymmetricJacobianLeavesPureParts) {
    RatPolynomial g0(2), g1(2);
    g0.add_term({0, 1}, Rational(1));  // Dg = [[0,1],[0,0]]
    auto curv = curvature_form(MirrorConnection::make(chart_with({1}, 1, {g0, g1})));
    EXPECT_FALSE(curv.pure_parts_vanish());
}

TEST(Connection, DolbeaultIntertwining) {
    std::mt19937_64 rng(40);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int n : {1, 2}) {
        std::vector<long> hs(static_cast<size_t>(n), 1);
        hs.back() = 2;
        auto c = chart_with(hs, 2, linear_g(2 * n, rng), std::vector<Rational>(static_cast<size_t>(2 * n), Rational(1, 3)));
        auto conn = MirrorConnection::make(c);
        std::vector<std::vector<double>> xs, ts;
        for (int s = 0; s < 4; ++s) {
            std::vector<double> x(static_cast<size_t>(2 * n)), t(static_cast<size_t>(n));
            for (auto& v : x) v = u(rng);
            for (auto& v : t) v = 2.0 * u(rng);
            xs.push_back(x);
            ts.push_back(t);
        }
        for (int trial = 0; trial < 6; ++trial) {
            auto f = FourierPolynomial::single_mode(c, random_mode(2 * n, 2, rng), random_base_polynomial(2 * n, 2, rng));
            MirrorSectionRep s(n);
            std::vector<double> center(static_cast<size_t>(n)), alpha(static_cast<size_t>(n));
            for (auto& v : center) v = u(rng);
            for (auto& v : alpha) v = u(rng);
            s.add_term({random_base_polynomial(3 * n, 1, rng), alpha, 1.5, center});
            for (int j = 0; j < 2 * n; ++j) EXPECT_LE(intertwining_residual(conn, f, j, s, xs, ts), 1e-10) << "n=" << n << " j=" << j;
        }
    }
}

TEST(Reconstruct, ZeroAndBandUnknown) {
    auto c = chart_with({1}, 2);
    auto fam = toeplitz_family(FourierPolynomial(c), 2);
    EXPECT_TRUE(reconstruct_symbol(fam).is_zero());
    fam.band.reset();
    EXPECT_THROW(reconstruct_symbol(fam), Error);
}

TEST(Reconstruct, RoundTrip) {
    std::mt19937_64 rng(50);
    for (long h : {1, 2})
        for (int k : {1, 2}) {
            auto c = chart_with({h}, k, {}, {Rational(1, 5), Rational(2, 3)});
            for (int t = 0; t < 3; ++t) {
                auto f = random_fourier(c, 2, 2, 4, rng);
                auto back = reconstruct_symbol(toeplitz_family(f, 2));
                EXPECT_LE(back.max_abs_diff(f), 1e-12);
            }
        }
}
