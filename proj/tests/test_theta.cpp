#include <gtest/gtest.h>

#include <random>

#include "branequant/theta/bks.hpp"
#include "branequant/theta/weil_brezin.hpp"

using namespace bq;

namespace {

ChartPtr flat_chart(long h, int k, Rational g0 = 0, Rational g1 = 0) {
    auto form = std::make_shared<const IntSkewForm>(standard_skew_form({h}));
    return BraneChart::make("flat", form, {}, {g0, g1}, k);
}

ChartPtr curved_chart(long h, int k) {
    auto form = std::make_shared<const IntSkewForm>(standard_skew_form({h}));
    RatPolynomial g0(2), g1(2);
    g0.add_term({1, 1}, Rational(1));
    g1.add_term({2, 0}, Rational(1, 2));
    g1.add_term({0, 2}, Rational(1));
    return BraneChart::make("curved", form, {g0, g1}, {Rational(1, 3), Rational(-1, 4)}, k);
}

SiegelPoint om1(cplx w) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = w;
    return SiegelPoint::make(m);
}

// Jacobi theta θ(z; τ) = Σ e^{πin²τ + 2πinz} via the triple product.
cplx jacobi_triple_product(cplx z, cplx tau) {
    const cplx p = std::exp(I * pi * tau);
    const cplx w = std::exp(2.0 * I * pi * z);
    cplx acc = 1.0;
    cplx p2m = 1.0;
    for (int m = 1; m < 80; ++m) {
        const cplx podd = p2m * p;  // p^{2m−1}
        p2m *= p * p;
        acc *= (1.0 - p2m) * (1.0 + podd * w) * (1.0 + podd / w);
    }
    return acc;
}

MirrorSectionRep random_section(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), gam(2.0, 4.0);
    MirrorSectionRep s(1);
    const int terms = 1 + static_cast<int>(rng() % 2);
    for (int t = 0; t < terms; ++t) {
        BasePolynomial p(3);
        p.add_term({0, 0, 0}, cplx(u(rng), u(rng)));
        p.add_term({0, 0, 1}, cplx(u(rng), u(rng)));
        p.add_term({1, 0, 2}, cplx(u(rng), u(rng)) * 0.5);
        s.add_term({p, {u(rng)}, gam(rng), {1.5 * u(rng)}});
    }
    return s;
}

}  // namespace

TEST(ThetaFrame, DimensionLaw) {
    auto c = BraneChart::flat({2}, 2);
    auto f = ThetaFrame::make(FiberPoint::make(c, {0.0, 0.0}, {0.0, 0.0}), SiegelPoint::scalar_i(1));
    EXPECT_EQ(f.dim(), 4);
    EXPECT_EQ(f.indices().size(), 4u);
    auto c2 = BraneChart::flat({1, 3}, 2);
    auto f2 = ThetaFrame::make(FiberPoint::make(c2, {0, 0, 0, 0}, {0, 0, 0, 0}), SiegelPoint::scalar_i(2));
    EXPECT_EQ(f2.dim(), 12);
    EXPECT_EQ(f2.indices().size(), 12u);
    EXPECT_EQ(f2.linear_index({1, 5}), 11);
    EXPECT_THROW(f2.linear_index({2, 0}), Error);
}

TEST(ThetaFrame, GaussianEnvelopeExamples) {
    auto form = standard_skew_form({1});
    Eigen::VectorXcd a(1), b(1);
    a << 0.0;
    b << 0.0;
    EXPECT_NEAR(std::abs(gaussian_envelope(a, b, SiegelPoint::scalar_i(1), 1, form) - 1.0), 0.0, 1e-15);
    a << 1.0;
    EXPECT_NEAR(std::abs(gaussian_envelope(a, b, SiegelPoint::scalar_i(1), 1, form) - std::exp(-pi)), 0.0, 1e-15);
    double prev = 2.0;
    for (double r = 0.0; r < 3.0; r += 0.25) {
        a << r;
        double m = std::abs(gaussian_envelope(a, b, SiegelPoint::scalar_i(1), 1, form));
        EXPECT_LT(m, prev);
        prev = m;
    }
}

TEST(ThetaBasis, QuasiPeriodicity) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (auto chart : {flat_chart(1, 1, Rational(1, 5), Rational(2, 7)), curved_chart(2, 2)}) {
        auto frame = ThetaFrame::make(FiberPoint::make(chart, {0.1, -0.2}, {0.3, 0.7}), SiegelPoint::scalar_i(1));
        for (const auto& l : frame.indices())
            for (std::vector<long> lam : {std::vector<long>{1, 0}, std::vector<long>{0, 1}, std::vector<long>{-1, 2}})
                for (int t = 0; t < 50; ++t) {
                    std::vector<double> y{u(rng), u(rng)};
                    std::vector<double> ys{y[0] + lam[0], y[1] + lam[1]};
                    cplx lhs = theta_basis_eval(frame, l, ys);
                    cplx rhs = quasi_periodicity_factor(frame, lam, y) * theta_basis_eval(frame, l, y);
                    EXPECT_LE(std::abs(lhs - rhs), 1e-10);
                }
    }
}

TEST(ThetaBasis, JacobiTripleProduct) {
    auto chart = flat_chart(1, 1);
    auto frame = ThetaFrame::make(FiberPoint::make(chart, {0.0, 0.0}, {0.0, 0.0}), SiegelPoint::scalar_i(1));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> y{u(rng), u(rng)};
        cplx expect = std::exp(-pi * y[1] * y[1]) * jacobi_triple_product(cplx(y[0], -y[1]), I);
        EXPECT_LE(std::abs(theta_basis_eval(frame, {0}, y) - expect), 1e-8);
    }
}

TEST(ThetaBasis, TruncationConvergence) {
    auto chart = flat_chart(1, 1);
    auto frame = ThetaFrame::make(FiberPoint::make(chart, {0.0, 0.0}, {0.2, 0.1}), om1(cplx(0.1, 0.05)), 40);
    std::vector<double> y{0.31, 0.17};
    cplx ref = ThetaEvaluator(frame)({0}, y);
    std::vector<double> errs;
    for (int q = 2; q <= 10; q += 2) {
        auto f = frame;
        f.truncation = q;
        errs.push_back(std::abs(ThetaEvaluator(f)({0}, y) - ref));
        EXPECT_LE(errs.back(), f.tail_bound());
    }
    for (size_t i = 2; i < errs.size(); ++i) {
        if (errs[i] < 1e-14) break;
        EXPECT_LT(errs[i] / errs[i - 1], errs[i - 1] / errs[i - 2]);
    }
}

TEST(Pairing, HalfFormFactor) {
    EXPECT_NEAR(std::abs(half_form_factor(SiegelPoint::scalar_i(1), SiegelPoint::scalar_i(1)) - std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(half_form_factor(SiegelPoint::scalar_i(2), SiegelPoint::scalar_i(2)) - 2.0), 0.0, 1e-14);
    // n = 2 agrees with the principal root of the determinant near the scalar case
    Eigen::MatrixXcd a(2, 2), b(2, 2);
    a << cplx(0.2, 1.1), cplx(0.1, 0.2), cplx(0.1, 0.2), cplx(-0.3, 0.9);
    b << cplx(-0.1, 1.3), cplx(0.0, -0.1), cplx(0.0, -0.1), cplx(0.2, 0.8);
    cplx f = half_form_factor(SiegelPoint::make(a), SiegelPoint::make(b));
    Eigen::MatrixXcd m = (a - b.conjugate()) / I;
    EXPECT_NEAR(std::abs(f * f - m.determinant()), 0.0, 1e-13);
    EXPECT_GT(f.real(), 0.0);
}

TEST(Pairing, Orthonormality) {
    for (long h : {1, 2})
        for (int k : {1, 2}) {
            auto chart = flat_chart(h, k, Rational(1, 3), Rational(-1, 5));
            auto p = FiberPoint::make(chart, {0.2, -0.1}, {0.37, -0.61});
            auto fa = ThetaFrame::make(p, SiegelPoint::scalar_i(1));
            auto fb = ThetaFrame::make(p, om1(cplx(0.3, 1.2)));
            for (const auto& [x, y] : {std::pair{fa, fa}, std::pair{fa, fb}, std::pair{fb, fb}}) {
                Eigen::MatrixXcd g = theta_gram(x, y, 256);
                Eigen::MatrixXcd e = g - Eigen::MatrixXcd::Identity(g.rows(), g.cols());
                EXPECT_LE(e.cwiseAbs().maxCoeff(), 1e-6) << "h=" << h << " k=" << k;
            }
        }
}

TEST(Pairing, QuadratureUnderflow) {
    FiberSampler one = [](const std::vector<double>&) { return cplx(1.0); };
    EXPECT_THROW(pairing_quadrature(one, one, SiegelPoint::scalar_i(1), SiegelPoint::scalar_i(1), 4), Error);
    EXPECT_NEAR(std::abs(pairing_quadrature(one, one, SiegelPoint::scalar_i(1), SiegelPoint::scalar_i(1), 8) - std::sqrt(2.0)), 0.0, 1e-14);
}

TEST(WeilBrezin, ZeroAndRoundTrip) {
    for (auto chart : {flat_chart(1, 1, Rational(1, 4), Rational(0)), curved_chart(2, 2)}) {
        auto p = FiberPoint::make(chart, {0.1, 0.15}, {0.4, -0.3});
        auto frame = ThetaFrame::make(p, om1(cplx(0.2, 0.9)));
        auto zero = weil_brezin_expand(MirrorSectionRep(1), frame);
        EXPECT_EQ(zero({0.3, 0.4}), cplx(0.0));
        auto uc = p.ucheck();
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (const auto& l : frame.indices()) {
            auto data = MirrorSectionRep::gaussian(1, {uc[0] - l[0]}, 40.0);
            auto s = weil_brezin_expand(data, frame);
            for (int t = 0; t < 10; ++t) {
                std::vector<double> y{u(rng), u(rng)};
                EXPECT_LE(std::abs(s(y) - theta_basis_eval(frame, l, y)), 1e-8);
            }
        }
    }
}

TEST(WeilBrezin, LinearityAndQuasiPeriodicity) {
    auto chart = curved_chart(1, 2);
    auto frame = ThetaFrame::make(FiberPoint::make(chart, {-0.2, 0.1}, {0.1, 0.2}), SiegelPoint::scalar_i(1));
    std::mt19937_64 rng(3);
    auto a = random_section(rng), b = random_section(rng);
    const cplx c(0.7, -1.3);
    auto sa = weil_brezin_expand(a, frame), sb = weil_brezin_expand(b, frame);
    auto sab = weil_brezin_expand(a + c * b, frame);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> y{u(rng), u(rng)};
        cplx lin = sa(y) + c * sb(y);
        EXPECT_LE(std::abs(sab(y) - lin), 1e-12 * (1.0 + std::abs(lin)));
        std::vector<double> ys{y[0] + 1.0, y[1] - 1.0};
        EXPECT_LE(std::abs(sa(ys) - quasi_periodicity_factor(frame, {1, -1}, y) * sa(y)), 1e-10);
    }
}

TEST(WeilBrezin, TruncationTooSmall) {
    auto chart = flat_chart(1, 1);
    auto frame = ThetaFrame::make(FiberPoint::make(chart, {0.0, 0.0}, {0.0, 0.0}), SiegelPoint::scalar_i(1), 1);
    EXPECT_THROW(weil_brezin_expand(MirrorSectionRep::gaussian(1, {0.0}, 1.0), frame), Error);
    frame.truncation = 10;
    EXPECT_LE(weil_brezin_expand(MirrorSectionRep::gaussian(1, {0.0}, 1.0), frame).tail_bound(), 1e-8);
}

TEST(Pairing, ClosedFormMatchesQuadrature) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 20; ++t) {
        const long h = 1 + t % 2;
        const int k = 1 + (t / 2) % 2;
        auto chart = t % 3 == 0 ? curved_chart(h, k) : flat_chart(h, k, Rational(1, 7), Rational(2, 9));
        auto p = FiberPoint::make(chart, {u(rng), u(rng)}, {u(rng), u(rng)});
        auto om = t % 4 == 0 ? om1(cplx(0.25, 0.8)) : SiegelPoint::scalar_i(1);
        auto omp = t % 5 == 0 ? om1(cplx(-0.3, 1.1)) : om;
        auto fa = ThetaFrame::make(p, om), fb = ThetaFrame::make(p, omp);
        auto a = random_section(rng), b = random_section(rng);
        auto sa = weil_brezin_expand(a, fa);
        auto sb = weil_brezin_expand(b, fb);
        cplx quad = pairing_quadrature(std::cref(sa), std::cref(sb), om, omp, 128);
        cplx closed = mirror_pairing_closed_form(a, b, p);
        EXPECT_LE(std::abs(quad - closed), 1e-6) << "pair " << t;
    }
}

TEST(Bks, IdentityCompositionAndErrors) {
    auto chart = flat_chart(2, 2);
    auto p = FiberPoint::make(chart, {0.1, 0.2}, {0.3, 0.4});
    auto f1 = ThetaFrame::make(p, SiegelPoint::scalar_i(1));
    auto f2 = ThetaFrame::make(p, om1(cplx(0.4, 1.5)));
    auto f3 = ThetaFrame::make(p, om1(cplx(-0.7, 0.6)));
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 5; ++t) {
        Eigen::VectorXcd c(4);
        for (int i = 0; i < 4; ++i) c(i) = cplx(nd(rng), nd(rng));
        auto s = QuantumState::make(f1, c);
        EXPECT_EQ(bks_transform(s, f1).coeffs, s.coeffs);
        auto direct = bks_transform(s, f3);
        auto composed = bks_transform(bks_transform(s, f2), f3);
        EXPECT_EQ(direct.coeffs, composed.coeffs);
        EXPECT_EQ(direct.norm(), s.norm());
    }
    auto q = FiberPoint::make(chart, {0.1, 0.2}, {0.3, 0.5});
    EXPECT_THROW(bks_transform(QuantumState::make(f1, Eigen::VectorXcd::Zero(4)), ThetaFrame::make(q, SiegelPoint::scalar_i(1))), Error);
    EXPECT_THROW(QuantumState::make(f1, Eigen::VectorXcd::Zero(3)), Error);
}

TEST(Bks, QuadratureMatrixIsIdentity) {
    for (long h : {1, 2}) {
        auto chart = flat_chart(h, 2, Rational(1, 2), Rational(0));
        auto p = FiberPoint::make(chart, {0.0, 0.3}, {0.25, -0.4});
        auto from = ThetaFrame::make(p, om1(cplx(0.5, 0.7)));
        auto to = ThetaFrame::make(p, om1(cplx(-0.2, 1.4)));
        Eigen::MatrixXcd m = bks_quadrature_matrix(from, to, 256);
        EXPECT_LE((m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(Bks, ThetaCoefficientsOfState) {
    auto chart = flat_chart(1, 2);
    auto p = FiberPoint::make(chart, {0.0, 0.0}, {0.1, 0.2});
    auto f = ThetaFrame::make(p, SiegelPoint::scalar_i(1));
    Eigen::VectorXcd c(2);
    c << cplx(0.3, -1.0), cplx(2.0, 0.5);
    auto st = QuantumState::make(f, c);
    Eigen::VectorXcd back = theta_coefficients(std::cref(st), f, 128);
    EXPECT_LE((back - c).cwiseAbs().maxCoeff(), 1e-10);
}
