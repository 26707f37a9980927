#pragma once

#include <Eigen/Dense>
#include <random>

#include "branequant/lattice/skew_form.hpp"

namespace bq {

inline constexpr double kSiegelPositivityTol = 1e-12;

struct SiegelPoint {
    Eigen::MatrixXcd omega;

    int n() const { return static_cast<int>(omega.rows()); }

    static SiegelPoint make(const Eigen::MatrixXcd& om) {
        SiegelPoint p{om};
        p.validate();
        return p;
    }
    static SiegelPoint scalar_i(int n, double im = 1.0) {
        return make(Eigen::MatrixXcd::Identity(n, n) * cplx(0.0, im));
    }

    double min_imag_eigenvalue() const {
        Eigen::MatrixXd y = omega.imag();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (y + y.transpose()));
        return es.eigenvalues().minCoeff();
    }

    void validate() const {
        if (omega.rows() != omega.cols() || omega.rows() == 0)
            throw Error(Errc::InvalidArgument, "Siegel point must be a nonempty square matrix");
        double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
        if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw Error(Errc::InvalidArgument, "Siegel point is not symmetric");
        if (!(min_imag_eigenvalue() > kSiegelPositivityTol))
            throw Error(Errc::InvalidArgument, "imaginary part is not positive definite");
    }
};

// A ∈ Sp(ℤ^{2n}, H): A H Aᵀ = H for a normal-form H.
struct TwistedSymplectic {
    IntMatrix a;
    FormPtr form;

    static TwistedSymplectic make(IntMatrix a, FormPtr form) {
        IntMatrix h = form->normal_form();
        if (a.rows() != h.rows() || a.cols() != h.cols())
            throw Error(Errc::InvalidArgument, "group element has wrong size");
        if (a * h * a.transpose() != h) throw Error(Errc::NotInStabilizer, "A H Aᵀ ≠ H");
        return {std::move(a), std::move(form)};
    }

    static TwistedSymplectic identity(FormPtr form) {
        return {IntMatrix::identity(2 * form->n), std::move(form)};
    }

    friend TwistedSymplectic operator*(const TwistedSymplectic& x, const TwistedSymplectic& y) {
        return {x.a * y.a, x.form};
    }

    // A^{-T} = H^{-1} A H, exact.
    RatMatrix inverse_transpose() const {
        RatMatrix h = to_rational(form->normal_form());
        return inverse(h) * to_rational(a) * h;
    }

    // Real symplectic image diag(D, I) A^{-T} diag(D^{-1}, I).
    Eigen::MatrixXd embedding() const {
        const int n = form->n;
        Eigen::MatrixXd ait = inverse_transpose().to_eigen();
        Eigen::VectorXd d(2 * n), dinv(2 * n);
        for (int i = 0; i < n; ++i) {
            d(i) = form->h(i);
            dinv(i) = 1.0 / form->h(i);
            d(n + i) = 1.0;
            dinv(n + i) = 1.0;
        }
        return d.asDiagonal() * ait * dinv.asDiagonal();
    }
};

inline SiegelPoint siegel_action(const TwistedSymplectic& g, const SiegelPoint& om) {
    const int n = g.form->n;
    if (om.n() != n) throw Error(Errc::InvalidArgument, "Siegel point and group element disagree on n");
    Eigen::MatrixXcd m = g.embedding().cast<cplx>();
    Eigen::MatrixXcd num = m.topLeftCorner(n, n) * om.omega + m.topRightCorner(n, n);
    Eigen::MatrixXcd den = m.bottomLeftCorner(n, n) * om.omega + m.bottomRightCorner(n, n);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(den);
    double scale = std::max(1.0, den.cwiseAbs().maxCoeff());
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12 * std::pow(scale, n))
        throw Error(Errc::DegenerateDenominator, "C Ω + D is singular");
    Eigen::MatrixXcd out = num * lu.inverse();
    out = 0.5 * (out + out.transpose()).eval();
    return SiegelPoint::make(out);
}

// ‖(y')¹ − D⁻¹Ω'(y')² − (P − D⁻¹Ω Q)⁻¹(y¹ − D⁻¹Ω y²)‖∞ with y' = A^{-T}y, Ω' = A·Ω,
// P, Q the first-column blocks of Aᵀ.
inline double frame_transport_check(const TwistedSymplectic& g, const SiegelPoint& om, const Eigen::VectorXd& y) {
    const int n = g.form->n;
    if (y.size() != 2 * n) throw Error(Errc::InvalidArgument, "fiber vector has wrong size");
    SiegelPoint omp = siegel_action(g, om);
    Eigen::VectorXd yp = g.inverse_transpose().to_eigen() * y;
    Eigen::MatrixXcd dinv = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) dinv(i, i) = 1.0 / g.form->h(i);
    Eigen::MatrixXd at = g.a.to_eigen().transpose();
    Eigen::MatrixXcd p = at.topLeftCorner(n, n).cast<cplx>();
    Eigen::MatrixXcd q = at.bottomLeftCorner(n, n).cast<cplx>();
    Eigen::VectorXcd lhs = yp.head(n).cast<cplx>() - dinv * omp.omega * yp.tail(n).cast<cplx>();
    Eigen::MatrixXcd b = p - dinv * om.omega * q;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(b);
    if (!lu.isInvertible()) throw Error(Errc::DegenerateDenominator, "frame transport block is singular");
    Eigen::VectorXcd rhs = lu.solve((y.head(n).cast<cplx>() - dinv * om.omega * y.tail(n).cast<cplx>()).eval());
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

// Random element of Sp(ℤ^{2n}, H) as a short word in block-unipotent generators
// and the Weyl element.
template <class Rng>
TwistedSymplectic random_twisted_symplectic(const FormPtr& form, Rng& rng, int steps = 3, int spread = 1) {
    const int n = form->n;
    BigInt lcm = form->invariant_factors.back();
    std::uniform_int_distribution<int> coin(0, 2);
    std::uniform_int_distribution<int> entry(-spread, spread);
    IntMatrix a = IntMatrix::identity(2 * n);
    for (int s = 0; s < steps; ++s) {
        IntMatrix e = IntMatrix::identity(2 * n);
        int kind = coin(rng);
        if (kind == 0) {
            // [[I, S],[0, I]] with S D symmetric: S = T diag(lcm/h).
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    BigInt t = entry(rng);
                    e(i, n + j) = t * (lcm / form->invariant_factors[static_cast<size_t>(j)]);
                    e(j, n + i) = t * (lcm / form->invariant_factors[static_cast<size_t>(i)]);
                }
        } else if (kind == 1) {
            // [[I, 0],[T, I]] with T = D · symmetric.
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    BigInt t = entry(rng);
                    e(n + i, j) = form->invariant_factors[static_cast<size_t>(i)] * t;
                    e(n + j, i) = form->invariant_factors[static_cast<size_t>(j)] * t;
                }
        } else {
            // block swap [[0, -I],[I, 0]] preserves H only when D is scalar; otherwise a
            // sign flip pair diag(-1 on i, -1 on n+i).
            bool scalar = true;
            for (int i = 1; i < n; ++i) scalar = scalar && form->invariant_factors[static_cast<size_t>(i)] == form->invariant_factors[0];
            e = IntMatrix(2 * n, 2 * n);
            if (scalar) {
                for (int i = 0; i < n; ++i) {
                    e(i, n + i) = -1;
                    e(n + i, i) = 1;
                }
            } else {
                std::uniform_int_distribution<int> pick(0, n - 1);
                int f = pick(rng);
                for (int i = 0; i < 2 * n; ++i) e(i, i) = 1;
                e(f, f) = -1;
                e(n + f, n + f) = -1;
            }
        }
        a = e * a;
    }
    return TwistedSymplectic::make(a, form);
}

template <class Rng>
SiegelPoint random_siegel_point(int n, Rng& rng, double min_im = 0.5) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd x(n, n), r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            x(i, j) = nd(rng);
            r(i, j) = 0.5 * nd(rng);
        }
    Eigen::MatrixXd re = 0.5 * (x + x.transpose());
    Eigen::MatrixXd im = r * r.transpose() + min_im * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXcd om(n, n);
    om.real() = re;
    om.imag() = im;
    return SiegelPoint::make(om);
}

}  // namespace bq
