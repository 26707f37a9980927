#pragma once

#include <cmath>
#include <vector>

#include "branequant/fiber/chart.hpp"
#include "branequant/lattice/siegel.hpp"

namespace bq {

// A point (x, y̌) of the mirror base; ǔ = y̌ − kǧ is derived on demand.
struct FiberPoint {
    ChartPtr chart;
    std::vector<double> x;
    std::vector<double> ycheck;

    static FiberPoint make(ChartPtr chart, std::vector<double> x, std::vector<double> ycheck) {
        const int d = chart->dim();
        if (static_cast<int>(x.size()) != d || static_cast<int>(ycheck.size()) != d)
            throw Error(Errc::InvalidArgument, "fiber point has wrong arity");
        if (!chart->contains(x)) throw Error(Errc::InvalidArgument, "base point outside the chart domain");
        return {std::move(chart), std::move(x), std::move(ycheck)};
    }

    std::vector<double> ucheck() const {
        std::vector<double> u(ycheck);
        for (size_t i = 0; i < u.size(); ++i) u[i] -= chart->k * to_double(chart->gcheck[i]);
        return u;
    }

    friend bool operator==(const FiberPoint& a, const FiberPoint& b) {
        return same_chart(a.chart, b.chart) && a.x == b.x && a.ycheck == b.ycheck;
    }
};

using Index = std::vector<int>;

// Representatives {0..kh_1−1} × … × {0..kh_n−1}, lexicographic order.
inline std::vector<Index> representative_indices(const BraneChart& chart) {
    const int n = chart.n();
    std::vector<Index> out;
    Index l(static_cast<size_t>(n), 0);
    for (;;) {
        out.push_back(l);
        int i = n - 1;
        while (i >= 0) {
            if (++l[static_cast<size_t>(i)] < chart.k * chart.form->h_int(i)) break;
            l[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

inline long frame_dimension(const BraneChart& chart) {
    long d = 1;
    for (int i = 0; i < chart.n(); ++i) d *= chart.k * chart.form->h_int(i);
    return d;
}

struct ThetaFrame {
    FiberPoint point;
    SiegelPoint omega;
    int truncation = 10;

    static ThetaFrame make(FiberPoint p, SiegelPoint om, int q = 10) {
        if (om.n() != p.chart->n()) throw Error(Errc::InvalidArgument, "Siegel point and chart disagree on n");
        if (q < 0) throw Error(Errc::InvalidArgument, "truncation radius must be nonnegative");
        return {std::move(p), std::move(om), q};
    }

    const BraneChart& chart() const { return *point.chart; }
    int n() const { return point.chart->n(); }
    long dim() const { return frame_dimension(*point.chart); }
    std::vector<Index> indices() const { return representative_indices(*point.chart); }

    long linear_index(const Index& l) const {
        long idx = 0;
        for (int i = 0; i < n(); ++i) {
            long size = point.chart->k * point.chart->form->h_int(i);
            if (l[static_cast<size_t>(i)] < 0 || l[static_cast<size_t>(i)] >= size)
                throw Error(Errc::IndexOutOfRange, "theta index outside the representative set");
            idx = idx * size + l[static_cast<size_t>(i)];
        }
        return idx;
    }

    // Bound on the discarded part of the q-series: terms outside the window
    // have every Gaussian factor below e^{−πkβ(Q+½)²}, β = λ_min(Im Ω).
    double tail_bound() const {
        const double beta = omega.min_imag_eigenvalue();
        const double kk = point.chart->k;
        const int nn = n();
        double s = 0.0;
        for (int j = truncation + 1; j < truncation + 60; ++j)
            s += 2.0 * nn * std::pow(2.0 * j + 1.0, nn - 1) * std::exp(-pi * kk * beta * (j - 0.5) * (j - 0.5));
        return std::pow(kk, nn / 4.0) * s;
    }
};

// N_Ω(a, b) = k^{n/4} exp(πi c·(kΩ)c),  c = a + (k𝑯)^{-1} b.
inline cplx gaussian_envelope(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const SiegelPoint& om, int k,
                              const IntSkewForm& form) {
    const int n = form.n;
    Eigen::VectorXcd c(n);
    for (int i = 0; i < n; ++i) c(i) = a(i) + b(i) / (k * form.h(i));
    cplx e = (c.transpose() * (static_cast<double>(k) * om.omega) * c)(0, 0);
    return std::pow(static_cast<double>(k), n / 4.0) * std::exp(I * pi * e);
}

namespace detail {

// Iterate q over the box center ± radius in ℤ^n.
template <class F>
void for_box(const std::vector<long>& center, int radius, F f) {
    const size_t n = center.size();
    std::vector<long> q(n);
    std::vector<int> off(n, -radius);
    for (;;) {
        for (size_t i = 0; i < n; ++i) q[i] = center[i] + off[i];
        f(q);
        size_t i = 0;
        while (i < n) {
            if (++off[i] <= radius) break;
            off[i] = -radius;
            ++i;
        }
        if (i == n) break;
    }
}

}  // namespace detail

// σ_l(x, y, y̌) truncated to |q − q*|_∞ ≤ Q around the Gaussian peak
// q* = round(u² + (k𝑯)^{-1}(ǔ₁ − l)).
class ThetaEvaluator {
public:
    explicit ThetaEvaluator(const ThetaFrame& frame) : frame_(frame) {
        const auto& ch = frame.chart();
        n_ = ch.n();
        k_ = ch.k;
        gx_ = ch.g_at(frame.point.x);
        uc_ = frame.point.ucheck();
        gc_ = ch.gcheck_d();
        kom_ = static_cast<double>(k_) * frame.omega.omega;
        norm_ = std::pow(static_cast<double>(k_), n_ / 4.0);
        for (int i = 0; i < n_; ++i) h_.push_back(ch.form->h(i));
    }

    cplx operator()(const Index& l, const std::vector<double>& y) const {
        frame_.linear_index(l);
        const int n = n_;
        std::vector<double> u(y.size());
        for (size_t i = 0; i < y.size(); ++i) u[i] = y[i] + gx_[i];
        // q-independent phase: kǧ·y − g¹(x)·ǔ₁
        double base = 0.0;
        for (int i = 0; i < 2 * n; ++i) base += k_ * gc_[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
        for (int i = 0; i < n; ++i) base -= gx_[static_cast<size_t>(i)] * uc_[static_cast<size_t>(i)];

        std::vector<double> shift(static_cast<size_t>(n));
        std::vector<long> center(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            shift[static_cast<size_t>(i)] = u[static_cast<size_t>(n + i)] + (uc_[static_cast<size_t>(i)] - l[static_cast<size_t>(i)]) / (k_ * h_[static_cast<size_t>(i)]);
            center[static_cast<size_t>(i)] = std::lround(shift[static_cast<size_t>(i)]);
        }
        cplx acc = 0.0;
        Eigen::VectorXcd c(n);
        detail::for_box(center, frame_.truncation, [&](const std::vector<long>& q) {
            for (int i = 0; i < n; ++i) c(i) = shift[static_cast<size_t>(i)] - static_cast<double>(q[static_cast<size_t>(i)]);
            cplx quad = (c.transpose() * kom_ * c)(0, 0);
            double ph = base;
            for (int i = 0; i < n; ++i) {
                const auto ii = static_cast<size_t>(i);
                ph += uc_[static_cast<size_t>(n + i)] * (y[static_cast<size_t>(n + i)] - q[ii]);
                ph += (l[ii] + k_ * h_[ii] * q[ii]) * u[ii];
            }
            acc += std::exp(I * pi * quad + I * (2.0 * pi * ph));
        });
        return norm_ * acc;
    }

private:
    ThetaFrame frame_;
    int n_ = 0;
    int k_ = 1;
    std::vector<double> gx_, uc_, gc_, h_;
    Eigen::MatrixXcd kom_;
    double norm_ = 1.0;
};

inline cplx theta_basis_eval(const ThetaFrame& frame, const Index& l, const std::vector<double>& y) {
    if (frame.truncation < 8) throw Error(Errc::InvalidArgument, "theta evaluation needs truncation radius ≥ 8");
    return ThetaEvaluator(frame)(l, y);
}

// Quasi-periodicity factor σ(y + λ) / σ(y) = e^{2πi k(ǧ·λ + λ²·𝑯u¹)} at fixed y̌.
inline cplx quasi_periodicity_factor(const ThetaFrame& frame, const std::vector<long>& lam, const std::vector<double>& y) {
    const auto& ch = frame.chart();
    const int n = ch.n();
    std::vector<double> g = ch.g_at(frame.point.x);
    double ph = 0.0;
    for (int i = 0; i < 2 * n; ++i) ph += to_double(ch.gcheck[static_cast<size_t>(i)]) * lam[static_cast<size_t>(i)];
    for (int i = 0; i < n; ++i)
        ph += lam[static_cast<size_t>(n + i)] * ch.form->h(i) * (y[static_cast<size_t>(i)] + g[static_cast<size_t>(i)]);
    return std::polar(1.0, 2.0 * pi * ch.k * ph);
}

// Uniform grid on [0,1)^{2n}: point index r ↦ y with coordinate i = ((r / G^i) mod G)/G.
inline std::vector<double> grid_point(long r, int dim, int g) {
    std::vector<double> y(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        y[static_cast<size_t>(i)] = static_cast<double>(r % g) / g;
        r /= g;
    }
    return y;
}

inline long grid_size(int dim, int g) {
    long t = 1;
    for (int i = 0; i < dim; ++i) t *= g;
    return t;
}

// Values of every σ_l on the quadrature grid, rows in frame.indices() order.
inline std::vector<std::vector<cplx>> sample_theta_basis(const ThetaFrame& frame, int g) {
    if (g < 8) throw Error(Errc::QuadratureUnderflow, "quadrature needs at least 8 points per direction");
    ThetaEvaluator ev(frame);
    const int d = frame.chart().dim();
    const long total = grid_size(d, g);
    auto idx = frame.indices();
    std::vector<std::vector<cplx>> out(idx.size(), std::vector<cplx>(static_cast<size_t>(total)));
    for (long r = 0; r < total; ++r) {
        auto y = grid_point(r, d, g);
        for (size_t a = 0; a < idx.size(); ++a) out[a][static_cast<size_t>(r)] = ev(idx[a], y);
    }
    return out;
}

}  // namespace bq
