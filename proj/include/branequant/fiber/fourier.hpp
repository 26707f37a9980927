#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "branequant/fiber/chart.hpp"
#include "branequant/lattice/siegel.hpp"

namespace bq {

using Mode = std::vector<int>;

// Band-limited fiberwise Fourier expansion Σ_m f̂_m(x) e^{2πi m·u}, u = y + g(x),
// with polynomial base coefficients.
class FourierPolynomial {
public:
    FourierPolynomial() = default;
    explicit FourierPolynomial(ChartPtr chart) : chart_(std::move(chart)) {}

    static FourierPolynomial constant(ChartPtr chart, cplx c) {
        FourierPolynomial f(chart);
        f.add(Mode(static_cast<size_t>(chart->dim()), 0), BasePolynomial::constant(chart->dim(), c));
        return f;
    }
    static FourierPolynomial single_mode(ChartPtr chart, const Mode& m, cplx c = 1.0) {
        FourierPolynomial f(chart);
        f.add(m, BasePolynomial::constant(chart->dim(), c));
        return f;
    }
    static FourierPolynomial single_mode(ChartPtr chart, const Mode& m, const BasePolynomial& p) {
        FourierPolynomial f(chart);
        f.add(m, p);
        return f;
    }

    const ChartPtr& chart() const { return chart_; }
    const std::map<Mode, BasePolynomial>& modes() const { return modes_; }
    bool is_zero() const { return modes_.empty(); }

    void add(const Mode& m, const BasePolynomial& p) {
        if (static_cast<int>(m.size()) != chart_->dim() || p.nvars() != chart_->dim())
            throw Error(Errc::InvalidArgument, "mode or coefficient arity mismatch");
        if (p.is_zero()) return;
        auto it = modes_.find(m);
        if (it == modes_.end()) {
            modes_.emplace(m, p);
            return;
        }
        it->second += p;
        if (it->second.is_zero()) modes_.erase(it);
    }

    BasePolynomial coefficient(const Mode& m) const {
        auto it = modes_.find(m);
        return it == modes_.end() ? BasePolynomial(chart_->dim()) : it->second;
    }

    int band() const {
        int b = 0;
        for (const auto& [m, p] : modes_)
            for (int v : m) b = std::max(b, std::abs(v));
        return b;
    }
    int base_degree() const {
        int d = 0;
        for (const auto& [m, p] : modes_) d = std::max(d, p.degree_bound());
        return d;
    }

    cplx coefficient_at(const Mode& m, const std::vector<double>& x) const {
        auto it = modes_.find(m);
        return it == modes_.end() ? cplx(0.0) : eval_base(it->second, x);
    }

    cplx evaluate_u(const std::vector<double>& x, const std::vector<double>& u) const {
        cplx acc = 0.0;
        for (const auto& [m, p] : modes_) {
            double ph = 0.0;
            for (size_t i = 0; i < m.size(); ++i) ph += m[i] * u[i];
            acc += eval_base(p, x) * std::polar(1.0, 2.0 * pi * ph);
        }
        return acc;
    }

    // Value at (x, y); the u-mode picks up e^{2πi m·g(x)}.
    cplx evaluate(const std::vector<double>& x, const std::vector<double>& y) const {
        std::vector<double> u = chart_->g_at(x);
        for (size_t i = 0; i < u.size(); ++i) u[i] += y[i];
        return evaluate_u(x, u);
    }

    FourierPolynomial& operator+=(const FourierPolynomial& o) {
        check_chart(o);
        for (const auto& [m, p] : o.modes_) add(m, p);
        return *this;
    }
    FourierPolynomial& operator-=(const FourierPolynomial& o) {
        check_chart(o);
        for (const auto& [m, p] : o.modes_) add(m, -p);
        return *this;
    }
    FourierPolynomial& operator*=(cplx s) {
        std::map<Mode, BasePolynomial> out;
        for (auto& [m, p] : modes_) {
            BasePolynomial q = p * s;
            if (!q.is_zero()) out.emplace(m, std::move(q));
        }
        modes_ = std::move(out);
        return *this;
    }
    friend FourierPolynomial operator+(FourierPolynomial a, const FourierPolynomial& b) { return a += b; }
    friend FourierPolynomial operator-(FourierPolynomial a, const FourierPolynomial& b) { return a -= b; }
    friend FourierPolynomial operator*(cplx s, FourierPolynomial a) { return a *= s; }

    // Complex conjugate function: mode m ↦ −m with conjugated coefficients.
    FourierPolynomial conj() const {
        FourierPolynomial out(chart_);
        for (const auto& [m, p] : modes_) {
            Mode mm = m;
            for (auto& v : mm) v = -v;
            out.add(mm, p.map_coeffs<cplx>([](const cplx& c) { return std::conj(c); }));
        }
        return out;
    }

    // Largest coefficient modulus difference; used for approximate equality of
    // floating identities.
    double max_abs_diff(const FourierPolynomial& o) const {
        FourierPolynomial d = *this;
        d -= o;
        double m = 0.0;
        for (const auto& [mode, p] : d.modes_)
            for (const auto& [e, c] : p.terms()) m = std::max(m, std::abs(c));
        return m;
    }
    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [mode, p] : modes_)
            for (const auto& [e, c] : p.terms()) m = std::max(m, std::abs(c));
        return m;
    }

    friend bool operator==(const FourierPolynomial& a, const FourierPolynomial& b) {
        return same_chart(a.chart_, b.chart_) && a.modes_ == b.modes_;
    }

    void check_chart(const FourierPolynomial& o) const {
        if (!same_chart(chart_, o.chart_)) throw Error(Errc::ChartMismatch, "operands live on different charts");
    }

    static cplx eval_base(const BasePolynomial& p, const std::vector<double>& x) {
        std::vector<cplx> xc(x.begin(), x.end());
        return p.evaluate<cplx>(xc);
    }

private:
    ChartPtr chart_;
    std::map<Mode, BasePolynomial> modes_;
};

// m · H^{-1} m' = Σ_i (m_i m'_{n+i} − m_{n+i} m'_i) / h_i.
inline double skew_pairing(const IntSkewForm& form, const Mode& m, const Mode& mp) {
    const int n = form.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto a = static_cast<size_t>(i), b = static_cast<size_t>(n + i);
        s += (static_cast<double>(m[a]) * mp[b] - static_cast<double>(m[b]) * mp[a]) / form.h(i);
    }
    return s;
}

namespace detail {

template <class PairCoeff>
FourierPolynomial twisted_convolution(const FourierPolynomial& f, const FourierPolynomial& g, PairCoeff coeff) {
    f.check_chart(g);
    const auto& form = *f.chart()->form;
    FourierPolynomial out(f.chart());
    Mode q(static_cast<size_t>(f.chart()->dim()));
    for (const auto& [m, p] : f.modes())
        for (const auto& [mp, pp] : g.modes()) {
            cplx c = coeff(skew_pairing(form, m, mp));
            if (c == cplx(0.0)) continue;
            for (size_t i = 0; i < q.size(); ++i) q[i] = m[i] + mp[i];
            out.add(q, (p * pp) * c);
        }
    return out;
}

}  // namespace detail

inline FourierPolynomial star_product(const FourierPolynomial& f, const FourierPolynomial& g, double hbar) {
    return detail::twisted_convolution(f, g, [hbar](double th) { return std::polar(1.0, -pi * hbar * th); });
}

// Pointwise product, the ħ = 0 specialization.
inline FourierPolynomial pointwise_product(const FourierPolynomial& f, const FourierPolynomial& g) {
    return detail::twisted_convolution(f, g, [](double) { return cplx(1.0); });
}

// {e_m, e_m'} = (1/2π)(2πi)² Σ_i h_i^{-1}(m_i m'_{n+i} − m_{n+i} m'_i) e_{m+m'} = −2π θ e_{m+m'}.
inline FourierPolynomial poisson_bracket(const FourierPolynomial& f, const FourierPolynomial& g) {
    return detail::twisted_convolution(f, g, [](double th) { return cplx(-2.0 * pi * th); });
}

inline FourierPolynomial star_commutator(const FourierPolynomial& f, const FourierPolynomial& g, double hbar) {
    return star_product(f, g, hbar) - star_product(g, f, hbar);
}

// (1/ħ)[f,g]_⋆ − i{f,g} assembled pairwise: per pair the coefficient is
// −2i (sin(πħθ)/ħ − πθ), whose ħ → 0 limit is 0.
inline FourierPolynomial semiclassical_defect_symbol(const FourierPolynomial& f, const FourierPolynomial& g, double hbar) {
    return detail::twisted_convolution(f, g, [hbar](double th) {
        if (hbar == 0.0) return cplx(0.0);
        double x = pi * hbar * th;
        double s = std::abs(x) < 1e-4 ? pi * th * (-x * x / 6.0 + x * x * x * x / 120.0) : std::sin(x) / hbar - pi * th;
        return cplx(0.0, -2.0) * s;
    });
}

struct EvalGrid {
    int points_per_direction = 16;
    std::vector<std::vector<double>> base_points;
};

inline EvalGrid default_eval_grid(int dim) { return {16, default_base_samples(dim)}; }

// Sup norm over base samples × uniform fiber grid (points in y).
inline double sup_norm(const FourierPolynomial& f, const EvalGrid& grid) {
    const int d = f.chart()->dim();
    const int g = grid.points_per_direction;
    long total = 1;
    for (int i = 0; i < d; ++i) total *= g;
    double best = 0.0;
    std::vector<double> y(static_cast<size_t>(d));
    for (const auto& x : grid.base_points) {
        for (long idx = 0; idx < total; ++idx) {
            long r = idx;
            for (int i = 0; i < d; ++i) {
                y[static_cast<size_t>(i)] = static_cast<double>(r % g) / g;
                r /= g;
            }
            best = std::max(best, std::abs(f.evaluate(x, y)));
        }
    }
    return best;
}

inline double semiclassical_defect(const FourierPolynomial& f, const FourierPolynomial& g, double hbar,
                                   const EvalGrid& grid) {
    return sup_norm(semiclassical_defect_symbol(f, g, hbar), grid);
}
inline double semiclassical_defect(const FourierPolynomial& f, const FourierPolynomial& g, double hbar) {
    return semiclassical_defect(f, g, hbar, default_eval_grid(f.chart()->dim()));
}

// Pull back along x = A(x' + b), u = A^{-T}u' + H^{-1}A c, landing on `target`.
// Mode m becomes A^{-1}m with phase e^{2πi m·H^{-1}Ac}.
inline FourierPolynomial chart_transition_pullback(const FourierPolynomial& f, const TwistedSymplectic& a,
                                                   const std::vector<double>& b, const std::vector<double>& c,
                                                   ChartPtr target = nullptr) {
    const ChartPtr& src = f.chart();
    if (!(*a.form == *src->form)) throw Error(Errc::ChartMismatch, "group element built for a different form");
    if (!target) target = src;
    const int d = src->dim();
    if (static_cast<int>(b.size()) != d || static_cast<int>(c.size()) != d)
        throw Error(Errc::InvalidArgument, "translation vectors have wrong size");
    Eigen::MatrixXd am = a.a.to_eigen();
    IntMatrix ainv = unimodular_inverse(a.a);
    Eigen::VectorXd kappa = src->h_inverse() * am * Eigen::Map<const Eigen::VectorXd>(c.data(), d);

    std::vector<BasePolynomial> images;
    for (int i = 0; i < d; ++i) {
        std::vector<cplx> lin(static_cast<size_t>(d));
        cplx c0 = 0.0;
        for (int j = 0; j < d; ++j) {
            lin[static_cast<size_t>(j)] = am(i, j);
            c0 += am(i, j) * b[static_cast<size_t>(j)];
        }
        images.push_back(BasePolynomial::linear(d, lin, c0));
    }

    FourierPolynomial out(target);
    for (const auto& [m, p] : f.modes()) {
        Mode mp(static_cast<size_t>(d), 0);
        double ph = 0.0;
        for (int i = 0; i < d; ++i) {
            BigInt s = 0;
            for (int j = 0; j < d; ++j) s += ainv(i, j) * m[static_cast<size_t>(j)];
            mp[static_cast<size_t>(i)] = static_cast<int>(s);
            ph += m[static_cast<size_t>(i)] * kappa(i);
        }
        out.add(mp, p.substitute(images) * std::polar(1.0, 2.0 * pi * ph));
    }
    return out;
}

inline FourierPolynomial chart_transition_pullback(const FourierPolynomial& f, const IntMatrix& a,
                                                   const std::vector<double>& b, const std::vector<double>& c,
                                                   ChartPtr target = nullptr) {
    return chart_transition_pullback(f, TwistedSymplectic::make(a, f.chart()->form), b, c, std::move(target));
}

}  // namespace bq
