#pragma once

#include <set>

#include "branequant/theta/frame.hpp"
#include "branequant/theta/pairing.hpp"
#include "branequant/theta/section.hpp"

namespace bq {

inline constexpr double kWeilBrezinTailTol = 1e-8;

namespace detail {

// Integer points within `radius` (per coordinate) of any of the given real centers.
inline std::set<std::vector<long>> window_union(const std::vector<std::vector<double>>& centers, const std::vector<int>& radius) {
    std::set<std::vector<long>> out;
    for (const auto& c : centers) {
        std::vector<long> mid;
        for (double v : c) mid.push_back(std::lround(v));
        const size_t n = mid.size();
        std::vector<int> off(n);
        for (size_t i = 0; i < n; ++i) off[i] = -radius[i];
        for (;;) {
            std::vector<long> q(n);
            for (size_t i = 0; i < n; ++i) q[i] = mid[i] + off[i];
            out.insert(q);
            size_t i = 0;
            while (i < n) {
                if (++off[i] <= radius[i]) break;
                off[i] = -radius[i];
                ++i;
            }
            if (i == n) break;
        }
    }
    return out;
}

// Radius beyond which e^{−a r²} < 1e−17, capped at q.
inline int effective_radius(double a, double scale, int q) {
    int r = static_cast<int>(std::ceil(std::sqrt(39.0 / a) / scale)) + 1;
    return std::min(r, q);
}

}  // namespace detail

// Quasi-periodic section on the fiber over a ThetaFrame's point, assembled by the
// Weil–Brezin double series from data ⟨s⟩ with [s](x, Y, V) = ⟨s⟩(x, V) N_Ω(Y + g²(x), V).
class WeilBrezinSampler {
public:
    WeilBrezinSampler(MirrorSectionRep data, const ThetaFrame& frame) : data_(std::move(data)), frame_(frame) {
        const auto& ch = frame.chart();
        n_ = ch.n();
        k_ = ch.k;
        gx_ = ch.g_at(frame.point.x);
        uc_ = frame.point.ucheck();
        gc_ = ch.gcheck_d();
        for (int i = 0; i < n_; ++i) h_.push_back(ch.form->h(i));
        indices_ = frame.indices();
        kom_ = static_cast<double>(k_) * frame.omega.omega;
        norm_ = std::pow(static_cast<double>(k_), n_ / 4.0);
        if (data_.is_zero()) return;
        const double beta = frame.omega.min_imag_eigenvalue();
        const int q = frame.truncation;
        rq_ = detail::effective_radius(pi * k_ * beta, 1.0, q);
        const double gmin = data_.min_gamma();
        rqc_ = detail::effective_radius(gmin, k_ * h_[0], q);
        // q̌ windows depend only on l, so they are fixed per frame
        for (const auto& l : indices_) {
            std::vector<std::vector<double>> centers;
            for (const auto& t : data_.terms()) {
                std::vector<double> c(static_cast<size_t>(n_));
                for (int i = 0; i < n_; ++i) {
                    const auto ii = static_cast<size_t>(i);
                    c[ii] = (uc_[ii] - l[ii] - t.center[ii]) / (k_ * h_[ii]);
                }
                centers.push_back(c);
            }
            qc_windows_.push_back(detail::window_union(centers, std::vector<int>(static_cast<size_t>(n_), rqc_)));
        }
        double coeff = 1.0 + data_.max_abs_coeff();
        tail_ = coeff * (std::pow(static_cast<double>(k_), n_ / 4.0) * 2.0 * n_ * std::exp(-pi * k_ * beta * (rq_ + 0.5) * (rq_ + 0.5)) +
                         2.0 * n_ * std::exp(-gmin * std::pow(k_ * h_[0] * (rqc_ + 0.5) - 1.0, 2)));
        if (tail_ > kWeilBrezinTailTol)
            throw Error(Errc::TruncationTooSmall, "Weil–Brezin truncation tail bound " + std::to_string(tail_) + " exceeds 1e-8");
    }

    double tail_bound() const { return tail_; }

    cplx operator()(const std::vector<double>& y) const {
        if (data_.is_zero()) return 0.0;
        const int n = n_;
        const int k = k_;
        std::vector<double> u(y.size());
        for (size_t i = 0; i < y.size(); ++i) u[i] = y[i] + gx_[i];
        double base = 0.0;
        for (int i = 0; i < 2 * n; ++i) base += k * gc_[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
        for (int i = 0; i < n; ++i) base -= uc_[static_cast<size_t>(i)] * gx_[static_cast<size_t>(i)];

        std::vector<double> v(static_cast<size_t>(n)), c(static_cast<size_t>(n));
        cplx acc = 0.0;
        for (size_t li = 0; li < indices_.size(); ++li) {
            const auto& l = indices_[li];
            for (const auto& qc : qc_windows_[li]) {
                for (int i = 0; i < n; ++i) {
                    const auto ii = static_cast<size_t>(i);
                    v[ii] = uc_[ii] - l[ii] - k * h_[ii] * qc[ii];
                }
                cplx sv = data_.eval(frame_.point.x, v);
                if (sv == cplx(0.0)) continue;
                std::vector<long> center(static_cast<size_t>(n));
                for (int i = 0; i < n; ++i) {
                    const auto ii = static_cast<size_t>(i);
                    center[ii] = std::lround(u[static_cast<size_t>(n + i)] + qc[ii] + v[ii] / (k * h_[ii]));
                }
                detail::for_box(center, rq_, [&](const std::vector<long>& q) {
                    double ph = base;
                    for (int i = 0; i < n; ++i) {
                        const auto ii = static_cast<size_t>(i);
                        const double ys = y[static_cast<size_t>(n + i)] - q[ii] + qc[ii];
                        c[ii] = ys + gx_[static_cast<size_t>(n + i)] + v[ii] / (k * h_[ii]);
                        ph += uc_[static_cast<size_t>(n + i)] * ys + (l[ii] + k * h_[ii] * q[ii]) * u[ii];
                    }
                    // N_Ω(Y + g², V) inlined
                    cplx quad = 0.0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) quad += c[static_cast<size_t>(i)] * kom_(i, j) * c[static_cast<size_t>(j)];
                    acc += sv * norm_ * std::exp(I * pi * quad + I * (2.0 * pi * ph));
                });
            }
        }
        return acc;
    }

private:
    MirrorSectionRep data_;
    ThetaFrame frame_;
    int n_ = 1, k_ = 1;
    int rq_ = 0, rqc_ = 0;
    double tail_ = 0.0;
    double norm_ = 1.0;
    Eigen::MatrixXcd kom_;
    std::vector<double> gx_, uc_, gc_, h_;
    std::vector<Index> indices_;
    std::vector<std::set<std::vector<long>>> qc_windows_;
};

inline WeilBrezinSampler weil_brezin_expand(const MirrorSectionRep& data, const ThetaFrame& frame) {
    return WeilBrezinSampler(data, frame);
}

// Closed-form fiber pairing of two mirror sections:
// Σ_{m̌} e^{2πi m̌₂·ǔ₂} ⟨s⟩(ǔ₁ − m̌₁ − k𝑯m̌₂) conj(⟨s′⟩(ǔ₁ − m̌₁)).
inline cplx mirror_pairing_closed_form(const MirrorSectionRep& s, const MirrorSectionRep& sp, const FiberPoint& p) {
    if (s.is_zero() || sp.is_zero()) return 0.0;
    const auto& ch = *p.chart;
    const int n = ch.n();
    const int k = ch.k;
    auto uc = p.ucheck();
    std::vector<std::vector<double>> c1;
    for (const auto& t : sp.terms()) {
        std::vector<double> c(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = uc[static_cast<size_t>(i)] - t.center[static_cast<size_t>(i)];
        c1.push_back(c);
    }
    const int r1 = detail::effective_radius(sp.min_gamma(), 1.0, 1000);
    const int r2 = detail::effective_radius(s.min_gamma(), k * ch.form->h(0), 1000);
    cplx acc = 0.0;
    std::vector<double> v1(static_cast<size_t>(n)), v2(static_cast<size_t>(n));
    for (const auto& m1 : detail::window_union(c1, std::vector<int>(static_cast<size_t>(n), r1))) {
        for (int i = 0; i < n; ++i) v1[static_cast<size_t>(i)] = uc[static_cast<size_t>(i)] - m1[static_cast<size_t>(i)];
        cplx right = std::conj(sp.eval(p.x, v1));
        if (right == cplx(0.0)) continue;
        std::vector<std::vector<double>> c2;
        for (const auto& t : s.terms()) {
            std::vector<double> c(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
                c[static_cast<size_t>(i)] = (v1[static_cast<size_t>(i)] - t.center[static_cast<size_t>(i)]) / (k * ch.form->h(i));
            c2.push_back(c);
        }
        for (const auto& m2 : detail::window_union(c2, std::vector<int>(static_cast<size_t>(n), r2))) {
            double ph = 0.0;
            for (int i = 0; i < n; ++i) {
                const auto ii = static_cast<size_t>(i);
                v2[ii] = v1[ii] - k * ch.form->h(i) * m2[ii];
                ph += m2[ii] * uc[static_cast<size_t>(n + i)];
            }
            acc += std::polar(1.0, 2.0 * pi * ph) * s.eval(p.x, v2) * right;
        }
    }
    return acc;
}

}  // namespace bq
