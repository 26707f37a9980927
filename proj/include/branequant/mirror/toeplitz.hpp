#pragma once

#include <mutex>

#include "branequant/fiber/dolbeault.hpp"
#include "branequant/theta/bks.hpp"
#include "branequant/theta/section.hpp"

namespace bq {

// Multiplier of e^{Δ/k} on the mode e^{2πi m·u}. With Y = Im Ω and
// v = m₂ + Ω𝑯⁻¹m₁ the Laplacian acts by (π/2) v*Y⁻¹v, so the multiplier is
// exp((π/2k) v*Y⁻¹v): real and ≥ 1 (backward heat flow).
inline cplx heat_twist_scalar(const Mode& m, const SiegelPoint& om, int k, const IntSkewForm& form) {
    const int n = form.n;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = static_cast<double>(m[static_cast<size_t>(n + i)]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v(i) += om.omega(i, j) * (m[static_cast<size_t>(j)] / form.h(j));
    Eigen::MatrixXd y = om.omega.imag();
    cplx q = (v.adjoint() * y.inverse().cast<cplx>() * v)(0, 0);
    return std::exp(pi / (2.0 * k) * q);
}

class HeatTwist {
public:
    HeatTwist(SiegelPoint om, int k, FormPtr form) : om_(std::move(om)), k_(k), form_(std::move(form)) {}

    cplx multiplier(const Mode& m) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
        cplx v = heat_twist_scalar(m, om_, k_, *form_);
        cache_.emplace(m, v);
        return v;
    }

    FourierPolynomial apply(const FourierPolynomial& f) const {
        FourierPolynomial out(f.chart());
        for (const auto& [m, p] : f.modes()) out.add(m, p * multiplier(m));
        return out;
    }

    const SiegelPoint& omega() const { return om_; }

private:
    SiegelPoint om_;
    int k_;
    FormPtr form_;
    mutable std::mutex mu_;
    mutable std::map<Mode, cplx> cache_;
};

enum class Provenance { ClosedForm, Quadrature, Product };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::ClosedForm: return "closed-form";
        case Provenance::Quadrature: return "quadrature";
        case Provenance::Product: return "product";
    }
    return "unknown";
}

struct EndoMatrix {
    ThetaFrame frame;
    Eigen::MatrixXcd entries;
    Provenance provenance = Provenance::ClosedForm;

    static EndoMatrix make(ThetaFrame frame, Eigen::MatrixXcd m, Provenance p) {
        if (m.rows() != frame.dim() || m.cols() != frame.dim())
            throw Error(Errc::InvalidArgument, "matrix size does not match frame dimension");
        if (!m.allFinite()) throw Error(Errc::InvalidArgument, "non-finite matrix entry");
        return {std::move(frame), std::move(m), p};
    }

    friend EndoMatrix operator*(const EndoMatrix& a, const EndoMatrix& b) {
        if (!(a.frame.point == b.frame.point)) throw Error(Errc::PointMismatch, "matrices over different fiber points");
        return {a.frame, a.entries * b.entries, Provenance::Product};
    }
};

namespace detail {

inline long floor_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

// Accumulate the closed-form contribution of one mode with coefficient c.
inline void add_mode_to_matrix(Eigen::MatrixXcd& out, const ThetaFrame& frame, const Mode& m, cplx c) {
    const auto& ch = frame.chart();
    const int n = ch.n();
    const int k = ch.k;
    const auto uc = frame.point.ucheck();
    const auto idx = frame.indices();
    std::vector<int> lt(static_cast<size_t>(n));
    for (size_t col = 0; col < idx.size(); ++col) {
        const auto& l = idx[col];
        double ph = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto ii = static_cast<size_t>(i);
            const long size = k * ch.form->h_int(i);
            const long big = l[ii] + m[ii];
            lt[ii] = static_cast<int>(floor_mod(big, size));
            const long qt = (big - lt[ii]) / size;
            const double m2 = m[static_cast<size_t>(n + i)];
            ph += -m2 / ch.form->h(i) * (uc[ii] + 0.5 * m[ii] - lt[ii]) / k + qt * uc[static_cast<size_t>(n + i)];
        }
        out(frame.linear_index(lt), static_cast<Eigen::Index>(col)) += c * std::polar(1.0, 2.0 * pi * ph);
    }
}

}  // namespace detail

// Closed-form Φ_f at the frame's fiber point: mode m sends σ_l to a phase times σ_l̃,
// l̃ ≡ l + m₁ mod k𝑯. Independent of Ω.
inline EndoMatrix twisted_toeplitz_matrix(const FourierPolynomial& f, const ThetaFrame& frame) {
    if (!same_chart(f.chart(), frame.point.chart)) throw Error(Errc::ChartMismatch, "symbol and frame live on different charts");
    const auto d = static_cast<Eigen::Index>(frame.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [mode, p] : f.modes()) {
        cplx c = FourierPolynomial::eval_base(p, frame.point.x);
        if (c != cplx(0.0)) detail::add_mode_to_matrix(m, frame, mode, c);
    }
    return EndoMatrix::make(frame, std::move(m), Provenance::ClosedForm);
}

// Brute-force ⟨(e^{Δ/k} f) σ_l, σ_l̃⟩ by trapezoid quadrature on the fiber, reusing
// theta samples from sample_theta_basis(frame, g).
inline EndoMatrix toeplitz_quadrature_oracle(const FourierPolynomial& f, const ThetaFrame& frame, int g,
                                             const std::vector<std::vector<cplx>>& basis) {
    if (!same_chart(f.chart(), frame.point.chart)) throw Error(Errc::ChartMismatch, "symbol and frame live on different charts");
    if (g < 8) throw Error(Errc::QuadratureUnderflow, "quadrature needs at least 8 points per direction");
    const auto& ch = frame.chart();
    HeatTwist heat(frame.omega, ch.k, ch.form);
    FourierPolynomial tw = heat.apply(f);
    const int d = ch.dim();
    if (static_cast<long>(basis.size()) != frame.dim() || static_cast<long>(basis.front().size()) != grid_size(d, g))
        throw Error(Errc::InvalidArgument, "theta samples do not match the frame and grid");
    const long total = grid_size(d, g);
    std::vector<cplx> fv(static_cast<size_t>(total));
    for (long r = 0; r < total; ++r) fv[static_cast<size_t>(r)] = tw.evaluate(frame.point.x, grid_point(r, d, g));
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd m(dim, dim);
    std::vector<cplx> prod(static_cast<size_t>(total));
    for (Eigen::Index col = 0; col < dim; ++col) {
        for (long r = 0; r < total; ++r)
            prod[static_cast<size_t>(r)] = fv[static_cast<size_t>(r)] * basis[static_cast<size_t>(col)][static_cast<size_t>(r)];
        for (Eigen::Index row = 0; row < dim; ++row)
            m(row, col) = pairing_sampled(prod, basis[static_cast<size_t>(row)], frame.omega, frame.omega);
    }
    return EndoMatrix::make(frame, std::move(m), Provenance::Quadrature);
}

inline EndoMatrix toeplitz_quadrature_oracle(const FourierPolynomial& f, const ThetaFrame& frame, int g) {
    if (g < 8) throw Error(Errc::QuadratureUnderflow, "quadrature needs at least 8 points per direction");
    return toeplitz_quadrature_oracle(f, frame, g, sample_theta_basis(frame, g));
}

// max over points of ‖Φ_{f⋆_{1/k}g} − Φ_f Φ_g‖_∞.
inline double mirror_homomorphism_check(const FourierPolynomial& f, const FourierPolynomial& g,
                                        const std::vector<ThetaFrame>& points) {
    f.check_chart(g);
    const int k = f.chart()->k;
    FourierPolynomial fg = star_product(f, g, 1.0 / k);
    double worst = 0.0;
    for (const auto& fr : points) {
        auto lhs = twisted_toeplitz_matrix(fg, fr);
        auto rhs = twisted_toeplitz_matrix(f, fr) * twisted_toeplitz_matrix(g, fr);
        worst = std::max(worst, (lhs.entries - rhs.entries).cwiseAbs().maxCoeff());
    }
    return worst;
}

// Φ on (0,∗)-forms: one matrix per index tuple.
using FormMatrix = std::map<FormIndex, Eigen::MatrixXcd>;

inline FormMatrix twisted_toeplitz_form(const DolbeaultForm& a, const ThetaFrame& frame) {
    FormMatrix out;
    for (const auto& [idx, f] : a.components()) out[idx] = twisted_toeplitz_matrix(f, frame).entries;
    return out;
}

inline FormMatrix form_matrix_product(const FormMatrix& a, const FormMatrix& b) {
    FormMatrix out;
    FormIndex merged;
    int sign = 1;
    for (const auto& [ia, ma] : a)
        for (const auto& [ib, mb] : b) {
            if (!wedge_indices(ia, ib, merged, sign)) continue;
            Eigen::MatrixXcd p = static_cast<double>(sign) * (ma * mb);
            auto it = out.find(merged);
            if (it == out.end()) out.emplace(merged, p);
            else it->second += p;
        }
    return out;
}

inline double form_matrix_diff(const FormMatrix& a, const FormMatrix& b) {
    double worst = 0.0;
    for (const auto& [idx, m] : a) {
        auto it = b.find(idx);
        worst = std::max(worst, it == b.end() ? m.cwiseAbs().maxCoeff() : (m - it->second).cwiseAbs().maxCoeff());
    }
    for (const auto& [idx, m] : b)
        if (!a.count(idx)) worst = std::max(worst, m.cwiseAbs().maxCoeff());
    return worst;
}

inline double mirror_homomorphism_check(const DolbeaultForm& a, const DolbeaultForm& b, const std::vector<ThetaFrame>& points) {
    if (!same_chart(a.chart(), b.chart())) throw Error(Errc::ChartMismatch, "forms live on different charts");
    DolbeaultForm ab = graded_star(a, b, 1.0 / a.chart()->k);
    double worst = 0.0;
    for (const auto& fr : points)
        worst = std::max(worst, form_matrix_diff(twisted_toeplitz_form(ab, fr),
                                                 form_matrix_product(twisted_toeplitz_form(a, fr), twisted_toeplitz_form(b, fr))));
    return worst;
}

// Φ_f acting on mirror sections:
// ⟨Φ_f s⟩(x, t) = Σ_m f̂_m(x) e^{−(2πi/k) m₂·𝑯⁻¹(t + ½m₁)} ⟨s⟩(x, t + m₁).
inline MirrorSectionRep mirror_operator_apply(const FourierPolynomial& f, const MirrorSectionRep& s) {
    const auto& ch = *f.chart();
    const int n = ch.n();
    if (s.n() != n) throw Error(Errc::InvalidArgument, "section and symbol disagree on n");
    std::vector<int> keep(static_cast<size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) keep[static_cast<size_t>(i)] = i;
    MirrorSectionRep out(n);
    for (const auto& [m, p] : f.modes()) {
        std::vector<int> m1(m.begin(), m.begin() + n);
        std::vector<double> beta(static_cast<size_t>(n));
        double beta0 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = -m[static_cast<size_t>(n + i)] / (ch.k * ch.form->h(i));
            beta[static_cast<size_t>(i)] = w;
            beta0 += 0.5 * w * m[static_cast<size_t>(i)];
        }
        out += s.shifted(m1).phased(beta, beta0).times(p.embed(3 * n, keep));
    }
    return out;
}

}  // namespace bq
