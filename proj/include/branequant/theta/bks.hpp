#pragma once

#include "branequant/theta/pairing.hpp"

namespace bq {

// A fiber state expanded in the theta frame; coefficients in frame.indices() order.
struct QuantumState {
    ThetaFrame frame;
    Eigen::VectorXcd coeffs;

    static QuantumState make(ThetaFrame frame, Eigen::VectorXcd coeffs) {
        if (coeffs.size() != frame.dim()) throw Error(Errc::InvalidArgument, "coefficient vector does not match frame dimension");
        if (!coeffs.allFinite()) throw Error(Errc::InvalidArgument, "non-finite state coefficient");
        return {std::move(frame), std::move(coeffs)};
    }

    // The theta frame is orthonormal for the half-form corrected metric.
    double norm() const { return coeffs.norm(); }

    cplx operator()(const std::vector<double>& y) const {
        ThetaEvaluator ev(frame);
        auto idx = frame.indices();
        cplx acc = 0.0;
        for (size_t a = 0; a < idx.size(); ++a) acc += coeffs(static_cast<Eigen::Index>(a)) * ev(idx[a], y);
        return acc;
    }
};

// Theta coefficients ⟨s, σ_l⟩ of a sampled fiber section, by quadrature.
inline Eigen::VectorXcd theta_coefficients(const FiberSampler& s, const ThetaFrame& frame, int g) {
    auto basis = sample_theta_basis(frame, g);
    const int d = frame.chart().dim();
    const long total = grid_size(d, g);
    std::vector<cplx> vals(static_cast<size_t>(total));
    for (long r = 0; r < total; ++r) vals[static_cast<size_t>(r)] = s(grid_point(r, d, g));
    Eigen::VectorXcd c(static_cast<Eigen::Index>(basis.size()));
    for (size_t a = 0; a < basis.size(); ++a)
        c(static_cast<Eigen::Index>(a)) = pairing_sampled(vals, basis[a], frame.omega, frame.omega);
    return c;
}

// BKS pairing map between theta frames over the same fiber point. σ_l at Ω′ pairs
// to δ with σ_l̃ at Ω once the half-form factor is included, so the map is the
// identity on coefficients.
inline QuantumState bks_transform(const QuantumState& st, const ThetaFrame& target) {
    if (!(st.frame.point == target.point)) throw Error(Errc::PointMismatch, "BKS map needs states over the same fiber point");
    if (target.omega.n() != st.frame.omega.n()) throw Error(Errc::InvalidArgument, "Siegel point has wrong size");
    return QuantumState::make(target, st.coeffs);
}

inline QuantumState bks_transform(const QuantumState& st, const SiegelPoint& target) {
    return bks_transform(st, ThetaFrame::make(st.frame.point, target, st.frame.truncation));
}

// Brute-force BKS matrix: entry (a, b) = ⟨σ^{from}_b, σ^{to}_a⟩ with half-form factor.
inline Eigen::MatrixXcd bks_quadrature_matrix(const ThetaFrame& from, const ThetaFrame& to, int g) {
    if (!(from.point == to.point)) throw Error(Errc::PointMismatch, "BKS map needs frames over the same fiber point");
    auto sf = sample_theta_basis(from, g);
    auto st = sample_theta_basis(to, g);
    const auto d = static_cast<Eigen::Index>(sf.size());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b)
            m(a, b) = pairing_sampled(sf[static_cast<size_t>(b)], st[static_cast<size_t>(a)], from.omega, to.omega);
    return m;
}

// Gram matrix ⟨σ_b, σ′_a⟩ between two frames (identical to the BKS matrix in layout).
inline Eigen::MatrixXcd theta_gram(const ThetaFrame& a, const ThetaFrame& b, int g) { return bks_quadrature_matrix(a, b, g); }

}  // namespace bq
