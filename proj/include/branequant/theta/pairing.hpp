#pragma once

#include <functional>

#include "branequant/theta/frame.hpp"

namespace bq {

// sqrt(det((Ω − Ω̄′)/i)). The matrix has positive-definite Hermitian part
// Im Ω + Im Ω′, so its eigenvalues lie in the right half plane and the product
// of principal square roots is continuous in (Ω, Ω′). For n = 1 this is the
// principal square root of the determinant.
inline cplx half_form_factor(const SiegelPoint& om, const SiegelPoint& omp) {
    Eigen::MatrixXcd m = (om.omega - omp.omega.conjugate()) / I;
    if (m.rows() == 1) return std::sqrt(m(0, 0));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
    cplx acc = 1.0;
    for (int i = 0; i < m.rows(); ++i) acc *= std::sqrt(es.eigenvalues()(i));
    return acc;
}

using FiberSampler = std::function<cplx(const std::vector<double>&)>;

// Half-form factor times the tensor trapezoid rule for ∫ s·conj(s′) over [0,1]^{2n}.
inline cplx pairing_quadrature(const FiberSampler& s, const FiberSampler& sp, const SiegelPoint& om,
                               const SiegelPoint& omp, int g) {
    if (g < 8) throw Error(Errc::QuadratureUnderflow, "quadrature needs at least 8 points per direction");
    const int d = 2 * om.n();
    const long total = grid_size(d, g);
    cplx acc = 0.0;
    for (long r = 0; r < total; ++r) {
        auto y = grid_point(r, d, g);
        acc += s(y) * std::conj(sp(y));
    }
    return half_form_factor(om, omp) * acc / static_cast<double>(total);
}

// Same rule on pre-sampled grids (see grid_point for the layout).
inline cplx pairing_sampled(const std::vector<cplx>& s, const std::vector<cplx>& sp, const SiegelPoint& om,
                            const SiegelPoint& omp) {
    if (s.size() != sp.size()) throw Error(Errc::InvalidArgument, "sample grids differ in size");
    if (s.size() < 64) throw Error(Errc::QuadratureUnderflow, "quadrature needs at least 8 points per direction");
    cplx acc = 0.0;
    for (size_t i = 0; i < s.size(); ++i) acc += s[i] * std::conj(sp[i]);
    return half_form_factor(om, omp) * acc / static_cast<double>(s.size());
}

}  // namespace bq
