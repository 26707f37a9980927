#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "branequant/fiber/fourier.hpp"

namespace bq {

using FormIndex = std::vector<int>;

// (0,p)-form Σ_I f_I dz̄^I with strictly increasing index tuples I.
class DolbeaultForm {
public:
    DolbeaultForm() = default;
    explicit DolbeaultForm(ChartPtr chart) : chart_(std::move(chart)) {}

    static DolbeaultForm function(const FourierPolynomial& f) {
        DolbeaultForm a(f.chart());
        a.add({}, f);
        return a;
    }
    static DolbeaultForm basis(ChartPtr chart, const FormIndex& idx, const FourierPolynomial& f) {
        DolbeaultForm a(std::move(chart));
        a.add(idx, f);
        return a;
    }

    const ChartPtr& chart() const { return chart_; }
    const std::map<FormIndex, FourierPolynomial>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    // Degree of a homogeneous form; −1 for zero, throws for mixed degree.
    int degree() const {
        int d = -1;
        for (const auto& [idx, f] : comps_) {
            int s = static_cast<int>(idx.size());
            if (d >= 0 && s != d) throw Error(Errc::InvalidArgument, "form is not homogeneous");
            d = s;
        }
        return d;
    }

    void add(const FormIndex& idx, const FourierPolynomial& f) {
        for (size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] < 0 || idx[i] >= chart_->dim()) throw Error(Errc::IndexOutOfRange, "form index out of range");
            if (i > 0 && idx[i] <= idx[i - 1]) throw Error(Errc::InvalidArgument, "form index must be strictly increasing");
        }
        if (!same_chart(f.chart(), chart_)) throw Error(Errc::ChartMismatch, "component on a different chart");
        if (f.is_zero()) return;
        auto it = comps_.find(idx);
        if (it == comps_.end()) {
            comps_.emplace(idx, f);
            return;
        }
        it->second += f;
        if (it->second.is_zero()) comps_.erase(it);
    }

    FourierPolynomial component(const FormIndex& idx) const {
        auto it = comps_.find(idx);
        return it == comps_.end() ? FourierPolynomial(chart_) : it->second;
    }

    DolbeaultForm& operator+=(const DolbeaultForm& o) {
        for (const auto& [idx, f] : o.comps_) add(idx, f);
        return *this;
    }
    DolbeaultForm& operator-=(const DolbeaultForm& o) {
        for (const auto& [idx, f] : o.comps_) add(idx, cplx(-1.0) * f);
        return *this;
    }
    friend DolbeaultForm operator+(DolbeaultForm a, const DolbeaultForm& b) { return a += b; }
    friend DolbeaultForm operator-(DolbeaultForm a, const DolbeaultForm& b) { return a -= b; }
    friend DolbeaultForm operator*(cplx s, DolbeaultForm a) {
        DolbeaultForm out(a.chart_);
        for (const auto& [idx, f] : a.comps_) out.add(idx, s * f);
        return out;
    }

    double max_abs_diff(const DolbeaultForm& o) const {
        DolbeaultForm d = *this;
        d -= o;
        double m = 0.0;
        for (const auto& [idx, f] : d.comps_) m = std::max(m, f.max_abs_coeff());
        return m;
    }

private:
    ChartPtr chart_;
    std::map<FormIndex, FourierPolynomial> comps_;
};

// Merge two index tuples under the wedge product. Returns false when they share
// an index; otherwise writes the sorted union and the Koszul sign.
inline bool wedge_indices(const FormIndex& a, const FormIndex& b, FormIndex& out, int& sign) {
    out.clear();
    int inversions = 0;
    for (int x : a)
        for (int y : b) {
            if (x == y) return false;
            if (x > y) ++inversions;
        }
    out = a;
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    sign = inversions % 2 ? -1 : 1;
    return true;
}

// ∂/∂z̄^j on functions. With z = (x₁ − i𝑯u², x₂ + i𝑯u¹) the operator has constant
// coefficients in (x, u):
//   j < n:     ½∂_{x_j} + (1/(2i h_j)) ∂_{u^{n+j}}   → ½∂_{x_j} + π m_{n+j}/h_j
//   j = n + i: ½∂_{x_j} − (1/(2i h_i)) ∂_{u^{i}}     → ½∂_{x_j} − π m_i/h_i
inline FourierPolynomial dbar_partial(const FourierPolynomial& f, int j) {
    const auto& chart = f.chart();
    const int n = chart->n();
    if (j < 0 || j >= 2 * n) throw Error(Errc::IndexOutOfRange, "direction index out of range");
    FourierPolynomial out(chart);
    for (const auto& [m, p] : f.modes()) {
        double mult = j < n ? pi * m[static_cast<size_t>(n + j)] / chart->form->h(j)
                            : -pi * m[static_cast<size_t>(j - n)] / chart->form->h(j - n);
        BasePolynomial q = p.derivative(j) * cplx(0.5);
        if (mult != 0.0) q += p * cplx(mult);
        out.add(m, q);
    }
    return out;
}

inline DolbeaultForm dolbeault(const DolbeaultForm& alpha) {
    DolbeaultForm out(alpha.chart());
    const int d = alpha.chart()->dim();
    FormIndex merged;
    int sign = 1;
    for (const auto& [idx, f] : alpha.components())
        for (int j = 0; j < d; ++j) {
            if (!wedge_indices({j}, idx, merged, sign)) continue;
            FourierPolynomial c = dbar_partial(f, j);
            out.add(merged, sign > 0 ? c : cplx(-1.0) * c);
        }
    return out;
}

inline DolbeaultForm graded_star(const DolbeaultForm& a, const DolbeaultForm& b, double hbar) {
    if (!same_chart(a.chart(), b.chart())) throw Error(Errc::ChartMismatch, "forms live on different charts");
    DolbeaultForm out(a.chart());
    FormIndex merged;
    int sign = 1;
    for (const auto& [ia, fa] : a.components())
        for (const auto& [ib, fb] : b.components()) {
            if (!wedge_indices(ia, ib, merged, sign)) continue;
            FourierPolynomial c = star_product(fa, fb, hbar);
            out.add(merged, sign > 0 ? c : cplx(-1.0) * c);
        }
    return out;
}

// Coefficients of ∂/∂z̄^j in the (x, y) frame at base point x, as a 4n vector
// (∂_{x_0..x_{2n-1}}, ∂_{y^0..y^{2n-1}}). Since ∂_x|_u = ∂_x|_y − Σ_b ∂_x g^b ∂_{y^b},
// the Jacobian of g enters every direction.
inline Eigen::VectorXcd dbar_vector_field_xy(const BraneChart& chart, int j, const std::vector<double>& x) {
    const int n = chart.n();
    const int d = 2 * n;
    Eigen::MatrixXd dg = chart.jacobian_at(x);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * d);
    v(j) = 0.5;
    for (int b = 0; b < d; ++b) v(d + b) -= 0.5 * dg(b, j);
    if (j < n) v(d + n + j) += 1.0 / (2.0 * I * chart.form->h(j));
    else v(d + j - n) -= 1.0 / (2.0 * I * chart.form->h(j - n));
    return v;
}

// Complex coordinates z(x, y) of the chart.
inline Eigen::VectorXcd chart_complex_coordinates(const BraneChart& chart, const std::vector<double>& x,
                                                  const std::vector<double>& y) {
    const int n = chart.n();
    std::vector<double> g = chart.g_at(x);
    Eigen::VectorXcd z(2 * n);
    for (int i = 0; i < n; ++i) {
        const auto a = static_cast<size_t>(i), b = static_cast<size_t>(n + i);
        z(i) = cplx(x[a], -chart.form->h(i) * (y[b] + g[b]));
        z(n + i) = cplx(x[b], chart.form->h(i) * (y[a] + g[a]));
    }
    return z;
}

}  // namespace bq
