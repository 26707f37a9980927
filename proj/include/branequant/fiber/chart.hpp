#pragma once

#include <memory>
#include <utility>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "branequant/core/polynomial.hpp"
#include "branequant/lattice/semicharacter.hpp"

namespace bq {

// Local brane data (x, g, ǧ, 𝑯) at level k. Base coordinates are x_0..x_{2n-1};
// g is a 2n-vector of rational polynomials in them.
struct BraneChart {
    std::string id;
    FormPtr form;
    std::vector<RatPolynomial> g;
    std::vector<Rational> gcheck;
    int k = 1;
    // Optional coordinate box for x; empty means unrestricted.
    std::vector<std::pair<double, double>> domain;

    int n() const { return form->n; }
    int dim() const { return 2 * form->n; }

    static std::shared_ptr<const BraneChart> make(std::string id, FormPtr form, std::vector<RatPolynomial> g,
                                                  std::vector<Rational> gcheck, int k) {
        if (!form) throw Error(Errc::InvalidArgument, "chart needs a skew form");
        const int d = 2 * form->n;
        if (g.empty()) g.assign(static_cast<size_t>(d), RatPolynomial(d));
        if (gcheck.empty()) gcheck.assign(static_cast<size_t>(d), Rational(0));
        if (static_cast<int>(g.size()) != d || static_cast<int>(gcheck.size()) != d)
            throw Error(Errc::InvalidArgument, "chart data has wrong arity");
        for (const auto& p : g)
            if (p.nvars() != d) throw Error(Errc::InvalidArgument, "g components must be polynomials in 2n base variables");
        if (k < 1) throw Error(Errc::InvalidArgument, "level k must be positive");
        return std::make_shared<const BraneChart>(BraneChart{std::move(id), std::move(form), std::move(g), std::move(gcheck), k, {}});
    }

    bool contains(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != dim()) return false;
        for (size_t i = 0; i < domain.size(); ++i)
            if (x[i] < domain[i].first || x[i] > domain[i].second) return false;
        return true;
    }

    // Flat chart with g = 0, ǧ = 0 over the standard form diag(h).
    static std::shared_ptr<const BraneChart> flat(std::vector<long> h, int k, std::string id = {}) {
        auto form = std::make_shared<const IntSkewForm>(standard_skew_form(h));
        if (id.empty()) {
            id = "skew:";
            for (size_t i = 0; i < h.size(); ++i) id += (i ? "," : "") + std::to_string(h[i]);
        }
        return make(std::move(id), form, {}, {}, k);
    }

    std::vector<double> g_at(const std::vector<double>& x) const {
        std::vector<double> out;
        out.reserve(g.size());
        for (const auto& p : g) out.push_back(evaluate_real(p, x));
        return out;
    }

    // Jacobian (Dg)_{ab} = ∂g^a/∂x_b, exact.
    std::vector<std::vector<RatPolynomial>> jacobian() const {
        const int d = dim();
        std::vector<std::vector<RatPolynomial>> j(static_cast<size_t>(d));
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) j[static_cast<size_t>(a)].push_back(g[static_cast<size_t>(a)].derivative(b));
        return j;
    }

    Eigen::MatrixXd jacobian_at(const std::vector<double>& x) const {
        const int d = dim();
        Eigen::MatrixXd j(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) j(a, b) = evaluate_real(g[static_cast<size_t>(a)].derivative(b), x);
        return j;
    }

    std::vector<double> gcheck_d() const {
        std::vector<double> out;
        for (const auto& r : gcheck) out.push_back(to_double(r));
        return out;
    }

    // H^{-1} = [[0, D^{-1}], [-D^{-1}, 0]] as doubles.
    Eigen::MatrixXd h_inverse() const {
        const int nn = n();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * nn, 2 * nn);
        for (int i = 0; i < nn; ++i) {
            m(i, nn + i) = 1.0 / form->h(i);
            m(nn + i, i) = -1.0 / form->h(i);
        }
        return m;
    }
};

using ChartPtr = std::shared_ptr<const BraneChart>;

inline bool same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->id == b->id && a->k == b->k && *a->form == *b->form && a->g == b->g && a->gcheck == b->gcheck;
}

// Fixed base sample points used for sup-norm estimates: five points spread over
// a unit box, distinct in every coordinate.
inline std::vector<std::vector<double>> default_base_samples(int dim) {
    std::vector<std::vector<double>> pts;
    for (int s = 0; s < 5; ++s) {
        std::vector<double> x(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) x[static_cast<size_t>(i)] = -0.45 + 0.2 * s + 0.037 * i * (s % 2 ? 1 : -1);
        pts.push_back(x);
    }
    return pts;
}

}  // namespace bq
