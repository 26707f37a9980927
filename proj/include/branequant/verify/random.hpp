#pragma once

#include <random>

#include "branequant/fiber/dolbeault.hpp"

namespace bq {

template <class Rng>
BasePolynomial random_base_polynomial(int nvars, int degree, Rng& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    BasePolynomial p(nvars);
    std::vector<int> e(static_cast<size_t>(nvars), 0);
    // every exponent vector with total degree ≤ degree
    for (;;) {
        int s = 0;
        for (int v : e) s += v;
        if (s <= degree) {
            const double re = u(rng);
            const double im = u(rng);
            p.add_term(e, cplx(re, im));
        }
        size_t i = 0;
        while (i < e.size()) {
            if (++e[i] <= degree) break;
            e[i] = 0;
            ++i;
        }
        if (i == e.size()) break;
    }
    return p;
}

template <class Rng>
Mode random_mode(int dim, int band, Rng& rng) {
    std::uniform_int_distribution<int> d(-band, band);
    Mode m(static_cast<size_t>(dim));
    for (auto& v : m) v = d(rng);
    return m;
}

// Band-limited symbol with `terms` random modes in the band and random base
// coefficients of total degree ≤ degree.
template <class Rng>
FourierPolynomial random_fourier(const ChartPtr& chart, int band, int degree, int terms, Rng& rng, double scale = 1.0) {
    FourierPolynomial f(chart);
    for (int t = 0; t < terms; ++t)
    {
        Mode m = random_mode(chart->dim(), band, rng);
        f.add(m, random_base_polynomial(chart->dim(), degree, rng, scale));
    }
    return f;
}

template <class Rng>
DolbeaultForm random_form(const ChartPtr& chart, int degree, int band, int base_degree, Rng& rng) {
    const int d = chart->dim();
    DolbeaultForm a(chart);
    std::uniform_int_distribution<int> pick(0, d - 1);
    for (int t = 0; t < 2; ++t) {
        std::vector<int> idx;
        while (static_cast<int>(idx.size()) < degree) {
            int j = pick(rng);
            if (std::find(idx.begin(), idx.end(), j) == idx.end()) idx.push_back(j);
        }
        std::sort(idx.begin(), idx.end());
        a.add(idx, random_fourier(chart, band, base_degree, 2, rng));
    }
    return a;
}

}  // namespace bq
