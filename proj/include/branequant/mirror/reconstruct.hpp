#pragma once

#include <functional>
#include <optional>

#include "branequant/mirror/toeplitz.hpp"

namespace bq {

// Closed-form matrices of one symbol sampled on a tensor grid of base points and a
// uniform (ǔ₁, ǔ₂) grid. `band` is the shift data: without it the grid cannot be
// matched to the mode lattice.
struct ToeplitzFamily {
    ChartPtr chart;
    std::optional<int> band;
    int base_degree = 0;
    std::vector<std::vector<double>> base_points;
    int n1 = 0, n2 = 0;
    // matrices[b * grid + r]: base point b, fiber grid point r (ǔ₁ digits first, then ǔ₂)
    std::vector<Eigen::MatrixXcd> matrices;

    long fiber_grid() const { return grid_size(chart->n(), n1) * grid_size(chart->n(), n2); }

    // ǔ at fiber grid index r: ǔ₁_i = j·k h_i / n1, ǔ₂_i = j / n2.
    std::vector<double> ucheck_at(long r) const {
        const int n = chart->n();
        std::vector<double> u(static_cast<size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            u[static_cast<size_t>(i)] = static_cast<double>(r % n1) * chart->k * chart->form->h(i) / n1;
            r /= n1;
        }
        for (int i = 0; i < n; ++i) {
            u[static_cast<size_t>(n + i)] = static_cast<double>(r % n2) / n2;
            r /= n2;
        }
        return u;
    }
};

// Tensor grid with s points per base direction, inside the chart domain when it has one.
inline std::vector<std::vector<double>> base_sample_grid(const BraneChart& chart, int s) {
    const int d = chart.dim();
    std::vector<std::vector<double>> out;
    const long total = grid_size(d, s);
    for (long r = 0; r < total; ++r) {
        std::vector<double> x(static_cast<size_t>(d));
        long rr = r;
        for (int i = 0; i < d; ++i) {
            double lo = -0.4, hi = 0.4;
            if (!chart.domain.empty()) {
                const auto& [a, b] = chart.domain[static_cast<size_t>(i)];
                lo = a + 0.1 * (b - a);
                hi = b - 0.1 * (b - a);
            }
            const double frac = s == 1 ? 0.5 : static_cast<double>(rr % s) / (s - 1);
            x[static_cast<size_t>(i)] = lo + (hi - lo) * frac + 0.013 * (i + 1);
            rr /= s;
        }
        if (chart.contains(x)) out.push_back(std::move(x));
    }
    return out;
}

inline ToeplitzFamily toeplitz_family(const FourierPolynomial& f, std::optional<int> band, int samples_per_direction = 5) {
    const auto& ch = f.chart();
    ToeplitzFamily fam;
    fam.chart = ch;
    fam.band = band;
    for (const auto& [m, p] : f.modes()) fam.base_degree = std::max(fam.base_degree, p.total_degree());
    fam.base_points = base_sample_grid(*ch, samples_per_direction);
    const int b = band.value_or(f.band());
    fam.n1 = 2 * b + 2;
    fam.n2 = 2 * b + 4;
    const long grid = fam.fiber_grid();
    auto om = SiegelPoint::scalar_i(ch->n());
    std::vector<double> yc(static_cast<size_t>(ch->dim()));
    for (const auto& x : fam.base_points)
        for (long r = 0; r < grid; ++r) {
            auto u = fam.ucheck_at(r);
            for (size_t i = 0; i < u.size(); ++i) yc[i] = u[i] + ch->k * to_double(ch->gcheck[i]);
            auto frame = ThetaFrame::make(FiberPoint::make(ch, x, yc), om);
            fam.matrices.push_back(twisted_toeplitz_matrix(f, frame).entries);
        }
    return fam;
}

namespace detail {

inline std::vector<std::vector<int>> monomials_up_to(int nvars, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(static_cast<size_t>(nvars), 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == nvars) {
            out.push_back(e);
            return;
        }
        for (int p = 0; p <= left; ++p) {
            e[static_cast<size_t>(var)] = p;
            rec(var + 1, left - p);
        }
        e[static_cast<size_t>(var)] = 0;
    };
    rec(0, degree);
    return out;
}

}  // namespace detail

// Inverse of Φ on band-limited symbols. Column l = 0 at the entry l̃ carries the modes
// m₁ = l̃ + k𝑯q̃; a DFT over ǔ₂ separates q̃ and a DFT over ǔ₁ (period k𝑯)
// separates m₂. Base coefficients are then fitted by least squares in x.
inline FourierPolynomial reconstruct_symbol(const ToeplitzFamily& fam, double drop_below = 1e-14) {
    if (!fam.band) throw Error(Errc::BandUnknown, "reconstruction needs the recorded mode band");
    const auto& ch = fam.chart;
    const int n = ch->n();
    const int d = ch->dim();
    const int b = *fam.band;
    const int k = ch->k;
    const long grid = fam.fiber_grid();
    if (static_cast<long>(fam.matrices.size()) != grid * static_cast<long>(fam.base_points.size()))
        throw Error(Errc::InvalidArgument, "family has the wrong number of matrices");
    auto mons = detail::monomials_up_to(d, fam.base_degree);
    if (fam.base_points.size() < mons.size()) throw Error(Errc::InvalidArgument, "too few base samples for the degree");

    auto dummy = ThetaFrame::make(FiberPoint::make(ch, fam.base_points.front(), std::vector<double>(static_cast<size_t>(d), 0.0)),
                                  SiegelPoint::scalar_i(n));
    const auto rows = dummy.indices();

    // values[m][base point]
    std::map<Mode, std::vector<cplx>> values;
    std::vector<std::vector<double>> us;
    for (long r = 0; r < grid; ++r) us.push_back(fam.ucheck_at(r));
    for (const auto& lt : rows) {
        const auto row = dummy.linear_index(lt);
        std::vector<long> zero(static_cast<size_t>(n), 0);
        detail::for_box(zero, b + 1, [&](const std::vector<long>& q) {
            Mode m(static_cast<size_t>(d), 0);
            for (int i = 0; i < n; ++i) {
                const long m1 = lt[static_cast<size_t>(i)] + k * ch->form->h_int(i) * q[static_cast<size_t>(i)];
                if (std::abs(m1) > b) return;
                m[static_cast<size_t>(i)] = static_cast<int>(m1);
            }
            detail::for_box(zero, b, [&](const std::vector<long>& mm2) {
                for (int i = 0; i < n; ++i) m[static_cast<size_t>(n + i)] = static_cast<int>(mm2[static_cast<size_t>(i)]);
                // constant phase −(1/k) m₂·𝑯⁻¹(½m₁ − l̃) in turns
                double ph0 = 0.0;
                for (int i = 0; i < n; ++i)
                    ph0 += -mm2[static_cast<size_t>(i)] / ch->form->h(i) * (0.5 * m[static_cast<size_t>(i)] - lt[static_cast<size_t>(i)]) / k;
                std::vector<cplx> vals;
                for (size_t bp = 0; bp < fam.base_points.size(); ++bp) {
                    cplx acc = 0.0;
                    for (long r = 0; r < grid; ++r) {
                        const auto& u = us[static_cast<size_t>(r)];
                        double ph = 0.0;
                        for (int i = 0; i < n; ++i) {
                            ph += mm2[static_cast<size_t>(i)] / ch->form->h(i) * u[static_cast<size_t>(i)] / k;
                            ph -= q[static_cast<size_t>(i)] * u[static_cast<size_t>(n + i)];
                        }
                        acc += fam.matrices[bp * static_cast<size_t>(grid) + static_cast<size_t>(r)](row, 0) * std::polar(1.0, 2.0 * pi * ph);
                    }
                    vals.push_back(acc / static_cast<double>(grid) * std::polar(1.0, -2.0 * pi * ph0));
                }
                values.emplace(m, std::move(vals));
            });
        });
    }

    Eigen::MatrixXcd v(static_cast<Eigen::Index>(fam.base_points.size()), static_cast<Eigen::Index>(mons.size()));
    for (size_t p = 0; p < fam.base_points.size(); ++p)
        for (size_t j = 0; j < mons.size(); ++j) {
            double t = 1.0;
            for (int i = 0; i < d; ++i) t *= std::pow(fam.base_points[p][static_cast<size_t>(i)], mons[j][static_cast<size_t>(i)]);
            v(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j)) = t;
        }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(v);
    FourierPolynomial out(ch);
    for (const auto& [m, vals] : values) {
        Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
        if (rhs.cwiseAbs().maxCoeff() < drop_below) continue;
        Eigen::VectorXcd c = qr.solve(rhs);
        BasePolynomial p(d);
        for (size_t j = 0; j < mons.size(); ++j)
            if (std::abs(c(static_cast<Eigen::Index>(j))) >= drop_below) p.add_term(mons[j], c(static_cast<Eigen::Index>(j)));
        out.add(m, p);
    }
    return out;
}

}  // namespace bq
