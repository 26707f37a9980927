#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "branequant/io/json_io.hpp"
#include "branequant/mirror/connection.hpp"
#include "branequant/verify/random.hpp"
#include "branequant/version.hpp"

namespace bq::verify {

using io::json;

struct RunConfig {
    std::uint64_t seed = 42;
    std::optional<double> tolerance;       // applies to every non-exact check
    std::map<std::string, double> tol;     // per check name or name prefix before '['
    int grid = 256;                        // quadrature points per fiber direction
    int trunc = 10;                        // theta truncation radius Q
    std::optional<int> trials;             // random sample count override

    void validate() const {
        if (tolerance && !(*tolerance > 0)) throw Error(Errc::InvalidArgument, "tolerances must be positive");
        for (const auto& [k, v] : tol)
            if (!(v > 0)) throw Error(Errc::InvalidArgument, "tolerance for '" + k + "' must be positive");
        if (grid < 8) throw Error(Errc::QuadratureUnderflow, "grid must have at least 8 points per direction");
        if (trunc < 0) throw Error(Errc::InvalidArgument, "truncation radius must be nonnegative");
        if (trials && *trials < 1) throw Error(Errc::InvalidArgument, "trial count must be positive");
    }

    double tolerance_for(const std::string& test, double dflt) const {
        if (auto it = tol.find(test); it != tol.end()) return it->second;
        if (auto it = tol.find(test.substr(0, test.find('['))); it != tol.end()) return it->second;
        return tolerance.value_or(dflt);
    }

    int count(int dflt) const { return trials.value_or(dflt); }

    json to_json() const {
        json t = json::object();
        for (const auto& [k, v] : tol) t[k] = v;
        return {{"seed", seed},
                {"tolerance", tolerance ? json(*tolerance) : json(nullptr)},
                {"tolerance_overrides", t},
                {"grid", grid},
                {"truncation", trunc},
                {"trials", trials ? json(*trials) : json(nullptr)}};
    }
};

struct CheckResult {
    std::string test;
    json params;
    double residual = 0.0;
    double tolerance = 0.0;
    bool exact = false;  // residual must be exactly 0
    bool pass = false;
    json observed;       // extra measured quantities, may be null

    json to_json() const {
        json j{{"test", test}, {"params", params}, {"residual", residual}, {"tolerance", tolerance}, {"pass", pass}};
        if (exact) j["exact"] = true;
        if (!observed.is_null()) j["observed"] = observed;
        return j;
    }
};

class Collector {
public:
    explicit Collector(const RunConfig& cfg) : cfg_(cfg) {}

    void tolerance(std::string test, json params, double residual, double dflt, json observed = nullptr) {
        CheckResult c{std::move(test), std::move(params), residual, 0.0, false, false, std::move(observed)};
        c.tolerance = cfg_.tolerance_for(c.test, dflt);
        c.pass = std::isfinite(residual) && residual <= c.tolerance;
        out_.push_back(std::move(c));
    }
    void exact(std::string test, json params, double residual, json observed = nullptr) {
        CheckResult c{std::move(test), std::move(params), residual, 0.0, true, residual == 0.0, std::move(observed)};
        out_.push_back(std::move(c));
    }
    void boolean(std::string test, json params, bool ok, json observed = nullptr) { exact(std::move(test), std::move(params), ok ? 0.0 : 1.0, std::move(observed)); }

    std::vector<CheckResult>& results() { return out_; }

private:
    const RunConfig& cfg_;
    std::vector<CheckResult> out_;
};

// A named block of checks with its own generator, seeded from (seed, name) so the
// result does not depend on which other groups run or in what order.
struct Group {
    std::string suite;
    std::string name;
    std::function<void(const RunConfig&, std::mt19937_64&, Collector&)> run;
};

inline std::uint64_t group_seed(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char ch : name) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return seed ^ h;
}

namespace detail {

inline ChartPtr chart_with(std::vector<long> h, int k, std::vector<RatPolynomial> g = {}, std::vector<Rational> gc = {}) {
    auto form = std::make_shared<const IntSkewForm>(standard_skew_form(h));
    return BraneChart::make("c", form, std::move(g), std::move(gc), k);
}

inline SiegelPoint om1(cplx w) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = w;
    return SiegelPoint::make(m);
}

inline ThetaFrame frame_at(ChartPtr c, std::vector<double> x, std::vector<double> yc, SiegelPoint om, int q) {
    return ThetaFrame::make(FiberPoint::make(std::move(c), std::move(x), std::move(yc)), std::move(om), q);
}

// g = Sx with S symmetric, entries in {−1, −½, 0, ½, 1}.
inline std::vector<RatPolynomial> linear_g(int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(-2, 2);
    std::vector<std::vector<Rational>> s(static_cast<size_t>(d), std::vector<Rational>(static_cast<size_t>(d)));
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) s[static_cast<size_t>(a)][static_cast<size_t>(b)] = s[static_cast<size_t>(b)][static_cast<size_t>(a)] = Rational(pick(rng), 2);
    std::vector<RatPolynomial> g;
    for (int a = 0; a < d; ++a) {
        std::vector<Rational> row(s[static_cast<size_t>(a)]);
        g.push_back(RatPolynomial::linear(d, row));
    }
    return g;
}

inline double rel_diff(const FourierPolynomial& a, const FourierPolynomial& b) {
    return a.max_abs_diff(b) / std::max(1.0, std::max(a.max_abs_coeff(), b.max_abs_coeff()));
}

inline std::string tag(const std::string& base, const json& params) {
    std::string s = base + "[";
    bool first = true;
    for (const auto& [k, v] : params.items()) {
        s += (first ? "" : ",") + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
        first = false;
    }
    return s + "]";
}

inline std::string cplx_label(cplx w) {
    std::ostringstream os;
    os << w.real() << (w.imag() < 0 ? "" : "+") << w.imag() << "i";
    return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------- mirror

inline void mirror_homomorphism(const RunConfig& cfg, std::mt19937_64& rng, Collector& out) {
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    const int pairs = cfg.count(50);
    for (long h : {1L, 2L})
        for (int k : {1, 2, 3}) {
            auto c = detail::chart_with({h}, k, {}, {Rational(1, 7), Rational(-2, 5)});
            std::vector<ThetaFrame> pts;
            for (int s = 0; s < 5; ++s) {
                std::vector<double> x{u(rng), u(rng)};
                std::vector<double> yc{u(rng), u(rng)};
                pts.push_back(detail::frame_at(c, x, yc, SiegelPoint::scalar_i(1), cfg.trunc));
            }
            double worst = 0.0;
            for (int t = 0; t < pairs; ++t) {
                auto f = random_fourier(c, 3, 2, 4, rng);
                auto g = random_fourier(c, 3, 2, 4, rng);
                worst = std::max(worst, mirror_homomorphism_check(f, g, pts));
            }
            json p{{"n", 1}, {"h", h}, {"k", k}, {"pairs", pairs}, {"points", 5}, {"band", 3}, {"base_degree", 2}};
            out.tolerance(detail::tag("mirror.homomorphism", {{"h", h}, {"k", k}}), p, worst, 1e-10);
        }
}

inline void mirror_homomorphism_forms(const RunConfig& cfg, std::mt19937_64& rng, Collector& out) {
    auto c = detail::chart_with({1, 2}, 2);
    std::vector<ThetaFrame> pts{detail::frame_at(c, {0.1, 0.2, -0.1, 0.0}, {0.3, 0.1, 0.7, -0.2}, SiegelPoint::scalar_i(2), cfg.trunc)};
    double worst = 0.0;
    const int trials = std::min(cfg.count(5), 20);
    for (int t = 0; t < trials; ++t)
    {
        auto a = random_form(c, 1, 1, 1, rng);
        auto b = random_form(c, 2, 1, 1, rng);
        worst = std::max(worst, mirror_homomorphism_check(a, b, pts));
    }
    out.tolerance("mirror.homomorphism_forms[n=2,h=(1,2),k=2]", {{"n", 2}, {"h", {1, 2}}, {"k", 2}, {"pairs", trials}}, worst, 1e-10);
}

inline void mirror_toeplitz_quadrature(const RunConfig& cfg, std::mt19937_64&, Collector& out) {
    for (long h : {1L, 2L})
        for (cplx w : {cplx(0, 1), cplx(1, 2)}) {
            auto c = detail::chart_with({h}, 2, {}, {Rational(1, 3), Rational(1, 5)});
            auto fr = detail::frame_at(c, {0.1, -0.2}, {0.35, -0.15}, detail::om1(w), cfg.trunc);
            auto basis = sample_theta_basis(fr, cfg.grid);
            double worst = 0.0;
            int count = 0;
            for (int a = -2; a <= 2; ++a)
                for (int b = -2; b <= 2; ++b) {
                    auto f = FourierPolynomial::single_mode(c, {a, b});
                    auto cf = twisted_toeplitz_matrix(f, fr);
                    auto qd = toeplitz_quadrature_oracle(f, fr, cfg.grid, basis);
                    worst = std::max(worst, (cf.entries - qd.entries).cwiseAbs().maxCoeff());
                    ++count;
                }
            json p{{"n", 1}, {"k", 2}, {"h", h}, {"omega", detail::cplx_label(w)}, {"G", cfg.grid}, {"Q", cfg.trunc}, {"modes", count}};
            out.tolerance(detail::tag("mirror.toeplitz_quadrature", {{"h", h}, {"omega", detail::cplx_label(w)}}), p, worst, 1e-6);
        }
}

inline void mirror_intertwining(const RunConfig& cfg, std::mt19937_64& rng, Collector& out) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const int trials = std::min(cfg.count(6), 50);
    for (int n : {1, 2}) {
        std::vector<long> hs(static_cast<size_t>(n), 1);
        hs.back() = 2;
        auto c = detail::chart_with(hs, 2, detail::linear_g(2 * n, rng), std::vector<Rational>(static_cast<size_t>(2 * n), Rational(1, 3)));
        auto conn = MirrorConnection::make(c);
        std::vector<std::vector<double>> xs, ts;
        for (int s = 0; s < 4; ++s) {
            std::vector<double> x(static_cast<size_t>(2 * n)), t(static_cast<size_t>(n));
            for (auto& v : x) v = u(rng);
            for (auto& v : t) v = 2.0 * u(rng);
            xs.push_back(x);
            ts.push_back(t);
        }
        double worst[2] = {0.0, 0.0};
        for (int trial = 0; trial < trials; ++trial) {
            Mode m = random_mode(2 * n, 2, rng);
            auto f = FourierPolynomial::single_mode(c, m, random_base_polynomial(2 * n, 2, rng));
            MirrorSectionRep s(n);
            std::vector<double> center(static_cast<size_t>(n)), alpha(static_cast<size_t>(n));
            for (auto& v : center) v = u(rng);
            for (auto& v : alpha) v = u(rng);
            s.add_term({random_base_polynomial(3 * n, 1, rng), alpha, 1.5, center});
            for (int j = 0; j < 2 * n; ++j) {
                double r = intertwining_residual(conn, f, j, s, xs, ts);
                worst[j < n ? 0 : 1] = std::max(worst[j < n ? 0 : 1], r);
            }
        }
        for (int branch = 0; branch < 2; ++branch) {
            const char* b = branch == 0 ? "j<n" : "j>=n";
            json p{{"n", n}, {"h", hs}, {"k", 2}, {"g", "linear"}, {"branch", b}, {"trials", trials}};
            out.tolerance(detail::tag("mirror.dolbeault_intertwining", {{"n", n}, {"branch", b}}), p, worst[branch], 1e-10);
        }
    }
}

inline void mirror_curvature(const RunConfig&, std::mt19937_64& rng, Collector& out) {
    for (int n : {1, 2})
        for (long h : {1L, 2L})
            for (int k : {1, 2})
                for (bool lin : {false, true}) {
                    std::vector<long> hs(static_cast<size_t>(n), 1);
                    hs.back() = h;
                    auto c = detail::chart_with(hs, k, lin ? detail::linear_g(2 * n, rng) : std::vector<RatPolynomial>{}, {});
                    auto curv = curvature_form(MirrorConnection::make(c));
                    json p{{"n", n}, {"h", hs}, {"k", k}, {"g", lin ? "linear" : "zero"}};
                    json key{{"n", n}, {"h", h}, {"k", k}, {"g", lin ? "linear" : "zero"}};
                    out.boolean(detail::tag("mirror.curvature_mixed", key), p, curv.matches_expected());
                    out.boolean(detail::tag("mirror.curvature_pure_parts", key), p, curv.pure_parts_vanish());
                }
}

inline void mirror_reconstruct(const RunConfig& cfg, std::mt19937_64& rng, Collector& out) {
    const int total = cfg.count(50);
    double worst[4] = {0, 0, 0, 0};
    int count[4] = {0, 0, 0, 0};
    for (int t = 0; t < total; ++t) {
        const int cfg_idx = t % 4;
        const long h = 1 + cfg_idx / 2;
        const int k = 1 + cfg_idx % 2;
        auto c = detail::chart_with({h}, k, {}, {Rational(1, 5), Rational(2, 3)});
        auto f = random_fourier(c, 2, 2, 4, rng);
        auto back = reconstruct_symbol(toeplitz_family(f, 2));
        worst[cfg_idx] = std::max(worst[cfg_idx], back.max_abs_diff(f));
        ++count[cfg_idx];
    }
    for (int i = 0; i < 4; ++i) {
        if (count[i] == 0) continue;
        const long h = 1 + i / 2;
        const int k = 1 + i % 2;
        json p{{"n", 1}, {"h", h}, {"k", k}, {"band", 2}, {"base_degree", 2}, {"symbols", count[i]}};
        out.tolerance(detail::tag("mirror.reconstruct_roundtrip", {{"h", h}, {"k", k}}), p, worst[i], 1e-12);
    }
}

// ---------------------------------------------------------------- theta / bks

inline void theta_gram(const RunConfig& cfg, std::mt19937_64&, Collector& out) {
    for (long h : {1L, 2L})
        for (int k : {1, 2}) {
            auto chart = detail::chart_with({h}, k, {}, {Rational(1, 3), Rational(-1, 5)});
            auto p = FiberPoint::make(chart, {0.2, -0.1}, {0.37, -0.61});
            auto fa = ThetaFrame::make(p, SiegelPoint::scalar_i(1), cfg.trunc);
            auto fb = ThetaFrame::make(p, detail::om1(cplx(0.3, 1.2)), cfg.trunc);
            const std::pair<const ThetaFrame*, const ThetaFrame*> pairs[] = {{&fa, &fa}, {&fa, &fb}, {&fb, &fb}};
            const char* names[] = {"i,i", "i,0.3+1.2i", "0.3+1.2i,0.3+1.2i"};
            for (int q = 0; q < 3; ++q) {
                Eigen::MatrixXcd g = bq::theta_gram(*pairs[q].first, *pairs[q].second, cfg.grid);
                double r = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
                json prm{{"n", 1}, {"h", h}, {"k", k}, {"omegas", names[q]}, {"G", cfg.grid}, {"Q", cfg.trunc}};
                out.tolerance(detail::tag("theta.gram", {{"h", h}, {"k", k}, {"omegas", names[q]}}), prm, r, 1e-6);
            }
        }
}

inline void theta_dimension_law(const RunConfig&, std::mt19937_64&, Collector& out) {
    const std::vector<std::vector<long>> hs{{1}, {2}, {3}, {1, 1}, {1, 2}, {2, 4}, {1, 1, 1}, {1, 2, 2}, {1, 2, 6}};
    for (const auto& h : hs)
        for (int k : {1, 2, 3}) {
            auto c = detail::chart_with(h, k);
            auto idx = representative_indices(*c);
            long expect = 1;
            for (long v : h) expect *= k * v;
            std::set<Index> distinct(idx.begin(), idx.end());
            bool in_range = true;
            for (const auto& l : idx)
                for (size_t i = 0; i < h.size(); ++i) in_range = in_range && l[i] >= 0 && l[i] < k * h[i];
            bool ok = static_cast<long>(idx.size()) == expect && static_cast<long>(distinct.size()) == expect && in_range &&
                      frame_dimension(*c) == expect;
            json p{{"n", h.size()}, {"h", h}, {"k", k}};
            out.boolean(detail::tag("theta.dimension_law", {{"h", h}, {"k", k}}), p, ok, {{"size", idx.size()}, {"expected", expect}});
        }
}

inline void bks_laws(const RunConfig& cfg, std::mt19937_64& rng, Collector& out) {
    {
        auto chart = detail::chart_with({2}, 2);
        auto p = FiberPoint::make(chart, {0.1, 0.2}, {0.3, 0.4});
        auto f1 = ThetaFrame::make(p, SiegelPoint::scalar_i(1), cfg.trunc);
        auto f2 = ThetaFrame::make(p, detail::om1(cplx(0.4, 1.5)), cfg.trunc);
        auto f3 = ThetaFrame::make(p, detail::om1(cplx(-0.7, 0.6)), cfg.trunc);
        std::normal_distribution<double> nd;
        double worst = 0.0;
        const int trials = cfg.count(20);
        for (int t = 0; t < trials; ++t) {
            Eigen::VectorXcd c(4);
            for (int i = 0; i < 4; ++i) c(i) = cplx(nd(rng), nd(rng));
            auto s = QuantumState::make(f1, c);
            auto direct = bks_transform(s, f3);
            auto composed = bks_transform(bks_transform(s, f2), f3);
            worst = std::max(worst, (direct.coeffs - composed.coeffs).cwiseAbs().maxCoeff());
            worst = std::max(worst, (bks_transform(s, f1).coeffs - s.coeffs).cwiseAbs().maxCoeff());
        }
        out.exact("bks.composition[h=2,k=2]", {{"n", 1}, {"h", 2}, {"k", 2}, {"states", trials}}, worst);
    }
    for (long h : {1L, 2L}) {
        auto chart = detail::chart_with({h}, 2, {}, {Rational(1, 2), Rational(0)});
        auto p = FiberPoint::make(chart, {0.0, 0.3}, {0.25, -0.4});
        auto from = ThetaFrame::make(p, detail::om1(cplx(0.5, 0.7)), cfg.trunc);
        auto to = ThetaFrame::make(p, detail::om1(cplx(-0.2, 1.4)), cfg.trunc);
        Eigen::MatrixXcd m = bks_quadrature_matrix(from, to, cfg.grid);
        double r = (m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
        out.tolerance(detail::tag("bks.quadrature_identity", {{"h", h}}), {{"n", 1}, {"h", h}, {"k", 2}, {"G", cfg.grid}}, r, 1e-6);
    }
    for (long h : {1L, 2L}) {
        auto c = detail::chart_with({h}, 2, {}, {Rational(1, 3), Rational(0)});
        auto p = FiberPoint::make(c, {0.05, 0.1}, {0.3, 0.2});
        auto fa = ThetaFrame::make(p, SiegelPoint::scalar_i(1), cfg.trunc);
        auto fb = ThetaFrame::make(p, detail::om1(cplx(0.4, 1.3)), cfg.trunc);
        auto f = random_fourier(c, 1, 0, 3, rng);
        auto ba = sample_theta_basis(fa, cfg.grid), bb = sample_theta_basis(fb, cfg.grid);
        auto ta = toeplitz_quadrature_oracle(f, fa, cfg.grid, ba).entries;
        auto tb = toeplitz_quadrature_oracle(f, fb, cfg.grid, bb).entries;
        Eigen::MatrixXcd b = bks_quadrature_matrix(fa, fb, cfg.grid);
        double r = (b * ta * b.inverse() - tb).cwiseAbs().maxCoeff();
        out.tolerance(detail::tag("bks.omega_independence", {{"h", h}}), {{"n", 1}, {"h", h}, {"k", 2}, {"G", cfg.grid}}, r, 1e-8);
    }
}

// ---------------------------------------------------------------- dga

inline void dga_laws(const RunConfig& cfg, std::mt19937_64& rng, Collector& out) {
    const int trials = cfg.count(20);
    for (auto h : std::vector<std::vector<long>>{{1}, {2}, {1, 2}}) {
        auto c = detail::chart_with(h, 1);
        double assoc = 0.0, unit = 0.0;
        auto one = FourierPolynomial::constant(c, 1.0);
        for (int t = 0; t < trials; ++t) {
            auto f = random_fourier(c, 2, 1, 3, rng);
            auto g = random_fourier(c, 2, 1, 3, rng);
            auto k = random_fourier(c, 2, 1, 3, rng);
            double hb = 0.1 + 0.05 * (t % 10);
            assoc = std::max(assoc, detail::rel_diff(star_product(star_product(f, g, hb), k, hb), star_product(f, star_product(g, k, hb), hb)));
            unit = std::max({unit, star_product(one, f, hb).max_abs_diff(f), star_product(f, one, hb).max_abs_diff(f)});
        }
        json p{{"n", h.size()}, {"h", h}, {"triples", trials}};
        out.tolerance(detail::tag("dga.associativity", {{"h", h}}), p, assoc, 1e-12);
        out.exact(detail::tag("dga.unit", {{"h", h}}), p, unit);
    }
    {
        auto c = detail::chart_with({1, 2}, 1);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            int p = t % 3, q = (t / 3) % 2;
            auto a = random_form(c, p, 2, 2, rng);
            auto b = random_form(c, q, 2, 2, rng);
            const double hb = 0.25;
            auto lhs = dolbeault(graded_star(a, b, hb));
            auto rhs = graded_star(dolbeault(a), b, hb) + cplx(p % 2 ? -1.0 : 1.0) * graded_star(a, dolbeault(b), hb);
            double scale = 1.0;
            for (const auto& [i, f] : lhs.components()) scale = std::max(scale, f.max_abs_coeff());
            worst = std::max(worst, lhs.max_abs_diff(rhs) / scale);
            auto dd = dolbeault(dolbeault(a));
            for (const auto& [i, f] : dd.components()) worst = std::max(worst, f.max_abs_coeff() / scale);
        }
        out.tolerance("dga.leibniz[n=2,h=(1,2)]", {{"n", 2}, {"h", {1, 2}}, {"hbar", 0.25}, {"pairs", trials}}, worst, 1e-12);
    }
    // The defect ratio between ħ and ħ/2 is measured, not assumed.
    auto c = detail::chart_with({1}, 1);
    std::vector<std::pair<FourierPolynomial, FourierPolynomial>> pairs;
    for (int t = 0; t < trials; ++t) {
        auto f = random_fourier(c, 2, 1, 3, rng);
        auto g = random_fourier(c, 2, 1, 3, rng);
        pairs.emplace_back(std::move(f), std::move(g));
    }
    for (auto [h0, h1] : {std::pair{0.2, 0.1}, std::pair{0.1, 0.05}}) {
        double worst = 0.0, lo = 1e300, hi = 0.0;
        int used = 0;
        for (const auto& [f, g] : pairs) {
            double d0 = semiclassical_defect(f, g, h0), d1 = semiclassical_defect(f, g, h1);
            if (d0 == 0.0) continue;
            double ratio = d1 / d0;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            worst = std::max(worst, std::abs(ratio - 0.5) / 0.5);
            ++used;
        }
        json p{{"n", 1}, {"h", 1}, {"hbar", h0}, {"hbar_half", h1}, {"pairs", used}, {"expected_ratio", 0.5}};
        out.tolerance(detail::tag("dga.defect_halving", {{"hbar", h0}}), p, worst, 0.2, {{"min_ratio", lo}, {"max_ratio", hi}});
    }
}

// ---------------------------------------------------------------- atlas

inline void atlas_examples(const RunConfig& cfg, std::mt19937_64&, Collector& out) {
    struct Ex {
        std::string name;
        long a;
        long factor;
    };
    for (const auto& ex : std::vector<Ex>{{"cylinder2", 0, 1}, {"kodaira-thurston", 1, 1}, {"ooguri-vafa", 0, 2}}) {
        auto at = builtin_example(ex.name, ex.a);
        json p{{"example", ex.name}};
        if (ex.name == "kodaira-thurston") p["a"] = ex.a;
        bool valid = true;
        std::string why;
        for (const auto& c : at.charts) {
            auto r = validate_chart(*c);
            if (!r.ok()) {
                valid = false;
                for (const auto& it : r.items)
                    if (!it.pass) why += c->id + ": " + it.name + " (" + it.detail + "); ";
            }
        }
        out.boolean(detail::tag("atlas.validate_chart", {{"example", ex.name}}), p, valid, why.empty() ? json(nullptr) : json(why));
        bool factors = true;
        json seen = json::array();
        for (const auto& c : at.charts) {
            factors = factors && c->n() == 1 && c->form->h_int(0) == ex.factor;
            seen.push_back(c->form->h_int(0));
        }
        out.boolean(detail::tag("atlas.invariant_factors", {{"example", ex.name}}), p, factors, {{"factors", seen}, {"expected", ex.factor}});
        bool consistent = true;
        for (const auto& t : at.transitions) consistent = consistent && transition_consistency(at, t).ok();
        out.boolean(detail::tag("atlas.transition_consistency", {{"example", ex.name}}), p, consistent, {{"transitions", at.transitions.size()}});
        double defect = 0.0;
        int samples = 0;
        if (!at.triples.empty()) {
            auto rep = cocycle_check(at);
            defect = rep.max_defect;
            for (const auto& e : rep.entries) samples += e.samples;
        }
        out.tolerance(detail::tag("atlas.cocycle", {{"example", ex.name}}), p, defect, 1e-12, {{"triples", at.triples.size()}, {"samples", samples}});
    }
    {
        auto at = kodaira_thurston_atlas(0);
        double defect = cocycle_check(at).max_defect;
        out.tolerance("atlas.cocycle[example=kodaira-thurston,a=0]", {{"example", "kodaira-thurston"}, {"a", 0}}, defect, 1e-12);
    }
    for (long a : {0L, 1L, 2L}) {
        auto r = kodaira_thurston_coframe_check(a);
        out.boolean(detail::tag("atlas.coframe", {{"a", a}}), {{"a", a}}, r.ok(),
                    {{"closed_124", r.closed_124}, {"structure_equation", r.structure_eq}, {"deck_invariant", r.deck_invariant}});
    }
    {
        auto raw = cylinder_raw_data();
        auto res = reduce_to_skew_smith(raw);
        bool ok = reassembly_check(raw, res).ok() && res.chart->form->h_int(0) == 1;
        out.boolean("atlas.skew_smith_reduction[example=cylinder2]", {{"example", "cylinder2"}}, ok);
    }
    (void)cfg;
}

// ---------------------------------------------------------------- siegel

inline void siegel_identities(const RunConfig& cfg, std::mt19937_64& rng, Collector& out) {
    std::normal_distribution<double> nd;
    const int trials = cfg.count(100);
    for (auto h : std::vector<std::vector<long>>{{1}, {2}, {1, 2}}) {
        auto form = std::make_shared<const IntSkewForm>(standard_skew_form(h));
        const int n = form->n;
        double transport = 0.0, assoc = 0.0, positivity = 1e300;
        for (int t = 0; t < trials; ++t) {
            auto a = random_twisted_symplectic(form, rng);
            auto b = random_twisted_symplectic(form, rng);
            SiegelPoint om = random_siegel_point(n, rng);
            Eigen::VectorXd y(2 * n);
            for (int i = 0; i < 2 * n; ++i) y(i) = nd(rng);
            transport = std::max(transport, frame_transport_check(a, om, y));
            SiegelPoint lhs = siegel_action(a * b, om);
            SiegelPoint rhs = siegel_action(a, siegel_action(b, om));
            assoc = std::max(assoc, (lhs.omega - rhs.omega).cwiseAbs().maxCoeff());
            positivity = std::min(positivity, lhs.min_imag_eigenvalue());
        }
        json p{{"n", n}, {"h", h}, {"trials", trials}};
        out.tolerance(detail::tag("siegel.frame_transport", {{"h", h}}), p, transport, 1e-12);
        out.tolerance(detail::tag("siegel.action_associativity", {{"h", h}}), p, assoc, 1e-10, {{"min_imag_eigenvalue", positivity}});
    }
}

// ---------------------------------------------------------------- registry

inline const std::vector<Group>& groups() {
    static const std::vector<Group> g{
        {"mirror", "homomorphism", mirror_homomorphism},
        {"mirror", "homomorphism_forms", mirror_homomorphism_forms},
        {"mirror", "toeplitz_quadrature", mirror_toeplitz_quadrature},
        {"mirror", "dolbeault_intertwining", mirror_intertwining},
        {"mirror", "curvature", mirror_curvature},
        {"mirror", "reconstruct", mirror_reconstruct},
        {"theta", "gram", theta_gram},
        {"theta", "dimension_law", theta_dimension_law},
        {"bks", "laws", bks_laws},
        {"dga", "laws", dga_laws},
        {"atlas", "examples", atlas_examples},
        {"siegel", "identities", siegel_identities},
    };
    return g;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> s{"mirror", "theta", "bks", "dga", "atlas", "siegel", "all"};
    return s;
}

inline bool known_suite(const std::string& s) { return std::find(suite_names().begin(), suite_names().end(), s) != suite_names().end(); }

inline std::vector<CheckResult> run_group(const Group& g, const RunConfig& cfg) {
    std::mt19937_64 rng(group_seed(cfg.seed, g.suite + "." + g.name));
    Collector c(cfg);
    g.run(cfg, rng, c);
    return std::move(c.results());
}

struct SuiteReport {
    std::string suite;
    RunConfig config;
    std::vector<CheckResult> checks;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    }

    json to_json() const {
        json cs = json::array();
        for (const auto& c : checks) cs.push_back(c.to_json());
        int failed = 0;
        for (const auto& c : checks) failed += c.pass ? 0 : 1;
        return {{"suite", suite},
                {"library", kLibraryName},
                {"version", kVersion},
                {"config", config.to_json()},
                {"checks", cs},
                {"failed", failed},
                {"pass", pass()}};
    }
};

// Checks are sorted by name before the report is assembled.
inline SuiteReport run_suite(const std::string& suite, const RunConfig& cfg) {
    if (!known_suite(suite)) throw Error(Errc::UnknownExample, "unknown suite '" + suite + "'");
    cfg.validate();
    SuiteReport rep{suite, cfg, {}};
    for (const auto& g : groups()) {
        if (suite != "all" && g.suite != suite) continue;
        auto r = run_group(g, cfg);
        rep.checks.insert(rep.checks.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    std::stable_sort(rep.checks.begin(), rep.checks.end(), [](const CheckResult& a, const CheckResult& b) { return a.test < b.test; });
    return rep;
}

}  // namespace bq::verify
