#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "branequant/core/polynomial.hpp"

namespace bq {

inline constexpr int kMaxSectionDegree = 8;

// One summand P(x, t) e^{2πi α·t} e^{−γ|t − c|²}. P is a polynomial in the 2n
// base coordinates followed by the n mirror-fiber coordinates t.
struct GaussTerm {
    BasePolynomial poly;
    std::vector<double> alpha;
    double gamma = 1.0;
    std::vector<double> center;
};

// Finite sum of polynomial-times-Gaussian terms in t with polynomial x-dependence:
// the representation of ⟨s⟩ for a mirror section. Closed under shifts in t,
// multiplication by linear phases and polynomials, and differentiation.
class MirrorSectionRep {
public:
    MirrorSectionRep() = default;
    explicit MirrorSectionRep(int n) : n_(n) {}

    static MirrorSectionRep gaussian(int n, const std::vector<double>& center, double gamma, cplx c = 1.0,
                                     std::vector<double> alpha = {}) {
        MirrorSectionRep s(n);
        if (alpha.empty()) alpha.assign(static_cast<size_t>(n), 0.0);
        s.add_term({BasePolynomial::constant(3 * n, c), alpha, gamma, center});
        return s;
    }

    int n() const { return n_; }
    int nvars() const { return 3 * n_; }
    const std::vector<GaussTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(GaussTerm t) {
        if (t.poly.nvars() != 3 * n_ || static_cast<int>(t.alpha.size()) != n_ || static_cast<int>(t.center.size()) != n_)
            throw Error(Errc::InvalidArgument, "section term has wrong arity");
        if (!(t.gamma > 0.0)) throw Error(Errc::InvalidArgument, "Gaussian width must be positive");
        if (t.poly.is_zero()) return;
        for (auto& e : terms_)
            if (e.alpha == t.alpha && e.gamma == t.gamma && e.center == t.center) {
                e.poly += t.poly;
                prune();
                return;
            }
        terms_.push_back(std::move(t));
        check_degree();
    }

    int t_degree() const {
        int d = 0;
        for (const auto& t : terms_)
            for (int i = 0; i < n_; ++i) d = std::max(d, t.poly.degree_in(2 * n_ + i));
        return d;
    }

    double min_gamma() const {
        double g = 1e300;
        for (const auto& t : terms_) g = std::min(g, t.gamma);
        return g;
    }

    cplx eval(const std::vector<double>& x, const std::vector<double>& t) const {
        std::vector<cplx> pt;
        pt.reserve(static_cast<size_t>(3 * n_));
        for (double v : x) pt.emplace_back(v);
        for (double v : t) pt.emplace_back(v);
        cplx acc = 0.0;
        for (const auto& term : terms_) {
            double ph = 0.0, r2 = 0.0;
            for (int i = 0; i < n_; ++i) {
                const auto ii = static_cast<size_t>(i);
                ph += term.alpha[ii] * t[ii];
                r2 += (t[ii] - term.center[ii]) * (t[ii] - term.center[ii]);
            }
            acc += term.poly.evaluate<cplx>(pt) * std::polar(std::exp(-term.gamma * r2), 2.0 * pi * ph);
        }
        return acc;
    }

    MirrorSectionRep& operator+=(const MirrorSectionRep& o) {
        for (const auto& t : o.terms_) add_term(t);
        return *this;
    }
    MirrorSectionRep& operator-=(const MirrorSectionRep& o) {
        for (auto t : o.terms_) {
            t.poly *= cplx(-1.0);
            add_term(std::move(t));
        }
        return *this;
    }
    friend MirrorSectionRep operator+(MirrorSectionRep a, const MirrorSectionRep& b) { return a += b; }
    friend MirrorSectionRep operator-(MirrorSectionRep a, const MirrorSectionRep& b) { return a -= b; }
    friend MirrorSectionRep operator*(cplx s, MirrorSectionRep a) {
        for (auto& t : a.terms_) t.poly *= s;
        a.prune();
        return a;
    }

    // s(x, t) ↦ s(x, t + m).
    MirrorSectionRep shifted(const std::vector<int>& m) const {
        MirrorSectionRep out(n_);
        std::vector<BasePolynomial> images;
        for (int v = 0; v < 3 * n_; ++v) {
            BasePolynomial img = BasePolynomial::variable(3 * n_, v);
            if (v >= 2 * n_) img += BasePolynomial::constant(3 * n_, static_cast<double>(m[static_cast<size_t>(v - 2 * n_)]));
            images.push_back(img);
        }
        for (const auto& t : terms_) {
            double ph = 0.0;
            GaussTerm nt = t;
            for (int i = 0; i < n_; ++i) {
                ph += t.alpha[static_cast<size_t>(i)] * m[static_cast<size_t>(i)];
                nt.center[static_cast<size_t>(i)] -= m[static_cast<size_t>(i)];
            }
            nt.poly = t.poly.substitute(images) * std::polar(1.0, 2.0 * pi * ph);
            out.add_term(std::move(nt));
        }
        return out;
    }

    // Multiply by e^{2πi(β·t + β₀)}.
    MirrorSectionRep phased(const std::vector<double>& beta, double beta0) const {
        MirrorSectionRep out(n_);
        for (auto t : terms_) {
            for (int i = 0; i < n_; ++i) t.alpha[static_cast<size_t>(i)] += beta[static_cast<size_t>(i)];
            t.poly *= std::polar(1.0, 2.0 * pi * beta0);
            out.add_term(std::move(t));
        }
        return out;
    }

    MirrorSectionRep times(const BasePolynomial& p) const {
        if (p.nvars() != 3 * n_) throw Error(Errc::InvalidArgument, "multiplier has wrong arity");
        MirrorSectionRep out(n_);
        for (auto t : terms_) {
            t.poly = t.poly * p;
            out.add_term(std::move(t));
        }
        return out;
    }

    // ∂/∂x_a for a < 2n, ∂/∂t_i for a = 2n + i.
    MirrorSectionRep derivative(int a) const {
        MirrorSectionRep out(n_);
        for (const auto& t : terms_) {
            GaussTerm nt = t;
            nt.poly = t.poly.derivative(a);
            if (a >= 2 * n_) {
                const int i = a - 2 * n_;
                const auto ii = static_cast<size_t>(i);
                // d/dt of the envelope: 2πiα_i − 2γ(t_i − c_i)
                BasePolynomial env = BasePolynomial::constant(3 * n_, cplx(2.0 * t.gamma * t.center[ii], 2.0 * pi * t.alpha[ii]));
                env += BasePolynomial::variable(3 * n_, a, cplx(-2.0 * t.gamma));
                nt.poly += t.poly * env;
            }
            out.add_term(std::move(nt));
        }
        return out;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& t : terms_)
            for (const auto& [e, c] : t.poly.terms()) m = std::max(m, std::abs(c));
        return m;
    }

private:
    void prune() {
        std::vector<GaussTerm> kept;
        for (auto& t : terms_)
            if (!t.poly.is_zero()) kept.push_back(std::move(t));
        terms_ = std::move(kept);
        check_degree();
    }
    void check_degree() const {
        if (t_degree() > kMaxSectionDegree)
            throw Error(Errc::DegreeOverflow, "section degree in the fiber variables exceeds the cap of 8");
    }

    int n_ = 1;
    std::vector<GaussTerm> terms_;
};

}  // namespace bq
