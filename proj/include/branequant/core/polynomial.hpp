#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "branequant/core/error.hpp"
#include "branequant/core/numeric.hpp"

namespace bq {

// Sparse multivariate polynomial with coefficients in T. Terms with zero
// coefficient are never stored, so equality is structural.
template <class T>
class Polynomial {
public:
    using Exponent = std::vector<int>;
    using TermMap = std::map<Exponent, T>;

    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const T& c) {
        Polynomial p(nvars);
        p.add_term(Exponent(static_cast<size_t>(nvars), 0), c);
        return p;
    }
    static Polynomial variable(int nvars, int var, const T& c = T(1)) {
        Polynomial p(nvars);
        Exponent e(static_cast<size_t>(nvars), 0);
        e[static_cast<size_t>(var)] = 1;
        p.add_term(e, c);
        return p;
    }
    // Σ coeffs[i] x_i + c0.
    static Polynomial linear(int nvars, const std::vector<T>& coeffs, const T& c0 = T(0)) {
        Polynomial p = constant(nvars, c0);
        for (int i = 0; i < nvars && i < static_cast<int>(coeffs.size()); ++i)
            p += variable(nvars, i, coeffs[static_cast<size_t>(i)]);
        return p;
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    void add_term(const Exponent& e, const T& c) {
        if (static_cast<int>(e.size()) != nvars_) throw Error(Errc::InvalidArgument, "exponent arity mismatch");
        if (is_zero_value(c)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
            return;
        }
        it->second += c;
        if (is_zero_value(it->second)) terms_.erase(it);
    }

    T coefficient(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? T(0) : it->second;
    }

    // Largest single-variable exponent.
    int degree_bound() const {
        int d = 0;
        for (const auto& [e, c] : terms_)
            for (int v : e) d = std::max(d, v);
        return d;
    }
    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int v : e) s += v;
            d = std::max(d, s);
        }
        return d;
    }
    int degree_in(int var) const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<size_t>(var)]);
        return d;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Polynomial& operator*=(const T& s) {
        if (is_zero_value(s)) {
            terms_.clear();
            return *this;
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second *= s;
            if (is_zero_value(it->second)) it = terms_.erase(it);
            else ++it;
        }
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= T(-1); }
    friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
    friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_arity(b);
        Polynomial out(a.nvars_);
        Exponent e(static_cast<size_t>(a.nvars_));
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial derivative(int var) const {
        Polynomial out(nvars_);
        for (const auto& [e, c] : terms_) {
            int p = e[static_cast<size_t>(var)];
            if (p == 0) continue;
            Exponent d = e;
            d[static_cast<size_t>(var)] = p - 1;
            out.add_term(d, c * T(p));
        }
        return out;
    }

    template <class S>
    S evaluate(const std::vector<S>& point) const {
        if (static_cast<int>(point.size()) != nvars_) throw Error(Errc::InvalidArgument, "evaluation point arity mismatch");
        S acc = S(0);
        for (const auto& [e, c] : terms_) {
            S term = convert<S>(c);
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < e[static_cast<size_t>(i)]; ++k) term *= point[static_cast<size_t>(i)];
            acc += term;
        }
        return acc;
    }

    // Substitute variable i by images[i]; images share a common arity.
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (static_cast<int>(images.size()) != nvars_) throw Error(Errc::InvalidArgument, "substitution arity mismatch");
        const int out_vars = images.empty() ? 0 : images.front().nvars();
        Polynomial out(out_vars);
        std::vector<std::vector<Polynomial>> powers(images.size());
        for (const auto& [e, c] : terms_) {
            Polynomial term = constant(out_vars, c);
            for (size_t i = 0; i < images.size(); ++i) {
                if (e[i] == 0) continue;
                auto& pw = powers[i];
                if (pw.empty()) pw.push_back(constant(out_vars, T(1)));
                while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * images[i]);
                term = term * pw[static_cast<size_t>(e[i])];
            }
            out += term;
        }
        return out;
    }

    // Re-embed into a ring with more variables, variable i landing on slot map[i].
    Polynomial embed(int new_nvars, const std::vector<int>& slot) const {
        Polynomial out(new_nvars);
        for (const auto& [e, c] : terms_) {
            Exponent ne(static_cast<size_t>(new_nvars), 0);
            for (int i = 0; i < nvars_; ++i) ne[static_cast<size_t>(slot[static_cast<size_t>(i)])] += e[static_cast<size_t>(i)];
            out.add_term(ne, c);
        }
        return out;
    }

    template <class U, class F>
    Polynomial<U> map_coeffs(F f) const {
        Polynomial<U> out(nvars_);
        for (const auto& [e, c] : terms_) out.add_term(e, f(c));
        return out;
    }

private:
    void check_arity(const Polynomial& o) const {
        if (o.nvars_ != nvars_) throw Error(Errc::InvalidArgument, "polynomial arity mismatch");
    }

    template <class S>
    static S convert(const T& c) {
        if constexpr (std::is_same_v<S, T>) return c;
        else if constexpr (std::is_same_v<S, cplx>) return to_cplx(c);
        else if constexpr (std::is_same_v<S, double>) return static_cast<double>(c);
        else return S(c);
    }

    int nvars_ = 0;
    TermMap terms_;
};

using BasePolynomial = Polynomial<cplx>;
using RatPolynomial = Polynomial<Rational>;
using CRatPolynomial = Polynomial<CRational>;

inline BasePolynomial to_numeric(const RatPolynomial& p) {
    return p.map_coeffs<cplx>([](const Rational& r) { return cplx(to_double(r), 0.0); });
}
inline BasePolynomial to_numeric(const CRatPolynomial& p) {
    return p.map_coeffs<cplx>([](const CRational& r) { return r.to_cplx(); });
}
inline CRatPolynomial to_complex(const RatPolynomial& p) {
    return p.map_coeffs<CRational>([](const Rational& r) { return CRational(r); });
}

inline double evaluate_real(const RatPolynomial& p, const std::vector<double>& x) {
    return p.evaluate<double>(x);
}

}  // namespace bq
