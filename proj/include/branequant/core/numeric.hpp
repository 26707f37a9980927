#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>

namespace bq {

using cplx = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

inline double to_double(const Rational& r) { return static_cast<double>(r); }
inline double to_double(const BigInt& b) { return static_cast<double>(b); }

inline Rational frac_part(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    if (num < 0 && q * den != num) q -= 1;
    return r - Rational(q);
}

// e^{2πi t} for a phase given exactly in turns; quarter turns are exact.
inline cplx turns_to_unit(const Rational& t) {
    Rational f = frac_part(t);
    if (f == 0) return {1.0, 0.0};
    if (f == Rational(1, 4)) return {0.0, 1.0};
    if (f == Rational(1, 2)) return {-1.0, 0.0};
    if (f == Rational(3, 4)) return {0.0, -1.0};
    return std::polar(1.0, 2.0 * pi * to_double(f));
}

inline std::string to_string(const Rational& r) {
    return r.str();
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

// Exact Gaussian rationals, used by the symbolic curvature and form checks.
struct CRational {
    Rational re{0};
    Rational im{0};

    CRational() = default;
    CRational(int v) : re(v) {}
    CRational(Rational r) : re(std::move(r)) {}
    CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    CRational& operator+=(const CRational& o) { re += o.re; im += o.im; return *this; }
    CRational& operator-=(const CRational& o) { re -= o.re; im -= o.im; return *this; }
    CRational& operator*=(const CRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    friend CRational operator+(CRational a, const CRational& b) { return a += b; }
    friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
    friend CRational operator*(CRational a, const CRational& b) { return a *= b; }
    friend CRational operator-(const CRational& a) { return {-a.re, -a.im}; }
    friend bool operator==(const CRational& a, const CRational& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CRational& a, const CRational& b) { return !(a == b); }

    CRational conj() const { return {re, -im}; }
    cplx to_cplx() const { return {to_double(re), to_double(im)}; }
    static CRational i() { return {Rational(0), Rational(1)}; }

    friend std::ostream& operator<<(std::ostream& os, const CRational& z) {
        return os << "(" << z.re << "," << z.im << ")";
    }
};

inline bool is_zero_value(const cplx& c) { return c == cplx(0.0, 0.0); }
inline bool is_zero_value(const double& c) { return c == 0.0; }
inline bool is_zero_value(const Rational& c) { return c == 0; }
inline bool is_zero_value(const CRational& c) { return c.re == 0 && c.im == 0; }

inline cplx to_cplx(const cplx& c) { return c; }
inline cplx to_cplx(const Rational& r) { return {to_double(r), 0.0}; }
inline cplx to_cplx(const CRational& c) { return c.to_cplx(); }

}  // namespace bq
