#pragma once

#include <vector>

#include "branequant/lattice/skew_form.hpp"

namespace bq {

// χ(λ) = (−1)^{q(λ)} e^{2πi ǧ·λ} with q(λ) = Σ_{a<b} λ_a H_ab λ_b. Any semi-character
// of H has this shape; for the normal form q ≡ λ²·Dλ¹ mod 2.
struct SemiCharacter {
    std::vector<Rational> gcheck;
    FormPtr form;

    // Exact phase of χ(λ) in turns, reduced into [0, 1).
    Rational phase_turns(const std::vector<long>& lam) const {
        const int d = 2 * form->n;
        if (static_cast<int>(lam.size()) != d || static_cast<int>(gcheck.size()) != d)
            throw Error(Errc::InvalidArgument, "semi-character arity mismatch");
        BigInt sign = 0;
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b)
                sign += BigInt(lam[static_cast<size_t>(a)]) * form->entries(a, b) * BigInt(lam[static_cast<size_t>(b)]);
        Rational t = Rational(sign, 2);
        for (int i = 0; i < d; ++i) t += gcheck[static_cast<size_t>(i)] * Rational(lam[static_cast<size_t>(i)]);
        return frac_part(t);
    }

    cplx eval(const std::vector<long>& lam) const { return turns_to_unit(phase_turns(lam)); }
};

// Exact phase of (−1)^{λ·Hλ'} in turns.
inline Rational skew_pairing_sign_turns(const IntMatrix& h, const std::vector<long>& a, const std::vector<long>& b) {
    BigInt s = 0;
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j) s += BigInt(a[static_cast<size_t>(i)]) * h(i, j) * BigInt(b[static_cast<size_t>(j)]);
    return frac_part(Rational(s, 2));
}

inline cplx semicharacter_eval(const SemiCharacter& chi, const std::vector<long>& lam) { return chi.eval(lam); }

}  // namespace bq
