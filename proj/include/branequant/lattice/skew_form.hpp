#pragma once

#include <memory>
#include <vector>

#include "branequant/core/exact_matrix.hpp"

namespace bq {

// Invertible integer skew form together with its skew-Smith decomposition:
// reducer · entries · reducerᵀ = [[0, -D], [D, 0]], D = diag(h_1 | h_2 | ...).
struct IntSkewForm {
    int n = 0;
    IntMatrix entries;
    std::vector<BigInt> invariant_factors;
    IntMatrix reducer;

    IntMatrix normal_form() const {
        IntMatrix m(2 * n, 2 * n);
        for (int i = 0; i < n; ++i) {
            m(i, n + i) = -invariant_factors[static_cast<size_t>(i)];
            m(n + i, i) = invariant_factors[static_cast<size_t>(i)];
        }
        return m;
    }
    double h(int i) const { return to_double(invariant_factors[static_cast<size_t>(i)]); }
    long h_int(int i) const { return static_cast<long>(invariant_factors[static_cast<size_t>(i)]); }
    bool is_normal() const { return entries == normal_form(); }

    friend bool operator==(const IntSkewForm& a, const IntSkewForm& b) {
        return a.n == b.n && a.entries == b.entries && a.invariant_factors == b.invariant_factors;
    }
};

namespace detail {

// Congruence helpers acting on (M, A) with M ← E M Eᵀ and A ← E A.
struct Congruence {
    IntMatrix& m;
    IntMatrix& a;

    void swap(int i, int j) {
        if (i == j) return;
        const int n = m.rows();
        for (int c = 0; c < n; ++c) std::swap(m(i, c), m(j, c));
        for (int r = 0; r < n; ++r) std::swap(m(r, i), m(r, j));
        for (int c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
    }
    // row/col i += q · row/col j
    void add(int i, int j, const BigInt& q) {
        if (q == 0) return;
        const int n = m.rows();
        for (int c = 0; c < n; ++c) m(i, c) += q * m(j, c);
        for (int r = 0; r < n; ++r) m(r, i) += q * m(r, j);
        for (int c = 0; c < a.cols(); ++c) a(i, c) += q * a(j, c);
    }
    void negate(int i) {
        const int n = m.rows();
        for (int c = 0; c < n; ++c) m(i, c) = -m(i, c);
        for (int r = 0; r < n; ++r) m(r, i) = -m(r, i);
        for (int c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
    }
};

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

}  // namespace detail

inline IntSkewForm skew_smith_normal_form(const IntMatrix& input) {
    if (input.rows() != input.cols() || input.rows() % 2 != 0 || input.rows() == 0)
        throw Error(Errc::InvalidArgument, "skew form must be a nonempty square matrix of even size");
    if (!input.is_skew()) throw Error(Errc::NotSkew, "matrix is not skew-symmetric");
    if (determinant(input) == 0) throw Error(Errc::SingularForm, "skew form has zero determinant");

    const int dim = input.rows();
    const int n = dim / 2;
    IntMatrix m = input;
    IntMatrix a = IntMatrix::identity(dim);
    detail::Congruence op{m, a};

    for (int p = 0; p < dim; p += 2) {
        for (;;) {
            int bi = -1, bj = -1;
            BigInt best = 0;
            for (int i = p; i < dim; ++i)
                for (int j = i + 1; j < dim; ++j) {
                    BigInt v = abs(m(i, j));
                    if (v != 0 && (bi < 0 || v < best)) {
                        best = v;
                        bi = i;
                        bj = j;
                    }
                }
            if (bi < 0) throw Error(Errc::SingularForm, "skew form has zero determinant");
            op.swap(p, bi);
            if (bj == p) bj = bi;
            op.swap(p + 1, bj);
            const BigInt d = m(p, p + 1);

            bool clean = true;
            for (int r = p + 2; r < dim; ++r) {
                // m(p, r) -= q m(p, p+1) via row/col r -= q · row/col (p+1)
                BigInt q = detail::floor_div(m(p, r), d);
                op.add(r, p + 1, -q);
                // m(p+1, r) -= q' m(p+1, p) via row/col r -= q' · row/col p
                BigInt q2 = detail::floor_div(m(p + 1, r), m(p + 1, p));
                op.add(r, p, -q2);
                if (m(p, r) != 0 || m(p + 1, r) != 0) clean = false;
            }
            if (!clean) continue;

            int bad = -1;
            for (int r = p + 2; r < dim && bad < 0; ++r)
                for (int s = r + 1; s < dim; ++s)
                    if (m(r, s) % d != 0) {
                        bad = r;
                        break;
                    }
            if (bad < 0) break;
            op.add(p, bad, BigInt(1));
        }
        if (m(p, p + 1) > 0) op.negate(p);
    }

    // Interleaved pairs (2i, 2i+1) → block layout (i, n+i).
    IntMatrix perm(dim, dim);
    for (int i = 0; i < n; ++i) {
        perm(i, 2 * i) = 1;
        perm(n + i, 2 * i + 1) = 1;
    }
    IntSkewForm out;
    out.n = n;
    out.entries = input;
    out.reducer = perm * a;
    for (int i = 0; i < n; ++i) out.invariant_factors.push_back(-m(2 * i, 2 * i + 1));
    if (out.reducer * input * out.reducer.transpose() != out.normal_form())
        throw Error(Errc::InvalidArgument, "internal: skew-Smith reduction failed to verify");
    return out;
}

// Normal form [[0, -D], [D, 0]] built directly from invariant factors.
inline IntSkewForm standard_skew_form(const std::vector<long>& h) {
    IntSkewForm f;
    f.n = static_cast<int>(h.size());
    if (f.n == 0) throw Error(Errc::InvalidArgument, "empty invariant factor list");
    for (size_t i = 0; i < h.size(); ++i) {
        if (h[i] <= 0) throw Error(Errc::InvalidArgument, "invariant factors must be positive");
        if (i > 0 && h[i] % h[i - 1] != 0) throw Error(Errc::InvalidArgument, "invariant factors must form a divisibility chain");
        f.invariant_factors.push_back(BigInt(h[i]));
    }
    f.entries = f.normal_form();
    f.reducer = IntMatrix::identity(2 * f.n);
    return f;
}

using FormPtr = std::shared_ptr<const IntSkewForm>;

}  // namespace bq
