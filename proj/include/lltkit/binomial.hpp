// Exact machinery for fair-coin sums: integer binomial coefficients,
// residue-class and divisor probabilities of Binomial(n, 1/2), and exact
// tail probabilities. Everything is big-integer arithmetic over the common
// denominator 2^n, converted to double only at the boundary.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "lltkit/numeric.hpp"

namespace lltkit {

namespace detail {

// S / 2^n as a double, for nonnegative S <= 2^n of arbitrary width.
inline double mpz_over_pow2(const mpz_class& s, long n) {
    if (s == 0) return 0.0;
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, s.get_mpz_t());
    return std::ldexp(mant, exp2 - n);
}

}  // namespace detail

class binomial_law {
  public:
    explicit binomial_law(long n) : n_(n) {
        if (n < 1) throw std::invalid_argument("binomial_law: n must be >= 1");
        coeff_.resize(static_cast<std::size_t>(n) + 1);
        coeff_[0] = 1;
        for (long k = 0; k < n; ++k) {
            // C(n,k+1) = C(n,k) (n-k)/(k+1), exact at every step
            mpz_class next = coeff_[static_cast<std::size_t>(k)] * (n - k);
            mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), static_cast<unsigned long>(k + 1));
            coeff_[static_cast<std::size_t>(k) + 1] = next;
        }
    }

    long n() const { return n_; }

    const mpz_class& coefficient(long k) const { return coeff_.at(static_cast<std::size_t>(k)); }

    double pmf(long k) const {
        if (k < 0 || k > n_) return 0.0;
        return detail::mpz_over_pow2(coeff_[static_cast<std::size_t>(k)], n_);
    }

    // P{B_n ≡ m (mod d)} for m = 0..d-1, exact integer sums over 2^n.
    std::vector<double> residue_probs(long d) const {
        std::vector<mpz_class> sums(static_cast<std::size_t>(d));
        for (long k = 0; k <= n_; ++k) sums[static_cast<std::size_t>(k % d)] += coeff_[static_cast<std::size_t>(k)];
        std::vector<double> out(static_cast<std::size_t>(d));
        for (long m = 0; m < d; ++m) out[static_cast<std::size_t>(m)] = detail::mpz_over_pow2(sums[static_cast<std::size_t>(m)], n_);
        return out;
    }

    // P{d | B_n + u}.
    double divisor_prob(long d, long u) const {
        std::vector<double> res = residue_probs(d);
        long m = ((-u) % d + d) % d;
        return res[static_cast<std::size_t>(m)];
    }

    // Exact P{B_n >= k}.
    double upper_tail(long k) const {
        if (k <= 0) return 1.0;
        if (k > n_) return 0.0;
        mpz_class s = 0;
        for (long j = k; j <= n_; ++j) s += coeff_[static_cast<std::size_t>(j)];
        return detail::mpz_over_pow2(s, n_);
    }

    // Exact P{B_n <= k}.
    double lower_tail(long k) const {
        if (k < 0) return 0.0;
        if (k >= n_) return 1.0;
        mpz_class s = 0;
        for (long j = 0; j <= k; ++j) s += coeff_[static_cast<std::size_t>(j)];
        return detail::mpz_over_pow2(s, n_);
    }

  private:
    long n_;
    std::vector<mpz_class> coeff_;
};

}  // namespace lltkit
