// Scalar layer for the dual arithmetic modes.
//
// Every probability-carrying type in the library is templated on a scalar R
// that is either `double` (float mode) or `lltkit::rational` (exact mode,
// backed by GMP). Exact mode carries no rounding and is used to certify
// identities; float mode is for large grids.
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace lltkit {

using rational = mpq_class;

template <class R>
inline constexpr bool is_exact_mode = false;
template <>
inline constexpr bool is_exact_mode<rational> = true;

inline double to_double(double x) { return x; }
inline double to_double(const rational& q) { return q.get_d(); }

// num/den as a scalar of the requested mode.
template <class R>
R ratio_of(long num, long den);

template <>
inline double ratio_of<double>(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
}

template <>
inline rational ratio_of<rational>(long num, long den) {
    if (den == 0) throw std::invalid_argument("ratio_of: zero denominator");
    rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "a", "a/b" or a plain decimal ("0.25") into a scalar. In exact
// mode decimals convert exactly via a power-of-ten denominator.
template <class R>
R parse_scalar(const std::string& text);

template <>
inline double parse_scalar<double>(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return std::stod(text);
    double num = std::stod(text.substr(0, slash));
    double den = std::stod(text.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("parse_scalar: zero denominator");
    return num / den;
}

template <>
inline rational parse_scalar<rational>(const std::string& text) {
    auto bad = [&] { return std::invalid_argument("parse_scalar: cannot parse '" + text + "'"); };
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        rational q;
        if (q.set_str(text, 10) != 0) throw bad();
        if (q.get_den() == 0) throw bad();
        q.canonicalize();
        return q;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        mpz_class n;
        if (n.set_str(text, 10) != 0) throw bad();
        return rational(n);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    mpz_class num;
    if (num.set_str(digits.empty() ? "0" : digits, 10) != 0) throw bad();
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    rational q(num, den);
    q.canonicalize();
    return q;
}

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline const double sqrt_pi = std::sqrt(pi);
inline const double sqrt_two_pi = std::sqrt(2.0 * pi);
inline const double inv_sqrt_two_pi = 1.0 / std::sqrt(2.0 * pi);
// 2e*sqrt(pi), the constant in front of the exp(-1/(16 eps)) tail term.
inline const double two_e_sqrt_pi = 2.0 * std::exp(1.0) * std::sqrt(pi);
}  // namespace constants

// cos(pi x) and sin(pi x), exact at integer and half-integer arguments so
// that root-of-unity sums vanish exactly where they should.
inline double cospi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;
    if (r == 0.0) return 1.0;
    if (r == 0.5 || r == 1.5) return 0.0;
    if (r == 1.0) return -1.0;
    return std::cos(constants::pi * r);
}

inline double sinpi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r == 0.5) return 1.0;
    if (r == 1.5) return -1.0;
    return std::sin(constants::pi * r);
}

// Comparison slack used throughout when a certified inequality is checked
// against float-mode arithmetic.
inline constexpr double kCheckTol = 1e-12;

inline double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace lltkit
