// Theta-series approximants for divisor probabilities of fair-coin sums.
//
// Theta(u; d, n) = sum_l exp(i pi (2u+n) l / d) exp(-n pi^2 l^2 / (2 d^2)),
// real by l <-> -l pairing, with the Poisson-dual evaluation
//   d sqrt(2/(pi n)) sum_l exp(-(l + frac((u+n/2)/d))^2 2 d^2 / n).
// P{d | B_n + u} equals Theta(u; d, n)/d up to O((log n)^{5/2} n^{-3/2})
// uniformly over u >= 0 and 2 <= d <= n; the constant is measured, not
// asserted.
#pragma once

#include <utility>

#include "lltkit/binomial.hpp"
#include "lltkit/bounds.hpp"
#include "lltkit/report.hpp"

namespace lltkit {

struct theta_value {
    long d = 1;
    long n = 1;
    long u = 0;
    double value = 0.0;
    long terms_used = 0;
    double truncation_bound = 0.0;
};

namespace detail {

// series terms are dropped below this; the certified tail bound is then
// pushed under 1e-18 * max(1, |value|)
inline constexpr double kThetaCut = 1e-19;
inline constexpr double kThetaTailTarget = 1e-18;

}  // namespace detail

// Direct series, folded into cosines so the value is real by construction.
inline theta_value theta_sum_direct(long d, long n, long u) {
    if (d < 1 || n < 1) throw std::invalid_argument("theta_sum_direct: need d >= 1, n >= 1");
    theta_value tv{d, n, u, 1.0, 1, 0.0};
    const double a = static_cast<double>(n) * constants::pi * constants::pi / (2.0 * static_cast<double>(d) * d);
    const long phase_num = 2 * u + n;  // cos(pi * phase_num * l / d)
    // tail past L: 2 sum_{l>L} e^{-a l^2} <= 2 e^{-a(L+1)^2} / (1 - e^{-a(2L+3)})
    auto tail_bound = [&](long L) {
        double t = 2.0 * std::exp(-a * static_cast<double>(L + 1) * (L + 1));
        return t / (1.0 - std::exp(-a * static_cast<double>(2 * L + 3)));
    };
    long l = 1;
    for (;; ++l) {
        double factor = std::exp(-a * static_cast<double>(l) * l);
        double floorv = detail::kThetaCut * std::max(1.0, std::abs(tv.value));
        if (factor < floorv && tail_bound(l - 1) < detail::kThetaTailTarget * std::max(1.0, std::abs(tv.value)))
            break;
        tv.value += 2.0 * cospi(static_cast<double>(((phase_num * l) % (2 * d) + 2 * d) % (2 * d)) /
                                static_cast<double>(d)) *
                    factor;
        ++tv.terms_used;
        if (l > 100000000) throw std::runtime_error("theta_sum_direct: series failed to converge");
    }
    tv.truncation_bound = tail_bound(l - 1);
    return tv;
}

// Poisson-dual form; every term is positive.
inline theta_value theta_sum_poisson(long d, long n, long u) {
    if (d < 1 || n < 1) throw std::invalid_argument("theta_sum_poisson: need d >= 1, n >= 1");
    const double b = 2.0 * static_cast<double>(d) * d / static_cast<double>(n);
    const double pref = static_cast<double>(d) * std::sqrt(2.0 / (constants::pi * static_cast<double>(n)));
    // delta = frac((u + n/2)/d) = frac((2u+n)/(2d))
    const long num = 2 * u + n;
    const long den = 2 * d;
    const double delta = static_cast<double>(((num % den) + den) % den) / static_cast<double>(den);
    theta_value tv{d, n, u, 0.0, 0, 0.0};
    // one-sided geometric tail bound past offset x > 0, scaled by pref
    auto tail_bound = [&](double x) {
        double t = pref * std::exp(-b * x * x);
        return t / (1.0 - std::exp(-2.0 * b * x));
    };
    double total_tail = 0.0;
    for (int dir = 0; dir < 2; ++dir) {
        long l = (dir == 0) ? 0 : -1;
        for (;;) {
            double off = static_cast<double>(l) + delta;
            double term = pref * std::exp(-b * off * off);
            double floorv = detail::kThetaCut * std::max(1.0, tv.value);
            if (std::abs(off) > 1.0 && term < floorv &&
                tail_bound(std::abs(off)) < 0.5 * detail::kThetaTailTarget * std::max(1.0, tv.value))
                break;
            tv.value += term;
            ++tv.terms_used;
            l += (dir == 0) ? 1 : -1;
            if (std::abs(l) > 100000000) throw std::runtime_error("theta_sum_poisson: series failed to converge");
        }
        total_tail += tail_bound(std::abs(static_cast<double>(l) + delta));
    }
    tv.truncation_bound = total_tail;
    return tv;
}

// Route chosen by expected series length (direct grows with d/sqrt(n), the
// dual with sqrt(n)/d).
inline theta_value theta_sum(long d, long n, long u) {
    double direct_terms = static_cast<double>(d) / constants::pi * std::sqrt(88.0 / static_cast<double>(n));
    double poisson_terms = std::sqrt(22.0 * static_cast<double>(n)) / static_cast<double>(d);
    return direct_terms <= poisson_terms ? theta_sum_direct(d, n, u) : theta_sum_poisson(d, n, u);
}

struct theta_rate_point {
    long n = 0;
    double sup_error = 0.0;        // sup_{2<=d<=n, 0<=u<d} |P{d|B_n+u} - Theta/d|
    double rate_unit = 0.0;        // (log n)^{5/2} n^{-3/2}
    double ratio = 0.0;            // sup_error / rate_unit
    long arg_d = 0;
    long arg_u = 0;
};

// Measures the uniform theta-approximation error for the fair-coin sum of
// length n over the full divisor/shift grid, with exact binomial residue
// probabilities.
inline theta_rate_point binomial_theta_rate(const binomial_law& law) {
    const long n = law.n();
    theta_rate_point pt;
    pt.n = n;
    pt.rate_unit = std::pow(std::log(static_cast<double>(n)), 2.5) * std::pow(static_cast<double>(n), -1.5);
    for (long d = 2; d <= n; ++d) {
        std::vector<double> res = law.residue_probs(d);
        for (long u = 0; u < d; ++u) {
            double p = res[static_cast<std::size_t>(((-u) % d + d) % d)];
            double err = std::abs(p - theta_sum(d, n, u).value / static_cast<double>(d));
            if (err > pt.sup_error) {
                pt.sup_error = err;
                pt.arg_d = d;
                pt.arg_u = u;
            }
        }
    }
    pt.ratio = pt.sup_error / pt.rate_unit;
    return pt;
}

inline theta_rate_point binomial_theta_rate(long n) {
    if (n < 2) throw std::invalid_argument("binomial_theta_rate: n must be >= 2");
    return binomial_theta_rate(binomial_law(n));
}

// Divisor-uniformity bounds for the fair-coin sum in two regions:
// (log region) |P{d|B_n+u} - 1/d| <= n^{-alpha'} for d < pi sqrt(n/(2 alpha log n)),
//   provided sinc(phi_n/2) >= sqrt(alpha'/alpha) with phi_n = sqrt(2 alpha log n / n);
// (power region) <= exp(-(1-eta) n^rho) for d < (pi/sqrt 2) n^{(1-rho)/2},
//   provided sinc(psi_n/2) >= sqrt(1-eta) with psi_n = sqrt(2 n^{rho-1}).
inline std::pair<bound_report, bound_report> check_binomial_divisor_bounds(long n, double alpha,
                                                                           double alpha_prime, double rho,
                                                                           double eta) {
    if (!(alpha > alpha_prime) || !(alpha_prime > 0.0))
        throw std::invalid_argument("check_binomial_divisor_bounds: need alpha > alpha' > 0");
    if (!(rho > 0.0 && rho < 1.0) || !(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("check_binomial_divisor_bounds: need rho, eta in (0,1)");
    if (n < 2) throw std::invalid_argument("check_binomial_divisor_bounds: n must be >= 2");

    binomial_law law(n);
    auto measure_region = [&](double d_limit) {
        double sup = 0.0;
        for (long d = 2; static_cast<double>(d) < d_limit && d <= n; ++d) {
            std::vector<double> res = law.residue_probs(d);
            for (long m = 0; m < d; ++m)
                sup = std::max(sup, std::abs(res[static_cast<std::size_t>(m)] - 1.0 / static_cast<double>(d)));
        }
        return sup;
    };

    const double logn = std::log(static_cast<double>(n));
    bound_report log_region;
    log_region.name = "binomial-divisor-log-region";
    {
        double phi_n = std::sqrt(2.0 * alpha * logn / static_cast<double>(n));
        char buf[128];
        double d_limit = constants::pi * std::sqrt(static_cast<double>(n) / (2.0 * alpha * logn));
        std::snprintf(buf, sizeof buf, "n=%ld d<%.4g", n, d_limit);
        log_region.region = buf;
        if (phi_n / 2.0 > constants::pi || !sinc_condition(phi_n / 2.0, std::sqrt(alpha_prime / alpha))) {
            log_region.hypothesis_ok = false;
        } else {
            log_region.measured = measure_region(d_limit);
            log_region.bound = std::pow(static_cast<double>(n), -alpha_prime);
        }
    }

    bound_report power_region;
    power_region.name = "binomial-divisor-power-region";
    {
        double psi_n = std::sqrt(2.0 * std::pow(static_cast<double>(n), rho - 1.0));
        double d_limit = constants::pi / std::sqrt(2.0) * std::pow(static_cast<double>(n), (1.0 - rho) / 2.0);
        char buf[128];
        std::snprintf(buf, sizeof buf, "n=%ld d<%.4g", n, d_limit);
        power_region.region = buf;
        if (psi_n / 2.0 > constants::pi || !sinc_condition(psi_n / 2.0, std::sqrt(1.0 - eta))) {
            power_region.hypothesis_ok = false;
        } else {
            power_region.measured = measure_region(d_limit);
            power_region.bound = std::exp(-(1.0 - eta) * std::pow(static_cast<double>(n), rho));
        }
    }
    return {log_region, power_region};
}

}  // namespace lltkit
