#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>

#include "lltkit/theta.hpp"

using namespace lltkit;

namespace {

// complex-series oracle, no cosine folding
std::complex<double> theta_complex_oracle(long d, long n, long u) {
    std::complex<double> sum{0.0, 0.0};
    for (long l = -4000; l <= 4000; ++l) {
        double g = std::exp(-static_cast<double>(n) * constants::pi * constants::pi * static_cast<double>(l) * l /
                            (2.0 * static_cast<double>(d) * d));
        if (g < 1e-22) continue;
        double phase = constants::pi * static_cast<double>(2 * u + n) * static_cast<double>(l) / static_cast<double>(d);
        sum += std::polar(g, phase);
    }
    return sum;
}

}  // namespace

TEST_CASE("theta collapses to 1 when n dominates d^2") {
    auto tv = theta_sum_direct(2, 200, 0);
    CHECK(std::abs(tv.value - 1.0) < 1e-99);
    CHECK(tv.truncation_bound < 1e-18);
}

TEST_CASE("theta value at d=2, n=8, u=0") {
    // 1 + 2 exp(-pi^2) + 2 exp(-4 pi^2), all phases unity
    const double expect = 1.0001034463724076;
    CHECK(theta_sum_direct(2, 8, 0).value == doctest::Approx(expect).epsilon(1e-14));
    CHECK(theta_sum_poisson(2, 8, 0).value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(theta_sum(2, 8, 0).value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("theta equals the complex series and is real") {
    for (long d : {1L, 2L, 3L, 7L, 12L})
        for (long n : {4L, 9L, 64L, 257L})
            for (long u : {0L, 1L, d - 1213 % d}) {
                auto z = theta_complex_oracle(d, n, std::abs(u));
                CHECK(std::abs(z.imag()) < 1e-14);
                CHECK(theta_sum_direct(d, n, std::abs(u)).value == doctest::Approx(z.real()).epsilon(1e-12));
            }
}

TEST_CASE("direct and dual evaluations agree") {
    for (long d : {1L, 2L, 5L, 16L, 64L})
        for (long n : {4L, 32L, 100L, 1024L})
            for (long u = 0; u < std::min(d, 6L); ++u) {
                double a = theta_sum_direct(d, n, u).value;
                double b = theta_sum_poisson(d, n, u).value;
                CHECK(a == doctest::Approx(b).epsilon(1e-12));
            }
}

TEST_CASE("theta invariances") {
    // shift period u -> u + d
    CHECK(theta_sum_direct(5, 37, 2).value == doctest::Approx(theta_sum_direct(5, 37, 7).value).epsilon(1e-14));
    // value certificate metadata
    auto tv = theta_sum_poisson(40, 10, 3);
    CHECK(tv.truncation_bound < 1e-18 * std::max(1.0, std::abs(tv.value)));
    CHECK(tv.terms_used >= 1);
    CHECK(tv.value > 0.0);  // dual form is a sum of positive terms
    // reflection (2u+n) -> -(2u+n), i.e. u -> -u-n
    CHECK(theta_sum_direct(7, 30, 2).value == doctest::Approx(theta_sum_direct(7, 30, -32).value).epsilon(1e-14));
    // averaging the rows over all shifts returns total mass 1
    for (long d : {2L, 3L, 8L}) {
        for (long n : {16L, 121L}) {
            double avg = 0.0;
            for (long u = 0; u < d; ++u) avg += theta_sum(d, n, u).value / static_cast<double>(d);
            CHECK(avg == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("truncation certificate survives an adversarial aspect ratio") {
    // d >> sqrt(n): the direct series needs many terms; the certificate must
    // still come in under 1e-18 relative
    auto tv = theta_sum_direct(512, 16, 3);
    CHECK(tv.truncation_bound < 1e-18 * std::max(1.0, std::abs(tv.value)));
    auto dual = theta_sum_poisson(512, 16, 3);
    CHECK(tv.value == doctest::Approx(dual.value).epsilon(1e-10));
}

TEST_CASE("divisor probabilities of fair-coin sums track theta/d") {
    binomial_law law(64);
    theta_rate_point pt = binomial_theta_rate(law);
    CHECK(pt.sup_error < 1.0);
    CHECK(pt.sup_error > 0.0);
    CHECK(pt.arg_d >= 2);
    CHECK(pt.rate_unit == doctest::Approx(std::pow(std::log(64.0), 2.5) / std::pow(64.0, 1.5)));
    CHECK(pt.ratio == doctest::Approx(pt.sup_error / pt.rate_unit));
}

TEST_CASE("restricting shifts to one period loses nothing") {
    binomial_law law(48);
    for (long d : {3L, 7L}) {
        auto res = law.residue_probs(d);
        for (long u = 0; u < d; ++u) {
            double p1 = law.divisor_prob(d, u);
            double p2 = law.divisor_prob(d, u + 5 * d);
            CHECK(p1 == doctest::Approx(p2).epsilon(1e-15));
            CHECK(p1 == doctest::Approx(res[static_cast<std::size_t>(((-u) % d + d) % d)]));
        }
    }
}

TEST_CASE("binomial divisor bounds in both regions") {
    auto [log_r, pow_r] = check_binomial_divisor_bounds(1024, 2.0, 1.0, 0.5, 0.5);
    CHECK(log_r.hypothesis_ok);
    CHECK(log_r.pass());
    CHECK(log_r.measured <= 1.0 / 1024.0);
    CHECK(pow_r.hypothesis_ok);
    CHECK(pow_r.pass());

    // below the hypothesis threshold the report is inapplicable, not failing:
    // at n=4 the sinc endpoints fall short of sqrt(2.9/3) and sqrt(0.99)
    auto [small_log, small_pow] = check_binomial_divisor_bounds(4, 3.0, 2.9, 0.5, 0.01);
    CHECK_FALSE(small_log.hypothesis_ok);
    CHECK_FALSE(small_log.pass());
    CHECK_FALSE(small_pow.hypothesis_ok);

    CHECK_THROWS_AS(check_binomial_divisor_bounds(64, 1.0, 2.0, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(check_binomial_divisor_bounds(64, 2.0, 1.0, 1.5, 0.5), std::invalid_argument);
}

TEST_CASE("exact binomial residue machinery") {
    binomial_law law(20);
    auto res = law.residue_probs(4);
    double total = 0.0;
    for (double p : res) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    // oracle: direct pmf fold
    for (long m = 0; m < 4; ++m) {
        double direct = 0.0;
        for (long k = m; k <= 20; k += 4) direct += law.pmf(k);
        CHECK(res[static_cast<std::size_t>(m)] == doctest::Approx(direct).epsilon(1e-15));
    }
    CHECK(law.upper_tail(0) == 1.0);
    CHECK(law.upper_tail(21) == 0.0);
    CHECK(law.lower_tail(20) == 1.0);
    CHECK(law.upper_tail(10) + law.lower_tail(9) == doctest::Approx(1.0).epsilon(1e-15));
}
