// Gaussian local profiles and the quantitative link between the local
// limit approximation and residue-class uniformity.
//
// The measured object is sup_m |B_n P{S_n=m} - (2 pi)^{-1/2} exp(-(m-M_n)^2
// / 2 B_n^2)|. Whenever that sup is at most C/phi, residue classes mod h
// are uniform to within an explicit four-term bound, and, with eps =
// phi^{-2/3}, to within the closed-form envelope H_n. Both are certified
// here against exact laws.
#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "lltkit/convolve.hpp"
#include "lltkit/model.hpp"
#include "lltkit/report.hpp"

namespace lltkit {

// Density factor (2 pi)^{-1/2} exp(-(m - mean)^2 / (2 bn^2)), before the
// 1/B_n scaling.
inline double gaussian_profile(double m, double mean, double bn) {
    if (!(bn > 0.0)) throw std::invalid_argument("gaussian_profile: bn must be positive");
    double z = (m - mean) / bn;
    return constants::inv_sqrt_two_pi * std::exp(-0.5 * z * z);
}

struct llt_error_profile {
    std::size_t n = 0;
    double bn = 0.0;
    double sup_error = 0.0;
    std::int64_t arg_max = 0;
    double phi_value = 0.0;  // C / sup_error for the chosen C
};

// Precomputed per-model state shared by the certification routines: the
// exact law of the sum and the measured local-error profile.
template <class R>
struct law_context {
    sum_model<R> model;
    lattice_pmf<R> law;
    double mean = 0.0;
    double bn = 0.0;
    llt_error_profile profile;
};

namespace detail {

// Window the sup is taken over: the full support plus the region where the
// Gaussian term is still above ~1e-30 of its peak.
inline constexpr double kGaussWindowSigmas = 12.0;

template <class R>
llt_error_profile profile_from_law(const lattice_pmf<R>& law, double mean, double bn, double C) {
    if (!(bn > 0.0)) throw std::domain_error("llt_sup_error: degenerate model (zero variance)");
    llt_error_profile prof;
    prof.n = 0;
    prof.bn = bn;
    std::int64_t lo = std::min<std::int64_t>(law.origin, static_cast<std::int64_t>(std::floor(mean - kGaussWindowSigmas * bn)));
    std::int64_t hi = std::max<std::int64_t>(law.origin + static_cast<std::int64_t>(law.size()) - 1,
                                             static_cast<std::int64_t>(std::ceil(mean + kGaussWindowSigmas * bn)));
    for (std::int64_t m = lo; m <= hi; ++m) {
        std::int64_t idx = m - law.origin;
        double p = (idx >= 0 && idx < static_cast<std::int64_t>(law.size()))
                       ? to_double(law.weights[static_cast<std::size_t>(idx)])
                       : 0.0;
        double err = std::abs(bn * p - gaussian_profile(static_cast<double>(m), mean, bn));
        if (err > prof.sup_error) {
            prof.sup_error = err;
            prof.arg_max = m;
        }
    }
    prof.phi_value = prof.sup_error > 0.0 ? C / prof.sup_error : std::numeric_limits<double>::infinity();
    return prof;
}

}  // namespace detail

template <class R>
law_context<R> make_law_context(sum_model<R> model, double C = 1.0) {
    if (!model.reduced()) throw std::invalid_argument("make_law_context: model must be on the reduced lattice");
    law_context<R> ctx{std::move(model), {}, 0.0, 0.0, {}};
    ctx.law = sum_distribution(ctx.model);
    ctx.mean = ctx.model.mean();
    ctx.bn = ctx.model.stddev();
    ctx.profile = detail::profile_from_law(ctx.law, ctx.mean, ctx.bn, C);
    ctx.profile.n = ctx.model.size();
    return ctx;
}

// Measured sup_m |B_n P{S_n=m} - gaussian_profile(m)| with the exact law.
template <class R>
llt_error_profile llt_sup_error(const sum_model<R>& model, double C = 1.0) {
    return make_law_context(model, C).profile;
}

struct envelope_value {
    double value = 0.0;
    bool in_hypothesis = true;  // bn >= 6
};

// Closed-form residue-uniformity envelope
//   H_n = 1/(sqrt(2 pi) B_n) + (1 + 2C/h) phi^{-2/3} + 2e sqrt(pi) exp(-phi^{2/3}/16).
// Stated for B_n >= 6; smaller B_n still yields the value, flagged.
inline envelope_value residue_envelope_bound(double bn, int h, double C, double phi) {
    if (h < 2) throw std::invalid_argument("residue_envelope_bound: h must be >= 2");
    if (!(phi >= 1.0)) throw std::invalid_argument("residue_envelope_bound: phi must be >= 1");
    if (!(bn > 0.0)) throw std::invalid_argument("residue_envelope_bound: bn must be positive");
    double phi23 = std::pow(phi, 2.0 / 3.0);
    envelope_value e;
    e.value = 1.0 / (constants::sqrt_two_pi * bn) + (1.0 + 2.0 * C / h) / phi23 +
              constants::two_e_sqrt_pi * std::exp(-phi23 / 16.0);
    e.in_hypothesis = bn >= 6.0;
    return e;
}

// Largest deviation of residue-class masses mod h from 1/h, exact in exact
// mode (the difference is formed before conversion to double).
template <class R>
double residue_sup_deviation(const lattice_pmf<R>& law, int h) {
    std::vector<R> res = residue_masses(law, h);
    double worst = 0.0;
    for (const R& p : res) {
        R diff = p - ratio_of<R>(1, h);
        worst = std::max(worst, std::abs(to_double(diff)));
    }
    return worst;
}

// Exact tail mass P{|S - mean| > radius} read off the law.
template <class R>
double tail_mass(const lattice_pmf<R>& law, double mean, double radius) {
    double total = 0.0;
    for (std::size_t i = 0; i < law.size(); ++i) {
        double v = static_cast<double>(law.origin + static_cast<std::int64_t>(i));
        if (std::abs(v - mean) > radius) total += to_double(law.weights[i]);
    }
    return total + to_double(law.tail_mass_bound);
}

// Certifies, for one (h, eps), the implication from the measured local
// error profile to residue uniformity:
//   max_mu |P{S_n = mu (mod h)} - 1/h|
//     <= 1/(sqrt(2 pi) B_n) + 2C/(h sqrt(eps) phi)
//        + P{|S_n - M_n| > B_n/sqrt(eps)} + 2e sqrt(pi) exp(-1/(16 eps)),
// with the left side and the tail probability computed exactly.
// Hypotheses: B_n >= 6, 0 < eps <= 1, and sup_error <= C/phi.
template <class R>
bound_report check_residue_uniformity_bound(const law_context<R>& ctx, int h, double eps, double C, double phi) {
    bound_report r;
    r.name = "residue-uniformity";
    if (h < 2) throw std::invalid_argument("check_residue_uniformity_bound: h must be >= 2");
    if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("check_residue_uniformity_bound: eps in (0,1]");
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%zu h=%d eps=%.6g", ctx.model.size(), h, eps);
    r.region = buf;
    if (ctx.bn < 6.0) {
        r.hypothesis_ok = false;
        r.region += " [bn<6]";
        return r;
    }
    if (ctx.profile.sup_error > C / phi * (1.0 + 1e-12)) {
        r.hypothesis_ok = false;
        r.region += " [profile exceeds C/phi]";
        return r;
    }
    r.measured = residue_sup_deviation(ctx.law, h);
    double tail = tail_mass(ctx.law, ctx.mean, ctx.bn / std::sqrt(eps));
    r.bound = 1.0 / (constants::sqrt_two_pi * ctx.bn) + 2.0 * C / (h * std::sqrt(eps) * phi) + tail +
              constants::two_e_sqrt_pi * std::exp(-1.0 / (16.0 * eps));
    return r;
}

template <class R>
bound_report check_residue_uniformity_bound(const sum_model<R>& model, int h, double eps, double C, double phi) {
    return check_residue_uniformity_bound(make_law_context(model, C), h, eps, C, phi);
}

// Gaussian residue-row mass: (1/(sqrt(2 pi) B_n)) sum_{k = m (mod h)}
// exp(-(k-mean)^2/(2 B_n^2)), evaluated through its Poisson-summed form
//   (1/h) sum_l exp(-2 pi i l {(mean-m)/h} - 2 pi^2 B_n^2 l^2 / h^2).
// Satisfies |row - 1/h| <= 1/(sqrt(2 pi) B_n) for every mean, B_n > 0, h.
inline double gaussian_residue_row(double mean, double bn, int h, std::int64_t m) {
    if (!(bn > 0.0)) throw std::invalid_argument("gaussian_residue_row: bn must be positive");
    if (h < 1) throw std::invalid_argument("gaussian_residue_row: h must be >= 1");
    double mprime = (mean - static_cast<double>(m)) / h;
    double delta = mprime - std::floor(mprime);
    double a = 2.0 * constants::pi * constants::pi * bn * bn / (static_cast<double>(h) * h);
    double sum = 1.0;
    for (long l = 1;; ++l) {
        double factor = std::exp(-a * static_cast<double>(l) * l);
        if (factor < 1e-19) break;
        sum += 2.0 * std::cos(2.0 * constants::pi * l * delta) * factor;
    }
    return sum / h;
}

// Signed total of P{S_n=k} - (1/(sqrt(2 pi) B_n)) exp(-(k-mean)^2/(2 B_n^2))
// over the support window; O(1/B_n) in magnitude.
template <class R>
double gaussian_row_deficit(const law_context<R>& ctx) {
    double total = 0.0;
    for (std::size_t i = 0; i < ctx.law.size(); ++i) {
        double k = static_cast<double>(ctx.law.origin + static_cast<std::int64_t>(i));
        total += to_double(ctx.law.weights[i]) - gaussian_profile(k, ctx.mean, ctx.bn) / ctx.bn;
    }
    return total;
}

template <class R>
double gaussian_row_deficit(const sum_model<R>& model) {
    return gaussian_row_deficit(make_law_context(model));
}

}  // namespace lltkit
