// Rate measurements and structural characteristics: the Mukhin smoothness
// characteristic H(X,d) with its two-sided characteristic-function
// envelope, log-log rate fits for the local-error decay of i.i.d. sums,
// and the structural error terms of the Bernoulli-part local bound.
#pragma once

#include <span>
#include <utility>

#include "lltkit/bounds.hpp"

namespace lltkit {

// H(X, d) = E <X* d>^2 where X* = X - X' is a symmetrization and <.> the
// distance to the nearest integer. The difference law is the
// autocorrelation of the pmf.
template <class R>
double mukhin_characteristic(const lattice_pmf<R>& pmf, double d) {
    const double step = to_double(pmf.step);
    const std::size_t len = pmf.size();
    std::vector<double> w(len);
    for (std::size_t i = 0; i < len; ++i) w[i] = to_double(pmf.weights[i]);
    double total = 0.0;
    for (std::ptrdiff_t t = -static_cast<std::ptrdiff_t>(len) + 1; t < static_cast<std::ptrdiff_t>(len); ++t) {
        double mass = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) - t;
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(len)) mass += w[i] * w[static_cast<std::size_t>(j)];
        }
        if (mass == 0.0) continue;
        double x = step * static_cast<double>(t) * d;
        double dist = std::abs(x - std::round(x));
        total += mass * dist * dist;
    }
    return total;
}

// Two-sided envelope 1 - 2 pi^2 H(X, t/2pi) <= |phi_X(t)| <= 1 - 4 H(X, t/2pi).
// measured is the worst violation over the two sides (<= 0 when both hold),
// checked against a zero bound.
template <class R>
bound_report check_char_modulus_envelope(const lattice_pmf<R>& pmf, double t) {
    double h = mukhin_characteristic(pmf, t / (2.0 * constants::pi));
    double modulus = std::abs(char_function(pmf, t));
    double lower = 1.0 - 2.0 * constants::pi * constants::pi * h;
    double upper = 1.0 - 4.0 * h;
    bound_report r;
    r.name = "char-modulus-envelope";
    char buf[64];
    std::snprintf(buf, sizeof buf, "t=%.6g", t);
    r.region = buf;
    r.measured = std::max(lower - modulus, modulus - upper);
    r.bound = 0.0;
    return r;
}

struct rate_fit {
    std::vector<std::pair<double, double>> points;  // (log n, log sup_error)
    double slope = 0.0;
    double intercept = 0.0;
    bound_report report;  // measured = slope, bound = -alpha/2 + 0.1
};

inline std::pair<double, double> least_squares(std::span<const std::pair<double, double>> pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

// Fits log sup_error against log n for i.i.d. sums of the base law and
// accepts when the decay exponent reaches alpha/2 up to 0.1 slack.
template <class R>
rate_fit llt_rate_fit(const lattice_pmf<R>& base, double alpha, std::span<const long> n_grid) {
    if (n_grid.size() < 2) throw std::invalid_argument("llt_rate_fit: need at least two grid points");
    rate_fit fit;
    for (long n : n_grid) {
        auto prof = llt_sup_error(make_iid_model(base, static_cast<std::size_t>(n)));
        fit.points.emplace_back(std::log(static_cast<double>(n)), std::log(prof.sup_error));
    }
    auto [slope, intercept] = least_squares(std::span<const std::pair<double, double>>(fit.points));
    fit.slope = slope;
    fit.intercept = intercept;
    fit.report.name = "llt-rate-slope";
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%ld..%ld", n_grid.front(), n_grid.back());
    fit.report.region = buf;
    fit.report.measured = slope;
    fit.report.bound = -alpha / 2.0 + 0.1;
    return fit;
}

struct structural_error_terms {
    bool applicable = false;
    std::string note;
    double l_n = quiet_nan();          // sum_j E|X_j|^p / (Var S_n)^{p/2}
    double lattice_term = quiet_nan(); // sqrt(log nu / (Var S_n * nu))
    double moment_term = quiet_nan();  // (L_n + 1/nu) / sqrt(nu)
    double measured = quiet_nan();     // |P{S_n = kappa} - Gaussian term|
    double ratio = quiet_nan();        // measured / (lattice_term + moment_term)
};

// Structural decomposition of the local error at a near-central point
// kappa, valid once nu is large enough (log nu / nu <= 1/14) and kappa
// lies in the central window (kappa - M)^2 / Var <= sqrt(7 log nu / 2 nu).
// The leading constant is deliberately not asserted; the measured ratio is
// reported instead.
template <class R>
structural_error_terms local_error_structural_terms(const law_context<R>& ctx, double psi_exponent,
                                                    std::int64_t kappa) {
    if (!(psi_exponent >= 2.0 && psi_exponent <= 3.0))
        throw std::invalid_argument("local_error_structural_terms: psi exponent must lie in [2,3]");
    structural_error_terms out;
    const double nu = ctx.model.nu();
    if (!(nu > 1.0) || std::log(nu) / nu > 1.0 / 14.0) {
        out.note = "nu too small: log(nu)/nu > 1/14";
        return out;
    }
    for (const auto& c : ctx.model.components)
        if (!(bernoulli_part_mass(c) > R{})) {
            out.note = "component without Bernoulli mass";
            return out;
        }
    const double var = ctx.bn * ctx.bn;
    const double window = std::sqrt(7.0 * std::log(nu) / (2.0 * nu));
    const double dev2 = (static_cast<double>(kappa) - ctx.mean) * (static_cast<double>(kappa) - ctx.mean) / var;
    if (dev2 > window) {
        out.note = "kappa outside the central window";
        return out;
    }
    out.applicable = true;
    double psi_sum = 0.0;
    for (const auto& c : ctx.model.components)
        for (std::size_t i = 0; i < c.size(); ++i)
            psi_sum += to_double(c.weights[i]) * std::pow(std::abs(to_double(c.value(i))), psi_exponent);
    out.l_n = psi_sum / std::pow(ctx.bn, psi_exponent);
    out.lattice_term = std::sqrt(std::log(nu) / (var * nu));
    out.moment_term = (out.l_n + 1.0 / nu) / std::sqrt(nu);
    std::int64_t idx = kappa - ctx.law.origin;
    double p = (idx >= 0 && idx < static_cast<std::int64_t>(ctx.law.size()))
                   ? to_double(ctx.law.weights[static_cast<std::size_t>(idx)])
                   : 0.0;
    out.measured = std::abs(p - gaussian_profile(static_cast<double>(kappa), ctx.mean, ctx.bn) / ctx.bn);
    out.ratio = out.measured / (out.lattice_term + out.moment_term);
    return out;
}

}  // namespace lltkit
