// Certified tail and equidistribution bounds for sums with positive
// accumulated Bernoulli mass nu = sum_j (extractable Bernoulli mass of X_j):
// Chernoff-type tails, divisor-uniformity bounds over two divisor regions
// whose hypotheses are machine-checked through an endpoint sinc test, and
// residue-product criteria.
#pragma once

#include <cmath>
#include <cstdio>

#include "lltkit/gauss.hpp"
#include "lltkit/report.hpp"

namespace lltkit {

// P{S >= (1+eps) mu} <= exp(-eps^2 mu / (2(1 + eps/3))) for [0,1]-valued
// independent summands with mean total mu.
inline double chernoff_upper(double mu, double eps) {
    if (!(mu > 0.0)) throw std::invalid_argument("chernoff_upper: mu must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("chernoff_upper: eps must be positive");
    return std::exp(-eps * eps * mu / (2.0 * (1.0 + eps / 3.0)));
}

// P{S <= (1-eps) mu} <= exp(-eps^2 mu / 2), 0 < eps < 1.
inline double chernoff_lower(double mu, double eps) {
    if (!(mu > 0.0)) throw std::invalid_argument("chernoff_lower: mu must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("chernoff_lower: eps must be in (0,1)");
    return std::exp(-eps * eps * mu / 2.0);
}

// sin(x)/x >= threshold for all |x| <= half_width, certified at the
// endpoint: sinc is even and decreasing on [0, pi], so the endpoint value
// decides the whole interval. Arguments past pi are rejected because the
// monotonicity argument stops there.
inline bool sinc_condition(double half_width, double threshold) {
    if (!(half_width >= 0.0) || half_width > constants::pi)
        throw std::invalid_argument("sinc_condition: half_width must lie in [0, pi]");
    double endpoint = half_width == 0.0 ? 1.0 : std::sin(half_width) / half_width;
    return endpoint >= threshold;
}

namespace detail {

// sup over 2 <= d < d_limit and all residues of |P{S = m (mod d)} - 1/d|,
// differences formed in the law's arithmetic before conversion.
template <class R>
double divisor_region_sup(const lattice_pmf<R>& law, double d_limit, long* arg_d = nullptr) {
    double sup = 0.0;
    for (long d = 2; static_cast<double>(d) < d_limit; ++d) {
        std::vector<R> res = residue_masses(law, static_cast<int>(d));
        for (const R& p : res) {
            double dev = std::abs(to_double(p - ratio_of<R>(1, d)));
            if (dev > sup) {
                sup = dev;
                if (arg_d) *arg_d = d;
            }
        }
    }
    return sup;
}

template <class R>
bool all_components_have_bernoulli_mass(const sum_model<R>& model) {
    for (const auto& c : model.components)
        if (!(bernoulli_part_mass(c) > R{})) return false;
    return true;
}

}  // namespace detail

// Divisor uniformity over the logarithmic region: whenever every summand
// carries Bernoulli mass and sinc(half) >= sqrt(alpha'/alpha) at
// half = (1/2) sqrt(2 alpha log g / g), g = (1-eps) nu,
//   sup_{u, 2 <= d < pi sqrt(g / (2 alpha log g))} |P{d|S_n+u} - 1/d|
//     <= 2 exp(-eps^2 nu / 2) + g^{-alpha'}.
template <class R>
bound_report check_divisor_bound_log_region(const law_context<R>& ctx, double alpha, double alpha_prime,
                                            double eps) {
    if (!(alpha > alpha_prime) || !(alpha_prime > 0.0))
        throw std::invalid_argument("check_divisor_bound_log_region: need alpha > alpha' > 0");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("check_divisor_bound_log_region: eps must be in (0,1)");
    bound_report r;
    r.name = "divisor-bound-log-region";
    const double nu = ctx.model.nu();
    const double g = (1.0 - eps) * nu;
    char buf[128];
    std::snprintf(buf, sizeof buf, "n=%zu eps=%.4g alpha=%.4g alpha'=%.4g", ctx.model.size(), eps, alpha,
                  alpha_prime);
    r.region = buf;
    if (!detail::all_components_have_bernoulli_mass(ctx.model)) {
        r.hypothesis_ok = false;
        r.region += " [component without Bernoulli mass]";
        return r;
    }
    if (!(g > std::exp(1.0))) {
        r.hypothesis_ok = false;
        r.region += " [(1-eps)nu <= e]";
        return r;
    }
    double half = 0.5 * std::sqrt(2.0 * alpha * std::log(g) / g);
    if (half > constants::pi || !sinc_condition(half, std::sqrt(alpha_prime / alpha))) {
        r.hypothesis_ok = false;
        r.region += " [sinc endpoint]";
        return r;
    }
    double d_limit = constants::pi * std::sqrt(g / (2.0 * alpha * std::log(g)));
    std::snprintf(buf, sizeof buf, " d<%.4g", d_limit);
    r.region += buf;
    if (d_limit <= 2.0) r.region += " [empty]";
    r.measured = detail::divisor_region_sup(ctx.law, d_limit);
    r.bound = 2.0 * std::exp(-eps * eps * nu / 2.0) + std::pow(g, -alpha_prime);
    return r;
}

// Divisor uniformity over the power region: with sinc(half) >= sqrt(1-eps)
// at half = (1/2) sqrt(2 / g^{1-rho}),
//   sup_{u, 2 <= d < (pi/sqrt 2) g^{(1-rho)/2}} |P{d|S_n+u} - 1/d|
//     <= 2 exp(-eps^2 nu / 2) + exp(-g^rho).
template <class R>
bound_report check_divisor_bound_power_region(const law_context<R>& ctx, double rho, double eps) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("check_divisor_bound_power_region: rho must be in (0,1)");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("check_divisor_bound_power_region: eps must be in (0,1)");
    bound_report r;
    r.name = "divisor-bound-power-region";
    const double nu = ctx.model.nu();
    const double g = (1.0 - eps) * nu;
    char buf[128];
    std::snprintf(buf, sizeof buf, "n=%zu eps=%.4g rho=%.4g", ctx.model.size(), eps, rho);
    r.region = buf;
    if (!detail::all_components_have_bernoulli_mass(ctx.model)) {
        r.hypothesis_ok = false;
        r.region += " [component without Bernoulli mass]";
        return r;
    }
    if (!(g > 1.0)) {
        r.hypothesis_ok = false;
        r.region += " [(1-eps)nu <= 1]";
        return r;
    }
    double half = 0.5 * std::sqrt(2.0 / std::pow(g, 1.0 - rho));
    if (half > constants::pi || !sinc_condition(half, std::sqrt(1.0 - eps))) {
        r.hypothesis_ok = false;
        r.region += " [sinc endpoint]";
        return r;
    }
    double d_limit = constants::pi / std::sqrt(2.0) * std::pow(g, (1.0 - rho) / 2.0);
    std::snprintf(buf, sizeof buf, " d<%.4g", d_limit);
    r.region += buf;
    if (d_limit <= 2.0) r.region += " [empty]";
    r.measured = detail::divisor_region_sup(ctx.law, d_limit);
    r.bound = 2.0 * std::exp(-eps * eps * nu / 2.0) + std::exp(-std::pow(g, rho));
    return r;
}

template <class R>
struct residue_product_partial {
    R product{};             // prod_{k<=n} max_m P{X_k = m (mod h)}
    R divergence_partial{};  // sum_{k<=n} P{X_k != m_k (mod h)} after recentering
};

// Partial products of the maximal residue masses. A law sequence satisfies
// the classical necessary criterion for the strong local limit theorem
// exactly when these products vanish for every h >= 2 as n grows.
template <class R>
residue_product_partial<R> rozanov_products(std::span<const lattice_pmf<R>> components, int h, std::size_t n) {
    if (h < 2) throw std::invalid_argument("rozanov_products: h must be >= 2");
    if (n > components.size()) throw std::invalid_argument("rozanov_products: n exceeds component count");
    residue_product_partial<R> out;
    out.product = R(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<R> res = residue_masses(components[k], h);
        R best = res[0];
        for (const R& p : res) best = std::max(best, p);
        out.product *= best;
        out.divergence_partial += R(1) - best;
    }
    return out;
}

template <class R>
struct product_chain_result {
    bound_report chain;      // P{S_n^Y = 0 (mod h)} <= 1/h + H_n
    bound_report log_sum;    // sum_k r_k/(1-r_k) >= -log(1/h + H_n)
    double product = 0.0;    // prefix product of maximal residue masses
    bool product_below_p0 = false;  // first chain link, exact in exact mode
};

// Recenter each component at its maximal residue class mod h (Y_k = X_k -
// m_k) and certify the two-sided consequences of residue uniformity:
//   prod_k max_m P{X_k = m (h)} <= P{S_n^Y = 0 (h)} <= 1/h + H_n
// and, with r_k the complement of the maximal residue mass,
//   sum_k r_k/(1-r_k) >= -log(1/h + H_n).
template <class R>
product_chain_result<R> check_residue_product_chain(const law_context<R>& ctx, int h, double C, double phi) {
    if (h < 2) throw std::invalid_argument("check_residue_product_chain: h must be >= 2");
    product_chain_result<R> out;
    out.chain.name = "residue-product-chain";
    out.log_sum.name = "residue-product-log-sum";
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%zu h=%d", ctx.model.size(), h);
    out.chain.region = buf;
    out.log_sum.region = buf;

    bool hyp = ctx.bn >= 6.0 && ctx.profile.sup_error <= C / phi * (1.0 + 1e-12);
    if (!hyp) {
        out.chain.hypothesis_ok = false;
        out.log_sum.hypothesis_ok = false;
        out.chain.region += " [bn<6 or profile exceeds C/phi]";
        return out;
    }

    R product = R(1);
    std::int64_t mu_n = 0;
    double log_sum = 0.0;
    for (const auto& c : ctx.model.components) {
        std::vector<R> res = residue_masses(c, h);
        std::size_t arg = 0;
        for (std::size_t m = 1; m < res.size(); ++m)
            if (res[m] > res[arg]) arg = m;
        product *= res[arg];
        mu_n += static_cast<std::int64_t>(arg);
        double r = 1.0 - to_double(res[arg]);
        log_sum += r / (1.0 - r);
    }
    // S_n^Y = S_n - mu_n, so its zero class mod h is the mu_n class of S_n
    std::vector<R> res = residue_masses(ctx.law, h);
    R p0 = res[static_cast<std::size_t>(((mu_n % h) + h) % h)];

    envelope_value env = residue_envelope_bound(ctx.bn, h, C, phi);
    out.product = to_double(product);
    out.product_below_p0 = product <= p0;
    out.chain.measured = to_double(p0);
    out.chain.bound = 1.0 / h + env.value;
    out.log_sum.measured = -std::log(1.0 / h + env.value);
    out.log_sum.bound = log_sum;
    return out;
}

}  // namespace lltkit
