// Acceptance suite: certifies the toolkit end to end, one criterion per
// section, printing one PASS/FAIL line each. Oracles are independent of
// the implementation paths they check (brute-force residue folds, direct
// lattice sums, exact big-integer tails). Exit status is nonzero if any
// criterion fails.
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <vector>

#include "lltkit/appendix.hpp"
#include "lltkit/bernoulli_part.hpp"
#include "lltkit/binomial.hpp"
#include "lltkit/bounds.hpp"
#include "lltkit/factory.hpp"
#include "lltkit/runner.hpp"
#include "lltkit/theta.hpp"

using namespace lltkit;

namespace {

int failures = 0;
using clk = std::chrono::steady_clock;

struct criterion_scope {
    int id;
    const char* label;
    clk::time_point start = clk::now();
    bool ok = true;
    std::string detail;

    criterion_scope(int id_, const char* label_) : id(id_), label(label_) {}

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }

    void note(const std::string& text) {
        if (!detail.empty()) detail += "; ";
        detail += text;
    }

    ~criterion_scope() {
        double secs = std::chrono::duration<double>(clk::now() - start).count();
        std::printf("[%s] criterion %2d: %s (%.1fs%s%s)\n", ok ? "PASS" : "FAIL", id, label, secs,
                    detail.empty() ? "" : "; ", detail.c_str());
        if (!ok) ++failures;
    }
};

rational rq(long n, long d = 1) { return ratio_of<rational>(n, d); }

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// independent residue oracle: brute-force fold of the law by value mod h
template <class R>
std::vector<double> residue_oracle(const lattice_pmf<R>& law, int h) {
    std::vector<double> out(static_cast<std::size_t>(h), 0.0);
    for (std::size_t i = 0; i < law.size(); ++i) {
        std::int64_t v = law.origin + static_cast<std::int64_t>(i);
        out[static_cast<std::size_t>(((v % h) + h) % h)] += to_double(law.weights[i]);
    }
    return out;
}

double residue_row_direct(double mean, double bn, int h, std::int64_t m) {
    double lo = mean - 14.0 * bn, hi = mean + 14.0 * bn;
    std::int64_t k = m + static_cast<std::int64_t>(std::floor((lo - m) / h)) * h;
    double sum = 0.0;
    for (; static_cast<double>(k) <= hi; k += h) {
        double z = (static_cast<double>(k) - mean) / bn;
        sum += std::exp(-0.5 * z * z);
    }
    return sum / (constants::sqrt_two_pi * bn);
}

void criterion_1() {
    criterion_scope c(1, "exact residue oracle: DFT route vs convolution fold, exhaustive small grid");
    long cells = 0;
    double worst = 0.0;
    auto factory = factory_pmfs<rational>();
    std::vector<lattice_pmf<rational>> narrow;
    for (const auto& np : factory)
        if (np.pmf.size() <= 6) narrow.push_back(np.pmf);
    c.check(narrow.size() >= 8, "factory too small");
    for (std::size_t which = 0; which < narrow.size(); ++which) {
        for (std::size_t n = 1; n <= 12; ++n) {
            // i.i.d. plus a mixed variant pairing with the next family
            for (int variant = 0; variant < 2; ++variant) {
                std::vector<lattice_pmf<rational>> comps;
                for (std::size_t i = 0; i < n; ++i)
                    comps.push_back(variant && i % 2 ? narrow[(which + 1) % narrow.size()] : narrow[which]);
                auto model = make_model(comps);
                auto law = sum_distribution(model);
                rational mass{};
                for (const auto& w : law.weights) mass += w;
                c.check(mass == rq(1), "exact law mass != 1");
                for (int h = 2; h <= 8; ++h) {
                    std::vector<rational> fold = residue_masses(law, h);
                    std::vector<double> dft = detail::residue_dft(model, h);
                    rational fold_mass{};
                    for (int m = 0; m < h; ++m) {
                        fold_mass += fold[static_cast<std::size_t>(m)];
                        worst = std::max(worst, std::abs(to_double(fold[static_cast<std::size_t>(m)]) -
                                                         dft[static_cast<std::size_t>(m)]));
                    }
                    c.check(fold_mass == rq(1), "residue masses don't sum to 1");
                    ++cells;
                }
            }
        }
    }
    c.check(worst <= 1e-10, "route disagreement " + fmt(worst));
    c.note(std::to_string(cells) + " models*h cells, worst gap " + fmt(worst));
}

void criterion_2() {
    criterion_scope c(2, "split/reconstruct identity exact for >= 10 laws x 3 coin masses");
    int laws = 0;
    for (const auto& np : factory_pmfs<rational>()) {
        rational theta = bernoulli_part_mass(np.pmf);
        if (!(theta > rq(0))) continue;
        ++laws;
        for (const rational& v : std::vector<rational>{theta, rational(theta / 2), rational(theta / 10)}) {
            auto rec = reconstruct_law(decompose(np.pmf, v));
            c.check(rec.weights == np.pmf.weights && rec.origin == np.pmf.origin,
                    "reconstruction mismatch for " + np.name);
        }
    }
    c.check(laws >= 10, "fewer than 10 factory laws");
    c.note(std::to_string(laws) + " laws x 3 masses, exact rational equality");
}

void criterion_3() {
    criterion_scope c(3, "theta and residue-row dual evaluations agree; row deviation envelope");
    double worst_theta = 0.0;
    for (long n = 4; n <= 4096; ++n)
        for (long d = 1; d <= 64; ++d)
            for (long u = 0; u < d; ++u) {
                auto a = theta_sum_direct(d, n, u);
                auto b = theta_sum_poisson(d, n, u);
                worst_theta =
                    std::max(worst_theta, std::abs(a.value - b.value) / std::max(1.0, std::abs(a.value)));
            }
    c.check(worst_theta <= 1e-12, "theta route gap " + fmt(worst_theta));

    double worst_row = 0.0, worst_envelope = -1.0;
    for (long n = 4; n <= 4096; n *= 2) {
        double bn = std::sqrt(static_cast<double>(n)) / 2.0;
        for (double mean : {0.0, 0.37, static_cast<double>(n) / 2.0})
            for (int h = 1; h <= 64; ++h)
                for (std::int64_t m = 0; m < h; ++m) {
                    double row = gaussian_residue_row(mean, bn, h, m);
                    worst_row = std::max(worst_row, std::abs(row - residue_row_direct(mean, bn, h, m)));
                    double slack = 1.0 / (constants::sqrt_two_pi * bn) - std::abs(row - 1.0 / h);
                    worst_envelope = std::max(worst_envelope, -slack);
                }
        (void)bn;
    }
    c.check(worst_row <= 1e-12, "row route gap " + fmt(worst_row));
    c.check(worst_envelope <= 1e-15, "row envelope violated by " + fmt(worst_envelope));
    c.note("theta gap " + fmt(worst_theta) + ", row gap " + fmt(worst_row));
}

void criterion_4() {
    criterion_scope c(4, "residue uniformity: four-term bound and closed-form envelope on the factory grid");
    std::vector<named_pmf<double>> families = {
        {"bernoulli(1/2)", make_bernoulli(0.5)},      {"bernoulli(1/4)", make_bernoulli(0.25)},
        {"uniform{0..2}", make_uniform<double>(0, 2)}, {"uniform{0..5}", make_uniform<double>(0, 5)},
        {"skewed3", make_pmf<double>(0, {0.5, 0.3, 0.2})},
    };
    long cells = 0, skipped = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& fam : families)
        for (long n = 36; n <= 4096; n *= 2) {
            auto ctx = make_law_context(make_iid_model(fam.pmf, static_cast<std::size_t>(n)));
            if (ctx.bn < 6.0) {
                ++skipped;
                continue;
            }
            double phi = ctx.profile.phi_value;
            for (int h = 2; h <= 16; ++h) {
                auto env = residue_envelope_bound(ctx.bn, h, 1.0, phi);
                for (double eps : {1.0, std::pow(phi, -2.0 / 3.0)}) {
                    auto rep = check_residue_uniformity_bound(ctx, h, eps, 1.0, phi);
                    c.check(rep.hypothesis_ok, "unexpected hypothesis failure");
                    c.check(rep.pass(), fam.name + " n=" + std::to_string(n) + " h=" + std::to_string(h) +
                                            " margin " + fmt(rep.margin()));
                    c.check(rep.measured <= env.value + kCheckTol,
                            fam.name + " exceeds closed-form envelope at h=" + std::to_string(h));
                    worst_margin = std::min(worst_margin, std::min(rep.margin(), env.value - rep.measured));
                    ++cells;
                }
            }
        }
    c.note(std::to_string(cells) + " cells (" + std::to_string(skipped) + " below the variance gate), worst margin " +
           fmt(worst_margin));
}

void criterion_5() {
    criterion_scope c(5, "theta approximation rate for fair-coin sums: bounded ratio, no growth trend");
    std::vector<std::pair<double, double>> log_ratio;
    double max_ratio = 0.0;
    for (long n = 64; n <= 4096; n *= 2) {
        auto pt = binomial_theta_rate(n);
        c.check(pt.sup_error < 1.0, "sup error not even below 1");
        max_ratio = std::max(max_ratio, pt.ratio);
        log_ratio.emplace_back(std::log(static_cast<double>(n)), std::log(pt.ratio));
    }
    auto [slope, icpt] = least_squares(std::span<const std::pair<double, double>>(log_ratio));
    (void)icpt;
    c.check(slope <= 0.05, "log-ratio slope " + fmt(slope));
    c.check(max_ratio < 1.0, "empirical constant unexpectedly large: " + fmt(max_ratio));
    c.note("empirical constant " + fmt(max_ratio) + ", log-ratio slope " + fmt(slope));
}

void criterion_6() {
    criterion_scope c(6, "divisor uniformity bounds over log and power regions, exact laws");
    std::vector<lattice_pmf<rational>> alt_base = {make_bernoulli(rq(1, 2)), make_uniform<rational>(0, 2)};
    for (int model_id = 0; model_id < 2; ++model_id)
        for (long n : {256L, 1024L, 4096L}) {
            auto model = model_id == 0 ? make_iid_model(make_bernoulli(rq(1, 2)), static_cast<std::size_t>(n))
                                       : cyclic_model(alt_base, static_cast<std::size_t>(n));
            auto ctx = make_law_context(std::move(model));
            const char* name = model_id == 0 ? "fair-coin" : "alternating";
            for (auto [alpha, alpha_prime, eps] :
                 std::vector<std::tuple<double, double, double>>{{2.0, 1.0, 0.5}, {3.0, 2.0, 0.25}}) {
                auto rep = check_divisor_bound_log_region(ctx, alpha, alpha_prime, eps);
                c.check(rep.hypothesis_ok, std::string(name) + " log-region hypothesis at n=" + std::to_string(n));
                c.check(rep.pass(), std::string(name) + " log-region fail at n=" + std::to_string(n) +
                                        " margin " + fmt(rep.margin()));
            }
            for (double rho : {1.0 / 3.0, 0.5})
                for (double eps : {0.25, 0.5}) {
                    auto rep = check_divisor_bound_power_region(ctx, rho, eps);
                    c.check(rep.hypothesis_ok,
                            std::string(name) + " power-region hypothesis at n=" + std::to_string(n));
                    c.check(rep.pass(), std::string(name) + " power-region fail at n=" + std::to_string(n) +
                                            " rho=" + fmt(rho) + " eps=" + fmt(eps) + " margin " +
                                            fmt(rep.margin()));
                }
        }
}

void criterion_7() {
    criterion_scope c(7, "Chernoff tails: exact domination and seed-fixed Monte Carlo bands");
    for (long mu : {5L, 10L, 20L, 50L}) {
        binomial_law law(2 * mu);
        for (long j = 1; j <= 10; ++j) {
            double eps = static_cast<double>(j) / 10.0;
            long k_up = (mu * (10 + j) + 9) / 10;
            c.check(law.upper_tail(k_up) <= chernoff_upper(static_cast<double>(mu), eps) + 1e-15,
                    "upper tail mu=" + std::to_string(mu) + " eps=" + fmt(eps));
            if (j < 10) {
                long k_dn = mu * (10 - j) / 10;
                c.check(law.lower_tail(k_dn) <= chernoff_lower(static_cast<double>(mu), eps) + 1e-15,
                        "lower tail mu=" + std::to_string(mu) + " eps=" + fmt(eps));
            }
        }
    }
    const std::uint64_t trials = 100000;
    counter_rng rng(424242);
    binomial_law law(20);
    std::uint64_t up = 0, dn = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        int s = 0;
        for (std::uint64_t j = 0; j < 20; ++j) s += rng.bit(t, j) ? 1 : 0;
        if (s >= 15) ++up;
        if (s <= 5) ++dn;
    }
    double p_up = law.upper_tail(15), p_dn = law.lower_tail(5);
    double f_up = static_cast<double>(up) / trials, f_dn = static_cast<double>(dn) / trials;
    c.check(std::abs(f_up - p_up) <= 4.0 * std::sqrt(p_up * (1 - p_up) / trials), "MC upper band");
    c.check(std::abs(f_dn - p_dn) <= 4.0 * std::sqrt(p_dn * (1 - p_dn) / trials), "MC lower band");
    c.check(f_up <= chernoff_upper(10.0, 0.5) + 4.0 * std::sqrt(p_up * (1 - p_up) / trials), "MC vs bound");
    c.note("MC freq " + fmt(f_up) + " vs exact " + fmt(p_up));
}

void criterion_8() {
    criterion_scope c(8, "characteristic-function envelope on a 1000-point sweep; H(X, integer) = 0");
    for (const auto& np : factory_pmfs<double>()) {
        double worst = -1.0;
        for (int k = 0; k <= 1000; ++k) {
            double t = 2.0 * constants::pi * k / 1000.0;
            worst = std::max(worst, check_char_modulus_envelope(np.pmf, t).measured);
        }
        c.check(worst <= kCheckTol, np.name + " envelope violated by " + fmt(worst));
        for (double d : {-3.0, -1.0, 0.0, 1.0, 2.0, 17.0})
            c.check(mukhin_characteristic(np.pmf, d) == 0.0, np.name + " H at integer shift");
    }
}

void criterion_9() {
    criterion_scope c(9, "local-error decay exponent of i.i.d. families reaches -0.4");
    std::vector<long> grid;
    for (long n = 64; n <= 4096; n *= 2) grid.push_back(n);
    auto coin = llt_rate_fit(make_bernoulli(0.5), 1.0, grid);
    c.check(coin.report.pass(), "fair coin slope " + fmt(coin.slope));
    auto uni = llt_rate_fit(make_uniform<double>(0, 2), 1.0, grid);
    c.check(uni.report.pass(), "uniform slope " + fmt(uni.slope));
    c.note("slopes " + fmt(coin.slope) + " and " + fmt(uni.slope) + " vs -0.4 gate");
}

void criterion_10() {
    criterion_scope c(10, "residue-mass products: closed forms exact, product chain holds");
    std::vector<lattice_pmf<rational>> coins(144, make_bernoulli(rq(1, 2)));
    for (std::size_t n : {1u, 5u, 20u, 144u}) {
        auto rp = rozanov_products<rational>(coins, 2, n);
        rational expect(mpz_class(1), mpz_class(1) << n);
        c.check(rp.product == expect, "coin product differs from 2^-n at n=" + std::to_string(n));
    }
    std::vector<lattice_pmf<rational>> uni(64, make_uniform<rational>(0, 2));
    mpz_class p3 = 1;
    for (int i = 0; i < 64; ++i) p3 *= 3;
    c.check(rozanov_products<rational>(uni, 3, 64).product == rational(mpz_class(1), p3),
            "uniform product differs from 3^-n");

    std::vector<named_pmf<rational>> families = {
        {"bernoulli(1/2)", make_bernoulli(rq(1, 2))},
        {"uniform{0..2}", make_uniform<rational>(0, 2)},
        {"skewed3", make_pmf<rational>(0, {rq(1, 2), rq(3, 10), rq(1, 5)})},
        {"tent3", make_pmf<rational>(0, {rq(1, 4), rq(1, 2), rq(1, 4)})},
    };
    long cells = 0;
    for (const auto& fam : families)
        for (long n : {144L, 288L, 576L}) {
            auto ctx = make_law_context(make_iid_model(fam.pmf, static_cast<std::size_t>(n)));
            if (ctx.bn < 6.0) continue;
            for (int h : {2, 3, 5, 8}) {
                auto res = check_residue_product_chain(ctx, h, 1.0, ctx.profile.phi_value);
                auto rp = rozanov_products<rational>(ctx.model.components, h, ctx.model.size());
                c.check(res.chain.hypothesis_ok, "chain hypothesis");
                c.check(res.product_below_p0, fam.name + " product > P0 at h=" + std::to_string(h));
                c.check(res.chain.pass(), fam.name + " chain fail at n=" + std::to_string(n) +
                                              " h=" + std::to_string(h));
                c.check(res.log_sum.pass(), fam.name + " log-sum fail at h=" + std::to_string(h));
                c.check(to_double(rp.product) <= res.chain.bound + kCheckTol,
                        fam.name + " partial product above 1/h + H_n");
                ++cells;
            }
        }
    c.note(std::to_string(cells) + " chain cells");
}

void criterion_11() {
    criterion_scope c(11, "byte-identical reports for any worker count");
    auto read_file = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    std::vector<nlohmann::json> configs;
    configs.push_back({{"suite", "aud"},
                       {"mode", "exact"},
                       {"model", {{"name", "fair-coin"}, {"components", {{{"dist", "bernoulli"}, {"p", "1/2"}}}}}},
                       {"n", {144, 196, 256}},
                       {"h", {2, 3, 5}},
                       {"out", "acc11_a.csv"}});
    configs.push_back({{"suite", "bernoulli-part"},
                       {"mode", "float"},
                       {"model",
                        {{"name", "mixed"},
                         {"components",
                          {{{"dist", "bernoulli"}, {"p", 0.5}}, {{"dist", "uniform"}, {"lo", 0}, {"hi", 2}}}}}},
                       {"n", {12, 24}},
                       {"seed", 2026},
                       {"trials", 40000},
                       {"out", "acc11_b.csv"}});
    for (auto& j : configs) {
        auto cfg = parse_config(j);
        std::string p1 = cfg.out + ".w1", p2 = cfg.out + ".w4";
        write_report(run_suite(cfg, 1), cfg, p1);
        write_report(run_suite(cfg, 4), cfg, p2);
        c.check(read_file(p1) == read_file(p2), cfg.suite + " reports differ across worker counts");
        c.check(!read_file(p1).empty(), "empty report");
        for (const std::string& p : {p1, p2, p1 + ".meta.json", p2 + ".meta.json"}) std::remove(p.c_str());
    }
}

}  // namespace

int main() {
    std::printf("acceptance suite: %s\n", kToolVersion);
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all 11 criteria passed\n");
    return 0;
}
