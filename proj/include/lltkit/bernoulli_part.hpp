// Bernoulli-part extraction. A law X with positive extractable mass
// theta_X splits, for any 0 < vartheta <= theta_X, into a pair (V, eps)
// with
//   P{(V,eps) = (v_k, 1)} = tau_k,
//   P{(V,eps) = (v_k, 0)} = f(k) - (tau_{k-1} + tau_k)/2,
// where tau_{k-1} + tau_k <= 2 f(k) and sum tau_k = vartheta. For a fair
// coin L independent of (V,eps), V + eps D L has exactly the law of X.
// Sums then inherit a fair-coin component of random length B_n = sum eps_j,
// sampled here reproducibly.
#pragma once

#include <map>
#include <thread>

#include "lltkit/convolve.hpp"
#include "lltkit/model.hpp"
#include "lltkit/rng.hpp"

namespace lltkit {

template <class R>
struct bernoulli_decomposition {
    lattice_pmf<R> source;
    lattice_pmf<R> reduced;   // maximal-span relabeling the split acts on
    std::int64_t stride = 1;  // source index stride of consecutive reduced points
    R span{};                 // D: coin displacement in source value units
    R vartheta{};
    std::vector<R> tau;        // indexed like reduced.weights; tau.back() = 0
    std::vector<R> joint_coin; // P{(V,eps) = (v_k, 1)} = tau_k
    std::vector<R> joint_keep; // P{(V,eps) = (v_k, 0)}
};

namespace detail {

template <class R>
bernoulli_decomposition<R> build_decomposition(const lattice_pmf<R>& pmf, R vartheta, std::vector<R> tau) {
    bernoulli_decomposition<R> dec;
    dec.source = pmf;
    span_result s = detect_span(pmf);
    if (s.degenerate) throw std::domain_error("decompose: point mass has no Bernoulli part");
    dec.stride = s.index_gcd;
    dec.reduced = reduce_lattice(pmf);
    dec.span = pmf.step * R(static_cast<long>(s.index_gcd));
    dec.vartheta = vartheta;
    dec.tau = std::move(tau);

    const std::size_t len = dec.reduced.size();
    if (dec.tau.size() != len) throw std::invalid_argument("decompose: tau must be indexed like the support");
    R tau_total{};
    for (const R& t : dec.tau) {
        if (t < R{}) throw std::invalid_argument("decompose: tau must be nonnegative");
        tau_total += t;
    }
    auto close = [](const R& a, const R& b) {
        if constexpr (is_exact_mode<R>) return a == b;
        else return std::abs(to_double(a) - to_double(b)) <= 1e-12;
    };
    if (!close(tau_total, vartheta)) throw std::invalid_argument("decompose: tau must sum to vartheta");

    dec.joint_coin = dec.tau;
    dec.joint_keep.resize(len);
    for (std::size_t k = 0; k <= len; ++k) {
        R prev = k > 0 ? dec.tau[k - 1] : R{};
        R cur = k < len ? dec.tau[k] : R{};
        R f = k < len ? dec.reduced.weights[k] : R{};
        R slack = R(2) * f - prev - cur;  // tau_{k-1} + tau_k <= 2 f(k), all k
        if constexpr (is_exact_mode<R>) {
            if (slack < R{}) throw std::invalid_argument("decompose: tau violates the pairing constraint");
        } else {
            if (to_double(slack) < -1e-12) throw std::invalid_argument("decompose: tau violates the pairing constraint");
        }
        if (k < len) {
            R half = slack / R(2);
            if (half < R{}) half = R{};  // float-mode round-off only
            dec.joint_keep[k] = half;
        }
    }
    return dec;
}

}  // namespace detail

// Default extraction: tau_k proportional to the adjacent overlaps,
// tau_k = (vartheta / theta_X) min(f(k), f(k+1)).
template <class R>
bernoulli_decomposition<R> decompose(const lattice_pmf<R>& pmf, R vartheta) {
    R theta = bernoulli_part_mass(pmf);
    if (!(theta > R{})) throw std::domain_error("decompose: law has no Bernoulli part");
    if (!(vartheta > R{}) || vartheta > theta)
        throw std::invalid_argument("decompose: vartheta must lie in (0, theta_X]");
    lattice_pmf<R> red = reduce_lattice(pmf);
    std::vector<R> tau(red.size());
    for (std::size_t k = 0; k < red.size(); ++k) {
        R next = k + 1 < red.size() ? red.weights[k + 1] : R{};
        tau[k] = vartheta / theta * std::min(red.weights[k], next);
    }
    return detail::build_decomposition(pmf, vartheta, std::move(tau));
}

// Extraction with a caller-supplied tau sequence; rejected unless it
// satisfies the pairing constraints exactly.
template <class R>
bernoulli_decomposition<R> decompose(const lattice_pmf<R>& pmf, R vartheta, std::vector<R> tau) {
    R theta = bernoulli_part_mass(pmf);
    if (!(theta > R{})) throw std::domain_error("decompose: law has no Bernoulli part");
    if (!(vartheta > R{}) || vartheta > theta)
        throw std::invalid_argument("decompose: vartheta must lie in (0, theta_X]");
    return detail::build_decomposition(pmf, vartheta, std::move(tau));
}

// Law of V + eps D L for a fair coin L independent of (V, eps):
//   weight(v_k) = keep_k + coin_k / 2 + coin_{k-1} / 2.
// Recovers the source law exactly in exact mode.
template <class R>
lattice_pmf<R> reconstruct_law(const bernoulli_decomposition<R>& dec) {
    const std::size_t len = dec.reduced.size();
    std::vector<R> red(len);
    for (std::size_t k = 0; k < len; ++k) {
        red[k] = dec.joint_keep[k] + dec.joint_coin[k] / R(2);
        if (k > 0) red[k] += dec.joint_coin[k - 1] / R(2);
    }
    // place back on the source representation
    lattice_pmf<R> out = dec.source;
    std::fill(out.weights.begin(), out.weights.end(), R{});
    for (std::size_t k = 0; k < len; ++k)
        out.weights[k * static_cast<std::size_t>(dec.stride)] = red[k];
    out.validate();
    return out;
}

// Geometric damping envelope max_{1<=j<=d-1} |cos(pi j / d)|^b of the
// non-main Fourier terms of P{d | (coin sum of length b) + c}.
inline double cosine_damping(int d, long coin_count) {
    if (d < 2) throw std::invalid_argument("cosine_damping: d must be >= 2");
    if (coin_count < 0) throw std::invalid_argument("cosine_damping: coin count must be >= 0");
    double best = 0.0;
    for (int j = 1; j < d; ++j)
        best = std::max(best, std::pow(std::abs(cospi(static_cast<double>(j) / d)), static_cast<double>(coin_count)));
    return best;
}

struct coupled_sample_stats {
    std::uint64_t trials = 0;
    std::map<std::int64_t, std::uint64_t> sum_hist;   // W_n + sum eps_j L_j
    std::map<std::int64_t, std::uint64_t> coin_hist;  // B_n = sum eps_j

    double mean_coin_count() const {
        if (trials == 0) return 0.0;
        double s = 0.0;
        for (const auto& [b, c] : coin_hist) s += static_cast<double>(b) * static_cast<double>(c);
        return s / static_cast<double>(trials);
    }
};

// Total variation distance between the empirical sum law and an exact law.
template <class R>
double tv_distance(const coupled_sample_stats& stats, const lattice_pmf<R>& law) {
    if (stats.trials == 0) return 0.0;
    double tv = 0.0;
    for (std::size_t i = 0; i < law.size(); ++i) {
        std::int64_t v = law.origin + static_cast<std::int64_t>(i);
        auto it = stats.sum_hist.find(v);
        double emp = it == stats.sum_hist.end()
                         ? 0.0
                         : static_cast<double>(it->second) / static_cast<double>(stats.trials);
        tv += std::abs(emp - to_double(law.weights[i]));
    }
    for (const auto& [v, c] : stats.sum_hist) {
        if (v >= law.origin && v < law.origin + static_cast<std::int64_t>(law.size())) continue;
        tv += static_cast<double>(c) / static_cast<double>(stats.trials);
    }
    return tv / 2.0;
}

// Coupled trajectories of the decomposed sum: per trial, draws (V_j, eps_j)
// from each component's split and one fair coin per extracted unit. The
// counter-based generator makes the aggregate independent of the worker
// partition. Draw addressing: stream = trial, index = 2j for (V,eps) and
// 2j+1 for the coin.
template <class R>
coupled_sample_stats sample_coupled_sums(const sum_model<R>& model, std::span<const R> varthetas,
                                         std::uint64_t seed, std::uint64_t trials, unsigned workers = 1) {
    if (varthetas.size() != model.size())
        throw std::invalid_argument("sample_coupled_sums: one vartheta per component required");
    if (!model.reduced()) throw std::invalid_argument("sample_coupled_sums: model must be on the reduced lattice");

    struct component_table {
        std::vector<double> cdf;         // over outcomes (value, eps)
        std::vector<std::int64_t> value; // V in lattice units
        std::vector<char> coin;          // eps
        std::int64_t span = 1;           // coin displacement in lattice units
    };
    std::vector<component_table> tables(model.size());
    for (std::size_t j = 0; j < model.size(); ++j) {
        auto dec = decompose(model.components[j], varthetas[j]);
        component_table tab;
        tab.span = static_cast<std::int64_t>(std::llround(to_double(dec.span)));
        double acc = 0.0;
        for (std::size_t k = 0; k < dec.reduced.size(); ++k) {
            std::int64_t v = dec.source.origin + static_cast<std::int64_t>(k) * dec.stride;
            double keep = to_double(dec.joint_keep[k]);
            if (keep > 0.0) {
                acc += keep;
                tab.cdf.push_back(acc);
                tab.value.push_back(v);
                tab.coin.push_back(0);
            }
            double coin = to_double(dec.joint_coin[k]);
            if (coin > 0.0) {
                acc += coin;
                tab.cdf.push_back(acc);
                tab.value.push_back(v);
                tab.coin.push_back(1);
            }
        }
        tab.cdf.back() = 1.0;  // guard against round-off at the top
        tables[j] = std::move(tab);
    }

    counter_rng rng(seed);
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi, coupled_sample_stats& into) {
        for (std::uint64_t t = lo; t < hi; ++t) {
            std::int64_t total = 0;
            std::int64_t coins = 0;
            for (std::size_t j = 0; j < tables.size(); ++j) {
                const component_table& tab = tables[j];
                double u = rng.uniform(t, 2 * j);
                std::size_t idx = static_cast<std::size_t>(
                    std::lower_bound(tab.cdf.begin(), tab.cdf.end(), u) - tab.cdf.begin());
                if (idx >= tab.cdf.size()) idx = tab.cdf.size() - 1;
                total += tab.value[idx];
                if (tab.coin[idx]) {
                    ++coins;
                    total += rng.bit(t, 2 * j + 1) ? tab.span : 0;
                }
            }
            ++into.sum_hist[total];
            ++into.coin_hist[coins];
        }
    };

    coupled_sample_stats stats;
    stats.trials = trials;
    if (trials == 0) return stats;
    if (workers <= 1) {
        run_range(0, trials, stats);
        return stats;
    }
    std::vector<coupled_sample_stats> partial(workers);
    std::vector<std::thread> pool;
    std::uint64_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t lo = std::min<std::uint64_t>(trials, w * chunk);
        std::uint64_t hi = std::min<std::uint64_t>(trials, lo + chunk);
        pool.emplace_back(run_range, lo, hi, std::ref(partial[w]));
    }
    for (auto& th : pool) th.join();
    for (const auto& p : partial) {
        for (const auto& [v, c] : p.sum_hist) stats.sum_hist[v] += c;
        for (const auto& [b, c] : p.coin_hist) stats.coin_hist[b] += c;
    }
    return stats;
}

}  // namespace lltkit
