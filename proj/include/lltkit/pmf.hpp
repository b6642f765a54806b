// Probability mass functions on arithmetic progressions v0 + step*k.
//
// A pmf stores a contiguous block of weights indexed by consecutive lattice
// points; `origin` is the lattice index of the first stored weight, so the
// support value of weights[i] is v0 + step*(origin + i). Interior zeros are
// allowed, leading/trailing zeros are not. Weights are either exact
// rationals (sum exactly 1, tail_mass_bound 0) or doubles (sum + tail within
// 1e-12 of 1; tail_mass_bound accounts for truncated or clamped mass).
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lltkit/numeric.hpp"

namespace lltkit {

inline constexpr double kMassTol = 1e-12;
inline constexpr double kTruncationTail = 1e-15;

template <class R>
struct lattice_pmf {
    std::int64_t origin = 0;
    std::vector<R> weights;
    R v0{};
    R step{};
    R tail_mass_bound{};

    std::size_t size() const { return weights.size(); }

    // Support value of the i-th stored weight.
    R value(std::size_t i) const {
        return v0 + step * R(static_cast<long>(origin + static_cast<std::int64_t>(i)));
    }

    R mass() const {
        R s{};
        for (const R& w : weights) s += w;
        return s;
    }

    bool degenerate() const { return weights.size() == 1; }

    void validate() const {
        if (weights.empty()) throw std::invalid_argument("lattice_pmf: empty support");
        if (!(to_double(step) > 0.0)) throw std::invalid_argument("lattice_pmf: step must be positive");
        for (const R& w : weights)
            if (w < R{}) throw std::invalid_argument("lattice_pmf: negative weight");
        if (!(weights.front() > R{}) || !(weights.back() > R{}))
            throw std::invalid_argument("lattice_pmf: support edges must carry mass");
        if (tail_mass_bound < R{})
            throw std::invalid_argument("lattice_pmf: negative tail_mass_bound");
        if constexpr (is_exact_mode<R>) {
            if (tail_mass_bound != R{})
                throw std::invalid_argument("lattice_pmf: exact mode cannot carry truncated mass");
            if (mass() != R(1))
                throw std::invalid_argument("lattice_pmf: exact weights must sum to 1");
        } else {
            double total = to_double(mass()) + to_double(tail_mass_bound);
            if (std::abs(total - 1.0) > kMassTol)
                throw std::invalid_argument("lattice_pmf: weights + tail must sum to 1");
        }
    }
};

template <class R>
lattice_pmf<R> make_pmf(std::int64_t origin, std::vector<R> weights, R v0 = R{}, R step = R(1)) {
    lattice_pmf<R> p;
    p.origin = origin;
    p.weights = std::move(weights);
    p.v0 = v0;
    p.step = step;
    p.validate();
    return p;
}

template <class R>
lattice_pmf<R> make_point(std::int64_t at) {
    return make_pmf<R>(at, {R(1)});
}

template <class R>
lattice_pmf<R> make_bernoulli(R p) {
    if (!(p > R{}) || !(p < R(1))) throw std::invalid_argument("make_bernoulli: p must be in (0,1)");
    return make_pmf<R>(0, {R(1) - p, p});
}

template <class R>
lattice_pmf<R> make_uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("make_uniform: empty range");
    std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    return make_pmf<R>(lo, std::vector<R>(n, ratio_of<R>(1, static_cast<long>(n))));
}

// Geometric law P{X=k} = p(1-p)^k truncated once the remaining tail drops
// below kTruncationTail; the cut mass is recorded, so this constructor is
// float-mode only (an exact pmf cannot carry a truncation deficit).
inline lattice_pmf<double> make_geometric_truncated(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("make_geometric_truncated: p in (0,1)");
    std::vector<double> w;
    double tail = 1.0;  // P{X > k-1}
    while (tail >= kTruncationTail) {
        w.push_back(p * tail);
        tail *= (1.0 - p);
    }
    lattice_pmf<double> out;
    out.origin = 0;
    out.weights = std::move(w);
    out.v0 = 0.0;
    out.step = 1.0;
    out.tail_mass_bound = tail;
    out.validate();
    return out;
}

struct span_result {
    double v0 = 0.0;        // smallest support value
    double step = 1.0;      // maximal span
    std::int64_t index_gcd = 1;  // gcd of support index differences (1 for a point mass)
    bool degenerate = false;     // single support point: span undefined, input step kept
};

// Maximal-span representation: the gcd of pairwise support differences,
// scaled by the incoming step. A point mass keeps its step and is flagged.
template <class R>
span_result detect_span(const lattice_pmf<R>& pmf) {
    span_result r;
    std::vector<std::int64_t> support;
    for (std::size_t i = 0; i < pmf.size(); ++i)
        if (pmf.weights[i] > R{}) support.push_back(static_cast<std::int64_t>(i));
    if (support.empty()) throw std::invalid_argument("detect_span: no support");
    r.v0 = to_double(pmf.v0) + to_double(pmf.step) * static_cast<double>(pmf.origin + support.front());
    if (support.size() == 1) {
        r.degenerate = true;
        r.step = to_double(pmf.step);
        return r;
    }
    std::int64_t g = 0;
    for (std::size_t i = 1; i < support.size(); ++i)
        g = std::gcd(g, support[i] - support.front());
    r.index_gcd = g;
    r.step = to_double(pmf.step) * static_cast<double>(g);
    return r;
}

// (X - v0)/D for the maximal span D: origin 0, step 1, weights collected at
// the detected stride. A point mass maps to a unit mass at 0.
template <class R>
lattice_pmf<R> reduce_lattice(const lattice_pmf<R>& pmf) {
    span_result s = detect_span(pmf);
    lattice_pmf<R> out;
    out.origin = 0;
    out.v0 = R{};
    out.step = R(1);
    out.tail_mass_bound = pmf.tail_mass_bound;
    std::size_t g = s.degenerate ? 1 : static_cast<std::size_t>(s.index_gcd);
    for (std::size_t i = 0; i < pmf.size(); i += g) out.weights.push_back(pmf.weights[i]);
    out.validate();
    return out;
}

// Sum over consecutive lattice points of min(f(k), f(k+1)), taken on the
// maximal-span relabeling, so the result is invariant under affine
// relabelings of the support. This is the extractable Bernoulli mass of the
// law; 0 exactly for a point mass.
template <class R>
R bernoulli_part_mass(const lattice_pmf<R>& pmf) {
    if (pmf.degenerate()) return R{};
    const lattice_pmf<R>* p = &pmf;
    lattice_pmf<R> reduced;
    if (detect_span(pmf).index_gcd != 1) {
        reduced = reduce_lattice(pmf);
        p = &reduced;
    }
    R total{};
    for (std::size_t i = 0; i + 1 < p->size(); ++i)
        total += std::min(p->weights[i], p->weights[i + 1]);
    return total;
}

template <class R>
R pmf_mean(const lattice_pmf<R>& pmf) {
    R m{};
    for (std::size_t i = 0; i < pmf.size(); ++i) m += pmf.weights[i] * pmf.value(i);
    return m;
}

template <class R>
R pmf_variance(const lattice_pmf<R>& pmf) {
    R m = pmf_mean(pmf);
    R v{};
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        R d = pmf.value(i) - m;
        v += pmf.weights[i] * d * d;
    }
    return v;
}

// Distribution equality modulo representation: compares maximal-span
// reduced forms and the actual support values.
template <class R>
bool same_distribution(const lattice_pmf<R>& a, const lattice_pmf<R>& b) {
    span_result sa = detect_span(a), sb = detect_span(b);
    if (sa.degenerate != sb.degenerate) return false;
    if (sa.v0 != sb.v0 || sa.step != sb.step) return false;
    lattice_pmf<R> ra = reduce_lattice(a), rb = reduce_lattice(b);
    return ra.weights == rb.weights;
}

}  // namespace lltkit
