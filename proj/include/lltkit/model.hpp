// Ordered collection of independent component laws on a shared lattice,
// with cached aggregates: mean and variance of the sum and the accumulated
// Bernoulli mass nu = sum of per-component extractable masses.
#pragma once

#include <string>
#include <vector>

#include "lltkit/pmf.hpp"

namespace lltkit {

template <class R>
struct model_moments {
    R mean{};      // E S_n
    R variance{};  // Var S_n
    R nu{};        // sum of component Bernoulli masses
};

template <class R>
struct sum_model {
    std::vector<lattice_pmf<R>> components;
    model_moments<R> cached;

    std::size_t size() const { return components.size(); }
    double mean() const { return to_double(cached.mean); }
    double variance() const { return to_double(cached.variance); }
    double stddev() const { return std::sqrt(variance()); }
    double nu() const { return to_double(cached.nu); }

    bool reduced() const {
        for (const auto& c : components)
            if (c.v0 != R{} || c.step != R(1)) return false;
        return true;
    }
};

// Exact recomputation of the aggregates from the components.
template <class R>
model_moments<R> moments(const sum_model<R>& model) {
    model_moments<R> m;
    for (const auto& c : model.components) {
        m.mean += pmf_mean(c);
        m.variance += pmf_variance(c);
        m.nu += bernoulli_part_mass(c);
    }
    return m;
}

template <class R>
sum_model<R> make_model(std::vector<lattice_pmf<R>> components) {
    if (components.empty()) throw std::invalid_argument("make_model: no components");
    const R& v0 = components.front().v0;
    const R& step = components.front().step;
    for (const auto& c : components) {
        c.validate();
        if (c.v0 != v0 || c.step != step)
            throw std::invalid_argument("make_model: components must share one lattice");
    }
    sum_model<R> m;
    m.components = std::move(components);
    m.cached = moments(m);
    return m;
}

template <class R>
sum_model<R> make_iid_model(const lattice_pmf<R>& pmf, std::size_t n) {
    return make_model(std::vector<lattice_pmf<R>>(n, pmf));
}

}  // namespace lltkit
