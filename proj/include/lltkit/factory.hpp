// Named distribution builtins and the canonical factory families used by
// the verification suites.
#pragma once

#include <string>
#include <vector>

#include "lltkit/model.hpp"
#include "lltkit/pmf.hpp"

namespace lltkit {

template <class R>
struct named_pmf {
    std::string name;
    lattice_pmf<R> pmf;
};

// Canonical test families. All carry positive Bernoulli mass; the
// truncated geometric exists only in float mode.
template <class R>
std::vector<named_pmf<R>> factory_pmfs() {
    auto rr = [](long a, long b = 1) { return ratio_of<R>(a, b); };
    std::vector<named_pmf<R>> out;
    out.push_back({"bernoulli(1/2)", make_bernoulli(rr(1, 2))});
    out.push_back({"bernoulli(1/4)", make_bernoulli(rr(1, 4))});
    out.push_back({"bernoulli(9/10)", make_bernoulli(rr(9, 10))});
    out.push_back({"uniform{0..2}", make_uniform<R>(0, 2)});
    out.push_back({"uniform{0..3}", make_uniform<R>(0, 3)});
    out.push_back({"uniform{0..5}", make_uniform<R>(0, 5)});
    out.push_back({"skewed3", make_pmf<R>(0, {rr(1, 2), rr(3, 10), rr(1, 5)})});
    out.push_back({"tent3", make_pmf<R>(0, {rr(1, 4), rr(1, 2), rr(1, 4)})});
    out.push_back({"near-degenerate", make_pmf<R>(0, {rr(99, 100), rr(1, 100)})});
    out.push_back({"two-point-3-5", make_pmf<R>(3, {rr(1, 2), rr(0), rr(1, 2)})});
    out.push_back({"gapped-0-1-3", make_pmf<R>(0, {rr(1, 3), rr(1, 3), rr(0), rr(1, 3)})});
    out.push_back({"shifted-uniform{-2..0}", make_pmf<R>(-2, {rr(1, 5), rr(2, 5), rr(2, 5)})});
    if constexpr (!is_exact_mode<R>) out.push_back({"geometric(1/3)", make_geometric_truncated(1.0 / 3.0)});
    return out;
}

// Base components extended cyclically to an n-component model.
template <class R>
sum_model<R> cyclic_model(const std::vector<lattice_pmf<R>>& base, std::size_t n) {
    if (base.empty()) throw std::invalid_argument("cyclic_model: empty base");
    std::vector<lattice_pmf<R>> comps;
    comps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) comps.push_back(base[i % base.size()]);
    return make_model(std::move(comps));
}

}  // namespace lltkit
