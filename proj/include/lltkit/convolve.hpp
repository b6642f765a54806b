// Exact distribution engine for sums of independent lattice variables:
// convolution, residue-class probabilities mod h (computed by two routes
// that cross-check each other), divisor probabilities, and characteristic
// function products.
#pragma once

#include <complex>
#include <cstdlib>
#include <span>

#include "lltkit/fft.hpp"
#include "lltkit/model.hpp"
#include "lltkit/pmf.hpp"

namespace lltkit {

// Output widths below this are convolved by direct summation; beyond it the
// float path switches to FFT.
inline constexpr std::size_t kFftCrossover = 4096;
// FFT round-off may leave slightly negative entries; anything at or above
// -1e-14 is clamped to zero and the clamped magnitude is added to
// tail_mass_bound. Below that the convolution aborts.
inline constexpr double kClampTol = 1e-14;

namespace detail {

template <class R>
std::vector<R> convolve_direct(const std::vector<R>& a, const std::vector<R>& b) {
    std::vector<R> out(a.size() + b.size() - 1, R{});
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == R{}) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

}  // namespace detail

template <class R>
lattice_pmf<R> convolve(const lattice_pmf<R>& a, const lattice_pmf<R>& b) {
    if (a.step != b.step) throw std::invalid_argument("convolve: lattice step mismatch");
    lattice_pmf<R> out;
    out.origin = a.origin + b.origin;
    out.v0 = a.v0 + b.v0;
    out.step = a.step;
    out.tail_mass_bound = a.tail_mass_bound + b.tail_mass_bound;

    std::size_t out_len = a.size() + b.size() - 1;
    if (is_exact_mode<R> || out_len < kFftCrossover) {
        out.weights = detail::convolve_direct(a.weights, b.weights);
    } else if constexpr (!is_exact_mode<R>) {
        out.weights = detail::fft_convolve(a.weights, b.weights);
        double clamped = 0.0;
        for (double& w : out.weights) {
            if (w < 0.0) {
                if (w < -kClampTol) throw std::runtime_error("convolve: FFT produced weight below clamp tolerance");
                clamped += -w;
                w = 0.0;
            }
        }
        out.tail_mass_bound += clamped;
    }
    if constexpr (!is_exact_mode<R>) {
        // edge weights can underflow to an exact zero (true mass below the
        // subnormal range, far under any certified tolerance): trim them
        while (!out.weights.empty() && out.weights.back() == 0.0) out.weights.pop_back();
        while (!out.weights.empty() && out.weights.front() == 0.0) {
            out.weights.erase(out.weights.begin());
            ++out.origin;
        }
        if (out.weights.empty()) throw std::runtime_error("convolve: all mass underflowed");
    }
    out.validate();
    return out;
}

namespace detail {

template <class R>
lattice_pmf<R> fold_range(std::span<const lattice_pmf<R>> parts) {
    if (parts.size() == 1) return parts.front();
    std::size_t half = parts.size() / 2;
    return convolve(fold_range(parts.subspan(0, half)), fold_range(parts.subspan(half)));
}

// Exact left fold over a shared big-integer denominator. Scaling every
// component to integer numerators keeps the inner loop at mpz_addmul with
// no gcd work; weights are canonicalized once at the end.
inline lattice_pmf<rational> fold_exact_scaled(const std::vector<lattice_pmf<rational>>& comps) {
    std::vector<mpz_class> acc{1};
    mpz_class acc_den = 1;
    std::int64_t origin = 0;
    rational v0{};
    for (const auto& c : comps) {
        if (c.step != comps.front().step)
            throw std::invalid_argument("sum_distribution: lattice step mismatch");
        mpz_class cden = 1;
        for (const auto& w : c.weights) mpz_lcm(cden.get_mpz_t(), cden.get_mpz_t(), w.get_den().get_mpz_t());
        std::vector<mpz_class> cnum(c.size());
        for (std::size_t j = 0; j < c.size(); ++j)
            cnum[j] = c.weights[j].get_num() * (cden / c.weights[j].get_den());
        std::vector<mpz_class> next(acc.size() + cnum.size() - 1);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            if (acc[i] == 0) continue;
            for (std::size_t j = 0; j < cnum.size(); ++j) {
                if (cnum[j] == 0) continue;
                mpz_addmul(next[i + j].get_mpz_t(), acc[i].get_mpz_t(), cnum[j].get_mpz_t());
            }
        }
        acc = std::move(next);
        acc_den *= cden;
        origin += c.origin;
        v0 += c.v0;
    }
    lattice_pmf<rational> out;
    out.origin = origin;
    out.v0 = v0;
    out.step = comps.front().step;
    out.weights.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        rational w(acc[k], acc_den);
        w.canonicalize();
        out.weights[k] = w;
    }
    out.validate();
    return out;
}

}  // namespace detail

// Law of the full sum. Exact mode folds left over a shared big-integer
// denominator; float mode folds left up to 64 components and switches to a
// balanced pairwise tree beyond that to keep round-off small. The result
// is independent of the grouping.
template <class R>
lattice_pmf<R> sum_distribution(const sum_model<R>& model) {
    if (model.components.empty()) throw std::invalid_argument("sum_distribution: empty model");
    if constexpr (is_exact_mode<R>) {
        if (model.size() > 8) return detail::fold_exact_scaled(model.components);
    } else {
        if (model.size() > 64) return detail::fold_range(std::span<const lattice_pmf<R>>(model.components));
    }
    lattice_pmf<R> acc = model.components.front();
    for (std::size_t i = 1; i < model.size(); ++i) acc = convolve(acc, model.components[i]);
    return acc;
}

// E exp(i t X) for a single component, values taken on its lattice.
template <class R>
std::complex<double> char_function(const lattice_pmf<R>& pmf, double t) {
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        double w = to_double(pmf.weights[i]);
        if (w == 0.0) continue;
        double x = to_double(pmf.value(i));
        sum += w * std::polar(1.0, t * x);
    }
    return sum;
}

// Product of component characteristic functions at t, i.e. E exp(i t S_n).
template <class R>
std::complex<double> char_product(const sum_model<R>& model, double t) {
    std::complex<double> prod{1.0, 0.0};
    for (const auto& c : model.components) prod *= char_function(c, t);
    return prod;
}

namespace detail {

// exp(2 pi i num/den), exact on the real/imaginary axes
inline std::complex<double> unit_root(std::int64_t num, std::int64_t den) {
    std::int64_t m = ((num % den) + den) % den;
    double x = 2.0 * static_cast<double>(m) / static_cast<double>(den);
    return {cospi(x), sinpi(x)};
}

// E exp(2 pi i r X / h) for an integer-valued component.
template <class R>
std::complex<double> residue_char_factor(const lattice_pmf<R>& pmf, int h, int r) {
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        double w = to_double(pmf.weights[i]);
        if (w == 0.0) continue;
        std::int64_t k = pmf.origin + static_cast<std::int64_t>(i);
        sum += w * unit_root(static_cast<std::int64_t>(r) * k, h);
    }
    return sum;
}

// Residue masses of a single law: fold stored weights by index mod h.
template <class R>
std::vector<R> residue_fold(const lattice_pmf<R>& law, int h) {
    std::vector<R> out(static_cast<std::size_t>(h), R{});
    for (std::size_t i = 0; i < law.size(); ++i) {
        std::int64_t k = law.origin + static_cast<std::int64_t>(i);
        std::int64_t m = ((k % h) + h) % h;
        out[static_cast<std::size_t>(m)] += law.weights[i];
    }
    return out;
}

// Residue masses via the inverse DFT of characteristic-function products at
// the h-th roots of unity (double arithmetic).
template <class R>
std::vector<double> residue_dft(const sum_model<R>& model, int h) {
    std::vector<std::complex<double>> prods(static_cast<std::size_t>(h), std::complex<double>{1.0, 0.0});
    for (int r = 0; r < h; ++r)
        for (const auto& c : model.components) prods[static_cast<std::size_t>(r)] *= residue_char_factor(c, h, r);
    std::vector<double> out(static_cast<std::size_t>(h));
    for (int m = 0; m < h; ++m) {
        std::complex<double> s{0.0, 0.0};
        for (int r = 0; r < h; ++r)
            s += prods[static_cast<std::size_t>(r)] * unit_root(-static_cast<std::int64_t>(r) * m, h);
        out[static_cast<std::size_t>(m)] = s.real() / static_cast<double>(h);
    }
    return out;
}

// Exact inverse DFT for h in {1,2,4}, where the roots of unity are 1, -1,
// +-i and everything stays inside Gaussian rationals.
inline std::vector<rational> residue_dft_exact(const sum_model<rational>& model, int h) {
    struct gaussian {
        rational re, im;
        gaussian operator*(const gaussian& o) const {
            return {re * o.re - im * o.im, re * o.im + im * o.re};
        }
    };
    // characteristic products at the four quarter-turn frequencies
    auto root_pow = [&](int e) -> gaussian {  // i^e
        switch (((e % 4) + 4) % 4) {
            case 0: return {rational(1), rational(0)};
            case 1: return {rational(0), rational(1)};
            case 2: return {rational(-1), rational(0)};
            default: return {rational(0), rational(-1)};
        }
    };
    int quarter = 4 / h;  // h divides 4
    std::vector<gaussian> prods(static_cast<std::size_t>(h), gaussian{rational(1), rational(0)});
    for (int r = 0; r < h; ++r) {
        for (const auto& c : model.components) {
            gaussian f{rational(0), rational(0)};
            for (std::size_t i = 0; i < c.size(); ++i) {
                std::int64_t k = c.origin + static_cast<std::int64_t>(i);
                gaussian w = root_pow(static_cast<int>((k % 4 + 4) % 4) * r * quarter);
                f.re += c.weights[i] * w.re;
                f.im += c.weights[i] * w.im;
            }
            prods[static_cast<std::size_t>(r)] = prods[static_cast<std::size_t>(r)] * f;
        }
    }
    std::vector<rational> out(static_cast<std::size_t>(h));
    for (int m = 0; m < h; ++m) {
        gaussian s{rational(0), rational(0)};
        for (int r = 0; r < h; ++r) {
            gaussian w = root_pow(-((m * r * quarter) % 4));
            gaussian term = prods[static_cast<std::size_t>(r)] * w;
            s.re += term.re;
            s.im += term.im;
        }
        if (s.im != rational(0)) throw std::logic_error("residue_dft_exact: nonreal mass");
        out[static_cast<std::size_t>(m)] = s.re / rational(h);
    }
    return out;
}

}  // namespace detail

inline constexpr double kResidueRouteTol = 1e-10;

// Residue masses of an already-computed integer-valued law (no cross-check;
// the model-level residue_probs below carries the dual-route contract).
template <class R>
std::vector<R> residue_masses(const lattice_pmf<R>& law, int h) {
    if (h < 1) throw std::invalid_argument("residue_masses: h must be >= 1");
    if (law.v0 != R{} || law.step != R(1))
        throw std::invalid_argument("residue_masses: law must be on the reduced lattice");
    return detail::residue_fold(law, h);
}

// P{d | S + u} read off a precomputed law of S.
template <class R>
R divisor_prob_of_law(const lattice_pmf<R>& law, int d, std::int64_t u) {
    if (d < 2) throw std::invalid_argument("divisor_prob_of_law: d must be >= 2");
    std::vector<R> res = residue_masses(law, d);
    std::int64_t m = ((-u) % d + d) % d;
    return res[static_cast<std::size_t>(m)];
}

// P{S_n ≡ m (mod h)} for m = 0..h-1, on a reduced lattice. The convolution
// fold is the authoritative route; the DFT route recomputes the vector
// independently and both must agree within 1e-10 (exactly in exact mode for
// h in {1,2,4}, where the roots of unity are Gaussian-rational).
template <class R>
std::vector<R> residue_probs(const sum_model<R>& model, int h) {
    if (h < 2) throw std::invalid_argument("residue_probs: h must be >= 2");
    if (!model.reduced()) throw std::invalid_argument("residue_probs: model must be on the reduced lattice");
    std::vector<R> fold = detail::residue_fold(sum_distribution(model), h);
    if constexpr (is_exact_mode<R>) {
        if (h == 2 || h == 4) {
            std::vector<rational> dft = detail::residue_dft_exact(model, h);
            if (dft != fold) throw std::runtime_error("residue_probs: exact routes disagree");
        } else {
            std::vector<double> dft = detail::residue_dft(model, h);
            for (int m = 0; m < h; ++m)
                if (std::abs(to_double(fold[static_cast<std::size_t>(m)]) - dft[static_cast<std::size_t>(m)]) >
                    kResidueRouteTol)
                    throw std::runtime_error("residue_probs: DFT cross-check failed");
        }
    } else {
        std::vector<double> dft = detail::residue_dft(model, h);
        for (int m = 0; m < h; ++m)
            if (std::abs(fold[static_cast<std::size_t>(m)] - dft[static_cast<std::size_t>(m)]) > kResidueRouteTol)
                throw std::runtime_error("residue_probs: DFT cross-check failed");
    }
    return fold;
}

// P{d | S_n + u} = P{S_n ≡ -u (mod d)}.
template <class R>
R divisor_prob(const sum_model<R>& model, int d, std::int64_t u) {
    if (d < 2) throw std::invalid_argument("divisor_prob: d must be >= 2");
    if (u < 0) throw std::invalid_argument("divisor_prob: u must be >= 0");
    std::vector<R> probs = residue_probs(model, d);
    std::int64_t m = ((-u) % d + d) % d;
    return probs[static_cast<std::size_t>(m)];
}

// Modulus of the partial product of per-component residue characteristic
// sums at frequency r/h; the n-th partial of the classical product
// criterion for asymptotic uniformity mod h. Nonincreasing in n.
template <class R>
double dw_product(std::span<const lattice_pmf<R>> components, int h, int r, std::size_t n) {
    if (r < 1 || r >= h) throw std::invalid_argument("dw_product: need 1 <= r <= h-1");
    if (n > components.size()) throw std::invalid_argument("dw_product: n exceeds component count");
    double modulus = 1.0;
    for (std::size_t k = 0; k < n; ++k) modulus *= std::abs(detail::residue_char_factor(components[k], h, r));
    return modulus;
}

}  // namespace lltkit
