// Counter-based deterministic generator: every draw is addressed by
// (seed, stream, index), so any partition of the work across threads
// reproduces the same numbers.
#pragma once

#include <cstdint>

namespace lltkit {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

class counter_rng {
  public:
    explicit counter_rng(std::uint64_t seed) : key_(detail::mix64(seed ^ 0x5bf0f3c04f7e41c9ull)) {}

    std::uint64_t word(std::uint64_t stream, std::uint64_t index) const {
        return detail::mix64(detail::mix64(key_ ^ stream) + index);
    }

    // uniform draw in [0,1) with 53 random bits
    double uniform(std::uint64_t stream, std::uint64_t index) const {
        return static_cast<double>(word(stream, index) >> 11) * 0x1.0p-53;
    }

    bool bit(std::uint64_t stream, std::uint64_t index) const { return word(stream, index) & 1ull; }

  private:
    std::uint64_t key_;
};

}  // namespace lltkit
