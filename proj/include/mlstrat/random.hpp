#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace mlstrat {

// Tie-breaks and shuffles draw from std::mt19937_64, whose output sequence is
// fixed by the standard. Bounded draws use rejection sampling on the raw
// 64-bit output instead of std::uniform_int_distribution, whose algorithm is
// implementation-defined, so folds are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  /// Fisher-Yates shuffle (Durstenfeld variant, last element first).
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mlstrat
