#ifndef DYNSPARSIFY_RNG_HPP
#define DYNSPARSIFY_RNG_HPP

#include <cstdint>
#include <random>

namespace dynsparsify {

// mt19937_64 with hand-rolled draws. The engine's output sequence is pinned
// by the standard; std distributions are not, so we avoid them.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t next() { return eng(); }

  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound) - 1;
    std::uint64_t x;
    do {
      x = eng();
    } while (x > limit);
    return x % bound;
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return double(eng() >> 11) * 0x1p-53; }

  double range(double a, double b) { return a + (b - a) * unit(); }

  bool chance(double p) { return unit() < p; }
};

}  // namespace dynsparsify

#endif
