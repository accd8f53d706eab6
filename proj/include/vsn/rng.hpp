#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vsn {

// Thin wrapper around mt19937_64 with hand-rolled distributions so that a
// given seed produces the same stream on every platform and standard
// library. std::uniform_*_distribution is implementation-defined and would
// break byte-identical scenario generation across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection sampling keeps the draw unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  int int_in(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Fisher-Yates over indices 0..n-1.
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(below(static_cast<std::uint64_t>(i + 1)));
      std::swap(p[i], p[j]);
    }
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vsn
