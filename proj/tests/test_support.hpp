#pragma once

#include <cstdint>

namespace testutil {

// Small deterministic generator for property tests.
class Rng {
 public:
   explicit Rng(std::uint64_t seed) : state_(seed ? seed : 1) {}

   std::uint64_t next_u64() {
      std::uint64_t x = state_;
      x ^= x >> 12;
      x ^= x << 25;
      x ^= x >> 27;
      state_ = x;
      return x * 0x2545f4914f6cdd1dull;
   }

   double uniform(double lo, double hi) {
      const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
      return lo + (hi - lo) * u;
   }

   std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
      return lo + static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
   }

 private:
   std::uint64_t state_;
};

}  // namespace testutil
