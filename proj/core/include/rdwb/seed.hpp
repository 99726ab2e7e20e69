#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rdwb {

// Child seed for a labelled stochastic subroutine. Every random draw in the
// library goes through a seed derived from the experiment's root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

// Deterministic generator whose floating-point draws do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t root, std::string_view label)
      : engine_(derive_seed(root, label)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rdwb
