#pragma once

#include <cstdint>
#include <random>

namespace tendon {

/// Deterministic random source. mt19937_64 has a portable bit stream; the
/// double conversion below is done by hand because std::uniform_real_distribution
/// is implementation-defined, which would break byte-identical traces across
/// standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace tendon
