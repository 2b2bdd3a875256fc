#pragma once

#include <cstdint>

namespace neuronland {

// Counter-based generator: every variate is a pure function of
// (seed, row, slot), so parallel generation is deterministic and
// order-independent. Mixing is the SplitMix64 finalizer applied to the
// three words in sequence.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t row, std::uint64_t slot) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (row + 0x632BE59BD9B4E019ULL));
  h = mix64(h ^ (slot + 0x9E3779B97F4A7C15ULL));
  return h;
}

// Uniform in the open interval (0, 1).
inline double u01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t row, std::uint64_t slot) {
  return u01(counter_bits(seed, row, slot));
}

// Inverse standard normal CDF (Wichura's PPND16, correct to ~1e-16).
double normal_icdf(double p);

double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace neuronland
