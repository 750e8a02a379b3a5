// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#pragma once

#include <cstdint>
#include <random>

namespace dpfair {

// Mixes a base seed with a stream index (splitmix64 finalizer) so that grid
// points of a sweep get decorrelated, reproducible generators.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Seeded generator with a fixed bits-to-double mapping. The standard
// distribution adaptors are implementation-defined, so all sampling in this
// library goes through this class to keep "same seed, same run" true across
// standard libraries. One instance per top-level algorithm invocation; each
// consumer documents its draw order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on the open interval (0, 1). One engine draw.
  double uniform01();

  // Standard normal via Box-Muller. Exactly two engine draws per call (the
  // second variate is discarded so the draw count per call is fixed).
  double normal();

 private:
  std::mt19937_64 eng_;
};

}  // namespace dpfair
