#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "bhsi/hilbert.hpp"

namespace bhsi {

std::uint64_t splitmix64(std::uint64_t x);

// Seeded generator with a stable stream: mt19937_64 output only, uniforms
// from the top 53 bits and our own Box-Muller, so no distribution code from
// the standard library (whose algorithms are unspecified) is involved.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64/splitmix-v1";

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  // Independent sub-generator for (trial, stream), derived only from the
  // arguments so trials can run in any order or thread.
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Haar-style random states and unitaries for property checks and scenarios.
StateVector random_state(const SpaceDescription& space, Rng& rng);
Matrix random_unitary(std::size_t n, Rng& rng);
Matrix random_hermitian(std::size_t n, Rng& rng);

}  // namespace bhsi
