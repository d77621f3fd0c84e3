/*
 * Copyright 2026 The corrupt3d Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CORRUPT3D_RNG_H_
#define CORRUPT3D_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "corrupt3d/geometry.h"

namespace corrupt3d {

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; every distribution below is written out
// explicitly so draws do not depend on the standard library vendor.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t UniformIndex(std::uint64_t n);
  // Standard normal, Box-Muller (one draw per call).
  double Normal();
  double Normal(double sigma) { return sigma * Normal(); }
  // +1 or -1 with equal probability.
  double Sign() { return (NextU64() >> 63) ? 1.0 : -1.0; }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform direction on the unit sphere.
  Vec3 UnitVector();

  // k distinct indices from [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t k);

  // Independent stream keyed by `index`, derived from this stream's seed
  // (not its position), e.g. one per annotated box.
  RngStream Substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Seed for one (corruption, severity, frame) work unit. The tuple is
// serialized as: master_seed (8 bytes LE), u32 LE length + corruption name,
// severity (1 byte), u32 LE length + frame id; hashed with FNV-1a 64 and
// finalized with Mix64.
std::uint64_t DeriveSeed(std::uint64_t master_seed,
                         std::string_view corruption_name, int severity,
                         std::string_view frame_id);

}  // namespace corrupt3d

#endif  // CORRUPT3D_RNG_H_
