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

#include "corrupt3d/rng.h"

#include <cmath>
#include <numeric>

#include "corrupt3d/errors.h"

namespace corrupt3d {

double RngStream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::UniformIndex(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("UniformIndex requires n > 0");
  // Rejection on the largest multiple of n keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % n;
}

double RngStream::Normal() {
  double u1;
  do {
    u1 = Uniform();
  } while (u1 <= 0.0);
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Vec3 RngStream::UnitVector() {
  const double z = Uniform(-1.0, 1.0);
  const double phi = Uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

std::vector<std::size_t> RngStream::SampleWithoutReplacement(std::size_t n,
                                                             std::size_t k) {
  if (k > n) throw InvalidArgument("cannot sample more items than available");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(UniformIndex(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

RngStream RngStream::Substream(std::uint64_t index) const {
  return RngStream(Mix64(seed_ ^ Mix64(index + 0x632be59bd9b4e019ULL)));
}

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

class Fnv1a {
 public:
  void Byte(std::uint8_t b) {
    hash_ ^= b;
    hash_ *= 0x100000001b3ULL;
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) Byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void String(std::string_view s) {
    const auto len = static_cast<std::uint32_t>(s.size());
    for (int i = 0; i < 4; ++i) Byte(static_cast<std::uint8_t>(len >> (8 * i)));
    for (char c : s) Byte(static_cast<std::uint8_t>(c));
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t master_seed,
                         std::string_view corruption_name, int severity,
                         std::string_view frame_id) {
  Fnv1a h;
  h.U64(master_seed);
  h.String(corruption_name);
  h.Byte(static_cast<std::uint8_t>(severity));
  h.String(frame_id);
  return Mix64(h.value());
}

}  // namespace corrupt3d
