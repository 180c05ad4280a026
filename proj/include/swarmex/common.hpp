/*
 * Copyright 2026 The swarmex Authors
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

#ifndef SWARMEX_COMMON_HPP
#define SWARMEX_COMMON_HPP

#include <compare>
#include <cstdint>
#include <cstring>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace swarmex {

// Every simulation and optimizer stream uses this engine so that runs replay
// bit-identically on one standard library.
using Rng = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SWARMEX_DEFINE_ERROR(Name)      \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

SWARMEX_DEFINE_ERROR(MalformedMap);
SWARMEX_DEFINE_ERROR(NumericError);
SWARMEX_DEFINE_ERROR(IndexError);
SWARMEX_DEFINE_ERROR(InvalidPose);
SWARMEX_DEFINE_ERROR(EnergyExhausted);
SWARMEX_DEFINE_ERROR(InvalidQuery);
SWARMEX_DEFINE_ERROR(InvalidCutPoint);
SWARMEX_DEFINE_ERROR(NoFeasibleTarget);
SWARMEX_DEFINE_ERROR(ConfigError);
SWARMEX_DEFINE_ERROR(IoError);

#undef SWARMEX_DEFINE_ERROR

// Grid cell index. `i` runs along x (east), `j` along y (north).
struct Cell {
  int i = 0;
  int j = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::string to_string(Cell c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + ")";
}

// Derives an independent engine from a base seed and a stream tag.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x5eedu};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// FNV-1a over the raw bytes of a double sequence.
inline std::uint64_t fnv1a(std::span<const double> values) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : values) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace swarmex

#endif  // SWARMEX_COMMON_HPP
