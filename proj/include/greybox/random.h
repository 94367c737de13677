//
// Copyright 2026 The Greybox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef GREYBOX_RANDOM_H_
#define GREYBOX_RANDOM_H_

#include <cstdint>
#include <random>

namespace greybox {

// The engine's output sequence is fixed by the standard; the standard
// distributions are not, so bounded draws are done here to keep results
// identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound). bound must be positive.
inline std::uint64_t UniformBelow(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return x % bound;
}

// Uniform double in [0, 1).
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace greybox

#endif  // GREYBOX_RANDOM_H_
