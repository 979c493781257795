// Copyright 2026 The crisp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRISP_RAS_RNG_HPP_
#define CRISP_RAS_RNG_HPP_

#include <cstdint>
#include <random>

namespace crisp::ras {

// Seeded random source with the sampling algorithms spelled out, because
// std::uniform_real_distribution and std::normal_distribution are free to
// differ between standard libraries and refinement runs must replay exactly.
class PinnedRng {
 public:
  explicit PinnedRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1): the top 53 bits of one engine draw.
  double uniform01();

  // Uniform in (0, b], b > 0. Flipping [0, 1) to (0, 1] keeps zero out.
  double uniform_open0(double b);

  // Standard normal via the Marsaglia polar method; pairs are generated
  // together and the spare is served before touching the engine again.
  double normal();

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace crisp::ras

#endif  // CRISP_RAS_RNG_HPP_
