// Copyright 2026 The onebit-ada Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace onebit {

/// What a random substream is used for. Part of the substream key.
enum class StreamTag : std::uint64_t {
  kChannel = 1,
  kPilotNoise = 2,
  kDataSymbols = 3,
  kDataNoise = 4,
  kPilotSequence = 5,
  kTest = 99,
};

/// Counter-keyed random substream. The engine state depends only on
/// (seed, tag, a, b), so streams for different trials or antennas can be
/// created in any order and on any thread.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0);

  double normal() { return normal_(engine_); }
  std::size_t uniform_index(std::size_t n);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// splitmix64 finalizer, exposed for tests.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace onebit
