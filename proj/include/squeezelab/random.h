// Copyright 2026 The squeezelab Authors
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

#ifndef SQUEEZELAB_RANDOM_H_
#define SQUEEZELAB_RANDOM_H_

#include <cstdint>
#include <random>

namespace squeezelab {

/// Independent generator for (seed, stream). Streams with different indices
/// are decorrelated through std::seed_seq; results are reproducible for a
/// given standard library.
std::mt19937_64 MakeRandomStream(std::uint64_t seed, std::uint64_t stream);

}  // namespace squeezelab

#endif  // SQUEEZELAB_RANDOM_H_
