// Copyright 2026 The bellherald Authors
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

#include <array>
#include <cstdint>

namespace bellherald {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Maps a 128-bit counter and 64-bit key to 128 random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

// Independent random stream identified by (master seed, stream index).
// The master seed is the Philox key; the stream index fills the upper half
// of the counter, a block counter the lower half, so streams never overlap.
class StreamRng {
   public:
    StreamRng(std::uint64_t master_seed, std::uint64_t stream);

    std::uint32_t next_u32();
    double uniform();  // [0, 1), 53-bit resolution
    double normal();   // standard normal, Box-Muller

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

   private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace bellherald
