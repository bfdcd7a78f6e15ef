// Copyright 2026 The qmux Authors
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

#pragma once

#include <cstdint>

namespace qmux {

/// SplitMix64 output function (Steele, Lea & Flood). Bijective on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream. Draw `slot` is a pure function of
/// (key, slot), so any random variable can be given a fixed address and
/// results do not depend on evaluation order or scheduling.
class CounterStream {
   public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    constexpr explicit CounterStream(std::uint64_t key) : key_(key) {}

    /// Stream for one trial of a batch: keyed by (seed, setting, trial).
    static constexpr CounterStream for_trial(std::uint64_t seed, std::uint64_t setting_index,
                                             std::uint64_t trial_index) {
        std::uint64_t k = mix64(seed + kGolden);
        k = mix64(k ^ (setting_index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
        k = mix64(k ^ (trial_index + kGolden));
        return CounterStream(k);
    }

    constexpr std::uint64_t key() const { return key_; }

    constexpr std::uint64_t bits(std::uint64_t slot) const {
        return mix64(key_ + (slot + 1) * kGolden);
    }

    /// Uniform in [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t slot) const {
        return static_cast<double>(bits(slot) >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a logarithm argument.
    constexpr double uniform_open0(std::uint64_t slot) const {
        return static_cast<double>((bits(slot) >> 11) + 1) * 0x1.0p-53;
    }

    /// Next stream in a sequential walk, used where a loop needs fresh keys.
    constexpr CounterStream child(std::uint64_t index) const {
        return CounterStream(mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
    }

   private:
    std::uint64_t key_;
};

}  // namespace qmux
