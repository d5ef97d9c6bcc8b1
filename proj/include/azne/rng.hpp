// Copyright 2026 The Adaptive ZNE Authors
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

#ifndef AZNE_RNG_HPP
#define AZNE_RNG_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <utility>

namespace azne {

/// Purposes of the independent random streams used by the experiment.
/// Every stream is keyed by (seed, purpose, indices...) so that the value of any
/// draw depends only on its coordinates and never on evaluation order.
enum class Stream : std::uint64_t {
    epoch = 1,
    epsilon0_shots = 2,
    fold = 3,
    twirl = 4,
    shots = 5,
    epsilon_shots = 6,
    mixture = 7,
    user = 8,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Hashes a seed and a list of integer coordinates into a stream key.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t key = splitmix64(seed ^ 0x6A09E667F3BCC909ULL);
    for (std::uint64_t t : tags) {
        key = splitmix64(key ^ splitmix64(t + 0x3C6EF372FE94F82BULL));
    }
    return key;
}

/// Counter-based generator: the n-th output is splitmix64(key + n * golden).
/// Satisfies UniformRandomBitGenerator. All distributions used by the library are
/// implemented here so results are identical across standard libraries.
class CounterRng {
   public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
    CounterRng(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> indices) noexcept
        : key_(seed) {
        std::uint64_t k = derive_key(seed, {static_cast<std::uint64_t>(stream)});
        for (std::uint64_t i : indices) {
            k = derive_key(k, {i});
        }
        key_ = k;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        ++counter_;
        return splitmix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_open_below() noexcept { return 1.0 - uniform(); }

    /// Standard normal via Box-Muller (one output per call).
    double normal() noexcept {
        double u1 = uniform_open_below();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Uniform integer in [0, n) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t n) noexcept {
        if (n <= 1) {
            return 0;
        }
        std::uint64_t limit = max() - max() % n;
        std::uint64_t r;
        do {
            r = (*this)();
        } while (r >= limit);
        return r % n;
    }

    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t key() const noexcept { return key_; }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace azne

#endif
