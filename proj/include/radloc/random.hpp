// SPDX-License-Identifier: Apache-2.0
//
// radloc - orientation-aware RSS localisation using device radiation patterns
// Copyright (C) 2026 The radloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RADLOC_RANDOM_HPP
#define RADLOC_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace radloc
{
    /// SplitMix64 finaliser; used to derive independent stream seeds.
    inline std::uint64_t mix_seed(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t s = mix_seed(base);
        for (auto p : path)
            s = mix_seed(s ^ mix_seed(p + 0x632be59bd9b4e019ULL));
        return s;
    }

    /// Seeded generator with platform-independent uniform and normal draws
    /// (the standard distributions are implementation-defined).
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

        std::uint64_t next() { return engine_(); }

        /// Uniform in [0, 1).
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        /// Uniform integer in [0, n).
        std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

        /// Standard normal via the Marsaglia polar method.
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u, v, s;
            do
            {
                u = 2.0 * uniform() - 1.0;
                v = 2.0 * uniform() - 1.0;
                s = u * u + v * v;
            } while (s >= 1.0 || s == 0.0);
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            spare_ = v * f;
            has_spare_ = true;
            return u * f;
        }

        double normal(double mean, double sigma) { return mean + sigma * normal(); }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}

#endif
