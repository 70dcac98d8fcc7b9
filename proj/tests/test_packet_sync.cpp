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

#include "radloc/packet_sync.hpp"
#include "radloc/random.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>

using namespace radloc;
using Catch::Approx;

namespace
{
    ReceiverRecord rec(const std::string &rx, std::uint64_t key, double t, double rss = -60.0)
    {
        return {rx, synthetic_hash(key), t, rss};
    }

    std::multiset<std::tuple<std::string, PacketHash, double, double>> as_set(const std::vector<ReceiverRecord> &v)
    {
        std::multiset<std::tuple<std::string, PacketHash, double, double>> s;
        for (const auto &r : v)
            s.insert({r.receiver_id, r.hash, r.timestamp, r.rss_dbm});
        return s;
    }

    /// Random streams with retransmissions, losses and clock jitter.
    std::vector<std::vector<ReceiverRecord>> random_streams(Rng &rng, size_t receivers, size_t packets)
    {
        std::vector<std::vector<ReceiverRecord>> streams(receivers);
        for (size_t i = 0; i < packets; ++i)
        {
            const double t = i * 0.01;
            const std::uint64_t key = rng.below(4) == 0 ? rng.below(packets) : i;
            for (size_t r = 0; r < receivers; ++r)
            {
                if (rng.uniform() < 0.1)
                    continue;
                streams[r].push_back(rec("rx" + std::to_string(r), key, t + rng.uniform(-0.004, 0.004),
                                         rng.uniform(-90, -40)));
                if (rng.uniform() < 0.05)
                    streams[r].push_back(rec("rx" + std::to_string(r), key, t + 0.006, -70));
            }
        }
        for (auto &s : streams)
            std::stable_sort(s.begin(), s.end(), [](const auto &a, const auto &b) { return a.timestamp < b.timestamp; });
        return streams;
    }
}

TEST_CASE("records within the window form one observation")
{
    const auto r = match_packets(std::vector<ReceiverRecord>{rec("A", 1, 1.000), rec("B", 1, 1.002), rec("C", 1, 1.004)},
                                 0.005);
    REQUIRE(r.observations.size() == 1);
    CHECK(r.observations[0].samples.size() == 3);
    CHECK(r.observations[0].timestamp == Approx(1.002));
    CHECK(r.ambiguous.empty());
}

TEST_CASE("a retransmission seen twice by one receiver is ambiguous")
{
    const auto r = match_packets(
        std::vector<ReceiverRecord>{rec("A", 1, 1.000), rec("A", 1, 1.003), rec("B", 1, 1.001)}, 0.005);
    REQUIRE(r.ambiguous.size() == 2);
    CHECK(r.ambiguous[0].receiver_id == "A");
    CHECK(r.ambiguous[1].receiver_id == "A");
    REQUIRE(r.observations.size() == 1);
    CHECK(r.observations[0].samples.count("A") == 0);
    CHECK(r.observations[0].samples.count("B") == 1);
}

TEST_CASE("records outside the window are separate observations")
{
    const auto r = match_packets(std::vector<ReceiverRecord>{rec("A", 1, 1.000), rec("B", 1, 1.020)}, 0.005);
    REQUIRE(r.observations.size() == 2);
    CHECK(r.observations[0].samples.size() == 1);
    CHECK(r.observations[1].samples.size() == 1);
    CHECK(r.observations[0].timestamp < r.observations[1].timestamp);
}

TEST_CASE("the window is anchored at the earliest record and inclusive")
{
    const auto r = match_packets(std::vector<ReceiverRecord>{rec("A", 1, 1.0), rec("B", 1, 1.01), rec("C", 1, 1.0101)},
                                 0.005);
    REQUIRE(r.observations.size() == 2);
    CHECK(r.observations[0].samples.size() == 2);
    CHECK(r.observations[0].timestamp == Approx(1.005));
}

TEST_CASE("different hashes never merge")
{
    const auto r = match_packets(std::vector<ReceiverRecord>{rec("A", 1, 1.0), rec("B", 2, 1.0)}, 0.005);
    CHECK(r.observations.size() == 2);
}

TEST_CASE("unsorted receiver streams are rejected")
{
    CHECK_THROWS_AS(match_packets(std::vector<ReceiverRecord>{rec("A", 1, 2.0), rec("A", 2, 1.0)}), UnsortedInput);
}

TEST_CASE("every record is conserved, output is time ordered and interleaving does not matter")
{
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto streams = random_streams(rng, 4, 300);
        const auto r = match_packets(streams, 0.005);

        size_t total = 0;
        for (const auto &s : streams)
            total += s.size();
        size_t accounted = r.ambiguous.size();
        for (const auto &o : r.observations)
        {
            REQUIRE(!o.samples.empty());
            accounted += o.samples.size();
        }
        REQUIRE(accounted == total);
        for (size_t i = 1; i < r.observations.size(); ++i)
            REQUIRE(r.observations[i - 1].timestamp <= r.observations[i].timestamp);

        // every observation sample and ambiguous record traces back to exactly one input record
        std::vector<ReceiverRecord> rebuilt = r.ambiguous;
        std::vector<ReceiverRecord> inputs;
        for (const auto &s : streams)
            inputs.insert(inputs.end(), s.begin(), s.end());
        for (const auto &o : r.observations)
            for (const auto &[id, rss] : o.samples)
            {
                auto it = std::find_if(inputs.begin(), inputs.end(), [&](const ReceiverRecord &x) {
                    return x.receiver_id == id && x.hash == o.key && x.rss_dbm == rss &&
                           std::abs(x.timestamp - o.timestamp) <= 0.01 + 1e-12;
                });
                REQUIRE(it != inputs.end());
            }

        // random interleaving that keeps each stream in order
        std::vector<ReceiverRecord> mixed;
        std::vector<size_t> pos(streams.size(), 0);
        while (true)
        {
            std::vector<size_t> open;
            for (size_t s = 0; s < streams.size(); ++s)
                if (pos[s] < streams[s].size())
                    open.push_back(s);
            if (open.empty())
                break;
            const size_t s = open[rng.below(open.size())];
            mixed.push_back(streams[s][pos[s]++]);
        }
        const auto m = match_packets(mixed, 0.005);
        REQUIRE(m.observations == r.observations);
        REQUIRE(as_set(m.ambiguous) == as_set(r.ambiguous));
    }
}

TEST_CASE("hashes round trip through hex")
{
    const auto h = synthetic_hash(123456789);
    CHECK(to_hex(h).size() == 64);
    CHECK(hash_from_hex(to_hex(h)) == h);
    CHECK(synthetic_hash(1) != synthetic_hash(2));
    CHECK_THROWS(hash_from_hex("abc"));
}

TEST_CASE("record files round trip")
{
    const std::vector<ReceiverRecord> v{rec("A", 1, 0.5, -61.25), rec("B", 9, 0.75, -70.5)};
    const auto dir = testing::scratch("records");
    write_records(dir / "r.csv", v);
    CHECK(read_records(dir / "r.csv") == v);
}
