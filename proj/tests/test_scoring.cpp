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

#include "radloc/pattern_io.hpp"
#include "radloc/random.hpp"
#include "radloc/scoring.hpp"
#include "radloc/survey.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace radloc;
using Catch::Approx;

namespace
{
    struct Scene
    {
        Environment env;
        std::shared_ptr<const CandidateGrid> grid;
        PatternPtr device;
    };

    Scene small_scene(size_t receivers, double extent, bool on_grid, std::uint64_t seed)
    {
        Rng rng(seed);
        Scene s;
        s.env.extent_x = s.env.extent_y = extent;
        s.env.sensitivity_dbm = -75;
        const auto cardioid = make_pattern(read_pattern(testing::data("patterns/receiver_cardioid.csv")));
        for (size_t i = 0; i < receivers; ++i)
        {
            Receiver r;
            r.id = "rx" + std::to_string(i);
            double x = rng.uniform(0, extent), y = rng.uniform(0, extent);
            if (on_grid)
            {
                x = std::round(x * 10) / 10;
                y = std::round(y * 10) / 10;
            }
            r.pose = Pose(x, y, 0, rng.uniform(0, 360));
            r.pattern = cardioid;
            s.env.receivers.push_back(r);
        }
        s.device = make_pattern(read_pattern(testing::data("patterns/a50.csv")));
        const auto survey = generate_survey(s.env, RadiationPattern::isotropic(), {.spacing = 0.5});
        s.grid = std::make_shared<const CandidateGrid>(interpolate(survey, 0.1));
        return s;
    }

    PacketObservation observe(const Scene &s, const Pose &pose, double sigma, Rng &rng, double drop = 0.0)
    {
        PacketObservation o;
        for (const auto &rx : s.env.receivers)
        {
            if (rx.pose.position == pose.position || rng.uniform() < drop)
                continue;
            const double v = received_power(pose, *s.device, 15.0, rx, s.env.path_loss) + rng.normal(0, sigma);
            if (v >= s.env.sensitivity_dbm)
                o.samples[rx.id] = v;
        }
        return o;
    }

    void require_same_prefix(const std::vector<ScoredCandidate> &fast, const std::vector<ScoredCandidate> &ref,
                             size_t k)
    {
        REQUIRE(fast.size() == std::min(k, ref.size()));
        for (size_t i = 0; i < fast.size(); ++i)
        {
            REQUIRE(fast[i].position_index == ref[i].position_index);
            REQUIRE(fast[i].orientation_index == ref[i].orientation_index);
            REQUIRE(fast[i].mse == ref[i].mse);
        }
    }
}

TEST_CASE("expected RSS adds power and transmit directivity to the survey value")
{
    CHECK(expected_rss(-68, 15, -12.29) == Approx(-65.29));
    CHECK(expected_rss(-68, 0, 0) == -68);
    CHECK(expected_rss(-68, 15, 5.06) - expected_rss(-68, 15, -12.29) == Approx(17.35));
}

TEST_CASE("candidate MSE is the mean squared residual over shared receivers")
{
    auto grid = std::make_shared<CandidateGrid>(0.0, 0.0, 0.0, 1.0, 2, 1, std::vector<std::string>{"a", "b", "c"});
    grid->m(0, 0) = -65;
    grid->m(0, 1) = -75;
    grid->m(0, 2) = absent;
    grid->m(1, 0) = -70;
    grid->m(1, 1) = -70;
    grid->m(1, 2) = -70;
    std::vector<Receiver> rx(3);
    rx[0].id = "a";
    rx[0].pose = Pose(5, 5, 0, 0);
    rx[1].id = "b";
    rx[1].pose = Pose(-5, 5, 0, 0);
    rx[2].id = "c";
    rx[2].pose = Pose(0, -5, 0, 0);
    PacketObservation obs;
    obs.samples = {{"a", -52}, {"b", -57}, {"c", -40}};
    const auto space = CandidatePoseSpace::planar(grid, 90);
    const auto ranked = score_candidates(obs, space, rx, RadiationPattern::isotropic(), 15);
    REQUIRE(ranked.size() == 8);
    for (const auto &c : ranked)
        if (c.position_index == 0)
            CHECK(c.mse == Approx(6.5));
        else
            CHECK(c.mse == Approx((9.0 + 4.0 + 225.0) / 3.0));
    CHECK(ranked[0].position_index == 0);
    // ties broken by orientation index
    CHECK(ranked[0].orientation_index == 0);
    CHECK(ranked[1].orientation_index == 1);
}

TEST_CASE("the true pose scores zero in a noiseless scene")
{
    const auto s = small_scene(4, 5.0, false, 1);
    Rng rng(1);
    const Pose truth(s.grid->position(1234), Orientation{137, 0, 0});
    // exact model values at the truth, survey normalised the same way
    const auto survey = generate_survey(s.env, RadiationPattern::isotropic(), {.spacing = 0.1});
    const auto grid = std::make_shared<const CandidateGrid>(interpolate(survey, 0.1));
    const auto obs = observe({s.env, grid, s.device}, truth, 0.0, rng);
    const auto ranked = score_candidates(obs, CandidatePoseSpace::planar(grid, 1.0), s.env.receivers, *s.device, 15);
    CHECK(ranked[0].mse == Approx(0.0).margin(1e-18));
    bool found = false;
    for (const auto &c : ranked)
    {
        if (c.mse > 1e-18)
            break;
        found = found || (c.position_index == 1234 && c.orientation_index == 137);
    }
    CHECK(found);
}

TEST_CASE("expected RSS at the true pose reproduces the simulated RSS")
{
    const auto s = small_scene(4, 5.0, false, 2);
    const auto survey = generate_survey(s.env, *s.device, {.spacing = 0.1, .tx_power_dbm = 9});
    const auto grid = std::make_shared<const CandidateGrid>(interpolate(survey, 0.1));
    const ScoringEngine engine(CandidatePoseSpace::planar(grid, 1.0), s.env.receivers, s.device, 15.0);
    Rng rng(5);
    for (int i = 0; i < 50; ++i)
    {
        const size_t p = rng.below(grid->size()), o = rng.below(360);
        const auto e = engine.expected(p, o);
        const Pose pose(grid->position(p), Orientation{static_cast<double>(o), 0, 0});
        for (size_t r = 0; r < 4; ++r)
        {
            if (!is_present(e[r]))
                continue;
            REQUIRE(e[r] == Approx(received_power(pose, *s.device, 15.0, s.env.receivers[r], s.env.path_loss))
                                .margin(1e-9));
        }
    }
}

TEST_CASE("off-grid truth is found within one grid step")
{
    const auto s = small_scene(4, 5.0, false, 3);
    Rng rng(3);
    const Pose truth(2.03, 3.07, 0, 100.4);
    const auto obs = observe(s, truth, 0.0, rng);
    const auto space = CandidatePoseSpace::planar(s.grid, 1.0);
    const auto ranked = score_candidates(obs, space, s.env.receivers, *s.device, 15);
    const auto &best = ranked.front();
    CHECK(std::abs(best.pose.position.x - truth.position.x) <= 0.1 + 1e-9);
    CHECK(std::abs(best.pose.position.y - truth.position.y) <= 0.1 + 1e-9);
    CHECK(angular_difference(best.pose.orientation.azimuth, truth.orientation.azimuth) <= 1.0 + 1e-9);
}

TEST_CASE("the engine returns exactly the reference top k")
{
    for (std::uint64_t seed : {11u, 12u, 13u})
    {
        const auto s = small_scene(seed == 13 ? 6 : 4, seed == 12 ? 3.0 : 5.0, seed != 11, seed);
        const ScoringEngine engine(CandidatePoseSpace::planar(s.grid, 1.0), s.env.receivers, s.device, 15.0);
        REQUIRE(engine.uses_fast_path());
        const auto space = CandidatePoseSpace::planar(s.grid, 1.0);
        Rng rng(seed);
        for (int i = 0; i < 4; ++i)
        {
            const Pose truth(rng.uniform(0, s.env.extent_x), rng.uniform(0, s.env.extent_y), 0, rng.uniform(0, 360));
            const auto obs = observe(s, truth, i == 0 ? 0.0 : 2.0, rng, i == 3 ? 0.4 : 0.0);
            if (obs.samples.empty())
                continue;
            const auto ref = score_candidates(obs, space, s.env.receivers, *s.device, 15);
            for (size_t k : {1u, 7u, 100u, 1000u})
                require_same_prefix(engine.top_k(obs, k), ref, k);
        }
    }
}

TEST_CASE("spaces off the pattern lattice fall back to exhaustive scoring")
{
    const auto s = small_scene(4, 2.0, false, 21);
    CandidatePoseSpace space;
    space.grid = s.grid;
    space.azimuths = CandidatePoseSpace::evenly_spaced(7.5);
    space.pitches = {0, 30};
    space.rolls = {0, 350};
    space.validate();
    const ScoringEngine engine(space, s.env.receivers, s.device, 15.0);
    CHECK_FALSE(engine.uses_fast_path());
    Rng rng(4);
    const auto obs = observe(s, Pose(1.1, 0.7, 0, 40, 30, 0), 1.0, rng);
    const auto ref = score_candidates(obs, space, s.env.receivers, *s.device, 15);
    require_same_prefix(engine.top_k(obs, 50), ref, 50);
}

TEST_CASE("threshold enumeration matches a direct scan")
{
    const auto s = small_scene(4, 4.0, true, 31);
    const auto space = CandidatePoseSpace::planar(s.grid, 1.0);
    const ScoringEngine engine(space, s.env.receivers, s.device, 15.0);
    Rng rng(31);
    const auto obs = observe(s, Pose(1.7, 2.2, 0, 300), 1.0, rng);
    const auto actual = detail::channel_rss(*s.grid, obs);
    const auto ref = score_candidates(obs, space, s.env.receivers, *s.device, 15);
    const double threshold = ref[200].mse;

    std::set<std::pair<size_t, size_t>> plain, offset;
    engine.for_each_within(actual, threshold, false, [&](size_t p, size_t o, double v) {
        REQUIRE(v == engine.candidate_mse(actual, p, o));
        plain.insert({p, o});
    });
    std::set<std::pair<size_t, size_t>> expected_plain;
    for (const auto &c : ref)
        if (c.mse <= threshold)
            expected_plain.insert({c.position_index, c.orientation_index});
    CHECK(plain == expected_plain);

    // offset mode: residual variance after removing the mean
    size_t offset_hits = 0;
    engine.for_each_within(actual, threshold, true, [&](size_t p, size_t o, double v) {
        const auto e = engine.expected(p, o);
        double mean = 0;
        int n = 0;
        for (size_t r = 0; r < e.size(); ++r)
            if (is_present(e[r]) && is_present(actual[r]))
            {
                mean += e[r] - actual[r];
                ++n;
            }
        mean /= n;
        double var = 0;
        for (size_t r = 0; r < e.size(); ++r)
            if (is_present(e[r]) && is_present(actual[r]))
                var += (e[r] - actual[r] - mean) * (e[r] - actual[r] - mean);
        REQUIRE(v == Approx(var / n).margin(1e-9));
        offset.insert({p, o});
        ++offset_hits;
    });
    // removing the best offset never increases the error
    for (const auto &po : plain)
        CHECK(offset.count(po) == 1);
    CHECK(offset_hits >= plain.size());
}

TEST_CASE("observations with no usable receiver are rejected")
{
    const auto s = small_scene(4, 2.0, false, 41);
    const ScoringEngine engine(CandidatePoseSpace::planar(s.grid, 1.0), s.env.receivers, s.device, 15.0);
    CHECK_THROWS_AS(engine.top_k(PacketObservation{}, 10), NoUsableReceivers);
    CHECK_THROWS_AS(score_candidates(PacketObservation{}, CandidatePoseSpace::planar(s.grid, 1.0), s.env.receivers,
                                     *s.device, 15),
                    NoUsableReceivers);
    CHECK(engine.top_k(PacketObservation{}, 0).empty());
}

TEST_CASE("candidate space indexing")
{
    auto grid = std::make_shared<const CandidateGrid>(1.0, 2.0, 0.5, 0.1, 3, 2, std::vector<std::string>{"a"});
    CandidatePoseSpace s;
    s.grid = grid;
    s.azimuths = {0, 90};
    s.pitches = {0, 10, 20};
    s.rolls = {0, 5};
    CHECK(s.orientation_count() == 12);
    CHECK(s.size() == 72);
    const auto o = s.orientation((1 * 3 + 2) * 2 + 1);
    CHECK(o.azimuth == 90);
    CHECK(o.pitch == 20);
    CHECK(o.roll == 5);
    const auto p = grid->position(4);
    CHECK(p.x == Approx(1.1));
    CHECK(p.y == Approx(2.1));
    CHECK(p.z == 0.5);
    CHECK_THROWS(CandidatePoseSpace::evenly_spaced(7));
    s.azimuths = {360};
    CHECK_THROWS(s.validate());
}
