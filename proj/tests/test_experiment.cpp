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

#include "radloc/experiment.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <fstream>

using namespace radloc;
using Catch::Approx;

namespace
{
    std::vector<std::string> lines(const std::filesystem::path &p)
    {
        std::ifstream in(p);
        std::vector<std::string> out;
        for (std::string l; std::getline(in, l);)
            out.push_back(l);
        return out;
    }
}

TEST_CASE("scenario files load with their overrides")
{
    const auto s = load_scenario(testing::fixture("short_run.cfg"));
    CHECK(s.name == "short_run");
    CHECK(s.receiver_count == 4);
    CHECK(s.active_environment().receivers.size() == 4);
    CHECK(s.trajectory.packets == 200);
    CHECK(s.trajectory.rotation_rate == 30);
    CHECK(s.noise.sigma_db == 0.5);
    CHECK(s.survey.spacing == 1.0);
    CHECK(s.env.path_loss.exponent == 2.2);
    CHECK(s.device->min_max().second == Approx(5.06).margin(0.01));
    CHECK(s.pipeline.max_valid_interval == Approx(s.pipeline.t / 2));
}

TEST_CASE("every shipped scenario loads and validates")
{
    for (int i = 1; i <= 10; ++i)
    {
        char name[32];
        std::snprintf(name, sizeof name, "scenarios/s%02d.cfg", i);
        INFO(name);
        const auto s = load_scenario(testing::data(name));
        CHECK_NOTHROW(s.trajectory.validate());
        CHECK(s.active_environment().receivers.size() >= 3);
    }
}

TEST_CASE("misspelt keys are rejected with their line")
{
    try
    {
        load_experiment(Config::load(testing::fixture("bad_key.cfg")));
        FAIL("expected a configuration error");
    }
    catch (const ConfigError &e)
    {
        CHECK(std::string(e.what()).find("repetitons") != std::string::npos);
        CHECK(e.line() > 0);
    }
}

TEST_CASE("a sweep yields one row per cell, method and repetition")
{
    const auto spec = load_experiment(Config::load(testing::fixture("short_sweep.cfg")));
    CHECK(spec.methods.size() == 3);
    CHECK(spec.repetitions == 2);
    CHECK(spec.seed_base == 10);
    auto quick = spec;
    quick.packets = 60;
    const auto res = run_experiment(quick, 1);
    CHECK(res.rows.size() == 2 * 3 * 2);
    CHECK(res.summary.size() == 2 * 3);
    for (const auto &r : res.rows)
    {
        CHECK(r.metrics.emitted + r.metrics.rejected == 60);
        CHECK(r.seed >= 10);
        CHECK(r.seed <= 11);
    }
    const auto &full = res.find(0.5, 4, 0.005, Method::Full);
    CHECK(full.position.n == 2);
    CHECK(full.reduction_vs_lms == Approx(reduction_pct(full.position.mean, res.find(0.5, 4, 0.005, Method::Lms).position.mean)));
    CHECK(res.per_repetition(2.0, 4, 0.005, Method::TopResult).size() == 2);
    CHECK_THROWS(res.find(1.0, 4, 0.005, Method::Full));

    // the same seeds give the same numbers whatever the worker count
    const auto again = run_experiment(quick, 3);
    REQUIRE(again.rows.size() == res.rows.size());
    for (size_t i = 0; i < res.rows.size(); ++i)
    {
        CHECK(again.rows[i].metrics.mean_position_error == res.rows[i].metrics.mean_position_error);
        const double a = again.rows[i].metrics.mean_orientation_error, b = res.rows[i].metrics.mean_orientation_error;
        CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
    }

    const auto dir = testing::scratch("sweep");
    write_experiment(dir, quick, res);
    const auto m = lines(dir / "metrics.csv");
    REQUIRE(m.size() == 2 + res.rows.size());
    CHECK(m[0] == "# schema radloc-metrics 1; seeds 10..11");
    CHECK(m[1].rfind("sigma_db,receivers,packet_interval_s,method", 0) == 0);
    const auto s = lines(dir / "summary.csv");
    CHECK(s.size() == 2 + res.summary.size());
}

TEST_CASE("receiver sweeps use the first receivers of the database")
{
    ExperimentSpec spec;
    spec.scenarios = {testing::fixture("short_run.cfg")};
    spec.methods = {Method::TopResult};
    spec.receiver_counts = {3, 4};
    spec.repetitions = 1;
    spec.packets = 20;
    const auto res = run_experiment(spec, 1);
    CHECK(res.rows.size() == 2);
    CHECK(res.rows[0].receivers == 3);
    CHECK(res.rows[1].receivers == 4);
}

TEST_CASE("a rotation override replaces the scenario's rotation")
{
    ExperimentSpec spec;
    spec.scenarios = {testing::fixture("short_run.cfg")};
    spec.methods = {Method::Full};
    spec.repetitions = 1;
    spec.packets = 40;
    const auto base = run_experiment(spec, 1);
    spec.rotation_rate = 720;
    const auto fast = run_experiment(spec, 1);
    CHECK(base.rows[0].metrics.mean_orientation_error != fast.rows[0].metrics.mean_orientation_error);
}

TEST_CASE("run_methods keeps estimates aligned with truth")
{
    auto s = load_scenario(testing::fixture("short_run.cfg"));
    s.trajectory.packets = 40;
    const auto scene = build_scene(s);
    const auto r = run_methods(s, scene, 5, {Method::Full, Method::Lms}, true);
    CHECK(r.truth.size() == 40);
    CHECK(r.estimates.at(Method::Full).size() == 40);
    CHECK(r.estimates.at(Method::Lms).size() == 40);
    CHECK(r.metrics.at(Method::Lms).rejected == 0);
    for (size_t i = 0; i < 40; ++i)
        CHECK(r.estimates.at(Method::Full)[i].key == r.truth[i].key);
}
