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
#include "radloc/simulator.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <fstream>

using namespace radloc;
using Catch::Approx;

namespace
{
    Environment room(size_t n, bool collinear = false)
    {
        Environment env;
        env.sensitivity_dbm = -200;
        const double xs[] = {1, 19, 19, 1, 10, 10}, ys[] = {1, 1, 19, 19, 1, 19};
        for (size_t i = 0; i < n; ++i)
        {
            Receiver r;
            r.id = "rx" + std::to_string(i + 1);
            r.pose = collinear ? Pose(2.0 + 5.0 * static_cast<double>(i), 10, 0, 0) : Pose(xs[i], ys[i], 0, 0);
            env.receivers.push_back(r);
        }
        return env;
    }

    Trajectory still(Position p, double az, size_t packets)
    {
        Trajectory t;
        t.waypoints = {p};
        t.speed = 0;
        t.rotation_rate = 0;
        t.start_azimuth = az;
        t.packets = packets;
        return t;
    }

    PacketObservation noiseless(const Environment &env, const Pose &pose, const RadiationPattern &pattern)
    {
        PacketObservation o;
        for (const auto &rx : env.receivers)
            o.samples[rx.id] = received_power(pose, pattern, 15.0, rx, env.path_loss);
        return o;
    }
}

TEST_CASE("log-distance path loss")
{
    PathLossModel m{2.0, 40.0, 1.0};
    CHECK(path_loss(1.0, m) == Approx(40.0));
    CHECK(path_loss(10.0, m) == Approx(60.0));
    PathLossModel n{3.3, 35.0, 2.0};
    CHECK(path_loss(8.0, n) - path_loss(4.0, n) == Approx(10.0 * 3.3 * std::log10(2.0)));
    CHECK_THROWS_AS(path_loss(0.0, m), NonPositiveDistance);
}

TEST_CASE("noiseless isotropic RSS is transmit power minus path loss")
{
    const auto env = room(1);
    const auto traj = still({7, 4, 0}, 0, 50);
    const auto run = simulate_run(env, traj, RadiationPattern::isotropic(), 12.0, {0.0, 0.0}, 3);
    REQUIRE(run.streams[0].size() == 50);
    const double d = distance({7, 4, 0}, env.receivers[0].pose.position);
    for (const auto &r : run.streams[0])
        REQUIRE(r.rss_dbm == Approx(12.0 - 40.0 - 22.0 * std::log10(d)).margin(1e-12));
}

TEST_CASE("a device turning in place traces out its pattern slice")
{
    const auto a50 = read_pattern(testing::data("patterns/a50.csv"));
    const auto env = room(1);
    Trajectory t = still({10, 10, 0}, 0, 360);
    t.rotation_rate = 200; // one degree per 5 ms packet
    const auto run = simulate_run(env, t, a50, 15.0, {0.0, 0.0}, 1);
    REQUIRE(run.streams[0].size() == 360);
    const double offset = run.streams[0][0].rss_dbm - a50.lookup(relative_direction(run.truth[0].pose, env.receivers[0].pose.position));
    for (size_t i = 0; i < 360; ++i)
    {
        const auto dir = relative_direction(run.truth[i].pose, env.receivers[0].pose.position);
        REQUIRE(run.streams[0][i].rss_dbm - a50.lookup(dir) == Approx(offset).margin(1e-9));
    }
    const auto [lo, hi] = std::minmax_element(run.streams[0].begin(), run.streams[0].end(),
                                              [](const auto &a, const auto &b) { return a.rss_dbm < b.rss_dbm; });
    CHECK(hi->rss_dbm - lo->rss_dbm == Approx(5.06 + 12.29).margin(0.02));
}

TEST_CASE("noise has the configured spread and streams are seeded per receiver")
{
    const auto env = room(2);
    const auto t = still({6, 9, 0}, 0, 10000);
    const auto run = simulate_run(env, t, RadiationPattern::isotropic(), 15.0, {2.0, 0.0}, 42);
    std::vector<double> base(2);
    for (size_t r = 0; r < 2; ++r)
        base[r] = received_power(t.pose_at(0), RadiationPattern::isotropic(), 15.0, env.receivers[r], env.path_loss);
    double s0 = 0, s00 = 0, s11 = 0, s01 = 0;
    for (size_t i = 0; i < 10000; ++i)
    {
        const double a = run.streams[0][i].rss_dbm - base[0], b = run.streams[1][i].rss_dbm - base[1];
        s0 += a;
        s00 += a * a;
        s11 += b * b;
        s01 += a * b;
    }
    const double sd = std::sqrt((s00 - s0 * s0 / 10000) / 9999);
    CHECK(sd == Approx(2.0).margin(0.1));
    CHECK(std::abs(s01 / std::sqrt(s00 * s11)) < 0.05);

    const auto again = simulate_run(env, t, RadiationPattern::isotropic(), 15.0, {2.0, 0.0}, 42);
    CHECK(again.streams == run.streams);
    const auto other = simulate_run(env, t, RadiationPattern::isotropic(), 15.0, {2.0, 0.0}, 43);
    CHECK(other.streams != run.streams);
}

TEST_CASE("clock jitter must stay below half the packet interval")
{
    auto t = still({6, 9, 0}, 0, 10);
    t.packet_interval = 0.001;
    CHECK_THROWS(simulate_run(room(1), t, RadiationPattern::isotropic(), 15.0, {0.0, 0.0005}, 1));
}

TEST_CASE("LMS recovers an isotropic transmitter exactly")
{
    const auto env = room(4);
    for (const Position p : {Position{5, 5, 0}, Position{12.3, 7.7, 0}, Position{15, 16, 0}})
    {
        const auto fit = lms_baseline(noiseless(env, Pose(p, {}), RadiationPattern::isotropic()), env.receivers,
                                      env.path_loss, 15.0, 20, 20);
        CHECK(distance(fit.position, p) < 0.05);
        CHECK_FALSE(fit.ambiguous);
    }
}

TEST_CASE("LMS is biased by an unmodelled radiation pattern")
{
    const auto env = room(4);
    const auto a50 = read_pattern(testing::data("patterns/a50.csv"));
    Rng rng(17);
    double iso = 0, directional = 0;
    for (int i = 0; i < 30; ++i)
    {
        const Pose p(rng.uniform(3, 17), rng.uniform(3, 17), 0, rng.uniform(0, 360));
        iso += distance(lms_baseline(noiseless(env, p, RadiationPattern::isotropic()), env.receivers, env.path_loss, 15,
                                     20, 20)
                            .position,
                        p.position);
        directional +=
            distance(lms_baseline(noiseless(env, p, a50), env.receivers, env.path_loss, 15, 20, 20).position, p.position);
    }
    CHECK(directional / 30 > 1.0);
    CHECK(directional > 20.0 * iso);
}

TEST_CASE("LMS flags mirror ambiguity for collinear receivers")
{
    const auto env = room(3, true);
    const auto fit =
        lms_baseline(noiseless(env, Pose(8, 6, 0, 0), RadiationPattern::isotropic()), env.receivers, env.path_loss, 15, 20, 20);
    CHECK(fit.ambiguous);
    CHECK(std::abs(fit.position.y - 10.0) == Approx(4.0).margin(0.05));
    PacketObservation none;
    CHECK_THROWS_AS(lms_baseline(none, env.receivers, env.path_loss, 15, 20, 20), NoUsableReceivers);
}

TEST_CASE("top-result baseline takes the first ranked candidate")
{
    std::vector<ScoredCandidate> ranked(3);
    ranked[0].pose = Pose(1, 2, 0, 30);
    ranked[1].pose = Pose(5, 5, 0, 90);
    const auto e = top_result_baseline(ranked);
    CHECK(e.position.x == 1);
    CHECK(e.orientation.azimuth == 30);
    CHECK_THROWS_AS(top_result_baseline({}), EmptyInput);

    // ties resolve to the lowest canonical index
    auto grid = std::make_shared<CandidateGrid>(0.0, 0.0, 0.0, 1.0, 3, 1, std::vector<std::string>{"a"});
    for (size_t p = 0; p < 3; ++p)
        grid->m(p, 0) = -70;
    Receiver rx;
    rx.id = "a";
    rx.pose = Pose(0, 5, 0, 0);
    PacketObservation obs;
    obs.samples = {{"a", -55}};
    const auto r = score_candidates(obs, CandidatePoseSpace::planar(grid, 90), {rx}, RadiationPattern::isotropic(), 15);
    const auto t = top_result_baseline(r);
    CHECK(r[0].position_index == 0);
    CHECK(r[0].orientation_index == 0);
    CHECK(t.position.x == 0);
}

TEST_CASE("top result agrees with a single-cluster pipeline estimate in a noiseless run")
{
    auto s = load_scenario(testing::data("scenarios/s01.cfg"));
    s.trajectory.packets = 60;
    s.noise.sigma_db = 0;
    const auto scene = build_scene(s);
    const auto sim = simulate_run(scene.env, s.trajectory, *s.device, s.tx_power_dbm, s.noise, 1);
    const auto obs = match_packets(sim.streams).observations;
    size_t single = 0;
    for (const auto &o : obs)
    {
        const auto top = scene.engine->top_k(o, s.pipeline.k);
        PipelineState st;
        const auto out = process_ranked(st, o.timestamp, top, s.pipeline.unbounded());
        if (!out.accepted || out.trace.selected != out.trace.after_movement)
            continue;
        ++single;
        const auto best = top_result_baseline(top);
        CHECK(distance(best.position, out.estimate.position) <= s.pipeline.position_eps);
        CHECK(angular_difference(best.orientation.azimuth, out.estimate.orientation.azimuth) <=
              s.pipeline.orientation_eps);
    }
    CHECK(single > 30);
}

TEST_CASE("evaluation of estimates against truth")
{
    std::vector<TruthSample> truth;
    std::vector<KeyedEstimate> same, shifted;
    for (std::uint64_t k = 0; k < 10; ++k)
    {
        const Pose p(static_cast<double>(k), 3, 0, 10.0 * static_cast<double>(k));
        truth.push_back({k, 0.005 * static_cast<double>(k), p});
        KeyedEstimate e{k, true, {}};
        e.estimate.position = p.position;
        e.estimate.orientation = p.orientation;
        same.push_back(e);
        e.estimate.position.y += 1.0;
        shifted.push_back(e);
    }
    auto m = evaluate(truth, same);
    CHECK(m.mean_position_error == 0.0);
    CHECK(m.mean_orientation_error == 0.0);
    CHECK(m.emitted == 10);
    m = evaluate(truth, shifted);
    CHECK(m.mean_position_error == Approx(1.0));

    // rejected packets: not scored, but the held estimate is tracked
    shifted[3].accepted = false;
    shifted[4].accepted = false;
    m = evaluate(truth, shifted);
    CHECK(m.emitted == 8);
    CHECK(m.rejected == 2);
    CHECK(m.rejection_rate() == Approx(0.2));
    CHECK(m.mean_position_error == Approx(1.0));
    CHECK(m.tracked == 10);
    // packets 3 and 4 reuse the estimate of packet 2, which is 1 and 2 m behind in x
    CHECK(m.tracking_position_error == Approx((8 * 1.0 + std::hypot(1.0, 1.0) + std::hypot(2.0, 1.0)) / 10.0));
    CHECK(m.tracking_orientation_error == Approx((10.0 + 20.0) / 10.0));

    shifted[0].key = 99;
    CHECK_THROWS_AS(evaluate(truth, shifted), MisalignedStreams);
}

TEST_CASE("summary statistics")
{
    CHECK(reduction_pct(2.0, 10.0) == Approx(80.0));
    CHECK(reduction_pct(1.0, 0.0) == 0.0);
    const auto c = mean_ci({1, 2, 3, 4});
    CHECK(c.mean == Approx(2.5));
    CHECK(c.half_width == Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(mean_ci({7}).half_width == 0.0);
}

TEST_CASE("trajectories walk back and forth and rotate as configured")
{
    Trajectory t;
    t.waypoints = {{0, 0, 0}, {4, 0, 0}, {4, 3, 0}};
    t.speed = 1.0;
    t.rotation_rate = 30;
    t.start_azimuth = 350;
    CHECK(t.length() == Approx(7));
    CHECK(t.pose_at(2).position.x == Approx(2));
    CHECK(t.pose_at(5).position.y == Approx(1));
    CHECK(t.pose_at(9).position.y == Approx(1)); // 2 m back from the far end
    CHECK(t.pose_at(14).position.x == Approx(0).margin(1e-12));
    CHECK(t.pose_at(1).orientation.azimuth == Approx(20));

    t.rotation = RotationMode::Periodic;
    t.rotation_amplitude = 45;
    t.rotation_period = 4;
    CHECK(t.peak_rotation_rate() == Approx(45 * 2 * std::numbers::pi / 4));
    // within the 180 degree per half second bound at every step
    for (double s = 0; s < 8; s += 0.005)
        REQUIRE(angular_difference(t.pose_at(s).orientation.azimuth, t.pose_at(s + 0.5).orientation.azimuth) <= 180.0);

    t.speed = 11;
    CHECK_THROWS(t.validate());
}

TEST_CASE("truth files")
{
    const auto dir = testing::scratch("truth");
    write_truth(dir / "t.csv", {{0, 0.25, Pose(1.5, 2, 0, 45)}});
    std::ifstream in(dir / "t.csv");
    std::string h, l;
    std::getline(in, h);
    std::getline(in, l);
    CHECK(h == "timestamp_s,x_m,y_m,azimuth_deg");
    CHECK(l == "0.25,1.5,2,45");
}
