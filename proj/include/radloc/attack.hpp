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

#ifndef RADLOC_ATTACK_HPP
#define RADLOC_ATTACK_HPP

#include "config.hpp"
#include "csv.hpp"
#include "environment.hpp"
#include "experiment.hpp"
#include "pattern_io.hpp"
#include "pipeline.hpp"
#include "random.hpp"
#include "scoring.hpp"
#include "simulator.hpp"
#include "survey.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace radloc
{
    /// Spoofing analysis setup. Receivers are placed at random per seed; the
    /// defender scores with the claimed pattern, the attacker transmits with the actual one.
    struct AttackScenario
    {
        std::string name = "attack";
        Environment env; ///< extent and propagation; receivers are drawn per seed
        size_t receiver_count = 4;
        double receiver_clearance = 1.0; ///< minimum receiver spacing and distance from the walls
        bool receivers_on_walls = false; ///< place receivers on the boundary instead of the interior
        PatternPtr receiver_pattern;     ///< null means isotropic receivers
        PatternPtr claimed;
        PatternPtr actual;
        double tx_power_dbm = 15.0;
        PatternPtr survey_tx;
        SurveyOptions survey;
        double grid_step = 0.1;
        double orientation_step = 1.0;

        double separation = 5.0;
        size_t k = 100;
        /// Granularity of the attacker's power adjustment in dB; 0 means continuous.
        double power_step_db = 0.0;
        double limit_fraction = 0.1;
        PipelineConfig limits; ///< speed and rotation limits of the defender

        size_t targets = 100;
        size_t seeds = 20;
        std::uint64_t seed = 7000;

        size_t path_packets = 200;
        double path_speed = 1.0;
        double packet_interval = 0.005;

        void validate() const
        {
            if (!(separation > 0.0))
                throw Error("separation must be positive");
            if (!(limit_fraction > 0.0 && limit_fraction <= 1.0))
                throw Error("limit fraction must lie in (0, 1]");
            if (k == 0 || targets == 0 || seeds == 0)
                throw Error("k, targets and seeds must be at least 1");
            if (receiver_count == 0)
                throw Error("at least one receiver is needed");
            if (!claimed || !actual)
                throw Error("attack scenario needs claimed and actual patterns");
            if (!(power_step_db >= 0.0))
                throw Error("power step must be non-negative");
            if (!(packet_interval > 0.0) || !(path_speed >= 0.0))
                throw Error("packet interval must be positive and path speed non-negative");
        }
    };

    /// Seeded receiver placement: uniform in the area, at least `receiver_clearance`
    /// from the walls and from each other, facing a uniform random azimuth.
    inline std::vector<Receiver> place_receivers(const AttackScenario &s, std::uint64_t seed)
    {
        Rng rng(derive_seed(seed, {0xa7u}));
        const double c = s.receiver_clearance;
        if (!(s.env.extent_x > 2.0 * c && s.env.extent_y > 2.0 * c))
            throw Error("area too small for the receiver clearance");
        std::vector<Receiver> out;
        size_t attempts = 0;
        while (out.size() < s.receiver_count)
        {
            if (++attempts > 100000)
                throw Error("cannot place receivers with the requested clearance");
            Position p{rng.uniform(c, s.env.extent_x - c), rng.uniform(c, s.env.extent_y - c), s.env.z};
            if (s.receivers_on_walls)
            {
                // uniform along the perimeter, inset by the clearance
                const double w = s.env.extent_x - 2.0 * c, h = s.env.extent_y - 2.0 * c;
                double u = rng.uniform(0.0, 2.0 * (w + h));
                if (u < w)
                    p = {c + u, c, s.env.z};
                else if ((u -= w) < h)
                    p = {c + w, c + u, s.env.z};
                else if ((u -= h) < w)
                    p = {c + w - u, c + h, s.env.z};
                else
                    p = {c, c + h - (u - w), s.env.z};
            }
            bool ok = true;
            for (const auto &r : out)
                ok = ok && distance(r.pose.position, p) >= c;
            if (!ok)
                continue;
            Receiver r;
            r.id = "rx" + std::to_string(out.size() + 1);
            r.pose = Pose(p, Orientation{rng.uniform(0.0, 360.0), 0.0, 0.0});
            if (s.receiver_pattern)
                r.pattern = s.receiver_pattern;
            out.push_back(std::move(r));
        }
        return out;
    }

    /// One seeded scene: receivers, survey, and the defender's and attacker's scoring engines.
    struct AttackScene
    {
        std::uint64_t seed = 0;
        Environment env;
        std::shared_ptr<const SurveyLattice> lattice;
        std::shared_ptr<const CandidateGrid> grid;
        std::shared_ptr<const ScoringEngine> defender;
        std::shared_ptr<const ScoringEngine> attacker;
    };

    inline AttackScene build_attack_scene(const AttackScenario &s, std::uint64_t seed)
    {
        s.validate();
        AttackScene a;
        a.seed = seed;
        a.env = s.env;
        a.env.receivers = place_receivers(s, seed);
        const auto survey_tx = s.survey_tx ? s.survey_tx : make_pattern(RadiationPattern::isotropic());
        const auto survey = generate_survey(a.env, *survey_tx, s.survey);
        a.lattice = std::make_shared<const SurveyLattice>(survey);
        a.grid = std::make_shared<const CandidateGrid>(interpolate(survey, s.grid_step, a.env.z));
        const auto space = CandidatePoseSpace::planar(a.grid, s.orientation_step);
        a.defender = std::make_shared<const ScoringEngine>(space, a.env.receivers, s.claimed, s.tx_power_dbm);
        a.attacker = std::make_shared<const ScoringEngine>(space, a.env.receivers, s.actual, s.tx_power_dbm);
        return a;
    }

    /// Noiseless measurement vector of a transmitter at `pose`: surveyed propagation
    /// (bilinear between survey nodes) plus power and transmit directivity, per receiver
    /// in survey channel order. NaN where the survey has no value or the pose sits on a receiver.
    inline std::vector<double> expected_measurements(const Pose &pose, const RadiationPattern &pattern,
                                                     const std::vector<Receiver> &receivers,
                                                     const SurveyLattice &lattice, double tx_power_dbm)
    {
        const auto &ids = lattice.receiver_ids();
        std::vector<double> m(ids.size(), absent);
        const Matrix3 rot = rotation_matrix(pose.orientation);
        for (size_t r = 0; r < ids.size(); ++r)
        {
            auto it = std::find_if(receivers.begin(), receivers.end(), [&](const Receiver &x) { return x.id == ids[r]; });
            if (it == receivers.end())
                throw Error("survey channel '" + ids[r] + "' has no receiver");
            const Position &rx = it->pose.position;
            const double M = lattice.interpolate(pose.position.x, pose.position.y, r);
            if (!is_present(M) || detail::same_position(pose.position, rx))
                continue;
            m[r] = expected_rss(M, tx_power_dbm, pattern.lookup(relative_direction(rot, pose.position, rx)));
        }
        return m;
    }

    inline std::vector<double> expected_measurements(const Pose &pose, const RadiationPattern &pattern,
                                                     const AttackScene &scene, double tx_power_dbm)
    {
        return expected_measurements(pose, pattern, scene.env.receivers, *scene.lattice, tx_power_dbm);
    }

    struct SpoofMatch
    {
        Pose spoof;
        Pose attack;
        size_t position_index = 0;
        size_t orientation_index = 0;
        double mse = 0.0;       ///< after the best power offset
        double offset_db = 0.0; ///< power adjustment the attacker applies
    };

    struct MatchSearch
    {
        std::vector<double> target;   ///< measurement vector of the spoofed pose under the claimed pattern
        double threshold = 0.0;       ///< k-th best defender MSE for that vector
        std::vector<SpoofMatch> matches;
    };

    namespace detail
    {
        inline double mean_residual(const std::vector<double> &expected, const std::vector<double> &target)
        {
            double s = 0.0;
            int n = 0;
            for (size_t r = 0; r < target.size(); ++r)
                if (is_present(target[r]) && is_present(expected[r]))
                {
                    s += target[r] - expected[r];
                    ++n;
                }
            return n ? s / n : 0.0;
        }

        inline double offset_mse(const std::vector<double> &expected, const std::vector<double> &target, double offset)
        {
            double s = 0.0;
            int n = 0;
            for (size_t r = 0; r < target.size(); ++r)
                if (is_present(target[r]) && is_present(expected[r]))
                {
                    const double e = expected[r] + offset - target[r];
                    s += e * e;
                    ++n;
                }
            return n ? s / n : NAN;
        }
    }

    /// Every attacker pose more than `separation` from the spoofed position whose
    /// offset-adjusted measurement vector would rank within the defender's top k.
    /// Sorted by MSE, then candidate index.
    inline MatchSearch find_spoof_matches(const AttackScenario &s, const AttackScene &scene, const Pose &spoof)
    {
        MatchSearch out;
        out.target = expected_measurements(spoof, *s.claimed, scene, s.tx_power_dbm);
        const auto top = scene.defender->top_k(out.target, s.k);
        out.threshold = top.back().mse;
        const auto &space = scene.attacker->space();
        scene.attacker->for_each_within(out.target, out.threshold, true, [&](size_t p, size_t o, double v) {
            const Position pos = space.grid->position(p);
            if (!(distance(pos, spoof.position) > s.separation))
                return;
            SpoofMatch m;
            m.spoof = spoof;
            m.attack = space.pose(p, o);
            m.position_index = p;
            m.orientation_index = o;
            m.mse = v;
            const auto expected = scene.attacker->expected(p, o);
            m.offset_db = detail::mean_residual(expected, out.target);
            if (s.power_step_db > 0.0)
            {
                m.offset_db = s.power_step_db * std::round(m.offset_db / s.power_step_db);
                m.mse = detail::offset_mse(expected, out.target, m.offset_db);
                if (!(m.mse <= out.threshold))
                    return;
            }
            out.matches.push_back(m);
        });
        std::sort(out.matches.begin(), out.matches.end(), [](const SpoofMatch &a, const SpoofMatch &b) {
            return ranks_before(a.mse, a.position_index, a.orientation_index, b.mse, b.position_index,
                                b.orientation_index);
        });
        return out;
    }

    struct TimedPose
    {
        double t = 0.0;
        Pose pose;
    };

    /// Straight walk at the scenario's path speed from a random start, heading and fixed azimuth.
    /// The whole walk stays at least one metre inside the area.
    inline std::vector<TimedPose> straight_spoof_path(const AttackScenario &s, std::uint64_t seed)
    {
        Rng rng(derive_seed(seed, {0x5bu}));
        const double length = s.path_speed * s.packet_interval * static_cast<double>(s.path_packets);
        const double margin = 1.0;
        if (!(s.env.extent_x > 2.0 * margin + length && s.env.extent_y > 2.0 * margin + length))
            throw Error("spoof path does not fit in the area");
        const double heading = rng.uniform(0.0, 360.0);
        const double dx = std::sin(deg_to_rad(heading)), dy = std::cos(deg_to_rad(heading));
        // choose a start so that the end point is also inside the margin
        const double x_lo = margin + std::max(0.0, -dx * length), x_hi = s.env.extent_x - margin - std::max(0.0, dx * length);
        const double y_lo = margin + std::max(0.0, -dy * length), y_hi = s.env.extent_y - margin - std::max(0.0, dy * length);
        const double x0 = rng.uniform(x_lo, x_hi), y0 = rng.uniform(y_lo, y_hi);
        const Orientation o{std::floor(rng.uniform(0.0, 360.0)), 0.0, 0.0};
        std::vector<TimedPose> path;
        for (size_t i = 0; i < s.path_packets; ++i)
        {
            const double t = static_cast<double>(i) * s.packet_interval;
            const double d = s.path_speed * t;
            path.push_back({t, Pose(Position{x0 + dx * d, y0 + dy * d, s.env.z}, o)});
        }
        return path;
    }

    struct FeasibilityReport
    {
        bool feasible = false;
        long fail_packet = -1; ///< first packet the attacker cannot cover, -1 when feasible
        std::vector<size_t> match_counts;
        std::vector<size_t> reachable_counts;
    };

    /// Exact reachability over the per-packet match sets. The attacker transmits from a
    /// matching pose or stays silent; a transmission at packet j from pose b is reachable
    /// from one at packet i (or from the start) when t_j - t_i <= t/2 and b differs from the
    /// earlier pose by at most limitFraction of the defender's movement and rotation allowances
    /// over t_j - t_i. A packet fails when no transmission or start lies within t/2 before it.
    inline FeasibilityReport spoof_path_feasible(const AttackScenario &s, const AttackScene &scene,
                                                 const std::vector<TimedPose> &path)
    {
        FeasibilityReport rep;
        if (path.empty())
        {
            rep.feasible = true;
            return rep;
        }
        const auto &space = scene.attacker->space();
        const auto &grid = *space.grid;
        const size_t no = space.orientation_count();
        const double window = s.limits.t / 2.0;
        const double speed = s.limit_fraction * s.limits.max_speed;
        const double turn_rate = s.limit_fraction * s.limits.rotation_limit_deg / s.limits.t;
        const double tol = 1e-9;

        // reachable transmission times per candidate, oldest first
        std::unordered_map<std::uint64_t, std::deque<double>> reach;
        std::vector<std::uint64_t> active;
        std::deque<double> reach_times; // times of packets with at least one reachable transmission

        const double t0 = path.front().t;
        const int max_cells = static_cast<int>(std::floor(speed * window / grid.step() + tol));
        const double az_step = space.azimuths.size() > 1 ? space.azimuths[1] - space.azimuths[0] : 360.0;
        const int max_turn = static_cast<int>(std::floor(turn_rate * window / az_step + tol));
        const size_t neighbourhood = static_cast<size_t>(2 * max_cells + 1) * (2 * max_cells + 1) *
                                     static_cast<size_t>(std::min<int>(2 * max_turn + 1, static_cast<int>(no)));

        for (size_t j = 0; j < path.size(); ++j)
        {
            const double tj = path[j].t;
            while (!reach_times.empty() && tj - reach_times.front() > window + tol)
                reach_times.pop_front();
            const bool start_open = tj - t0 <= window + tol;

            const auto found = find_spoof_matches(s, scene, path[j].pose);
            rep.match_counts.push_back(found.matches.size());

            auto earliest = [&](std::uint64_t key) -> double {
                auto it = reach.find(key);
                if (it == reach.end())
                    return NAN;
                auto &q = it->second;
                while (!q.empty() && tj - q.front() > window + tol)
                    q.pop_front();
                return q.empty() ? NAN : q.front();
            };
            auto step_ok = [&](size_t p_from, size_t o_from, double t_from, size_t p_to, size_t o_to) {
                const double dt = tj - t_from;
                const Position a = grid.position(p_from), b = grid.position(p_to);
                if (distance(a, b) > speed * dt + tol)
                    return false;
                const auto oa = space.orientation(o_from), ob = space.orientation(o_to);
                const double lim = turn_rate * dt + tol;
                return angular_difference(oa.azimuth, ob.azimuth) <= lim &&
                       angular_difference(oa.pitch, ob.pitch) <= lim && angular_difference(oa.roll, ob.roll) <= lim;
            };

            std::vector<std::uint64_t> now;
            for (const auto &m : found.matches)
            {
                const std::uint64_t key = static_cast<std::uint64_t>(m.position_index) * no + m.orientation_index;
                bool ok = start_open;
                if (!ok && !reach_times.empty())
                {
                    if (neighbourhood <= active.size())
                    {
                        const int ix = static_cast<int>(m.position_index % static_cast<size_t>(grid.nx()));
                        const int iy = static_cast<int>(m.position_index / static_cast<size_t>(grid.nx()));
                        for (int dy = -max_cells; dy <= max_cells && !ok; ++dy)
                            for (int dx = -max_cells; dx <= max_cells && !ok; ++dx)
                            {
                                const int x = ix + dx, y = iy + dy;
                                if (x < 0 || y < 0 || x >= grid.nx() || y >= grid.ny())
                                    continue;
                                const size_t p = static_cast<size_t>(y) * grid.nx() + x;
                                for (int da = -max_turn; da <= max_turn && !ok; ++da)
                                {
                                    const long o = (static_cast<long>(m.orientation_index) + da) % static_cast<long>(no);
                                    const size_t oi = static_cast<size_t>(o < 0 ? o + static_cast<long>(no) : o);
                                    const double te = earliest(static_cast<std::uint64_t>(p) * no + oi);
                                    ok = !std::isnan(te) && step_ok(p, oi, te, m.position_index, m.orientation_index);
                                }
                            }
                    }
                    else
                    {
                        for (std::uint64_t k : active)
                        {
                            const double te = earliest(k);
                            if (!std::isnan(te) &&
                                step_ok(k / no, k % no, te, m.position_index, m.orientation_index))
                            {
                                ok = true;
                                break;
                            }
                        }
                    }
                }
                if (ok)
                    now.push_back(key);
            }
            for (std::uint64_t k : now)
            {
                auto &q = reach[k];
                if (q.empty())
                    active.push_back(k);
                q.push_back(tj);
            }
            if (!now.empty())
                reach_times.push_back(tj);
            rep.reachable_counts.push_back(now.size());
            // drop candidates that can no longer serve as predecessors
            if (active.size() > 4096)
            {
                std::vector<std::uint64_t> keep;
                for (std::uint64_t k : active)
                    if (!std::isnan(earliest(k)))
                        keep.push_back(k);
                    else
                        reach.erase(k);
                active.swap(keep);
            }

            if (now.empty() && reach_times.empty() && !start_open)
            {
                rep.fail_packet = static_cast<long>(j);
                return rep;
            }
        }
        rep.feasible = true;
        return rep;
    }

    struct TargetOutcome
    {
        std::uint64_t seed = 0;
        size_t target_index = 0;
        Pose target;
        size_t matches = 0;
    };

    struct SeedOutcome
    {
        std::uint64_t seed = 0;
        double probability = 0.0; ///< fraction of targets with at least one match
        FeasibilityReport path;
        bool path_checked = false;
    };

    struct AttackResult
    {
        std::vector<TargetOutcome> targets;
        std::vector<SeedOutcome> seeds;
        MeanCi probability;
        size_t paths_checked = 0;
        size_t paths_failed_within_100 = 0;
    };

    /// Uniformly drawn spoof targets on the candidate space for one scene.
    inline std::vector<Pose> random_targets(const AttackScenario &s, const AttackScene &scene, std::uint64_t seed)
    {
        Rng rng(derive_seed(seed, {0x7au}));
        const auto &space = scene.defender->space();
        std::vector<Pose> out;
        for (size_t i = 0; i < s.targets; ++i)
        {
            const size_t p = rng.below(space.position_count());
            const size_t o = rng.below(space.orientation_count());
            out.push_back(space.pose(p, o));
        }
        return out;
    }

    /// Match probability over `s.seeds` scenes of `s.targets` targets each; optionally
    /// also runs a straight-walk feasibility check per scene.
    inline AttackResult match_probability(const AttackScenario &s, bool check_paths = true, unsigned jobs = 1,
                                          const std::function<void(const std::string &)> &progress = {})
    {
        s.validate();
        AttackResult res;
        res.targets.resize(s.seeds * s.targets);
        res.seeds.resize(s.seeds);
        std::mutex progress_mutex;
        parallel_for(s.seeds, jobs, [&](size_t i) {
            const std::uint64_t seed = s.seed + i;
            const auto scene = build_attack_scene(s, seed);
            const auto targets = random_targets(s, scene, seed);
            size_t hit = 0;
            for (size_t t = 0; t < targets.size(); ++t)
            {
                const auto found = find_spoof_matches(s, scene, targets[t]);
                res.targets[i * s.targets + t] = {seed, t, targets[t], found.matches.size()};
                hit += found.matches.empty() ? 0 : 1;
            }
            auto &so = res.seeds[i];
            so.seed = seed;
            so.probability = static_cast<double>(hit) / static_cast<double>(targets.size());
            if (check_paths)
            {
                so.path = spoof_path_feasible(s, scene, straight_spoof_path(s, seed));
                so.path_checked = true;
            }
            if (progress)
            {
                std::lock_guard lock(progress_mutex);
                progress("seed " + std::to_string(seed) + ": p = " + csv::format(so.probability));
            }
        });
        std::vector<double> p;
        for (const auto &so : res.seeds)
        {
            p.push_back(so.probability);
            if (so.path_checked)
            {
                ++res.paths_checked;
                if (!so.path.feasible && so.path.fail_packet < 100)
                    ++res.paths_failed_within_100;
            }
        }
        res.probability = mean_ci(p);
        return res;
    }

    inline AttackScenario load_attack_scenario(const Config &c)
    {
        AttackScenario s;
        s.name = c.get_string("name", std::filesystem::path(c.source()).stem().string());
        s.env.extent_x = c.get_double("extent_x", 20.0);
        s.env.extent_y = c.get_double("extent_y", 20.0);
        s.env.z = c.get_double("height", 0.0);
        s.env.path_loss.exponent = c.get_double("path_loss_exponent", 2.2);
        s.env.path_loss.reference_loss_db = c.get_double("reference_loss_db", 40.0);
        s.env.path_loss.reference_distance_m = c.get_double("reference_distance_m", 1.0);
        s.env.sensitivity_dbm = c.get_double("sensitivity_dbm", -95.0);
        s.receiver_count = static_cast<size_t>(c.get_int("receiver_count", 4));
        s.receiver_clearance = c.get_double("receiver_clearance", 1.0);
        s.receivers_on_walls = c.get_bool("receivers_on_walls", false);
        const auto rx_pattern = c.get_path("receiver_pattern");
        if (!rx_pattern.empty())
            s.receiver_pattern = make_pattern(read_pattern(rx_pattern));

        PatternMeta meta;
        s.claimed = make_pattern(read_pattern(c.get_path("claimed_pattern"), &meta));
        s.actual = make_pattern(read_pattern(c.get_path("actual_pattern")));
        s.tx_power_dbm = c.get_double("tx_power_dbm", meta.tx_power_dbm);
        const auto survey_pattern = c.get_path("survey_pattern");
        if (!survey_pattern.empty())
            s.survey_tx = make_pattern(read_pattern(survey_pattern));
        s.survey.spacing = c.get_double("survey_spacing", 1.0);
        s.survey.tx_power_dbm = c.get_double("survey_tx_power_dbm", 15.0);
        s.grid_step = c.get_double("grid_step", 0.1);
        s.orientation_step = c.get_double("orientation_step", 1.0);

        s.separation = c.get_double("separation", 5.0);
        s.k = static_cast<size_t>(c.get_int("k", 100));
        s.limit_fraction = c.get_double("limit_fraction", 0.1);
        s.power_step_db = c.get_double("power_step_db", 0.0);
        s.limits.max_speed = c.get_double("max_speed", s.limits.max_speed);
        s.limits.rotation_limit_deg = c.get_double("rotation_limit_deg", s.limits.rotation_limit_deg);
        s.limits.t = c.get_double("rotation_window_s", s.limits.t);
        s.targets = static_cast<size_t>(c.get_int("targets", 100));
        s.seeds = static_cast<size_t>(c.get_int("seeds", 20));
        s.seed = static_cast<std::uint64_t>(c.get_int("seed", 7000));
        s.path_packets = static_cast<size_t>(c.get_int("path_packets", 200));
        s.path_speed = c.get_double("path_speed", 1.0);
        s.packet_interval = c.get_double("packet_interval", 0.005);
        c.reject_unknown();
        try
        {
            s.validate();
        }
        catch (const Error &e)
        {
            throw ConfigError(c.source(), 0, e.what());
        }
        return s;
    }

    inline AttackScenario load_attack_scenario(const std::filesystem::path &path)
    {
        return load_attack_scenario(Config::load(path));
    }

    inline const std::vector<std::string> attack_report_csv_header{"seed", "target_idx", "n_matches", "path_feasible",
                                                                   "fail_packet"};

    /// Per-target report plus a one-line summary next to it.
    inline void write_attack_report(const std::filesystem::path &dir, const AttackScenario &s, const AttackResult &r)
    {
        std::filesystem::create_directories(dir);
        std::string body = csv::join(attack_report_csv_header) + "\n";
        for (size_t i = 0; i < r.targets.size(); ++i)
        {
            const auto &t = r.targets[i];
            const auto &so = r.seeds[i / s.targets];
            csv::Line line;
            line << static_cast<long>(t.seed) << static_cast<long>(t.target_index) << static_cast<long>(t.matches);
            if (so.path_checked)
                line << (so.path.feasible ? 1L : 0L) << so.path.fail_packet;
            else
                line << "" << "";
            body += line.str() + "\n";
        }
        csv::write_atomic(dir / "attack_report.csv", body);

        std::string sum = "scenario,probability,ci95,seeds,targets,paths_checked,paths_failed_within_100\n";
        sum += (csv::Line() << s.name << r.probability.mean << r.probability.half_width
                            << static_cast<long>(s.seeds) << static_cast<long>(s.targets)
                            << static_cast<long>(r.paths_checked) << static_cast<long>(r.paths_failed_within_100))
                   .str() +
               "\n";
        csv::write_atomic(dir / "attack_summary.csv", sum);
    }
}

#endif
