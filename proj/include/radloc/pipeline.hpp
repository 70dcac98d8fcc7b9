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

#ifndef RADLOC_PIPELINE_HPP
#define RADLOC_PIPELINE_HPP

#include "clustering.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "packet_sync.hpp"
#include "scoring.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace radloc
{
    enum class PrimaryData
    {
        Position,
        Orientation
    };

    enum class Method
    {
        Full,
        LocationOnly,
        OrientationOnly,
        TopResult,
        Lms
    };

    inline const char *method_name(Method m)
    {
        switch (m)
        {
        case Method::Full: return "full";
        case Method::LocationOnly: return "location-clustering-only";
        case Method::OrientationOnly: return "orientation-clustering-only";
        case Method::TopResult: return "top-result";
        case Method::Lms: return "lms";
        }
        return "?";
    }

    inline Method parse_method(const std::string &s)
    {
        for (Method m : {Method::Full, Method::LocationOnly, Method::OrientationOnly, Method::TopResult, Method::Lms})
            if (s == method_name(m))
                return m;
        throw Error("unknown method '" + s + "'");
    }

    struct PipelineConfig
    {
        size_t k = 100;
        double rotation_limit_deg = 180.0; ///< per axis, per `t` seconds
        double t = 0.5;
        double max_valid_interval = 0.25;
        double max_speed = 10.0;
        double orientation_eps = 2.0;
        double position_eps = 0.5;
        size_t min_pts = 10;
        PrimaryData primary = PrimaryData::Position;

        void validate() const
        {
            if (k < 1 || min_pts < 1)
                throw Error("k and minPts must be at least 1");
            for (double v : {rotation_limit_deg, t, max_valid_interval, max_speed, orientation_eps, position_eps})
                if (!(v > 0.0))
                    throw Error("pipeline limits must be positive");
            if (max_valid_interval > t / 2.0)
                throw Error("max_valid_interval must not exceed t/2");
        }

        /// Same limits with rotation and movement unbounded.
        PipelineConfig unbounded() const
        {
            PipelineConfig c = *this;
            c.rotation_limit_deg = std::numeric_limits<double>::infinity();
            c.max_speed = std::numeric_limits<double>::infinity();
            return c;
        }
    };

    struct Estimate
    {
        double timestamp = 0.0;
        Position position;
        Orientation orientation;
        double score = 0.0;
        bool valid = true;
    };

    struct PipelineState
    {
        std::optional<Estimate> last_valid;
        double last_valid_time = -std::numeric_limits<double>::infinity();
        double last_packet_time = -std::numeric_limits<double>::infinity();
    };

    /// Inclusive limit test that tolerates rounding in the allowance product.
    inline bool within_allowance(double change, double allowance)
    {
        return change <= allowance * (1.0 + 1e-12);
    }

    inline double rotation_allowance(double dt, const PipelineConfig &cfg)
    {
        return cfg.rotation_limit_deg * (dt / cfg.t);
    }

    inline bool rotation_valid(const Orientation &prev, const Orientation &cand, double dt, const PipelineConfig &cfg)
    {
        const double allowance = rotation_allowance(dt, cfg);
        return within_allowance(angular_difference(prev.azimuth, cand.azimuth), allowance) &&
               within_allowance(angular_difference(prev.pitch, cand.pitch), allowance) &&
               within_allowance(angular_difference(prev.roll, cand.roll), allowance);
    }

    inline bool movement_valid(const Position &prev, const Position &cand, double dt, const PipelineConfig &cfg)
    {
        return within_allowance(distance(prev, cand), cfg.max_speed * dt);
    }

    /// Sum of squared weights over the members of a cluster.
    inline double final_score(const std::vector<size_t> &members, const std::vector<double> &weights)
    {
        if (members.empty())
            throw EmptyInput("final_score of an empty cluster");
        double s = 0.0;
        for (size_t i : members)
            s += weights[i] * weights[i];
        return s;
    }

    /// Indices into the top-k list surviving each stage, for inspection and tests.
    struct PacketTrace
    {
        size_t candidates = 0;
        bool rotation_filter_applied = false;
        bool movement_filter_applied = false;
        std::vector<size_t> after_rotation;
        std::vector<size_t> after_movement;
        std::vector<size_t> selected;
    };

    struct PacketOutcome
    {
        bool accepted = false;
        Estimate estimate; ///< meaningful only when accepted
        PacketTrace trace;
    };

    namespace detail
    {
        inline double axis_value(const Orientation &o, int axis)
        {
            return axis == 0 ? o.azimuth : axis == 1 ? o.pitch : o.roll;
        }

        inline Orientation weighted_orientation(const std::vector<ScoredCandidate> &c, const std::vector<size_t> &idx,
                                                const std::vector<double> &w)
        {
            std::array<std::vector<double>, 3> v;
            std::vector<double> ws;
            for (size_t i : idx)
            {
                for (int a = 0; a < 3; ++a)
                    v[a].push_back(axis_value(c[i].pose.orientation, a));
                ws.push_back(w[i]);
            }
            return {circular_mean(v[0], ws), circular_mean(v[1], ws), circular_mean(v[2], ws)};
        }

        inline Position weighted_position(const std::vector<ScoredCandidate> &c, const std::vector<size_t> &idx,
                                          const std::vector<double> &w)
        {
            std::vector<double> xs(c.size()), ys(c.size()), zs(c.size());
            for (size_t i = 0; i < c.size(); ++i)
            {
                xs[i] = c[i].pose.position.x;
                ys[i] = c[i].pose.position.y;
                zs[i] = c[i].pose.position.z;
            }
            return {weighted_mean(idx, xs, w), weighted_mean(idx, ys, w), weighted_mean(idx, zs, w)};
        }

        struct ScoredCluster
        {
            std::vector<size_t> members;
            std::vector<double> centroid;
            double score = 0.0;
        };

        /// Highest final score; earlier clusters win ties.
        inline const ScoredCluster *best(const std::vector<ScoredCluster> &cs)
        {
            const ScoredCluster *b = nullptr;
            for (const auto &c : cs)
                if (!b || c.score > b->score)
                    b = &c;
            return b;
        }
    }

    /// One step of the estimate state machine, given the packet's top-k candidates in
    /// ranking order. On rejection the state keeps its last valid estimate.
    inline PacketOutcome process_ranked(PipelineState &state, double timestamp,
                                        const std::vector<ScoredCandidate> &top, const PipelineConfig &cfg,
                                        Method method = Method::Full)
    {
        PacketOutcome out;
        out.trace.candidates = top.size();
        state.last_packet_time = timestamp;
        if (top.empty())
            return out;

        auto accept = [&](Estimate e) {
            e.timestamp = timestamp;
            e.valid = true;
            out.accepted = true;
            out.estimate = e;
            state.last_valid = e;
            state.last_valid_time = timestamp;
            return out;
        };

        std::vector<double> mse;
        for (const auto &c : top)
            mse.push_back(c.mse);
        const auto w = normalize_weights(mse);

        const bool seeded = state.last_valid.has_value();
        const double dt = seeded ? timestamp - state.last_valid_time : 0.0;
        const bool use_rotation = seeded && dt <= cfg.max_valid_interval &&
                                  (method == Method::Full || method == Method::OrientationOnly);
        const bool use_movement = seeded && (method == Method::Full || method == Method::LocationOnly);
        out.trace.rotation_filter_applied = use_rotation;
        out.trace.movement_filter_applied = use_movement;

        if (method == Method::TopResult)
        {
            out.trace.after_rotation = out.trace.after_movement = out.trace.selected = {0};
            Estimate e;
            e.position = top[0].pose.position;
            e.orientation = top[0].pose.orientation;
            e.score = w[0] * w[0];
            return accept(e);
        }

        // orientation clustering per axis, then the rotation model
        std::vector<char> alive(top.size(), 1);
        std::vector<detail::ScoredCluster> azimuth_clusters;
        if (method != Method::LocationOnly)
        {
            for (int axis = 0; axis < 3; ++axis)
            {
                std::vector<double> v;
                for (const auto &c : top)
                    v.push_back(detail::axis_value(c.pose.orientation, axis));
                const auto cl = cluster_angle_axis(v, w, cfg.orientation_eps, cfg.min_pts);
                for (const auto &c : cl.clusters)
                {
                    bool ok = true;
                    if (use_rotation)
                    {
                        ok = within_allowance(
                            angular_difference(detail::axis_value(state.last_valid->orientation, axis), c.centroid[0]),
                            rotation_allowance(dt, cfg));
                    }
                    if (!ok)
                        for (size_t i : c.members)
                            alive[i] = 0;
                    else if (axis == 0)
                        azimuth_clusters.push_back({c.members, c.centroid, 0.0});
                }
            }
        }
        for (size_t i = 0; i < top.size(); ++i)
            if (alive[i])
                out.trace.after_rotation.push_back(i);

        if (method == Method::OrientationOnly)
        {
            for (auto &c : azimuth_clusters)
            {
                std::vector<size_t> keep;
                for (size_t i : c.members)
                    if (alive[i])
                        keep.push_back(i);
                c.members = keep;
                c.score = keep.empty() ? 0.0 : final_score(keep, w);
            }
            std::erase_if(azimuth_clusters, [](const auto &c) { return c.members.empty(); });
            const auto *b = detail::best(azimuth_clusters);
            out.trace.after_movement = out.trace.after_rotation;
            if (!b)
                return out;
            out.trace.selected = b->members;
            Estimate e;
            e.position = detail::weighted_position(top, b->members, w);
            e.orientation = detail::weighted_orientation(top, b->members, w);
            e.orientation.azimuth = b->centroid[0];
            e.score = b->score;
            return accept(e);
        }

        // position clustering on the survivors, then the movement model
        const auto &survivors = out.trace.after_rotation;
        std::vector<Point2> pts;
        std::vector<double> sw;
        for (size_t i : survivors)
        {
            pts.push_back({top[i].pose.position.x, top[i].pose.position.y});
            sw.push_back(w[i]);
        }
        const auto pcl = cluster_positions(pts, sw, cfg.position_eps, cfg.min_pts);
        std::vector<detail::ScoredCluster> position_clusters;
        for (const auto &c : pcl.clusters)
        {
            detail::ScoredCluster sc;
            for (size_t j : c.members)
                sc.members.push_back(survivors[j]);
            sc.centroid = c.centroid;
            if (use_movement)
            {
                const Position centre{c.centroid[0], c.centroid[1], top[survivors[c.members[0]]].pose.position.z};
                if (!movement_valid(state.last_valid->position, centre, dt, cfg))
                    continue;
            }
            sc.score = final_score(sc.members, w);
            position_clusters.push_back(std::move(sc));
        }
        for (const auto &c : position_clusters)
            out.trace.after_movement.insert(out.trace.after_movement.end(), c.members.begin(), c.members.end());
        std::sort(out.trace.after_movement.begin(), out.trace.after_movement.end());

        if (method == Method::Full && cfg.primary == PrimaryData::Orientation)
        {
            // orientation clusters scored by their members that also survived the movement model
            std::vector<char> moved(top.size(), 0);
            for (size_t i : out.trace.after_movement)
                moved[i] = 1;
            for (auto &c : azimuth_clusters)
            {
                std::vector<size_t> keep;
                for (size_t i : c.members)
                    if (alive[i] && moved[i])
                        keep.push_back(i);
                c.members = keep;
                c.score = keep.empty() ? 0.0 : final_score(keep, w);
            }
            std::erase_if(azimuth_clusters, [](const auto &c) { return c.members.empty(); });
            const auto *b = detail::best(azimuth_clusters);
            if (!b)
                return out;
            out.trace.selected = b->members;
            Estimate e;
            e.position = detail::weighted_position(top, b->members, w);
            e.orientation = detail::weighted_orientation(top, b->members, w);
            e.orientation.azimuth = b->centroid[0];
            e.score = b->score;
            return accept(e);
        }

        const auto *b = detail::best(position_clusters);
        if (!b)
            return out;
        out.trace.selected = b->members;
        Estimate e;
        e.position = {b->centroid[0], b->centroid[1], top[b->members[0]].pose.position.z};
        e.orientation = detail::weighted_orientation(top, b->members, w);
        e.score = b->score;
        return accept(e);
    }

    /// Scores the packet and runs one step of the state machine.
    inline PacketOutcome process_packet(PipelineState &state, const PacketObservation &obs, const ScoringEngine &engine,
                                        const PipelineConfig &cfg, Method method = Method::Full)
    {
        const size_t k = method == Method::TopResult ? 1 : cfg.k;
        return process_ranked(state, obs.timestamp, engine.top_k(obs, k), cfg, method);
    }

    /// Folds process_packet over a time-sorted stream; rejected packets stay in the output.
    inline std::vector<PacketOutcome> run(const std::vector<PacketObservation> &observations,
                                          const ScoringEngine &engine, const PipelineConfig &cfg,
                                          Method method = Method::Full)
    {
        cfg.validate();
        PipelineState state;
        std::vector<PacketOutcome> out;
        double last = -std::numeric_limits<double>::infinity();
        for (const auto &obs : observations)
        {
            if (obs.timestamp < last)
                throw UnsortedInput("observations are not time-sorted");
            last = obs.timestamp;
            try
            {
                out.push_back(process_packet(state, obs, engine, cfg, method));
            }
            catch (const NoUsableReceivers &)
            {
                PacketOutcome rejected;
                state.last_packet_time = obs.timestamp;
                out.push_back(rejected);
            }
        }
        return out;
    }

    inline const std::vector<std::string> estimate_csv_header{"timestamp_s", "x_m",     "y_m",   "z_m",  "azimuth_deg",
                                                              "pitch_deg",   "roll_deg", "score", "valid"};

    inline void write_estimates(const std::filesystem::path &path, const std::vector<double> &timestamps,
                                const std::vector<PacketOutcome> &outcomes)
    {
        std::string s = csv::join(estimate_csv_header) + "\n";
        for (size_t i = 0; i < outcomes.size(); ++i)
        {
            const auto &o = outcomes[i];
            csv::Line l;
            if (o.accepted)
            {
                const auto &e = o.estimate;
                l << e.timestamp << e.position.x << e.position.y << e.position.z << e.orientation.azimuth
                  << e.orientation.pitch << e.orientation.roll << e.score << 1;
            }
            else
            {
                l << timestamps[i] << "" << "" << "" << "" << "" << "" << "" << 0;
            }
            s += l.str() + "\n";
        }
        csv::write_atomic(path, s);
    }
}

#endif
