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

#ifndef RADLOC_SIMULATOR_HPP
#define RADLOC_SIMULATOR_HPP

#include "csv.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "packet_sync.hpp"
#include "pipeline.hpp"
#include "random.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

namespace radloc
{
    enum class RotationMode
    {
        Linear,
        Periodic
    };

    /// Straight-line walk along waypoints at constant speed, reversing at the ends,
    /// with a linear or sinusoidal azimuth schedule.
    struct Trajectory
    {
        std::vector<Position> waypoints;
        double speed = 1.0;
        RotationMode rotation = RotationMode::Linear;
        double start_azimuth = 0.0;
        double rotation_rate = 30.0;      ///< deg/s (linear)
        double rotation_amplitude = 45.0; ///< deg (periodic)
        double rotation_period = 4.0;     ///< s (periodic)
        double packet_interval = 0.005;
        size_t packets = 2000;

        void validate() const
        {
            if (waypoints.empty())
                throw Error("trajectory needs at least one waypoint");
            if (speed < 0.0 || speed > 10.0)
                throw Error("trajectory speed must lie in [0, 10] m/s");
            if (!(packet_interval > 0.0))
                throw Error("packet interval must be positive");
            if (rotation == RotationMode::Periodic && !(rotation_period > 0.0))
                throw Error("rotation period must be positive");
        }

        double length() const
        {
            double l = 0.0;
            for (size_t i = 1; i < waypoints.size(); ++i)
                l += distance(waypoints[i - 1], waypoints[i]);
            return l;
        }

        /// Peak azimuth rate in deg/s.
        double peak_rotation_rate() const
        {
            return rotation == RotationMode::Linear
                       ? std::abs(rotation_rate)
                       : std::abs(rotation_amplitude) * 2.0 * std::numbers::pi / rotation_period;
        }

        Pose pose_at(double t) const
        {
            Position p = waypoints.front();
            const double total = length();
            if (total > 0.0)
            {
                double s = std::fmod(speed * t, 2.0 * total);
                if (s > total)
                    s = 2.0 * total - s;
                for (size_t i = 1; i < waypoints.size(); ++i)
                {
                    const double seg = distance(waypoints[i - 1], waypoints[i]);
                    if (s <= seg || i + 1 == waypoints.size())
                    {
                        const double f = seg > 0.0 ? std::min(1.0, s / seg) : 0.0;
                        const auto &a = waypoints[i - 1];
                        const auto &b = waypoints[i];
                        p = {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), a.z + f * (b.z - a.z)};
                        break;
                    }
                    s -= seg;
                }
            }
            const double az = rotation == RotationMode::Linear
                                  ? start_azimuth + rotation_rate * t
                                  : start_azimuth + rotation_amplitude * std::sin(2.0 * std::numbers::pi * t / rotation_period);
            return Pose(p, Orientation{az, 0.0, 0.0});
        }
    };

    struct NoiseModel
    {
        double sigma_db = 0.0;
        /// Receiver clock error, uniform in [-jitter, jitter] seconds.
        double clock_jitter_s = 0.0005;
    };

    struct TruthSample
    {
        std::uint64_t key = 0;
        double timestamp = 0.0;
        Pose pose;
    };

    struct SimulatedRun
    {
        std::vector<TruthSample> truth;
        std::vector<std::vector<ReceiverRecord>> streams; ///< one per receiver, time-sorted
    };

    /// Noisy per-receiver RSS records for every packet of the trajectory. Each receiver
    /// draws from its own seeded substream.
    inline SimulatedRun simulate_run(const Environment &env, const Trajectory &traj, const RadiationPattern &pattern,
                                     double tx_power_dbm, const NoiseModel &noise, std::uint64_t seed)
    {
        env.validate();
        traj.validate();
        if (noise.sigma_db < 0.0)
            throw Error("noise sigma must be non-negative");
        if (noise.clock_jitter_s * 2.0 >= traj.packet_interval)
            throw Error("clock jitter must stay below half the packet interval");
        SimulatedRun run;
        run.streams.resize(env.receivers.size());
        std::vector<Rng> noise_rng, clock_rng;
        for (size_t r = 0; r < env.receivers.size(); ++r)
        {
            noise_rng.emplace_back(derive_seed(seed, {1, r}));
            clock_rng.emplace_back(derive_seed(seed, {2, r}));
        }
        for (size_t i = 0; i < traj.packets; ++i)
        {
            const double t = static_cast<double>(i) * traj.packet_interval;
            const Pose pose = traj.pose_at(t);
            run.truth.push_back({i, t, pose});
            const PacketHash hash = synthetic_hash(i);
            for (size_t r = 0; r < env.receivers.size(); ++r)
            {
                const auto &rx = env.receivers[r];
                const double n = noise_rng[r].normal(0.0, 1.0) * noise.sigma_db;
                const double jitter = clock_rng[r].uniform(-noise.clock_jitter_s, noise.clock_jitter_s);
                if (detail::same_position(pose.position, rx.pose.position))
                    continue;
                const double rss = received_power(pose, pattern, tx_power_dbm, rx, env.path_loss) + n;
                if (rss < env.sensitivity_dbm)
                    continue;
                run.streams[r].push_back({rx.id, hash, t + jitter, rss});
            }
        }
        return run;
    }

    inline const std::vector<std::string> truth_csv_header{"timestamp_s", "x_m", "y_m", "azimuth_deg"};

    inline void write_truth(const std::filesystem::path &path, const std::vector<TruthSample> &truth)
    {
        std::string s = csv::join(truth_csv_header) + "\n";
        for (const auto &t : truth)
            s += (csv::Line() << t.timestamp << t.pose.position.x << t.pose.position.y << t.pose.orientation.azimuth)
                     .str() +
                 "\n";
        csv::write_atomic(path, s);
    }

    struct LmsResult
    {
        Position position;
        double cost = 0.0;
        bool converged = true;
        bool ambiguous = false; ///< another start reached an equally good, distinct solution
    };

    namespace detail
    {
        struct PathLossResiduals : Eigen::DenseFunctor<double>
        {
            PathLossResiduals(std::vector<Position> rx, std::vector<double> rss, double tx_power,
                              PathLossModel model)
                : Eigen::DenseFunctor<double>(2, static_cast<int>(std::max<size_t>(rx.size(), 2))),
                  rx(std::move(rx)), rss(std::move(rss)), tx_power(tx_power), model(model)
            {
            }

            std::vector<Position> rx;
            std::vector<double> rss;
            double tx_power;
            PathLossModel model;
            static constexpr double min_distance = 0.01;

            int operator()(const InputType &x, ValueType &f) const
            {
                f.setZero(values());
                for (size_t i = 0; i < rx.size(); ++i)
                {
                    const double d = std::max(min_distance, std::hypot(x[0] - rx[i].x, x[1] - rx[i].y));
                    f[static_cast<Eigen::Index>(i)] = rss[i] - (tx_power - path_loss(d, model));
                }
                return 0;
            }

            int df(const InputType &x, JacobianType &j) const
            {
                j.setZero(values(), 2);
                const double k = 10.0 * model.exponent / std::log(10.0);
                for (size_t i = 0; i < rx.size(); ++i)
                {
                    const double dx = x[0] - rx[i].x, dy = x[1] - rx[i].y;
                    const double d2 = std::max(min_distance * min_distance, dx * dx + dy * dy);
                    // residual = rss - P + PL(d); dPL/dx = k * dx / d^2
                    j(static_cast<Eigen::Index>(i), 0) = k * dx / d2;
                    j(static_cast<Eigen::Index>(i), 1) = k * dy / d2;
                }
                return 0;
            }
        };
    }

    /// Orientation-blind least-squares position fit of the log-distance model, started
    /// from a 3x3 grid of seeds over the area.
    inline LmsResult lms_baseline(const PacketObservation &obs, const std::vector<Receiver> &receivers,
                                  const PathLossModel &model, double tx_power_dbm, double extent_x, double extent_y,
                                  double z = 0.0)
    {
        std::vector<Position> rx;
        std::vector<double> rss;
        for (const auto &r : receivers)
        {
            auto it = obs.samples.find(r.id);
            if (it == obs.samples.end())
                continue;
            rx.push_back(r.pose.position);
            rss.push_back(it->second);
        }
        if (rx.empty())
            throw NoUsableReceivers();
        detail::PathLossResiduals f(rx, rss, tx_power_dbm, model);

        struct Fit
        {
            Eigen::VectorXd x;
            double cost;
            bool converged;
        };
        std::vector<Fit> fits;
        for (int sy = 0; sy < 3; ++sy)
            for (int sx = 0; sx < 3; ++sx)
            {
                Eigen::VectorXd x(2);
                x << extent_x * (sx + 0.5) / 3.0, extent_y * (sy + 0.5) / 3.0;
                Eigen::LevenbergMarquardt<detail::PathLossResiduals> lm(f);
                lm.setMaxfev(200);
                const auto status = lm.minimize(x);
                Eigen::VectorXd res(f.values());
                f(x, res);
                fits.push_back({x, res.squaredNorm(), status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                                                          status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters});
            }
        size_t best = 0;
        for (size_t i = 1; i < fits.size(); ++i)
            if (fits[i].cost < fits[best].cost)
                best = i;
        LmsResult out;
        out.position = {std::clamp(fits[best].x[0], 0.0, extent_x), std::clamp(fits[best].x[1], 0.0, extent_y), z};
        out.cost = fits[best].cost;
        out.converged = fits[best].converged;
        const double tol = 1e-6 * (1.0 + fits[best].cost);
        for (const auto &fit : fits)
            if (fit.cost <= fits[best].cost + tol && (fit.x - fits[best].x).norm() > 0.5)
                out.ambiguous = true;
        if (rx.size() < 3)
            out.ambiguous = true;
        return out;
    }

    /// Rank-1 candidate, no clustering or models.
    inline Estimate top_result_baseline(const std::vector<ScoredCandidate> &ranked)
    {
        if (ranked.empty())
            throw EmptyInput("top-result baseline needs a non-empty ranking");
        Estimate e;
        e.position = ranked.front().pose.position;
        e.orientation = ranked.front().pose.orientation;
        e.score = 1.0;
        return e;
    }

    /// An estimate (or rejection) tagged with the packet it belongs to.
    struct KeyedEstimate
    {
        std::uint64_t key = 0;
        bool accepted = false;
        Estimate estimate;
    };

    struct Metrics
    {
        double mean_position_error = 0.0;    ///< m
        double mean_orientation_error = 0.0; ///< deg, azimuth
        double mean_pitch_error = 0.0;
        double mean_roll_error = 0.0;
        size_t emitted = 0;
        size_t rejected = 0;
        /// Errors of the most recent accepted estimate at every packet after the first acceptance.
        double tracking_position_error = 0.0;
        double tracking_orientation_error = 0.0;
        size_t tracked = 0;

        double rejection_rate() const
        {
            const size_t n = emitted + rejected;
            return n ? static_cast<double>(rejected) / static_cast<double>(n) : 0.0;
        }
    };

    /// Mean errors over emitted estimates; rejected packets are counted separately.
    /// Tracking errors hold the last accepted estimate through rejections (estimates in time order).
    inline Metrics evaluate(const std::vector<TruthSample> &truth, const std::vector<KeyedEstimate> &estimates)
    {
        const Estimate *held = nullptr;
        double tp = 0.0, ta = 0.0;
        std::map<std::uint64_t, const TruthSample *> by_key;
        for (const auto &t : truth)
            by_key[t.key] = &t;
        Metrics m;
        double sp = 0.0, sa = 0.0, spi = 0.0, sr = 0.0;
        for (const auto &e : estimates)
        {
            auto it = by_key.find(e.key);
            if (it == by_key.end())
                throw MisalignedStreams("estimate for packet " + std::to_string(e.key) + " has no ground truth");
            const Pose &p = it->second->pose;
            if (e.accepted)
                held = &e.estimate;
            if (held)
            {
                tp += distance(p.position, held->position);
                ta += angular_difference(p.orientation.azimuth, held->orientation.azimuth);
                ++m.tracked;
            }
            if (!e.accepted)
            {
                ++m.rejected;
                continue;
            }
            sp += distance(p.position, e.estimate.position);
            sa += angular_difference(p.orientation.azimuth, e.estimate.orientation.azimuth);
            spi += angular_difference(p.orientation.pitch, e.estimate.orientation.pitch);
            sr += angular_difference(p.orientation.roll, e.estimate.orientation.roll);
            ++m.emitted;
        }
        if (m.emitted)
        {
            const double n = static_cast<double>(m.emitted);
            m.mean_position_error = sp / n;
            m.mean_orientation_error = sa / n;
            m.mean_pitch_error = spi / n;
            m.mean_roll_error = sr / n;
        }
        if (m.tracked)
        {
            m.tracking_position_error = tp / static_cast<double>(m.tracked);
            m.tracking_orientation_error = ta / static_cast<double>(m.tracked);
        }
        return m;
    }

    /// Percentage reduction of `value` relative to `baseline`.
    inline double reduction_pct(double value, double baseline)
    {
        return baseline > 0.0 ? 100.0 * (baseline - value) / baseline : 0.0;
    }

    struct MeanCi
    {
        double mean = 0.0;
        double half_width = 0.0; ///< 95% normal-approximation half width
        size_t n = 0;
    };

    inline MeanCi mean_ci(const std::vector<double> &v)
    {
        MeanCi r;
        r.n = v.size();
        if (v.empty())
            return r;
        for (double x : v)
            r.mean += x;
        r.mean /= static_cast<double>(v.size());
        if (v.size() > 1)
        {
            double s = 0.0;
            for (double x : v)
                s += (x - r.mean) * (x - r.mean);
            r.half_width = 1.96 * std::sqrt(s / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
        }
        return r;
    }
}

#endif
