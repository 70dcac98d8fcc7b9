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

#ifndef RADLOC_EXPERIMENT_HPP
#define RADLOC_EXPERIMENT_HPP

#include "config.hpp"
#include "csv.hpp"
#include "environment.hpp"
#include "packet_sync.hpp"
#include "pattern_io.hpp"
#include "pipeline.hpp"
#include "scoring.hpp"
#include "simulator.hpp"
#include "survey.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace radloc
{
    /// Receiver database CSV; pattern_file is resolved relative to the CSV, empty means isotropic.
    inline std::vector<Receiver> read_receivers(const std::filesystem::path &path)
    {
        const auto table = csv::read(path, receiver_csv_header);
        std::map<std::filesystem::path, PatternPtr> cache;
        std::vector<Receiver> out;
        for (const auto &row : table.rows)
        {
            if (row.fields.size() != receiver_csv_header.size())
                throw ConfigError(table.source, row.line, "expected 8 fields");
            Receiver r;
            r.id = row.fields[0];
            if (r.id.empty())
                throw ConfigError(table.source, row.line, "empty receiver id");
            r.pose = Pose(table.number(row, 1), table.number(row, 2), table.number(row, 3), table.number(row, 4),
                          table.number(row, 5), table.number(row, 6));
            if (!row.fields[7].empty())
            {
                auto p = path.parent_path() / row.fields[7];
                auto it = cache.find(p);
                if (it == cache.end())
                    it = cache.emplace(p, make_pattern(read_pattern(p))).first;
                r.pattern = it->second;
            }
            out.push_back(std::move(r));
        }
        return out;
    }

    /// Everything needed to simulate and localise one run.
    struct Scenario
    {
        std::string name;
        Environment env; ///< all receivers of the database; `receiver_count` of them are used
        size_t receiver_count = 4;
        PatternPtr device;
        double tx_power_dbm = 15.0;
        PatternPtr survey_tx;
        SurveyOptions survey;
        double grid_step = 0.1;
        double orientation_step = 1.0;
        Trajectory trajectory;
        NoiseModel noise;
        double sync_tolerance = 0.005;
        PipelineConfig pipeline;
        std::uint64_t seed = 1;

        Environment active_environment() const
        {
            Environment e = env;
            if (receiver_count > e.receivers.size())
                throw Error("scenario '" + name + "' has only " + std::to_string(e.receivers.size()) + " receivers");
            e.receivers.resize(receiver_count);
            return e;
        }
    };

    inline PipelineConfig read_pipeline_config(const Config &c, PipelineConfig p = {})
    {
        p.k = static_cast<size_t>(c.get_int("k", static_cast<long>(p.k)));
        p.rotation_limit_deg = c.get_double("rotation_limit_deg", p.rotation_limit_deg);
        p.t = c.get_double("rotation_window_s", p.t);
        p.max_valid_interval = c.get_double("max_valid_interval_s", p.t / 2.0);
        p.max_speed = c.get_double("max_speed", p.max_speed);
        p.orientation_eps = c.get_double("orientation_eps", p.orientation_eps);
        p.position_eps = c.get_double("position_eps", p.position_eps);
        p.min_pts = static_cast<size_t>(c.get_int("min_pts", static_cast<long>(p.min_pts)));
        const auto primary = c.get_string("primary", "position");
        if (primary == "position")
            p.primary = PrimaryData::Position;
        else if (primary == "orientation")
            p.primary = PrimaryData::Orientation;
        else
            throw ConfigError(c.source(), c.line_of("primary"), "primary must be 'position' or 'orientation'");
        try
        {
            p.validate();
        }
        catch (const Error &e)
        {
            throw ConfigError(c.source(), 0, e.what());
        }
        return p;
    }

    inline Scenario load_scenario(const Config &c)
    {
        Scenario s;
        s.name = c.get_string("name", std::filesystem::path(c.source()).stem().string());
        s.env.extent_x = c.get_double("extent_x", 20.0);
        s.env.extent_y = c.get_double("extent_y", 20.0);
        s.env.z = c.get_double("height", 0.0);
        s.env.path_loss.exponent = c.get_double("path_loss_exponent", 2.2);
        s.env.path_loss.reference_loss_db = c.get_double("reference_loss_db", 40.0);
        s.env.path_loss.reference_distance_m = c.get_double("reference_distance_m", 1.0);
        s.env.sensitivity_dbm = c.get_double("sensitivity_dbm", -95.0);
        s.env.receivers = read_receivers(c.get_path("receivers"));
        s.receiver_count = static_cast<size_t>(c.get_int("receiver_count", 4));

        PatternMeta meta;
        s.device = make_pattern(read_pattern(c.get_path("device_pattern"), &meta));
        s.tx_power_dbm = c.get_double("tx_power_dbm", meta.tx_power_dbm);
        const auto survey_pattern = c.get_path("survey_pattern");
        s.survey_tx = make_pattern(survey_pattern.empty() ? RadiationPattern::isotropic() : read_pattern(survey_pattern));
        s.survey.spacing = c.get_double("survey_spacing", 1.0);
        s.survey.tx_power_dbm = c.get_double("survey_tx_power_dbm", 15.0);
        s.survey.sigma_db = c.get_double("survey_sigma", 0.0);
        s.grid_step = c.get_double("grid_step", 0.1);
        s.orientation_step = c.get_double("orientation_step", 1.0);

        auto &t = s.trajectory;
        const auto xs = c.get_doubles("waypoints_x", {5.0, 15.0});
        const auto ys = c.get_doubles("waypoints_y", {5.0, 15.0});
        if (xs.size() != ys.size() || xs.empty())
            throw ConfigError(c.source(), c.line_of("waypoints_y"), "waypoints_x and waypoints_y differ in length");
        for (size_t i = 0; i < xs.size(); ++i)
            t.waypoints.push_back({xs[i], ys[i], s.env.z});
        t.speed = c.get_double("speed", 1.0);
        t.start_azimuth = c.get_double("start_azimuth", 0.0);
        const auto mode = c.get_string("rotation", "linear");
        if (mode == "linear")
            t.rotation = RotationMode::Linear;
        else if (mode == "periodic")
            t.rotation = RotationMode::Periodic;
        else
            throw ConfigError(c.source(), c.line_of("rotation"), "rotation must be 'linear' or 'periodic'");
        t.rotation_rate = c.get_double("rotation_rate", 30.0);
        t.rotation_amplitude = c.get_double("rotation_amplitude", 45.0);
        t.rotation_period = c.get_double("rotation_period", 4.0);
        t.packet_interval = c.get_double("packet_interval", 0.005);
        t.packets = static_cast<size_t>(c.get_int("packets", 2000));

        s.noise.sigma_db = c.get_double("sigma", 0.5);
        s.noise.clock_jitter_s = c.get_double("clock_jitter", 0.0005);
        s.sync_tolerance = c.get_double("sync_tolerance", 0.005);
        s.seed = static_cast<std::uint64_t>(c.get_int("seed", 1));
        s.pipeline = read_pipeline_config(c);
        c.reject_unknown();

        try
        {
            s.env.validate();
            s.active_environment();
            t.validate();
            for (const auto &w : t.waypoints)
                if (!s.env.contains(w))
                    throw Error("waypoint outside the environment");
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (const Error &e)
        {
            throw ConfigError(c.source(), 0, e.what());
        }
        return s;
    }

    inline Scenario load_scenario(const std::filesystem::path &path) { return load_scenario(Config::load(path)); }

    /// Survey, candidate grid and scoring engine for one scenario's active receivers.
    struct SceneModel
    {
        Environment env;
        SiteSurvey survey;
        std::shared_ptr<const CandidateGrid> grid;
        std::shared_ptr<const ScoringEngine> engine;
    };

    inline SceneModel build_scene(const Scenario &s, const PatternPtr &device = nullptr, double tx_power = NAN)
    {
        SceneModel m;
        m.env = s.active_environment();
        m.survey = generate_survey(m.env, *s.survey_tx, s.survey);
        m.grid = std::make_shared<const CandidateGrid>(interpolate(m.survey, s.grid_step, m.env.z));
        m.engine = std::make_shared<const ScoringEngine>(CandidatePoseSpace::planar(m.grid, s.orientation_step),
                                                         m.env.receivers, device ? device : s.device,
                                                         std::isnan(tx_power) ? s.tx_power_dbm : tx_power);
        return m;
    }

    inline const std::vector<Method> &all_methods()
    {
        static const std::vector<Method> m{Method::Full, Method::LocationOnly, Method::OrientationOnly,
                                           Method::TopResult, Method::Lms};
        return m;
    }

    struct RunResult
    {
        std::map<Method, Metrics> metrics;
        std::map<Method, std::vector<KeyedEstimate>> estimates;
        std::vector<TruthSample> truth;
        size_t ambiguous_records = 0;
    };

    /// Simulates one run and localises every packet with each requested method. The
    /// pipeline methods share one top-k scoring pass per packet.
    inline RunResult run_methods(const Scenario &s, const SceneModel &scene, std::uint64_t seed,
                                 const std::vector<Method> &methods, bool keep_estimates = false)
    {
        const auto sim = simulate_run(scene.env, s.trajectory, *s.device, s.tx_power_dbm, s.noise, seed);
        const auto matched = match_packets(sim.streams, s.sync_tolerance);
        std::map<PacketHash, std::uint64_t> key_of;
        for (const auto &t : sim.truth)
            key_of[synthetic_hash(t.key)] = t.key;

        bool need_top = false;
        for (Method m : methods)
            need_top = need_top || m != Method::Lms;

        std::map<Method, PipelineState> states;
        std::map<Method, std::vector<KeyedEstimate>> est;
        for (const auto &obs : matched.observations)
        {
            const std::uint64_t key = key_of.at(obs.key);
            std::vector<ScoredCandidate> top;
            bool usable = true;
            if (need_top)
            {
                try
                {
                    top = scene.engine->top_k(obs, s.pipeline.k);
                }
                catch (const NoUsableReceivers &)
                {
                    usable = false;
                }
            }
            for (Method m : methods)
            {
                KeyedEstimate ke;
                ke.key = key;
                if (m == Method::Lms)
                {
                    try
                    {
                        const auto r = lms_baseline(obs, scene.env.receivers, scene.env.path_loss, s.tx_power_dbm,
                                                    scene.env.extent_x, scene.env.extent_y, scene.env.z);
                        ke.accepted = true;
                        ke.estimate.timestamp = obs.timestamp;
                        ke.estimate.position = r.position;
                        ke.estimate.orientation = {NAN, NAN, NAN};
                    }
                    catch (const NoUsableReceivers &)
                    {
                    }
                }
                else if (usable)
                {
                    const auto o = process_ranked(states[m], obs.timestamp, top, s.pipeline, m);
                    ke.accepted = o.accepted;
                    ke.estimate = o.estimate;
                }
                est[m].push_back(ke);
            }
        }

        RunResult r;
        r.ambiguous_records = matched.ambiguous.size();
        for (Method m : methods)
            r.metrics[m] = evaluate(sim.truth, est[m]);
        if (keep_estimates)
        {
            r.estimates = std::move(est);
            r.truth = sim.truth;
        }
        return r;
    }

    /// Runs f(0..n-1) on up to `jobs` threads; results must be written to per-index slots.
    inline void parallel_for(size_t n, unsigned jobs, const std::function<void(size_t)> &f)
    {
        jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<size_t>(n, 1))));
        if (jobs == 1)
        {
            for (size_t i = 0; i < n; ++i)
                f(i);
            return;
        }
        std::atomic<size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (size_t i = next++; i < n; i = next++)
                {
                    try
                    {
                        f(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                    }
                }
            });
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    /// Cartesian sweep over noise, receiver count and packet interval, with `repetitions`
    /// runs per cell. Repetition r uses scenario r mod N and seed seed_base + r in every
    /// cell, so cells differ only in the swept parameter.
    struct ExperimentSpec
    {
        std::vector<std::filesystem::path> scenarios;
        std::vector<Method> methods = all_methods();
        std::vector<double> sigmas;             ///< empty: scenario value
        std::vector<size_t> receiver_counts;    ///< empty: scenario value
        std::vector<double> packet_intervals;   ///< empty: scenario value
        size_t repetitions = 10;
        std::uint64_t seed_base = 1000;
        long packets = -1;                      ///< overrides the scenario when positive
        double rotation_rate = NAN;             ///< when set, every scenario rotates linearly at this rate
        std::filesystem::path output_dir;
    };

    inline ExperimentSpec load_experiment(const Config &c)
    {
        ExperimentSpec e;
        for (const auto &s : c.get_strings("scenarios", {}))
        {
            std::filesystem::path p = s;
            e.scenarios.push_back(p.is_absolute() ? p : c.base_dir() / p);
        }
        if (e.scenarios.empty())
            throw ConfigError(c.source(), c.line_of("scenarios"), "at least one scenario is required");
        if (c.has("methods"))
        {
            e.methods.clear();
            for (const auto &m : c.get_strings("methods", {}))
            {
                try
                {
                    e.methods.push_back(parse_method(m));
                }
                catch (const Error &err)
                {
                    throw ConfigError(c.source(), c.line_of("methods"), err.what());
                }
            }
            if (e.methods.empty())
                throw ConfigError(c.source(), c.line_of("methods"), "methods must not be empty");
        }
        e.sigmas = c.get_doubles("sigma", {});
        for (double r : c.get_doubles("receivers", {}))
            e.receiver_counts.push_back(static_cast<size_t>(r));
        e.packet_intervals = c.get_doubles("packet_interval", {});
        e.repetitions = static_cast<size_t>(c.get_int("repetitions", 10));
        if (e.repetitions < 1)
            throw ConfigError(c.source(), c.line_of("repetitions"), "repetitions must be at least 1");
        e.seed_base = static_cast<std::uint64_t>(c.get_int("seed", 1000));
        e.packets = c.get_int("packets", -1);
        e.rotation_rate = c.get_double("rotation_rate", NAN);
        e.output_dir = c.get_path("output", "");
        c.reject_unknown();
        return e;
    }

    struct MetricsRow
    {
        double sigma = 0.0;
        size_t receivers = 0;
        double packet_interval = 0.0;
        Method method = Method::Full;
        size_t repetition = 0;
        std::string scenario;
        std::uint64_t seed = 0;
        Metrics metrics;
        double reduction_vs_lms = NAN;
        double reduction_vs_top = NAN;
    };

    struct SummaryRow
    {
        double sigma = 0.0;
        size_t receivers = 0;
        double packet_interval = 0.0;
        Method method = Method::Full;
        MeanCi position;
        MeanCi orientation;
        MeanCi tracking_position;
        MeanCi tracking_orientation;
        double rejection_rate = 0.0;
        double reduction_vs_lms = NAN;
        double reduction_vs_top = NAN;
    };

    struct ExperimentResult
    {
        std::vector<MetricsRow> rows;
        std::vector<SummaryRow> summary;

        const SummaryRow &find(double sigma, size_t receivers, double interval, Method m) const
        {
            for (const auto &s : summary)
                if (s.sigma == sigma && s.receivers == receivers && s.packet_interval == interval && s.method == m)
                    return s;
            throw Error("no summary row for the requested cell");
        }

        std::vector<double> per_repetition(double sigma, size_t receivers, double interval, Method m,
                                           bool orientation = false) const
        {
            std::vector<double> v;
            for (const auto &r : rows)
                if (r.sigma == sigma && r.receivers == receivers && r.packet_interval == interval && r.method == m)
                    v.push_back(orientation ? r.metrics.mean_orientation_error : r.metrics.mean_position_error);
            return v;
        }
    };

    inline ExperimentResult run_experiment(const ExperimentSpec &spec, unsigned jobs = 1,
                                           const std::function<void(const std::string &)> &progress = {})
    {
        std::vector<Scenario> scenarios;
        for (const auto &p : spec.scenarios)
        {
            auto s = load_scenario(p);
            if (spec.packets > 0)
                s.trajectory.packets = static_cast<size_t>(spec.packets);
            if (!std::isnan(spec.rotation_rate))
            {
                s.trajectory.rotation = RotationMode::Linear;
                s.trajectory.rotation_rate = spec.rotation_rate;
            }
            scenarios.push_back(std::move(s));
        }
        auto or_default = [](const auto &v, auto d) { return v.empty() ? std::vector<decltype(d)>{d} : v; };

        struct Cell
        {
            double sigma;
            size_t receivers;
            double interval;
            size_t rep;
        };
        std::vector<Cell> cells;
        const auto &base = scenarios.front();
        for (double sg : or_default(spec.sigmas, base.noise.sigma_db))
            for (size_t rc : or_default(spec.receiver_counts, base.receiver_count))
                for (double iv : or_default(spec.packet_intervals, base.trajectory.packet_interval))
                    for (size_t r = 0; r < spec.repetitions; ++r)
                        cells.push_back({sg, rc, iv, r});

        // engines depend only on (scenario, receiver count)
        std::map<std::pair<size_t, size_t>, std::shared_ptr<SceneModel>> scenes;
        std::mutex scene_mutex;
        auto scene_for = [&](size_t si, size_t rc) {
            std::lock_guard lock(scene_mutex);
            auto &slot = scenes[{si, rc}];
            if (!slot)
            {
                Scenario s = scenarios[si];
                s.receiver_count = rc;
                slot = std::make_shared<SceneModel>(build_scene(s));
            }
            return slot;
        };

        std::vector<RunResult> results(cells.size());
        std::mutex progress_mutex;
        parallel_for(cells.size(), jobs, [&](size_t i) {
            const auto &cell = cells[i];
            const size_t si = cell.rep % scenarios.size();
            Scenario s = scenarios[si];
            s.receiver_count = cell.receivers;
            s.noise.sigma_db = cell.sigma;
            s.trajectory.packet_interval = cell.interval;
            if (s.noise.clock_jitter_s * 2.0 >= cell.interval)
                s.noise.clock_jitter_s = cell.interval / 4.0;
            const auto scene = scene_for(si, cell.receivers);
            results[i] = run_methods(s, *scene, spec.seed_base + cell.rep, spec.methods);
            if (progress)
            {
                std::lock_guard lock(progress_mutex);
                progress("cell " + std::to_string(i + 1) + "/" + std::to_string(cells.size()));
            }
        });

        ExperimentResult out;
        for (size_t i = 0; i < cells.size(); ++i)
        {
            const auto &cell = cells[i];
            const auto &res = results[i];
            for (Method m : spec.methods)
            {
                MetricsRow row;
                row.sigma = cell.sigma;
                row.receivers = cell.receivers;
                row.packet_interval = cell.interval;
                row.method = m;
                row.repetition = cell.rep;
                row.scenario = scenarios[cell.rep % scenarios.size()].name;
                row.seed = spec.seed_base + cell.rep;
                row.metrics = res.metrics.at(m);
                if (res.metrics.count(Method::Lms))
                    row.reduction_vs_lms = reduction_pct(row.metrics.mean_position_error,
                                                         res.metrics.at(Method::Lms).mean_position_error);
                if (res.metrics.count(Method::TopResult))
                    row.reduction_vs_top = reduction_pct(row.metrics.mean_position_error,
                                                         res.metrics.at(Method::TopResult).mean_position_error);
                out.rows.push_back(row);
            }
        }

        for (double sg : or_default(spec.sigmas, base.noise.sigma_db))
            for (size_t rc : or_default(spec.receiver_counts, base.receiver_count))
                for (double iv : or_default(spec.packet_intervals, base.trajectory.packet_interval))
                    for (Method m : spec.methods)
                    {
                        SummaryRow s;
                        s.sigma = sg;
                        s.receivers = rc;
                        s.packet_interval = iv;
                        s.method = m;
                        std::vector<double> pos, ori, tpos, tori;
                        size_t emitted = 0, rejected = 0;
                        for (const auto &r : out.rows)
                            if (r.sigma == sg && r.receivers == rc && r.packet_interval == iv && r.method == m)
                            {
                                pos.push_back(r.metrics.mean_position_error);
                                ori.push_back(r.metrics.mean_orientation_error);
                                tpos.push_back(r.metrics.tracking_position_error);
                                tori.push_back(r.metrics.tracking_orientation_error);
                                emitted += r.metrics.emitted;
                                rejected += r.metrics.rejected;
                            }
                        s.position = mean_ci(pos);
                        s.orientation = mean_ci(ori);
                        s.tracking_position = mean_ci(tpos);
                        s.tracking_orientation = mean_ci(tori);
                        s.rejection_rate = emitted + rejected ? static_cast<double>(rejected) / (emitted + rejected) : 0.0;
                        out.summary.push_back(s);
                    }
        for (auto &s : out.summary)
        {
            for (const auto &o : out.summary)
                if (o.sigma == s.sigma && o.receivers == s.receivers && o.packet_interval == s.packet_interval)
                {
                    if (o.method == Method::Lms)
                        s.reduction_vs_lms = reduction_pct(s.position.mean, o.position.mean);
                    if (o.method == Method::TopResult)
                        s.reduction_vs_top = reduction_pct(s.position.mean, o.position.mean);
                }
        }
        return out;
    }

    inline constexpr int metrics_schema_version = 1;

    inline const std::vector<std::string> metrics_csv_header{
        "sigma_db",          "receivers",          "packet_interval_s",
        "method",            "repetition",         "scenario",
        "seed",              "mean_position_error_m", "mean_orientation_error_deg",
        "mean_pitch_error_deg", "mean_roll_error_deg", "emitted",
        "rejected",          "position_reduction_vs_lms_pct", "position_reduction_vs_top_pct",
        "tracking_position_error_m", "tracking_orientation_error_deg"};

    inline const std::vector<std::string> summary_csv_header{
        "sigma_db",  "receivers",          "packet_interval_s",          "method",
        "n",         "position_error_mean_m", "position_error_ci95_m", "orientation_error_mean_deg",
        "orientation_error_ci95_deg", "rejection_rate", "position_reduction_vs_lms_pct",
        "position_reduction_vs_top_pct", "tracking_position_error_mean_m", "tracking_position_error_ci95_m",
        "tracking_orientation_error_mean_deg", "tracking_orientation_error_ci95_deg"};

    inline std::string schema_line(const ExperimentSpec &spec)
    {
        return "# schema radloc-metrics " + std::to_string(metrics_schema_version) +
               "; seeds " + std::to_string(spec.seed_base) + ".." +
               std::to_string(spec.seed_base + spec.repetitions - 1) + "\n";
    }

    inline void write_experiment(const std::filesystem::path &dir, const ExperimentSpec &spec,
                                 const ExperimentResult &res)
    {
        std::string m = schema_line(spec) + csv::join(metrics_csv_header) + "\n";
        for (const auto &r : res.rows)
            m += (csv::Line() << r.sigma << r.receivers << r.packet_interval << method_name(r.method) << r.repetition
                              << r.scenario << static_cast<unsigned long>(r.seed) << r.metrics.mean_position_error
                              << r.metrics.mean_orientation_error << r.metrics.mean_pitch_error
                              << r.metrics.mean_roll_error << r.metrics.emitted << r.metrics.rejected
                              << r.reduction_vs_lms << r.reduction_vs_top << r.metrics.tracking_position_error
                              << r.metrics.tracking_orientation_error)
                     .str() +
                 "\n";
        csv::write_atomic(dir / "metrics.csv", m);

        std::string s = schema_line(spec) + csv::join(summary_csv_header) + "\n";
        for (const auto &r : res.summary)
            s += (csv::Line() << r.sigma << r.receivers << r.packet_interval << method_name(r.method) << r.position.n
                              << r.position.mean << r.position.half_width << r.orientation.mean
                              << r.orientation.half_width << r.rejection_rate << r.reduction_vs_lms
                              << r.reduction_vs_top << r.tracking_position.mean << r.tracking_position.half_width
                              << r.tracking_orientation.mean << r.tracking_orientation.half_width)
                     .str() +
                 "\n";
        csv::write_atomic(dir / "summary.csv", s);
    }
}

#endif
