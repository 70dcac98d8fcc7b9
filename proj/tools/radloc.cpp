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

#include "radloc/radloc.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <thread>

using namespace radloc;

namespace
{
    struct Common
    {
        std::string config;
        std::string out;
        long seed = -1;
        unsigned jobs = 1;
    };

    void add_common(CLI::App *cmd, Common &c, bool need_config = true)
    {
        auto *opt = cmd->add_option("--config", c.config, "configuration file");
        if (need_config)
            opt->required()->check(CLI::ExistingFile);
        cmd->add_option("--seed", c.seed, "override the configured seed");
        cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
        cmd->add_option("--out", c.out, "output file or directory");
    }

    void log(const std::string &msg) { std::fprintf(stderr, "%s\n", msg.c_str()); }

    int cmd_enroll(const std::string &raw, double step, double half_window, const std::string &domain,
                   bool slice, bool allow_gaps, const std::string &device_id, double tx_power, const std::string &out)
    {
        const auto samples = read_raw_samples(raw);
        const auto gaps = coverage_gaps(samples, step, slice);
        if (!gaps.empty())
        {
            std::fprintf(stderr, "coverage gaps: %zu cell(s) without samples\n", gaps.size());
            for (const auto &[a, e] : gaps)
                std::fprintf(stderr, "  azimuth %g elevation %g\n", a * step, e * step);
            if (!allow_gaps)
            {
                std::fprintf(stderr, "refusing to enrol; pass --allow-gaps to interpolate the missing cells\n");
                return 2;
            }
        }
        EnrolmentOptions opt;
        opt.replicate_slice = slice;
        opt.allow_gaps = allow_gaps;
        const auto mean = enroll(samples, step, opt);
        const auto dom = domain == "log" ? SmoothingDomain::Logarithmic : SmoothingDomain::Linear;
        const auto pattern = directivity_from_rss(smooth(mean, half_window, dom));
        const std::string id = device_id.empty() ? std::filesystem::path(out).stem().string() : device_id;
        write_pattern(out, pattern, {id, step, tx_power});
        double lo = 1e300, hi = -1e300;
        for (double v : pattern.grid().values())
        {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        std::printf("%s: %zu samples, directivity %+.2f .. %+.2f dBi -> %s\n", id.c_str(), samples.size(), hi, lo,
                    out.c_str());
        return 0;
    }

    int cmd_survey(const Common &c)
    {
        auto s = load_scenario(c.config);
        if (c.seed >= 0)
            s.survey.seed = static_cast<std::uint64_t>(c.seed);
        const auto env = s.active_environment();
        const auto survey = generate_survey(env, *s.survey_tx, s.survey);
        const std::string out = c.out.empty() ? s.name + "_survey.csv" : c.out;
        write_survey(out, survey);
        std::printf("%zu survey points x %zu receivers -> %s\n", survey.points.size(), survey.receiver_ids.size(),
                    out.c_str());
        return 0;
    }

    void write_keyed(const std::filesystem::path &path, const std::vector<TruthSample> &truth,
                     const std::vector<KeyedEstimate> &est)
    {
        std::map<std::uint64_t, double> time_of;
        for (const auto &t : truth)
            time_of[t.key] = t.timestamp;
        std::string s = "packet_key," + csv::join(estimate_csv_header) + "\n";
        for (const auto &e : est)
        {
            csv::Line l;
            l << static_cast<unsigned long>(e.key);
            if (e.accepted)
                l << e.estimate.timestamp << e.estimate.position.x << e.estimate.position.y << e.estimate.position.z
                  << e.estimate.orientation.azimuth << e.estimate.orientation.pitch << e.estimate.orientation.roll
                  << e.estimate.score << 1;
            else
                l << time_of.at(e.key) << "" << "" << "" << "" << "" << "" << "" << 0;
            s += l.str() + "\n";
        }
        csv::write_atomic(path, s);
    }

    int run_single(const Common &c, const Config &cfg)
    {
        const auto s = load_scenario(cfg);
        const std::uint64_t seed = c.seed >= 0 ? static_cast<std::uint64_t>(c.seed) : s.seed;
        const std::filesystem::path dir = c.out.empty() ? std::filesystem::path("out") / s.name : std::filesystem::path(c.out);
        std::filesystem::create_directories(dir);
        const auto scene = build_scene(s);
        const auto res = run_methods(s, scene, seed, all_methods(), true);
        write_truth(dir / "truth.csv", res.truth);
        std::string m = "method,mean_position_error_m,mean_orientation_error_deg,tracking_position_error_m,"
                        "tracking_orientation_error_deg,emitted,rejected\n";
        for (Method meth : all_methods())
        {
            const auto &mt = res.metrics.at(meth);
            write_keyed(dir / (std::string("estimates_") + method_name(meth) + ".csv"), res.truth, res.estimates.at(meth));
            m += (csv::Line() << method_name(meth) << mt.mean_position_error << mt.mean_orientation_error
                              << mt.tracking_position_error << mt.tracking_orientation_error << mt.emitted
                              << mt.rejected)
                     .str() +
                 "\n";
            std::printf("%-28s position %.3f m  azimuth %.2f deg  rejected %zu/%zu\n", method_name(meth),
                        mt.mean_position_error, mt.mean_orientation_error, mt.rejected, mt.emitted + mt.rejected);
        }
        csv::write_atomic(dir / "metrics.csv", "# seed " + std::to_string(seed) + "\n" + m);
        if (res.ambiguous_records)
            std::printf("%zu ambiguous receiver records were excluded\n", res.ambiguous_records);
        std::printf("results -> %s\n", dir.string().c_str());
        return 0;
    }

    int run_sweep(const Common &c, const Config &cfg)
    {
        auto spec = load_experiment(cfg);
        if (c.seed >= 0)
            spec.seed_base = static_cast<std::uint64_t>(c.seed);
        if (!c.out.empty())
            spec.output_dir = c.out;
        if (spec.output_dir.empty())
            spec.output_dir = std::filesystem::path("out") / std::filesystem::path(cfg.source()).stem();
        const auto res = run_experiment(spec, c.jobs, log);
        std::filesystem::create_directories(spec.output_dir);
        write_experiment(spec.output_dir, spec, res);
        for (const auto &r : res.summary)
            std::printf("sigma %.2f rx %zu interval %.3f %-28s position %.3f +- %.3f m  azimuth %.2f +- %.2f deg\n",
                        r.sigma, r.receivers, r.packet_interval, method_name(r.method), r.position.mean,
                        r.position.half_width, r.orientation.mean, r.orientation.half_width);
        std::printf("results -> %s\n", spec.output_dir.string().c_str());
        return 0;
    }

    int cmd_run(const Common &c)
    {
        const auto cfg = Config::load(c.config);
        return cfg.has("scenarios") ? run_sweep(c, cfg) : run_single(c, cfg);
    }

    int cmd_msemap(const Common &c, const std::vector<double> &pose, double orientation)
    {
        const auto s = load_scenario(c.config);
        const auto scene = build_scene(s);
        const Pose truth(Position{pose[0], pose[1], scene.env.z}, Orientation{pose[2], 0.0, 0.0});
        if (!scene.env.contains(truth.position))
            throw Error("pose lies outside the environment");
        std::vector<double> actual;
        for (const auto &id : scene.grid->receiver_ids())
        {
            const auto &rx = scene.env.receivers[static_cast<size_t>(scene.env.receiver_index(id))];
            actual.push_back(received_power(truth, *s.device, s.tx_power_dbm, rx, scene.env.path_loss));
        }
        const Orientation at{std::isnan(orientation) ? pose[2] : orientation, 0.0, 0.0};
        const auto map = mse_map(*scene.grid, scene.env.receivers, *s.device, s.tx_power_dbm, actual, at);
        const std::string out = c.out.empty() ? s.name + "_msemap.csv" : c.out;
        write_mse_map(out, map);
        std::printf("%zu positions x %zu receivers at azimuth %g -> %s\n", map.positions.size(),
                    map.receiver_ids.size(), at.azimuth, out.c_str());
        return 0;
    }

    int cmd_attack(const Common &c, double d, long k, bool no_paths)
    {
        auto cfg = Config::load(c.config);
        auto s = load_attack_scenario(cfg);
        if (c.seed >= 0)
            s.seed = static_cast<std::uint64_t>(c.seed);
        if (!std::isnan(d))
            s.separation = d;
        if (k > 0)
            s.k = static_cast<size_t>(k);
        s.validate();
        const std::filesystem::path dir = c.out.empty() ? std::filesystem::path("out") / s.name : std::filesystem::path(c.out);
        const auto res = match_probability(s, !no_paths, c.jobs, log);
        write_attack_report(dir, s, res);
        std::printf("%s: match probability %.3f +- %.3f over %zu seeds x %zu targets\n", s.name.c_str(),
                    res.probability.mean, res.probability.half_width, s.seeds, s.targets);
        if (!no_paths)
            std::printf("straight-path spoof failed within 100 packets in %zu/%zu scenes\n",
                        res.paths_failed_within_100, res.paths_checked);
        std::printf("results -> %s\n", dir.string().c_str());
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"radloc: orientation-aware RSS localisation"};
    app.require_subcommand(1);

    Common enroll_c;
    std::string raw, domain = "linear", device_id;
    double step = 1.0, half_window = 5.0, tx_power = 15.0;
    bool slice = false, allow_gaps = false;
    auto *enroll_cmd = app.add_subcommand("enroll", "enrol a radiation pattern from rig samples");
    enroll_cmd->add_option("raw", raw, "raw sample CSV")->required()->check(CLI::ExistingFile);
    enroll_cmd->add_option("--step", step, "grid step in degrees");
    enroll_cmd->add_option("--smooth", half_window, "smoothing half window in degrees (0 disables)");
    enroll_cmd->add_option("--domain", domain, "smoothing domain")->check(CLI::IsMember({"linear", "log"}));
    enroll_cmd->add_flag("--slice", slice, "samples cover one elevation; copy it to every elevation");
    enroll_cmd->add_flag("--allow-gaps", allow_gaps, "interpolate cells without samples");
    enroll_cmd->add_option("--device-id", device_id, "device id stored in the metadata");
    enroll_cmd->add_option("--tx-power", tx_power, "nominal transmit power in dBm");
    enroll_cmd->add_option("--out", enroll_c.out, "pattern CSV to write")->required();

    Common survey_c;
    auto *survey_cmd = app.add_subcommand("survey", "simulate the site survey of a scenario");
    add_common(survey_cmd, survey_c);

    Common run_c;
    auto *run_cmd = app.add_subcommand("run", "run one scenario or an experiment sweep");
    add_common(run_cmd, run_c);

    Common map_c;
    std::vector<double> pose;
    double map_orientation = NAN;
    auto *map_cmd = app.add_subcommand("msemap", "per-receiver and combined MSE over the grid for one pose");
    add_common(map_cmd, map_c);
    map_cmd->add_option("--pose", pose, "true pose x y azimuth")->required()->expected(3);
    map_cmd->add_option("--orientation", map_orientation, "candidate azimuth (default: the true one)");

    Common attack_c;
    double d = NAN;
    long k = 0;
    bool no_paths = false;
    auto *attack_cmd = app.add_subcommand("attack", "spoofing match probability and path feasibility");
    add_common(attack_cmd, attack_c);
    attack_cmd->add_option("--d", d, "separation threshold in metres");
    attack_cmd->add_option("--k", k, "defender top-k");
    attack_cmd->add_flag("--no-paths", no_paths, "skip the path feasibility check");

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (*enroll_cmd)
            return cmd_enroll(raw, step, half_window, domain, slice, allow_gaps, device_id, tx_power, enroll_c.out);
        if (*survey_cmd)
            return cmd_survey(survey_c);
        if (*run_cmd)
            return cmd_run(run_c);
        if (*map_cmd)
            return cmd_msemap(map_c, pose, map_orientation);
        if (*attack_cmd)
            return cmd_attack(attack_c, d, k, no_paths);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
