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

#ifndef RADLOC_PATTERN_IO_HPP
#define RADLOC_PATTERN_IO_HPP

#include "config.hpp"
#include "csv.hpp"
#include "pattern.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace radloc
{
    inline const std::vector<std::string> pattern_csv_header{"azimuth_deg", "elevation_deg", "directivity_dbi"};
    inline const std::vector<std::string> raw_sample_csv_header{"rss_dbm", "motor_azimuth_deg", "motor_elevation_deg"};

    struct PatternMeta
    {
        std::string device_id;
        double step = 1.0;
        double tx_power_dbm = 0.0;
    };

    /// Sidecar metadata lives next to the CSV with the extension replaced by ".meta".
    inline std::filesystem::path pattern_meta_path(std::filesystem::path csv_path)
    {
        return csv_path.replace_extension(".meta");
    }

    inline void write_pattern(const std::filesystem::path &csv_path, const RadiationPattern &pattern,
                              const PatternMeta &meta)
    {
        std::string body;
        body.reserve(pattern.grid().size() * 24);
        body += "azimuth_deg,elevation_deg,directivity_dbi\n";
        const auto &g = pattern.grid();
        for (int a = 0; a < g.azimuth_cells(); ++a)
            for (int e = 0; e < g.elevation_cells(); ++e)
                body += (csv::Line() << a * g.step() << e * g.step() << g.at(a, e)).str() + "\n";
        csv::write_atomic(csv_path, body);

        std::string m;
        m += "device_id = " + meta.device_id + "\n";
        m += "step = " + csv::format(meta.step) + "\n";
        m += "tx_power_dbm = " + csv::format(meta.tx_power_dbm) + "\n";
        csv::write_atomic(pattern_meta_path(csv_path), m);
    }

    inline PatternMeta read_pattern_meta(const std::filesystem::path &csv_path)
    {
        const auto cfg = Config::load(pattern_meta_path(csv_path));
        PatternMeta meta;
        meta.device_id = cfg.get_string("device_id", csv_path.stem().string());
        meta.step = cfg.get_double("step", 1.0);
        meta.tx_power_dbm = cfg.get_double("tx_power_dbm", 0.0);
        cfg.reject_unknown();
        return meta;
    }

    /// Reads a pattern CSV; every cell of the grid implied by the sidecar step must be present exactly once.
    inline RadiationPattern read_pattern(const std::filesystem::path &csv_path, PatternMeta *meta_out = nullptr)
    {
        const auto meta = read_pattern_meta(csv_path);
        const auto table = csv::read(csv_path, pattern_csv_header);
        AngularGrid g(meta.step);
        std::vector<char> seen(g.size(), 0);
        for (const auto &row : table.rows)
        {
            const double az = table.number(row, 0), el = table.number(row, 1), d = table.number(row, 2);
            const double ai = az / meta.step, ei = el / meta.step;
            if (std::abs(ai - std::round(ai)) > 1e-6 || std::abs(ei - std::round(ei)) > 1e-6 || ai < 0 ||
                ei < 0 || std::lround(ai) >= g.azimuth_cells() || std::lround(ei) >= g.elevation_cells())
                throw ConfigError(table.source, row.line, "angle not on the pattern grid");
            if (!std::isfinite(d))
                throw ConfigError(table.source, row.line, "directivity must be finite");
            const int a = static_cast<int>(std::lround(ai)), e = static_cast<int>(std::lround(ei));
            const size_t idx = static_cast<size_t>(a) * g.elevation_cells() + e;
            if (seen[idx])
                throw ConfigError(table.source, row.line, "duplicate cell");
            seen[idx] = 1;
            g.at(a, e) = d;
        }
        for (char s : seen)
            if (!s)
                throw ConfigError(table.source, 0, "pattern file does not cover every cell");
        if (meta_out)
            *meta_out = meta;
        return RadiationPattern(std::move(g));
    }

    inline std::vector<RawPatternSample> read_raw_samples(const std::filesystem::path &path)
    {
        const auto table = csv::read(path, raw_sample_csv_header);
        std::vector<RawPatternSample> out;
        out.reserve(table.rows.size());
        for (const auto &row : table.rows)
        {
            RawPatternSample s{table.number(row, 0), table.number(row, 1), table.number(row, 2)};
            if (s.motor_azimuth < 0.0 || s.motor_azimuth >= 360.0 || s.motor_elevation < 0.0 ||
                s.motor_elevation >= 180.0)
                throw ConfigError(table.source, row.line, "motor angles out of range");
            out.push_back(s);
        }
        return out;
    }

    inline void write_raw_samples(const std::filesystem::path &path, const std::vector<RawPatternSample> &samples)
    {
        std::string body = "rss_dbm,motor_azimuth_deg,motor_elevation_deg\n";
        for (const auto &s : samples)
            body += (csv::Line() << s.rss_dbm << s.motor_azimuth << s.motor_elevation).str() + "\n";
        csv::write_atomic(path, body);
    }
}

#endif
