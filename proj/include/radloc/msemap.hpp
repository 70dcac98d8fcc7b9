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

#ifndef RADLOC_MSEMAP_HPP
#define RADLOC_MSEMAP_HPP

#include "csv.hpp"
#include "scoring.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace radloc
{
    /// Squared error per receiver and their mean over every grid position, with the
    /// candidate device held at one orientation.
    struct MseMap
    {
        std::vector<std::string> receiver_ids;
        std::vector<Position> positions;
        std::vector<std::vector<double>> layers; ///< [receiver][position], NaN where undefined
        std::vector<double> combined;            ///< mean of the defined layers at each position
    };

    inline MseMap mse_map(const CandidateGrid &grid, const std::vector<Receiver> &receivers,
                          const RadiationPattern &pattern, double tx_power_dbm, const std::vector<double> &actual,
                          const Orientation &orientation)
    {
        const auto rx = detail::channel_positions(grid, receivers);
        if (actual.size() != rx.size())
            throw Error("measurement vector does not match the survey channels");
        const Matrix3 rot = rotation_matrix(orientation);
        MseMap map;
        map.receiver_ids = grid.receiver_ids();
        map.layers.assign(rx.size(), std::vector<double>(grid.size(), absent));
        map.combined.assign(grid.size(), absent);
        for (size_t p = 0; p < grid.size(); ++p)
        {
            const Position pos = grid.position(p);
            map.positions.push_back(pos);
            double sum = 0.0;
            int n = 0;
            for (size_t r = 0; r < rx.size(); ++r)
            {
                const double m = grid.m(p, r);
                if (!is_present(m) || !is_present(actual[r]) || detail::same_position(pos, rx[r]))
                    continue;
                const double x = expected_rss(m, tx_power_dbm, pattern.lookup(relative_direction(rot, pos, rx[r])));
                const double e = (x - actual[r]) * (x - actual[r]);
                map.layers[r][p] = e;
                sum += e;
                ++n;
            }
            if (n)
                map.combined[p] = sum / n;
        }
        return map;
    }

    inline void write_mse_map(const std::filesystem::path &path, const MseMap &map)
    {
        std::string body = "x_m,y_m";
        for (const auto &id : map.receiver_ids)
            body += ",mse_" + id;
        body += ",mse_combined\n";
        for (size_t p = 0; p < map.positions.size(); ++p)
        {
            csv::Line line;
            line << map.positions[p].x << map.positions[p].y;
            for (const auto &layer : map.layers)
                line << layer[p];
            line << map.combined[p];
            body += line.str() + "\n";
        }
        csv::write_atomic(path, body);
    }
}

#endif
