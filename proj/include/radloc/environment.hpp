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

#ifndef RADLOC_ENVIRONMENT_HPP
#define RADLOC_ENVIRONMENT_HPP

#include "errors.hpp"
#include "geometry.hpp"
#include "pattern.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace radloc
{
    /// Log-distance path loss PL(d) = PL(d0) + 10 n log10(d / d0).
    struct PathLossModel
    {
        double exponent = 2.2;
        double reference_loss_db = 40.0;
        double reference_distance_m = 1.0;
    };

    inline double path_loss(double distance_m, const PathLossModel &model)
    {
        if (!(distance_m > 0.0))
            throw NonPositiveDistance(distance_m);
        return model.reference_loss_db + 10.0 * model.exponent * std::log10(distance_m / model.reference_distance_m);
    }

    using PatternPtr = std::shared_ptr<const RadiationPattern>;

    inline PatternPtr make_pattern(RadiationPattern p) { return std::make_shared<const RadiationPattern>(std::move(p)); }

    struct Receiver
    {
        std::string id;
        Pose pose;
        PatternPtr pattern = make_pattern(RadiationPattern::isotropic());

        /// Receiver directivity toward a transmitter at `tx`.
        double directivity_towards(const Position &tx) const
        {
            return pattern->lookup(relative_direction(pose, tx));
        }
    };

    /// Planar simulation area [0, extent_x] x [0, extent_y] at height z with fixed receivers.
    struct Environment
    {
        double extent_x = 20.0;
        double extent_y = 20.0;
        double z = 0.0;
        std::vector<Receiver> receivers;
        PathLossModel path_loss;
        /// Received power below this level is not reported by a receiver.
        double sensitivity_dbm = -95.0;
        std::uint64_t seed = 1;

        bool contains(const Position &p) const
        {
            return p.x >= 0.0 && p.x <= extent_x && p.y >= 0.0 && p.y <= extent_y;
        }

        int receiver_index(const std::string &id) const
        {
            for (size_t i = 0; i < receivers.size(); ++i)
                if (receivers[i].id == id)
                    return static_cast<int>(i);
            return -1;
        }

        void validate() const
        {
            if (!(path_loss.exponent > 0.0))
                throw Error("path-loss exponent must be positive");
            if (!(extent_x > 0.0 && extent_y > 0.0))
                throw Error("environment extent must be positive");
            for (size_t i = 0; i < receivers.size(); ++i)
            {
                if (!contains(receivers[i].pose.position))
                    throw Error("receiver '" + receivers[i].id + "' lies outside the environment");
                for (size_t j = 0; j < i; ++j)
                    if (receivers[i].id == receivers[j].id)
                        throw Error("duplicate receiver id '" + receivers[i].id + "'");
            }
        }
    };

    /// Noiseless received power: P_tx + D_t + D_r - PL(d).
    inline double received_power(const Pose &tx, const RadiationPattern &tx_pattern, double tx_power_dbm,
                                 const Receiver &rx, const PathLossModel &model)
    {
        const double d = distance(tx.position, rx.pose.position);
        const double dt = tx_pattern.lookup(relative_direction(tx, rx.pose.position));
        return tx_power_dbm + dt + rx.directivity_towards(tx.position) - path_loss(d, model);
    }
}

#endif
