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

#ifndef RADLOC_PATTERN_HPP
#define RADLOC_PATTERN_HPP

#include "errors.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace radloc
{
    inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

    inline double mw_to_dbm(double mw)
    {
        if (!(mw > 0.0))
            throw NonPositivePower(mw);
        return 10.0 * std::log10(mw);
    }

    /// Values on a regular azimuth x elevation grid. Azimuth cells cover [0, 360),
    /// elevation cells cover [0, 180); cell (a, e) sits at angles (a*step, e*step).
    class AngularGrid
    {
    public:
        AngularGrid() = default;

        explicit AngularGrid(double step, double fill = 0.0) : step_(step)
        {
            const double na = 360.0 / step, ne = 180.0 / step;
            if (!(step > 0.0) || std::abs(na - std::round(na)) > 1e-9 || std::abs(ne - std::round(ne)) > 1e-9)
                throw Error("angular step must divide 180 degrees");
            n_az_ = static_cast<int>(std::lround(na));
            n_el_ = static_cast<int>(std::lround(ne));
            values_.assign(static_cast<size_t>(n_az_) * n_el_, fill);
        }

        double step() const { return step_; }
        int azimuth_cells() const { return n_az_; }
        int elevation_cells() const { return n_el_; }
        size_t size() const { return values_.size(); }

        double &at(int az, int el) { return values_[static_cast<size_t>(az) * n_el_ + el]; }
        double at(int az, int el) const { return values_[static_cast<size_t>(az) * n_el_ + el]; }

        std::vector<double> &values() { return values_; }
        const std::vector<double> &values() const { return values_; }

        /// Nearest azimuth cell, rounding half up and wrapping at 360.
        int azimuth_index(double azimuth_deg) const
        {
            const long i = static_cast<long>(std::floor(wrap_degrees(azimuth_deg) / step_ + 0.5));
            return static_cast<int>(((i % n_az_) + n_az_) % n_az_);
        }

        /// Nearest elevation cell, clamped to the grid.
        int elevation_index(double elevation_deg) const
        {
            const long i = static_cast<long>(std::floor(elevation_deg / step_ + 0.5));
            return static_cast<int>(std::clamp<long>(i, 0, n_el_ - 1));
        }

        /// Ring of all azimuth cells at one elevation index.
        std::vector<double> ring(int el) const
        {
            std::vector<double> r(n_az_);
            for (int a = 0; a < n_az_; ++a)
                r[a] = at(a, el);
            return r;
        }

    private:
        double step_ = 1.0;
        int n_az_ = 0, n_el_ = 0;
        std::vector<double> values_;
    };

    /// Directivity in dBi over the full sphere; the device fingerprint.
    class RadiationPattern
    {
    public:
        RadiationPattern() : grid_(1.0, 0.0) {}
        explicit RadiationPattern(AngularGrid directivity_dbi) : grid_(std::move(directivity_dbi)) {}

        /// Isotropic radiator: 0 dBi everywhere.
        static RadiationPattern isotropic(double step = 1.0) { return RadiationPattern(AngularGrid(step, 0.0)); }

        const AngularGrid &grid() const { return grid_; }
        double step() const { return grid_.step(); }

        double at(int az, int el) const { return grid_.at(az, el); }

        double lookup(const Direction &d) const
        {
            return grid_.at(grid_.azimuth_index(d.azimuth), grid_.elevation_index(d.elevation));
        }

        std::pair<double, double> min_max() const
        {
            auto [lo, hi] = std::minmax_element(grid_.values().begin(), grid_.values().end());
            return {*lo, *hi};
        }

    private:
        AngularGrid grid_;
    };

    /// Nearest-cell pattern access.
    inline double lookup(const RadiationPattern &pattern, const Direction &d) { return pattern.lookup(d); }

    struct RawPatternSample
    {
        double rss_dbm = 0.0;
        double motor_azimuth = 0.0;
        double motor_elevation = 0.0;
    };

    struct EnrolmentOptions
    {
        /// Samples cover one elevation only; the slice is copied to every elevation.
        bool replicate_slice = false;
        /// Fill empty cells by circular interpolation (in mW) along their azimuth ring instead of throwing.
        bool allow_gaps = false;
    };

    namespace detail
    {
        struct CellAccumulator
        {
            std::vector<double> sum_mw;
            std::vector<int> count;
        };

        inline std::pair<int, int> enrolment_cell(const AngularGrid &g, const RawPatternSample &s)
        {
            // receiver azimuth in the device frame
            const double az = wrap_degrees(360.0 - s.motor_azimuth);
            return {g.azimuth_index(az), g.elevation_index(s.motor_elevation)};
        }

        inline void fill_ring_gaps(std::vector<double> &ring_mw, const std::vector<int> &count)
        {
            const int n = static_cast<int>(ring_mw.size());
            std::vector<int> known;
            for (int i = 0; i < n; ++i)
                if (count[i] > 0)
                    known.push_back(i);
            if (known.empty())
                return;
            for (int i = 0; i < n; ++i)
            {
                if (count[i] > 0)
                    continue;
                // previous and next populated cell around the ring
                auto it = std::upper_bound(known.begin(), known.end(), i);
                const int next = it == known.end() ? known.front() + n : *it;
                const int prev = it == known.begin() ? known.back() - n : *(it - 1);
                const double f = static_cast<double>(i - prev) / static_cast<double>(next - prev);
                ring_mw[i] = (1.0 - f) * ring_mw[((prev % n) + n) % n] + f * ring_mw[next % n];
            }
        }
    }

    /// Cells that would receive no sample. In slice mode only the sampled ring is checked.
    inline std::vector<std::pair<int, int>> coverage_gaps(const std::vector<RawPatternSample> &samples, double step,
                                                          bool replicate_slice)
    {
        AngularGrid g(step);
        std::vector<char> seen(g.size(), 0);
        std::vector<char> ring_used(g.elevation_cells(), 0);
        for (const auto &s : samples)
        {
            auto [a, e] = detail::enrolment_cell(g, s);
            seen[static_cast<size_t>(a) * g.elevation_cells() + e] = 1;
            ring_used[e] = 1;
        }
        std::vector<std::pair<int, int>> gaps;
        for (int a = 0; a < g.azimuth_cells(); ++a)
            for (int e = 0; e < g.elevation_cells(); ++e)
                if ((!replicate_slice || ring_used[e]) && !seen[static_cast<size_t>(a) * g.elevation_cells() + e])
                    gaps.emplace_back(a, e);
        return gaps;
    }

    /// Builds the mean-RSS grid (dBm) from rig samples. Azimuth is inverted as
    /// 360 - motorAzimuth; duplicates in a cell are averaged in mW.
    inline AngularGrid enroll(const std::vector<RawPatternSample> &samples, double step,
                              const EnrolmentOptions &options = {})
    {
        if (samples.empty())
            throw EmptyInput("no pattern samples to enrol");
        AngularGrid grid(step);
        const int n_az = grid.azimuth_cells(), n_el = grid.elevation_cells();
        detail::CellAccumulator acc{std::vector<double>(grid.size(), 0.0), std::vector<int>(grid.size(), 0)};
        for (const auto &s : samples)
        {
            auto [a, e] = detail::enrolment_cell(grid, s);
            const size_t idx = static_cast<size_t>(a) * n_el + e;
            acc.sum_mw[idx] += dbm_to_mw(s.rss_dbm);
            acc.count[idx] += 1;
        }

        std::vector<int> rings;
        for (int e = 0; e < n_el; ++e)
            for (int a = 0; a < n_az; ++a)
                if (acc.count[static_cast<size_t>(a) * n_el + e] > 0)
                {
                    rings.push_back(e);
                    break;
                }
        if (options.replicate_slice && rings.size() != 1)
            throw Error("slice enrolment needs samples from exactly one elevation, found " +
                        std::to_string(rings.size()));

        auto gaps = coverage_gaps(samples, step, options.replicate_slice);
        if (!gaps.empty() && !options.allow_gaps)
            throw CoverageGap(std::move(gaps));

        for (int e = 0; e < n_el; ++e)
        {
            std::vector<double> ring_mw(n_az, 0.0);
            std::vector<int> count(n_az, 0);
            for (int a = 0; a < n_az; ++a)
            {
                const size_t idx = static_cast<size_t>(a) * n_el + e;
                count[a] = acc.count[idx];
                if (count[a] > 0)
                    ring_mw[a] = acc.sum_mw[idx] / count[a];
            }
            detail::fill_ring_gaps(ring_mw, count);
            for (int a = 0; a < n_az; ++a)
                grid.at(a, e) = ring_mw[a] > 0.0 ? mw_to_dbm(ring_mw[a]) : 0.0;
        }

        if (options.replicate_slice)
        {
            const int src = rings.front();
            for (int e = 0; e < n_el; ++e)
                for (int a = 0; a < n_az; ++a)
                    grid.at(a, e) = grid.at(a, src);
        }
        else if (!gaps.empty())
        {
            // rings with no sample at all cannot be filled along azimuth
            for (int e = 0; e < n_el; ++e)
                if (std::find(rings.begin(), rings.end(), e) == rings.end())
                    throw CoverageGap(coverage_gaps(samples, step, false));
        }
        return grid;
    }

    enum class SmoothingDomain
    {
        Linear,     ///< average mW values
        Logarithmic ///< average dB values
    };

    /// Circular moving average of each azimuth ring, computed in mW by default.
    inline AngularGrid smooth(const AngularGrid &grid_dbm, double half_window_deg = 5.0,
                              SmoothingDomain domain = SmoothingDomain::Linear)
    {
        const bool linear = domain == SmoothingDomain::Linear;
        const double w = half_window_deg / grid_dbm.step();
        const int half = static_cast<int>(std::lround(w));
        if (half < 0 || std::abs(w - half) > 1e-9)
            throw Error("smoothing half-window must be a non-negative multiple of the grid step");
        const int n_az = grid_dbm.azimuth_cells();
        if (2 * half + 1 > n_az)
            throw Error("smoothing window wider than the azimuth ring");
        AngularGrid out(grid_dbm.step());
        std::vector<double> mw(n_az);
        for (int e = 0; e < grid_dbm.elevation_cells(); ++e)
        {
            for (int a = 0; a < n_az; ++a)
                mw[a] = linear ? dbm_to_mw(grid_dbm.at(a, e)) : grid_dbm.at(a, e);
            for (int a = 0; a < n_az; ++a)
            {
                double sum = 0.0;
                for (int k = -half; k <= half; ++k)
                    sum += mw[((a + k) % n_az + n_az) % n_az];
                const double mean = sum / (2 * half + 1);
                out.at(a, e) = linear ? mw_to_dbm(mean) : mean;
            }
        }
        return out;
    }

    /// Quadrature weight sin(theta) dtheta dphi of one cell. Cell e spans
    /// [e*step, (e+1)*step] in elevation and is weighted at its midpoint.
    inline double cell_solid_angle(const AngularGrid &g, int el)
    {
        const double d = deg_to_rad(g.step());
        return std::sin((el + 0.5) * d) * d * d;
    }

    /// Midpoint-rule integral of U sin(theta) over the sphere.
    inline double total_radiated_power(const AngularGrid &intensity)
    {
        double total = 0.0;
        for (int e = 0; e < intensity.elevation_cells(); ++e)
        {
            double ring = 0.0;
            for (int a = 0; a < intensity.azimuth_cells(); ++a)
                ring += intensity.at(a, e);
            total += ring * cell_solid_angle(intensity, e);
        }
        return total;
    }

    /// Directivity from a (smoothed) RSS grid: each cell's mW value is taken as
    /// radiation intensity up to a constant and divided by the sphere average.
    inline RadiationPattern directivity_from_rss(const AngularGrid &grid_dbm)
    {
        AngularGrid u(grid_dbm.step());
        for (size_t i = 0; i < u.size(); ++i)
            u.values()[i] = std::isfinite(grid_dbm.values()[i]) ? dbm_to_mw(grid_dbm.values()[i]) : 0.0;

        AngularGrid ones(grid_dbm.step(), 1.0);
        const double mean_u = total_radiated_power(u) / total_radiated_power(ones);
        if (!(mean_u > 0.0) || !std::isfinite(mean_u))
            throw DegenerateGrid();

        AngularGrid d(grid_dbm.step());
        for (size_t i = 0; i < d.size(); ++i)
        {
            if (!(u.values()[i] > 0.0))
                throw DegenerateGrid();
            d.values()[i] = 10.0 * std::log10(u.values()[i] / mean_u);
        }
        return RadiationPattern(std::move(d));
    }

    /// Complete enrolment: mean grid, linear-domain smoothing, directivity.
    inline RadiationPattern enroll_pattern(const std::vector<RawPatternSample> &samples, double step,
                                           const EnrolmentOptions &options = {}, double half_window_deg = 5.0)
    {
        return directivity_from_rss(smooth(enroll(samples, step, options), half_window_deg));
    }

    struct DeviceEntry
    {
        RadiationPattern pattern;
        double tx_power_dbm = 0.0;
    };

    class PatternDatabase
    {
    public:
        void add(const std::string &device_id, RadiationPattern pattern, double tx_power_dbm)
        {
            if (!entries_.emplace(device_id, DeviceEntry{std::move(pattern), tx_power_dbm}).second)
                throw Error("duplicate device id '" + device_id + "'");
        }

        const DeviceEntry &get(const std::string &device_id) const
        {
            auto it = entries_.find(device_id);
            if (it == entries_.end())
                throw Error("unknown device id '" + device_id + "'");
            return it->second;
        }

        bool contains(const std::string &device_id) const { return entries_.count(device_id) != 0; }
        size_t size() const { return entries_.size(); }

    private:
        std::map<std::string, DeviceEntry> entries_;
    };
}

#endif
