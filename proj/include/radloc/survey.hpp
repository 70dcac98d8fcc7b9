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

#ifndef RADLOC_SURVEY_HPP
#define RADLOC_SURVEY_HPP

#include "csv.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "pattern.hpp"
#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace radloc
{
    inline constexpr double absent = std::numeric_limits<double>::quiet_NaN();

    inline bool is_present(double v) { return !std::isnan(v); }

    /// M = R - P_tx - D_st: survey RSS with the survey transmitter's power and directivity removed.
    inline double normalize_measurement(double rss_dbm, double tx_power_dbm, double survey_directivity_dbi)
    {
        return rss_dbm - tx_power_dbm - survey_directivity_dbi;
    }

    struct SurveyPoint
    {
        double x = 0.0, y = 0.0;
        /// Normalised value per receiver (same order as SiteSurvey::receiver_ids); NaN when out of range.
        std::vector<double> m_db;
    };

    struct SiteSurvey
    {
        std::vector<std::string> receiver_ids;
        std::vector<SurveyPoint> points;
    };

    struct SurveyOptions
    {
        double spacing = 1.0;
        double tx_power_dbm = 15.0;
        /// Orientation of the survey transmitter at every node.
        Orientation tx_orientation{};
        /// Optional measurement noise on survey RSS (off by default).
        double sigma_db = 0.0;
        std::uint64_t seed = 0;
    };

    /// Simulated site survey over a lattice covering the environment.
    inline SiteSurvey generate_survey(const Environment &env, const RadiationPattern &survey_tx,
                                      const SurveyOptions &opt = {})
    {
        if (env.receivers.empty())
            throw Error("site survey needs at least one receiver");
        if (!(opt.spacing > 0.0))
            throw Error("survey spacing must be positive");
        SiteSurvey s;
        for (const auto &r : env.receivers)
            s.receiver_ids.push_back(r.id);
        const int nx = static_cast<int>(std::floor(env.extent_x / opt.spacing + 1e-9)) + 1;
        const int ny = static_cast<int>(std::floor(env.extent_y / opt.spacing + 1e-9)) + 1;
        Rng rng(derive_seed(opt.seed, {0x5u}));
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
            {
                SurveyPoint p;
                p.x = ix * opt.spacing;
                p.y = iy * opt.spacing;
                const Pose tx(Position{p.x, p.y, env.z}, opt.tx_orientation);
                for (const auto &rx : env.receivers)
                {
                    if (tx.position == rx.pose.position)
                    {
                        p.m_db.push_back(absent);
                        continue;
                    }
                    const double dst = survey_tx.lookup(relative_direction(tx, rx.pose.position));
                    double rss = received_power(tx, survey_tx, opt.tx_power_dbm, rx, env.path_loss);
                    if (opt.sigma_db > 0.0)
                        rss += rng.normal(0.0, opt.sigma_db);
                    p.m_db.push_back(rss < env.sensitivity_dbm ? absent
                                                               : normalize_measurement(rss, opt.tx_power_dbm, dst));
                }
                s.points.push_back(std::move(p));
            }
        return s;
    }

    /// Per-receiver normalised values on a fine regular lattice. Position index is iy * nx + ix.
    class CandidateGrid
    {
    public:
        CandidateGrid() = default;
        CandidateGrid(double x0, double y0, double z, double step, int nx, int ny, std::vector<std::string> ids)
            : x0_(x0), y0_(y0), z_(z), step_(step), nx_(nx), ny_(ny), ids_(std::move(ids)),
              values_(static_cast<size_t>(nx) * ny * ids_.size(), absent)
        {
        }

        double step() const { return step_; }
        int nx() const { return nx_; }
        int ny() const { return ny_; }
        size_t size() const { return static_cast<size_t>(nx_) * ny_; }
        double z() const { return z_; }
        double x0() const { return x0_; }
        double y0() const { return y0_; }
        const std::vector<std::string> &receiver_ids() const { return ids_; }
        size_t receiver_count() const { return ids_.size(); }

        Position position(size_t index) const
        {
            const int ix = static_cast<int>(index % nx_), iy = static_cast<int>(index / nx_);
            return {x0_ + ix * step_, y0_ + iy * step_, z_};
        }

        double m(size_t index, size_t receiver) const { return values_[index * ids_.size() + receiver]; }
        double &m(size_t index, size_t receiver) { return values_[index * ids_.size() + receiver]; }

        int receiver_index(const std::string &id) const
        {
            auto it = std::find(ids_.begin(), ids_.end(), id);
            return it == ids_.end() ? -1 : static_cast<int>(it - ids_.begin());
        }

    private:
        double x0_ = 0.0, y0_ = 0.0, z_ = 0.0, step_ = 0.1;
        int nx_ = 0, ny_ = 0;
        std::vector<std::string> ids_;
        std::vector<double> values_;
    };

    /// Regular lattice view of a survey, used for interpolation.
    class SurveyLattice
    {
    public:
        explicit SurveyLattice(const SiteSurvey &s) : ids_(s.receiver_ids)
        {
            if (s.points.empty())
                throw IncompleteLattice("no survey points");
            std::vector<double> xs, ys;
            for (const auto &p : s.points)
            {
                xs.push_back(p.x);
                ys.push_back(p.y);
                if (p.m_db.size() != ids_.size())
                    throw IncompleteLattice("survey point has the wrong number of receiver channels");
            }
            auto uniq = [](std::vector<double> &v) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                        v.end());
            };
            uniq(xs);
            uniq(ys);
            if (xs.size() < 2 || ys.size() < 2)
                throw IncompleteLattice("need at least two distinct x and y coordinates");
            x0_ = xs.front();
            y0_ = ys.front();
            spacing_ = xs[1] - xs[0];
            auto check = [&](const std::vector<double> &v, double origin) {
                for (size_t i = 0; i < v.size(); ++i)
                    if (std::abs(v[i] - (origin + i * spacing_)) > 1e-6)
                        throw IncompleteLattice("irregular spacing");
            };
            check(xs, x0_);
            check(ys, y0_);
            nx_ = static_cast<int>(xs.size());
            ny_ = static_cast<int>(ys.size());
            if (s.points.size() != static_cast<size_t>(nx_) * ny_)
                throw IncompleteLattice("expected " + std::to_string(nx_ * ny_) + " points, got " +
                                        std::to_string(s.points.size()));
            values_.assign(static_cast<size_t>(nx_) * ny_ * ids_.size(), absent);
            std::vector<char> seen(static_cast<size_t>(nx_) * ny_, 0);
            for (const auto &p : s.points)
            {
                const int ix = static_cast<int>(std::lround((p.x - x0_) / spacing_));
                const int iy = static_cast<int>(std::lround((p.y - y0_) / spacing_));
                const size_t node = static_cast<size_t>(iy) * nx_ + ix;
                if (seen[node])
                    throw IncompleteLattice("duplicate survey point");
                seen[node] = 1;
                for (size_t r = 0; r < ids_.size(); ++r)
                    values_[node * ids_.size() + r] = p.m_db[r];
            }
        }

        double spacing() const { return spacing_; }
        double x0() const { return x0_; }
        double y0() const { return y0_; }
        int nx() const { return nx_; }
        int ny() const { return ny_; }
        double x_max() const { return x0_ + (nx_ - 1) * spacing_; }
        double y_max() const { return y0_ + (ny_ - 1) * spacing_; }
        const std::vector<std::string> &receiver_ids() const { return ids_; }

        double knot(int ix, int iy, size_t r) const
        {
            return values_[(static_cast<size_t>(iy) * nx_ + ix) * ids_.size() + r];
        }

        /// Bilinear interpolation in dB; positions outside the lattice are clamped to its edge.
        /// Knots with zero weight are ignored, so a value at a knot is that knot exactly.
        double interpolate(double x, double y, size_t r) const
        {
            double fx = (x - x0_) / spacing_, fy = (y - y0_) / spacing_;
            fx = std::clamp(fx, 0.0, static_cast<double>(nx_ - 1));
            fy = std::clamp(fy, 0.0, static_cast<double>(ny_ - 1));
            int ix = std::min(static_cast<int>(std::floor(fx)), nx_ - 2);
            int iy = std::min(static_cast<int>(std::floor(fy)), ny_ - 2);
            double tx = fx - ix, ty = fy - iy;
            // snap to knots
            if (std::abs(tx) < 1e-9)
                tx = 0.0;
            if (std::abs(tx - 1.0) < 1e-9)
                tx = 1.0;
            if (std::abs(ty) < 1e-9)
                ty = 0.0;
            if (std::abs(ty - 1.0) < 1e-9)
                ty = 1.0;
            const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
            const double v[4] = {knot(ix, iy, r), knot(ix + 1, iy, r), knot(ix, iy + 1, r), knot(ix + 1, iy + 1, r)};
            double sum = 0.0;
            for (int i = 0; i < 4; ++i)
            {
                if (w[i] == 0.0)
                    continue;
                if (!is_present(v[i]))
                    return absent;
                sum += w[i] * v[i];
            }
            return sum;
        }

    private:
        std::vector<std::string> ids_;
        double x0_ = 0.0, y0_ = 0.0, spacing_ = 1.0;
        int nx_ = 0, ny_ = 0;
        std::vector<double> values_;
    };

    /// Bilinear (dB-domain) interpolation of the survey onto a lattice of the given step.
    inline CandidateGrid interpolate(const SiteSurvey &survey, double step = 0.1, double z = 0.0)
    {
        const SurveyLattice lat(survey);
        const double ratio = lat.spacing() / step;
        if (!(step > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-6)
            throw Error("candidate step must divide the survey spacing");
        const int per = static_cast<int>(std::lround(ratio));
        const int nx = (lat.nx() - 1) * per + 1, ny = (lat.ny() - 1) * per + 1;
        CandidateGrid g(lat.x0(), lat.y0(), z, step, nx, ny, lat.receiver_ids());
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
            {
                const size_t idx = static_cast<size_t>(iy) * nx + ix;
                const double x = lat.x0() + (static_cast<double>(ix) / per) * lat.spacing();
                const double y = lat.y0() + (static_cast<double>(iy) / per) * lat.spacing();
                for (size_t r = 0; r < lat.receiver_ids().size(); ++r)
                    g.m(idx, r) = lat.interpolate(x, y, r);
            }
        return g;
    }

    inline const std::vector<std::string> survey_csv_header{"x_m", "y_m", "receiver_id", "m_db"};
    inline const std::vector<std::string> receiver_csv_header{"id",        "x_m",      "y_m",     "z_m",
                                                              "azimuth_deg", "pitch_deg", "roll_deg", "pattern_file"};

    inline void write_survey(const std::filesystem::path &path, const SiteSurvey &s)
    {
        std::string body = "x_m,y_m,receiver_id,m_db\n";
        for (const auto &p : s.points)
            for (size_t r = 0; r < s.receiver_ids.size(); ++r)
                if (is_present(p.m_db[r]))
                    body += (csv::Line() << p.x << p.y << s.receiver_ids[r] << p.m_db[r]).str() + "\n";
        csv::write_atomic(path, body);
    }

    /// Reads a survey CSV. Receiver order follows first appearance; channels a point lacks are absent.
    inline SiteSurvey read_survey(const std::filesystem::path &path)
    {
        const auto table = csv::read(path, survey_csv_header);
        SiteSurvey s;
        std::map<std::pair<long long, long long>, size_t> index;
        auto key = [](double x, double y) {
            return std::make_pair(std::llround(x * 1e6), std::llround(y * 1e6));
        };
        for (const auto &row : table.rows)
        {
            const auto &id = row.fields[2];
            if (std::find(s.receiver_ids.begin(), s.receiver_ids.end(), id) == s.receiver_ids.end())
                s.receiver_ids.push_back(id);
        }
        for (const auto &row : table.rows)
        {
            const double x = table.number(row, 0), y = table.number(row, 1), m = table.number(row, 3);
            const auto r = static_cast<size_t>(
                std::find(s.receiver_ids.begin(), s.receiver_ids.end(), row.fields[2]) - s.receiver_ids.begin());
            auto [it, inserted] = index.emplace(key(x, y), s.points.size());
            if (inserted)
                s.points.push_back({x, y, std::vector<double>(s.receiver_ids.size(), absent)});
            auto &p = s.points[it->second];
            if (is_present(p.m_db[r]))
                throw ConfigError(table.source, row.line, "duplicate survey value");
            p.m_db[r] = m;
        }
        return s;
    }
}

#endif
