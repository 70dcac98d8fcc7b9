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

#ifndef RADLOC_CLUSTERING_HPP
#define RADLOC_CLUSTERING_HPP

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <vector>

namespace radloc
{
    /// Min-max normalised, inverted MSE: the best match gets 1, the worst 0.
    /// If every value is equal all weights are 1.
    inline std::vector<double> normalize_weights(const std::vector<double> &mse)
    {
        if (mse.empty())
            throw EmptyInput("cannot normalise an empty MSE list");
        const auto [lo, hi] = std::minmax_element(mse.begin(), mse.end());
        const double min = *lo, max = *hi;
        std::vector<double> w(mse.size(), 1.0);
        if (max > min)
            for (size_t i = 0; i < mse.size(); ++i)
                w[i] = (max - mse[i]) / (max - min);
        return w;
    }

    inline constexpr int noise_label = -1;

    struct DbscanResult
    {
        std::vector<int> labels;   ///< cluster id per point, noise_label for outliers
        std::vector<char> is_core; ///< 1 for core points
        int cluster_count = 0;
    };

    /// DBSCAN over `n` points with a caller-supplied distance. A point is core when
    /// at least `min_pts` points (itself included) lie within `eps` (inclusive).
    /// Clusters are grown breadth-first from the lowest-index unvisited core point,
    /// so a border point reachable from two clusters joins the one discovered first.
    template <class Distance>
    DbscanResult dbscan(size_t n, double eps, size_t min_pts, Distance &&dist)
    {
        if (!(eps > 0.0) || min_pts < 1)
            throw Error("dbscan needs eps > 0 and minPts >= 1");
        DbscanResult r;
        r.labels.assign(n, noise_label);
        r.is_core.assign(n, 0);

        std::vector<std::vector<size_t>> neighbours(n);
        for (size_t i = 0; i < n; ++i)
        {
            neighbours[i].push_back(i);
            for (size_t j = i + 1; j < n; ++j)
                if (dist(i, j) <= eps)
                {
                    neighbours[i].push_back(j);
                    neighbours[j].push_back(i);
                }
        }
        for (size_t i = 0; i < n; ++i)
        {
            std::sort(neighbours[i].begin(), neighbours[i].end());
            r.is_core[i] = neighbours[i].size() >= min_pts;
        }

        std::vector<char> assigned(n, 0);
        std::deque<size_t> queue;
        for (size_t seed = 0; seed < n; ++seed)
        {
            if (!r.is_core[seed] || assigned[seed])
                continue;
            const int id = r.cluster_count++;
            assigned[seed] = 1;
            r.labels[seed] = id;
            queue.push_back(seed);
            while (!queue.empty())
            {
                const size_t p = queue.front();
                queue.pop_front();
                for (size_t q : neighbours[p])
                {
                    if (assigned[q])
                        continue;
                    assigned[q] = 1;
                    r.labels[q] = id;
                    if (r.is_core[q])
                        queue.push_back(q);
                }
            }
        }
        return r;
    }

    /// DBSCAN on the real line with the same labels as dbscan() under |a - b|.
    /// Core points chain into clusters through sorted neighbours; clusters are
    /// numbered by their lowest-index core point, and a border point joins the
    /// lowest-numbered cluster that has a core point within eps of it.
    inline DbscanResult dbscan_1d(const std::vector<double> &v, double eps, size_t min_pts)
    {
        if (!(eps > 0.0) || min_pts < 1)
            throw Error("dbscan needs eps > 0 and minPts >= 1");
        const size_t n = v.size();
        DbscanResult r;
        r.labels.assign(n, noise_label);
        r.is_core.assign(n, 0);
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });

        // neighbour range [lo, hi] in sorted order for each sorted position
        std::vector<size_t> lo(n), hi(n);
        for (size_t i = 0, l = 0, h = 0; i < n; ++i)
        {
            while (std::abs(v[order[i]] - v[order[l]]) > eps)
                ++l;
            if (h < i)
                h = i;
            while (h + 1 < n && std::abs(v[order[h + 1]] - v[order[i]]) <= eps)
                ++h;
            lo[i] = l;
            hi[i] = h;
            r.is_core[order[i]] = hi[i] - lo[i] + 1 >= min_pts;
        }

        // chains of consecutive core points (sorted order) within eps form one component
        std::vector<long> component(n, -1);
        std::vector<size_t> first_index;
        long comp = -1;
        long prev_core = -1;
        for (size_t i = 0; i < n; ++i)
        {
            if (!r.is_core[order[i]])
                continue;
            if (prev_core < 0 || std::abs(v[order[i]] - v[order[static_cast<size_t>(prev_core)]]) > eps)
            {
                ++comp;
                first_index.push_back(order[i]);
            }
            component[i] = comp;
            first_index[static_cast<size_t>(comp)] = std::min(first_index[static_cast<size_t>(comp)], order[i]);
            prev_core = static_cast<long>(i);
        }
        std::vector<size_t> rank_order(first_index.size());
        for (size_t c = 0; c < rank_order.size(); ++c)
            rank_order[c] = c;
        std::sort(rank_order.begin(), rank_order.end(),
                  [&](size_t a, size_t b) { return first_index[a] < first_index[b]; });
        std::vector<int> label_of(first_index.size());
        for (size_t k = 0; k < rank_order.size(); ++k)
            label_of[rank_order[k]] = static_cast<int>(k);
        r.cluster_count = static_cast<int>(first_index.size());

        for (size_t i = 0; i < n; ++i)
        {
            if (component[i] >= 0)
            {
                r.labels[order[i]] = label_of[static_cast<size_t>(component[i])];
                continue;
            }
            int best = noise_label;
            for (size_t j = lo[i]; j <= hi[i]; ++j)
                if (component[j] >= 0)
                {
                    const int l = label_of[static_cast<size_t>(component[j])];
                    if (best == noise_label || l < best)
                        best = l;
                }
            r.labels[order[i]] = best;
        }
        return r;
    }

    struct Cluster
    {
        std::vector<size_t> members; ///< indices into the clustered input, ascending
        std::vector<size_t> core;    ///< subset of members that are core points
        std::vector<double> centroid;
    };

    struct Clustering
    {
        std::vector<Cluster> clusters;
        std::vector<int> labels; ///< retained cluster per input point, noise_label otherwise
    };

    namespace detail
    {
        inline double weighted_mean(const std::vector<size_t> &idx, const std::vector<double> &values,
                                    const std::vector<double> &weights)
        {
            double sw = 0.0, swv = 0.0, sv = 0.0;
            for (size_t i : idx)
            {
                sw += weights[i];
                swv += weights[i] * values[i];
                sv += values[i];
            }
            // all-zero weights (every core point is the worst match) fall back to the plain mean
            return sw > 0.0 ? swv / sw : sv / static_cast<double>(idx.size());
        }
    }

    /// One-dimensional clustering of angles (degrees, [0, 360)). The data are
    /// copied to v - 360 and v + 360 so clusters can straddle the wrap; only
    /// clusters whose weighted core centroid lies in [0, 360) are kept, and each
    /// input point belongs to at most one kept cluster.
    inline Clustering cluster_angle_axis(const std::vector<double> &values, const std::vector<double> &weights,
                                         double eps = 2.0, size_t min_pts = 10)
    {
        if (values.size() != weights.size())
            throw Error("values and weights differ in length");
        const size_t n = values.size();
        std::vector<double> tri(3 * n), tri_w(3 * n);
        for (size_t c = 0; c < 3; ++c)
            for (size_t i = 0; i < n; ++i)
            {
                tri[c * n + i] = values[i] + (static_cast<double>(c) - 1.0) * 360.0;
                tri_w[c * n + i] = weights[i];
            }
        const auto db = dbscan_1d(tri, eps, min_pts);

        Clustering out;
        out.labels.assign(n, noise_label);
        for (int id = 0; id < db.cluster_count; ++id)
        {
            // de-duplicate copies of the same underlying point, keeping the first copy seen
            std::vector<int> copy_of(n, -1);
            std::vector<size_t> core_copies;
            std::vector<size_t> member_points;
            for (size_t t = 0; t < 3 * n; ++t)
            {
                if (db.labels[t] != id)
                    continue;
                const size_t p = t % n;
                if (copy_of[p] >= 0)
                    continue;
                copy_of[p] = static_cast<int>(t);
                member_points.push_back(p);
                if (db.is_core[t])
                    core_copies.push_back(t);
            }
            const double centroid = detail::weighted_mean(core_copies, tri, tri_w);
            if (!(centroid >= 0.0 && centroid < 360.0))
                continue;

            Cluster c;
            c.centroid = {centroid};
            const int retained = static_cast<int>(out.clusters.size());
            std::sort(member_points.begin(), member_points.end());
            for (size_t p : member_points)
            {
                if (out.labels[p] != noise_label)
                    continue;
                out.labels[p] = retained;
                c.members.push_back(p);
                if (db.is_core[static_cast<size_t>(copy_of[p])])
                    c.core.push_back(p);
            }
            if (c.members.empty())
                continue;
            out.clusters.push_back(std::move(c));
        }
        return out;
    }

    struct Point2
    {
        double x = 0.0, y = 0.0;
    };

    /// Euclidean DBSCAN of positions with weighted core-point centroids.
    inline Clustering cluster_positions(const std::vector<Point2> &points, const std::vector<double> &weights,
                                        double eps = 0.5, size_t min_pts = 10)
    {
        if (points.size() != weights.size())
            throw Error("points and weights differ in length");
        const auto db = dbscan(points.size(), eps, min_pts, [&](size_t a, size_t b) {
            return std::hypot(points[a].x - points[b].x, points[a].y - points[b].y);
        });
        Clustering out;
        out.labels = db.labels;
        out.clusters.resize(static_cast<size_t>(db.cluster_count));
        for (size_t i = 0; i < points.size(); ++i)
        {
            if (db.labels[i] == noise_label)
                continue;
            auto &c = out.clusters[static_cast<size_t>(db.labels[i])];
            c.members.push_back(i);
            if (db.is_core[i])
                c.core.push_back(i);
        }
        std::vector<double> xs(points.size()), ys(points.size());
        for (size_t i = 0; i < points.size(); ++i)
        {
            xs[i] = points[i].x;
            ys[i] = points[i].y;
        }
        for (auto &c : out.clusters)
            c.centroid = {detail::weighted_mean(c.core, xs, weights), detail::weighted_mean(c.core, ys, weights)};
        return out;
    }

    /// Weighted circular mean of angles in degrees, result in [0, 360).
    inline double circular_mean(const std::vector<double> &deg, const std::vector<double> &weights)
    {
        double s = 0.0, c = 0.0, sw = 0.0;
        for (size_t i = 0; i < deg.size(); ++i)
            sw += weights[i];
        const bool uniform = !(sw > 0.0);
        for (size_t i = 0; i < deg.size(); ++i)
        {
            const double w = uniform ? 1.0 : weights[i];
            const double r = deg[i] * 3.14159265358979323846 / 180.0;
            s += w * std::sin(r);
            c += w * std::cos(r);
        }
        double m = std::atan2(s, c) * 180.0 / 3.14159265358979323846;
        if (m < 0.0)
            m += 360.0;
        return m >= 360.0 ? 0.0 : m;
    }
}

#endif
