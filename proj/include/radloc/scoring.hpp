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

#ifndef RADLOC_SCORING_HPP
#define RADLOC_SCORING_HPP

#include "environment.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "packet_sync.hpp"
#include "pattern.hpp"
#include "survey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <tuple>
#include <vector>

namespace radloc
{
    /// rss_expected = M_n + P_tx + D_t
    inline double expected_rss(double m_db, double tx_power_dbm, double directivity_dbi)
    {
        return m_db + tx_power_dbm + directivity_dbi;
    }

    /// Candidate positions (the interpolated grid) crossed with per-axis orientation lists.
    /// Orientation index = (azimuthIndex * pitches + pitchIndex) * rolls + rollIndex.
    struct CandidatePoseSpace
    {
        std::shared_ptr<const CandidateGrid> grid;
        std::vector<double> azimuths;
        std::vector<double> pitches{0.0};
        std::vector<double> rolls{0.0};

        /// Azimuth-only space with `step` degree resolution, as used for planar runs.
        static CandidatePoseSpace planar(std::shared_ptr<const CandidateGrid> grid, double step = 1.0)
        {
            CandidatePoseSpace s;
            s.grid = std::move(grid);
            s.azimuths = evenly_spaced(step);
            s.validate();
            return s;
        }

        static std::vector<double> evenly_spaced(double step)
        {
            const double n = 360.0 / step;
            if (!(step > 0.0) || std::abs(n - std::round(n)) > 1e-9)
                throw Error("orientation step must divide 360");
            std::vector<double> v(static_cast<size_t>(std::lround(n)));
            for (size_t i = 0; i < v.size(); ++i)
                v[i] = static_cast<double>(i) * step;
            return v;
        }

        void validate() const
        {
            if (!grid || grid->size() == 0)
                throw Error("candidate pose space has no positions");
            for (const auto *axis : {&azimuths, &pitches, &rolls})
            {
                if (axis->empty())
                    throw Error("candidate pose space has an empty orientation axis");
                for (double a : *axis)
                    if (!(a >= 0.0 && a < 360.0))
                        throw Error("candidate orientations must lie in [0, 360)");
            }
        }

        size_t orientation_count() const { return azimuths.size() * pitches.size() * rolls.size(); }
        size_t position_count() const { return grid->size(); }
        size_t size() const { return position_count() * orientation_count(); }

        Orientation orientation(size_t idx) const
        {
            const size_t r = idx % rolls.size();
            const size_t p = (idx / rolls.size()) % pitches.size();
            const size_t a = idx / (rolls.size() * pitches.size());
            return {azimuths[a], pitches[p], rolls[r]};
        }

        Pose pose(size_t position_index, size_t orientation_index) const
        {
            return Pose(grid->position(position_index), orientation(orientation_index));
        }

        bool azimuth_only() const
        {
            return pitches.size() == 1 && pitches[0] == 0.0 && rolls.size() == 1 && rolls[0] == 0.0;
        }
    };

    struct ScoredCandidate
    {
        size_t position_index = 0;
        size_t orientation_index = 0;
        Pose pose;
        double mse = 0.0;
    };

    /// Canonical ranking order: MSE, then position index, then orientation index.
    inline bool ranks_before(double mse_a, size_t pos_a, size_t ori_a, double mse_b, size_t pos_b, size_t ori_b)
    {
        return std::tie(mse_a, pos_a, ori_a) < std::tie(mse_b, pos_b, ori_b);
    }

    namespace detail
    {
        /// Receiver database entries aligned with the grid's channels.
        inline std::vector<Position> channel_positions(const CandidateGrid &grid, const std::vector<Receiver> &receivers)
        {
            std::vector<Position> out;
            for (const auto &id : grid.receiver_ids())
            {
                auto it = std::find_if(receivers.begin(), receivers.end(), [&](const Receiver &r) { return r.id == id; });
                if (it == receivers.end())
                    throw Error("survey channel '" + id + "' has no entry in the receiver database");
                out.push_back(it->pose.position);
            }
            return out;
        }

        /// Observed RSS per grid channel, NaN where the packet was not heard.
        inline std::vector<double> channel_rss(const CandidateGrid &grid, const PacketObservation &obs)
        {
            std::vector<double> a(grid.receiver_count(), absent);
            for (size_t r = 0; r < grid.receiver_count(); ++r)
            {
                auto it = obs.samples.find(grid.receiver_ids()[r]);
                if (it != obs.samples.end())
                    a[r] = it->second;
            }
            return a;
        }

        inline bool same_position(const Position &a, const Position &b)
        {
            return a.x == b.x && a.y == b.y && a.z == b.z;
        }
    }

    /// Reference scoring: every candidate pose, MSE over receivers present in both the
    /// observation and the candidate's survey cell, sorted in canonical ranking order.
    /// A receiver co-located with a candidate position has no defined direction and is
    /// skipped for that candidate.
    inline std::vector<ScoredCandidate> score_candidates(const PacketObservation &obs, const CandidatePoseSpace &space,
                                                         const std::vector<Receiver> &receivers,
                                                         const RadiationPattern &pattern, double tx_power_dbm)
    {
        space.validate();
        const auto &grid = *space.grid;
        const auto rx = detail::channel_positions(grid, receivers);
        const auto actual = detail::channel_rss(grid, obs);
        std::vector<Matrix3> rot(space.orientation_count());
        for (size_t o = 0; o < rot.size(); ++o)
            rot[o] = rotation_matrix(space.orientation(o));

        std::vector<ScoredCandidate> out;
        for (size_t p = 0; p < grid.size(); ++p)
        {
            const Position pos = grid.position(p);
            for (size_t o = 0; o < rot.size(); ++o)
            {
                double sum = 0.0;
                int n = 0;
                for (size_t r = 0; r < rx.size(); ++r)
                {
                    const double m = grid.m(p, r);
                    if (!is_present(actual[r]) || !is_present(m) || detail::same_position(pos, rx[r]))
                        continue;
                    const double d = pattern.lookup(relative_direction(rot[o], pos, rx[r]));
                    const double e = expected_rss(m, tx_power_dbm, d) - actual[r];
                    sum += e * e;
                    ++n;
                }
                if (n == 0)
                    continue;
                out.push_back({p, o, space.pose(p, o), sum / n});
            }
        }
        if (out.empty())
            throw NoUsableReceivers();
        std::sort(out.begin(), out.end(), [](const ScoredCandidate &a, const ScoredCandidate &b) {
            return ranks_before(a.mse, a.position_index, a.orientation_index, b.mse, b.position_index,
                                b.orientation_index);
        });
        return out;
    }

    struct EngineOptions
    {
        int tile = 8;         ///< positions per tile edge
        int block = 8;       ///< orientations per block
        size_t seed_entries = 24;
    };

    /// Precomputed expected-RSS machinery for one device over one candidate space.
    ///
    /// For azimuth-only spaces whose azimuths are multiples of the pattern step,
    /// turning the device by an azimuth shifts the pattern index of every receiver
    /// by the same amount, so D_t is a table lookup. Candidates are grouped into
    /// (position tile, orientation block) cells with precomputed directivity
    /// ranges, giving a lower bound on the MSE of everything inside a cell. The
    /// search expands cells in bound order and stops once no cell can beat the
    /// current k-th best, which returns exactly what score_candidates would.
    /// Other spaces fall back to exhaustive evaluation.
    class ScoringEngine
    {
    public:
        ScoringEngine(CandidatePoseSpace space, const std::vector<Receiver> &receivers, PatternPtr pattern,
                      double tx_power_dbm, EngineOptions options = {})
            : space_(std::move(space)), pattern_(std::move(pattern)), tx_power_(tx_power_dbm), opt_(options)
        {
            space_.validate();
            rx_ = detail::channel_positions(*space_.grid, receivers);
            fast_ = space_.azimuth_only();
            const double step = pattern_->step();
            for (double a : space_.azimuths)
            {
                const double s = a / step;
                if (std::abs(s - std::round(s)) > 1e-9)
                    fast_ = false;
                shifts_.push_back(static_cast<int>(std::lround(s)));
            }
            if (fast_)
                build_tables();
        }

        const CandidatePoseSpace &space() const { return space_; }
        const RadiationPattern &pattern() const { return *pattern_; }
        double tx_power() const { return tx_power_; }
        bool uses_fast_path() const { return fast_; }

        /// Exactly the first k entries of score_candidates(), without scoring everything.
        std::vector<ScoredCandidate> top_k(const PacketObservation &obs, size_t k) const
        {
            return top_k(detail::channel_rss(*space_.grid, obs), k);
        }

        std::vector<ScoredCandidate> top_k(const std::vector<double> &actual, size_t k) const
        {
            if (k == 0)
                return {};
            check_usable(actual);
            Heap heap(k);
            if (!fast_)
            {
                exhaustive([&](size_t p, size_t o, double mse) { heap.offer(mse, p, o); }, actual);
            }
            else
            {
                const auto bounds = cell_bounds(actual, false);
                search(bounds, actual, heap);
            }
            return finish(heap);
        }

        /// Calls f(position, orientation, value) for every candidate whose value is <= threshold.
        /// With `offset` set, the value is the MSE after removing the best constant offset from
        /// the residuals (an attacker who may adjust transmit power).
        template <class F>
        void for_each_within(const std::vector<double> &actual, double threshold, bool offset, F &&f) const
        {
            check_usable(actual);
            if (!fast_)
            {
                exhaustive_values(actual, offset, [&](size_t p, size_t o, double v) {
                    if (v <= threshold)
                        f(p, o, v);
                });
                return;
            }
            const auto bounds = cell_bounds(actual, offset);
            // bounds are exact in real arithmetic; the margin absorbs rounding in the offset form
            const double cut = threshold + std::abs(threshold) * 1e-9 + 1e-12;
            std::vector<double> values;
            for (size_t c = 0; c < bounds.size(); ++c)
            {
                if (bounds[c] > cut)
                    continue;
                eval_cell(c, actual, offset, [&](size_t p, size_t o, double v) {
                    if (v <= threshold)
                        f(p, o, v);
                });
            }
        }

        /// MSE of one candidate (same arithmetic as score_candidates), NaN if no receiver is usable.
        double candidate_mse(const std::vector<double> &actual, size_t p, size_t o) const
        {
            double v = 0.0;
            exhaustive_one(actual, p, o, false, v);
            return v;
        }

        /// Expected RSS per channel for one candidate (NaN where the survey has no value).
        std::vector<double> expected(size_t p, size_t o) const
        {
            const auto &grid = *space_.grid;
            const Position pos = grid.position(p);
            const Matrix3 rot = rotation_matrix(space_.orientation(o));
            std::vector<double> out(rx_.size(), absent);
            for (size_t r = 0; r < rx_.size(); ++r)
            {
                const double m = grid.m(p, r);
                if (!is_present(m) || detail::same_position(pos, rx_[r]))
                    continue;
                out[r] = expected_rss(m, tx_power_, pattern_->lookup(relative_direction(rot, pos, rx_[r])));
            }
            return out;
        }

    private:
        struct Entry
        {
            double mse;
            size_t pos, ori;
        };

        struct Heap
        {
            explicit Heap(size_t k) : k(k) {}
            size_t k;
            std::vector<Entry> items;

            static bool less(const Entry &a, const Entry &b)
            {
                return ranks_before(a.mse, a.pos, a.ori, b.mse, b.pos, b.ori);
            }

            double threshold() const
            {
                return items.size() < k ? std::numeric_limits<double>::infinity() : items.front().mse;
            }

            void offer(double mse, size_t p, size_t o)
            {
                const Entry e{mse, p, o};
                if (items.size() < k)
                {
                    items.push_back(e);
                    std::push_heap(items.begin(), items.end(), less);
                }
                else if (less(e, items.front()))
                {
                    std::pop_heap(items.begin(), items.end(), less);
                    items.back() = e;
                    std::push_heap(items.begin(), items.end(), less);
                }
            }
        };

        std::vector<ScoredCandidate> finish(Heap &heap) const
        {
            std::sort_heap(heap.items.begin(), heap.items.end(), Heap::less);
            std::vector<ScoredCandidate> out;
            out.reserve(heap.items.size());
            for (const auto &e : heap.items)
                out.push_back({e.pos, e.ori, space_.pose(e.pos, e.ori), e.mse});
            return out;
        }

        void check_usable(const std::vector<double> &actual) const
        {
            if (actual.size() != rx_.size())
                throw Error("observation vector does not match the survey channels");
            if (std::none_of(actual.begin(), actual.end(), [](double v) { return is_present(v); }))
                throw NoUsableReceivers();
        }

        // ---- exhaustive route ------------------------------------------------

        bool exhaustive_one(const std::vector<double> &actual, size_t p, size_t o, bool offset, double &value) const
        {
            const auto &grid = *space_.grid;
            const Position pos = grid.position(p);
            const Matrix3 rot = rotation_matrix(space_.orientation(o));
            double sum = 0.0;
            int n = 0;
            double es[16];
            std::vector<double> big;
            double *buf = es;
            if (rx_.size() > 16)
            {
                big.resize(rx_.size());
                buf = big.data();
            }
            for (size_t r = 0; r < rx_.size(); ++r)
            {
                const double m = grid.m(p, r);
                if (!is_present(actual[r]) || !is_present(m) || detail::same_position(pos, rx_[r]))
                    continue;
                const double d = pattern_->lookup(relative_direction(rot, pos, rx_[r]));
                const double e = expected_rss(m, tx_power_, d) - actual[r];
                buf[n] = e;
                sum += e * e;
                ++n;
            }
            if (n == 0)
            {
                value = absent;
                return false;
            }
            value = offset ? offset_mse(buf, n) : sum / n;
            return true;
        }

        template <class F>
        void exhaustive(F &&f, const std::vector<double> &actual) const
        {
            exhaustive_values(actual, false, f);
        }

        template <class F>
        void exhaustive_values(const std::vector<double> &actual, bool offset, F &&f) const
        {
            for (size_t p = 0; p < space_.position_count(); ++p)
                for (size_t o = 0; o < space_.orientation_count(); ++o)
                {
                    double v;
                    if (exhaustive_one(actual, p, o, offset, v))
                        f(p, o, v);
                }
        }

        static double offset_mse(const double *e, int n)
        {
            double mean = 0.0;
            for (int i = 0; i < n; ++i)
                mean += e[i];
            mean /= n;
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += (e[i] - mean) * (e[i] - mean);
            return s / n;
        }

        // ---- fast route ------------------------------------------------------

        void build_tables()
        {
            const auto &grid = *space_.grid;
            const auto &pg = pattern_->grid();
            n_az_ = pg.azimuth_cells();
            const size_t R = rx_.size();
            const size_t P = grid.size();
            c_.assign(P * R, absent);
            az_.assign(P * R, 0);
            ring_.assign(P * R, 0);
            colocated_.assign(P * R, 0);
            for (size_t p = 0; p < P; ++p)
            {
                const Position pos = grid.position(p);
                for (size_t r = 0; r < R; ++r)
                {
                    const double m = grid.m(p, r);
                    if (detail::same_position(pos, rx_[r]))
                    {
                        colocated_[p * R + r] = 1;
                        continue;
                    }
                    const Direction d = relative_direction(Matrix3::identity(), pos, rx_[r]);
                    az_[p * R + r] = pg.azimuth_index(d.azimuth);
                    ring_[p * R + r] = pg.elevation_index(d.elevation);
                    if (is_present(m))
                        c_[p * R + r] = m + tx_power_;
                }
            }
            // rings stored twice over
            rings_.assign(static_cast<size_t>(pg.elevation_cells()) * 2 * n_az_, 0.0);
            for (int e = 0; e < pg.elevation_cells(); ++e)
                for (int a = 0; a < 2 * n_az_; ++a)
                    rings_[static_cast<size_t>(e) * 2 * n_az_ + a] = pg.at(a % n_az_, e);

            // orientation blocks
            const int K = static_cast<int>(space_.azimuths.size());
            for (int k0 = 0; k0 < K; k0 += opt_.block)
                blocks_.push_back({k0, std::min(K, k0 + opt_.block)});

            // position tiles
            const int T = opt_.tile;
            for (int ty = 0; ty < grid.ny(); ty += T)
                for (int tx = 0; tx < grid.nx(); tx += T)
                    tiles_.push_back({tx, ty, std::min(grid.nx(), tx + T), std::min(grid.ny(), ty + T)});

            // per (tile, receiver): value range and bearing arc; per (tile, block, receiver): directivity range
            tile_info_.assign(tiles_.size() * R, {});
            dir_lo_.assign(tiles_.size() * blocks_.size() * R, 0.0);
            dir_hi_.assign(tiles_.size() * blocks_.size() * R, 0.0);
            for (size_t t = 0; t < tiles_.size(); ++t)
            {
                for (size_t r = 0; r < R; ++r)
                {
                    TileInfo info;
                    int ref = -1, off_lo = 0, off_hi = 0;
                    bool first = true;
                    for_tile_positions(t, [&](size_t p) {
                        const size_t i = p * R + r;
                        const bool present = is_present(c_[i]) && !colocated_[i];
                        if (first)
                        {
                            info.present = present;
                            first = false;
                        }
                        else if (present != info.present)
                            info.uniform = false;
                        if (!present)
                            return;
                        info.c_lo = std::min(info.c_lo, c_[i]);
                        info.c_hi = std::max(info.c_hi, c_[i]);
                        info.ring_lo = std::min(info.ring_lo, ring_[i]);
                        info.ring_hi = std::max(info.ring_hi, ring_[i]);
                        if (ref < 0)
                            ref = az_[i];
                        int d = ((az_[i] - ref) % n_az_ + n_az_) % n_az_;
                        if (d > n_az_ / 2)
                            d -= n_az_;
                        off_lo = std::min(off_lo, d);
                        off_hi = std::max(off_hi, d);
                    });
                    if (ref >= 0)
                    {
                        info.arc_start = ((ref + off_lo) % n_az_ + n_az_) % n_az_;
                        info.arc_len = off_hi - off_lo;
                        if (info.arc_len >= n_az_ / 2)
                            info.arc_len = n_az_; // too wide to trust; use the whole ring
                    }
                    tile_info_[t * R + r] = info;

                    for (size_t b = 0; b < blocks_.size(); ++b)
                    {
                        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                        if (info.present && ref >= 0)
                        {
                            int s_lo = shifts_[blocks_[b].first], s_hi = s_lo;
                            for (int k = blocks_[b].first; k < blocks_[b].second; ++k)
                            {
                                s_lo = std::min(s_lo, shifts_[k]);
                                s_hi = std::max(s_hi, shifts_[k]);
                            }
                            const int len = info.arc_len + (s_hi - s_lo);
                            const int start = ((info.arc_start - s_hi) % n_az_ + n_az_) % n_az_;
                            for (int e = info.ring_lo; e <= info.ring_hi; ++e)
                            {
                                const double *ring = &rings_[static_cast<size_t>(e) * 2 * n_az_];
                                if (len >= n_az_ - 1)
                                {
                                    for (int a = 0; a < n_az_; ++a)
                                    {
                                        lo = std::min(lo, ring[a]);
                                        hi = std::max(hi, ring[a]);
                                    }
                                }
                                else
                                {
                                    for (int a = start; a <= start + len; ++a)
                                    {
                                        lo = std::min(lo, ring[a]);
                                        hi = std::max(hi, ring[a]);
                                    }
                                }
                            }
                        }
                        dir_lo_[(t * blocks_.size() + b) * R + r] = lo;
                        dir_hi_[(t * blocks_.size() + b) * R + r] = hi;
                    }
                }
            }
        }

        template <class F>
        void for_tile_positions(size_t t, F &&f) const
        {
            const auto &tile = tiles_[t];
            const int nx = space_.grid->nx();
            for (int y = tile.y0; y < tile.y1; ++y)
                for (int x = tile.x0; x < tile.x1; ++x)
                    f(static_cast<size_t>(y) * nx + x);
        }

        /// Lower bound per (tile, block) cell on the MSE (or offset MSE) of its candidates.
        std::vector<double> cell_bounds(const std::vector<double> &actual, bool offset) const
        {
            const size_t R = rx_.size(), B = blocks_.size();
            std::vector<double> out(tiles_.size() * B, 0.0);
            double lo_r[64], hi_r[64];
            for (size_t t = 0; t < tiles_.size(); ++t)
            {
                bool uniform = true;
                for (size_t r = 0; r < R; ++r)
                    if (is_present(actual[r]) && !tile_info_[t * R + r].uniform)
                        uniform = false;
                if (!uniform || R > 64)
                    continue; // mixed receiver sets inside the tile: no bound, always expanded
                for (size_t b = 0; b < B; ++b)
                {
                    int n = 0;
                    double sum = 0.0;
                    for (size_t r = 0; r < R; ++r)
                    {
                        const auto &info = tile_info_[t * R + r];
                        if (!is_present(actual[r]) || !info.present)
                            continue;
                        const size_t i = (t * B + b) * R + r;
                        const double lo = (info.c_lo + dir_lo_[i]) - actual[r];
                        const double hi = (info.c_hi + dir_hi_[i]) - actual[r];
                        lo_r[n] = lo;
                        hi_r[n] = hi;
                        const double gap = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
                        sum += gap * gap;
                        ++n;
                    }
                    if (n == 0)
                        out[t * B + b] = std::numeric_limits<double>::infinity();
                    else
                        out[t * B + b] = offset ? offset_bound(lo_r, hi_r, n) : sum / n;
                }
            }
            return out;
        }

        /// min over d of mean_r dist(d, [lo_r, hi_r])^2: a convex piecewise quadratic,
        /// minimised exactly over the segments between interval endpoints.
        static double offset_bound(const double *lo, const double *hi, int n)
        {
            double pts[128];
            int m = 0;
            for (int i = 0; i < n; ++i)
            {
                pts[m++] = lo[i];
                pts[m++] = hi[i];
            }
            std::sort(pts, pts + m);
            auto f = [&](double d) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                {
                    const double g = d < lo[i] ? lo[i] - d : (d > hi[i] ? d - hi[i] : 0.0);
                    s += g * g;
                }
                return s / n;
            };
            double best = std::numeric_limits<double>::infinity();
            for (int s = 0; s <= m; ++s)
            {
                const double a = s == 0 ? -std::numeric_limits<double>::infinity() : pts[s - 1];
                const double b = s == m ? std::numeric_limits<double>::infinity() : pts[s];
                // on (a, b) each interval is either left, right or containing d
                double num = 0.0;
                int cnt = 0;
                const double mid = std::isfinite(a) && std::isfinite(b) ? 0.5 * (a + b)
                                   : std::isfinite(a)                   ? a + 1.0
                                   : std::isfinite(b)                   ? b - 1.0
                                                                        : 0.0;
                for (int i = 0; i < n; ++i)
                {
                    if (mid < lo[i])
                    {
                        num += lo[i];
                        ++cnt;
                    }
                    else if (mid > hi[i])
                    {
                        num += hi[i];
                        ++cnt;
                    }
                }
                double d = cnt ? num / cnt : mid;
                d = std::clamp(d, a, b);
                best = std::min(best, f(d));
            }
            return std::max(0.0, best);
        }

        template <class F>
        void eval_cell(size_t cell, const std::vector<double> &actual, bool offset, F &&f) const
        {
            const size_t B = blocks_.size(), R = rx_.size();
            const size_t t = cell / B, b = cell % B;
            const int k0 = blocks_[b].first, k1 = blocks_[b].second;
            double cs[64], as[64];
            const double *rp[64];
            int az[64];
            for_tile_positions(t, [&](size_t p) {
                int n = 0;
                for (size_t r = 0; r < R; ++r)
                {
                    const size_t i = p * R + r;
                    if (!is_present(actual[r]) || !is_present(c_[i]) || colocated_[i])
                        continue;
                    cs[n] = c_[i];
                    as[n] = actual[r];
                    az[n] = az_[i] + n_az_; // keep (az - shift) non-negative
                    rp[n] = &rings_[static_cast<size_t>(ring_[i]) * 2 * n_az_];
                    ++n;
                }
                if (n == 0)
                    return;
                for (int k = k0; k < k1; ++k)
                {
                    const int s = shifts_[k];
                    double sum = 0.0;
                    double es[64];
                    for (int j = 0; j < n; ++j)
                    {
                        int idx = az[j] - s;
                        if (idx >= 2 * n_az_)
                            idx -= n_az_;
                        const double e = (cs[j] + rp[j][idx]) - as[j];
                        es[j] = e;
                        sum += e * e;
                    }
                    f(p, static_cast<size_t>(k), offset ? offset_mse(es, n) : sum / n);
                }
            });
        }

        void search(const std::vector<double> &bounds, const std::vector<double> &actual, Heap &heap) const
        {
            std::vector<size_t> order(bounds.size());
            std::iota(order.begin(), order.end(), size_t{0});
            const size_t seed = std::min(order.size(), opt_.seed_entries);
            auto by_bound = [&](size_t a, size_t b) { return std::tie(bounds[a], a) < std::tie(bounds[b], b); };
            std::partial_sort(order.begin(), order.begin() + seed, order.end(), by_bound);
            std::vector<char> done(bounds.size(), 0);
            auto expand = [&](size_t c) {
                done[c] = 1;
                eval_cell(c, actual, false, [&](size_t p, size_t o, double v) { heap.offer(v, p, o); });
            };
            for (size_t i = 0; i < seed; ++i)
            {
                if (bounds[order[i]] > heap.threshold())
                    break;
                expand(order[i]);
            }
            for (size_t c = 0; c < bounds.size(); ++c)
                if (!done[c] && bounds[c] <= heap.threshold())
                    expand(c);
        }

        struct TileInfo
        {
            bool present = false;
            bool uniform = true;
            double c_lo = std::numeric_limits<double>::infinity();
            double c_hi = -std::numeric_limits<double>::infinity();
            int ring_lo = std::numeric_limits<int>::max();
            int ring_hi = std::numeric_limits<int>::min();
            int arc_start = 0;
            int arc_len = 0;
        };

        struct Tile
        {
            int x0, y0, x1, y1;
        };

        CandidatePoseSpace space_;
        PatternPtr pattern_;
        double tx_power_;
        EngineOptions opt_;
        std::vector<Position> rx_;
        bool fast_ = false;
        std::vector<int> shifts_;

        int n_az_ = 0;
        std::vector<double> c_;
        std::vector<int> az_, ring_;
        std::vector<char> colocated_;
        std::vector<double> rings_;
        std::vector<std::pair<int, int>> blocks_;
        std::vector<Tile> tiles_;
        std::vector<TileInfo> tile_info_;
        std::vector<double> dir_lo_, dir_hi_;
    };
}

#endif
