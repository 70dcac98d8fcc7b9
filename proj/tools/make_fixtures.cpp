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

// Regenerates the synthetic pattern fixtures under data/patterns.
//
// The rig fixtures are four full turns of a device on a motor at elevation 90.
// The phone-like slices are sums of a few harmonics plus a notch; the first one
// is scaled so that its enrolled pattern peaks at +5.06 dBi with its deepest
// trough at -12.29 dBi.

#include "radloc/pattern.hpp"
#include "radloc/pattern_io.hpp"
#include "radloc/random.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

using namespace radloc;

namespace
{
    const char *licence_lines[] = {
        "SPDX-License-Identifier: Apache-2.0",
        "",
        "radloc - orientation-aware RSS localisation using device radiation patterns",
        "Copyright (C) 2026 The radloc Authors",
        "",
        "Licensed under the Apache License, Version 2.0 (the \"License\");",
        "you may not use this file except in compliance with the License.",
        "You may obtain a copy of the License at",
        "http://www.apache.org/licenses/LICENSE-2.0",
        "",
        "Unless required by applicable law or agreed to in writing, software",
        "distributed under the License is distributed on an \"AS IS\" BASIS,",
        "WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.",
        "See the License for the specific language governing permissions and",
        "limitations under the License.",
        "------------------------------------------------------------------------",
    };

    /// Prepends the licence as '#' comment lines, which every reader skips.
    void stamp(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        std::stringstream body;
        body << in.rdbuf();
        std::string text;
        for (const char *l : licence_lines)
            text += *l ? std::string("# ") + l + "\n" : std::string("#\n");
        csv::write_atomic(path, text + body.str());
    }

    void stamp_pattern(const std::filesystem::path &csv_path)
    {
        stamp(csv_path);
        stamp(pattern_meta_path(csv_path));
    }

    struct SliceShape
    {
        std::array<double, 3> harmonic_gain;
        std::array<double, 3> harmonic_phase_deg;
        double notch_centre_deg;
        double notch_width_deg;
        double ripple_db;
        std::uint64_t seed;
    };

    double shape_db(const SliceShape &s, double lobe, double notch, double az_deg)
    {
        double v = 0.0;
        for (int h = 0; h < 3; ++h)
            v += s.harmonic_gain[h] * std::cos(deg_to_rad((h + 1) * az_deg - s.harmonic_phase_deg[h]));
        const double d = angular_difference(az_deg, s.notch_centre_deg) / s.notch_width_deg;
        return lobe * v - notch * std::exp(-0.5 * d * d);
    }

    std::vector<RawPatternSample> rig_samples(const SliceShape &s, double lobe, double notch)
    {
        Rng rng(s.seed);
        std::vector<RawPatternSample> out;
        for (int turn = 0; turn < 4; ++turn)
            for (int m = 0; m < 360; ++m)
            {
                const double motor = m + 0.1 * turn;
                // the receiver sits at 360 - motor in the device frame
                const double az = wrap_degrees(360.0 - motor);
                const double rss = -40.0 + shape_db(s, lobe, notch, az) + rng.normal(0.0, s.ripple_db);
                out.push_back({rss, motor, 90.0});
            }
        return out;
    }

    std::pair<double, double> extremes(const RadiationPattern &p)
    {
        const auto ring = p.grid().ring(90);
        const auto [lo, hi] = std::minmax_element(ring.begin(), ring.end());
        return {*hi, *lo};
    }

    /// Newton iteration on (lobe, notch) so the enrolled extremes hit the targets.
    std::pair<double, double> calibrate(const SliceShape &s, double want_max, double want_min)
    {
        EnrolmentOptions opt;
        opt.replicate_slice = true;
        auto f = [&](double a, double b) { return extremes(enroll_pattern(rig_samples(s, a, b), 1.0, opt)); };
        double a = 4.0, b = 8.0;
        for (int it = 0; it < 50; ++it)
        {
            const auto [mx, mn] = f(a, b);
            const double e1 = mx - want_max, e2 = mn - want_min;
            if (std::abs(e1) < 1e-7 && std::abs(e2) < 1e-7)
                break;
            const double h = 1e-4;
            const auto [mxa, mna] = f(a + h, b);
            const auto [mxb, mnb] = f(a, b + h);
            const double j11 = (mxa - mx) / h, j12 = (mxb - mx) / h, j21 = (mna - mn) / h, j22 = (mnb - mn) / h;
            const double det = j11 * j22 - j12 * j21;
            a -= (j22 * e1 - j12 * e2) / det;
            b -= (-j21 * e1 + j11 * e2) / det;
        }
        return {a, b};
    }

    void write_rig_fixture(const std::filesystem::path &dir, const std::string &id, const SliceShape &s, double lobe,
                           double notch, double tx_power)
    {
        const auto samples = rig_samples(s, lobe, notch);
        write_raw_samples(dir / (id + "_raw.csv"), samples);
        stamp(dir / (id + "_raw.csv"));
        EnrolmentOptions opt;
        opt.replicate_slice = true;
        const auto p = enroll_pattern(samples, 1.0, opt);
        write_pattern(dir / (id + ".csv"), p, {id, 1.0, tx_power});
        stamp_pattern(dir / (id + ".csv"));
        const auto [mx, mn] = extremes(p);
        std::printf("%-18s max %+.4f dBi  min %+.4f dBi\n", id.c_str(), mx, mn);
    }

    /// Mildly directional receiver: cardioid-like gain in the horizontal plane.
    RadiationPattern receiver_cardioid(double front_back_ratio)
    {
        AngularGrid g(1.0);
        const double k = (front_back_ratio - 1.0) / (front_back_ratio + 1.0);
        for (int a = 0; a < g.azimuth_cells(); ++a)
            for (int e = 0; e < g.elevation_cells(); ++e)
                g.at(a, e) = 10.0 * std::log10(1.0 + k * std::cos(deg_to_rad(a)));
        return directivity_from_rss(g);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Regenerate synthetic pattern fixtures"};
    std::string out = "data/patterns";
    app.add_option("--out", out, "output directory");
    CLI11_PARSE(app, argc, argv);

    const SliceShape a50{{0.60, 0.25, 0.15}, {40.0, -30.0, 80.0}, 215.0, 22.0, 0.15, 50};
    const SliceShape iphone{{0.45, 0.35, 0.20}, {150.0, 60.0, -20.0}, 30.0, 26.0, 0.15, 66};

    const auto [lobe, notch] = calibrate(a50, 5.06, -12.29);
    write_rig_fixture(out, "a50", a50, lobe, notch, 15.0);
    write_rig_fixture(out, "iphone6s", iphone, 3.6, 7.5, 15.0);
    write_pattern(std::filesystem::path(out) / "receiver_cardioid.csv", receiver_cardioid(2.0),
                  {"receiver_cardioid", 1.0, 0.0});
    stamp_pattern(std::filesystem::path(out) / "receiver_cardioid.csv");
    return 0;
}
