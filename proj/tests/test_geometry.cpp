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

#include "radloc/geometry.hpp"
#include "radloc/random.hpp"

#include <Eigen/Geometry>
#include <catch_amalgamated.hpp>

using namespace radloc;
using Catch::Approx;

namespace
{
    // Independent composition through Eigen's angle-axis rotations.
    Eigen::Matrix3d eigen_rotation(double az, double pitch, double roll)
    {
        const Eigen::Matrix3d r =
            (Eigen::AngleAxisd(deg_to_rad(roll), Eigen::Vector3d::UnitY()) *
             Eigen::AngleAxisd(deg_to_rad(pitch), Eigen::Vector3d::UnitX()) *
             Eigen::AngleAxisd(deg_to_rad(az), Eigen::Vector3d::UnitZ()))
                .toRotationMatrix();
        return r;
    }

    double max_abs_diff(const Matrix3 &a, const Eigen::Matrix3d &b)
    {
        double d = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                d = std::max(d, std::abs(a(i, j) - b(i, j)));
        return d;
    }
}

TEST_CASE("rotation matrix at zero and full turn is the identity")
{
    const auto id = Eigen::Matrix3d::Identity();
    CHECK(max_abs_diff(rotation_matrix(0, 0, 0), id) == 0.0);
    CHECK(max_abs_diff(rotation_matrix(360, 0, 0), id) < 1e-9);
    CHECK(max_abs_diff(rotation_matrix(360, 360, 360), id) < 1e-9);
}

TEST_CASE("rotation matrix composes roll, pitch and azimuth in that order")
{
    CHECK(max_abs_diff(rotation_matrix(37, 21, 64), eigen_rotation(37, 21, 64)) < 1e-12);
    // reverse order differs
    const Eigen::Matrix3d other = (Eigen::AngleAxisd(deg_to_rad(37), Eigen::Vector3d::UnitZ()) *
                                   Eigen::AngleAxisd(deg_to_rad(21), Eigen::Vector3d::UnitX()) *
                                   Eigen::AngleAxisd(deg_to_rad(64), Eigen::Vector3d::UnitY()))
                                      .toRotationMatrix();
    CHECK(max_abs_diff(rotation_matrix(37, 21, 64), other) > 1e-3);
}

TEST_CASE("rotation matrices are proper orthonormal")
{
    Rng rng(11);
    for (int i = 0; i < 1000; ++i)
    {
        const double a = rng.uniform(-720, 720), p = rng.uniform(-720, 720), r = rng.uniform(-720, 720);
        const Matrix3 m = rotation_matrix(a, p, r);
        const Matrix3 mmt = m * m.transposed();
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y)
                REQUIRE(mmt(x, y) == Approx(x == y ? 1.0 : 0.0).margin(1e-9));
        REQUIRE(m.determinant() == Approx(1.0).margin(1e-9));
        REQUIRE(max_abs_diff(m, eigen_rotation(a, p, r)) < 1e-9);
    }
}

TEST_CASE("relative direction of a receiver dead ahead and overhead")
{
    const Pose tx(0, 0, 0, 0);
    auto d = relative_direction(tx, {0, 1, 0});
    CHECK(d.azimuth == Approx(0.0).margin(1e-12));
    CHECK(d.elevation == Approx(90.0));
    d = relative_direction(tx, {0, 0, 1});
    CHECK(d.elevation == Approx(0.0).margin(1e-12));
    d = relative_direction(tx, {1, 0, 0});
    CHECK(d.azimuth == Approx(90.0));
    d = relative_direction(tx, {0, 0, -1});
    CHECK(d.elevation < 180.0);
    CHECK(d.elevation == Approx(180.0));
}

TEST_CASE("turning the device clockwise moves the receiver anticlockwise in the device frame")
{
    const Position rx{0, 5, 0};
    const double base = relative_direction(Pose(0, 0, 0, 0), rx).azimuth;
    for (double turn = 0; turn < 360; turn += 15)
    {
        const double az = relative_direction(Pose(0, 0, 0, turn), rx).azimuth;
        CHECK(angular_difference(az, wrap_degrees(base - turn)) < 1e-9);
        // an enrolment rig that turns the device by `turn` records the receiver at 360 - turn
        CHECK(angular_difference(az, wrap_degrees(360.0 - turn)) < 1e-9);
    }
    CHECK(relative_direction(Pose(0, 0, 0, 45), rx).azimuth == Approx(315.0));
}

TEST_CASE("relative direction ignores whole turns of any angle")
{
    Rng rng(5);
    for (int i = 0; i < 200; ++i)
    {
        const Position from{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(-1, 1)};
        const Position to{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(-1, 1)};
        const double a = rng.uniform(0, 360), p = rng.uniform(0, 360), r = rng.uniform(0, 360);
        const auto d0 = relative_direction(rotation_matrix(a, p, r), from, to);
        const auto d1 = relative_direction(rotation_matrix(a + 360, p - 360, r + 720), from, to);
        CHECK(angular_difference(d0.azimuth, d1.azimuth) < 1e-7);
        CHECK(d0.elevation == Approx(d1.elevation).margin(1e-7));
    }
}

TEST_CASE("relative direction of a co-located receiver is an error")
{
    CHECK_THROWS_AS(relative_direction(Pose(1, 2, 0, 30), {1, 2, 0}), ZeroDisplacement);
}

TEST_CASE("angular difference")
{
    CHECK(angular_difference(350, 10) == Approx(20));
    CHECK(angular_difference(90, 90) == 0.0);
    CHECK(angular_difference(0, 180) == Approx(180));
    CHECK(angular_difference(-30, 30) == Approx(60));
    Rng rng(3);
    for (int i = 0; i < 1000; ++i)
    {
        const double a = rng.uniform(-1000, 1000), b = rng.uniform(-1000, 1000), c = rng.uniform(-1000, 1000);
        const double ab = angular_difference(a, b);
        REQUIRE(ab == Approx(angular_difference(b, a)).margin(1e-9));
        REQUIRE(ab >= 0.0);
        REQUIRE(ab <= 180.0);
        REQUIRE(ab <= angular_difference(a, c) + angular_difference(c, b) + 1e-9);
    }
}

TEST_CASE("wrap degrees maps onto [0, 360)")
{
    CHECK(wrap_degrees(360) == 0.0);
    CHECK(wrap_degrees(-90) == Approx(270));
    CHECK(wrap_degrees(725) == Approx(5));
    CHECK(wrap_degrees(-1e-18) < 360.0);
}
