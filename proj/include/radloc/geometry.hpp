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

#ifndef RADLOC_GEOMETRY_HPP
#define RADLOC_GEOMETRY_HPP

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

// Axis conventions
//
// The environment is a right-handed cartesian frame, x and y horizontal, z up.
// A device at rest lies flat, screen up, with its top pointing along +y.
// Azimuth rotates the device about z (clockwise seen from above, like a compass
// heading), pitch rotates about x and roll about y. All angles are degrees.
//
// Pattern coordinates: relative azimuth is measured in the device's horizontal
// plane from the device top, increasing clockwise seen from above; relative
// elevation is measured from the device's +z axis (0 = straight up, 90 = in plane).
// These choices make "pattern azimuth = 360 - motor azimuth" the correct inversion
// for a device turned clockwise on an enrolment rig.

namespace radloc
{
    using Vec3 = std::array<double, 3>;

    struct Matrix3
    {
        std::array<std::array<double, 3>, 3> m{};

        static Matrix3 identity()
        {
            Matrix3 r;
            r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
            return r;
        }

        double operator()(int row, int col) const { return m[row][col]; }
        double &operator()(int row, int col) { return m[row][col]; }

        friend Matrix3 operator*(const Matrix3 &a, const Matrix3 &b)
        {
            Matrix3 r;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
            return r;
        }

        friend Vec3 operator*(const Matrix3 &a, const Vec3 &v)
        {
            return {a.m[0][0] * v[0] + a.m[0][1] * v[1] + a.m[0][2] * v[2],
                    a.m[1][0] * v[0] + a.m[1][1] * v[1] + a.m[1][2] * v[2],
                    a.m[2][0] * v[0] + a.m[2][1] * v[1] + a.m[2][2] * v[2]};
        }

        Matrix3 transposed() const
        {
            Matrix3 r;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    r.m[i][j] = m[j][i];
            return r;
        }

        double determinant() const
        {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        }
    };

    inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
    inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

    /// Maps any finite angle onto [0, 360).
    inline double wrap_degrees(double deg)
    {
        double r = std::fmod(deg, 360.0);
        if (r < 0.0)
            r += 360.0;
        // fmod of a tiny negative value can round up to exactly 360
        if (r >= 360.0)
            r = 0.0;
        return r;
    }

    /// Shortest arc between two angles, in [0, 180].
    inline double angular_difference(double a, double b)
    {
        const double d = wrap_degrees(a - b);
        return d > 180.0 ? 360.0 - d : d;
    }

    struct Position
    {
        double x = 0.0, y = 0.0, z = 0.0;

        friend bool operator==(const Position &, const Position &) = default;
    };

    inline double distance(const Position &a, const Position &b)
    {
        return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
    }

    struct Orientation
    {
        double azimuth = 0.0, pitch = 0.0, roll = 0.0;

        friend bool operator==(const Orientation &, const Orientation &) = default;
    };

    struct Pose
    {
        Position position;
        Orientation orientation;

        Pose() = default;
        Pose(Position p, Orientation o)
            : position(p), orientation{wrap_degrees(o.azimuth), wrap_degrees(o.pitch), wrap_degrees(o.roll)} {}
        Pose(double x, double y, double z, double azimuth, double pitch = 0.0, double roll = 0.0)
            : Pose(Position{x, y, z}, Orientation{azimuth, pitch, roll}) {}
    };

    /// Direction from a device in its own pattern coordinates.
    struct Direction
    {
        double azimuth = 0.0;   ///< [0, 360)
        double elevation = 0.0; ///< [0, 180)
    };

    // Elementary rotations. Each is the standard right-handed rotation matrix about its axis.

    inline Matrix3 rotation_about_z(double deg)
    {
        const double c = std::cos(deg_to_rad(deg)), s = std::sin(deg_to_rad(deg));
        Matrix3 r;
        r.m = {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
        return r;
    }

    inline Matrix3 rotation_about_x(double deg)
    {
        const double c = std::cos(deg_to_rad(deg)), s = std::sin(deg_to_rad(deg));
        Matrix3 r;
        r.m = {{{1.0, 0.0, 0.0}, {0.0, c, -s}, {0.0, s, c}}};
        return r;
    }

    inline Matrix3 rotation_about_y(double deg)
    {
        const double c = std::cos(deg_to_rad(deg)), s = std::sin(deg_to_rad(deg));
        Matrix3 r;
        r.m = {{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}};
        return r;
    }

    /// Composed world-to-device rotation R * P * A for roll, pitch and azimuth.
    inline Matrix3 rotation_matrix(double azimuth, double pitch, double roll)
    {
        return rotation_about_y(wrap_degrees(roll)) * rotation_about_x(wrap_degrees(pitch)) *
               rotation_about_z(wrap_degrees(azimuth));
    }

    inline Matrix3 rotation_matrix(const Orientation &o)
    {
        return rotation_matrix(o.azimuth, o.pitch, o.roll);
    }

    /// Converts a device-frame vector to pattern coordinates. The vector must be non-zero.
    inline Direction to_direction(const Vec3 &v)
    {
        const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (!(r > 0.0))
            throw ZeroDisplacement();
        Direction d;
        d.azimuth = wrap_degrees(rad_to_deg(std::atan2(v[0], v[1])));
        const double c = std::clamp(v[2] / r, -1.0, 1.0);
        d.elevation = rad_to_deg(std::acos(c));
        if (d.elevation >= 180.0)
            d.elevation = std::nextafter(180.0, 0.0);
        return d;
    }

    /// Direction of a receiver as seen in the pattern frame of a device with the given pose.
    inline Direction relative_direction(const Matrix3 &rotation, const Position &from, const Position &to)
    {
        const Vec3 delta{to.x - from.x, to.y - from.y, to.z - from.z};
        if (delta[0] == 0.0 && delta[1] == 0.0 && delta[2] == 0.0)
            throw ZeroDisplacement();
        return to_direction(rotation * delta);
    }

    inline Direction relative_direction(const Pose &tx, const Position &rx)
    {
        return relative_direction(rotation_matrix(tx.orientation), tx.position, rx);
    }
}

#endif
