// SPDX-License-Identifier: Apache-2.0
//
// capa: mutual-coupling-aware beamforming for continuous aperture arrays
// Copyright (C) 2026 The capa authors
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

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace capa
{

using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Point or displacement in the aperture plane (z = 0), or a transverse wavevector.
struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double a) const { return {a * x, a * y}; }
    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline constexpr Vec3 lift(Vec2 s) { return {s.x, s.y, 0.0}; }

/// Rectangular planar aperture centred at the origin: |s_x| <= L_x/2, |s_y| <= L_y/2.
struct Aperture
{
    double length_x = 0.5;
    double length_y = 0.5;

    double area() const { return length_x * length_y; }
    double diagonal() const { return std::hypot(length_x, length_y); }
    bool contains(Vec2 s, double slack = 1e-12) const
    {
        return std::abs(s.x) <= 0.5 * length_x + slack && std::abs(s.y) <= 0.5 * length_y + slack;
    }
};

/// sin(t)/t with the removable singularity filled in.
inline double sinc(double t)
{
    if (std::abs(t) < 1e-8)
        return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

inline double deg2rad(double d) { return d * pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / pi; }

} // namespace capa
