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

// Closed-form electromagnetics of a y-polarised planar source: Green's
// functions, the spatial and wavenumber-domain radiation coupling kernels,
// kernel nulls and the far-field channel. Phase convention is e^{+j k r}
// for outgoing waves throughout.

#pragma once

#include "capa/error.hpp"
#include "capa/types.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace capa
{

inline constexpr double speed_of_light = 299'792'458.0;  // m/s
inline constexpr double free_space_impedance = 120.0 * pi; // Ohm

struct Material
{
    double permeability; // H/m
    double conductivity; // S/m
};

inline constexpr Material copper{4e-7 * pi, 5.8e7};

/// Free-space wavenumber 2*pi*f/c in rad/m.
inline double wavenumber_of(double frequency)
{
    detail::require(frequency > 0.0 && std::isfinite(frequency), ErrorKind::domain, "physics",
                    "frequency must be positive, got " + std::to_string(frequency));
    return 2.0 * pi * frequency / speed_of_light;
}

/// Good-conductor surface resistance sqrt(pi f mu / sigma).
inline double surface_resistance(double permeability, double conductivity, double frequency)
{
    detail::require(permeability > 0.0 && conductivity > 0.0 && frequency > 0.0, ErrorKind::domain, "physics",
                    "surface_resistance requires positive permeability, conductivity and frequency");
    return std::sqrt(pi * frequency * permeability / conductivity);
}

struct PhysicalConfig
{
    double frequency = 0.0;          // Hz
    double wavelength = 0.0;         // m
    double wavenumber = 0.0;         // rad/m
    double impedance = free_space_impedance;
    Material material = copper;
    double surface_resistance = 0.0; // Ohm

    static PhysicalConfig from_material(double frequency, Material m = copper)
    {
        PhysicalConfig c;
        c.frequency = frequency;
        c.wavenumber = wavenumber_of(frequency);
        c.wavelength = speed_of_light / frequency;
        c.material = m;
        c.surface_resistance = capa::surface_resistance(m.permeability, m.conductivity, frequency);
        return c;
    }

    /// Same as from_material() but with Z_s forced to a given value (surface
    /// resistance sweeps). The material field is kept only for reporting.
    static PhysicalConfig with_resistance(double frequency, double zs)
    {
        detail::require(zs > 0.0, ErrorKind::domain, "physics", "surface resistance must be positive");
        PhysicalConfig c = from_material(frequency);
        c.surface_resistance = zs;
        return c;
    }
};

/// Scalar Green's function e^{j k |s|} / (4 pi |s|).
inline cdouble scalar_green(Vec3 s, double wavenumber)
{
    const double r = s.norm();
    detail::require(r > 0.0, ErrorKind::singularity, "physics", "scalar Green's function is singular at |s| = 0");
    return std::polar(1.0 / (4.0 * pi * r), wavenumber * r);
}

enum class KernelModel
{
    polarized, // full y-polarised kernel  k Z0 (phi + k^-2 d^2_y phi)
    isotropic  // phi term only (idealised isotropic radiator)
};

namespace detail
{
// Below this value of k|s| the closed form loses digits to cancellation in
// d^2 phi / dr^2; the spherical-Bessel Taylor series is used instead.
inline constexpr double kernel_series_threshold = 0.05;

// c_rad = k^2 Z0 / (12 pi) [2 j0(e) + (3u - 1) j2(e)],  u = (s_y / r)^2.
inline double radiation_kernel_series(double eps, double u, double wavenumber, double impedance, KernelModel model)
{
    const double e2 = eps * eps;
    const double j0 = 1.0 - e2 / 6.0 * (1.0 - e2 / 20.0 * (1.0 - e2 / 42.0 * (1.0 - e2 / 72.0)));
    const double scale = wavenumber * wavenumber * impedance;
    if (model == KernelModel::isotropic)
        return scale / (4.0 * pi) * j0;
    const double j2 = e2 / 15.0 * (1.0 - e2 / 14.0 * (1.0 - e2 / 36.0 * (1.0 - e2 / 66.0)));
    return scale / (12.0 * pi) * (2.0 * j0 + (3.0 * u - 1.0) * j2);
}
} // namespace detail

/// Radiation mutual-coupling kernel c_rad(s) for a y-polarised current.
///
/// Evaluated by the chain rule d^2_y phi = phi''(r) (s_y/r)^2 + phi'(r) (1 - (s_y/r)^2) / r
/// with phi(r) = sin(k r) / (4 pi r). Near the origin a Taylor series takes
/// over; c_rad(0) = k^2 Z0 / (6 pi) (isotropic: k^2 Z0 / (4 pi)).
inline double radiation_kernel(Vec2 s, double wavenumber, double impedance = free_space_impedance,
                               KernelModel model = KernelModel::polarized)
{
    const double r = s.norm();
    const double eps = wavenumber * r;
    const double u = r > 0.0 ? (s.y / r) * (s.y / r) : 0.0;
    if (eps < detail::kernel_series_threshold)
        return detail::radiation_kernel_series(eps, u, wavenumber, impedance, model);

    const double sn = std::sin(eps);
    const double cs = std::cos(eps);
    const double phi = sn / (4.0 * pi * r);
    if (model == KernelModel::isotropic)
        return wavenumber * impedance * phi;

    const double dphi = (eps * cs - sn) / (4.0 * pi * r * r);
    const double d2phi = (-eps * eps * sn - 2.0 * eps * cs + 2.0 * sn) / (4.0 * pi * r * r * r);
    const double dyy = d2phi * u + dphi * (1.0 - u) / r;
    return wavenumber * impedance * (phi + dyy / (wavenumber * wavenumber));
}

/// Value of the kernel at zero displacement.
inline double radiation_kernel_peak(double wavenumber, double impedance = free_space_impedance,
                                    KernelModel model = KernelModel::polarized)
{
    const double scale = wavenumber * wavenumber * impedance;
    return model == KernelModel::polarized ? scale / (6.0 * pi) : scale / (4.0 * pi);
}

/// Wavenumber-domain kernel C_rad(kappa); supported on the disk |kappa| <= k0.
/// Throws on the rim |kappa| = k0 where it diverges.
inline double wavenumber_kernel(Vec2 kappa, double wavenumber, double impedance = free_space_impedance)
{
    const double k2 = wavenumber * wavenumber;
    const double radial = (kappa.x * kappa.x + kappa.y * kappa.y) / k2;
    if (radial > 1.0)
        return 0.0;
    detail::require(radial < 1.0, ErrorKind::singularity, "physics",
                    "wavenumber kernel diverges on the visible-region rim |kappa| = k0");
    return impedance * (1.0 - kappa.y * kappa.y / k2) / (2.0 * std::sqrt(1.0 - radial));
}

/// Left-hand side of the kernel null condition at eps = k r with u = (s_y/r)^2:
///   (eps^2 - 1) sin eps + eps cos eps - u ((eps^2 - 3) sin eps + 3 eps cos eps)
/// which equals 4 pi r^3 k^2 (phi + k^-2 d^2_y phi). Isotropic model: sin eps.
inline double null_condition(double eps, double u, KernelModel model = KernelModel::polarized)
{
    const double sn = std::sin(eps);
    const double cs = std::cos(eps);
    if (model == KernelModel::isotropic)
        return sn;
    return (eps * eps - 1.0) * sn + eps * cs - u * ((eps * eps - 3.0) * sn + 3.0 * eps * cs);
}

/// First `count` positive roots eps = k r of the null condition along the
/// ray with direction cosine s_y / r. Grid bracketing (step pi/50) followed by
/// bisection to 1e-10.
inline std::vector<double> kernel_nulls(double sy_over_r, int count, KernelModel model = KernelModel::polarized)
{
    detail::require(std::abs(sy_over_r) <= 1.0, ErrorKind::domain, "physics", "|s_y / r| must not exceed 1");
    detail::require(count >= 1, ErrorKind::domain, "physics", "root count must be positive");

    const double u = sy_over_r * sy_over_r;
    const double step = pi / 50.0;
    const double limit = count * 4.0 * pi;
    auto f = [&](double e) { return null_condition(e, u, model); };

    std::vector<double> roots;
    double lo = step;
    double flo = f(lo);
    while (static_cast<int>(roots.size()) < count && lo < limit)
    {
        const double hi = lo + step;
        const double fhi = f(hi);
        if (flo == 0.0)
        {
            roots.push_back(lo);
        }
        else if (std::signbit(flo) != std::signbit(fhi) && fhi != 0.0)
        {
            double a = lo, b = hi, fa = flo;
            while (b - a > 1e-10)
            {
                const double mid = 0.5 * (a + b);
                const double fm = f(mid);
                if (fm == 0.0)
                {
                    a = b = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(fa))
                {
                    a = mid;
                    fa = fm;
                }
                else
                {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        lo = hi;
        flo = fhi;
    }
    detail::require(static_cast<int>(roots.size()) == count, ErrorKind::numeric, "physics",
                    "null search exhausted before finding " + std::to_string(count) + " roots");
    return roots;
}

/// Far-field direction: azimuth theta, polar angle phi measured from the
/// aperture normal. k = [cos(theta) sin(phi), sin(theta) sin(phi), cos(phi)].
struct Direction
{
    double azimuth = 0.0;
    double polar = 0.0;

    Vec3 unit() const
    {
        return {std::cos(azimuth) * std::sin(polar), std::sin(azimuth) * std::sin(polar), std::cos(polar)};
    }
    /// k0-scaled projection onto the aperture plane.
    Vec2 transverse(double wavenumber) const
    {
        const Vec3 k = unit();
        return {wavenumber * k.x, wavenumber * k.y};
    }
    /// 1 - sin^2(theta) sin^2(phi): projection of the y polarisation onto the transverse plane.
    double polarization_projection() const
    {
        const double t = std::sin(azimuth) * std::sin(polar);
        return 1.0 - t * t;
    }
    static Direction degrees(double azimuth_deg, double polar_deg)
    {
        return {deg2rad(azimuth_deg), deg2rad(polar_deg)};
    }
};

/// Plane-wave channel h(s) = beta e^{-j kr^T s} seen by a y-polarised receiver.
struct FarFieldChannel
{
    double distance = 0.0;
    Direction direction;
    cdouble beta;
    Vec2 wavevector; // k0 [cos(theta) sin(phi), sin(theta) sin(phi)]

    cdouble operator()(Vec2 s) const { return beta * std::polar(1.0, -wavevector.dot(s)); }
    cdouble conj(Vec2 s) const { return std::conj((*this)(s)); }
};

inline FarFieldChannel far_field_channel(const PhysicalConfig &cfg, Direction dir, double distance)
{
    detail::require(distance > 0.0, ErrorKind::domain, "physics", "receiver distance must be positive");
    const double k0 = cfg.wavenumber;
    FarFieldChannel ch;
    ch.distance = distance;
    ch.direction = dir;
    ch.beta = cdouble(0.0, -k0 * cfg.impedance / (4.0 * pi * distance)) * std::polar(1.0, k0 * distance) *
              dir.polarization_projection();
    ch.wavevector = dir.transverse(k0);
    return ch;
}

/// Fraunhofer distance 2 D^2 / lambda; below it the plane-wave model is only indicative.
inline double fraunhofer_distance(const Aperture &a, double wavelength)
{
    const double d = a.diagonal();
    return 2.0 * d * d / wavelength;
}

/// Exact (near-field capable) channel -j k Z0 (g + k^-2 d^2_y g)(r - s).
inline cdouble exact_channel(const PhysicalConfig &cfg, Vec3 receiver, Vec2 s)
{
    const Vec3 d = receiver - lift(s);
    const double rr = d.norm();
    detail::require(rr > 0.0, ErrorKind::singularity, "physics", "receiver coincides with a source point");
    const double k = cfg.wavenumber;
    const cdouble g = std::polar(1.0 / (4.0 * pi * rr), k * rr);
    const cdouble a = cdouble(-1.0 / rr, k); // jk - 1/r
    const cdouble dg = g * a;
    const cdouble d2g = g * (a * a + 1.0 / (rr * rr));
    const double u = (d.y / rr) * (d.y / rr);
    const cdouble dyy = d2g * u + dg * (1.0 - u) / rr;
    return cdouble(0.0, -k * cfg.impedance) * (g + dyy / (k * k));
}

} // namespace capa
