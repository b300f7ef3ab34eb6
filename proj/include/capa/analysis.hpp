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

// Large-aperture gain and directivity, beampatterns and the wavenumber
// filter S(kappa) that coupling applies to them.

#pragma once

#include "capa/error.hpp"
#include "capa/physics.hpp"
#include "capa/quadrature.hpp"
#include "capa/types.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace capa
{

namespace detail
{
inline bool is_endfire(double polar) { return std::abs(polar) >= 0.5 * pi - 1e-12; }
} // namespace detail

/// D(theta, phi) = Z0^2 P^2 cos(phi) / (2 Z_s cos(phi) + Z0 P), P = 1 - sin^2(theta) sin^2(phi).
/// Returns the limit 0 at end-fire.
inline double directivity_factor(const PhysicalConfig &cfg, Direction dir)
{
    detail::require(std::abs(dir.polar) <= 0.5 * pi + 1e-12, ErrorKind::domain, "analysis",
                    "polar angle must lie in [-pi/2, pi/2]");
    if (detail::is_endfire(dir.polar))
        return 0.0;
    const double p = dir.polarization_projection();
    const double c = std::cos(dir.polar);
    const double z0 = cfg.impedance;
    return z0 * z0 * p * p * c / (2.0 * cfg.surface_resistance * c + z0 * p);
}

struct InfiniteApertureGain
{
    double via_kernel = 0.0;  // 8 pi^2 |beta|^2 / (Z_s + C_rad(kappa_r))
    double closed_form = 0.0; // (k0 / R0)^2 D(theta, phi)
    double directivity = 0.0; // D(theta, phi)
    bool endfire_limit = false;
};

inline InfiniteApertureGain infinite_aperture_gain(const PhysicalConfig &cfg, Direction dir, double distance)
{
    detail::require(distance > 0.0, ErrorKind::domain, "analysis", "receiver distance must be positive");
    detail::require(std::abs(dir.polar) <= 0.5 * pi + 1e-12, ErrorKind::domain, "analysis",
                    "polar angle must lie in [-pi/2, pi/2]");
    InfiniteApertureGain g;
    if (detail::is_endfire(dir.polar))
    {
        g.endfire_limit = true;
        return g;
    }
    const FarFieldChannel ch = far_field_channel(cfg, dir, distance);
    const double c = wavenumber_kernel(ch.wavevector, cfg.wavenumber, cfg.impedance);
    g.via_kernel = 8.0 * pi * pi * std::norm(ch.beta) / (cfg.surface_resistance + c);
    g.directivity = directivity_factor(cfg, dir);
    const double kr = cfg.wavenumber / distance;
    g.closed_form = kr * kr * g.directivity;
    return g;
}

enum class Plane
{
    E,      // y-z plane, theta = pi/2
    H,      // x-z plane, theta = 0
    general // fixed azimuth
};

struct DirectivityProfile
{
    Plane plane = Plane::H;
    double azimuth = 0.0;
    std::vector<double> polar;
    std::vector<double> values;
};

/// D_E = Z0^2 cos^4(phi) / (2 Z_s + Z0 cos(phi)),  D_H = Z0^2 cos(phi) / (2 Z_s cos(phi) + Z0).
inline DirectivityProfile directivity_plane(const PhysicalConfig &cfg, Plane plane, std::span<const double> polar,
                                            double azimuth = 0.0)
{
    DirectivityProfile out;
    out.plane = plane;
    out.azimuth = plane == Plane::E ? 0.5 * pi : plane == Plane::H ? 0.0 : azimuth;
    out.polar.assign(polar.begin(), polar.end());
    out.values.reserve(polar.size());
    const double z0 = cfg.impedance;
    const double zs = cfg.surface_resistance;
    for (double phi : polar)
    {
        detail::require(std::abs(phi) <= 0.5 * pi + 1e-12, ErrorKind::domain, "analysis",
                        "polar angle must lie in [-pi/2, pi/2]");
        if (detail::is_endfire(phi))
        {
            out.values.push_back(0.0);
            continue;
        }
        const double c = std::cos(phi);
        switch (plane)
        {
        case Plane::E: out.values.push_back(z0 * z0 * c * c * c * c / (2.0 * zs + z0 * c)); break;
        case Plane::H: out.values.push_back(z0 * z0 * c / (2.0 * zs * c + z0)); break;
        case Plane::general: out.values.push_back(directivity_factor(cfg, {azimuth, phi})); break;
        }
    }
    return out;
}

/// Matched filter w = gamma h*(s), gamma = sqrt(2 P_t / (rho eta)), the
/// optimum when the coupling kernel is rho delta(s).
struct UncoupledBeamformer
{
    FarFieldChannel channel;
    double gamma = 0.0;
    double rho = 0.0;
    double eta = 0.0;

    cdouble operator()(Vec2 s) const { return gamma * channel.conj(s); }
    /// (rho / 2) int |w|^2
    double power() const { return 0.5 * rho * gamma * gamma * eta; }
    /// 2 eta / rho
    double gain() const { return 2.0 * eta / rho; }
};

inline UncoupledBeamformer uncoupled_beamformer(const FarFieldChannel &ch, const Aperture &aperture,
                                                double power, double rho)
{
    detail::require(rho > 0.0, ErrorKind::domain, "analysis", "normalisation rho must be positive");
    detail::require(power > 0.0, ErrorKind::domain, "analysis", "transmit power must be positive");
    UncoupledBeamformer bf;
    bf.channel = ch;
    bf.rho = rho;
    bf.eta = aperture.area() * std::norm(ch.beta);
    detail::require(bf.eta > 0.0, ErrorKind::numeric, "analysis", "matched filter undefined for a vanishing channel");
    bf.gamma = std::sqrt(2.0 * power / (rho * bf.eta));
    return bf;
}

struct Beampattern
{
    std::vector<Direction> directions;
    std::vector<double> values; // peak-normalised
    double peak = 0.0;          // un-normalised maximum of |beta W~|
};

namespace detail
{
inline Beampattern normalise(std::vector<Direction> dirs, std::vector<double> raw)
{
    Beampattern bp;
    bp.peak = raw.empty() ? 0.0 : *std::max_element(raw.begin(), raw.end());
    if (!(bp.peak > 0.0) || !std::isfinite(bp.peak))
        throw Error(ErrorKind::numeric, "analysis", "beampattern is identically zero and cannot be normalised");
    for (double &v : raw)
        v /= bp.peak;
    bp.directions = std::move(dirs);
    bp.values = std::move(raw);
    return bp;
}
} // namespace detail

/// Received field P(kappa) = |beta(kappa) int_S w(s) e^{-j kappa^T s} ds| on
/// the M x M aperture grid, peak-normalised. The tensor grid lets the
/// transform factor into per-axis phase vectors.
template <class W>
Beampattern beampattern(const W &w, std::span<const Direction> directions, const PhysicalConfig &cfg,
                        const Aperture &aperture, int order, double distance = 1.0)
{
    const ApertureGrid grid = aperture_grid(aperture, order);
    const int m = order;
    std::vector<double> xs(m), ys(m);
    for (int i = 0; i < m; ++i)
    {
        xs[i] = grid.points[static_cast<std::size_t>(i) * m].x;
        ys[i] = grid.points[static_cast<std::size_t>(i)].y;
    }
    std::vector<cdouble> weighted(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        weighted[k] = grid.weights[k] * cdouble(w(grid.points[k]));

    std::vector<double> raw;
    raw.reserve(directions.size());
    std::vector<cdouble> ex(m), ey(m);
    for (const Direction &d : directions)
    {
        const FarFieldChannel ch = far_field_channel(cfg, d, distance);
        if (ch.beta == cdouble(0.0))
        {
            raw.push_back(0.0);
            continue;
        }
        for (int i = 0; i < m; ++i)
        {
            ex[i] = std::polar(1.0, -ch.wavevector.x * xs[i]);
            ey[i] = std::polar(1.0, -ch.wavevector.y * ys[i]);
        }
        cdouble acc = 0.0;
        for (int n = 0; n < m; ++n)
        {
            cdouble row = 0.0;
            for (int j = 0; j < m; ++j)
                row += weighted[static_cast<std::size_t>(n) * m + j] * ey[j];
            acc += ex[n] * row;
        }
        raw.push_back(std::abs(ch.beta * acc));
    }
    return detail::normalise(std::vector<Direction>(directions.begin(), directions.end()), std::move(raw));
}

/// (theta, phi) grid in degrees, theta outer and phi inner.
inline std::vector<Direction> direction_grid(double theta_lo, double theta_hi, int theta_count, double phi_lo,
                                             double phi_hi, int phi_count)
{
    detail::require(theta_count >= 1 && phi_count >= 1, ErrorKind::domain, "analysis", "grid counts must be positive");
    std::vector<Direction> out;
    out.reserve(static_cast<std::size_t>(theta_count) * phi_count);
    auto at = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
    for (int i = 0; i < theta_count; ++i)
        for (int j = 0; j < phi_count; ++j)
            out.push_back(Direction::degrees(at(theta_lo, theta_hi, theta_count, i), at(phi_lo, phi_hi, phi_count, j)));
    return out;
}

/// S(kappa) / S(0) with S = 1 / (Z_s + C_rad(kappa)). Zero on the rim.
inline std::vector<double> coupling_ratio(const PhysicalConfig &cfg, std::span<const Vec2> kappas)
{
    const double zs = cfg.surface_resistance;
    const double ref = zs + wavenumber_kernel({0.0, 0.0}, cfg.wavenumber, cfg.impedance);
    std::vector<double> out;
    out.reserve(kappas.size());
    for (const Vec2 &k : kappas)
    {
        const double r2 = (k.x * k.x + k.y * k.y) / (cfg.wavenumber * cfg.wavenumber);
        if (r2 == 1.0)
        {
            out.push_back(0.0);
            continue;
        }
        out.push_back(ref / (zs + wavenumber_kernel(k, cfg.wavenumber, cfg.impedance)));
    }
    return out;
}

/// Mainlobe extent of a peak-normalised 1-D cut at the -3 dB field level 1/sqrt(2).
/// A side that reaches the end of the cut is clipped there.
struct Mainlobe
{
    double peak = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool lower_clipped = false;
    bool upper_clipped = false;
    double width() const { return upper - lower; }
};

inline Mainlobe mainlobe(std::span<const double> angles, std::span<const double> values,
                         double level = 1.0 / std::sqrt(2.0))
{
    detail::require(angles.size() == values.size() && !angles.empty(), ErrorKind::contract, "analysis",
                    "angle and value arrays must be non-empty and of equal length");
    const auto ip = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    const double peak = values[ip];
    detail::require(peak > 0.0, ErrorKind::numeric, "analysis", "cut is identically zero");
    const double cut = level * peak;
    Mainlobe lobe;
    lobe.peak = angles[ip];

    std::size_t i = ip;
    while (i + 1 < values.size() && values[i + 1] >= cut)
        ++i;
    if (i + 1 == values.size())
    {
        lobe.upper = angles[i];
        lobe.upper_clipped = true;
    }
    else
    {
        const double t = (values[i] - cut) / (values[i] - values[i + 1]);
        lobe.upper = angles[i] + t * (angles[i + 1] - angles[i]);
    }

    i = ip;
    while (i > 0 && values[i - 1] >= cut)
        --i;
    if (i == 0)
    {
        lobe.lower = angles[0];
        lobe.lower_clipped = true;
    }
    else
    {
        const double t = (values[i] - cut) / (values[i] - values[i - 1]);
        lobe.lower = angles[i] + t * (angles[i - 1] - angles[i]);
    }
    return lobe;
}

} // namespace capa
