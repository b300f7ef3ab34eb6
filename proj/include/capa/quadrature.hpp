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

#include "capa/error.hpp"
#include "capa/types.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace capa
{

struct GaussLegendreRule
{
    int order = 0;
    std::vector<double> nodes;   // ascending, in (-1, 1)
    std::vector<double> weights; // positive, sum to 2

    /// Integral of f over [a, b].
    template <class F>
    auto integrate(F &&f, double a = -1.0, double b = 1.0) const
    {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        decltype(f(0.0)) acc{};
        for (int i = 0; i < order; ++i)
            acc += weights[i] * f(half * nodes[i] + mid);
        return acc * half;
    }
};

/// Legendre polynomial P_n(x) and its derivative by the three-term recurrence.
inline void legendre_eval(int n, double x, double &p, double &dp)
{
    double p0 = 1.0, p1 = x;
    if (n == 0)
    {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k)
    {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

/// M-point Gauss-Legendre rule on [-1, 1]. Nodes are found by Newton
/// iteration from Chebyshev-like initial guesses and mirrored, so the rule
/// is exactly symmetric.
inline GaussLegendreRule legendre_rule(int order)
{
    detail::require(order >= 1 && order <= 512, ErrorKind::domain, "quadrature",
                    "Gauss-Legendre order must lie in [1, 512], got " + std::to_string(order));
    GaussLegendreRule rule;
    rule.order = order;
    rule.nodes.assign(order, 0.0);
    rule.weights.assign(order, 0.0);

    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i)
    {
        double z = std::cos(pi * (i + 0.75) / (order + 0.5));
        bool converged = false;
        double p = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            legendre_eval(order, z, p, dp);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) <= 1e-15)
            {
                converged = true;
                break;
            }
        }
        detail::require(converged, ErrorKind::numeric, "quadrature",
                        "Newton iteration for Legendre root did not converge (order " + std::to_string(order) + ")");
        if (2 * i + 1 == order)
            z = 0.0; // centre node of an odd rule
        legendre_eval(order, z, p, dp);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[order - 1 - i] = z;
        rule.nodes[i] = -z;
        rule.weights[order - 1 - i] = w;
        rule.weights[i] = w;
    }
    return rule;
}

/// Tensor Gauss-Legendre grid on a rectangular aperture, flattened row-major
/// with index n * M + m for x-node n and y-node m.
struct ApertureGrid
{
    Aperture aperture;
    int order = 0;
    std::vector<Vec2> points;
    std::vector<double> weights; // diagonal of the weight operator Phi

    std::size_t size() const { return points.size(); }

    template <class F>
    auto integrate(F &&f) const
    {
        decltype(f(Vec2{})) acc{};
        for (std::size_t k = 0; k < points.size(); ++k)
            acc += weights[k] * f(points[k]);
        return acc;
    }
};

inline ApertureGrid aperture_grid(const Aperture &aperture, int order)
{
    detail::require(aperture.length_x > 0.0 && aperture.length_y > 0.0, ErrorKind::domain, "quadrature",
                    "aperture dimensions must be positive");
    const GaussLegendreRule rule = legendre_rule(order);
    ApertureGrid g;
    g.aperture = aperture;
    g.order = order;
    g.points.reserve(static_cast<std::size_t>(order) * order);
    g.weights.reserve(static_cast<std::size_t>(order) * order);
    const double quarter_area = 0.25 * aperture.length_x * aperture.length_y;
    for (int n = 0; n < order; ++n)
    {
        for (int m = 0; m < order; ++m)
        {
            g.points.push_back({0.5 * aperture.length_x * rule.nodes[n], 0.5 * aperture.length_y * rule.nodes[m]});
            g.weights.push_back(rule.weights[n] * rule.weights[m] * quarter_area);
        }
    }
    return g;
}

enum class DiskRule
{
    gauss_legendre,  // plain GL in both directions
    chebyshev_inner  // Gauss-Chebyshev inner rule absorbing the 1/sqrt(1 - t^2) rim factor of C_rad
};

/// Nested quadrature over the visible disk |kappa| < k0: an outer rule in
/// kappa_x on [-k0, k0] and, for each outer node, an inner rule in kappa_y on
/// [-sqrt(k0^2 - kx^2), +sqrt(k0^2 - kx^2)]. Flattened i = n * M + m.
struct WavenumberDiskGrid
{
    double wavenumber = 0.0;
    int order = 0;
    DiskRule rule = DiskRule::gauss_legendre;
    std::vector<double> outer_nodes;   // kappa_n^(x)
    std::vector<double> outer_weights; // W_n^(x)
    std::vector<double> inner_nodes;   // kappa_nm^(y), flattened
    std::vector<double> inner_weights; // W_nm^(y), flattened

    std::size_t size() const { return inner_nodes.size(); }
    static std::size_t index(int n, int m, int order) { return static_cast<std::size_t>(n) * order + m; }
    Vec2 node(std::size_t i) const { return {outer_nodes[i / order], inner_nodes[i]}; }
    double weight(std::size_t i) const { return outer_weights[i / order] * inner_weights[i]; }
};

inline WavenumberDiskGrid disk_wavenumber_grid(double wavenumber, int order,
                                               DiskRule rule = DiskRule::gauss_legendre)
{
    detail::require(wavenumber > 0.0, ErrorKind::domain, "quadrature", "wavenumber must be positive");
    const GaussLegendreRule gl = legendre_rule(order);
    WavenumberDiskGrid g;
    g.wavenumber = wavenumber;
    g.order = order;
    g.rule = rule;
    g.outer_nodes.resize(order);
    g.outer_weights.resize(order);
    g.inner_nodes.resize(static_cast<std::size_t>(order) * order);
    g.inner_weights.resize(static_cast<std::size_t>(order) * order);

    // Chebyshev nodes written through sin/cos of a symmetric angle so the
    // centre node is exactly 0 and the set is exactly symmetric.
    std::vector<double> cheb_t(order), cheb_sqrt(order);
    for (int m = 0; m < order; ++m)
    {
        const double ang = pi * (2.0 * m + 1.0 - order) / (2.0 * order);
        cheb_t[m] = std::sin(ang);
        cheb_sqrt[m] = std::cos(ang);
    }

    for (int n = 0; n < order; ++n)
    {
        const double kx = wavenumber * gl.nodes[n];
        const double half_chord = wavenumber * std::sqrt(1.0 - gl.nodes[n] * gl.nodes[n]);
        g.outer_nodes[n] = kx;
        g.outer_weights[n] = wavenumber * gl.weights[n];
        for (int m = 0; m < order; ++m)
        {
            const std::size_t i = WavenumberDiskGrid::index(n, m, order);
            if (rule == DiskRule::gauss_legendre)
            {
                g.inner_nodes[i] = half_chord * gl.nodes[m];
                g.inner_weights[i] = half_chord * gl.weights[m];
            }
            else
            {
                // int f(t)/sqrt(1-t^2) dt ~ (pi/M) sum f(t_m); rewritten as an
                // ordinary-weight rule for f(t) * sqrt(1 - t^2).
                g.inner_nodes[i] = half_chord * cheb_t[m];
                g.inner_weights[i] = half_chord * (pi / order) * cheb_sqrt[m];
            }
        }
    }
    return g;
}

} // namespace capa
