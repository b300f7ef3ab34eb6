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

// Spatially discrete arrays carved out of the continuous aperture: N
// identical rectangular elements on a lattice, each carrying a fixed current
// profile a_t scaled by a complex weight v_n.

#pragma once

#include "capa/error.hpp"
#include "capa/kernel_approx.hpp"
#include "capa/physics.hpp"
#include "capa/quadrature.hpp"
#include "capa/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace capa
{

struct SpdaModel
{
    Aperture aperture;
    double spacing = 0.0;
    double element_x = 0.0; // L_{d,x}
    double element_y = 0.0; // L_{d,y}
    int count_x = 0;
    int count_y = 0;
    std::vector<Vec2> centers; // row-major: index ix * count_y + iy
    int element_order = 6;
    std::function<double(Vec2)> profile; // on the reference element; empty means uniform

    std::size_t size() const { return centers.size(); }
    double element_area() const { return element_x * element_y; }
    double profile_at(Vec2 local) const { return profile ? profile(local) : 1.0 / std::sqrt(element_area()); }
};

/// Centred lattice with pitch d: floor(L_x / d) x floor(L_y / d) elements.
inline SpdaModel element_layout(const Aperture &aperture, double spacing, double element_x, double element_y,
                                int element_order = 6)
{
    detail::require(spacing > 0.0, ErrorKind::domain, "spda", "element spacing must be positive");
    detail::require(element_x > 0.0 && element_y > 0.0, ErrorKind::domain, "spda", "element dimensions must be positive");
    detail::require(element_x <= spacing * (1.0 + 1e-12) && element_y <= spacing * (1.0 + 1e-12), ErrorKind::contract,
                    "spda", "elements overlap: element dimensions exceed the spacing");
    detail::require(element_order >= 1, ErrorKind::domain, "spda", "element quadrature order must be positive");
    SpdaModel m;
    m.aperture = aperture;
    m.spacing = spacing;
    m.element_x = element_x;
    m.element_y = element_y;
    m.element_order = element_order;
    m.count_x = static_cast<int>(std::floor(aperture.length_x / spacing + 1e-9));
    m.count_y = static_cast<int>(std::floor(aperture.length_y / spacing + 1e-9));
    detail::require(m.count_x >= 1 && m.count_y >= 1, ErrorKind::contract, "spda",
                    "no element of pitch " + std::to_string(spacing) + " m fits the aperture");
    m.centers.reserve(static_cast<std::size_t>(m.count_x) * m.count_y);
    for (int ix = 0; ix < m.count_x; ++ix)
        for (int iy = 0; iy < m.count_y; ++iy)
            m.centers.push_back({(ix - 0.5 * (m.count_x - 1)) * spacing, (iy - 0.5 * (m.count_y - 1)) * spacing});
    return m;
}

namespace detail
{
struct ElementRule
{
    std::vector<Vec2> points;
    std::vector<double> weights; // quadrature weight times a_t(q)
    double self_norm = 0.0;      // int |a_t|^2
};

inline ElementRule element_rule(const SpdaModel &m)
{
    const ApertureGrid g = aperture_grid({m.element_x, m.element_y}, m.element_order);
    ElementRule r;
    r.points = g.points;
    r.weights.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        const double a = m.profile_at(g.points[k]);
        r.weights[k] = g.weights[k] * a;
        r.self_norm += g.weights[k] * a * a;
    }
    return r;
}

inline double pair_integral(const ElementRule &r, Vec2 offset, const PhysicalConfig &cfg)
{
    double acc = 0.0;
    for (std::size_t a = 0; a < r.points.size(); ++a)
        for (std::size_t b = 0; b < r.points.size(); ++b)
            acc += r.weights[a] * r.weights[b] *
                   radiation_kernel(r.points[a] - r.points[b] + offset, cfg.wavenumber, cfg.impedance);
    return acc;
}
} // namespace detail

enum class CouplingMode
{
    exact, // tensor Gauss-Legendre over both elements
    point  // A_d^2 |a_t(0)|^2 c_rad(p_n - p_m) off the diagonal
};

struct CouplingMatrix
{
    Eigen::MatrixXd psi;            // Z_ds I + Psi_rad
    double self_impedance = 0.0;    // Z_ds = Z_s int |a_t|^2
    CouplingMode mode = CouplingMode::exact;

    Eigen::MatrixXd radiation() const
    {
        Eigen::MatrixXd r = psi;
        r.diagonal().array() -= self_impedance;
        return r;
    }
    /// Psi with the off-diagonal entries removed.
    Eigen::MatrixXd uncoupled() const { return Eigen::MatrixXd(psi.diagonal().asDiagonal()); }
};

/// Psi_rad depends only on the lattice offset p_n - p_m, so one value is
/// computed per offset; -offset reuses the same value, keeping Psi exactly symmetric.
inline CouplingMatrix coupling_matrix(const SpdaModel &m, const PhysicalConfig &cfg,
                                      CouplingMode mode = CouplingMode::exact)
{
    detail::require(m.element_x <= m.spacing * (1.0 + 1e-12) && m.element_y <= m.spacing * (1.0 + 1e-12),
                    ErrorKind::contract, "spda", "elements overlap: element dimensions exceed the spacing");
    const detail::ElementRule rule = detail::element_rule(m);
    const int nx = m.count_x, ny = m.count_y;
    const int wx = 2 * nx - 1, wy = 2 * ny - 1;
    std::vector<double> table(static_cast<std::size_t>(wx) * wy, 0.0);
    auto slot = [&](int dx, int dy) { return static_cast<std::size_t>(dx + nx - 1) * wy + (dy + ny - 1); };

    const double self = detail::pair_integral(rule, {0.0, 0.0}, cfg);
    const double a0 = m.profile_at({0.0, 0.0});
    const double point_scale = m.element_area() * m.element_area() * a0 * a0;
    for (int dx = 0; dx < nx; ++dx)
    {
        for (int dy = -(ny - 1); dy < ny; ++dy)
        {
            if (dx == 0 && dy < 0)
                continue;
            double v = self;
            if (dx != 0 || dy != 0)
            {
                const Vec2 off{dx * m.spacing, dy * m.spacing};
                v = mode == CouplingMode::exact ? detail::pair_integral(rule, off, cfg)
                                                : point_scale * radiation_kernel(off, cfg.wavenumber, cfg.impedance);
            }
            table[slot(dx, dy)] = v;
            table[slot(-dx, -dy)] = v;
        }
    }

    CouplingMatrix out;
    out.mode = mode;
    out.self_impedance = cfg.surface_resistance * rule.self_norm;
    const auto n = static_cast<Eigen::Index>(m.size());
    out.psi.resize(n, n);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
        {
            const Eigen::Index row = ix * ny + iy;
            for (int jx = 0; jx < nx; ++jx)
                for (int jy = 0; jy < ny; ++jy)
                    out.psi(row, jx * ny + jy) = table[slot(ix - jx, iy - jy)];
        }
    out.psi.diagonal().array() += out.self_impedance;
    return out;
}

/// Element responses h_n = int_{S_n} h(s) a_t(s - p_n) ds. The channel vector
/// entering the beamformer is their conjugate, so the received field is h^H v.
struct DiscreteChannel
{
    Eigen::VectorXcd responses;
    Eigen::VectorXcd vector() const { return responses.conjugate(); }
};

inline DiscreteChannel discrete_channel(const SpdaModel &m, const FarFieldChannel &ch)
{
    const detail::ElementRule rule = detail::element_rule(m);
    DiscreteChannel out;
    out.responses.resize(static_cast<Eigen::Index>(m.size()));
    for (std::size_t n = 0; n < m.size(); ++n)
    {
        cdouble acc = 0.0;
        for (std::size_t a = 0; a < rule.points.size(); ++a)
            acc += rule.weights[a] * ch(m.centers[n] + rule.points[a]);
        out.responses(static_cast<Eigen::Index>(n)) = acc;
    }
    return out;
}

struct DiscreteBeamformer
{
    Eigen::VectorXcd weights; // v_opt
    double gain = 0.0;        // 2 h^H Psi^{-1} h
    double power = 0.0;       // (1/2) v^H Psi v
};

/// Whitened matched filter v = sqrt(2 P_t / h^H Psi^{-1} h) Psi^{-1} h.
inline DiscreteBeamformer optimal_discrete_beamformer(const Eigen::VectorXcd &h, const Eigen::MatrixXd &psi,
                                                      double power = 1.0)
{
    detail::require(psi.rows() == psi.cols() && psi.rows() == h.size(), ErrorKind::contract, "spda",
                    "coupling matrix and channel dimensions differ");
    detail::require(power > 0.0, ErrorKind::domain, "spda", "transmit power must be positive");
    const Eigen::LLT<Eigen::MatrixXd> llt(psi);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorKind::numeric, "spda", "coupling matrix is not positive definite");
    const Eigen::VectorXcd x = llt.solve(h);
    const double q = h.dot(x).real();
    DiscreteBeamformer bf;
    bf.gain = 2.0 * q;
    if (!(q > 0.0))
    {
        bf.weights = Eigen::VectorXcd::Zero(h.size());
        bf.gain = 0.0;
        return bf;
    }
    bf.weights = std::sqrt(2.0 * power / q) * x;
    bf.power = 0.5 * bf.weights.dot(psi * bf.weights).real();
    return bf;
}

/// Gain of the benchmark that ignores coupling: Psi reduced to its diagonal.
inline double uncoupled_discrete_gain(const Eigen::VectorXcd &h, const Eigen::VectorXd &psi_diagonal)
{
    detail::require(psi_diagonal.size() == h.size(), ErrorKind::contract, "spda",
                    "coupling diagonal and channel dimensions differ");
    double acc = 0.0;
    for (Eigen::Index n = 0; n < h.size(); ++n)
    {
        detail::require(psi_diagonal(n) > 0.0, ErrorKind::numeric, "spda", "non-positive self impedance");
        acc += std::norm(h(n)) / psi_diagonal(n);
    }
    return 2.0 * acc;
}

struct SweepOptions
{
    double element_x = 0.0;
    double element_y = 0.0;
    int element_order = 6;
    CouplingMode mode = CouplingMode::exact;
    std::size_t max_coupled_elements = 1024; // larger arrays report the uncoupled gain only
    int capa_order = 20;
    double capa_reference_side = 0.0; // aperture side at which capa_order applies; 0 keeps it fixed
    DiskRule capa_rule = DiskRule::gauss_legendre;
    double power = 1.0;
};

struct SpacingRow
{
    double spacing = 0.0;
    std::size_t elements = 0;
    double element_x = 0.0;
    double element_y = 0.0;
    bool coupled_computed = false;
    double coupled_gain = std::numeric_limits<double>::quiet_NaN();
    double uncoupled_gain = 0.0;
    double capa_gain = 0.0;
};

namespace detail
{
inline double self_coupling(const SpdaModel &m, const PhysicalConfig &cfg)
{
    const ElementRule rule = element_rule(m);
    return pair_integral(rule, {0.0, 0.0}, cfg) + cfg.surface_resistance * rule.self_norm;
}
} // namespace detail

/// Gains versus element spacing. Elements larger than the pitch are shrunk to
/// the pitch so the layout stays non-overlapping.
inline std::vector<SpacingRow> spacing_sweep(const PhysicalConfig &cfg, const Aperture &aperture,
                                             const FarFieldChannel &ch, std::span<const double> spacings,
                                             const SweepOptions &opts)
{
    for (std::size_t i = 0; i < spacings.size(); ++i)
    {
        detail::require(spacings[i] > 0.0, ErrorKind::domain, "spda", "spacings must be positive");
        detail::require(i == 0 || spacings[i] < spacings[i - 1], ErrorKind::domain, "spda",
                        "spacings must be strictly descending");
    }
    const double capa = KernelApproximation(cfg, aperture, opts.capa_order, opts.capa_rule).gain(ch);
    std::vector<SpacingRow> rows;
    for (double d : spacings)
    {
        SpacingRow row;
        row.spacing = d;
        row.element_x = std::min(opts.element_x, d);
        row.element_y = std::min(opts.element_y, d);
        const SpdaModel model = element_layout(aperture, d, row.element_x, row.element_y, opts.element_order);
        row.elements = model.size();
        const Eigen::VectorXcd h = discrete_channel(model, ch).vector();
        if (model.size() <= opts.max_coupled_elements)
        {
            const CouplingMatrix psi = coupling_matrix(model, cfg, opts.mode);
            row.coupled_gain = optimal_discrete_beamformer(h, psi.psi, opts.power).gain;
            row.coupled_computed = true;
            row.uncoupled_gain = uncoupled_discrete_gain(h, psi.psi.diagonal());
        }
        else
        {
            const double self = detail::self_coupling(model, cfg);
            row.uncoupled_gain = uncoupled_discrete_gain(h, Eigen::VectorXd::Constant(h.size(), self));
        }
        row.capa_gain = capa;
        rows.push_back(row);
    }
    return rows;
}

struct ApertureRow
{
    double area = 0.0;
    double side = 0.0;
    std::size_t elements = 0;
    int capa_order = 0;
    double spda_gain = 0.0;
    double capa_gain = 0.0;
};

/// Gains of square apertures of the given areas at a fixed element spacing.
inline std::vector<ApertureRow> aperture_sweep(const PhysicalConfig &cfg, const FarFieldChannel &ch, double spacing,
                                               std::span<const double> areas, const SweepOptions &opts)
{
    for (std::size_t i = 0; i < areas.size(); ++i)
    {
        detail::require(areas[i] > 0.0, ErrorKind::domain, "spda", "areas must be positive");
        detail::require(i == 0 || areas[i] > areas[i - 1], ErrorKind::domain, "spda",
                        "areas must be strictly ascending");
    }
    std::vector<ApertureRow> rows;
    for (double area : areas)
    {
        ApertureRow row;
        row.area = area;
        row.side = std::sqrt(area);
        const Aperture ap{row.side, row.side};
        const SpdaModel model = element_layout(ap, spacing, opts.element_x, opts.element_y, opts.element_order);
        row.elements = model.size();
        const Eigen::VectorXcd h = discrete_channel(model, ch).vector();
        const CouplingMatrix psi = coupling_matrix(model, cfg, opts.mode);
        row.spda_gain = optimal_discrete_beamformer(h, psi.psi, opts.power).gain;
        int order = opts.capa_order;
        if (opts.capa_reference_side > 0.0)
        {
            const double scaled = std::ceil(opts.capa_order * row.side / opts.capa_reference_side - 1e-9);
            order = std::max(order, static_cast<int>(scaled));
        }
        row.capa_order = order;
        row.capa_gain = KernelApproximation(cfg, ap, order, opts.capa_rule).gain(ch);
        rows.push_back(row);
    }
    return rows;
}

} // namespace capa
