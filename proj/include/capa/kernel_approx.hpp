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

// Closed-form beamforming through a plane-wave expansion of the radiation
// kernel. With c_rad(s - z) ~ sum_i rho_i e^{j k_i^T s} e^{-j k_i^T z} the
// coupling operator becomes Z_s I plus a rank-J term, whose inverse follows
// from the J x J matrix D = (I + Lambda Q)^{-1}.

#pragma once

#include "capa/error.hpp"
#include "capa/physics.hpp"
#include "capa/quadrature.hpp"
#include "capa/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace capa
{

struct PlaneWaveExpansion
{
    double wavenumber = 0.0;
    int order = 0;
    DiskRule rule = DiskRule::gauss_legendre;
    std::vector<Vec2> wavevectors; // kappa_i
    std::vector<double> weights;   // rho_i

    std::size_t size() const { return weights.size(); }

    /// sum_i rho_i e^{j kappa_i^T s}. Real up to rounding.
    cdouble evaluate(Vec2 s) const
    {
        cdouble acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            acc += weights[i] * std::polar(1.0, wavevectors[i].dot(s));
        return acc;
    }
    double operator()(Vec2 s) const { return evaluate(s).real(); }
};

inline PlaneWaveExpansion build_expansion(const PhysicalConfig &cfg, int order,
                                          DiskRule rule = DiskRule::gauss_legendre)
{
    const WavenumberDiskGrid grid = disk_wavenumber_grid(cfg.wavenumber, order, rule);
    PlaneWaveExpansion e;
    e.wavenumber = cfg.wavenumber;
    e.order = order;
    e.rule = rule;
    e.wavevectors.resize(grid.size());
    e.weights.resize(grid.size());
    const double inv_four_pi2 = 1.0 / (4.0 * pi * pi);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        e.wavevectors[i] = grid.node(i);
        e.weights[i] = grid.weight(i) * wavenumber_kernel(e.wavevectors[i], cfg.wavenumber, cfg.impedance) *
                       inv_four_pi2;
    }
    return e;
}

/// Q_il = int_S e^{-j (k_i - k_l)^T s} ds = Lx Ly sinc(dkx Lx / 2) sinc(dky Ly / 2).
inline Eigen::MatrixXd gram_matrix(const PlaneWaveExpansion &e, const Aperture &a)
{
    const auto n = static_cast<Eigen::Index>(e.size());
    Eigen::MatrixXd q(n, n);
    const double area = a.area();
    for (Eigen::Index i = 0; i < n; ++i)
    {
        q(i, i) = area;
        for (Eigen::Index l = i + 1; l < n; ++l)
        {
            const Vec2 d = e.wavevectors[i] - e.wavevectors[l];
            const double v = area * sinc(0.5 * d.x * a.length_x) * sinc(0.5 * d.y * a.length_y);
            q(i, l) = v;
            q(l, i) = v;
        }
    }
    return q;
}

struct InverseOperatorData
{
    Eigen::VectorXd lambda; // diag(rho_i / Z_s)
    Eigen::MatrixXd gram;   // Q
    Eigen::MatrixXd inverse; // D = (I + Lambda Q)^{-1}
    double residual = 0.0;  // max |(I + Lambda Q) D - I|
    double condition = 1.0; // LU-based estimate of cond_1(I + Lambda Q)
};

inline InverseOperatorData inverse_operator(const PlaneWaveExpansion &e, const Eigen::MatrixXd &gram, double zs)
{
    detail::require(zs > 0.0, ErrorKind::domain, "kernel_approx", "surface resistance must be positive");
    const auto n = static_cast<Eigen::Index>(e.size());
    detail::require(gram.rows() == n && gram.cols() == n, ErrorKind::contract, "kernel_approx",
                    "Gram matrix size does not match the expansion");

    InverseOperatorData out;
    out.lambda.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out.lambda(i) = e.weights[i] / zs;
    out.gram = gram;

    Eigen::MatrixXd system = out.lambda.asDiagonal() * gram;
    system.diagonal().array() += 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double rcond = lu.rcond();
    out.condition = rcond > 0.0 ? 1.0 / rcond : INFINITY;
    if (!(out.condition <= 1e12))
        throw Error(ErrorKind::ill_conditioned, "kernel_approx",
                    "I + Lambda Q is ill-conditioned (estimated condition " + std::to_string(out.condition) +
                        ", J = " + std::to_string(n) + ")");
    out.inverse = lu.inverse();

    Eigen::MatrixXd check = system * out.inverse;
    check.diagonal().array() -= 1.0;
    out.residual = check.cwiseAbs().maxCoeff();
    const double scale = system.cwiseAbs().maxCoeff();
    if (!(out.residual < 1e-8 * scale))
        throw Error(ErrorKind::numeric, "kernel_approx",
                    "inverse residual " + std::to_string(out.residual) + " exceeds tolerance");
    return out;
}

/// a_l = int_S h*(z) e^{-j k_l^T z} dz in closed form.
inline Eigen::VectorXcd channel_moments(const FarFieldChannel &ch, const PlaneWaveExpansion &e, const Aperture &a)
{
    const auto n = static_cast<Eigen::Index>(e.size());
    Eigen::VectorXcd m(n);
    const cdouble scale = std::conj(ch.beta) * a.area();
    for (Eigen::Index l = 0; l < n; ++l)
    {
        const Vec2 d = e.wavevectors[l] - ch.wavevector;
        m(l) = scale * sinc(0.5 * d.x * a.length_x) * sinc(0.5 * d.y * a.length_y);
    }
    return m;
}

struct ClosedFormBeamformer
{
    FarFieldChannel channel;
    std::vector<Vec2> wavevectors;
    Eigen::VectorXcd moments;     // a
    Eigen::VectorXcd corrections; // b = D Lambda a
    double eta = 0.0;             // Lx Ly |beta|^2
    double penalty = 0.0;         // a^H D Lambda a
    double surface_resistance = 0.0;
    double power = 1.0;
    double scale = 0.0;

    /// w_opt(s) = scale (h*(s) - sum_i b_i e^{j k_i^T s})
    cdouble operator()(Vec2 s) const
    {
        cdouble acc = channel.conj(s);
        for (std::size_t i = 0; i < wavevectors.size(); ++i)
            acc -= corrections(static_cast<Eigen::Index>(i)) * std::polar(1.0, wavevectors[i].dot(s));
        return scale * acc;
    }

    double gain() const { return 2.0 / surface_resistance * (eta - penalty); }
    double uncoupled_bound() const { return 2.0 * eta / surface_resistance; }
};

/// Closed-form optimal array gain (2 / Z_s)(eta - a^H D Lambda a).
inline double array_gain_ka(const ClosedFormBeamformer &bf) { return bf.gain(); }

/// Kernel-approximation solver for one frequency / material / aperture. The
/// expansion, Gram matrix and D are direction independent and built once.
class KernelApproximation
{
  public:
    KernelApproximation(const PhysicalConfig &cfg, const Aperture &aperture, int order,
                        DiskRule rule = DiskRule::gauss_legendre)
        : KernelApproximation(cfg, aperture, build_expansion(cfg, order, rule))
    {
    }

    KernelApproximation(const PhysicalConfig &cfg, const Aperture &aperture, PlaneWaveExpansion expansion)
        : cfg_(cfg), aperture_(aperture), expansion_(std::move(expansion)),
          inverse_(inverse_operator(expansion_, gram_matrix(expansion_, aperture_), cfg.surface_resistance))
    {
        d_lambda_ = inverse_.inverse * inverse_.lambda.asDiagonal();
    }

    const PhysicalConfig &config() const { return cfg_; }
    const Aperture &aperture() const { return aperture_; }
    const PlaneWaveExpansion &expansion() const { return expansion_; }
    const InverseOperatorData &inverse() const { return inverse_; }

    /// Penalty a^H D Lambda a and the corrected moments b.
    double penalty(const Eigen::VectorXcd &a, Eigen::VectorXcd *b = nullptr) const
    {
        Eigen::VectorXcd corr = d_lambda_ * a;
        const double p = a.dot(corr).real(); // Eigen's dot conjugates the left operand
        if (b)
            *b = std::move(corr);
        return p;
    }

    /// Optimal array gain for a channel; zero for a vanishing channel.
    double gain(const FarFieldChannel &ch) const
    {
        const double eta = aperture_.area() * std::norm(ch.beta);
        if (eta == 0.0)
            return 0.0;
        const Eigen::VectorXcd a = channel_moments(ch, expansion_, aperture_);
        return 2.0 / cfg_.surface_resistance * (eta - penalty(a));
    }

    ClosedFormBeamformer beamform(const FarFieldChannel &ch, double power = 1.0) const
    {
        detail::require(power > 0.0, ErrorKind::domain, "kernel_approx", "transmit power must be positive");
        ClosedFormBeamformer bf;
        bf.channel = ch;
        bf.wavevectors = expansion_.wavevectors;
        bf.moments = channel_moments(ch, expansion_, aperture_);
        bf.eta = aperture_.area() * std::norm(ch.beta);
        bf.penalty = penalty(bf.moments, &bf.corrections);
        bf.surface_resistance = cfg_.surface_resistance;
        bf.power = power;
        const double margin = bf.eta - bf.penalty;
        if (!(margin > 0.0))
            throw Error(ErrorKind::numeric, "kernel_approx",
                        "eta - a^H D Lambda a = " + std::to_string(margin) + " is not positive");
        bf.scale = std::sqrt(2.0 * power / (cfg_.surface_resistance * margin));
        return bf;
    }

    /// Coupled transmit power of `bf` under the approximated kernel, in closed form:
    /// (scale^2 / 2) [Z_s int |u|^2 + sum_l rho_l |int u e^{-j k_l z}|^2].
    double approximate_power(const ClosedFormBeamformer &bf) const
    {
        const Eigen::VectorXcd &a = bf.moments;
        const Eigen::VectorXcd &b = bf.corrections;
        const Eigen::VectorXcd qb = inverse_.gram * b;
        const double norm2 = bf.eta - 2.0 * a.dot(b).real() + b.dot(qb).real();
        const Eigen::VectorXcd proj = a - qb;
        double radiated = 0.0;
        for (Eigen::Index l = 0; l < proj.size(); ++l)
            radiated += expansion_.weights[static_cast<std::size_t>(l)] * std::norm(proj(l));
        return 0.5 * bf.scale * bf.scale * (cfg_.surface_resistance * norm2 + radiated);
    }

  private:
    PhysicalConfig cfg_;
    Aperture aperture_;
    PlaneWaveExpansion expansion_;
    InverseOperatorData inverse_;
    Eigen::MatrixXd d_lambda_;
};

/// One-shot closed-form beamformer; prefer KernelApproximation for repeated directions.
inline ClosedFormBeamformer beamform_ka(const PhysicalConfig &cfg, const FarFieldChannel &ch,
                                        const PlaneWaveExpansion &e, const Aperture &aperture, double power = 1.0)
{
    return KernelApproximation(cfg, aperture, e).beamform(ch, power);
}

} // namespace capa
