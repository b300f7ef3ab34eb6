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

// Iterative solution of the Fredholm equation
//   int_S c(s - z) v(z) dz = h*(s),   c = Z_s delta + c_rad
// by conjugate gradients on the Gauss-Legendre aperture grid. All inner
// products carry the quadrature weights Phi, so the discrete operator
// C Phi + Z_s I is self-adjoint in <x, y> = x^H Phi y.

#pragma once

#include "capa/error.hpp"
#include "capa/physics.hpp"
#include "capa/quadrature.hpp"
#include "capa/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace capa
{

using FieldSamples = Eigen::VectorXcd;

template <class F>
FieldSamples sample(const ApertureGrid &grid, F &&f)
{
    FieldSamples x(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k)
        x(static_cast<Eigen::Index>(k)) = f(grid.points[k]);
    return x;
}

struct DiscretizedOperator
{
    ApertureGrid grid;
    Eigen::MatrixXd kernel;  // c_rad(s_k - s_l)
    Eigen::VectorXd weights; // diagonal of Phi
    double surface_resistance = 0.0;
    double wavenumber = 0.0;
    double impedance = free_space_impedance;
    KernelModel model = KernelModel::polarized;

    Eigen::Index size() const { return weights.size(); }

    /// C Phi x + Z_s x
    FieldSamples apply(const FieldSamples &x) const
    {
        detail::require(x.size() == size(), ErrorKind::contract, "cg_solver",
                        "field has " + std::to_string(x.size()) + " samples, operator expects " +
                            std::to_string(size()));
        FieldSamples wx = weights.cast<cdouble>().cwiseProduct(x);
        FieldSamples out = kernel * wx;
        out += surface_resistance * x;
        return out;
    }

    /// x^H Phi y
    cdouble inner(const FieldSamples &x, const FieldSamples &y) const
    {
        cdouble acc = 0.0;
        for (Eigen::Index k = 0; k < x.size(); ++k)
            acc += std::conj(x(k)) * weights(k) * y(k);
        return acc;
    }

    double weighted_norm2(const FieldSamples &x) const
    {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < x.size(); ++k)
            acc += weights(k) * std::norm(x(k));
        return acc;
    }

    /// Coupled transmit power (1/2) Re <w, A w> of a sampled current.
    double transmit_power(const FieldSamples &w) const { return 0.5 * inner(w, apply(w)).real(); }

    /// Radiation kernel row c_rad(s - z_l) at an arbitrary point.
    Eigen::VectorXd kernel_row(Vec2 s) const
    {
        Eigen::VectorXd row(size());
        for (Eigen::Index l = 0; l < size(); ++l)
            row(l) = radiation_kernel(s - grid.points[static_cast<std::size_t>(l)], wavenumber, impedance, model);
        return row;
    }
};

/// Build C_rad on the M x M aperture grid. The matrix is filled symmetrically
/// so C = C^T holds exactly.
inline DiscretizedOperator discretize(const PhysicalConfig &cfg, const Aperture &aperture, int order,
                                      KernelModel model = KernelModel::polarized)
{
    detail::require(cfg.surface_resistance > 0.0, ErrorKind::domain, "cg_solver", "surface resistance must be positive");
    DiscretizedOperator op;
    op.grid = aperture_grid(aperture, order);
    op.surface_resistance = cfg.surface_resistance;
    op.wavenumber = cfg.wavenumber;
    op.impedance = cfg.impedance;
    op.model = model;
    const auto n = static_cast<Eigen::Index>(op.grid.size());
    op.weights = Eigen::Map<const Eigen::VectorXd>(op.grid.weights.data(), n);
    op.kernel.resize(n, n);
    const double peak = radiation_kernel_peak(cfg.wavenumber, cfg.impedance, model);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        op.kernel(k, k) = peak;
        for (Eigen::Index l = k + 1; l < n; ++l)
        {
            const double c = radiation_kernel(op.grid.points[static_cast<std::size_t>(k)] -
                                                  op.grid.points[static_cast<std::size_t>(l)],
                                              cfg.wavenumber, cfg.impedance, model);
            op.kernel(k, l) = c;
            op.kernel(l, k) = c;
        }
    }
    return op;
}

struct CgOptions
{
    enum class Init
    {
        zero,
        random
    };

    double tolerance = 1e-8;
    int max_iterations = 1000;
    Init init = Init::zero;
    std::uint64_t seed = 0;
};

struct CgState
{
    FieldSamples v, r, p;
    std::vector<double> alphas;
    std::vector<double> xis;
    std::vector<double> residual_history;  // sqrt(r^H Phi r / h^T Phi h*), one entry per iterate
    std::vector<double> objective_history; // J(v) = (1/2) Re <v, A v> - Re(h^T Phi v)
    int iterations = 0;
    bool converged = false;
};

namespace detail
{
inline double cg_objective(const DiscretizedOperator &op, const FieldSamples &hconj, const FieldSamples &v,
                           const FieldSamples &r)
{
    // A v = h* - r, and h^T Phi v = conj(<v, h*>).
    const cdouble vh = op.inner(v, hconj);
    return -0.5 * vh.real() - 0.5 * op.inner(v, r).real();
}
} // namespace detail

/// Minimise J(v) = (1/2) <v, A v> - Re(h^T Phi v) for the sampled channel h.
/// `h` holds the channel samples; the right-hand side h* is formed internally.
inline CgState solve_fredholm(const DiscretizedOperator &op, const FieldSamples &h, const CgOptions &opts = {})
{
    detail::require(opts.tolerance > 0.0, ErrorKind::domain, "cg_solver", "tolerance must be positive");
    detail::require(opts.max_iterations >= 1, ErrorKind::domain, "cg_solver", "max_iterations must be at least 1");
    detail::require(h.size() == op.size(), ErrorKind::contract, "cg_solver",
                    "channel has " + std::to_string(h.size()) + " samples, operator expects " +
                        std::to_string(op.size()));

    const FieldSamples hconj = h.conjugate();
    const double rhs2 = op.weighted_norm2(hconj);

    CgState st;
    st.v = FieldSamples::Zero(op.size());
    if (opts.init == CgOptions::Init::random)
    {
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (Eigen::Index k = 0; k < op.size(); ++k)
        {
            const double re = nd(rng);
            const double im = nd(rng);
            st.v(k) = cdouble(re, im);
        }
        // scaled to the norm of h*/Z_s
        const double vn = std::sqrt(op.weighted_norm2(st.v));
        if (vn > 0.0)
            st.v *= std::sqrt(rhs2) / (op.surface_resistance * vn);
    }
    st.r = hconj - op.apply(st.v);
    st.p = st.r;

    if (rhs2 == 0.0)
    {
        st.v.setZero();
        st.r.setZero();
        st.p.setZero();
        st.residual_history.push_back(0.0);
        st.objective_history.push_back(0.0);
        st.converged = true;
        return st;
    }

    double rr = op.weighted_norm2(st.r);
    const double stop2 = opts.tolerance * opts.tolerance * rhs2;
    st.residual_history.push_back(std::sqrt(rr / rhs2));
    st.objective_history.push_back(detail::cg_objective(op, hconj, st.v, st.r));
    if (rr < stop2)
    {
        st.converged = true;
        return st;
    }

    for (int it = 0; it < opts.max_iterations; ++it)
    {
        const FieldSamples q = op.apply(st.p);
        const double denom = op.inner(st.p, q).real();
        if (!(denom > 0.0))
            throw Error(ErrorKind::numeric, "cg_solver",
                        "non-positive curvature p^H Phi A p = " + std::to_string(denom) + " at iteration " +
                            std::to_string(it));
        const double alpha = rr / denom;
        st.v += alpha * st.p;
        st.r -= alpha * q;
        const double rr_next = op.weighted_norm2(st.r);
        const double xi = rr_next / rr;
        st.alphas.push_back(alpha);
        st.xis.push_back(xi);
        st.iterations = it + 1;
        st.residual_history.push_back(std::sqrt(rr_next / rhs2));
        st.objective_history.push_back(detail::cg_objective(op, hconj, st.v, st.r));
        rr = rr_next;
        if (rr < stop2)
        {
            st.converged = true;
            break;
        }
        st.p = st.r + xi * st.p;
    }
    return st;
}

/// Converged Fredholm solution with continuous reconstruction and the
/// power-normalised optimal beamformer w = sqrt(2 P_t / h^T Phi v) v.
/// Keeps a reference to the operator, which must outlive it.
class FredholmSolution
{
  public:
    FredholmSolution(const DiscretizedOperator &op, const FarFieldChannel &channel, FieldSamples v, double power)
        : op_(&op), channel_(channel), v_(std::move(v)), power_(power)
    {
        detail::require(power > 0.0, ErrorKind::domain, "cg_solver", "transmit power must be positive");
        const FieldSamples h = sample(op.grid, [&](Vec2 s) { return channel(s); });
        response_ = 0.0;
        for (Eigen::Index k = 0; k < v_.size(); ++k)
            response_ += h(k) * op.weights(k) * v_(k);
        if (!(response_.real() > 0.0))
            throw Error(ErrorKind::numeric, "cg_solver",
                        "inconsistent solution: Re(h^T Phi v) = " + std::to_string(response_.real()));
        scale_ = std::sqrt(2.0 * power / response_.real());
        weighted_v_ = op.weights.cast<cdouble>().cwiseProduct(v_);
    }

    const FieldSamples &grid_values() const { return v_; }
    FieldSamples beamformer_samples() const { return scale_ * v_; }
    cdouble response() const { return response_; }
    double normalization() const { return scale_; }
    double power() const { return power_; }
    const FarFieldChannel &channel() const { return channel_; }

    /// v(s) = (h*(s) - sum_l c_rad(s - z_l) Phi_l v_l) / Z_s
    cdouble v(Vec2 s) const
    {
        const Eigen::VectorXd row = op_->kernel_row(s);
        const cdouble coupled = row.cast<cdouble>().dot(weighted_v_); // row is real, so dot is a plain sum
        return (channel_.conj(s) - coupled) / op_->surface_resistance;
    }

    cdouble operator()(Vec2 s) const { return scale_ * v(s); }

    /// (1/P_t) |h^T Phi w|^2 = 2 |h^T Phi v|^2 / Re(h^T Phi v)
    double gain() const { return 2.0 * std::norm(response_) / response_.real(); }

    /// Coupled transmit power of the sampled beamformer on the solver grid.
    double transmit_power() const { return op_->transmit_power(beamformer_samples()); }

  private:
    const DiscretizedOperator *op_;
    FarFieldChannel channel_;
    FieldSamples v_;
    FieldSamples weighted_v_;
    double power_;
    cdouble response_;
    double scale_ = 0.0;
};

inline FredholmSolution synthesize_beamformer(const DiscretizedOperator &op, const FarFieldChannel &channel,
                                              const CgState &state, double power = 1.0)
{
    detail::require(state.converged, ErrorKind::convergence, "cg_solver",
                    "conjugate gradient did not converge after " + std::to_string(state.iterations) +
                        " iterations (relative residual " +
                        std::to_string(state.residual_history.empty() ? 0.0 : state.residual_history.back()) + ")");
    return FredholmSolution(op, channel, state.v, power);
}

/// CG solver bound to one aperture discretisation; the kernel matrix is
/// reused across directions.
class ConjugateGradientSolver
{
  public:
    ConjugateGradientSolver(const PhysicalConfig &cfg, const Aperture &aperture, int order, CgOptions opts = {})
        : op_(discretize(cfg, aperture, order)), opts_(opts)
    {
    }

    const DiscretizedOperator &op() const { return op_; }
    const CgOptions &options() const { return opts_; }

    CgState solve(const FarFieldChannel &channel) const
    {
        return solve_fredholm(op_, sample(op_.grid, [&](Vec2 s) { return channel(s); }), opts_);
    }

    /// Optimal array gain; zero for a vanishing channel.
    double gain(const FarFieldChannel &channel) const
    {
        if (channel.beta == cdouble(0.0))
            return 0.0;
        return beamform(channel).gain();
    }

    FredholmSolution beamform(const FarFieldChannel &channel, double power = 1.0) const
    {
        return synthesize_beamformer(op_, channel, solve(channel), power);
    }

  private:
    DiscretizedOperator op_;
    CgOptions opts_;
};

} // namespace capa
