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

#include <catch2/catch_amalgamated.hpp>

#include "capa/spda.hpp"
#include "oracles.hpp"

#include <cmath>
#include <vector>

using namespace capa;
using Catch::Approx;

namespace
{
const PhysicalConfig cfg = PhysicalConfig::from_material(2.4e9);
const Aperture ap{0.5, 0.5};
const double lam = cfg.wavelength;

/// Double integral of c_rad over two uniform elements by a 10-point rule per axis.
double brute_pair(Vec2 offset, double ex, double ey)
{
    const auto [x, w] = oracle::golub_welsch(10);
    double acc = 0.0;
    const double a = 1.0 / (ex * ey);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            for (int k = 0; k < 10; ++k)
                for (int l = 0; l < 10; ++l)
                {
                    const double sx = 0.5 * ex * x[i], sy = 0.5 * ey * x[j];
                    const double zx = 0.5 * ex * x[k], zy = 0.5 * ey * x[l];
                    const double wt = w[i] * w[j] * w[k] * w[l] * std::pow(0.25 * ex * ey, 2) * a;
                    acc += wt * oracle::kernel_bessel(sx - zx + offset.x, sy - zy + offset.y, cfg.wavenumber);
                }
    return acc;
}
} // namespace

TEST_CASE("element layout")
{
    const SpdaModel m = element_layout(ap, 0.5 * lam, 0.1 * lam, 0.1 * lam);
    CHECK(m.count_x == 8);
    CHECK(m.count_y == 8);
    REQUIRE(m.size() == 64);
    CHECK(m.centers[0].x == Approx(-3.5 * 0.5 * lam));
    CHECK(m.centers[1].y == Approx(-2.5 * 0.5 * lam));
    CHECK(m.centers[8].x == Approx(-2.5 * 0.5 * lam));
    double sx = 0.0, sy = 0.0;
    for (const Vec2 &c : m.centers)
    {
        sx += c.x;
        sy += c.y;
        CHECK(ap.contains({c.x + 0.05 * lam, c.y + 0.05 * lam}));
        CHECK(ap.contains({c.x - 0.05 * lam, c.y - 0.05 * lam}));
    }
    CHECK(std::abs(sx) < 1e-14);
    CHECK(std::abs(sy) < 1e-14);
    CHECK(m.element_area() == Approx(0.01 * lam * lam));
    CHECK(m.profile_at({0.0, 0.0}) == Approx(1.0 / (0.1 * lam)));

    CHECK(element_layout({0.5, 0.25}, 0.1, 0.05, 0.05).size() == 10);
    CHECK(element_layout({0.5, 0.5}, 0.1, 0.1, 0.1).size() == 25);

    auto kind_of = [](auto &&f) {
        try
        {
            f();
        }
        catch (const Error &e)
        {
            return e.kind();
        }
        return ErrorKind::configuration;
    };
    CHECK(kind_of([] { element_layout(ap, 0.1, 0.2, 0.05); }) == ErrorKind::contract);
    CHECK(kind_of([] { element_layout(ap, 0.6, 0.1, 0.1); }) == ErrorKind::contract);
    CHECK(kind_of([] { element_layout(ap, -0.1, 0.1, 0.1); }) == ErrorKind::domain);
    CHECK(kind_of([] { element_layout(ap, 0.1, 0.0, 0.1); }) == ErrorKind::domain);
    CHECK(kind_of([] { element_layout(ap, 0.1, 0.05, 0.05, 0); }) == ErrorKind::domain);
}

TEST_CASE("coupling matrix entries")
{
    const SpdaModel m = element_layout(ap, 0.5 * lam, 0.1 * lam, 0.1 * lam);
    const CouplingMatrix c = coupling_matrix(m, cfg);
    REQUIRE(c.psi.rows() == 64);
    CHECK((c.psi - c.psi.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.self_impedance == Approx(cfg.surface_resistance).epsilon(1e-12));
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c.psi).eigenvalues().minCoeff() > 0.0);

    const Eigen::MatrixXd rad = c.radiation();
    CHECK(rad(0, 0) == Approx(brute_pair({0.0, 0.0}, 0.1 * lam, 0.1 * lam)).epsilon(1e-8));
    for (int j : {1, 4, 5, 15})
    {
        const Vec2 off = m.centers[0] - m.centers[static_cast<std::size_t>(j)];
        CHECK(rad(0, j) == Approx(brute_pair(off, 0.1 * lam, 0.1 * lam)).epsilon(1e-8).margin(1e-10 * rad(0, 0)));
    }
    // lattice shift invariance
    CHECK(c.psi(5, 6) == c.psi(9, 10));
    CHECK(c.psi(0, 5) == c.psi(10, 15));

    const Eigen::MatrixXd u = c.uncoupled();
    CHECK((u.diagonal() - c.psi.diagonal()).norm() == 0.0);
    CHECK(u.sum() == Approx(c.psi.diagonal().sum()));
}

TEST_CASE("point coupling approximates small elements")
{
    const SpdaModel m = element_layout(ap, 0.25 * lam, 0.01 * lam, 0.01 * lam);
    const CouplingMatrix exact = coupling_matrix(m, cfg, CouplingMode::exact);
    const CouplingMatrix point = coupling_matrix(m, cfg, CouplingMode::point);
    CHECK(point.psi.diagonal() == exact.psi.diagonal());
    const double scale = exact.psi.cwiseAbs().maxCoeff();
    CHECK((exact.psi - point.psi).cwiseAbs().maxCoeff() < 1e-3 * scale);
    CHECK(point.psi(0, 1) ==
          Approx(m.element_area() * radiation_kernel(m.centers[0] - m.centers[1], cfg.wavenumber)).epsilon(1e-12));
}

TEST_CASE("element channel responses in closed form")
{
    const SpdaModel m = element_layout(ap, 0.5 * lam, 0.2 * lam, 0.3 * lam);
    const FarFieldChannel ch = far_field_channel(cfg, Direction::degrees(25.0, 40.0), 50.0);
    const DiscreteChannel dc = discrete_channel(m, ch);
    for (std::size_t n = 0; n < m.size(); ++n)
    {
        const Vec2 p = m.centers[n];
        const cdouble expect = ch(p) * std::sqrt(m.element_area()) * sinc(0.5 * ch.wavevector.x * m.element_x) *
                               sinc(0.5 * ch.wavevector.y * m.element_y);
        CHECK(std::abs(dc.responses(static_cast<Eigen::Index>(n)) - expect) < 1e-12 * std::abs(expect));
    }
    CHECK((dc.vector() - dc.responses.conjugate()).norm() == 0.0);
}

TEST_CASE("optimal discrete beamformer")
{
    const SpdaModel m = element_layout(ap, 0.25 * lam, 0.1 * lam, 0.1 * lam);
    const CouplingMatrix c = coupling_matrix(m, cfg);
    const FarFieldChannel ch = far_field_channel(cfg, Direction::degrees(0.0, 20.0), 50.0);
    const Eigen::VectorXcd h = discrete_channel(m, ch).vector();
    const DiscreteBeamformer bf = optimal_discrete_beamformer(h, c.psi, 2.0);
    CHECK(bf.power == Approx(2.0).epsilon(1e-10));
    CHECK(std::norm(h.dot(bf.weights)) / 2.0 == Approx(bf.gain).epsilon(1e-9));

    const Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(c.psi.cast<cdouble>()).solve(h);
    CHECK(bf.gain == Approx(2.0 * h.dot(x).real()).epsilon(1e-9));

    const Eigen::VectorXd d = c.psi.diagonal();
    CHECK(uncoupled_discrete_gain(h, d) ==
          Approx(optimal_discrete_beamformer(h, c.uncoupled()).gain).epsilon(1e-12));

    // any other beamformer with the same power does no better
    const Eigen::VectorXcd mf = h;
    const double mf_scale = std::sqrt(4.0 / mf.dot(c.psi * mf).real());
    CHECK(std::norm(h.dot(mf_scale * mf)) / 2.0 <= bf.gain * (1.0 + 1e-12));

    const DiscreteBeamformer zero = optimal_discrete_beamformer(Eigen::VectorXcd::Zero(h.size()), c.psi);
    CHECK(zero.gain == 0.0);
    CHECK(zero.weights.norm() == 0.0);

    Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(h.size(), h.size());
    CHECK_THROWS_AS(optimal_discrete_beamformer(h, bad), Error);
    CHECK_THROWS_AS(optimal_discrete_beamformer(h.head(3), c.psi), Error);
    CHECK_THROWS_AS(optimal_discrete_beamformer(h, c.psi, 0.0), Error);
    CHECK_THROWS_AS(uncoupled_discrete_gain(h, Eigen::VectorXd::Zero(h.size())), Error);
}

TEST_CASE("spacing sweep")
{
    const FarFieldChannel ch = far_field_channel(cfg, {0.0, 0.0}, 50.0);
    SweepOptions opts;
    opts.element_x = 0.3 * lam;
    opts.element_y = 0.3 * lam;
    opts.max_coupled_elements = 64;
    opts.capa_order = 10;
    const std::vector<double> d{lam, 0.5 * lam, 0.25 * lam};
    const std::vector<SpacingRow> rows = spacing_sweep(cfg, ap, ch, d, opts);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].elements == 16);
    CHECK(rows[1].elements == 64);
    CHECK(rows[2].elements == 256);
    CHECK(rows[0].element_x == Approx(0.3 * lam));
    CHECK(rows[2].element_x == Approx(0.25 * lam));
    CHECK(rows[1].coupled_computed);
    CHECK_FALSE(rows[2].coupled_computed);
    CHECK(std::isnan(rows[2].coupled_gain));
    CHECK(rows[2].uncoupled_gain > rows[1].uncoupled_gain);
    CHECK(rows[0].capa_gain == rows[2].capa_gain);
    for (const SpacingRow &r : rows)
        if (r.coupled_computed)
            CHECK(r.coupled_gain < r.capa_gain);

    const std::vector<double> up{0.25 * lam, 0.5 * lam};
    CHECK_THROWS_AS(spacing_sweep(cfg, ap, ch, up, opts), Error);
}

TEST_CASE("aperture sweep")
{
    const FarFieldChannel ch = far_field_channel(cfg, {0.0, 0.0}, 50.0);
    SweepOptions opts;
    opts.element_x = 0.1 * lam;
    opts.element_y = 0.1 * lam;
    opts.capa_order = 8;
    const std::vector<double> areas{0.05, 0.1, 0.2};
    const std::vector<ApertureRow> rows = aperture_sweep(cfg, ch, 0.5 * lam, areas, opts);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        CHECK(rows[i].side == Approx(std::sqrt(areas[i])));
        const int n = static_cast<int>(std::floor(rows[i].side / (0.5 * lam) + 1e-9));
        CHECK(rows[i].elements == static_cast<std::size_t>(n * n));
        CHECK(rows[i].spda_gain > 0.0);
        if (i > 0)
        {
            CHECK(rows[i].spda_gain > rows[i - 1].spda_gain);
            CHECK(rows[i].capa_gain > rows[i - 1].capa_gain);
        }
    }
    const std::vector<double> down{0.2, 0.1};
    CHECK_THROWS_AS(aperture_sweep(cfg, ch, 0.5 * lam, down, opts), Error);
}
