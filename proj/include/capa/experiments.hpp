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

// Named experiments of the command line driver. Each returns tables and a
// summary; formatting lives in output.hpp.

#pragma once

#include "capa/analysis.hpp"
#include "capa/cg_solver.hpp"
#include "capa/config.hpp"
#include "capa/kernel_approx.hpp"
#include "capa/physics.hpp"
#include "capa/spda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace capa::app
{

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table
{
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

struct Result
{
    std::string command;
    json summary = json::object();
    std::vector<Table> tables;
    std::vector<std::string> warnings;
};

inline const std::vector<std::string> &commands()
{
    static const std::vector<std::string> list{"kernel",      "nulls",       "wavenumber",   "gain",         "convergence",
                                               "directivity", "beampattern", "spda-spacing", "spda-aperture"};
    return list;
}

namespace detail
{
inline KernelModel model_of(const std::string &s)
{
    return s == "isotropic" ? KernelModel::isotropic : KernelModel::polarized;
}

inline CgOptions cg_options(const ExperimentConfig &cfg)
{
    CgOptions o;
    o.tolerance = cfg.cg_tolerance;
    o.max_iterations = cfg.cg_max_iterations;
    o.init = cfg.cg_init == "random" ? CgOptions::Init::random : CgOptions::Init::zero;
    o.seed = static_cast<std::uint64_t>(cfg.seed);
    return o;
}

inline std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

/// Polar angles -90..90 degrees with the given step, always including both ends.
inline std::vector<double> polar_grid_deg(double step)
{
    const int n = static_cast<int>(std::floor(180.0 / step + 1e-9));
    std::vector<double> v;
    for (int i = 0; i <= n; ++i)
        v.push_back(-90.0 + i * step);
    if (v.back() < 90.0 - 1e-9)
        v.push_back(90.0);
    else
        v.back() = 90.0;
    return v;
}

inline void fraunhofer_warning(const ExperimentConfig &cfg, const Aperture &a, Result &r)
{
    const double df = fraunhofer_distance(a, cfg.physical().wavelength);
    if (cfg.distance < df)
        r.warnings.push_back("receiver distance " + json(cfg.distance).dump() + " m is below the Fraunhofer distance " +
                             json(df).dump() + " m; the plane-wave channel is only indicative");
}

inline SweepOptions sweep_options(const ExperimentConfig &cfg)
{
    const double lam = cfg.physical().wavelength;
    SweepOptions o;
    o.element_x = cfg.spda_element_x * lam;
    o.element_y = cfg.spda_element_y * lam;
    o.element_order = cfg.spda_order;
    o.mode = cfg.spda_coupling == "point" ? CouplingMode::point : CouplingMode::exact;
    o.max_coupled_elements = static_cast<std::size_t>(cfg.spda_max_coupled);
    o.capa_order = cfg.order;
    o.capa_reference_side = cfg.length_x;
    o.capa_rule = cfg.rule();
    o.power = cfg.power;
    return o;
}
} // namespace detail

inline Result run_kernel(const ExperimentConfig &cfg)
{
    const PhysicalConfig pc = cfg.physical();
    const KernelModel model = detail::model_of(cfg.kernel_model);
    const double lam = pc.wavelength;
    const double peak = radiation_kernel_peak(pc.wavenumber, pc.impedance, model);
    const bool with_expansion = cfg.kernel_expansion_order > 0;
    PlaneWaveExpansion pwe;
    if (with_expansion)
        pwe = build_expansion(pc, cfg.kernel_expansion_order, cfg.rule());

    Result r;
    r.command = "kernel";
    Table t{"kernel", {"s_x", "s_y", "s_x_lambda", "s_y_lambda", "c_rad", "c_rad_normalized"}, {}};
    if (with_expansion)
    {
        t.columns.push_back("c_approx");
        t.columns.push_back("error_over_peak");
    }
    const std::vector<double> axis = detail::linspace(-cfg.kernel_rmax * lam, cfg.kernel_rmax * lam, cfg.kernel_points);
    std::vector<Vec2> pts;
    if (cfg.kernel_line == "grid")
    {
        for (double x : axis)
            for (double y : axis)
                pts.push_back({x, y});
    }
    else
    {
        for (double s : axis)
            pts.push_back(cfg.kernel_line == "x" ? Vec2{s, 0.0} : Vec2{0.0, s});
    }
    double max_err = 0.0;
    for (const Vec2 &s : pts)
    {
        const double c = radiation_kernel(s, pc.wavenumber, pc.impedance, model);
        std::vector<Cell> row{s.x, s.y, s.x / lam, s.y / lam, c, c / peak};
        if (with_expansion)
        {
            const double a = pwe(s);
            const double e = std::abs(a - c) / peak;
            max_err = std::max(max_err, e);
            row.push_back(a);
            row.push_back(e);
        }
        t.add(std::move(row));
    }

    if (cfg.kernel_line != "grid")
    {
        json changes = json::array();
        const std::size_t mid = pts.size() / 2;
        for (std::size_t i = mid; i + 1 < pts.size(); ++i)
        {
            const double a = radiation_kernel(pts[i], pc.wavenumber, pc.impedance, model);
            const double b = radiation_kernel(pts[i + 1], pc.wavenumber, pc.impedance, model);
            if (pts[i].norm() > 0.0 && std::signbit(a) != std::signbit(b))
            {
                const double ra = pts[i].norm() / lam, rb = pts[i + 1].norm() / lam;
                changes.push_back(ra + (rb - ra) * a / (a - b));
            }
        }
        r.summary["sign_changes_lambda"] = changes;
    }
    r.summary["peak"] = peak;
    if (with_expansion)
        r.summary["max_error_over_peak"] = max_err;
    r.tables.push_back(std::move(t));
    return r;
}

inline Result run_nulls(const ExperimentConfig &cfg)
{
    const KernelModel model = detail::model_of(cfg.nulls_model);
    Result r;
    r.command = "nulls";
    Table t{"nulls", {"axis", "index", "epsilon", "spacing_lambda"}, {}};
    for (const auto &[axis, cosine] : {std::pair<std::string, double>{"x", 0.0}, {"y", 1.0}})
    {
        const std::vector<double> roots = kernel_nulls(cosine, cfg.nulls_count, model);
        for (std::size_t i = 0; i < roots.size(); ++i)
            t.add({axis, static_cast<std::int64_t>(i + 1), roots[i], roots[i] / (2.0 * pi)});
    }
    r.tables.push_back(std::move(t));
    return r;
}

inline Result run_wavenumber(const ExperimentConfig &cfg)
{
    const PhysicalConfig pc = cfg.physical();
    const double k0 = pc.wavenumber;
    Result r;
    r.command = "wavenumber";
    Table t{"wavenumber", {"kappa_x", "kappa_y", "kappa_x_over_k0", "kappa_y_over_k0", "C_rad", "S_normalized"}, {}};
    const std::vector<double> axis =
        detail::linspace(-cfg.wavenumber_extent * k0, cfg.wavenumber_extent * k0, cfg.wavenumber_points);
    std::vector<Vec2> pts;
    if (cfg.wavenumber_line == "grid")
    {
        for (double x : axis)
            for (double y : axis)
                pts.push_back({x, y});
    }
    else
    {
        for (double s : axis)
            pts.push_back(cfg.wavenumber_line == "x" ? Vec2{s, 0.0} : Vec2{0.0, s});
    }
    const std::vector<double> ratio = coupling_ratio(pc, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        const Vec2 k = pts[i];
        double c = std::numeric_limits<double>::infinity();
        if ((k.x * k.x + k.y * k.y) / (k0 * k0) != 1.0)
            c = wavenumber_kernel(k, k0, pc.impedance);
        t.add({k.x, k.y, k.x / k0, k.y / k0, c, ratio[i]});
    }
    r.tables.push_back(std::move(t));
    return r;
}

inline Result run_gain(const ExperimentConfig &cfg)
{
    const PhysicalConfig pc = cfg.physical();
    const Aperture ap = cfg.aperture();
    const FarFieldChannel ch = far_field_channel(pc, cfg.direction(), cfg.distance);
    Result r;
    r.command = "gain";
    detail::fraunhofer_warning(cfg, ap, r);

    const double eta = ap.area() * std::norm(ch.beta);
    const double bound = 2.0 * eta / pc.surface_resistance;
    Table t{"gain", {"method", "order", "gain", "uncoupled_bound", "iterations"}, {}};
    double g_ka = std::numeric_limits<double>::quiet_NaN(), g_cg = g_ka;
    if (cfg.gain_method != "cg")
    {
        const KernelApproximation ka(pc, ap, cfg.order, cfg.rule());
        g_ka = ka.gain(ch);
        r.summary["gain_ka"] = g_ka;
        r.summary["ka_condition"] = ka.inverse().condition;
        t.add({std::string("ka"), static_cast<std::int64_t>(cfg.order), g_ka, bound, std::int64_t(0)});
    }
    if (cfg.gain_method != "ka")
    {
        const DiscretizedOperator op = discretize(pc, ap, cfg.order);
        const CgState st = solve_fredholm(op, sample(op.grid, ch), detail::cg_options(cfg));
        g_cg = synthesize_beamformer(op, ch, st, cfg.power).gain();
        r.summary["gain_cg"] = g_cg;
        r.summary["cg_iterations"] = st.iterations;
        t.add({std::string("cg"), static_cast<std::int64_t>(cfg.order), g_cg, bound,
               static_cast<std::int64_t>(st.iterations)});
    }
    if (cfg.gain_method == "both")
        r.summary["rel_diff"] = std::abs(g_ka - g_cg) / std::abs(g_cg);
    r.summary["uncoupled_bound"] = bound;
    r.summary["eta"] = eta;
    r.tables.push_back(std::move(t));
    return r;
}

inline Result run_convergence(const ExperimentConfig &cfg)
{
    const PhysicalConfig pc = cfg.physical();
    const Aperture ap = cfg.aperture();
    const FarFieldChannel ch = far_field_channel(pc, cfg.direction(), cfg.distance);
    Result r;
    r.command = "convergence";
    detail::fraunhofer_warning(cfg, ap, r);
    const bool do_ka = cfg.convergence_method != "cg";
    const bool do_cg = cfg.convergence_method != "ka";

    Table t{"convergence", {"M", "gain_ka", "gain_cg", "rel_diff", "cg_iterations"}, {}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int m : cfg.convergence_orders)
    {
        double g_ka = nan, g_cg = nan;
        std::int64_t iters = 0;
        if (do_ka)
            g_ka = KernelApproximation(pc, ap, m, cfg.rule()).gain(ch);
        if (do_cg)
        {
            const DiscretizedOperator op = discretize(pc, ap, m);
            const CgState st = solve_fredholm(op, sample(op.grid, ch), detail::cg_options(cfg));
            g_cg = synthesize_beamformer(op, ch, st, cfg.power).gain();
            iters = st.iterations;
        }
        t.add({static_cast<std::int64_t>(m), g_ka, g_cg, std::abs(g_ka - g_cg) / std::abs(g_cg), iters});
    }
    r.tables.push_back(std::move(t));

    if (do_cg)
    {
        const DiscretizedOperator op = discretize(pc, ap, cfg.order);
        const CgState st = solve_fredholm(op, sample(op.grid, ch), detail::cg_options(cfg));
        Table h{"cg_history", {"iteration", "relative_residual", "objective", "alpha", "xi"}, {}};
        for (std::size_t i = 0; i < st.residual_history.size(); ++i)
        {
            const double a = i == 0 ? nan : st.alphas[i - 1];
            const double x = i == 0 ? nan : st.xis[i - 1];
            h.add({static_cast<std::int64_t>(i), st.residual_history[i], st.objective_history[i], a, x});
        }
        r.summary["cg_order"] = cfg.order;
        r.summary["cg_iterations"] = st.iterations;
        r.summary["cg_converged"] = st.converged;
        r.tables.push_back(std::move(h));
    }
    return r;
}

inline Result run_directivity(const ExperimentConfig &cfg)
{
    const PhysicalConfig pc = cfg.physical();
    Result r;
    r.command = "directivity";
    const std::vector<double> phis = detail::polar_grid_deg(cfg.directivity_step);
    std::vector<double> phis_rad;
    for (double p : phis)
        phis_rad.push_back(deg2rad(p));
    std::vector<std::pair<std::string, Plane>> planes;
    if (cfg.directivity_plane != "H")
        planes.push_back({"E", Plane::E});
    if (cfg.directivity_plane != "E")
        planes.push_back({"H", Plane::H});

    std::vector<double> resistances{pc.surface_resistance};
    for (double z : cfg.directivity_resistances)
        resistances.push_back(z);

    Table inf{"infinite", {"plane", "surface_resistance", "phi_deg", "D", "D_normalized"}, {}};
    for (const auto &[name, plane] : planes)
        for (double zs : resistances)
        {
            PhysicalConfig p = pc;
            p.surface_resistance = zs;
            const DirectivityProfile d = directivity_plane(p, plane, phis_rad);
            const double ref = directivity_factor(p, {0.0, 0.0});
            for (std::size_t i = 0; i < phis.size(); ++i)
                inf.add({name, zs, phis[i], d.values[i], d.values[i] / ref});
        }
    r.tables.push_back(std::move(inf));

    if (!cfg.directivity_apertures.empty())
    {
        Table fin{"finite", {"plane", "aperture_side", "order", "phi_deg", "gain", "gain_normalized"}, {}};
        for (double side : cfg.directivity_apertures)
        {
            const Aperture ap{side, side};
            detail::fraunhofer_warning(cfg, ap, r);
            const int order = std::max(cfg.order, static_cast<int>(std::ceil(cfg.order * side / cfg.length_x - 1e-9)));
            std::function<double(const FarFieldChannel &)> gain;
            std::shared_ptr<KernelApproximation> ka;
            std::shared_ptr<ConjugateGradientSolver> cg;
            if (cfg.directivity_method == "ka")
            {
                ka = std::make_shared<KernelApproximation>(pc, ap, order, cfg.rule());
                gain = [ka](const FarFieldChannel &ch) { return ka->gain(ch); };
            }
            else
            {
                cg = std::make_shared<ConjugateGradientSolver>(pc, ap, order, detail::cg_options(cfg));
                gain = [cg](const FarFieldChannel &ch) { return cg->gain(ch); };
            }
            for (const auto &[name, plane] : planes)
            {
                const double az = plane == Plane::E ? 0.5 * pi : 0.0;
                const double ref = gain(far_field_channel(pc, {az, 0.0}, cfg.distance));
                for (std::size_t i = 0; i < phis.size(); ++i)
                {
                    const double g = gain(far_field_channel(pc, {az, phis_rad[i]}, cfg.distance));
                    fin.add({name, side, static_cast<std::int64_t>(order), phis[i], g, g / ref});
                }
            }
        }
        r.tables.push_back(std::move(fin));
    }
    return r;
}

inline Result run_beampattern(const ExperimentConfig &cfg)
{
    const PhysicalConfig pc = cfg.physical();
    const Aperture ap = cfg.aperture();
    const FarFieldChannel ch = far_field_channel(pc, cfg.direction(), cfg.distance);
    Result r;
    r.command = "beampattern";
    detail::fraunhofer_warning(cfg, ap, r);

    const UncoupledBeamformer unc = uncoupled_beamformer(ch, ap, cfg.power, pc.surface_resistance);
    std::function<cdouble(Vec2)> coupled;
    std::shared_ptr<KernelApproximation> ka;
    std::shared_ptr<ConjugateGradientSolver> cg;
    std::shared_ptr<FredholmSolution> sol;
    if (cfg.beampattern_method == "ka")
    {
        ka = std::make_shared<KernelApproximation>(pc, ap, cfg.order, cfg.rule());
        auto bf = std::make_shared<ClosedFormBeamformer>(ka->beamform(ch, cfg.power));
        coupled = [bf](Vec2 s) { return (*bf)(s); };
    }
    else
    {
        cg = std::make_shared<ConjugateGradientSolver>(pc, ap, cfg.order, detail::cg_options(cfg));
        sol = std::make_shared<FredholmSolution>(cg->beamform(ch, cfg.power));
        coupled = [sol](Vec2 s) { return (*sol)(s); };
    }

    const std::vector<Direction> dirs =
        direction_grid(-90.0, 90.0, cfg.beampattern_theta_count, -90.0, 90.0, cfg.beampattern_phi_count);
    const Beampattern pc_bp = beampattern(coupled, dirs, pc, ap, cfg.beampattern_order, cfg.distance);
    const Beampattern pu_bp = beampattern(unc, dirs, pc, ap, cfg.beampattern_order, cfg.distance);
    Table t{"beampattern", {"theta_deg", "phi_deg", "u", "v", "coupled", "uncoupled"}, {}};
    for (std::size_t i = 0; i < dirs.size(); ++i)
    {
        const double sp = std::sin(dirs[i].polar);
        t.add({rad2deg(dirs[i].azimuth), rad2deg(dirs[i].polar), sp * std::cos(dirs[i].azimuth),
               sp * std::sin(dirs[i].azimuth), pc_bp.values[i], pu_bp.values[i]});
    }
    r.tables.push_back(std::move(t));

    // phi cut through the steering azimuth at 0.1 degree resolution
    std::vector<Direction> cut;
    std::vector<double> angles;
    for (int i = 0; i <= 1800; ++i)
    {
        angles.push_back(-90.0 + 0.1 * i);
        cut.push_back(Direction::degrees(cfg.theta_deg, angles.back()));
    }
    const Beampattern cc = beampattern(coupled, cut, pc, ap, cfg.beampattern_order, cfg.distance);
    const Beampattern cu = beampattern(unc, cut, pc, ap, cfg.beampattern_order, cfg.distance);
    const Mainlobe lc = mainlobe(angles, cc.values);
    const Mainlobe lu = mainlobe(angles, cu.values);
    Table c{"cut", {"phi_deg", "coupled", "uncoupled"}, {}};
    for (std::size_t i = 0; i < cut.size(); ++i)
        c.add({angles[i], cc.values[i], cu.values[i]});
    r.tables.push_back(std::move(c));
    r.summary["mainlobe_width_coupled_deg"] = lc.width();
    r.summary["mainlobe_width_uncoupled_deg"] = lu.width();
    r.summary["mainlobe_peak_coupled_deg"] = lc.peak;
    r.summary["mainlobe_peak_uncoupled_deg"] = lu.peak;
    return r;
}

inline Result run_spda_spacing(const ExperimentConfig &cfg)
{
    const PhysicalConfig pc = cfg.physical();
    const Aperture ap = cfg.aperture();
    const FarFieldChannel ch = far_field_channel(pc, cfg.direction(), cfg.distance);
    Result r;
    r.command = "spda-spacing";
    detail::fraunhofer_warning(cfg, ap, r);
    std::vector<double> spacings;
    for (double s : cfg.spda_spacings)
        spacings.push_back(s * pc.wavelength);
    const std::vector<SpacingRow> rows = spacing_sweep(pc, ap, ch, spacings, detail::sweep_options(cfg));
    Table t{"spda_spacing",
            {"spacing_lambda", "elements", "element_x_lambda", "coupled_gain", "uncoupled_gain", "capa_gain"},
            {}};
    for (const auto &row : rows)
        t.add({row.spacing / pc.wavelength, static_cast<std::int64_t>(row.elements), row.element_x / pc.wavelength,
               row.coupled_gain, row.uncoupled_gain, row.capa_gain});
    if (!rows.empty())
        r.summary["capa_gain"] = rows.front().capa_gain;
    r.tables.push_back(std::move(t));
    return r;
}

inline Result run_spda_aperture(const ExperimentConfig &cfg)
{
    const PhysicalConfig pc = cfg.physical();
    const FarFieldChannel ch = far_field_channel(pc, cfg.direction(), cfg.distance);
    Result r;
    r.command = "spda-aperture";
    const std::vector<ApertureRow> rows =
        aperture_sweep(pc, ch, cfg.spda_spacing * pc.wavelength, cfg.spda_areas, detail::sweep_options(cfg));
    Table t{"spda_aperture", {"area", "side", "elements", "spda_gain", "capa_gain", "capa_order"}, {}};
    for (const auto &row : rows)
        t.add({row.area, row.side, static_cast<std::int64_t>(row.elements), row.spda_gain, row.capa_gain,
               static_cast<std::int64_t>(row.capa_order)});
    r.tables.push_back(std::move(t));
    return r;
}

inline Result run(const std::string &command, const ExperimentConfig &cfg)
{
    if (command == "kernel")
        return run_kernel(cfg);
    if (command == "nulls")
        return run_nulls(cfg);
    if (command == "wavenumber")
        return run_wavenumber(cfg);
    if (command == "gain")
        return run_gain(cfg);
    if (command == "convergence")
        return run_convergence(cfg);
    if (command == "directivity")
        return run_directivity(cfg);
    if (command == "beampattern")
        return run_beampattern(cfg);
    if (command == "spda-spacing")
        return run_spda_spacing(cfg);
    if (command == "spda-aperture")
        return run_spda_aperture(cfg);
    throw Error(ErrorKind::configuration, "cli", "unknown command '" + command + "'");
}

} // namespace capa::app
