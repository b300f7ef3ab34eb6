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

// Experiment configuration: a flat JSON object of dotted keys. Values are
// resolved as defaults < config file < --set overrides < subcommand flags.

#pragma once

#include "capa/error.hpp"
#include "capa/physics.hpp"
#include "capa/quadrature.hpp"
#include "capa/types.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace capa::app
{

using json = nlohmann::ordered_json;

struct ExperimentConfig
{
    // physics
    double frequency = 2.4e9;
    double permeability = copper.permeability;
    double conductivity = copper.conductivity;
    std::optional<double> surface_resistance; // overrides the material when set
    double length_x = 0.5;
    double length_y = 0.5;
    double distance = 50.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double power = 1.0;

    // solvers
    int order = 20;
    std::string disk_rule = "gauss_legendre";
    double cg_tolerance = 1e-8;
    int cg_max_iterations = 1000;
    std::string cg_init = "zero";
    std::int64_t seed = 0;

    // discrete arrays (lengths in wavelengths)
    double spda_spacing = 0.5;
    double spda_element_x = 0.1;
    double spda_element_y = 0.1;
    int spda_order = 6;
    std::string spda_profile = "uniform";
    std::string spda_coupling = "exact";
    int spda_max_coupled = 1024;
    std::vector<double> spda_spacings{1.0, 0.5, 0.25, 0.125, 0.0625};
    std::vector<double> spda_areas{0.05,  0.075, 0.1,   0.125, 0.15,  0.175, 0.2,   0.225, 0.25, 0.275,
                                   0.3,   0.325, 0.35,  0.375, 0.4,   0.425, 0.45,  0.475, 0.5};

    // kernel
    std::string kernel_line = "x";
    double kernel_rmax = 2.5; // wavelengths
    int kernel_points = 501;
    std::string kernel_model = "polarized";
    int kernel_expansion_order = 0; // 0: no plane-wave reconstruction column

    // nulls
    int nulls_count = 3;
    std::string nulls_model = "polarized";

    // wavenumber
    std::string wavenumber_line = "x";
    double wavenumber_extent = 1.5; // multiples of k0
    int wavenumber_points = 301;

    // gain / convergence
    std::string gain_method = "both";
    std::vector<int> convergence_orders{5, 10, 15, 20, 25, 30};
    std::string convergence_method = "both";

    // directivity
    std::string directivity_plane = "both";
    double directivity_step = 1.0; // degrees
    std::vector<double> directivity_apertures{0.5, 1.0};
    std::vector<double> directivity_resistances; // extra Z_s values for the infinite-aperture profiles
    std::string directivity_method = "ka";

    // beampattern
    int beampattern_theta_count = 181;
    int beampattern_phi_count = 181;
    int beampattern_order = 40;
    std::string beampattern_method = "ka";

    // output
    std::string output_path;
    std::string output_format = "csv";

    PhysicalConfig physical() const
    {
        PhysicalConfig c = PhysicalConfig::from_material(frequency, {permeability, conductivity});
        if (surface_resistance)
            c.surface_resistance = *surface_resistance;
        return c;
    }
    Aperture aperture() const { return {length_x, length_y}; }
    Direction direction() const { return Direction::degrees(theta_deg, phi_deg); }
    DiskRule rule() const
    {
        return disk_rule == "chebyshev_inner" ? DiskRule::chebyshev_inner : DiskRule::gauss_legendre;
    }
};

namespace detail
{
[[noreturn]] inline void config_error(const std::string &key, const std::string &what)
{
    throw Error(ErrorKind::configuration, "config", "'" + key + "': " + what);
}

struct Field
{
    std::string key;
    std::function<void(ExperimentConfig &, const json &)> set;
    std::function<json(const ExperimentConfig &)> get;
};

inline double as_number(const std::string &key, const json &v)
{
    if (!v.is_number())
        config_error(key, "expected a number, got " + v.dump());
    const double x = v.get<double>();
    if (!std::isfinite(x))
        config_error(key, "must be finite");
    return x;
}

inline std::int64_t as_integer(const std::string &key, const json &v)
{
    if (v.is_number_integer())
        return v.get<std::int64_t>();
    if (v.is_number_float())
    {
        const double x = v.get<double>();
        if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15)
            return static_cast<std::int64_t>(x);
    }
    config_error(key, "expected an integer, got " + v.dump());
}

enum class Bound
{
    any,
    positive,
    nonnegative
};

inline void check_bound(const std::string &key, double x, Bound b)
{
    if (b == Bound::positive && !(x > 0.0))
        config_error(key, "must be positive, got " + json(x).dump());
    if (b == Bound::nonnegative && !(x >= 0.0))
        config_error(key, "must be non-negative, got " + json(x).dump());
}

inline Field number(std::string key, double ExperimentConfig::*m, Bound b = Bound::any)
{
    return {key,
            [key, m, b](ExperimentConfig &c, const json &v) {
                const double x = as_number(key, v);
                check_bound(key, x, b);
                c.*m = x;
            },
            [m](const ExperimentConfig &c) { return json(c.*m); }};
}

inline Field ranged(std::string key, double ExperimentConfig::*m, double lo, double hi)
{
    return {key,
            [key, m, lo, hi](ExperimentConfig &c, const json &v) {
                const double x = as_number(key, v);
                if (x < lo || x > hi)
                    config_error(key, "must lie in [" + json(lo).dump() + ", " + json(hi).dump() + "], got " +
                                          json(x).dump());
                c.*m = x;
            },
            [m](const ExperimentConfig &c) { return json(c.*m); }};
}

template <class I>
Field integer(std::string key, I ExperimentConfig::*m, std::int64_t lo, std::int64_t hi)
{
    return {key,
            [key, m, lo, hi](ExperimentConfig &c, const json &v) {
                const std::int64_t x = as_integer(key, v);
                if (x < lo || x > hi)
                    config_error(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                                          std::to_string(x));
                c.*m = static_cast<I>(x);
            },
            [m](const ExperimentConfig &c) { return json(c.*m); }};
}

inline Field choice(std::string key, std::string ExperimentConfig::*m, std::vector<std::string> options)
{
    return {key,
            [key, m, options](ExperimentConfig &c, const json &v) {
                if (!v.is_string())
                    config_error(key, "expected a string, got " + v.dump());
                const std::string s = v.get<std::string>();
                for (const auto &o : options)
                    if (o == s)
                    {
                        c.*m = s;
                        return;
                    }
                std::string list;
                for (const auto &o : options)
                    list += (list.empty() ? "" : ", ") + o;
                config_error(key, "must be one of {" + list + "}, got \"" + s + "\"");
            },
            [m](const ExperimentConfig &c) { return json(c.*m); }};
}

inline Field text(std::string key, std::string ExperimentConfig::*m)
{
    return {key,
            [key, m](ExperimentConfig &c, const json &v) {
                if (!v.is_string())
                    config_error(key, "expected a string, got " + v.dump());
                c.*m = v.get<std::string>();
            },
            [m](const ExperimentConfig &c) { return json(c.*m); }};
}

inline Field number_list(std::string key, std::vector<double> ExperimentConfig::*m, Bound b, bool allow_empty)
{
    return {key,
            [key, m, b, allow_empty](ExperimentConfig &c, const json &v) {
                if (!v.is_array())
                    config_error(key, "expected an array of numbers, got " + v.dump());
                if (v.empty() && !allow_empty)
                    config_error(key, "must not be empty");
                std::vector<double> out;
                for (const auto &e : v)
                {
                    const double x = as_number(key, e);
                    check_bound(key, x, b);
                    out.push_back(x);
                }
                c.*m = std::move(out);
            },
            [m](const ExperimentConfig &c) { return json(c.*m); }};
}

inline Field integer_list(std::string key, std::vector<int> ExperimentConfig::*m, int lo, int hi)
{
    return {key,
            [key, m, lo, hi](ExperimentConfig &c, const json &v) {
                if (!v.is_array() || v.empty())
                    config_error(key, "expected a non-empty array of integers, got " + v.dump());
                std::vector<int> out;
                for (const auto &e : v)
                {
                    const std::int64_t x = as_integer(key, e);
                    if (x < lo || x > hi)
                        config_error(key, "entries must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                              "], got " + std::to_string(x));
                    out.push_back(static_cast<int>(x));
                }
                c.*m = std::move(out);
            },
            [m](const ExperimentConfig &c) { return json(c.*m); }};
}

inline const std::vector<Field> &fields()
{
    using C = ExperimentConfig;
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(number("frequency", &C::frequency, Bound::positive));
        f.push_back(number("material.permeability", &C::permeability, Bound::positive));
        f.push_back(number("material.conductivity", &C::conductivity, Bound::positive));
        f.push_back({"surface_resistance",
                     [](C &c, const json &v) {
                         if (v.is_null())
                         {
                             c.surface_resistance.reset();
                             return;
                         }
                         const double x = as_number("surface_resistance", v);
                         check_bound("surface_resistance", x, Bound::positive);
                         c.surface_resistance = x;
                     },
                     [](const C &c) { return c.surface_resistance ? json(*c.surface_resistance) : json(nullptr); }});
        f.push_back(number("aperture.L_x", &C::length_x, Bound::positive));
        f.push_back(number("aperture.L_y", &C::length_y, Bound::positive));
        f.push_back(number("receiver.R0", &C::distance, Bound::positive));
        f.push_back(ranged("receiver.theta", &C::theta_deg, -360.0, 360.0));
        f.push_back(ranged("receiver.phi", &C::phi_deg, -90.0, 90.0));
        f.push_back(number("power", &C::power, Bound::positive));
        f.push_back(integer("quadrature.M", &C::order, 1, 512));
        f.push_back(choice("quadrature.disk_rule", &C::disk_rule, {"gauss_legendre", "chebyshev_inner"}));
        f.push_back(number("cg.tol", &C::cg_tolerance, Bound::positive));
        f.push_back(integer("cg.max_iter", &C::cg_max_iterations, 1, 1000000));
        f.push_back(choice("cg.init", &C::cg_init, {"zero", "random"}));
        f.push_back(integer("seed", &C::seed, 0, std::int64_t(9e15)));
        f.push_back(number("spda.spacing_lambda", &C::spda_spacing, Bound::positive));
        f.push_back(number("spda.element_x_lambda", &C::spda_element_x, Bound::positive));
        f.push_back(number("spda.element_y_lambda", &C::spda_element_y, Bound::positive));
        f.push_back(integer("spda.quadrature_order", &C::spda_order, 1, 32));
        f.push_back(choice("spda.profile", &C::spda_profile, {"uniform"}));
        f.push_back(choice("spda.coupling", &C::spda_coupling, {"exact", "point"}));
        f.push_back(integer("spda.max_coupled_elements", &C::spda_max_coupled, 1, 16384));
        f.push_back(number_list("spda.spacings_lambda", &C::spda_spacings, Bound::positive, false));
        f.push_back(number_list("spda.areas", &C::spda_areas, Bound::positive, false));
        f.push_back(choice("kernel.line", &C::kernel_line, {"x", "y", "grid"}));
        f.push_back(number("kernel.rmax_lambda", &C::kernel_rmax, Bound::positive));
        f.push_back(integer("kernel.points", &C::kernel_points, 2, 100001));
        f.push_back(choice("kernel.model", &C::kernel_model, {"polarized", "isotropic"}));
        f.push_back(integer("kernel.expansion_order", &C::kernel_expansion_order, 0, 512));
        f.push_back(integer("nulls.count", &C::nulls_count, 1, 1000));
        f.push_back(choice("nulls.model", &C::nulls_model, {"polarized", "isotropic"}));
        f.push_back(choice("wavenumber.line", &C::wavenumber_line, {"x", "y", "grid"}));
        f.push_back(number("wavenumber.extent", &C::wavenumber_extent, Bound::positive));
        f.push_back(integer("wavenumber.points", &C::wavenumber_points, 2, 100001));
        f.push_back(choice("gain.method", &C::gain_method, {"ka", "cg", "both"}));
        f.push_back(integer_list("convergence.orders", &C::convergence_orders, 1, 512));
        f.push_back(choice("convergence.method", &C::convergence_method, {"ka", "cg", "both"}));
        f.push_back(choice("directivity.plane", &C::directivity_plane, {"E", "H", "both"}));
        f.push_back(number("directivity.step_deg", &C::directivity_step, Bound::positive));
        f.push_back(number_list("directivity.apertures", &C::directivity_apertures, Bound::positive, true));
        f.push_back(number_list("directivity.surface_resistances", &C::directivity_resistances, Bound::positive, true));
        f.push_back(choice("directivity.method", &C::directivity_method, {"ka", "cg"}));
        f.push_back(integer("beampattern.theta_count", &C::beampattern_theta_count, 1, 10001));
        f.push_back(integer("beampattern.phi_count", &C::beampattern_phi_count, 1, 10001));
        f.push_back(integer("beampattern.quadrature_order", &C::beampattern_order, 1, 512));
        f.push_back(choice("beampattern.method", &C::beampattern_method, {"ka", "cg"}));
        f.push_back(text("output.path", &C::output_path));
        f.push_back(choice("output.format", &C::output_format, {"csv", "json"}));
        return f;
    }();
    return table;
}

inline const Field &field(const std::string &key)
{
    for (const auto &f : fields())
        if (f.key == key)
            return f;
    throw Error(ErrorKind::configuration, "config", "unknown configuration key '" + key + "'");
}
} // namespace detail

/// Set one key from a JSON value.
inline void set_value(ExperimentConfig &cfg, const std::string &key, const json &value)
{
    detail::field(key).set(cfg, value);
}

/// Set one key from "--set key=value" text. The value is read as JSON when it
/// parses, otherwise as a bare string.
inline void set_text(ExperimentConfig &cfg, const std::string &assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Error(ErrorKind::configuration, "config", "override '" + assignment + "' is not of the form key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded())
        value = text;
    set_value(cfg, key, value);
}

/// Cross-field constraints.
inline void validate(const ExperimentConfig &cfg)
{
    if (cfg.spda_element_x > cfg.spda_spacing * (1.0 + 1e-12))
        detail::config_error("spda.element_x_lambda", "element must not exceed spda.spacing_lambda");
    if (cfg.spda_element_y > cfg.spda_spacing * (1.0 + 1e-12))
        detail::config_error("spda.element_y_lambda", "element must not exceed spda.spacing_lambda");
}

inline void apply_json(ExperimentConfig &cfg, const json &doc)
{
    if (!doc.is_object())
        throw Error(ErrorKind::configuration, "config", "configuration must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        set_value(cfg, it.key(), it.value());
}

inline ExperimentConfig load_config(const std::string &path, const std::vector<std::string> &overrides = {})
{
    ExperimentConfig cfg;
    if (!path.empty())
    {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorKind::configuration, "config", "cannot open configuration file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        json doc = json::parse(buf.str(), nullptr, false);
        if (doc.is_discarded())
            throw Error(ErrorKind::configuration, "config", "'" + path + "' is not valid JSON");
        apply_json(cfg, doc);
    }
    for (const auto &o : overrides)
        set_text(cfg, o);
    validate(cfg);
    return cfg;
}

/// Effective configuration, every key in registry order.
inline json to_json(const ExperimentConfig &cfg)
{
    json out = json::object();
    for (const auto &f : detail::fields())
        out[f.key] = f.get(cfg);
    return out;
}

} // namespace capa::app
