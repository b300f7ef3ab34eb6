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

// capa <subcommand> [--config PATH] [--set key=value ...] [--out PATH]
//                   [--format csv|json] [--seed N] [subcommand flags]

#include "capa/config.hpp"
#include "capa/experiments.hpp"
#include "capa/output.hpp"
#include "capa/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

namespace
{

struct SubFlag
{
    const char *flag;
    const char *key;
    const char *help;
};

// Lengths given to --rmax are in wavelengths; a trailing "λ" or "lambda" is accepted.
std::string strip_lambda(std::string v)
{
    for (const char *suffix : {"lambda", "λ", "lam"})
    {
        const std::string s(suffix);
        if (v.size() > s.size() && v.compare(v.size() - s.size(), s.size(), s) == 0)
            return v.substr(0, v.size() - s.size());
    }
    return v;
}

const std::map<std::string, std::vector<SubFlag>> &sub_flags()
{
    static const std::map<std::string, std::vector<SubFlag>> flags{
        {"kernel",
         {{"--line", "kernel.line", "x, y or grid"},
          {"--rmax", "kernel.rmax_lambda", "half-width of the sampled range in wavelengths, e.g. 2.5λ"},
          {"--points", "kernel.points", "samples per axis"},
          {"--model", "kernel.model", "polarized or isotropic"},
          {"--expansion-order", "kernel.expansion_order", "add the plane-wave reconstruction of this order"}}},
        {"nulls", {{"--count", "nulls.count", "roots per axis"}, {"--model", "nulls.model", "polarized or isotropic"}}},
        {"wavenumber",
         {{"--line", "wavenumber.line", "x, y or grid"},
          {"--extent", "wavenumber.extent", "half-width in multiples of k0"},
          {"--points", "wavenumber.points", "samples per axis"}}},
        {"gain", {{"--method", "gain.method", "ka, cg or both"}}},
        {"convergence",
         {{"--method", "convergence.method", "ka, cg or both"},
          {"--orders", "convergence.orders", "JSON array of quadrature orders"}}},
        {"directivity",
         {{"--plane", "directivity.plane", "E, H or both"},
          {"--method", "directivity.method", "ka or cg"},
          {"--step", "directivity.step_deg", "polar step in degrees"}}},
        {"beampattern", {{"--method", "beampattern.method", "ka or cg"}}},
        {"spda-spacing", {{"--coupling", "spda.coupling", "exact or point"}}},
        {"spda-aperture", {{"--coupling", "spda.coupling", "exact or point"}}},
    };
    return flags;
}

const char *describe(const std::string &cmd)
{
    if (cmd == "kernel")
        return "radiation coupling kernel along a line or on a grid";
    if (cmd == "nulls")
        return "kernel null roots along the x and y axes";
    if (cmd == "wavenumber")
        return "wavenumber-domain kernel and coupling filter samples";
    if (cmd == "gain")
        return "optimal array gain towards the receiver";
    if (cmd == "convergence")
        return "gain versus quadrature order and CG residual history";
    if (cmd == "directivity")
        return "E/H-plane directivity, infinite and finite aperture";
    if (cmd == "beampattern")
        return "coupled and uncoupled 2-D beampatterns";
    if (cmd == "spda-spacing")
        return "discrete-array gains versus element spacing";
    return "discrete-array and continuous-aperture gains versus aperture area";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"capa " + std::string(capa::version) + ": mutual-coupling-aware beamforming experiments"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(capa::version));

    std::string config_path, out_path, format;
    std::vector<std::string> overrides;
    std::int64_t seed = -1;
    app.add_option("--config", config_path, "flat JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "override one key, e.g. --set frequency=7.8e9")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    app.add_option("--out", out_path, "output file (default: standard output)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "seed for random CG initialisation")->check(CLI::NonNegativeNumber);

    std::map<std::string, std::map<std::string, std::string>> flag_values;
    std::map<std::string, CLI::App *> subs;
    for (const std::string &cmd : capa::app::commands())
    {
        CLI::App *s = app.add_subcommand(cmd, describe(cmd));
        subs[cmd] = s;
        auto it = sub_flags().find(cmd);
        if (it == sub_flags().end())
            continue;
        for (const SubFlag &f : it->second)
            s->add_option(f.flag, flag_values[cmd][f.key], f.help);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command;
    for (const auto &[name, s] : subs)
        if (s->parsed())
            command = name;

    try
    {
        std::vector<std::string> all = overrides;
        if (!out_path.empty())
            all.push_back("output.path=" + capa::app::json(out_path).dump());
        if (!format.empty())
            all.push_back("output.format=" + capa::app::json(format).dump());
        if (seed >= 0)
            all.push_back("seed=" + std::to_string(seed));
        for (const auto &[key, value] : flag_values[command])
        {
            if (value.empty())
                continue;
            const std::string v = key == "kernel.rmax_lambda" ? strip_lambda(value) : value;
            all.push_back(key + "=" + v);
        }
        const capa::app::ExperimentConfig cfg = capa::app::load_config(config_path, all);
        const capa::app::Result result = capa::app::run(command, cfg);
        for (const auto &w : result.warnings)
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        capa::app::write_files(capa::app::render(result, cfg), stdout);
        return 0;
    }
    catch (const capa::Error &e)
    {
        std::fprintf(stderr, "%s\n", capa::app::error_record(e).c_str());
        return capa::exit_code(e.kind());
    }
    catch (const std::exception &e)
    {
        const capa::Error wrapped(capa::ErrorKind::numeric, "cli", e.what());
        std::fprintf(stderr, "%s\n", capa::app::error_record(wrapped).c_str());
        return 3;
    }
}
