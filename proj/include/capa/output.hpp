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

// CSV and JSON rendering of experiment results.
//
// CSV: '#' comment lines with the library version, command, effective
// configuration and summary, then a header row and one line per row.
// Numbers use 17 significant digits; line endings are LF. When writing to a
// file, tables after the first go to sidecars named <stem>_<table>.csv.

#pragma once

#include "capa/config.hpp"
#include "capa/error.hpp"
#include "capa/experiments.hpp"
#include "capa/version.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace capa::app
{

inline std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_cell(const Cell &c)
{
    if (const auto *d = std::get_if<double>(&c))
        return format_number(*d);
    if (const auto *i = std::get_if<std::int64_t>(&c))
        return std::to_string(*i);
    return std::get<std::string>(c);
}

inline void write_csv_header(std::string &out, const Result &r, const ExperimentConfig &cfg, const std::string &table)
{
    out += "# capa " + std::string(version) + "\n";
    out += "# command: " + r.command + "\n";
    out += "# table: " + table + "\n";
    out += "# config: " + to_json(cfg).dump() + "\n";
    if (!r.summary.empty())
        out += "# summary: " + r.summary.dump() + "\n";
}

inline std::string render_table_csv(const Table &t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto &row : t.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i)
                out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline json cell_json(const Cell &c)
{
    if (const auto *d = std::get_if<double>(&c))
        return std::isfinite(*d) ? json(*d) : json(format_number(*d));
    if (const auto *i = std::get_if<std::int64_t>(&c))
        return json(*i);
    return json(std::get<std::string>(c));
}

inline std::string render_json(const Result &r, const ExperimentConfig &cfg)
{
    json doc = json::object();
    doc["version"] = version;
    doc["command"] = r.command;
    doc["config"] = to_json(cfg);
    for (auto it = r.summary.begin(); it != r.summary.end(); ++it)
        doc[it.key()] = it.value();
    json tables = json::object();
    for (const auto &t : r.tables)
    {
        json rows = json::array();
        for (const auto &row : t.rows)
        {
            json jr = json::array();
            for (const auto &c : row)
                jr.push_back(cell_json(c));
            rows.push_back(std::move(jr));
        }
        tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
    }
    doc["tables"] = std::move(tables);
    return doc.dump(2) + "\n";
}

/// Rendered files: (path, contents). An empty path means standard output.
inline std::vector<std::pair<std::string, std::string>> render(const Result &r, const ExperimentConfig &cfg)
{
    std::vector<std::pair<std::string, std::string>> files;
    if (cfg.output_format == "json")
    {
        files.push_back({cfg.output_path, render_json(r, cfg)});
        return files;
    }
    if (cfg.output_path.empty())
    {
        std::string out;
        for (std::size_t i = 0; i < r.tables.size(); ++i)
        {
            if (i)
                out += "\n";
            write_csv_header(out, r, cfg, r.tables[i].name);
            out += render_table_csv(r.tables[i]);
        }
        files.push_back({"", out});
        return files;
    }
    const std::filesystem::path base(cfg.output_path);
    for (std::size_t i = 0; i < r.tables.size(); ++i)
    {
        std::filesystem::path p = base;
        if (i)
            p = base.parent_path() / (base.stem().string() + "_" + r.tables[i].name + base.extension().string());
        std::string out;
        write_csv_header(out, r, cfg, r.tables[i].name);
        out += render_table_csv(r.tables[i]);
        files.push_back({p.string(), out});
    }
    return files;
}

inline void write_files(const std::vector<std::pair<std::string, std::string>> &files, std::FILE *stdout_stream)
{
    for (const auto &[path, contents] : files)
    {
        if (path.empty())
        {
            std::fwrite(contents.data(), 1, contents.size(), stdout_stream);
            continue;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw Error(ErrorKind::configuration, "cli", "cannot write output file '" + path + "'");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    }
}

inline std::string error_record(const Error &e)
{
    json j = json::object();
    j["code"] = to_string(e.kind());
    j["status"] = exit_code(e.kind());
    j["module"] = e.module();
    j["message"] = e.message();
    return j.dump();
}

} // namespace capa::app
