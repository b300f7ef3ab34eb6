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

#include "capa/config.hpp"
#include "capa/experiments.hpp"
#include "capa/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

using namespace capa;
using namespace capa::app;
using Catch::Approx;

namespace
{
ErrorKind kind_of(const std::function<void()> &f)
{
    try
    {
        f();
    }
    catch (const Error &e)
    {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::numeric;
}

std::string message_of(const std::function<void()> &f)
{
    try
    {
        f();
    }
    catch (const Error &e)
    {
        return e.message();
    }
    return "";
}

std::filesystem::path temp_file(const std::string &name, const std::string &contents)
{
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << contents;
    return p;
}
} // namespace

TEST_CASE("defaults")
{
    const ExperimentConfig c;
    const PhysicalConfig p = c.physical();
    CHECK(p.frequency == 2.4e9);
    CHECK(p.surface_resistance == Approx(surface_resistance(4e-7 * pi, 5.8e7, 2.4e9)));
    CHECK(c.aperture().area() == Approx(0.25));
    CHECK(c.direction().polar == 0.0);
    CHECK(c.rule() == DiskRule::gauss_legendre);
    CHECK(c.order == 20);
    CHECK(c.cg_tolerance == 1e-8);

    const json j = to_json(c);
    CHECK(j["frequency"] == 2.4e9);
    CHECK(j["surface_resistance"].is_null());
    CHECK(j["quadrature.M"] == 20);
    CHECK(j["spda.spacings_lambda"].size() == 5);
    CHECK(j.begin().key() == "frequency");
}

TEST_CASE("setting keys")
{
    ExperimentConfig c;
    set_text(c, "frequency=7.8e9");
    set_text(c, "quadrature.M=12");
    set_text(c, "cg.init=random");
    set_text(c, "kernel.line=\"y\"");
    set_text(c, "surface_resistance=0.02");
    set_text(c, "convergence.orders=[4,8]");
    set_text(c, "quadrature.disk_rule=chebyshev_inner");
    CHECK(c.frequency == 7.8e9);
    CHECK(c.order == 12);
    CHECK(c.cg_init == "random");
    CHECK(c.kernel_line == "y");
    CHECK(c.physical().surface_resistance == 0.02);
    CHECK(c.convergence_orders == std::vector<int>{4, 8});
    CHECK(c.rule() == DiskRule::chebyshev_inner);
    set_value(c, "surface_resistance", nullptr);
    CHECK_FALSE(c.surface_resistance.has_value());

    const ExperimentConfig back = [&] {
        ExperimentConfig d;
        apply_json(d, to_json(c));
        return d;
    }();
    CHECK(to_json(back) == to_json(c));
}

TEST_CASE("configuration errors name the offending key")
{
    ExperimentConfig c;
    CHECK(kind_of([&] { set_text(c, "frequency=-1"); }) == ErrorKind::configuration);
    CHECK(message_of([&] { set_text(c, "frequency=-1"); }).find("'frequency'") == 0);
    CHECK(message_of([&] { set_text(c, "quadrature.M=2.5"); }).find("'quadrature.M'") == 0);
    CHECK(message_of([&] { set_text(c, "cg.init=sometimes"); }).find("'cg.init'") == 0);
    CHECK(message_of([&] { set_text(c, "receiver.phi=120"); }).find("'receiver.phi'") == 0);
    CHECK(message_of([&] { set_text(c, "aperture.L_x=\"wide\""); }).find("'aperture.L_x'") == 0);
    CHECK(message_of([&] { set_text(c, "spda.spacings_lambda=[]"); }).find("'spda.spacings_lambda'") == 0);
    CHECK(kind_of([&] { set_text(c, "no.such.key=1"); }) == ErrorKind::configuration);
    CHECK(kind_of([&] { set_text(c, "frequency"); }) == ErrorKind::configuration);
    CHECK(kind_of([&] { set_text(c, "=3"); }) == ErrorKind::configuration);

    ExperimentConfig v;
    v.spda_element_x = 0.6;
    CHECK(message_of([&] { validate(v); }).find("'spda.element_x_lambda'") == 0);
    CHECK(exit_code(ErrorKind::configuration) == 2);
}

TEST_CASE("file loading and precedence")
{
    const auto p = temp_file("capa_test_config.json", R"({"frequency": 5e9, "quadrature.M": 9, "power": 2})");
    const ExperimentConfig c = load_config(p.string(), {"quadrature.M=11"});
    CHECK(c.frequency == 5e9);
    CHECK(c.order == 11);
    CHECK(c.power == 2.0);

    const auto bad = temp_file("capa_test_bad.json", "{not json");
    CHECK(kind_of([&] { load_config(bad.string()); }) == ErrorKind::configuration);
    const auto arr = temp_file("capa_test_arr.json", "[1, 2]");
    CHECK(kind_of([&] { load_config(arr.string()); }) == ErrorKind::configuration);
    CHECK(kind_of([] { load_config("/nonexistent/capa.json"); }) == ErrorKind::configuration);
    const auto unknown = temp_file("capa_test_unknown.json", R"({"frequncy": 1e9})");
    CHECK(message_of([&] { load_config(unknown.string()); }).find("frequncy") != std::string::npos);
    std::filesystem::remove(p);
    std::filesystem::remove(bad);
    std::filesystem::remove(arr);
    std::filesystem::remove(unknown);
}

TEST_CASE("nulls experiment")
{
    const Result r = run("nulls", ExperimentConfig{});
    REQUIRE(r.tables.size() == 1);
    const Table &t = r.tables[0];
    REQUIRE(t.rows.size() == 6);
    CHECK(std::get<std::string>(t.rows[0][0]) == "x");
    CHECK(std::get<std::int64_t>(t.rows[0][1]) == 1);
    CHECK(std::get<double>(t.rows[0][2]) == Approx(2.74).margin(0.01));
    CHECK(std::get<double>(t.rows[3][2]) == Approx(4.50).margin(0.01));
    CHECK(std::get<double>(t.rows[3][3]) == Approx(4.4934 / (2.0 * pi)).margin(1e-4));
}

TEST_CASE("kernel experiment")
{
    ExperimentConfig c;
    const Result r = run("kernel", c);
    const json &sc = r.summary["sign_changes_lambda"];
    REQUIRE(sc.size() >= 3);
    CHECK(sc[0].get<double>() == Approx(0.44).margin(0.01));
    CHECK(sc[1].get<double>() == Approx(0.97).margin(0.01));
    CHECK(sc[2].get<double>() == Approx(1.48).margin(0.01));
    CHECK(r.tables[0].rows.size() == 501);
    CHECK(std::get<double>(r.tables[0].rows[250][5]) == Approx(1.0));

    c.kernel_line = "grid";
    c.kernel_points = 5;
    c.kernel_expansion_order = 6;
    const Result g = run("kernel", c);
    CHECK(g.tables[0].rows.size() == 25);
    CHECK(g.tables[0].columns.size() == 8);
    CHECK(g.summary.contains("max_error_over_peak"));
    CHECK_FALSE(g.summary.contains("sign_changes_lambda"));
}

TEST_CASE("wavenumber experiment")
{
    ExperimentConfig c;
    c.wavenumber_points = 5;
    c.wavenumber_extent = 1.0;
    const Result r = run("wavenumber", c);
    const Table &t = r.tables[0];
    REQUIRE(t.rows.size() == 5);
    CHECK(std::isinf(std::get<double>(t.rows[0][4])));
    CHECK(std::get<double>(t.rows[0][5]) == 0.0);
    CHECK(std::get<double>(t.rows[2][4]) == Approx(0.5 * free_space_impedance));
    CHECK(std::get<double>(t.rows[2][5]) == 1.0);
}

TEST_CASE("gain experiment and rendering")
{
    ExperimentConfig c;
    c.order = 16;
    const Result r = run("gain", c);
    CHECK(r.summary.contains("gain_ka"));
    CHECK(r.summary.contains("gain_cg"));
    CHECK(r.summary["rel_diff"].get<double>() < 0.05);
    CHECK(r.summary["gain_ka"].get<double>() < r.summary["uncoupled_bound"].get<double>());
    CHECK(r.warnings.empty());

    const auto files = render(r, c);
    REQUIRE(files.size() == 1);
    CHECK(files[0].first.empty());
    const std::string &csv = files[0].second;
    CHECK(csv.rfind("# capa 1.0.0\n# command: gain\n# table: gain\n# config: {", 0) == 0);
    CHECK(csv.find("\nmethod,order,gain,uncoupled_bound,iterations\nka,16,") != std::string::npos);

    c.output_format = "json";
    const auto jf = render(r, c);
    const json doc = json::parse(jf[0].second);
    CHECK(doc["command"] == "gain");
    CHECK(doc["version"] == "1.0.0");
    CHECK(doc.contains("rel_diff"));
    CHECK(doc["config"]["quadrature.M"] == 16);
    CHECK(doc["tables"]["gain"]["rows"].size() == 2);

    ExperimentConfig close;
    close.distance = 1.0;
    close.order = 4;
    close.gain_method = "ka";
    const Result w = run("gain", close);
    REQUIRE(w.warnings.size() == 1);
    CHECK(w.warnings[0].find("Fraunhofer") != std::string::npos);
    CHECK_FALSE(w.summary.contains("rel_diff"));
}

TEST_CASE("multi-table output goes to sidecar files")
{
    ExperimentConfig c;
    c.convergence_orders = {4, 6};
    c.order = 6;
    const auto dir = std::filesystem::temp_directory_path() / "capa_sidecar_test";
    std::filesystem::create_directories(dir);
    c.output_path = (dir / "conv.csv").string();
    const Result r = run("convergence", c);
    REQUIRE(r.tables.size() == 2);
    const auto files = render(r, c);
    REQUIRE(files.size() == 2);
    CHECK(files[0].first == (dir / "conv.csv").string());
    CHECK(files[1].first == (dir / "conv_cg_history.csv").string());
    write_files(files, stdout);
    CHECK(std::filesystem::exists(dir / "conv.csv"));
    CHECK(std::filesystem::exists(dir / "conv_cg_history.csv"));
    std::filesystem::remove_all(dir);

    c.output_path.clear();
    const auto out = render(r, c);
    REQUIRE(out.size() == 1);
    CHECK(out[0].second.find("# table: convergence") != std::string::npos);
    CHECK(out[0].second.find("# table: cg_history") != std::string::npos);
}

TEST_CASE("number formatting and error records")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_cell(Cell{std::int64_t(42)}) == "42");
    CHECK(format_cell(Cell{std::string("E")}) == "E");

    const Error e(ErrorKind::convergence, "cg_solver", "did not converge");
    const json j = json::parse(error_record(e));
    CHECK(j["code"] == "convergence");
    CHECK(j["status"] == 3);
    CHECK(j["module"] == "cg_solver");
    CHECK(j["message"] == "did not converge");

    CHECK(kind_of([] { run("bogus", ExperimentConfig{}); }) == ErrorKind::configuration);
    CHECK(commands().size() == 9);
}

TEST_CASE("small directivity, beampattern and SPDA runs")
{
    ExperimentConfig c;
    c.order = 6;
    c.directivity_step = 30.0;
    c.directivity_apertures = {0.5};
    c.directivity_resistances = {0.1};
    const Result d = run("directivity", c);
    REQUIRE(d.tables.size() == 2);
    CHECK(d.tables[0].rows.size() == 2 * 2 * 7);
    CHECK(d.tables[1].rows.size() == 2 * 7);

    c.beampattern_theta_count = 5;
    c.beampattern_phi_count = 7;
    c.beampattern_order = 12;
    const Result b = run("beampattern", c);
    CHECK(b.tables[0].rows.size() == 35);
    REQUIRE(b.tables[0].columns.size() == 6);
    CHECK(b.tables[0].columns[2] == "u");
    CHECK(std::get<double>(b.tables[0].rows[34][2]) == Approx(0.0).margin(1e-12));
    CHECK(std::get<double>(b.tables[0].rows[34][3]) == Approx(1.0));
    CHECK(b.tables[1].rows.size() == 1801);
    CHECK(b.summary["mainlobe_peak_uncoupled_deg"].get<double>() == Approx(0.0).margin(0.05));

    c.spda_spacings = {1.0, 0.5};
    const Result s = run("spda-spacing", c);
    CHECK(s.tables[0].rows.size() == 2);
    c.spda_areas = {0.05, 0.1};
    const Result a = run("spda-aperture", c);
    CHECK(a.tables[0].rows.size() == 2);
}
