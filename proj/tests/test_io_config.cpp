#include "doctest.h"

#include "degenlab/config.hpp"
#include "degenlab/error.hpp"
#include "degenlab/io.hpp"
#include "degenlab/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace degenlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("degenlab_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Json minimal() {
    return Json::parse(R"({
      "schema_version": 1,
      "command": "check-profile",
      "profile": {"kind": "model", "beta": 1, "delta": 0.6},
      "sweep": {"M": -5, "gap": 10},
      "output": "out/x",
      "seed": 7
    })");
}

std::string kind_of(const Json& j) {
    try {
        parse_config(j);
    } catch (const ValidationError& e) {
        return e.kind() + ": " + e.what();
    }
    return "ok";
}

} // namespace

TEST_CASE("numbers survive a CSV round trip bit for bit") {
    const fs::path d = scratch("csv");
    Rng rng(5);
    std::vector<double> vals = {0.0, -0.0, 1.0 / 3.0, 1e-300, 6.02214076e23, std::nextafter(1.0, 2.0),
                                std::numeric_limits<double>::denorm_min()};
    for (int i = 0; i < 200; ++i) vals.push_back(std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.uniform(-60, 60))));
    {
        CsvWriter w(d / "a.csv", {"i", "v"});
        for (std::size_t i = 0; i < vals.size(); ++i) w.row({std::to_string(i), fmt_num(vals[i])});
    }
    const CsvTable t = read_csv(d / "a.csv");
    REQUIRE(t.rows.size() == vals.size());
    CHECK(t.header == std::vector<std::string>{"i", "v"});
    const std::size_t col = t.column("v");
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double back = std::strtod(t.rows[i][col].c_str(), nullptr);
        CHECK(std::memcmp(&back, &vals[i], sizeof back) == 0);
    }
    CHECK_THROWS_AS(t.column("nope"), ValidationError);
    CHECK_THROWS_AS(read_csv(d / "missing.csv"), ValidationError);
}

TEST_CASE("snapshot round trip and sidecar") {
    const fs::path d = scratch("snap");
    const SpectralGrid g{16, 2.0};
    Field f(g, Rep::frequency);
    Rng rng(9);
    for (auto& v : f.values) v = rng.complex_normal();
    write_snapshot(d / "u", f, 12.5);
    const Snapshot s = read_snapshot(d / "u");
    CHECK(s.t == 12.5);
    CHECK(s.field.grid == g);
    CHECK(s.field.rep == Rep::frequency);
    CHECK(s.field.values == f.values);
    CHECK(fs::file_size(d / "u.bin") == g.size() * 16);

    std::ifstream side(d / "u.json");
    const Json j = Json::parse(side);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("N") == 16);
    CHECK(j.at("L") == 2.0);
    CHECK(j.at("rep") == "frequency");
    CHECK(j.at("dtype") == "complex128");

    write_snapshot(d / "v", f, 0.0, SnapshotDtype::complex64);
    const Snapshot s32 = read_snapshot(d / "v");
    CHECK(fs::file_size(d / "v.bin") == g.size() * 8);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::abs(s32.field.values[i] - f.values[i]) <= 1e-6 * (1 + std::abs(f.values[i])));

    fs::resize_file(d / "u.bin", 100);
    CHECK_THROWS_AS(read_snapshot(d / "u"), ValidationError);
    CHECK_THROWS_AS(read_snapshot(d / "none"), ValidationError);
}

TEST_CASE("config loading errors carry stable kinds") {
    const fs::path d = scratch("cfg");
    try {
        load_config(d / "absent.json");
        FAIL("expected config_not_found");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == "config_not_found");
    }
    write_text(d / "bad.json", "{ \"schema_version\": 1, ");
    try {
        load_config(d / "bad.json");
        FAIL("expected invalid_json");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == "invalid_json");
    }
    write_text(d / "ok.json", minimal().dump());
    const ExperimentConfig c = load_config(d / "ok.json");
    CHECK(c.command == "check-profile");
    CHECK(c.seed == 7);
    CHECK(c.profile.beta == 1);
    CHECK_FALSE(c.grid.has_value());
    CHECK(c.tolerances.is_object());
}

TEST_CASE("schema violations name the offending key") {
    CHECK(kind_of(minimal()) == "ok");

    Json j = minimal();
    j["colour"] = "red";
    CHECK(kind_of(j).find("config.colour") != std::string::npos);

    j = minimal();
    j["profile"]["gamma"] = 1;
    CHECK(kind_of(j).find("config.profile.gamma") != std::string::npos);

    j = minimal();
    j.erase("seed");
    CHECK(kind_of(j).find("config.seed") != std::string::npos);

    j = minimal();
    j["seed"] = -1;
    CHECK(kind_of(j).rfind("schema_violation", 0) == 0);

    j = minimal();
    j["schema_version"] = 2;
    CHECK(kind_of(j).rfind("schema_violation", 0) == 0);

    j = minimal();
    j["command"] = "launch";
    CHECK(kind_of(j).find("launch") != std::string::npos);

    j = minimal();
    j["profile"]["beta"] = "one";
    CHECK(kind_of(j).find("config.profile.beta") != std::string::npos);

    j = minimal();
    j["grid"] = {{"N", 100}, {"L", 8}};
    CHECK(kind_of(j) != "ok");

    j = minimal();
    j["grid"] = {{"N", 128}, {"L", 8}};
    CHECK(kind_of(j) == "ok");
}

TEST_CASE("profile blocks") {
    Json j = minimal();
    j["profile"] = {{"kind", "gravity_capillary"}, {"beta", 1}, {"delta", 0.6}, {"params", {1.0, 1.0}}};
    CHECK(kind_of(j) == "ok");
    j["profile"]["beta"] = 2;
    CHECK(kind_of(j).find("beta") != std::string::npos);
    j["profile"] = {{"kind", "gravity_capillary"}, {"beta", 1}, {"delta", 0.6}};
    CHECK(kind_of(j).find("params") != std::string::npos);
    j["profile"] = {{"kind", "model"}, {"beta", 1}, {"delta", 0.6}, {"params", {1.0}}};
    CHECK(kind_of(j).find("params") != std::string::npos);
    j["profile"] = {{"kind", "model"}, {"beta", 0}, {"delta", 0.6}};
    CHECK(kind_of(j) != "ok");
    j["profile"] = {{"kind", "model"}, {"beta", 1}, {"delta", 1.5}};
    CHECK(kind_of(j) != "ok");
    j["profile"] = {{"kind", "quartic"}, {"beta", 1}, {"delta", 0.6}};
    CHECK(kind_of(j).find("kind") != std::string::npos);
}

TEST_CASE("every shipped config parses") {
    int n = 0;
    for (const auto& e : fs::recursive_directory_iterator(fs::path(DEGENLAB_SOURCE_DIR) / "configs")) {
        if (e.path().extension() != ".json") continue;
        CAPTURE(e.path().string());
        CHECK_NOTHROW(load_config(e.path()));
        ++n;
    }
    CHECK(n >= 20);
}
