/*
 * Copyright 2026 The valfram Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "valfram/cli.hpp"
#include "valfram/io.hpp"

using namespace valfram;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        path = fs::temp_directory_path() /
               ("valfram_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
                "_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }

    std::string file(const std::string& name, const std::string& content = "") const {
        const fs::path p = path / name;
        if (!content.empty()) {
            std::ofstream(p) << content;
        }
        return p.string();
    }
};

const char* kSpecJson = R"({
  "seed": 42,
  "population": 80,
  "activity_types": ["home", "work"],
  "initial": {"home": 1.0},
  "transition": {
    "home": {"work": 0.85, "end": 0.15},
    "work": {"home": 0.5, "end": 0.5}
  },
  "start_time": {
    "home": {"mean_s": 21600, "sd_s": 3600},
    "work": {"mean_s": 32400, "sd_s": 4200}
  },
  "duration": {
    "home": {"log_mean": 9.8, "log_sd": 0.4},
    "work": {"log_mean": 10.1, "log_sd": 0.3}
  },
  "mode_choice": {
    "home": {"car": 0.7, "walk": 0.3},
    "work": {"car": 0.8, "walk": 0.2}
  },
  "location_mixture": {
    "home": [{"weight": 1.0, "x": 2000, "y": 3000, "sd_m": 900}],
    "work": [{"weight": 1.0, "x": 6000, "y": 5000, "sd_m": 800}]
  },
  "travel_time": {
    "car": {"log_mean": 6.9, "log_sd": 0.4},
    "walk": {"log_mean": 7.4, "log_sd": 0.35}
  }
})";

const char* kZonesCsv =
    "zone_id,x,y\n"
    "za,1000,1000\n"
    "zb,6000,5000\n";

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// A tiny diary whose modes can be renamed to force vocabulary mismatches.
std::string diary_csv(const std::string& mode) {
    std::string text =
        "person_id,seq,activity_type,start_s,duration_s,x,y,"
        "arr_mode,arr_trip_duration_s,arr_depart_s\n";
    for (int person = 0; person < 6; ++person) {
        const std::string id = "h" + std::to_string(person);
        const int base = 10000 + 100 * person;
        text += id + ",0,home," + std::to_string(base) + ",3000,1000,1000,,,\n";
        text += id + ",1,work," + std::to_string(base + 4000) + ",3000,6000,5000," +
                mode + ",600," + std::to_string(base + 3000) + "\n";
    }
    return text;
}

}  // namespace

TEST_CASE("generate writes a parseable diary of the requested population") {
    TempDir dir;
    const std::string spec = dir.file("spec.json", kSpecJson);
    const std::string out = dir.file("model.csv");

    CHECK_EQ(cli_main({"generate", "--spec", spec, "--out", out}), 0);
    const DiaryDataset dataset = parse_diary(out);
    CHECK_EQ(dataset.schedule_count(), 80);
    CHECK(dataset.has_locations());
}

TEST_CASE("generate can derive an o-d matrix alongside the diary") {
    TempDir dir;
    const std::string spec = dir.file("spec.json", kSpecJson);
    const std::string zones = dir.file("zones.csv", kZonesCsv);
    const std::string out = dir.file("model.csv");
    const std::string od_out = dir.file("od.csv");

    CHECK_EQ(cli_main({"generate", "--spec", spec, "--out", out, "--zones", zones,
                       "--od-out", od_out}),
              0);
    const ODMatrix od = parse_od(zones, od_out);
    CHECK_EQ(od.zones().size(), 2);
    CHECK_GT(od.total(), 0.0);
}

TEST_CASE("self-validation reports zeros and exits cleanly") {
    TempDir dir;
    const std::string spec = dir.file("spec.json", kSpecJson);
    const std::string model = dir.file("model.csv");
    const std::string report_path = dir.file("report.json");
    REQUIRE_EQ(cli_main({"generate", "--spec", spec, "--out", model}), 0);

    CHECK_EQ(cli_main({"validate", "--model", model, "--validation", model, "--out",
                       report_path}),
              0);

    const nlohmann::json report = nlohmann::json::parse(slurp(report_path));
    CHECK_EQ(report.at("dataset_summaries").at("model").at("schedules").get<int>(), 80);
    CHECK_EQ(report.at("config").at("grid_rows").get<int>(), 32);
    CHECK_FALSE(report.contains("od_summaries"));

    int ok_records = 0;
    int b2_skips = 0;
    for (const auto& record : report.at("records")) {
        const std::string status = record.at("status").get<std::string>();
        if (status == "ok") {
            ++ok_records;
            CHECK_EQ(record.at("value").get<double>(), 0.0);
        } else {
            CHECK_FALSE(record.contains("value"));
            if (record.at("step") == "B2") {
                ++b2_skips;
                CHECK_EQ(record.at("statistic"), "step");
            }
        }
    }
    CHECK_GT(ok_records, 8);
    CHECK_EQ(b2_skips, 1);
}

TEST_CASE("a config file is applied and echoed into the report") {
    TempDir dir;
    const std::string spec = dir.file("spec.json", kSpecJson);
    const std::string model = dir.file("model.csv");
    const std::string config = dir.file(
        "config.json", R"({"grid_rows": 18, "grid_cols": 31, "min_samples": 2})");
    const std::string report_path = dir.file("report.json");
    REQUIRE_EQ(cli_main({"generate", "--spec", spec, "--out", model}), 0);

    CHECK_EQ(cli_main({"validate", "--model", model, "--validation", model,
                       "--config", config, "--out", report_path}),
              0);
    const nlohmann::json report = nlohmann::json::parse(slurp(report_path));
    CHECK_EQ(report.at("config").at("grid_rows").get<int>(), 18);
    CHECK_EQ(report.at("config").at("grid_cols").get<int>(), 31);
    CHECK_EQ(report.at("config").at("min_samples").get<int>(), 2);
    CHECK_EQ(report.at("config").at("hour_bins").size(), 24);
}

TEST_CASE("o-d inputs activate the matrix comparison") {
    TempDir dir;
    const std::string spec = dir.file("spec.json", kSpecJson);
    const std::string zones = dir.file("zones.csv", kZonesCsv);
    const std::string model = dir.file("model.csv");
    const std::string od = dir.file("od.csv");
    const std::string report_path = dir.file("report.json");
    REQUIRE_EQ(cli_main({"generate", "--spec", spec, "--out", model, "--zones", zones,
                         "--od-out", od}),
               0);

    CHECK_EQ(cli_main({"validate", "--model", model, "--validation", model,
                       "--od-model", od, "--od-model-zones", zones, "--od-validation",
                       od, "--od-validation-zones", zones, "--out", report_path}),
              0);
    const nlohmann::json report = nlohmann::json::parse(slurp(report_path));
    CHECK_EQ(report.at("od_summaries").at("model").at("zones").get<int>(), 2);
    CHECK(report.at("od_summaries").contains("validation"));
    bool found = false;
    for (const auto& record : report.at("records")) {
        if (record.at("statistic") == "d_od") {
            found = true;
            CHECK_EQ(record.at("status"), "ok");
            CHECK_EQ(record.at("value").get<double>(), 0.0);
        }
    }
    CHECK(found);
}

TEST_CASE("csv reports start with the fixed header") {
    TempDir dir;
    const std::string spec = dir.file("spec.json", kSpecJson);
    const std::string model = dir.file("model.csv");
    const std::string report_path = dir.file("report.csv");
    REQUIRE_EQ(cli_main({"generate", "--spec", spec, "--out", model}), 0);

    CHECK_EQ(cli_main({"validate", "--model", model, "--validation", model,
                       "--report-format", "csv", "--out", report_path}),
              0);
    const std::string text = slurp(report_path);
    CHECK_EQ(text.substr(0, text.find('\n')),
             "step,statistic,activity_type,mode,hour_bin,status,value,reason,"
             "n_model,n_validation,diagnostics");
}

TEST_CASE("grid emission writes one file set per located type") {
    TempDir dir;
    const std::string spec = dir.file("spec.json", kSpecJson);
    const std::string model = dir.file("model.csv");
    const std::string report_path = dir.file("report.json");
    const std::string grids = (dir.path / "grids").string();
    REQUIRE_EQ(cli_main({"generate", "--spec", spec, "--out", model}), 0);

    CHECK_EQ(cli_main({"validate", "--model", model, "--validation", model, "--out",
                       report_path, "--emit-grids", grids}),
              0);
    for (const std::string type : {"home", "work"}) {
        for (const std::string part :
             {"model_ecdf", "validation_ecdf", "validation_kde"}) {
            const fs::path csv = fs::path(grids) / ("a2_" + type + "_" + part + ".csv");
            const fs::path pgm = fs::path(grids) / ("a2_" + type + "_" + part + ".pgm");
            CHECK_MESSAGE(fs::exists(csv), csv.string());
            CHECK_MESSAGE(fs::exists(pgm), pgm.string());
        }
        // 32 lattice rows by default.
        const std::string text =
            slurp((fs::path(grids) / ("a2_" + type + "_model_ecdf.csv")).string());
        CHECK_EQ(std::count(text.begin(), text.end(), '\n'), 32);
    }
}

TEST_CASE("failed steps surface as exit code 1") {
    TempDir dir;
    const std::string model = dir.file("model.csv", diary_csv("car"));
    const std::string validation = dir.file("validation.csv", diary_csv("bus"));
    const std::string report_path = dir.file("report.json");

    CHECK_EQ(cli_main({"validate", "--model", model, "--validation", validation,
                       "--out", report_path}),
              1);
    const nlohmann::json report = nlohmann::json::parse(slurp(report_path));
    bool failed = false;
    for (const auto& record : report.at("records")) {
        if (record.at("status") == "failed") {
            failed = true;
            CHECK(record.contains("reason"));
        }
    }
    CHECK(failed);
}

TEST_CASE("usage problems exit with code 2") {
    TempDir dir;
    const std::string model = dir.file("model.csv", diary_csv("car"));

    SUBCASE("missing required option") {
        CHECK_EQ(cli_main({"validate", "--model", model}), 2);
    }
    SUBCASE("unknown subcommand") { CHECK_EQ(cli_main({"frobnicate"}), 2); }
    SUBCASE("o-d trips without zones") {
        CHECK_EQ(cli_main({"validate", "--model", model, "--validation", model,
                           "--od-model", model}),
                  2);
    }
    SUBCASE("bad report format") {
        CHECK_EQ(cli_main({"validate", "--model", model, "--validation", model,
                           "--report-format", "xml"}),
                  2);
    }
    SUBCASE("nonexistent input") {
        CHECK_EQ(cli_main({"validate", "--model", model, "--validation",
                           (dir.path / "missing.csv").string()}),
                  2);
    }
    SUBCASE("malformed diary") {
        const std::string bad = dir.file("bad.csv", "person_id,seq\np0,0\n");
        CHECK_EQ(cli_main({"validate", "--model", bad, "--validation", bad}), 2);
    }
    SUBCASE("help is not an error") { CHECK_EQ(cli_main({"--help"}), 0); }
}

TEST_CASE("inspect prints a dataset summary") {
    TempDir dir;
    const std::string model = dir.file("model.csv", diary_csv("car"));

    std::ostringstream captured;
    std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
    const int code = cli_main({"inspect", model});
    std::cout.rdbuf(old);

    CHECK_EQ(code, 0);
    const nlohmann::json summary = nlohmann::json::parse(captured.str());
    CHECK_EQ(summary.at("schedules").get<int>(), 6);
    CHECK_EQ(summary.at("modes"), nlohmann::json::array({"car"}));
}
