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

#include "valfram/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "valfram/io.hpp"
#include "valfram/steps.hpp"
#include "valfram/synthgen.hpp"

namespace valfram {

namespace {

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string filename_token(const std::string& name) {
    std::string token = name;
    for (char& c : token) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '_';
        if (!keep) {
            c = '_';
        }
    }
    return token;
}

void emit_grids(const A2Artifacts& artifacts, const std::string& dir) {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    for (const auto& [type, artifact] : artifacts) {
        const std::string stem = "a2_" + filename_token(type) + "_";
        const auto emit = [&](const std::string& name, const Matrix& values) {
            write_text(base / (stem + name + ".csv"), grid_to_csv(values));
            write_text(base / (stem + name + ".pgm"), grid_to_pgm(values));
        };
        emit("model_ecdf", artifact.model_ecdf.values);
        emit("validation_ecdf", artifact.validation_ecdf.values);
        if (artifact.validation_kde) {
            emit("validation_kde", artifact.validation_kde->values);
        }
    }
}

struct ValidateOptions {
    std::string model_path;
    std::string validation_path;
    std::string od_model_trips;
    std::string od_model_zones;
    std::string od_validation_trips;
    std::string od_validation_zones;
    std::string zones_path;
    std::string config_path;
    std::string out_path;
    std::string report_format = "json";
    std::string grids_dir;
};

int run_validate(const ValidateOptions& opt) {
    const DiaryDataset model = parse_diary(opt.model_path);
    const DiaryDataset validation = parse_diary(opt.validation_path);
    const StepConfig cfg =
        opt.config_path.empty() ? StepConfig() : load_step_config(opt.config_path);

    std::optional<ODMatrix> model_od;
    std::optional<ODMatrix> validation_od;
    if (!opt.od_model_trips.empty()) {
        model_od = parse_od(opt.od_model_zones, opt.od_model_trips);
    }
    if (!opt.od_validation_trips.empty()) {
        validation_od = parse_od(opt.od_validation_zones, opt.od_validation_trips);
    }
    std::optional<std::vector<Zone>> common_zones;
    if (!opt.zones_path.empty()) {
        common_zones = parse_zones(opt.zones_path);
    }

    A2Artifacts artifacts;
    const ValidationReport report =
        run_all(model, validation, model_od ? &*model_od : nullptr,
                validation_od ? &*validation_od : nullptr, cfg,
                opt.grids_dir.empty() ? nullptr : &artifacts,
                common_zones ? &*common_zones : nullptr);

    const std::string payload =
        opt.report_format == "csv" ? report_to_csv(report) : report_to_json(report);
    if (opt.out_path.empty()) {
        std::cout << payload;
    } else {
        write_text(opt.out_path, payload);
    }
    if (!opt.grids_dir.empty()) {
        emit_grids(artifacts, opt.grids_dir);
    }
    return report.has_failures() ? 1 : 0;
}

struct GenerateOptions {
    std::string spec_path;
    std::string out_path;
    std::string perturb_kind;
    double magnitude = 0.0;
    std::string zones_path;
    std::string od_out_path;
};

int run_generate(const GenerateOptions& opt) {
    GeneratorSpec spec = load_generator_spec(opt.spec_path);
    if (!opt.perturb_kind.empty()) {
        spec = perturb(spec, perturb_kind_from_string(opt.perturb_kind), opt.magnitude);
    }
    const DiaryDataset dataset = generate(spec);
    write_diary(dataset, opt.out_path);
    if (!opt.zones_path.empty()) {
        const std::vector<Zone> zones = parse_zones(opt.zones_path);
        write_od_trips(derive_od(dataset, zones), opt.od_out_path);
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"valfram: statistical validation of activity-based transport models"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 1 report contains failed records, 2 fatal error.");

    ValidateOptions vopt;
    CLI::App* validate = app.add_subcommand(
        "validate", "Compare a model travel diary against a validation diary");
    validate->add_option("--model", vopt.model_path, "Model diary CSV")
        ->required();
    validate->add_option("--validation", vopt.validation_path, "Validation diary CSV")
        ->required();
    CLI::Option* od_model =
        validate->add_option("--od-model", vopt.od_model_trips, "Model O-D trip CSV");
    CLI::Option* od_model_zones = validate->add_option(
        "--od-model-zones", vopt.od_model_zones, "Zone CSV for the model O-D matrix");
    od_model->needs(od_model_zones);
    od_model_zones->needs(od_model);
    CLI::Option* od_validation = validate->add_option(
        "--od-validation", vopt.od_validation_trips, "Validation O-D trip CSV");
    CLI::Option* od_validation_zones =
        validate->add_option("--od-validation-zones", vopt.od_validation_zones,
                             "Zone CSV for the validation O-D matrix");
    od_validation->needs(od_validation_zones);
    od_validation_zones->needs(od_validation);
    od_model->needs(od_validation);
    od_validation->needs(od_model);
    validate
        ->add_option("--zones", vopt.zones_path,
                     "Zone CSV both O-D matrices are projected onto "
                     "(default: the validation zones)")
        ->needs(od_validation);
    validate->add_option("--config", vopt.config_path, "Step configuration JSON");
    validate->add_option("--out", vopt.out_path, "Report file (default: stdout)");
    validate
        ->add_option("--report-format", vopt.report_format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    validate->add_option("--emit-grids", vopt.grids_dir,
                         "Directory for spatial grid and heat-map files");

    GenerateOptions gopt;
    CLI::App* generate = app.add_subcommand(
        "generate", "Sample a synthetic travel diary from a generator spec");
    generate->add_option("--spec", gopt.spec_path, "Generator spec JSON")->required();
    generate->add_option("--out", gopt.out_path, "Diary CSV to write")->required();
    CLI::Option* perturb_opt = generate->add_option(
        "--perturb", gopt.perturb_kind,
        "Perturbation kind: shift_start, swap_modes, relocate or reorder");
    generate->add_option("--magnitude", gopt.magnitude, "Perturbation magnitude")
        ->needs(perturb_opt);
    CLI::Option* zones_opt =
        generate->add_option("--zones", gopt.zones_path, "Zone CSV for O-D derivation");
    CLI::Option* od_out_opt = generate->add_option(
        "--od-out", gopt.od_out_path, "Trip CSV for the derived O-D matrix");
    zones_opt->needs(od_out_opt);
    od_out_opt->needs(zones_opt);

    std::string inspect_path;
    CLI::App* inspect =
        app.add_subcommand("inspect", "Print a summary of a travel diary");
    inspect->add_option("diary", inspect_path, "Diary CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) {
            return run_validate(vopt);
        }
        if (generate->parsed()) {
            return run_generate(gopt);
        }
        if (inspect->parsed()) {
            std::cout << dataset_summary_to_json(summarize(parse_diary(inspect_path)));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int cli_main(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("valfram");
    for (const std::string& arg : args) {
        argv.push_back(arg.c_str());
    }
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace valfram
