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

#ifndef VALFRAM_STEPS_HPP
#define VALFRAM_STEPS_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "valfram/grid.hpp"
#include "valfram/od.hpp"
#include "valfram/schedule.hpp"
#include "valfram/stats.hpp"

namespace valfram {

enum class Step { A1, A2, A3, B1, B2, B3 };

const char* step_name(Step step);

enum class RecordStatus { Ok, Skipped, Failed };

const char* record_status_name(RecordStatus status);

/// One computed statistic with its context. `value` is present exactly for
/// Ok records; Skipped and Failed records carry a reason instead.
struct MetricRecord {
    Step step = Step::A1;
    std::string statistic;
    std::optional<std::string> activity_type;
    std::optional<std::string> mode;
    std::optional<int> hour_bin;  // index into StepConfig::hour_bins
    RecordStatus status = RecordStatus::Ok;
    std::optional<double> value;
    std::string reason;
    long n_model = 0;
    long n_validation = 0;
    std::map<std::string, double> diagnostics;
};

/// Tuning knobs shared by all steps.
struct StepConfig {
    Index grid_rows = 32;
    Index grid_cols = 32;
    int ngram_k = 11;
    double ngram_p = 0.9;
    /// Disjoint [start_s, end_s) intervals; trips are binned by departure.
    std::vector<std::pair<int, int>> hour_bins;
    /// Contexts with fewer samples on either side yield a Skipped record.
    int min_samples = 5;

    StepConfig();
};

void validate_config(const StepConfig& cfg);

/// Retained A2 grids for one activity type; the KDE side is absent when the
/// validation points cannot support an automatic bandwidth.
struct SpatialArtifact {
    EcdfGrid model_ecdf;
    EcdfGrid validation_ecdf;
    std::optional<DensityGrid> validation_kde;
};

/// Heat-map material collected while running step A2, keyed by type name.
using A2Artifacts = std::map<std::string, SpatialArtifact>;

/// A1: KS over start times and durations per shared activity type.
std::vector<MetricRecord> step_a1(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg);

/// A2: ECDF-grid RMSE per shared activity type over the union bounding box,
/// plus retained grids and a validation-side KDE for rendering.
std::vector<MetricRecord> step_a2(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg,
                                  A2Artifacts* artifacts = nullptr);

/// A3: chi-square over per-schedule occurrence counts per shared type, and
/// one chi-square over the n-gram profiles of the two corpora.
std::vector<MetricRecord> step_a3(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg);

/// B1: chi-square of mode counts per hour bin, KS of travel times per mode.
std::vector<MetricRecord> step_b1(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg);

/// B2: project the model matrix onto the common zone set (the validation
/// zones unless overridden), normalize both, compute the O-D distance.
MetricRecord step_b2(const ODMatrix& model_od, const ODMatrix& validation_od,
                     const std::vector<Zone>* common_zones = nullptr);

/// B3: chi-square of arriving-trip mode counts per shared target type.
std::vector<MetricRecord> step_b3(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg);

/// Per-dataset counts echoed into the report.
struct DatasetSummary {
    std::size_t schedules = 0;
    std::size_t activities = 0;
    std::size_t trips = 0;
    std::vector<std::string> activity_types;
    std::vector<std::string> modes;
    bool has_locations = false;
};

DatasetSummary summarize(const DiaryDataset& dataset);

struct OdSummary {
    std::size_t zones = 0;
    double total_trips = 0;
};

/// Full A1-B3 result set. Records are ordered by (step, statistic, context)
/// so identical runs serialize identically.
struct ValidationReport {
    std::string tool_version;
    StepConfig config;
    DatasetSummary model_summary;
    DatasetSummary validation_summary;
    std::optional<OdSummary> od_model_summary;
    std::optional<OdSummary> od_validation_summary;
    std::vector<MetricRecord> records;

    bool has_failures() const;
};

/// Runs every applicable step; inapplicable steps become Skipped records and
/// per-step errors become Failed records instead of aborting the run.
ValidationReport run_all(const DiaryDataset& model, const DiaryDataset& validation,
                         const ODMatrix* model_od, const ODMatrix* validation_od,
                         const StepConfig& cfg, A2Artifacts* artifacts = nullptr,
                         const std::vector<Zone>* common_zones = nullptr);

}  // namespace valfram

#endif  // VALFRAM_STEPS_HPP
