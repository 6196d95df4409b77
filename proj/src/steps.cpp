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

#include "valfram/steps.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "valfram/ngram.hpp"
#include "valfram/version.hpp"

namespace valfram {

const char* step_name(Step step) {
    switch (step) {
        case Step::A1: return "A1";
        case Step::A2: return "A2";
        case Step::A3: return "A3";
        case Step::B1: return "B1";
        case Step::B2: return "B2";
        case Step::B3: return "B3";
    }
    return "?";
}

const char* record_status_name(RecordStatus status) {
    switch (status) {
        case RecordStatus::Ok: return "ok";
        case RecordStatus::Skipped: return "skipped";
        case RecordStatus::Failed: return "failed";
    }
    return "?";
}

StepConfig::StepConfig() {
    hour_bins.reserve(24);
    for (int h = 0; h < 24; ++h) {
        hour_bins.emplace_back(h * 3600, (h + 1) * 3600);
    }
}

void validate_config(const StepConfig& cfg) {
    if (cfg.grid_rows < 1 || cfg.grid_cols < 1) {
        throw ConfigError("grid must have at least one row and one column");
    }
    if (cfg.ngram_k < 1) {
        throw ConfigError("ngram_k must be >= 1");
    }
    if (!(cfg.ngram_p > 0.0) || cfg.ngram_p > 1.0) {
        throw ConfigError("ngram_p must lie in (0, 1]");
    }
    if (cfg.min_samples < 0) {
        throw ConfigError("min_samples must be >= 0");
    }
    for (std::size_t i = 0; i < cfg.hour_bins.size(); ++i) {
        const auto& [start, end] = cfg.hour_bins[i];
        if (start < 0 || end > kSecondsPerDay || start >= end) {
            throw ConfigError("hour bin " + std::to_string(i) + " is malformed");
        }
        for (std::size_t j = i + 1; j < cfg.hour_bins.size(); ++j) {
            const auto& [s2, e2] = cfg.hour_bins[j];
            if (start < e2 && s2 < end) {
                throw ConfigError("hour bins " + std::to_string(i) + " and " +
                                  std::to_string(j) + " overlap");
            }
        }
    }
}

namespace {

std::vector<ActivityType> shared_activity_types(const DiaryDataset& model,
                                                const DiaryDataset& validation) {
    std::vector<ActivityType> shared;
    std::set_intersection(model.activity_vocab().begin(), model.activity_vocab().end(),
                          validation.activity_vocab().begin(),
                          validation.activity_vocab().end(), std::back_inserter(shared));
    if (shared.empty()) {
        throw NoCommonVocabulary("datasets share no activity type");
    }
    return shared;
}

std::vector<Mode> shared_modes(const DiaryDataset& model,
                               const DiaryDataset& validation) {
    std::vector<Mode> shared;
    std::set_intersection(model.mode_vocab().begin(), model.mode_vocab().end(),
                          validation.mode_vocab().begin(), validation.mode_vocab().end(),
                          std::back_inserter(shared));
    if (shared.empty()) {
        throw NoCommonVocabulary("datasets share no transport mode");
    }
    return shared;
}

std::vector<double> gather_starts(const DiaryDataset& dataset, const ActivityType& type) {
    std::vector<double> values;
    for (const ActivitySchedule& schedule : dataset.schedules()) {
        for (const ActivityInstance& act : schedule.activities) {
            if (act.activity_type == type) {
                values.push_back(static_cast<double>(act.start_s));
            }
        }
    }
    return values;
}

std::vector<double> gather_durations(const DiaryDataset& dataset,
                                     const ActivityType& type) {
    std::vector<double> values;
    for (const ActivitySchedule& schedule : dataset.schedules()) {
        for (const ActivityInstance& act : schedule.activities) {
            if (act.activity_type == type) {
                values.push_back(static_cast<double>(act.duration_s));
            }
        }
    }
    return values;
}

MetricRecord skipped_record(Step step, std::string statistic, std::string reason,
                            long n_model, long n_validation) {
    MetricRecord record;
    record.step = step;
    record.statistic = std::move(statistic);
    record.status = RecordStatus::Skipped;
    record.reason = std::move(reason);
    record.n_model = n_model;
    record.n_validation = n_validation;
    return record;
}

/// True (and fills in a Skipped record) when either side is undersampled.
bool guard_min_samples(std::vector<MetricRecord>& records, MetricRecord base,
                       long n_model, long n_validation, int min_samples) {
    if (n_model >= min_samples && n_validation >= min_samples) {
        return false;
    }
    base.status = RecordStatus::Skipped;
    base.reason = "n_model=" + std::to_string(n_model) +
                  " n_validation=" + std::to_string(n_validation) +
                  " below min_samples=" + std::to_string(min_samples);
    base.n_model = n_model;
    base.n_validation = n_validation;
    records.push_back(std::move(base));
    return true;
}

MatrixX2<double> to_points(const std::vector<Point>& locations) {
    MatrixX2<double> points(static_cast<Index>(locations.size()), 2);
    for (Index i = 0; i < points.rows(); ++i) {
        points.row(i) = locations[static_cast<std::size_t>(i)].transpose();
    }
    return points;
}

std::vector<Point> gather_locations(const DiaryDataset& dataset,
                                    const ActivityType& type) {
    std::vector<Point> locations;
    for (const ActivitySchedule& schedule : dataset.schedules()) {
        for (const ActivityInstance& act : schedule.activities) {
            if (act.activity_type == type && act.location) {
                locations.push_back(*act.location);
            }
        }
    }
    return locations;
}

CountVector to_count_vector(const std::map<std::string, double>& counts) {
    std::vector<std::string> labels;
    Vector values(static_cast<Index>(counts.size()));
    Index i = 0;
    for (const auto& [label, count] : counts) {
        labels.push_back(label);
        values[i++] = count;
    }
    return CountVector(std::move(labels), std::move(values));
}

void append_chi_square_record(std::vector<MetricRecord>& records, MetricRecord base,
                              const std::map<std::string, double>& model_counts,
                              const std::map<std::string, double>& validation_counts) {
    const ChiSquareResult chi =
        scaled_chi_square(to_count_vector(model_counts), to_count_vector(validation_counts));
    base.status = RecordStatus::Ok;
    base.value = chi.chi2;
    base.diagnostics["dropped_model_mass"] = chi.dropped_model_mass;
    records.push_back(std::move(base));
}

}  // namespace

std::vector<MetricRecord> step_a1(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg) {
    std::vector<MetricRecord> records;
    for (const ActivityType& type : shared_activity_types(model, validation)) {
        const std::vector<double> model_starts = gather_starts(model, type);
        const std::vector<double> validation_starts = gather_starts(validation, type);

        MetricRecord start_record;
        start_record.step = Step::A1;
        start_record.statistic = "ks_start";
        start_record.activity_type = type.name();
        if (!guard_min_samples(records, start_record,
                               static_cast<long>(model_starts.size()),
                               static_cast<long>(validation_starts.size()),
                               cfg.min_samples)) {
            start_record.value =
                ks_statistic(Sample1D(model_starts), Sample1D(validation_starts));
            start_record.n_model = static_cast<long>(model_starts.size());
            start_record.n_validation = static_cast<long>(validation_starts.size());
            records.push_back(std::move(start_record));
        }

        const std::vector<double> model_durations = gather_durations(model, type);
        const std::vector<double> validation_durations = gather_durations(validation, type);

        MetricRecord duration_record;
        duration_record.step = Step::A1;
        duration_record.statistic = "ks_duration";
        duration_record.activity_type = type.name();
        if (!guard_min_samples(records, duration_record,
                               static_cast<long>(model_durations.size()),
                               static_cast<long>(validation_durations.size()),
                               cfg.min_samples)) {
            duration_record.value =
                ks_statistic(Sample1D(model_durations), Sample1D(validation_durations));
            duration_record.n_model = static_cast<long>(model_durations.size());
            duration_record.n_validation = static_cast<long>(validation_durations.size());
            records.push_back(std::move(duration_record));
        }
    }
    return records;
}

std::vector<MetricRecord> step_a2(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg, A2Artifacts* artifacts) {
    if (!model.has_locations() || !validation.has_locations()) {
        throw MissingLocations("step A2 needs locations in both datasets");
    }
    std::vector<MetricRecord> records;
    for (const ActivityType& type : shared_activity_types(model, validation)) {
        const std::vector<Point> model_locations = gather_locations(model, type);
        const std::vector<Point> validation_locations = gather_locations(validation, type);

        MetricRecord record;
        record.step = Step::A2;
        record.statistic = "ecdf_rmse";
        record.activity_type = type.name();
        if (guard_min_samples(records, record, static_cast<long>(model_locations.size()),
                              static_cast<long>(validation_locations.size()),
                              cfg.min_samples)) {
            continue;
        }

        const MatrixX2<double> model_points = to_points(model_locations);
        const MatrixX2<double> validation_points = to_points(validation_locations);
        GridBounds bounds{
            std::min(model_points.col(0).minCoeff(), validation_points.col(0).minCoeff()),
            std::max(model_points.col(0).maxCoeff(), validation_points.col(0).maxCoeff()),
            std::min(model_points.col(1).minCoeff(), validation_points.col(1).minCoeff()),
            std::max(model_points.col(1).maxCoeff(), validation_points.col(1).maxCoeff())};

        try {
            EcdfGrid model_grid = ecdf_grid(model_points, cfg.grid_rows, cfg.grid_cols, bounds);
            EcdfGrid validation_grid =
                ecdf_grid(validation_points, cfg.grid_rows, cfg.grid_cols, bounds);
            record.status = RecordStatus::Ok;
            record.value = ecdf_rmse(model_grid, validation_grid);
            record.n_model = static_cast<long>(model_locations.size());
            record.n_validation = static_cast<long>(validation_locations.size());
            if (artifacts) {
                SpatialArtifact artifact;
                artifact.model_ecdf = std::move(model_grid);
                artifact.validation_ecdf = std::move(validation_grid);
                try {
                    artifact.validation_kde =
                        kde_grid(validation_points, cfg.grid_rows, cfg.grid_cols, bounds);
                } catch (const TooFewPoints&) {
                    // ECDF comparison stands on its own; the heat map is optional.
                }
                (*artifacts)[type.name()] = std::move(artifact);
            }
        } catch (const DegenerateBounds& e) {
            record.status = RecordStatus::Failed;
            record.reason = e.what();
            record.n_model = static_cast<long>(model_locations.size());
            record.n_validation = static_cast<long>(validation_locations.size());
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<MetricRecord> step_a3(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg) {
    std::vector<MetricRecord> records;
    for (const ActivityType& type : shared_activity_types(model, validation)) {
        const auto occurrence_counts = [&type](const DiaryDataset& dataset) {
            std::map<std::string, double> counts;
            for (const ActivitySchedule& schedule : dataset.schedules()) {
                long occurrences = 0;
                for (const ActivityInstance& act : schedule.activities) {
                    if (act.activity_type == type) {
                        ++occurrences;
                    }
                }
                counts[std::to_string(occurrences)] += 1.0;
            }
            return counts;
        };

        MetricRecord record;
        record.step = Step::A3;
        record.statistic = "chi2_count";
        record.activity_type = type.name();
        record.n_model = static_cast<long>(model.schedule_count());
        record.n_validation = static_cast<long>(validation.schedule_count());
        if (!guard_min_samples(records, record, record.n_model, record.n_validation,
                               cfg.min_samples)) {
            append_chi_square_record(records, std::move(record), occurrence_counts(model),
                                     occurrence_counts(validation));
        }
    }

    const auto sequences = [](const DiaryDataset& dataset) {
        std::vector<std::vector<ActivityType>> result;
        result.reserve(dataset.schedule_count());
        for (const ActivitySchedule& schedule : dataset.schedules()) {
            result.push_back(activity_sequence(schedule));
        }
        return result;
    };
    const NGramProfile model_profile =
        ngram_profile(sequences(model), cfg.ngram_k, cfg.ngram_p);
    const NGramProfile validation_profile =
        ngram_profile(sequences(validation), cfg.ngram_k, cfg.ngram_p);
    const ProfileChiSquare profile = profile_chi_square(model_profile, validation_profile);

    MetricRecord ngram_record;
    ngram_record.step = Step::A3;
    ngram_record.statistic = "chi2_ngram";
    ngram_record.status = RecordStatus::Ok;
    ngram_record.value = profile.chi2;
    ngram_record.n_model = static_cast<long>(model.schedule_count());
    ngram_record.n_validation = static_cast<long>(validation.schedule_count());
    ngram_record.diagnostics["matched"] = profile.matched;
    ngram_record.diagnostics["model_only"] = profile.model_only;
    ngram_record.diagnostics["validation_only"] = profile.validation_only;
    records.push_back(std::move(ngram_record));
    return records;
}

std::vector<MetricRecord> step_b1(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg) {
    const std::vector<Mode> modes = shared_modes(model, validation);
    std::vector<MetricRecord> records;

    for (std::size_t bin = 0; bin < cfg.hour_bins.size(); ++bin) {
        const auto [bin_start, bin_end] = cfg.hour_bins[bin];
        const auto mode_counts = [bin_start, bin_end](const DiaryDataset& dataset,
                                                      long& total) {
            std::map<std::string, double> counts;
            total = 0;
            for (const ActivitySchedule& schedule : dataset.schedules()) {
                for (const Trip& trip : schedule.trips) {
                    if (trip.depart_s >= bin_start && trip.depart_s < bin_end) {
                        counts[trip.mode.name()] += 1.0;
                        ++total;
                    }
                }
            }
            return counts;
        };

        long n_model = 0;
        long n_validation = 0;
        const std::map<std::string, double> model_counts = mode_counts(model, n_model);
        const std::map<std::string, double> validation_counts =
            mode_counts(validation, n_validation);

        MetricRecord record;
        record.step = Step::B1;
        record.statistic = "chi2_mode_hour";
        record.hour_bin = static_cast<int>(bin);
        record.n_model = n_model;
        record.n_validation = n_validation;
        if (!guard_min_samples(records, record, n_model, n_validation, cfg.min_samples)) {
            append_chi_square_record(records, std::move(record), model_counts,
                                     validation_counts);
        }
    }

    for (const Mode& mode : modes) {
        const auto travel_times = [&mode](const DiaryDataset& dataset) {
            std::vector<double> values;
            for (const ActivitySchedule& schedule : dataset.schedules()) {
                for (const Trip& trip : schedule.trips) {
                    if (trip.mode == mode) {
                        values.push_back(static_cast<double>(trip.travel_time_s));
                    }
                }
            }
            return values;
        };
        const std::vector<double> model_times = travel_times(model);
        const std::vector<double> validation_times = travel_times(validation);

        MetricRecord record;
        record.step = Step::B1;
        record.statistic = "ks_travel_time";
        record.mode = mode.name();
        if (!guard_min_samples(records, record, static_cast<long>(model_times.size()),
                               static_cast<long>(validation_times.size()),
                               cfg.min_samples)) {
            record.status = RecordStatus::Ok;
            record.value = ks_statistic(Sample1D(model_times), Sample1D(validation_times));
            record.n_model = static_cast<long>(model_times.size());
            record.n_validation = static_cast<long>(validation_times.size());
            records.push_back(std::move(record));
        }
    }
    return records;
}

MetricRecord step_b2(const ODMatrix& model_od, const ODMatrix& validation_od,
                     const std::vector<Zone>* common_zones) {
    const std::vector<Zone>& target =
        common_zones ? *common_zones : validation_od.zones();
    const ODMatrix projected_model = od_project(model_od, target);
    const ODMatrix projected_validation =
        common_zones ? od_project(validation_od, target) : validation_od;

    MetricRecord record;
    record.step = Step::B2;
    record.statistic = "d_od";
    record.status = RecordStatus::Ok;
    const NormalizedOD model_norm = od_normalize(projected_model);
    const NormalizedOD validation_norm = od_normalize(projected_validation);
    record.value = od_distance(model_norm, validation_norm);
    record.n_model = std::lround(model_od.total());
    record.n_validation = std::lround(validation_od.total());
    const auto support = (model_norm.shares().array() > 0.0) ||
                         (validation_norm.shares().array() > 0.0);
    record.diagnostics["support_cells"] = static_cast<double>(support.count());
    record.diagnostics["zones"] = static_cast<double>(target.size());
    return record;
}

std::vector<MetricRecord> step_b3(const DiaryDataset& model,
                                  const DiaryDataset& validation,
                                  const StepConfig& cfg) {
    shared_modes(model, validation);
    std::vector<MetricRecord> records;
    for (const ActivityType& type : shared_activity_types(model, validation)) {
        // Trip k arrives at activity k+1; that activity's type is the target.
        const auto arriving_modes = [&type](const DiaryDataset& dataset, long& total) {
            std::map<std::string, double> counts;
            total = 0;
            for (const ActivitySchedule& schedule : dataset.schedules()) {
                for (std::size_t k = 0; k < schedule.trips.size(); ++k) {
                    if (schedule.activities[k + 1].activity_type == type) {
                        counts[schedule.trips[k].mode.name()] += 1.0;
                        ++total;
                    }
                }
            }
            return counts;
        };

        long n_model = 0;
        long n_validation = 0;
        const std::map<std::string, double> model_counts = arriving_modes(model, n_model);
        const std::map<std::string, double> validation_counts =
            arriving_modes(validation, n_validation);

        MetricRecord record;
        record.step = Step::B3;
        record.statistic = "chi2_mode_target";
        record.activity_type = type.name();
        record.n_model = n_model;
        record.n_validation = n_validation;
        if (!guard_min_samples(records, record, n_model, n_validation, cfg.min_samples)) {
            append_chi_square_record(records, std::move(record), model_counts,
                                     validation_counts);
        }
    }
    return records;
}

DatasetSummary summarize(const DiaryDataset& dataset) {
    DatasetSummary summary;
    summary.schedules = dataset.schedule_count();
    summary.activities = dataset.activity_count();
    summary.trips = dataset.trip_count();
    for (const ActivityType& type : dataset.activity_vocab()) {
        summary.activity_types.push_back(type.name());
    }
    for (const Mode& mode : dataset.mode_vocab()) {
        summary.modes.push_back(mode.name());
    }
    summary.has_locations = dataset.has_locations();
    return summary;
}

bool ValidationReport::has_failures() const {
    return std::any_of(records.begin(), records.end(), [](const MetricRecord& r) {
        return r.status == RecordStatus::Failed;
    });
}

namespace {

MetricRecord step_status_record(Step step, RecordStatus status, std::string reason) {
    MetricRecord record;
    record.step = step;
    record.statistic = "step";
    record.status = status;
    record.reason = std::move(reason);
    return record;
}

void sort_records(std::vector<MetricRecord>& records) {
    std::sort(records.begin(), records.end(),
              [](const MetricRecord& a, const MetricRecord& b) {
                  return std::make_tuple(a.step, a.statistic,
                                         a.activity_type.value_or(""),
                                         a.mode.value_or(""), a.hour_bin.value_or(-1)) <
                         std::make_tuple(b.step, b.statistic,
                                         b.activity_type.value_or(""),
                                         b.mode.value_or(""), b.hour_bin.value_or(-1));
              });
}

}  // namespace

ValidationReport run_all(const DiaryDataset& model, const DiaryDataset& validation,
                         const ODMatrix* model_od, const ODMatrix* validation_od,
                         const StepConfig& cfg, A2Artifacts* artifacts,
                         const std::vector<Zone>* common_zones) {
    validate_config(cfg);

    ValidationReport report;
    report.tool_version = kVersion;
    report.config = cfg;
    report.model_summary = summarize(model);
    report.validation_summary = summarize(validation);
    if (model_od) {
        report.od_model_summary = OdSummary{model_od->zones().size(), model_od->total()};
    }
    if (validation_od) {
        report.od_validation_summary =
            OdSummary{validation_od->zones().size(), validation_od->total()};
    }

    const auto run_step = [&report](Step step, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            report.records.push_back(
                step_status_record(step, RecordStatus::Failed, e.what()));
        }
    };

    const auto append = [&report](std::vector<MetricRecord> records) {
        std::move(records.begin(), records.end(), std::back_inserter(report.records));
    };

    run_step(Step::A1, [&] { append(step_a1(model, validation, cfg)); });

    if (model.has_locations() && validation.has_locations()) {
        run_step(Step::A2, [&] { append(step_a2(model, validation, cfg, artifacts)); });
    } else {
        report.records.push_back(step_status_record(
            Step::A2, RecordStatus::Skipped, "datasets do not both carry locations"));
    }

    run_step(Step::A3, [&] { append(step_a3(model, validation, cfg)); });
    run_step(Step::B1, [&] { append(step_b1(model, validation, cfg)); });

    if (model_od && validation_od) {
        run_step(Step::B2, [&] {
            report.records.push_back(step_b2(*model_od, *validation_od, common_zones));
        });
    } else {
        report.records.push_back(step_status_record(
            Step::B2, RecordStatus::Skipped, "O-D matrices were not supplied"));
    }

    run_step(Step::B3, [&] { append(step_b3(model, validation, cfg)); });

    sort_records(report.records);
    return report;
}

}  // namespace valfram
