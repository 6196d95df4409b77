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

#include "valfram/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace valfram {

namespace detail {

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

}  // namespace detail

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(begin));
            return fields;
        }
        fields.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
}

/// Reads a logical line, dropping a trailing CR from CRLF input.
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

long parse_long(const std::string& field, const SourceLocation& loc, const char* what) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(loc, std::string(what) + " '" + field + "' is not an integer");
    }
    return value;
}

double parse_number(const std::string& field, const SourceLocation& loc, const char* what) {
    double value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(loc, std::string(what) + " '" + field + "' is not a number");
    }
    if (!std::isfinite(value)) {
        throw ParseError(loc, std::string(what) + " must be finite");
    }
    return value;
}

/// Maps required column names to their positions in the header row.
std::map<std::string, std::size_t> index_header(const std::string& line,
                                                const std::vector<std::string>& required,
                                                const SourceLocation& loc) {
    const std::vector<std::string> names = split_fields(line);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (std::find(required.begin(), required.end(), names[i]) == required.end()) {
            continue;
        }
        if (!index.emplace(names[i], i).second) {
            throw ParseError(loc, "duplicate column '" + names[i] + "'");
        }
    }
    for (const std::string& name : required) {
        if (index.find(name) == index.end()) {
            throw ParseError(loc, "missing column '" + name + "'");
        }
    }
    return index;
}

struct DiaryRow {
    long seq = 0;
    std::string activity_type;
    long start_s = 0;
    long duration_s = 0;
    std::optional<Point> location;
    std::string arr_mode;
    long arr_trip_duration_s = 0;
    long arr_depart_s = 0;
    int line = 0;
};

}  // namespace

DiaryDataset parse_diary(std::istream& in, const std::string& name) {
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError({name, 1}, "missing header row");
    }
    const std::vector<std::string> columns = {
        "person_id",      "seq", "activity_type",        "start_s",     "duration_s",
        "x",              "y",   "arr_mode",             "arr_trip_duration_s",
        "arr_depart_s"};
    const auto index = index_header(line, columns, {name, 1});

    std::vector<std::string> person_order;
    std::map<std::string, std::vector<DiaryRow>> rows_by_person;

    int line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const SourceLocation loc{name, line_no};
        const std::vector<std::string> fields = split_fields(line);
        const auto field = [&](const char* column) -> const std::string& {
            const std::size_t i = index.at(column);
            if (i >= fields.size()) {
                throw ParseError(loc, "row has too few fields");
            }
            return fields[i];
        };

        const std::string& person_id = field("person_id");
        if (person_id.empty()) {
            throw ParseError(loc, "person_id is empty");
        }

        DiaryRow row;
        row.line = line_no;
        row.seq = parse_long(field("seq"), loc, "seq");
        if (row.seq < 0) {
            throw ParseError(loc, "seq must be >= 0");
        }
        row.activity_type = field("activity_type");
        row.start_s = parse_long(field("start_s"), loc, "start_s");
        row.duration_s = parse_long(field("duration_s"), loc, "duration_s");

        const std::string& x = field("x");
        const std::string& y = field("y");
        if (x.empty() != y.empty()) {
            throw ParseError(loc, "x and y must both be present or both be empty");
        }
        if (!x.empty()) {
            row.location = Point(parse_number(x, loc, "x"), parse_number(y, loc, "y"));
        }

        row.arr_mode = field("arr_mode");
        const std::string& arr_duration = field("arr_trip_duration_s");
        const std::string& arr_depart = field("arr_depart_s");
        if (row.seq == 0) {
            if (!row.arr_mode.empty() || !arr_duration.empty() || !arr_depart.empty()) {
                throw ParseError(loc, "arr_* fields must be empty at seq 0");
            }
        } else {
            if (row.arr_mode.empty() || arr_duration.empty() || arr_depart.empty()) {
                throw ParseError(loc, "arr_* fields are required for seq > 0");
            }
            row.arr_trip_duration_s = parse_long(arr_duration, loc, "arr_trip_duration_s");
            row.arr_depart_s = parse_long(arr_depart, loc, "arr_depart_s");
        }

        if (rows_by_person.find(person_id) == rows_by_person.end()) {
            person_order.push_back(person_id);
        }
        rows_by_person[person_id].push_back(std::move(row));
    }

    std::vector<ActivitySchedule> schedules;
    schedules.reserve(person_order.size());
    for (const std::string& person_id : person_order) {
        std::vector<DiaryRow>& rows = rows_by_person[person_id];
        std::stable_sort(rows.begin(), rows.end(),
                         [](const DiaryRow& a, const DiaryRow& b) { return a.seq < b.seq; });
        ActivitySchedule schedule;
        schedule.person_id = person_id;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const DiaryRow& row = rows[k];
            const SourceLocation loc{name, row.line};
            if (row.seq != static_cast<long>(k)) {
                throw ParseError(loc, "person '" + person_id + "' expects seq " +
                                          std::to_string(k) + ", found " +
                                          std::to_string(row.seq));
            }
            try {
                ActivityInstance act{ActivityType(row.activity_type),
                                     static_cast<int>(row.start_s),
                                     static_cast<int>(row.duration_s), row.location};
                schedule.activities.push_back(std::move(act));
                if (row.seq > 0) {
                    schedule.trips.push_back(Trip{Mode(row.arr_mode),
                                                  static_cast<int>(row.arr_trip_duration_s),
                                                  static_cast<int>(row.arr_depart_s)});
                }
            } catch (const InvariantViolation& e) {
                throw ParseError(loc, e.what());
            }
        }
        schedules.push_back(std::move(schedule));
    }
    return build_dataset(std::move(schedules));
}

DiaryDataset parse_diary(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open diary file '" + path + "'");
    }
    return parse_diary(in, path);
}

void write_diary(const DiaryDataset& dataset, std::ostream& out) {
    out << "person_id,seq,activity_type,start_s,duration_s,x,y,"
           "arr_mode,arr_trip_duration_s,arr_depart_s\n";
    for (const ActivitySchedule& schedule : dataset.schedules()) {
        for (std::size_t k = 0; k < schedule.activities.size(); ++k) {
            const ActivityInstance& act = schedule.activities[k];
            out << schedule.person_id << ',' << k << ',' << act.activity_type.name() << ','
                << act.start_s << ',' << act.duration_s << ',';
            if (act.location) {
                out << detail::format_double(act.location->x()) << ','
                    << detail::format_double(act.location->y());
            } else {
                out << ',';
            }
            if (k == 0) {
                out << ",,,\n";
            } else {
                const Trip& trip = schedule.trips[k - 1];
                out << ',' << trip.mode.name() << ',' << trip.travel_time_s << ','
                    << trip.depart_s << '\n';
            }
        }
    }
}

void write_diary(const DiaryDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_diary(dataset, out);
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::vector<Zone> parse_zones(std::istream& in, const std::string& name) {
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError({name, 1}, "missing header row");
    }
    const auto index = index_header(line, {"zone_id", "x", "y"}, {name, 1});

    std::vector<Zone> zones;
    std::map<std::string, int> seen;
    int line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const SourceLocation loc{name, line_no};
        const std::vector<std::string> fields = split_fields(line);
        const auto field = [&](const char* column) -> const std::string& {
            const std::size_t i = index.at(column);
            if (i >= fields.size()) {
                throw ParseError(loc, "row has too few fields");
            }
            return fields[i];
        };
        const std::string& id = field("zone_id");
        if (id.empty()) {
            throw ParseError(loc, "zone_id is empty");
        }
        if (!seen.emplace(id, line_no).second) {
            throw ParseError(loc, "duplicate zone_id '" + id + "'");
        }
        zones.push_back(
            Zone{id, Point(parse_number(field("x"), loc, "x"),
                           parse_number(field("y"), loc, "y"))});
    }
    if (zones.empty()) {
        throw ParseError({name, line_no}, "file contains no zone rows");
    }
    return zones;
}

std::vector<Zone> parse_zones(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open zone file '" + path + "'");
    }
    return parse_zones(in, path);
}

ODMatrix parse_od(std::istream& zones_in, const std::string& zones_name,
                  std::istream& trips_in, const std::string& trips_name) {
    const std::vector<Zone> zones = parse_zones(zones_in, zones_name);
    std::map<std::string, Index> zone_index;
    for (std::size_t i = 0; i < zones.size(); ++i) {
        zone_index[zones[i].id] = static_cast<Index>(i);
    }

    std::string line;
    if (!next_line(trips_in, line)) {
        throw ParseError({trips_name, 1}, "missing header row");
    }
    const auto index = index_header(line, {"origin_id", "dest_id", "count"}, {trips_name, 1});

    Matrix counts = Matrix::Zero(static_cast<Index>(zones.size()),
                                 static_cast<Index>(zones.size()));
    int line_no = 1;
    while (next_line(trips_in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const SourceLocation loc{trips_name, line_no};
        const std::vector<std::string> fields = split_fields(line);
        const auto field = [&](const char* column) -> const std::string& {
            const std::size_t i = index.at(column);
            if (i >= fields.size()) {
                throw ParseError(loc, "row has too few fields");
            }
            return fields[i];
        };
        const auto zone_of = [&](const std::string& id) {
            const auto it = zone_index.find(id);
            if (it == zone_index.end()) {
                throw UnknownZone(loc, "zone '" + id + "' is not in '" + zones_name + "'");
            }
            return it->second;
        };
        const Index origin = zone_of(field("origin_id"));
        const Index dest = zone_of(field("dest_id"));
        const double count = parse_number(field("count"), loc, "count");
        if (count < 0) {
            throw NegativeCount(loc, "count must be >= 0");
        }
        counts(origin, dest) += count;
    }
    return ODMatrix(zones, std::move(counts));
}

ODMatrix parse_od(const std::string& zones_path, const std::string& trips_path) {
    std::ifstream zones_in(zones_path);
    if (!zones_in) {
        throw IoError("cannot open zone file '" + zones_path + "'");
    }
    std::ifstream trips_in(trips_path);
    if (!trips_in) {
        throw IoError("cannot open trip file '" + trips_path + "'");
    }
    return parse_od(zones_in, zones_path, trips_in, trips_path);
}

void write_od_trips(const ODMatrix& od, std::ostream& out) {
    out << "origin_id,dest_id,count\n";
    const Matrix& counts = od.counts();
    for (Index i = 0; i < counts.rows(); ++i) {
        for (Index j = 0; j < counts.cols(); ++j) {
            if (counts(i, j) != 0.0) {
                out << od.zones()[static_cast<std::size_t>(i)].id << ','
                    << od.zones()[static_cast<std::size_t>(j)].id << ','
                    << detail::format_double(counts(i, j)) << '\n';
            }
        }
    }
}

void write_od_trips(const ODMatrix& od, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_od_trips(od, out);
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

namespace {

using nlohmann::json;

}  // namespace

StepConfig load_step_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config '" + path + "' must be a JSON object");
    }

    StepConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "grid_rows") {
                cfg.grid_rows = value.get<Index>();
            } else if (key == "grid_cols") {
                cfg.grid_cols = value.get<Index>();
            } else if (key == "ngram_k") {
                cfg.ngram_k = value.get<int>();
            } else if (key == "ngram_p") {
                cfg.ngram_p = value.get<double>();
            } else if (key == "min_samples") {
                cfg.min_samples = value.get<int>();
            } else if (key == "hour_bins") {
                cfg.hour_bins.clear();
                for (const auto& bin : value) {
                    if (!bin.is_array() || bin.size() != 2) {
                        throw ConfigError("hour_bins entries must be [start_s, end_s] pairs");
                    }
                    cfg.hour_bins.emplace_back(bin[0].get<int>(), bin[1].get<int>());
                }
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is malformed: " + e.what());
    }
    validate_config(cfg);
    return cfg;
}

namespace {

json config_to_json(const StepConfig& cfg) {
    json bins = json::array();
    for (const auto& [start, end] : cfg.hour_bins) {
        bins.push_back(json::array({start, end}));
    }
    return json{{"grid_rows", cfg.grid_rows}, {"grid_cols", cfg.grid_cols},
                {"ngram_k", cfg.ngram_k},     {"ngram_p", cfg.ngram_p},
                {"hour_bins", bins},          {"min_samples", cfg.min_samples}};
}

json summary_to_json(const DatasetSummary& summary) {
    return json{{"schedules", summary.schedules},
                {"activities", summary.activities},
                {"trips", summary.trips},
                {"activity_types", summary.activity_types},
                {"modes", summary.modes},
                {"has_locations", summary.has_locations}};
}

json record_to_json(const MetricRecord& record) {
    json j{{"step", step_name(record.step)},
           {"statistic", record.statistic},
           {"status", record_status_name(record.status)},
           {"n_model", record.n_model},
           {"n_validation", record.n_validation}};
    if (record.activity_type) {
        j["activity_type"] = *record.activity_type;
    }
    if (record.mode) {
        j["mode"] = *record.mode;
    }
    if (record.hour_bin) {
        j["hour_bin"] = *record.hour_bin;
    }
    if (record.value) {
        j["value"] = *record.value;
    }
    if (!record.reason.empty()) {
        j["reason"] = record.reason;
    }
    if (!record.diagnostics.empty()) {
        j["diagnostics"] = record.diagnostics;
    }
    return j;
}

}  // namespace

std::string report_to_json(const ValidationReport& report) {
    json j{{"tool_version", report.tool_version},
           {"config", config_to_json(report.config)},
           {"dataset_summaries",
            json{{"model", summary_to_json(report.model_summary)},
                 {"validation", summary_to_json(report.validation_summary)}}}};
    if (report.od_model_summary || report.od_validation_summary) {
        json od = json::object();
        if (report.od_model_summary) {
            od["model"] = json{{"zones", report.od_model_summary->zones},
                               {"total_trips", report.od_model_summary->total_trips}};
        }
        if (report.od_validation_summary) {
            od["validation"] =
                json{{"zones", report.od_validation_summary->zones},
                     {"total_trips", report.od_validation_summary->total_trips}};
        }
        j["od_summaries"] = std::move(od);
    }
    json records = json::array();
    for (const MetricRecord& record : report.records) {
        records.push_back(record_to_json(record));
    }
    j["records"] = std::move(records);
    return j.dump(2) + "\n";
}

namespace {

std::string csv_safe(std::string text) {
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

}  // namespace

std::string report_to_csv(const ValidationReport& report) {
    std::string out =
        "step,statistic,activity_type,mode,hour_bin,status,value,reason,"
        "n_model,n_validation,diagnostics\n";
    for (const MetricRecord& record : report.records) {
        out += step_name(record.step);
        out += ',';
        out += record.statistic;
        out += ',';
        out += record.activity_type.value_or("");
        out += ',';
        out += record.mode.value_or("");
        out += ',';
        if (record.hour_bin) {
            out += std::to_string(*record.hour_bin);
        }
        out += ',';
        out += record_status_name(record.status);
        out += ',';
        if (record.value) {
            out += detail::format_double(*record.value);
        }
        out += ',';
        out += csv_safe(record.reason);
        out += ',';
        out += std::to_string(record.n_model);
        out += ',';
        out += std::to_string(record.n_validation);
        out += ',';
        bool first = true;
        for (const auto& [key, value] : record.diagnostics) {
            if (!first) {
                out += ';';
            }
            first = false;
            out += key;
            out += '=';
            out += detail::format_double(value);
        }
        out += '\n';
    }
    return out;
}

std::string dataset_summary_to_json(const DatasetSummary& summary) {
    return summary_to_json(summary).dump(2) + "\n";
}

std::string grid_to_csv(const Matrix& values) {
    std::string out;
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += detail::format_double(values(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string grid_to_pgm(const Matrix& values) {
    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    const double span = hi - lo;
    std::string out = "P2\n" + std::to_string(values.cols()) + " " +
                      std::to_string(values.rows()) + "\n255\n";
    for (Index i = values.rows() - 1; i >= 0; --i) {
        for (Index j = 0; j < values.cols(); ++j) {
            const long level =
                span > 0 ? std::lround((values(i, j) - lo) / span * 255.0) : 0;
            if (j > 0) {
                out += ' ';
            }
            out += std::to_string(level);
        }
        out += '\n';
    }
    return out;
}

}  // namespace valfram
