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

#ifndef VALFRAM_IO_HPP
#define VALFRAM_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "valfram/od.hpp"
#include "valfram/schedule.hpp"
#include "valfram/steps.hpp"

namespace valfram {

/// Travel-diary CSV. Header row is required and must contain the columns
///   person_id,seq,activity_type,start_s,duration_s,x,y,
///   arr_mode,arr_trip_duration_s,arr_depart_s
/// in any order; unknown columns are ignored. Rows of one person form the
/// schedule in `seq` order (0-based, contiguous). The arr_* fields describe
/// the trip arriving at the row's activity and are empty exactly at seq 0.
/// x and y are either both present or both empty on every row.
/// Malformed rows raise ParseError with file and line.
DiaryDataset parse_diary(std::istream& in, const std::string& name);
DiaryDataset parse_diary(const std::string& path);

void write_diary(const DiaryDataset& dataset, std::ostream& out);
void write_diary(const DiaryDataset& dataset, const std::string& path);

/// Zone CSV with header `zone_id,x,y`; ids must be unique.
std::vector<Zone> parse_zones(std::istream& in, const std::string& name);
std::vector<Zone> parse_zones(const std::string& path);

/// Trip-count CSV with header `origin_id,dest_id,count` over a zone file.
/// Counts for repeated pairs are summed; ids unknown to the zone file raise
/// UnknownZone and negative counts raise NegativeCount.
ODMatrix parse_od(std::istream& zones_in, const std::string& zones_name,
                  std::istream& trips_in, const std::string& trips_name);
ODMatrix parse_od(const std::string& zones_path, const std::string& trips_path);

/// Writes the nonzero cells of `od` in row-major order as a trip-count CSV.
void write_od_trips(const ODMatrix& od, std::ostream& out);
void write_od_trips(const ODMatrix& od, const std::string& path);

/// Reads a StepConfig from a JSON object. Every key is optional:
///   grid_rows, grid_cols, ngram_k, ngram_p, min_samples,
///   hour_bins (array of [start_s, end_s) pairs replacing the default bins).
/// Unknown keys raise ConfigError.
StepConfig load_step_config(const std::string& path);

/// Serializes a report as JSON with sorted keys; byte-identical for
/// identical reports.
std::string report_to_json(const ValidationReport& report);

/// Flat CSV, one row per record. Diagnostics are packed into one field as
/// `key=value` pairs joined by `;`; commas inside reasons become `;`.
std::string report_to_csv(const ValidationReport& report);

std::string dataset_summary_to_json(const DatasetSummary& summary);

/// Grid values as CSV, one line per lattice row, row 0 at the minimal y.
std::string grid_to_csv(const Matrix& values);

/// Plain-text PGM (P2) with the grid linearly rescaled to 0..255 and the
/// maximal-y lattice row on top; a constant grid renders all black.
std::string grid_to_pgm(const Matrix& values);

namespace detail {
/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
}  // namespace detail

}  // namespace valfram

#endif  // VALFRAM_IO_HPP
