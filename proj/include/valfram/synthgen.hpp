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

#ifndef VALFRAM_SYNTHGEN_HPP
#define VALFRAM_SYNTHGEN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "valfram/schedule.hpp"
#include "valfram/types.hpp"

namespace valfram {

struct TruncNormalParams {
    double mean_s = 0;
    double sd_s = 1;
};

struct LogNormalParams {
    double log_mean = 0;
    double log_sd = 1;
};

struct MixtureComponent {
    double weight = 1;
    Point center{0, 0};
    double sd_m = 1;
};

/// Parameter set for the deterministic diary generator. Activity chains are
/// drawn from a first-order Markov chain whose transition matrix has one
/// row per activity type and one extra column for the absorbing end state.
/// Location mixtures are optional as a whole: either every type has one or
/// none does.
struct GeneratorSpec {
    std::uint64_t seed = 0;
    int population = 1;
    std::vector<std::string> activity_types;
    Vector initial;       // over activity_types, sums to 1
    Matrix transition;    // types x (types + end), rows sum to 1
    std::map<std::string, TruncNormalParams> start_time;
    std::map<std::string, LogNormalParams> duration;
    std::map<std::string, std::map<std::string, double>> mode_choice;
    std::map<std::string, std::vector<MixtureComponent>> location_mixture;
    std::map<std::string, LogNormalParams> travel_time;
};

/// Schedules never exceed this many activities.
inline constexpr int kMaxActivitiesPerSchedule = 11;

void validate_spec(const GeneratorSpec& spec);

/// Samples `population` schedules, fully determined by the seed. Each
/// schedule draws from per-aspect random streams (chain, start, duration,
/// location, mode, travel time), so perturbing one aspect of the spec
/// leaves samples drawn for the others bit-identical.
DiaryDataset generate(const GeneratorSpec& spec);

enum class PerturbKind { ShiftStart, SwapModes, Relocate, Reorder };

PerturbKind perturb_kind_from_string(const std::string& name);

/// Returns a spec differing from `spec` only in the named aspect:
///   shift_start  adds `magnitude` seconds to every start-time mean;
///   swap_modes   blends every mode-choice row toward its reversal
///                (magnitude in [0, 1], 1 = full reversal);
///   relocate     translates every mixture center by (magnitude, 0) meters;
///   reorder      blends chain rows toward uniform (magnitude in [0, 1]).
/// Magnitude 0 always returns the spec unchanged.
GeneratorSpec perturb(const GeneratorSpec& spec, PerturbKind kind, double magnitude);

/// Reads a GeneratorSpec from its JSON file format.
GeneratorSpec load_generator_spec(const std::string& path);

}  // namespace valfram

#endif  // VALFRAM_SYNTHGEN_HPP
