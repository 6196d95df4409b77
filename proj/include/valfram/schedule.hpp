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

#ifndef VALFRAM_SCHEDULE_HPP
#define VALFRAM_SCHEDULE_HPP

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "valfram/errors.hpp"
#include "valfram/types.hpp"

namespace valfram {

namespace detail {
/// Tokens name activity types and modes: non-empty, no whitespace, no comma.
void check_token(const std::string& name, const char* what);
}  // namespace detail

/// Activity type name, e.g. `sleep`, `work`. The token `none` is reserved
/// for the boundary sentinel used by n-gram profiling and never appears in
/// stored schedules.
class ActivityType {
public:
    explicit ActivityType(std::string name);

    const std::string& name() const { return name_; }
    bool is_none() const { return name_ == kNone; }

    static ActivityType none() { return ActivityType(std::string(kNone)); }

    auto operator<=>(const ActivityType&) const = default;

    static constexpr const char* kNone = "none";

private:
    std::string name_;
};

/// Main transport mode of a trip, e.g. `car`, `public_transport`.
class Mode {
public:
    explicit Mode(std::string name);

    const std::string& name() const { return name_; }

    auto operator<=>(const Mode&) const = default;

private:
    std::string name_;
};

struct ActivityInstance {
    ActivityType activity_type;
    int start_s = 0;     // seconds since local midnight, in [0, 86400)
    int duration_s = 1;  // >= 1; the activity may extend past midnight
    std::optional<Point> location;
};

struct Trip {
    Mode mode;
    int travel_time_s = 0;  // >= 0
    int depart_s = 0;       // in [0, 86400)
};

/// One agent-day: |trips| = |activities| - 1, trip k connects activity k to
/// activity k+1, activity start times are non-decreasing.
struct ActivitySchedule {
    std::string person_id;
    std::vector<ActivityInstance> activities;
    std::vector<Trip> trips;
};

/// Throws InvariantViolation if the schedule breaks any structural rule.
void validate_schedule(const ActivitySchedule& schedule);

/// The ordered activity types of a schedule, without boundary sentinels.
std::vector<ActivityType> activity_sequence(const ActivitySchedule& schedule);

/// Immutable bag of schedules plus the vocabularies occurring in them.
/// Location presence is all-or-nothing across the whole dataset.
class DiaryDataset {
public:
    const std::vector<ActivitySchedule>& schedules() const { return schedules_; }
    const std::set<ActivityType>& activity_vocab() const { return activity_vocab_; }
    const std::set<Mode>& mode_vocab() const { return mode_vocab_; }
    bool has_locations() const { return has_locations_; }

    std::size_t schedule_count() const { return schedules_.size(); }
    std::size_t activity_count() const { return activity_count_; }
    std::size_t trip_count() const { return trip_count_; }

private:
    friend DiaryDataset build_dataset(std::vector<ActivitySchedule> schedules);

    std::vector<ActivitySchedule> schedules_;
    std::set<ActivityType> activity_vocab_;
    std::set<Mode> mode_vocab_;
    bool has_locations_ = false;
    std::size_t activity_count_ = 0;
    std::size_t trip_count_ = 0;
};

/// Validates every schedule, computes vocabularies and location presence.
/// Throws EmptyDataset, MixedLocationPresence or InvariantViolation.
DiaryDataset build_dataset(std::vector<ActivitySchedule> schedules);

}  // namespace valfram

#endif  // VALFRAM_SCHEDULE_HPP
