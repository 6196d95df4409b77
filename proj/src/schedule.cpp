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

#include "valfram/schedule.hpp"

#include <cctype>
#include <cmath>

namespace valfram {

namespace detail {

void check_token(const std::string& name, const char* what) {
    if (name.empty()) {
        throw InvariantViolation(std::string(what) + " name must be non-empty");
    }
    for (unsigned char c : name) {
        if (std::isspace(c) || c == ',') {
            throw InvariantViolation(std::string(what) + " name '" + name +
                                     "' contains whitespace or comma");
        }
    }
}

}  // namespace detail

ActivityType::ActivityType(std::string name) : name_(std::move(name)) {
    detail::check_token(name_, "activity type");
}

Mode::Mode(std::string name) : name_(std::move(name)) {
    detail::check_token(name_, "mode");
}

void validate_schedule(const ActivitySchedule& schedule) {
    if (schedule.activities.empty()) {
        throw InvariantViolation("schedule '" + schedule.person_id +
                                 "' has no activities");
    }
    if (schedule.trips.size() + 1 != schedule.activities.size()) {
        throw InvariantViolation("schedule '" + schedule.person_id + "' has " +
                                 std::to_string(schedule.trips.size()) + " trips for " +
                                 std::to_string(schedule.activities.size()) +
                                 " activities");
    }
    int previous_start = 0;
    bool first = true;
    for (const ActivityInstance& act : schedule.activities) {
        if (act.activity_type.is_none()) {
            throw InvariantViolation("schedule '" + schedule.person_id +
                                     "' stores the reserved activity type 'none'");
        }
        if (act.start_s < 0 || act.start_s >= kSecondsPerDay) {
            throw InvariantViolation("schedule '" + schedule.person_id +
                                     "' has activity start " +
                                     std::to_string(act.start_s) +
                                     " outside [0, 86400)");
        }
        if (act.duration_s < 1) {
            throw InvariantViolation("schedule '" + schedule.person_id +
                                     "' has non-positive activity duration");
        }
        if (!first && act.start_s < previous_start) {
            throw InvariantViolation("schedule '" + schedule.person_id +
                                     "' has decreasing activity start times");
        }
        if (act.location && (!std::isfinite(act.location->x()) ||
                             !std::isfinite(act.location->y()))) {
            throw InvariantViolation("schedule '" + schedule.person_id +
                                     "' has a non-finite activity location");
        }
        previous_start = act.start_s;
        first = false;
    }
    for (const Trip& trip : schedule.trips) {
        if (trip.travel_time_s < 0) {
            throw InvariantViolation("schedule '" + schedule.person_id +
                                     "' has negative trip travel time");
        }
        if (trip.depart_s < 0 || trip.depart_s >= kSecondsPerDay) {
            throw InvariantViolation("schedule '" + schedule.person_id +
                                     "' has trip departure outside [0, 86400)");
        }
    }
}

std::vector<ActivityType> activity_sequence(const ActivitySchedule& schedule) {
    std::vector<ActivityType> sequence;
    sequence.reserve(schedule.activities.size());
    for (const ActivityInstance& act : schedule.activities) {
        sequence.push_back(act.activity_type);
    }
    return sequence;
}

DiaryDataset build_dataset(std::vector<ActivitySchedule> schedules) {
    if (schedules.empty()) {
        throw EmptyDataset("dataset has no schedules");
    }
    DiaryDataset dataset;
    std::size_t located = 0;
    for (const ActivitySchedule& schedule : schedules) {
        validate_schedule(schedule);
        for (const ActivityInstance& act : schedule.activities) {
            dataset.activity_vocab_.insert(act.activity_type);
            if (act.location) {
                ++located;
            }
        }
        for (const Trip& trip : schedule.trips) {
            dataset.mode_vocab_.insert(trip.mode);
        }
        dataset.activity_count_ += schedule.activities.size();
        dataset.trip_count_ += schedule.trips.size();
    }
    if (located != 0 && located != dataset.activity_count_) {
        throw MixedLocationPresence(
            "some but not all activities carry locations (" +
            std::to_string(located) + " of " +
            std::to_string(dataset.activity_count_) + ")");
    }
    dataset.has_locations_ = located == dataset.activity_count_ && located > 0;
    dataset.schedules_ = std::move(schedules);
    return dataset;
}

}  // namespace valfram
