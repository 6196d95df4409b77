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

#include <cmath>

#include "valfram/schedule.hpp"

using namespace valfram;

namespace {

ActivitySchedule day(const std::string& id) {
    ActivitySchedule schedule;
    schedule.person_id = id;
    schedule.activities = {
        ActivityInstance{ActivityType("sleep"), 0, 21600, std::nullopt},
        ActivityInstance{ActivityType("work"), 28800, 28800, std::nullopt},
        ActivityInstance{ActivityType("sleep"), 79200, 7200, std::nullopt}};
    schedule.trips = {Trip{Mode("car"), 1800, 21600},
                      Trip{Mode("car"), 1200, 57600}};
    return schedule;
}

}  // namespace

TEST_CASE("activity and mode tokens reject malformed names") {
    CHECK_THROWS_AS(ActivityType(""), InvariantViolation);
    CHECK_THROWS_AS(ActivityType("two words"), InvariantViolation);
    CHECK_THROWS_AS(ActivityType("a,b"), InvariantViolation);
    CHECK_THROWS_AS(Mode("tab\tmode"), InvariantViolation);
    CHECK_EQ(ActivityType("night_shift-2").name(), "night_shift-2");
}

TEST_CASE("the sentinel token is recognized but never a normal type") {
    CHECK(ActivityType::none().is_none());
    CHECK_FALSE(ActivityType("sleep").is_none());
    CHECK_LT(ActivityType("a"), ActivityType("b"));
}

TEST_CASE("a structurally sound schedule validates") {
    CHECK_NOTHROW(validate_schedule(day("p1")));
}

TEST_CASE("schedules reject structural violations") {
    SUBCASE("no activities") {
        ActivitySchedule s;
        s.person_id = "p";
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("trip count off by one") {
        ActivitySchedule s = day("p");
        s.trips.pop_back();
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("reserved sentinel stored as an activity") {
        ActivitySchedule s = day("p");
        s.activities[1].activity_type = ActivityType::none();
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("start time beyond the day") {
        ActivitySchedule s = day("p");
        s.activities[2].start_s = 86400;
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("negative start time") {
        ActivitySchedule s = day("p");
        s.activities[0].start_s = -1;
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("zero duration") {
        ActivitySchedule s = day("p");
        s.activities[0].duration_s = 0;
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("decreasing start times") {
        ActivitySchedule s = day("p");
        s.activities[1].start_s = 86000;
        s.activities[2].start_s = 50000;
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("non-finite location") {
        ActivitySchedule s = day("p");
        s.activities[0].location = Point(std::nan(""), 0.0);
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("negative travel time") {
        ActivitySchedule s = day("p");
        s.trips[0].travel_time_s = -5;
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
    SUBCASE("departure beyond the day") {
        ActivitySchedule s = day("p");
        s.trips[0].depart_s = 90000;
        CHECK_THROWS_AS(validate_schedule(s), InvariantViolation);
    }
}

TEST_CASE("equal start times are allowed") {
    ActivitySchedule s = day("p");
    s.activities[1].start_s = s.activities[0].start_s;
    CHECK_NOTHROW(validate_schedule(s));
}

TEST_CASE("an activity may run past midnight") {
    ActivitySchedule s = day("p");
    s.activities[2].start_s = 86399;
    s.activities[2].duration_s = 20000;
    CHECK_NOTHROW(validate_schedule(s));
}

TEST_CASE("the activity sequence projection keeps order and drops nothing") {
    const std::vector<ActivityType> sequence = activity_sequence(day("p"));
    REQUIRE_EQ(sequence.size(), 3);
    CHECK_EQ(sequence[0].name(), "sleep");
    CHECK_EQ(sequence[1].name(), "work");
    CHECK_EQ(sequence[2].name(), "sleep");
}

TEST_CASE("datasets collect vocabularies and counts") {
    const DiaryDataset dataset = build_dataset({day("p1"), day("p2")});
    CHECK_EQ(dataset.schedule_count(), 2);
    CHECK_EQ(dataset.activity_count(), 6);
    CHECK_EQ(dataset.trip_count(), 4);
    CHECK_EQ(dataset.activity_vocab().size(), 2);
    CHECK_EQ(dataset.mode_vocab().size(), 1);
    CHECK_FALSE(dataset.has_locations());
}

TEST_CASE("datasets must not be empty") {
    CHECK_THROWS_AS(build_dataset({}), EmptyDataset);
}

TEST_CASE("location presence is all or nothing") {
    ActivitySchedule located = day("p1");
    for (ActivityInstance& act : located.activities) {
        act.location = Point(1.0, 2.0);
    }

    SUBCASE("fully located datasets carry locations") {
        const DiaryDataset dataset = build_dataset({located});
        CHECK(dataset.has_locations());
    }
    SUBCASE("a partially located schedule is rejected") {
        ActivitySchedule partial = located;
        partial.activities[1].location = std::nullopt;
        CHECK_THROWS_AS(build_dataset({partial}), MixedLocationPresence);
    }
    SUBCASE("mixing located and unlocated schedules is rejected") {
        CHECK_THROWS_AS(build_dataset({located, day("p2")}), MixedLocationPresence);
    }
}

TEST_CASE("dataset construction validates every schedule") {
    ActivitySchedule bad = day("p2");
    bad.activities[0].duration_s = 0;
    CHECK_THROWS_AS(build_dataset({day("p1"), bad}), InvariantViolation);
}
