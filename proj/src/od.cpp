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

#include "valfram/od.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace valfram {

namespace {

void check_zones(const std::vector<Zone>& zones) {
    std::set<std::string> ids;
    for (const Zone& zone : zones) {
        if (zone.id.empty()) {
            throw InvalidArgument("zone id must be non-empty");
        }
        if (!zone.coord.allFinite()) {
            throw InvalidArgument("zone '" + zone.id + "' has non-finite coordinates");
        }
        if (!ids.insert(zone.id).second) {
            throw InvalidArgument("duplicate zone id '" + zone.id + "'");
        }
    }
}

}  // namespace

ODMatrix::ODMatrix(std::vector<Zone> zones, Matrix counts)
    : zones_(std::move(zones)), counts_(std::move(counts)) {
    check_zones(zones_);
    const auto n = static_cast<Index>(zones_.size());
    if (counts_.rows() != n || counts_.cols() != n) {
        throw ShapeMismatch("O-D counts must be square over the zone list");
    }
    if (!counts_.allFinite() || (counts_.array() < 0.0).any()) {
        throw InvalidArgument("O-D counts must be finite and >= 0");
    }
    if (!(counts_.array() > 0.0).any()) {
        throw ZeroMatrix("O-D matrix has no positive entry");
    }
}

NormalizedOD::NormalizedOD(std::vector<Zone> zones, Matrix shares)
    : zones_(std::move(zones)), shares_(std::move(shares)) {
    check_zones(zones_);
    const auto n = static_cast<Index>(zones_.size());
    if (shares_.rows() != n || shares_.cols() != n) {
        throw ShapeMismatch("shares must be square over the zone list");
    }
    if (!shares_.allFinite() || (shares_.array() < 0.0).any()) {
        throw InvalidArgument("shares must be finite and >= 0");
    }
    if (std::abs(shares_.sum() - 1.0) > 1e-12) {
        throw InvariantViolation("shares must sum to one");
    }
}

Index nearest_zone(const std::vector<Zone>& zones, const Point& coord) {
    if (zones.empty()) {
        throw EmptyTargetZones("target zone list is empty");
    }
    Index best = 0;
    double best_dist = (zones[0].coord - coord).squaredNorm();
    for (Index i = 1; i < static_cast<Index>(zones.size()); ++i) {
        const double dist = (zones[i].coord - coord).squaredNorm();
        if (dist < best_dist || (dist == best_dist && zones[i].id < zones[best].id)) {
            best = i;
            best_dist = dist;
        }
    }
    return best;
}

ODMatrix od_project(const ODMatrix& model, const std::vector<Zone>& target_zones) {
    if (target_zones.empty()) {
        throw EmptyTargetZones("projection target zone list is empty");
    }
    check_zones(target_zones);

    std::vector<Index> snap(model.zones().size());
    for (std::size_t i = 0; i < model.zones().size(); ++i) {
        snap[i] = nearest_zone(target_zones, model.zones()[i].coord);
    }

    const auto n = static_cast<Index>(target_zones.size());
    Matrix counts = Matrix::Zero(n, n);
    for (Index i = 0; i < model.counts().rows(); ++i) {
        for (Index j = 0; j < model.counts().cols(); ++j) {
            counts(snap[static_cast<std::size_t>(i)], snap[static_cast<std::size_t>(j)]) +=
                model.counts()(i, j);
        }
    }
    return ODMatrix(target_zones, std::move(counts));
}

NormalizedOD od_normalize(const ODMatrix& m) {
    const double total = m.total();
    if (!(total > 0.0)) {
        throw ZeroMatrix("cannot normalize an all-zero O-D matrix");
    }
    return NormalizedOD(m.zones(), m.counts() / total);
}

double od_distance(const NormalizedOD& model, const NormalizedOD& validation) {
    if (model.zones().size() != validation.zones().size()) {
        throw ZoneMismatch("normalized matrices index different zone sets");
    }
    for (std::size_t i = 0; i < model.zones().size(); ++i) {
        if (model.zones()[i].id != validation.zones()[i].id) {
            throw ZoneMismatch("normalized matrices index different zone sets");
        }
    }
    const auto support =
        (model.shares().array() > 0.0) || (validation.shares().array() > 0.0);
    const auto cells = support.count();
    if (cells == 0) {
        throw EmptySupport("no cell is nonzero in either matrix");
    }
    const double squared = (support.template cast<double>() *
                            (model.shares() - validation.shares()).array().square())
                               .sum();
    return std::sqrt(squared / static_cast<double>(cells));
}

ODMatrix derive_od(const DiaryDataset& dataset, const std::vector<Zone>& zones) {
    if (!dataset.has_locations()) {
        throw MissingLocations("deriving an O-D matrix needs a located dataset");
    }
    if (zones.empty()) {
        throw EmptyTargetZones("zone list is empty");
    }
    check_zones(zones);

    const auto n = static_cast<Index>(zones.size());
    Matrix counts = Matrix::Zero(n, n);
    for (const ActivitySchedule& schedule : dataset.schedules()) {
        for (std::size_t k = 0; k + 1 < schedule.activities.size(); ++k) {
            const Index origin = nearest_zone(zones, *schedule.activities[k].location);
            const Index dest = nearest_zone(zones, *schedule.activities[k + 1].location);
            counts(origin, dest) += 1.0;
        }
    }
    return ODMatrix(zones, std::move(counts));
}

}  // namespace valfram
