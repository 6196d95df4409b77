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

#ifndef VALFRAM_OD_HPP
#define VALFRAM_OD_HPP

#include <string>
#include <vector>

#include "valfram/errors.hpp"
#include "valfram/schedule.hpp"
#include "valfram/types.hpp"

namespace valfram {

/// Spatial aggregation unit with a representative planar coordinate.
struct Zone {
    std::string id;
    Point coord;
};

/// Square matrix of trip counts between zone pairs; counts(i, j) = trips
/// from zones[i] to zones[j].
class ODMatrix {
public:
    ODMatrix(std::vector<Zone> zones, Matrix counts);

    const std::vector<Zone>& zones() const { return zones_; }
    const Matrix& counts() const { return counts_; }
    double total() const { return counts_.sum(); }

private:
    std::vector<Zone> zones_;
    Matrix counts_;
};

/// O-D matrix rescaled to a total element sum of one.
class NormalizedOD {
public:
    NormalizedOD(std::vector<Zone> zones, Matrix shares);

    const std::vector<Zone>& zones() const { return zones_; }
    const Matrix& shares() const { return shares_; }

private:
    std::vector<Zone> zones_;
    Matrix shares_;
};

/// Index of the target zone closest (squared Euclidean) to `coord`;
/// distance ties resolve to the lexicographically smallest zone id.
Index nearest_zone(const std::vector<Zone>& zones, const Point& coord);

/// Re-indexes `model` onto `target_zones` by snapping every model zone to
/// its nearest target zone and summing counts that land on the same pair.
/// Total trip count is preserved; unused target zones keep zero rows and
/// columns.
ODMatrix od_project(const ODMatrix& model, const std::vector<Zone>& target_zones);

/// Divides all counts by the grand total.
NormalizedOD od_normalize(const ODMatrix& m);

/// RMSE of two normalized matrices over the cells that are nonzero in at
/// least one of them; symmetric, in [0, 1].
double od_distance(const NormalizedOD& model, const NormalizedOD& validation);

/// Builds an O-D matrix over `zones` from the consecutive-activity location
/// pairs of a located dataset, snapping each endpoint to its nearest zone.
ODMatrix derive_od(const DiaryDataset& dataset, const std::vector<Zone>& zones);

}  // namespace valfram

#endif  // VALFRAM_OD_HPP
