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

#ifndef VALFRAM_TYPES_HPP
#define VALFRAM_TYPES_HPP

#include <Eigen/Dense>

namespace valfram {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX2 = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

/// Planar coordinate in a shared projected system (meters).
using Point = Eigen::Vector2d;

/// Seconds in one modeled day.
inline constexpr int kSecondsPerDay = 86400;

}  // namespace valfram

#endif  // VALFRAM_TYPES_HPP
