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

#ifndef VALFRAM_GRID_HPP
#define VALFRAM_GRID_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include "valfram/errors.hpp"
#include "valfram/types.hpp"

namespace valfram {

template <typename Scalar>
struct GridBoundsT {
    Scalar x_min, x_max, y_min, y_max;

    bool operator==(const GridBoundsT&) const = default;
};

using GridBounds = GridBoundsT<double>;

/// Regular sampling of a bivariate ECDF. Row i corresponds to lattice point
/// y_i (ascending), column j to x_j; entry (i, j) is the fraction of points
/// with x <= x_j and y <= y_i.
template <typename Scalar>
struct EcdfGridT {
    Index rows = 0;
    Index cols = 0;
    GridBoundsT<Scalar> bounds{};
    MatrixX<Scalar> values;
};

using EcdfGrid = EcdfGridT<double>;

/// Gaussian-kernel density estimate sampled on the same lattice layout as
/// EcdfGridT. Rendering feedback only; no metric consumes it.
template <typename Scalar>
struct DensityGridT {
    Index rows = 0;
    Index cols = 0;
    GridBoundsT<Scalar> bounds{};
    MatrixX<Scalar> values;
};

using DensityGrid = DensityGridT<double>;

namespace detail {

template <typename Scalar>
void check_bounds(const GridBoundsT<Scalar>& bounds) {
    if (!(bounds.x_min < bounds.x_max) || !(bounds.y_min < bounds.y_max)) {
        throw DegenerateBounds("grid bounds must satisfy x_min < x_max and y_min < y_max");
    }
}

/// Inclusive lattice over [lo, hi] with exact endpoints; a single sample
/// degenerates to hi.
template <typename Scalar>
VectorX<Scalar> lattice(Scalar lo, Scalar hi, Index count) {
    VectorX<Scalar> points(count);
    if (count == 1) {
        points[0] = hi;
        return points;
    }
    const Scalar width = hi - lo;
    for (Index k = 0; k < count; ++k) {
        points[k] = lo + (static_cast<Scalar>(k) / static_cast<Scalar>(count - 1)) * width;
    }
    points[0] = lo;
    points[count - 1] = hi;
    return points;
}

}  // namespace detail

/// Samples the bivariate ECDF of `points` (one point per row, columns x, y)
/// on a rows x cols lattice spanning `bounds`.
template <typename Derived>
EcdfGridT<typename Derived::Scalar> ecdf_grid(const Eigen::MatrixBase<Derived>& points,
                                              Index rows, Index cols,
                                              const GridBoundsT<typename Derived::Scalar>& bounds) {
    using Scalar = typename Derived::Scalar;
    static_assert(Derived::ColsAtCompileTime == 2 || Derived::ColsAtCompileTime == Eigen::Dynamic);
    if (points.rows() == 0) {
        throw EmptyPoints("ecdf grid needs at least one point");
    }
    if (points.cols() != 2) {
        throw InvalidArgument("points must have two columns (x, y)");
    }
    if (rows < 1 || cols < 1) {
        throw InvalidArgument("grid must have at least one row and one column");
    }
    detail::check_bounds(bounds);

    const VectorX<Scalar> xs = detail::lattice(bounds.x_min, bounds.x_max, cols);
    const VectorX<Scalar> ys = detail::lattice(bounds.y_min, bounds.y_max, rows);

    // Histogram of the first lattice index covering each point, then a 2D
    // cumulative sum; a point past the upper bound falls in no cell.
    MatrixX<Scalar> hist = MatrixX<Scalar>::Zero(rows, cols);
    for (Index p = 0; p < points.rows(); ++p) {
        const Scalar x = points(p, 0);
        const Scalar y = points(p, 1);
        const Index col = std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
        const Index row = std::lower_bound(ys.begin(), ys.end(), y) - ys.begin();
        if (col < cols && row < rows) {
            hist(row, col) += Scalar(1);
        }
    }
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 1; j < cols; ++j) {
            hist(i, j) += hist(i, j - 1);
        }
    }
    for (Index i = 1; i < rows; ++i) {
        hist.row(i) += hist.row(i - 1);
    }

    EcdfGridT<Scalar> grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.bounds = bounds;
    grid.values = hist / static_cast<Scalar>(points.rows());
    return grid;
}

/// RMSE of two equally-shaped ECDF grids; symmetric and bounded by 1.
template <typename Scalar>
Scalar ecdf_rmse(const EcdfGridT<Scalar>& a, const EcdfGridT<Scalar>& b) {
    if (a.rows != b.rows || a.cols != b.cols || !(a.bounds == b.bounds)) {
        throw ShapeMismatch("ecdf grids differ in shape or bounds");
    }
    const Scalar cells = static_cast<Scalar>(a.rows) * static_cast<Scalar>(a.cols);
    return std::sqrt((a.values - b.values).squaredNorm() / cells);
}

/// Product-Gaussian KDE sampled on the lattice. Without an explicit
/// per-axis bandwidth, Scott's rule h = sigma * n^(-1/6) is applied, which
/// needs >= 2 points and positive variance on both axes.
template <typename Derived>
DensityGridT<typename Derived::Scalar> kde_grid(
    const Eigen::MatrixBase<Derived>& points, Index rows, Index cols,
    const GridBoundsT<typename Derived::Scalar>& bounds,
    std::optional<std::pair<typename Derived::Scalar, typename Derived::Scalar>> bandwidth =
        std::nullopt) {
    using Scalar = typename Derived::Scalar;
    if (points.rows() == 0) {
        throw EmptyPoints("kde grid needs at least one point");
    }
    if (points.cols() != 2) {
        throw InvalidArgument("points must have two columns (x, y)");
    }
    if (rows < 1 || cols < 1) {
        throw InvalidArgument("grid must have at least one row and one column");
    }
    detail::check_bounds(bounds);

    const Index n = points.rows();
    Scalar h_x, h_y;
    if (bandwidth) {
        h_x = bandwidth->first;
        h_y = bandwidth->second;
        if (!(h_x > Scalar(0)) || !(h_y > Scalar(0))) {
            throw InvalidArgument("bandwidths must be positive");
        }
    } else {
        if (n < 2) {
            throw TooFewPoints("automatic bandwidth needs at least two points");
        }
        const auto centered_x = points.col(0).array() - points.col(0).mean();
        const auto centered_y = points.col(1).array() - points.col(1).mean();
        const Scalar sd_x = std::sqrt(centered_x.square().sum() / static_cast<Scalar>(n - 1));
        const Scalar sd_y = std::sqrt(centered_y.square().sum() / static_cast<Scalar>(n - 1));
        if (!(sd_x > Scalar(0)) || !(sd_y > Scalar(0))) {
            throw TooFewPoints("automatic bandwidth needs positive variance on both axes");
        }
        const Scalar factor = std::pow(static_cast<Scalar>(n), Scalar(-1.0 / 6.0));
        h_x = sd_x * factor;
        h_y = sd_y * factor;
    }

    const VectorX<Scalar> xs = detail::lattice(bounds.x_min, bounds.x_max, cols);
    const VectorX<Scalar> ys = detail::lattice(bounds.y_min, bounds.y_max, rows);

    // values = K_y * K_x^T assembles the separable kernel sums in one product.
    MatrixX<Scalar> kernel_x(cols, n);
    MatrixX<Scalar> kernel_y(rows, n);
    for (Index p = 0; p < n; ++p) {
        kernel_x.col(p) = (-((xs.array() - points(p, 0)) / h_x).square() / Scalar(2)).exp();
        kernel_y.col(p) = (-((ys.array() - points(p, 1)) / h_y).square() / Scalar(2)).exp();
    }

    DensityGridT<Scalar> grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.bounds = bounds;
    const Scalar norm = Scalar(1) / (static_cast<Scalar>(n) * Scalar(2) *
                                     std::numbers::pi_v<Scalar> * h_x * h_y);
    grid.values = norm * (kernel_y * kernel_x.transpose());
    return grid;
}

}  // namespace valfram

#endif  // VALFRAM_GRID_HPP
