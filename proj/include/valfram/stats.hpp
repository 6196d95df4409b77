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

#ifndef VALFRAM_STATS_HPP
#define VALFRAM_STATS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "valfram/errors.hpp"
#include "valfram/types.hpp"

namespace valfram {

/// One-dimensional sample: finite values, length >= 1, order irrelevant.
template <typename Scalar>
class Sample1DT {
public:
    explicit Sample1DT(VectorX<Scalar> values) : values_(std::move(values)) {
        if (values_.size() == 0) {
            throw EmptySample("sample is empty");
        }
        if (!values_.allFinite()) {
            throw InvalidArgument("sample contains non-finite values");
        }
    }

    explicit Sample1DT(const std::vector<Scalar>& values)
        : Sample1DT(Eigen::Map<const VectorX<Scalar>>(
              values.data(), static_cast<Index>(values.size()))) {}

    const VectorX<Scalar>& values() const { return values_; }
    Index size() const { return values_.size(); }

private:
    VectorX<Scalar> values_;
};

using Sample1D = Sample1DT<double>;

/// Two-sample Kolmogorov-Smirnov statistic, sup_x |F_M(x) - F_V(x)|.
///
/// The supremum of the difference of two step functions is attained at a
/// pooled sample point or immediately before one, so the exact value is the
/// maximum over the pooled points of both the right-continuous evaluation
/// and the left limit.
template <typename Scalar>
Scalar ks_statistic(const Sample1DT<Scalar>& model,
                    const Sample1DT<Scalar>& validation) {
    std::vector<Scalar> a(model.values().begin(), model.values().end());
    std::vector<Scalar> b(validation.values().begin(), validation.values().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const auto n_a = static_cast<Scalar>(a.size());
    const auto n_b = static_cast<Scalar>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    Scalar best = 0;
    while (i < a.size() || j < b.size()) {
        const Scalar x = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i]
                                                                           : b[j];
        // Left limit at x: counts strictly below.
        const Scalar left = std::abs(static_cast<Scalar>(i) / n_a -
                                     static_cast<Scalar>(j) / n_b);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        // Right-continuous evaluation at x: counts <= x.
        const Scalar right = std::abs(static_cast<Scalar>(i) / n_a -
                                      static_cast<Scalar>(j) / n_b);
        best = std::max({best, left, right});
    }
    return best;
}

/// Labeled nonnegative frequencies. Labels are unique; order carries no
/// meaning beyond fixing iteration order.
template <typename Scalar>
struct CountVectorT {
    std::vector<std::string> labels;
    VectorX<Scalar> counts;

    CountVectorT(std::vector<std::string> labels_in, VectorX<Scalar> counts_in)
        : labels(std::move(labels_in)), counts(std::move(counts_in)) {
        if (static_cast<Index>(labels.size()) != counts.size()) {
            throw InvalidArgument("count vector has " + std::to_string(labels.size()) +
                                  " labels for " + std::to_string(counts.size()) +
                                  " counts");
        }
        if (!counts.allFinite() || (counts.array() < Scalar(0)).any()) {
            throw InvalidArgument("count vector entries must be finite and >= 0");
        }
        std::vector<std::string> sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw InvalidArgument("count vector labels are not unique");
        }
    }
};

using CountVector = CountVectorT<double>;

template <typename Scalar>
struct ChiSquareResultT {
    Scalar chi2 = 0;
    /// Fraction of model mass on labels absent (or zero) in the validation
    /// counts; reported, never folded into chi2.
    Scalar dropped_model_mass = 0;
};

using ChiSquareResult = ChiSquareResultT<double>;

/// Pearson chi-square with the validation frequencies rescaled to the model
/// total. Only labels with a positive validation count are compared;
/// validation counts are scaled so that their sum matches the model's sum
/// over those labels, then chi2 = sum (f_m - s_v)^2 / s_v.
template <typename Scalar>
ChiSquareResultT<Scalar> scaled_chi_square(const CountVectorT<Scalar>& model,
                                           const CountVectorT<Scalar>& validation) {
    std::map<std::string, Scalar> model_by_label;
    for (Index i = 0; i < model.counts.size(); ++i) {
        model_by_label[model.labels[i]] = model.counts[i];
    }
    const Scalar model_total = model.counts.sum();
    if (model_total <= Scalar(0)) {
        throw DegenerateModel("model counts sum to zero");
    }

    Scalar validation_kept_total = 0;
    Scalar model_kept_total = 0;
    for (Index i = 0; i < validation.counts.size(); ++i) {
        if (validation.counts[i] > Scalar(0)) {
            validation_kept_total += validation.counts[i];
            auto it = model_by_label.find(validation.labels[i]);
            if (it != model_by_label.end()) {
                model_kept_total += it->second;
            }
        }
    }
    if (validation_kept_total <= Scalar(0)) {
        throw DegenerateValidation("validation counts are all zero");
    }

    // s_v = f_v * (model kept total / validation total); written as a ratio
    // so that identical count vectors give exactly zero terms.
    const Scalar ratio = model_kept_total / validation_kept_total;
    Scalar chi2 = 0;
    for (Index i = 0; i < validation.counts.size(); ++i) {
        const Scalar f_v = validation.counts[i];
        if (f_v <= Scalar(0)) {
            continue;
        }
        const Scalar scaled = f_v * ratio;
        auto it = model_by_label.find(validation.labels[i]);
        const Scalar f_m = it == model_by_label.end() ? Scalar(0) : it->second;
        if (scaled > Scalar(0)) {
            const Scalar diff = f_m - scaled;
            chi2 += diff * diff / scaled;
        }
    }

    ChiSquareResultT<Scalar> result;
    result.chi2 = chi2;
    result.dropped_model_mass = (model_total - model_kept_total) / model_total;
    return result;
}

}  // namespace valfram

#endif  // VALFRAM_STATS_HPP
