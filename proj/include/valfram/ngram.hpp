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

#ifndef VALFRAM_NGRAM_HPP
#define VALFRAM_NGRAM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "valfram/errors.hpp"
#include "valfram/schedule.hpp"
#include "valfram/stats.hpp"

namespace valfram {

struct NGramEntry {
    std::vector<ActivityType> ngram;  // includes boundary sentinels
    std::int64_t count = 0;
};

/// Frequency-ranked n-gram profile of a sequence corpus: counts pooled over
/// all lengths 1..k of the sentinel-wrapped sequences, sorted by count
/// descending with lexicographic tie-break, truncated to the largest prefix
/// whose count sum stays within the fraction P of the total.
struct NGramProfile {
    int k = 1;
    double retained_fraction = 1.0;
    std::int64_t total_count = 0;  // over all n-grams before truncation
    std::vector<NGramEntry> entries;
};

NGramProfile ngram_profile(const std::vector<std::vector<ActivityType>>& sequences,
                           int k, double retained_fraction);

struct ProfileChiSquare {
    double chi2 = 0;
    int matched = 0;
    int model_only = 0;
    int validation_only = 0;
};

/// Chi-square over the n-gram intersection of two profiles built with the
/// same k and P; validation counts are rescaled to the model's matched
/// total via scaled_chi_square.
ProfileChiSquare profile_chi_square(const NGramProfile& model,
                                    const NGramProfile& validation);

}  // namespace valfram

#endif  // VALFRAM_NGRAM_HPP
