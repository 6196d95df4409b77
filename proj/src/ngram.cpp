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

#include "valfram/ngram.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace valfram {

namespace {

/// Interned token ids assigned in lexicographic name order, so id sequences
/// compare exactly like name sequences.
struct TokenTable {
    std::vector<std::string> names;  // sorted

    explicit TokenTable(const std::vector<std::vector<ActivityType>>& sequences) {
        std::set<std::string> unique{ActivityType::kNone};
        for (const auto& sequence : sequences) {
            for (const ActivityType& type : sequence) {
                unique.insert(type.name());
            }
        }
        names.assign(unique.begin(), unique.end());
    }

    std::int32_t id(const std::string& name) const {
        const auto it = std::lower_bound(names.begin(), names.end(), name);
        return static_cast<std::int32_t>(it - names.begin());
    }
};

std::string join_tokens(const std::vector<ActivityType>& ngram) {
    // Tokens cannot contain commas, so a comma join is unambiguous.
    std::string joined;
    for (std::size_t i = 0; i < ngram.size(); ++i) {
        if (i > 0) joined += ',';
        joined += ngram[i].name();
    }
    return joined;
}

}  // namespace

NGramProfile ngram_profile(const std::vector<std::vector<ActivityType>>& sequences,
                           int k, double retained_fraction) {
    if (sequences.empty()) {
        throw EmptyInput("n-gram profile needs at least one sequence");
    }
    for (const auto& sequence : sequences) {
        if (sequence.empty()) {
            throw EmptyInput("n-gram profile sequences must be non-empty");
        }
    }
    if (k < 1) {
        throw InvalidArgument("n-gram length bound k must be >= 1");
    }
    if (!(retained_fraction > 0.0) || retained_fraction > 1.0) {
        throw InvalidArgument("retained fraction P must lie in (0, 1]");
    }

    const TokenTable table(sequences);
    const std::int32_t none_id = table.id(ActivityType::kNone);

    std::map<std::vector<std::int32_t>, std::int64_t> counts;
    std::vector<std::int32_t> wrapped;
    for (const auto& sequence : sequences) {
        wrapped.clear();
        wrapped.push_back(none_id);
        for (const ActivityType& type : sequence) {
            wrapped.push_back(table.id(type.name()));
        }
        wrapped.push_back(none_id);
        const std::size_t len = wrapped.size();
        const std::size_t max_n = std::min<std::size_t>(static_cast<std::size_t>(k), len);
        for (std::size_t n = 1; n <= max_n; ++n) {
            for (std::size_t start = 0; start + n <= len; ++start) {
                counts[std::vector<std::int32_t>(wrapped.begin() + start,
                                                 wrapped.begin() + start + n)] += 1;
            }
        }
    }

    std::vector<std::pair<std::vector<std::int32_t>, std::int64_t>> ranked(
        counts.begin(), counts.end());
    // Count descending; ties lexicographic ascending (ids preserve name order).
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::int64_t total = 0;
    for (const auto& [ngram, count] : ranked) {
        total += count;
    }

    NGramProfile profile;
    profile.k = k;
    profile.retained_fraction = retained_fraction;
    profile.total_count = total;
    const double budget = retained_fraction * static_cast<double>(total);
    std::int64_t retained = 0;
    for (const auto& [ids, count] : ranked) {
        if (static_cast<double>(retained + count) > budget) {
            break;
        }
        retained += count;
        NGramEntry entry;
        entry.count = count;
        entry.ngram.reserve(ids.size());
        for (std::int32_t id : ids) {
            entry.ngram.emplace_back(table.names[static_cast<std::size_t>(id)]);
        }
        profile.entries.push_back(std::move(entry));
    }
    return profile;
}

ProfileChiSquare profile_chi_square(const NGramProfile& model,
                                    const NGramProfile& validation) {
    if (model.k != validation.k ||
        model.retained_fraction != validation.retained_fraction) {
        throw InvalidArgument("profiles were built with different k or P");
    }

    std::map<std::string, std::int64_t> validation_by_key;
    for (const NGramEntry& entry : validation.entries) {
        validation_by_key[join_tokens(entry.ngram)] = entry.count;
    }

    std::vector<std::string> labels;
    std::vector<double> model_counts;
    std::vector<double> validation_counts;
    int matched = 0;
    for (const NGramEntry& entry : model.entries) {
        const auto it = validation_by_key.find(join_tokens(entry.ngram));
        if (it != validation_by_key.end()) {
            labels.push_back(it->first);
            model_counts.push_back(static_cast<double>(entry.count));
            validation_counts.push_back(static_cast<double>(it->second));
            ++matched;
        }
    }
    if (matched == 0) {
        throw NoOverlap("profiles share no n-grams");
    }

    const auto as_vector = [](const std::vector<double>& v) {
        return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
    };
    const CountVector model_cv(labels, as_vector(model_counts));
    const CountVector validation_cv(labels, as_vector(validation_counts));
    const ChiSquareResult chi = scaled_chi_square(model_cv, validation_cv);

    ProfileChiSquare result;
    result.chi2 = chi.chi2;
    result.matched = matched;
    result.model_only = static_cast<int>(model.entries.size()) - matched;
    result.validation_only = static_cast<int>(validation.entries.size()) - matched;
    return result;
}

}  // namespace valfram
