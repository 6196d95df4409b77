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

#include <algorithm>
#include <string>
#include <vector>

#include "valfram/ngram.hpp"

using namespace valfram;

namespace {

std::vector<ActivityType> seq(const std::vector<std::string>& names) {
    std::vector<ActivityType> result;
    result.reserve(names.size());
    for (const std::string& name : names) {
        result.emplace_back(name);
    }
    return result;
}

std::vector<std::string> names(const std::vector<ActivityType>& ngram) {
    std::vector<std::string> result;
    result.reserve(ngram.size());
    for (const ActivityType& type : ngram) {
        result.push_back(type.name());
    }
    return result;
}

bool has_entry(const NGramProfile& profile, const std::vector<std::string>& ngram,
               std::int64_t count) {
    return std::any_of(profile.entries.begin(), profile.entries.end(),
                       [&](const NGramEntry& entry) {
                           return names(entry.ngram) == ngram && entry.count == count;
                       });
}

}  // namespace

TEST_CASE("bigrams of a wrapped daily sequence") {
    const auto corpus = {seq({"sleep", "work", "leisure", "sleep"})};
    const NGramProfile profile = ngram_profile(corpus, 2, 1.0);

    // 6 unigrams plus 5 bigrams of the sentinel-wrapped sequence.
    CHECK_EQ(profile.total_count, 11);
    CHECK_EQ(profile.entries.size(), 9);
    CHECK(has_entry(profile, {"none"}, 2));
    CHECK(has_entry(profile, {"sleep"}, 2));
    CHECK(has_entry(profile, {"work"}, 1));
    CHECK(has_entry(profile, {"leisure"}, 1));
    CHECK(has_entry(profile, {"none", "sleep"}, 1));
    CHECK(has_entry(profile, {"sleep", "work"}, 1));
    CHECK(has_entry(profile, {"work", "leisure"}, 1));
    CHECK(has_entry(profile, {"leisure", "sleep"}, 1));
    CHECK(has_entry(profile, {"sleep", "none"}, 1));
}

TEST_CASE("entries are ranked by count with lexicographic tie-break") {
    const auto corpus = {seq({"sleep", "work", "leisure", "sleep"})};
    const NGramProfile profile = ngram_profile(corpus, 2, 1.0);
    const std::vector<std::vector<std::string>> expected = {
        {"none"},
        {"sleep"},
        {"leisure"},
        {"leisure", "sleep"},
        {"none", "sleep"},
        {"sleep", "none"},
        {"sleep", "work"},
        {"work"},
        {"work", "leisure"}};
    REQUIRE_EQ(profile.entries.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK_EQ(names(profile.entries[i].ngram), expected[i]);
        if (i > 0) {
            CHECK_GE(profile.entries[i - 1].count, profile.entries[i].count);
        }
    }
}

TEST_CASE("unigram counts include two sentinels per sequence") {
    const auto corpus = {seq({"sleep", "work", "leisure", "sleep"})};
    const NGramProfile profile = ngram_profile(corpus, 1, 1.0);
    CHECK_EQ(profile.total_count, 6);
    CHECK(has_entry(profile, {"none"}, 2));
    CHECK(has_entry(profile, {"sleep"}, 2));
    CHECK(has_entry(profile, {"work"}, 1));
    CHECK(has_entry(profile, {"leisure"}, 1));
}

TEST_CASE("truncation keeps the largest prefix within the count budget") {
    const auto corpus = {seq({"sleep", "work", "leisure", "sleep"})};
    // Budget 0.5 * 11 = 5.5; prefix sums run 2, 4, 5, 6, so three entries fit.
    const NGramProfile profile = ngram_profile(corpus, 2, 0.5);
    CHECK_EQ(profile.total_count, 11);
    REQUIRE_EQ(profile.entries.size(), 3);
    CHECK_EQ(names(profile.entries[0].ngram), std::vector<std::string>{"none"});
    CHECK_EQ(names(profile.entries[1].ngram), std::vector<std::string>{"sleep"});
    CHECK_EQ(names(profile.entries[2].ngram), std::vector<std::string>{"leisure"});
}

TEST_CASE("profiles do not depend on corpus order") {
    const std::vector<std::vector<ActivityType>> forward = {
        seq({"a", "b"}), seq({"b", "c", "a"}), seq({"c"})};
    std::vector<std::vector<ActivityType>> reversed(forward.rbegin(), forward.rend());
    const NGramProfile p = ngram_profile(forward, 3, 0.9);
    const NGramProfile q = ngram_profile(reversed, 3, 0.9);
    REQUIRE_EQ(p.entries.size(), q.entries.size());
    CHECK_EQ(p.total_count, q.total_count);
    for (std::size_t i = 0; i < p.entries.size(); ++i) {
        CHECK_EQ(names(p.entries[i].ngram), names(q.entries[i].ngram));
        CHECK_EQ(p.entries[i].count, q.entries[i].count);
    }
}

TEST_CASE("k exceeding the wrapped length stops at the full sequence") {
    const auto corpus = {seq({"a"})};
    const NGramProfile profile = ngram_profile(corpus, 11, 1.0);
    // Wrapped <none, a, none>: 3 + 2 + 1 n-grams.
    CHECK_EQ(profile.total_count, 6);
    CHECK(has_entry(profile, {"none", "a", "none"}, 1));
}

TEST_CASE("profile construction rejects degenerate input") {
    const std::vector<std::vector<ActivityType>> empty_corpus;
    CHECK_THROWS_AS(ngram_profile(empty_corpus, 2, 1.0), EmptyInput);
    const std::vector<std::vector<ActivityType>> with_empty = {seq({"a"}), {}};
    CHECK_THROWS_AS(ngram_profile(with_empty, 2, 1.0), EmptyInput);
    const std::vector<std::vector<ActivityType>> corpus = {seq({"a"})};
    CHECK_THROWS_AS(ngram_profile(corpus, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ngram_profile(corpus, 2, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ngram_profile(corpus, 2, 1.5), InvalidArgument);
}

TEST_CASE("chi-square of a profile against itself is exactly zero") {
    const std::vector<std::vector<ActivityType>> corpus = {
        seq({"a", "b", "a"}), seq({"b", "c"}), seq({"a"})};
    const NGramProfile profile = ngram_profile(corpus, 3, 0.9);
    const ProfileChiSquare result = profile_chi_square(profile, profile);
    CHECK_EQ(result.chi2, 0.0);
    CHECK_EQ(result.matched, static_cast<int>(profile.entries.size()));
    CHECK_EQ(result.model_only, 0);
    CHECK_EQ(result.validation_only, 0);
}

TEST_CASE("chi-square over the intersection matches a hand-computed value") {
    const std::vector<std::vector<ActivityType>> model_corpus = {seq({"a", "a"})};
    const std::vector<std::vector<ActivityType>> validation_corpus = {seq({"a", "b"})};
    const NGramProfile model = ngram_profile(model_corpus, 1, 1.0);
    const NGramProfile validation = ngram_profile(validation_corpus, 1, 1.0);
    // Shared unigrams a and none carry model counts (2, 2) and validation
    // counts (1, 2); rescaling the validation to the model's 4 gives
    // (4/3, 8/3) and chi2 = 1/3 + 1/6.
    const ProfileChiSquare result = profile_chi_square(model, validation);
    CHECK_EQ(result.chi2, doctest::Approx(0.5).epsilon(1e-12));
    CHECK_EQ(result.matched, 2);
    CHECK_EQ(result.model_only, 0);
    CHECK_EQ(result.validation_only, 1);
}

TEST_CASE("profiles with no shared n-grams cannot be compared") {
    // P = 0.8 truncates both profiles to their dominant unigram, which
    // differs between the corpora, so even the sentinel drops out.
    std::vector<std::vector<ActivityType>> model_corpus;
    std::vector<std::vector<ActivityType>> validation_corpus;
    for (int i = 0; i < 10; ++i) {
        model_corpus.push_back(seq({"a", "a", "a", "a", "a", "a", "a", "a"}));
        validation_corpus.push_back(seq({"b", "b", "b", "b", "b", "b", "b", "b"}));
    }
    const NGramProfile model = ngram_profile(model_corpus, 1, 0.8);
    const NGramProfile validation = ngram_profile(validation_corpus, 1, 0.8);
    REQUIRE_EQ(model.entries.size(), 1);
    CHECK_THROWS_AS(profile_chi_square(model, validation), NoOverlap);
}

TEST_CASE("profiles built with different settings cannot be compared") {
    const std::vector<std::vector<ActivityType>> corpus = {seq({"a", "b"})};
    const NGramProfile k1 = ngram_profile(corpus, 1, 1.0);
    const NGramProfile k2 = ngram_profile(corpus, 2, 1.0);
    const NGramProfile p_low = ngram_profile(corpus, 1, 0.9);
    CHECK_THROWS_AS(profile_chi_square(k1, k2), InvalidArgument);
    CHECK_THROWS_AS(profile_chi_square(k1, p_low), InvalidArgument);
}
