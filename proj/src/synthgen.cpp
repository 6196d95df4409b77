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

#include "valfram/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

namespace valfram {

namespace {

constexpr const char* kEndState = "end";

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

enum class Aspect : std::uint64_t {
    Chain = 1,
    Start = 2,
    Duration = 3,
    Location = 4,
    ModeChoice = 5,
    Travel = 6,
};

/// One engine per schedule and aspect keeps perturbation axes independent:
/// changing, say, the location mixture cannot shift what the start-time
/// stream produces.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t schedule_index, Aspect aspect) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ splitmix64(schedule_index + 1));
    s = splitmix64(s ^ splitmix64(static_cast<std::uint64_t>(aspect) << 32));
    return std::mt19937_64(s);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Box-Muller; always consumes exactly two engine draws.
double standard_normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double truncated_normal(std::mt19937_64& rng, const TruncNormalParams& params,
                        double lo, double hi) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const double v = params.mean_s + params.sd_s * standard_normal(rng);
        if (v >= lo && v < hi) {
            return v;
        }
    }
    return std::clamp(params.mean_s, lo, hi - 1.0);
}

double lognormal(std::mt19937_64& rng, const LogNormalParams& params) {
    return std::exp(params.log_mean + params.log_sd * standard_normal(rng));
}

/// Inverse-CDF draw; always consumes exactly one engine draw.
std::size_t categorical(std::mt19937_64& rng, const Vector& probabilities) {
    const double u = uniform01(rng);
    double cumulative = 0.0;
    for (Index i = 0; i < probabilities.size(); ++i) {
        cumulative += probabilities[i];
        if (u < cumulative) {
            return static_cast<std::size_t>(i);
        }
    }
    return static_cast<std::size_t>(probabilities.size() - 1);
}

struct CompiledSpec {
    std::vector<std::string> types;
    Vector initial;
    Matrix transition;
    std::vector<TruncNormalParams> start_time;
    std::vector<LogNormalParams> duration;
    std::vector<std::vector<std::string>> modes_by_type;  // sorted mode names
    std::vector<Vector> mode_probs_by_type;
    std::vector<std::vector<MixtureComponent>> mixtures;  // empty if no locations
    std::map<std::string, LogNormalParams> travel_time;
    bool has_locations = false;
};

CompiledSpec compile(const GeneratorSpec& spec) {
    validate_spec(spec);
    CompiledSpec compiled;
    compiled.types = spec.activity_types;
    compiled.initial = spec.initial;
    compiled.transition = spec.transition;
    compiled.has_locations = !spec.location_mixture.empty();
    for (const std::string& type : spec.activity_types) {
        compiled.start_time.push_back(spec.start_time.at(type));
        compiled.duration.push_back(spec.duration.at(type));
        const auto& choice = spec.mode_choice.at(type);
        std::vector<std::string> modes;
        Vector probs(static_cast<Index>(choice.size()));
        Index i = 0;
        for (const auto& [mode, prob] : choice) {
            modes.push_back(mode);
            probs[i++] = prob;
        }
        compiled.modes_by_type.push_back(std::move(modes));
        compiled.mode_probs_by_type.push_back(std::move(probs));
        if (compiled.has_locations) {
            compiled.mixtures.push_back(spec.location_mixture.at(type));
        }
    }
    compiled.travel_time = spec.travel_time;
    return compiled;
}

}  // namespace

void validate_spec(const GeneratorSpec& spec) {
    if (spec.population < 1) {
        throw InvalidSpec("population must be >= 1");
    }
    if (spec.activity_types.empty()) {
        throw InvalidSpec("spec needs at least one activity type");
    }
    const auto n = static_cast<Index>(spec.activity_types.size());
    for (const std::string& type : spec.activity_types) {
        detail::check_token(type, "activity type");
        if (type == ActivityType::kNone || type == kEndState) {
            throw InvalidSpec("activity type name '" + type + "' is reserved");
        }
    }
    std::vector<std::string> sorted = spec.activity_types;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidSpec("activity types are not unique");
    }

    if (spec.initial.size() != n || (spec.initial.array() < 0.0).any() ||
        std::abs(spec.initial.sum() - 1.0) > 1e-9) {
        throw InvalidSpec("initial distribution must be nonnegative over the types and sum to 1");
    }
    if (spec.transition.rows() != n || spec.transition.cols() != n + 1 ||
        (spec.transition.array() < 0.0).any()) {
        throw InvalidSpec("transition must be types x (types + end) with nonnegative rows");
    }
    for (Index r = 0; r < n; ++r) {
        if (std::abs(spec.transition.row(r).sum() - 1.0) > 1e-9) {
            throw InvalidSpec("transition row " + std::to_string(r) + " does not sum to 1");
        }
    }

    for (const std::string& type : spec.activity_types) {
        const auto start_it = spec.start_time.find(type);
        if (start_it == spec.start_time.end() || !(start_it->second.sd_s > 0.0)) {
            throw InvalidSpec("missing or degenerate start-time parameters for '" + type + "'");
        }
        const auto duration_it = spec.duration.find(type);
        if (duration_it == spec.duration.end() || !(duration_it->second.log_sd > 0.0)) {
            throw InvalidSpec("missing or degenerate duration parameters for '" + type + "'");
        }
        const auto mode_it = spec.mode_choice.find(type);
        if (mode_it == spec.mode_choice.end() || mode_it->second.empty()) {
            throw InvalidSpec("missing mode choice for '" + type + "'");
        }
        double mode_sum = 0.0;
        for (const auto& [mode, prob] : mode_it->second) {
            detail::check_token(mode, "mode");
            if (prob < 0.0) {
                throw InvalidSpec("negative mode probability for '" + type + "'");
            }
            if (spec.travel_time.find(mode) == spec.travel_time.end()) {
                throw InvalidSpec("missing travel-time parameters for mode '" + mode + "'");
            }
            mode_sum += prob;
        }
        if (std::abs(mode_sum - 1.0) > 1e-9) {
            throw InvalidSpec("mode choice for '" + type + "' does not sum to 1");
        }
    }

    if (!spec.location_mixture.empty()) {
        for (const std::string& type : spec.activity_types) {
            const auto it = spec.location_mixture.find(type);
            if (it == spec.location_mixture.end() || it->second.empty()) {
                throw InvalidSpec("location mixture must cover every type or be absent; '" +
                                  type + "' is missing");
            }
            double weight_sum = 0.0;
            for (const MixtureComponent& component : it->second) {
                if (component.weight < 0.0 || !(component.sd_m > 0.0) ||
                    !component.center.allFinite()) {
                    throw InvalidSpec("malformed mixture component for '" + type + "'");
                }
                weight_sum += component.weight;
            }
            if (std::abs(weight_sum - 1.0) > 1e-9) {
                throw InvalidSpec("mixture weights for '" + type + "' do not sum to 1");
            }
        }
        if (spec.location_mixture.size() != spec.activity_types.size()) {
            throw InvalidSpec("location mixture names a type outside the vocabulary");
        }
    }
    for (const auto& [mode, params] : spec.travel_time) {
        if (!(params.log_sd > 0.0)) {
            throw InvalidSpec("degenerate travel-time parameters for mode '" + mode + "'");
        }
    }
}

DiaryDataset generate(const GeneratorSpec& spec) {
    const CompiledSpec compiled = compile(spec);
    const int digits =
        static_cast<int>(std::to_string(std::max(1, spec.population - 1)).size());

    std::vector<ActivitySchedule> schedules;
    schedules.reserve(static_cast<std::size_t>(spec.population));
    for (int p = 0; p < spec.population; ++p) {
        const auto idx = static_cast<std::uint64_t>(p);
        auto chain_rng = stream(spec.seed, idx, Aspect::Chain);
        auto start_rng = stream(spec.seed, idx, Aspect::Start);
        auto duration_rng = stream(spec.seed, idx, Aspect::Duration);
        auto location_rng = stream(spec.seed, idx, Aspect::Location);
        auto mode_rng = stream(spec.seed, idx, Aspect::ModeChoice);
        auto travel_rng = stream(spec.seed, idx, Aspect::Travel);

        // Activity chain: first type from the initial distribution, then
        // transitions until the absorbing end state or the hard cap.
        std::vector<std::size_t> chain;
        chain.push_back(categorical(chain_rng, compiled.initial));
        while (static_cast<int>(chain.size()) < kMaxActivitiesPerSchedule) {
            const Vector row = compiled.transition.row(static_cast<Index>(chain.back()));
            const std::size_t next = categorical(chain_rng, row);
            if (next == compiled.types.size()) {
                break;  // end state
            }
            chain.push_back(next);
        }

        std::vector<double> starts;
        starts.reserve(chain.size());
        for (const std::size_t t : chain) {
            starts.push_back(truncated_normal(start_rng, compiled.start_time[t], 0.0,
                                              static_cast<double>(kSecondsPerDay)));
        }
        std::sort(starts.begin(), starts.end());

        ActivitySchedule schedule;
        std::string id = std::to_string(p);
        id.insert(0, static_cast<std::size_t>(digits) - id.size(), '0');
        schedule.person_id = "p" + id;

        for (std::size_t k = 0; k < chain.size(); ++k) {
            const std::size_t t = chain[k];
            ActivityInstance act{ActivityType(compiled.types[t]), 0, 1, std::nullopt};
            act.start_s = static_cast<int>(
                std::clamp(std::llround(starts[k]), 0LL, 86399LL));
            act.duration_s = static_cast<int>(std::max(
                1LL, std::llround(lognormal(duration_rng, compiled.duration[t]))));
            if (compiled.has_locations) {
                const auto& mixture = compiled.mixtures[t];
                Vector weights(static_cast<Index>(mixture.size()));
                for (Index c = 0; c < weights.size(); ++c) {
                    weights[c] = mixture[static_cast<std::size_t>(c)].weight;
                }
                const std::size_t component = categorical(location_rng, weights);
                const MixtureComponent& chosen = mixture[component];
                const double dx = chosen.sd_m * standard_normal(location_rng);
                const double dy = chosen.sd_m * standard_normal(location_rng);
                act.location = Point(chosen.center.x() + dx, chosen.center.y() + dy);
            }
            schedule.activities.push_back(std::move(act));
        }

        // Starts are sorted, so activity k ends no earlier than its start.
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            const std::size_t dest = chain[k + 1];
            const std::size_t mode_index =
                categorical(mode_rng, compiled.mode_probs_by_type[dest]);
            const std::string& mode = compiled.modes_by_type[dest][mode_index];
            Trip trip{Mode(mode), 0, 0};
            trip.travel_time_s = static_cast<int>(std::max(
                0LL, std::llround(lognormal(travel_rng, compiled.travel_time.at(mode)))));
            const long long end = static_cast<long long>(schedule.activities[k].start_s) +
                                  schedule.activities[k].duration_s;
            trip.depart_s = static_cast<int>(std::clamp(end, 0LL, 86399LL));
            schedule.trips.push_back(std::move(trip));
        }
        schedules.push_back(std::move(schedule));
    }
    return build_dataset(std::move(schedules));
}

PerturbKind perturb_kind_from_string(const std::string& name) {
    if (name == "shift_start") return PerturbKind::ShiftStart;
    if (name == "swap_modes") return PerturbKind::SwapModes;
    if (name == "relocate") return PerturbKind::Relocate;
    if (name == "reorder") return PerturbKind::Reorder;
    throw UnknownKind("unknown perturbation kind '" + name + "'");
}

GeneratorSpec perturb(const GeneratorSpec& spec, PerturbKind kind, double magnitude) {
    if (!(magnitude >= 0.0)) {
        throw InvalidArgument("perturbation magnitude must be >= 0");
    }
    GeneratorSpec out = spec;
    switch (kind) {
        case PerturbKind::ShiftStart:
            for (auto& [type, params] : out.start_time) {
                params.mean_s += magnitude;
            }
            break;
        case PerturbKind::SwapModes: {
            if (magnitude > 1.0) {
                throw InvalidArgument("swap_modes magnitude must lie in [0, 1]");
            }
            for (auto& [type, choice] : out.mode_choice) {
                std::vector<double> probs;
                probs.reserve(choice.size());
                for (const auto& [mode, prob] : choice) {
                    probs.push_back(prob);
                }
                std::size_t i = 0;
                for (auto& [mode, prob] : choice) {
                    const double reversed = probs[probs.size() - 1 - i];
                    prob = (1.0 - magnitude) * probs[i] + magnitude * reversed;
                    ++i;
                }
            }
            break;
        }
        case PerturbKind::Relocate:
            for (auto& [type, mixture] : out.location_mixture) {
                for (MixtureComponent& component : mixture) {
                    component.center.x() += magnitude;
                }
            }
            break;
        case PerturbKind::Reorder: {
            if (magnitude > 1.0) {
                throw InvalidArgument("reorder magnitude must lie in [0, 1]");
            }
            const auto n = static_cast<Index>(out.activity_types.size());
            const Vector uniform_initial = Vector::Constant(n, 1.0 / static_cast<double>(n));
            const Matrix uniform_rows =
                Matrix::Constant(n, n + 1, 1.0 / static_cast<double>(n + 1));
            out.initial = (1.0 - magnitude) * out.initial + magnitude * uniform_initial;
            out.transition = (1.0 - magnitude) * out.transition + magnitude * uniform_rows;
            break;
        }
    }
    return out;
}

namespace {

using nlohmann::json;

TruncNormalParams trunc_normal_from_json(const json& j) {
    return TruncNormalParams{j.at("mean_s").get<double>(), j.at("sd_s").get<double>()};
}

LogNormalParams lognormal_from_json(const json& j) {
    return LogNormalParams{j.at("log_mean").get<double>(), j.at("log_sd").get<double>()};
}

}  // namespace

GeneratorSpec load_generator_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open generator spec '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidSpec("generator spec '" + path + "' is not valid JSON: " + e.what());
    }

    GeneratorSpec spec;
    try {
        spec.seed = j.at("seed").get<std::uint64_t>();
        spec.population = j.at("population").get<int>();
        spec.activity_types = j.at("activity_types").get<std::vector<std::string>>();
        const auto n = static_cast<Index>(spec.activity_types.size());

        spec.initial = Vector::Zero(n);
        for (const auto& [type, prob] : j.at("initial").items()) {
            const auto it = std::find(spec.activity_types.begin(),
                                      spec.activity_types.end(), type);
            if (it == spec.activity_types.end()) {
                throw InvalidSpec("initial distribution names unknown type '" + type + "'");
            }
            spec.initial[it - spec.activity_types.begin()] = prob.get<double>();
        }

        spec.transition = Matrix::Zero(n, n + 1);
        for (const auto& [from, row] : j.at("transition").items()) {
            const auto from_it = std::find(spec.activity_types.begin(),
                                           spec.activity_types.end(), from);
            if (from_it == spec.activity_types.end()) {
                throw InvalidSpec("transition names unknown type '" + from + "'");
            }
            const Index r = from_it - spec.activity_types.begin();
            for (const auto& [to, prob] : row.items()) {
                Index c;
                if (to == kEndState) {
                    c = n;
                } else {
                    const auto to_it = std::find(spec.activity_types.begin(),
                                                 spec.activity_types.end(), to);
                    if (to_it == spec.activity_types.end()) {
                        throw InvalidSpec("transition names unknown type '" + to + "'");
                    }
                    c = to_it - spec.activity_types.begin();
                }
                spec.transition(r, c) = prob.get<double>();
            }
        }

        for (const auto& [type, params] : j.at("start_time").items()) {
            spec.start_time[type] = trunc_normal_from_json(params);
        }
        for (const auto& [type, params] : j.at("duration").items()) {
            spec.duration[type] = lognormal_from_json(params);
        }
        for (const auto& [type, choice] : j.at("mode_choice").items()) {
            for (const auto& [mode, prob] : choice.items()) {
                spec.mode_choice[type][mode] = prob.get<double>();
            }
        }
        if (j.contains("location_mixture")) {
            for (const auto& [type, components] : j.at("location_mixture").items()) {
                for (const auto& component : components) {
                    spec.location_mixture[type].push_back(MixtureComponent{
                        component.at("weight").get<double>(),
                        Point(component.at("x").get<double>(),
                              component.at("y").get<double>()),
                        component.at("sd_m").get<double>()});
                }
            }
        }
        for (const auto& [mode, params] : j.at("travel_time").items()) {
            spec.travel_time[mode] = lognormal_from_json(params);
        }
    } catch (const json::exception& e) {
        throw InvalidSpec("generator spec '" + path + "' is malformed: " + e.what());
    }

    validate_spec(spec);
    return spec;
}

}  // namespace valfram
