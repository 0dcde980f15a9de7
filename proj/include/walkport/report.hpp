// Copyright 2026 The walkport authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WALKPORT_REPORT_HPP_
#define WALKPORT_REPORT_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "walkport/protocol.hpp"

namespace walkport {

using Json = nlohmann::ordered_json;

/// Big-endian bitstring label, matching ket notation: outcome 1 of a
/// two-qubit register prints as "01".
inline std::string outcome_bits(std::uint64_t value, int n) {
    std::string s(n, '0');
    for (int i = 0; i < n; ++i) {
        if (value & (std::uint64_t{1} << (n - 1 - i))) s[i] = '1';
    }
    return s;
}

inline Json histogram_to_json(const ShotHistogram& hist) {
    Json j = Json::object();
    for (const auto& [outcome, count] : hist.counts) {
        j[outcome_bits(outcome, hist.n)] = {
            {"count", count},
            {"probability", static_cast<double>(count) / static_cast<double>(hist.shots)},
        };
    }
    return j;
}

/// Mean and sample standard deviation of each outcome's probability
/// across repeats.
inline Json repeat_stats_json(const std::vector<ShotHistogram>& repeats) {
    Json j = Json::object();
    if (repeats.empty()) return j;
    const int n = repeats.front().n;
    std::map<std::uint64_t, std::vector<double>> per_outcome;
    for (const ShotHistogram& h : repeats) {
        for (const auto& [outcome, count] : h.counts) {
            per_outcome[outcome];  // ensure key exists even if absent elsewhere
        }
    }
    for (auto& [outcome, probs] : per_outcome) {
        for (const ShotHistogram& h : repeats) {
            const auto it = h.counts.find(outcome);
            const std::uint64_t c = it == h.counts.end() ? 0 : it->second;
            probs.push_back(static_cast<double>(c) / static_cast<double>(h.shots));
        }
        double mean = 0.0;
        for (double p : probs) mean += p;
        mean /= static_cast<double>(probs.size());
        double var = 0.0;
        if (probs.size() > 1) {
            for (double p : probs) var += (p - mean) * (p - mean);
            var /= static_cast<double>(probs.size() - 1);
        }
        j[outcome_bits(outcome, n)] = {{"mean", mean}, {"stddev", std::sqrt(var)}};
    }
    return j;
}

inline std::string histogram_to_csv(const ShotHistogram& hist) {
    std::string out = "outcome,count,probability\n";
    for (const auto& [outcome, count] : hist.counts) {
        const double p = static_cast<double>(count) / static_cast<double>(hist.shots);
        out += outcome_bits(outcome, hist.n) + "," + std::to_string(count) + "," +
               Json(p).dump() + "\n";
    }
    return out;
}

inline ShotHistogram merge_histograms(const std::vector<ShotHistogram>& repeats) {
    ShotHistogram merged;
    if (repeats.empty()) return merged;
    merged.n = repeats.front().n;
    for (const ShotHistogram& h : repeats) {
        merged.shots += h.shots;
        for (const auto& [outcome, count] : h.counts) merged.counts[outcome] += count;
    }
    return merged;
}

}  // namespace walkport

#endif  // WALKPORT_REPORT_HPP_
