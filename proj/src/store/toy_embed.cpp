// Copyright 2026 The sempol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <numbers>

#include "sempol/error.hpp"
#include "sempol/store.hpp"

namespace sempol {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform in (0, 1].
double unit_open(std::uint64_t& state) { return (double(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53; }

void normalize(std::vector<double>& v) {
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    const double n = std::sqrt(n2);
    for (double& x : v) x /= n;
}

}  // namespace

std::vector<double> hash_unit_vector(std::string_view token, std::size_t dim) {
    std::uint64_t state = fnv1a(token) ^ (0x5851f42d4c957f2dULL * (dim + 1));
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; i += 2) {
        // Box-Muller pair
        const double r = std::sqrt(-2.0 * std::log(unit_open(state)));
        const double theta = 2.0 * std::numbers::pi * unit_open(state);
        v[i] = r * std::cos(theta);
        if (i + 1 < dim) v[i + 1] = r * std::sin(theta);
    }
    normalize(v);
    return v;
}

std::vector<double> toy_embed(std::string_view text, std::size_t position, std::size_t dim, std::size_t window) {
    return toy_embed_span(text, position, 1, dim, window);
}

std::vector<double> toy_embed_span(std::string_view text, std::size_t first, std::size_t count, std::size_t dim,
                                   std::size_t window) {
    if (dim < 2) fail(ErrorCode::InvalidArgument, "toy embedding dimension must be at least 2");
    if (count == 0) fail(ErrorCode::InvalidArgument, "empty keyword span");
    const auto normalized = normalize_text(text);
    const auto tokens = split_tokens(normalized);
    if (first + count > tokens.size()) {
        fail(ErrorCode::InvalidArgument, "keyword position " + std::to_string(first + count - 1) +
                                             " out of range for " + std::to_string(tokens.size()) + " tokens");
    }
    std::vector<double> mean(dim, 0.0);
    for (std::size_t pos = first; pos < first + count; ++pos) {
        const std::size_t lo = pos >= window ? pos - window : 0;
        const std::size_t hi = std::min(tokens.size() - 1, pos + window);
        std::vector<double> sum(dim, 0.0);
        for (std::size_t t = lo; t <= hi; ++t) {
            const auto g = hash_unit_vector(bare_token(tokens[t]), dim);
            for (std::size_t i = 0; i < dim; ++i) sum[i] += g[i];
        }
        double n2 = 0.0;
        for (double x : sum) n2 += x * x;
        if (n2 == 0.0) sum = hash_unit_vector(bare_token(tokens[pos]), dim);
        normalize(sum);
        for (std::size_t i = 0; i < dim; ++i) mean[i] += sum[i] / double(count);
    }
    double n2 = 0.0;
    for (double x : mean) n2 += x * x;
    if (n2 == 0.0) return hash_unit_vector(bare_token(tokens[first]), dim);
    normalize(mean);
    return mean;
}

ToyEmbedder::ToyEmbedder(std::size_t dim, std::size_t window) : dim_(dim), window_(window) {
    if (dim_ < 2) fail(ErrorCode::InvalidArgument, "toy embedding dimension must be at least 2");
}

std::vector<float> ToyEmbedder::embed(const SpeakerTurn& turn, const KeywordHit& hit) const {
    const auto v = toy_embed_span(turn.text, hit.first_token, hit.token_count, dim_, window_);
    return {v.begin(), v.end()};
}

nlohmann::json ToyEmbedder::describe() const {
    return {{"provider", "toy"}, {"dimension", dim_}, {"window", window_}, {"pooling", "span-mean"}};
}

EmbedStats embed_turns(std::span<const SpeakerTurn> turns, const std::vector<KeywordSpec>& keywords,
                       const EmbeddingProvider& provider, const YearWindow& window, StoreWriter& writer) {
    EmbedStats stats;
    for (const auto& turn : turns) {
        if (!window.contains(turn.date.year)) {
            ++stats.skipped_out_of_window;
            continue;
        }
        ++stats.turns;
        std::vector<int> seen;
        for (const auto& hit : find_keyword_hits(turn.text, keywords)) {
            if (std::find(seen.begin(), seen.end(), hit.keyword_id) != seen.end()) {
                ++stats.repeated_occurrences;
            } else {
                seen.push_back(hit.keyword_id);
            }
            EmbeddingRecord r;
            r.turn_id = turn.turn_id;
            r.source = turn.source;
            r.keyword_id = hit.keyword_id;
            r.year = turn.date.year;
            r.month = turn.date.month;
            r.vector = provider.embed(turn, hit);
            writer.append(r);
            ++stats.records;
        }
    }
    return stats;
}

}  // namespace sempol
