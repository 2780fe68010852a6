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


#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sempol/attribution.hpp"
#include "sempol/keywords.hpp"
#include "sempol/timeseries.hpp"
#include "sempol/types.hpp"

namespace sempol {

/// Every key a run configuration may contain, with its default value.
const nlohmann::json& default_config_document();

/// A configuration document: defaults overlaid with a user file, explicit
/// settings and environment overrides. Relative paths resolve against
/// `base_dir` (the config file's directory, or the working directory).
struct ConfigDocument {
    nlohmann::json doc;
    std::filesystem::path base_dir;

    static ConfigDocument defaults();
    static ConfigDocument load(const std::filesystem::path& path);

    /// Sets a dotted key ("granger.max_lag") to a JSON value. Unknown keys are
    /// InvalidArgument errors.
    void set(const std::string& key_path, const nlohmann::json& value);

    /// Applies PREFIX_SECTION__KEY=value variables from `environment`; "__"
    /// separates nesting levels, names are case-insensitive, values parse as
    /// JSON or else are taken as strings.
    void apply_env(const std::map<std::string, std::string>& environment, const std::string& prefix = "SEMPOL_");
};

/// The process environment as a map.
std::map<std::string, std::string> process_environment();

struct TvSourceSpec {
    std::string source;
    std::filesystem::path path;
};

/// Typed, validated view of a ConfigDocument.
struct RunConfig {
    std::filesystem::path output_dir;
    std::uint64_t seed = 7;
    YearWindow window;

    std::vector<TvSourceSpec> tv_sources;
    std::vector<std::filesystem::path> tweet_files;
    std::vector<std::string> tweet_targets;
    std::string date_pattern;
    bool lossy_utf8 = true;

    std::vector<KeywordSpec> keywords;
    std::vector<std::string> blocklist;
    std::size_t duplicate_threshold = 10;
    std::int64_t max_gap_ms = 5000;

    SourcePair tv_pair;
    SourcePair social_pair;
    std::vector<Granularity> granularities;

    std::filesystem::path store_path;
    bool toy_embedder = false;
    std::size_t toy_dim = 128;
    std::size_t toy_window = 2;

    HypothesisOptions hypotheses;

    int attribution_year = 2020;
    AttributionOptions attribution;
    TrainOptions training;
    std::size_t encoder_dim = 64;
    std::size_t encoder_window = 0;
    int max_token_lag = 8;
    bool auto_lags = true;

    nlohmann::json document;  ///< the resolved document, stamped into the run manifest
};

RunConfig resolve(const ConfigDocument& config);

}  // namespace sempol
