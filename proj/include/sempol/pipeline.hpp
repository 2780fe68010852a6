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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sempol/attribution.hpp"
#include "sempol/config.hpp"

namespace sempol {

/// What a command did: a human-readable summary, warnings that did not stop
/// it, and the files it wrote (relative to the output directory).
struct CommandResult {
    std::string summary;
    std::vector<std::string> warnings;
    std::vector<std::string> outputs;
};

/// SRT directories and tweet dumps -> turns.jsonl, ingest_counts.csv,
/// volume.csv, ingest_diagnostics.json.
CommandResult cmd_ingest(const RunConfig& config);

/// turns.jsonl -> embedding store, using the deterministic toy embedder.
CommandResult cmd_embed_toy(const RunConfig& config);

/// Store -> series_<granularity>.csv, sp_range.csv, charts/sp_<keyword>.svg.
/// A missing store is embedded with the toy embedder when it is enabled, and
/// is otherwise an error.
CommandResult cmd_polarize(const RunConfig& config);

/// series_monthly.csv -> adf.csv, granger.csv, granger_summary.csv.
CommandResult cmd_granger(const RunConfig& config);

/// Trains the reference classifier for one topic and writes token tables.
/// Without a lag: TV turns of the configured year. With a lag: TV turns of the
/// leading side's months and social turns of the following side's months,
/// across the whole window.
CommandResult cmd_attribute(const RunConfig& config, const std::string& topic, std::optional<int> lag = std::nullopt,
                            LeadDirection direction = LeadDirection::TvLeads);

/// All stages in order, then one attribution per topic and, when enabled,
/// lag-split attributions at each topic's minimal significant Granger lag.
CommandResult cmd_report_all(const RunConfig& config);

/// Parses "tv-leads" / "twitter-leads".
LeadDirection parse_direction(const std::string& text);
const char* to_string(LeadDirection direction);

// ---------------------------------------------------------------------------
// Output helpers

struct ChartSeries {
    std::string label;
    std::vector<double> values;
};

/// Static SVG line chart; x labels are shown evenly spaced.
std::string line_chart_svg(const std::string& title, const std::vector<std::string>& x_labels,
                           const std::vector<ChartSeries>& series);

/// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

/// Adds the files to manifest.json in the output directory with their hashes
/// and sizes, keeping earlier entries, and stamps the resolved configuration.
void update_manifest(const RunConfig& config, const std::vector<std::string>& outputs);

}  // namespace sempol
