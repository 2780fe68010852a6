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


// sempol: command-line driver over the C API.
//
//   sempol [--config run.json] [--seed N] [--out DIR] [--toy-embedder] <command>
//
// Settings are layered: built-in defaults, the config file, SEMPOL_* environment
// variables, then command-line flags. Exit status: 0 success, 1 usage error,
// 2 data or runtime error.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sempol/sempol.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int report_failure(sempol_status status) {
    std::fprintf(stderr, "sempol: %s: %s\n", sempol_status_name(status), sempol_last_error());
    return status == SEMPOL_INVALID_ARGUMENT ? kExitUsage : kExitData;
}

struct ConfigHandle {
    sempol_config* ptr = nullptr;
    ~ConfigHandle() { sempol_config_free(ptr); }
};

int print_summary(sempol_status status, char** summary) {
    if (status != SEMPOL_OK) return report_failure(status);
    std::fputs(*summary, stdout);
    sempol_string_free(*summary);
    return 0;
}

// JSON string literal, so a value such as "2020" stays a string.
std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic polarization of news coverage: ingest, embed, measure, test, attribute."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sempol_version()));

    std::string config_path;
    std::optional<long long> seed;
    std::string out_dir;
    bool toy = false;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Random seed for every stochastic stage")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--toy-embedder", toy, "Embed turns with the deterministic toy embedder");
    app.add_option("--set", overrides, "Override a config key: --set granger.max_lag=6")->allow_extra_args(false);

    auto* ingest = app.add_subcommand("ingest", "Captions and tweet dumps -> speaker turns and counts");
    auto* embed = app.add_subcommand("embed-toy", "Speaker turns -> embedding store (toy embedder)");
    auto* polarize = app.add_subcommand("polarize", "Embedding store -> polarity series, charts, range table");
    auto* granger = app.add_subcommand("granger", "Monthly series -> ADF and Granger tables");
    auto* attribute = app.add_subcommand("attribute", "Train the topic classifier and rank predictive tokens");
    auto* report = app.add_subcommand("report-all", "Run every stage and write report.md");
    auto* config_cmd = app.add_subcommand("config", "Print the resolved configuration");

    std::string topic;
    int lag = 0;
    std::string direction = "tv-leads";
    attribute->add_option("--topic", topic, "Topic name")->required();
    attribute->add_option("--lag", lag, "Month lag for the lag-split corpora")->check(CLI::Range(1, 11));
    attribute->add_option("--direction", direction, "Which side leads")
        ->check(CLI::IsMember({"tv-leads", "twitter-leads"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    ConfigHandle config;
    sempol_status status =
        config_path.empty() ? sempol_config_default(&config.ptr) : sempol_config_load(config_path.c_str(), &config.ptr);
    if (status == SEMPOL_OK) status = sempol_config_apply_env(config.ptr);
    if (status == SEMPOL_OK && seed) status = sempol_config_set(config.ptr, "seed", std::to_string(*seed).c_str());
    if (status == SEMPOL_OK && !out_dir.empty()) {
        // relative to the working directory, unlike paths inside the config file
        const auto dir = std::filesystem::absolute(out_dir).lexically_normal().string();
        status = sempol_config_set(config.ptr, "output", json_string(dir).c_str());
    }
    if (status == SEMPOL_OK && toy) status = sempol_config_set(config.ptr, "embedding.toy", "true");
    for (const auto& o : overrides) {
        if (status != SEMPOL_OK) break;
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "sempol: --set expects key=value, got '%s'\n", o.c_str());
            return kExitUsage;
        }
        status = sempol_config_set(config.ptr, o.substr(0, eq).c_str(), o.substr(eq + 1).c_str());
    }
    if (status == SEMPOL_OK) status = sempol_config_validate(config.ptr);
    if (status != SEMPOL_OK) return report_failure(status);

    char* summary = nullptr;
    if (*ingest) return print_summary(sempol_cmd_ingest(config.ptr, &summary), &summary);
    if (*embed) return print_summary(sempol_cmd_embed_toy(config.ptr, &summary), &summary);
    if (*polarize) return print_summary(sempol_cmd_polarize(config.ptr, &summary), &summary);
    if (*granger) return print_summary(sempol_cmd_granger(config.ptr, &summary), &summary);
    if (*report) return print_summary(sempol_cmd_report_all(config.ptr, &summary), &summary);
    if (*attribute) {
        const auto dir = direction == "twitter-leads" ? SEMPOL_TWITTER_LEADS : SEMPOL_TV_LEADS;
        return print_summary(sempol_cmd_attribute(config.ptr, topic.c_str(), lag, dir, &summary), &summary);
    }
    if (*config_cmd) {
        status = sempol_config_dump(config.ptr, &summary);
        if (status == SEMPOL_OK) std::puts(summary);
        sempol_string_free(summary);
        return status == SEMPOL_OK ? 0 : report_failure(status);
    }
    return kExitUsage;
}
