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


#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>

#include "sempol/config.hpp"
#include "sempol/error.hpp"

extern char** environ;

namespace sempol {

using nlohmann::json;

namespace {

const char* kDefaults = R"json({
  "output": "sempol-out",
  "seed": 7,
  "window": {"first": 2010, "last": 2020},
  "corpus": {
    "tv": [],
    "tweets": [],
    "tweet_targets": ["@cnn", "@foxnews"],
    "date_pattern": "(\\d{4})-(\\d{2})-(\\d{2})",
    "lossy_utf8": true
  },
  "keywords": null,
  "commercials": {"blocklist": [], "duplicate_threshold": 10},
  "turns": {"max_gap_ms": 5000},
  "pairs": {"tv": ["cnn", "foxnews"], "social": ["twitter@cnn", "twitter@foxnews"]},
  "granularities": ["yearly", "monthly"],
  "embedding": {"store": "embeddings.dlns", "toy": false, "dim": 128, "window": 2},
  "granger": {"min_lag": 1, "max_lag": 12, "alpha": 0.05},
  "attribution": {
    "year": 2020,
    "k": 10,
    "percentile": 95,
    "steps": 50,
    "max_lag": 8,
    "auto_lags": true,
    "encoder": {"dim": 64, "window": 0},
    "classifier": {"hidden": 16, "learning_rate": 0.5, "max_epochs": 300, "patience": 20}
  }
})json";

std::vector<std::string> split_path(const std::string& key_path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = key_path.find('.', start);
        parts.push_back(key_path.substr(start, dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    for (const auto& p : parts) {
        if (p.empty()) fail(ErrorCode::InvalidArgument, "malformed config key '" + key_path + "'");
    }
    return parts;
}

// Object-valued defaults are schemas: user objects may only use their keys.
// Everything else (lists, scalars, the null keyword table) is replaced wholesale.
void overlay(json& target, const json& schema, const json& patch, const std::string& where) {
    if (!patch.is_object()) fail(ErrorCode::InvalidArgument, "config: '" + where + "' must be an object");
    for (const auto& [key, value] : patch.items()) {
        const auto path = where.empty() ? key : where + "." + key;
        if (!schema.contains(key)) fail(ErrorCode::InvalidArgument, "config: unknown key '" + path + "'");
        if (schema[key].is_object()) {
            overlay(target[key], schema[key], value, path);
        } else {
            target[key] = value;
        }
    }
}

template <typename T>
T get(const json& node, const std::string& where) {
    try {
        return node.get<T>();
    } catch (const json::exception&) {
        fail(ErrorCode::InvalidArgument, "config: '" + where + "' has the wrong type (" + node.dump() + ")");
    }
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_absolute() ? path : base / path).lexically_normal();
}

SourcePair pair_of(const json& node, const std::string& where) {
    const auto v = get<std::vector<std::string>>(node, where);
    if (v.size() != 2 || v[0].empty() || v[1].empty() || v[0] == v[1]) {
        fail(ErrorCode::InvalidArgument, "config: '" + where + "' must list two distinct sources");
    }
    return {v[0], v[1]};
}

void check_source_id(const std::string& s, const std::string& where) {
    if (s.empty() || normalize_text(s) != s || s.find(' ') != std::string::npos) {
        fail(ErrorCode::InvalidArgument, "config: source '" + s + "' in " + where + " must be a lowercase label");
    }
}

}  // namespace

const json& default_config_document() {
    static const json doc = json::parse(kDefaults);
    return doc;
}

ConfigDocument ConfigDocument::defaults() { return {default_config_document(), std::filesystem::current_path()}; }

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot read config file '" + path.string() + "'");
    json user = json::parse(in, nullptr, false, true);
    if (user.is_discarded()) fail(ErrorCode::InvalidArgument, "config file '" + path.string() + "' is not valid JSON");
    auto config = defaults();
    overlay(config.doc, default_config_document(), user, "");
    config.base_dir = std::filesystem::absolute(path).parent_path();
    return config;
}

void ConfigDocument::set(const std::string& key_path, const json& value) {
    const auto parts = split_path(key_path);
    const json* schema = &default_config_document();
    json* node = &doc;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!schema->is_object() || !schema->contains(parts[i]) || !(*schema)[parts[i]].is_object()) {
            fail(ErrorCode::InvalidArgument, "config: unknown key '" + key_path + "'");
        }
        schema = &(*schema)[parts[i]];
        node = &(*node)[parts[i]];
    }
    if (!schema->contains(parts.back())) fail(ErrorCode::InvalidArgument, "config: unknown key '" + key_path + "'");
    if ((*schema)[parts.back()].is_object()) {
        overlay((*node)[parts.back()], (*schema)[parts.back()], value, key_path);
    } else {
        (*node)[parts.back()] = value;
    }
}

void ConfigDocument::apply_env(const std::map<std::string, std::string>& environment, const std::string& prefix) {
    for (const auto& [name, raw] : environment) {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) continue;
        std::string key = name.substr(prefix.size());
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        std::string dotted;
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (key.compare(i, 2, "__") == 0) {
                dotted += '.';
                ++i;
            } else {
                dotted += key[i];
            }
        }
        json value = json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;
        try {
            set(dotted, value);
        } catch (const Error& e) {
            fail(e.code(), std::string(e.what()) + " (from environment variable " + name + ")");
        }
    }
}

std::map<std::string, std::string> process_environment() {
    std::map<std::string, std::string> out;
    for (char** e = environ; e && *e; ++e) {
        const std::string entry(*e);
        const auto eq = entry.find('=');
        if (eq != std::string::npos) out[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    return out;
}

RunConfig resolve(const ConfigDocument& config) {
    const json& d = config.doc;
    const auto& base = config.base_dir;
    RunConfig rc;
    rc.document = d;

    rc.output_dir = resolve_path(base, get<std::string>(d["output"], "output"));
    rc.seed = get<std::uint64_t>(d["seed"], "seed");
    rc.window = {get<int>(d["window"]["first"], "window.first"), get<int>(d["window"]["last"], "window.last")};
    if (rc.window.first > rc.window.last || rc.window.first < 1 || rc.window.last > 65535) {
        fail(ErrorCode::InvalidArgument, "config: window must satisfy first <= last");
    }

    const auto& corpus = d["corpus"];
    for (const auto& entry : corpus["tv"]) {
        TvSourceSpec spec{get<std::string>(entry.value("source", json()), "corpus.tv[].source"),
                          resolve_path(base, get<std::string>(entry.value("path", json()), "corpus.tv[].path"))};
        check_source_id(spec.source, "corpus.tv");
        rc.tv_sources.push_back(std::move(spec));
    }
    for (const auto& p : get<std::vector<std::string>>(corpus["tweets"], "corpus.tweets")) {
        rc.tweet_files.push_back(resolve_path(base, p));
    }
    rc.tweet_targets = get<std::vector<std::string>>(corpus["tweet_targets"], "corpus.tweet_targets");
    rc.date_pattern = get<std::string>(corpus["date_pattern"], "corpus.date_pattern");
    try {
        const std::regex re(rc.date_pattern);
        if (re.mark_count() < 3) fail(ErrorCode::InvalidArgument, "config: corpus.date_pattern needs 3 groups");
    } catch (const std::regex_error&) {
        fail(ErrorCode::InvalidArgument, "config: corpus.date_pattern is not a valid regex");
    }
    rc.lossy_utf8 = get<bool>(corpus["lossy_utf8"], "corpus.lossy_utf8");

    if (d["keywords"].is_null()) {
        rc.keywords = default_keywords();
    } else {
        int id = 0;
        for (const auto& k : d["keywords"]) {
            KeywordSpec spec;
            spec.id = ++id;
            spec.name = get<std::string>(k.value("name", json()), "keywords[].name");
            spec.topic = get<std::string>(k.value("topic", json()), "keywords[].topic");
            for (const auto& f : get<std::vector<std::string>>(k.value("forms", json()), "keywords[].forms")) {
                spec.surface_forms.push_back(normalize_text(f));
            }
            rc.keywords.push_back(std::move(spec));
        }
    }
    validate_keywords(rc.keywords);

    rc.blocklist = get<std::vector<std::string>>(d["commercials"]["blocklist"], "commercials.blocklist");
    for (auto& b : rc.blocklist) b = normalize_text(b);
    const auto& threshold = d["commercials"]["duplicate_threshold"];
    rc.duplicate_threshold =
        threshold.is_null() ? kNoDuplicateLimit : get<std::size_t>(threshold, "commercials.duplicate_threshold");
    rc.max_gap_ms = get<std::int64_t>(d["turns"]["max_gap_ms"], "turns.max_gap_ms");

    rc.tv_pair = pair_of(d["pairs"]["tv"], "pairs.tv");
    rc.social_pair = pair_of(d["pairs"]["social"], "pairs.social");
    for (const auto* s : {&rc.tv_pair.a, &rc.tv_pair.b, &rc.social_pair.a, &rc.social_pair.b}) {
        check_source_id(*s, "pairs");
    }
    for (const auto& g : get<std::vector<std::string>>(d["granularities"], "granularities")) {
        if (g == "yearly") {
            rc.granularities.push_back(Granularity::Yearly);
        } else if (g == "monthly") {
            rc.granularities.push_back(Granularity::Monthly);
        } else {
            fail(ErrorCode::InvalidArgument, "config: granularity '" + g + "' is not yearly or monthly");
        }
    }

    const auto& emb = d["embedding"];
    rc.store_path = resolve_path(rc.output_dir, get<std::string>(emb["store"], "embedding.store"));
    rc.toy_embedder = get<bool>(emb["toy"], "embedding.toy");
    rc.toy_dim = get<std::size_t>(emb["dim"], "embedding.dim");
    rc.toy_window = get<std::size_t>(emb["window"], "embedding.window");
    if (rc.toy_dim < 2) fail(ErrorCode::InvalidArgument, "config: embedding.dim must be at least 2");

    const auto& g = d["granger"];
    rc.hypotheses.min_lag = get<int>(g["min_lag"], "granger.min_lag");
    rc.hypotheses.max_lag = get<int>(g["max_lag"], "granger.max_lag");
    rc.hypotheses.alpha = get<double>(g["alpha"], "granger.alpha");
    if (rc.hypotheses.min_lag < 1 || rc.hypotheses.max_lag < rc.hypotheses.min_lag) {
        fail(ErrorCode::InvalidArgument, "config: granger lags must satisfy 1 <= min_lag <= max_lag");
    }
    if (!(rc.hypotheses.alpha > 0 && rc.hypotheses.alpha < 1)) {
        fail(ErrorCode::InvalidArgument, "config: granger.alpha must lie in (0, 1)");
    }

    const auto& a = d["attribution"];
    rc.attribution_year = get<int>(a["year"], "attribution.year");
    rc.attribution.k = get<std::size_t>(a["k"], "attribution.k");
    rc.attribution.percentile = get<double>(a["percentile"], "attribution.percentile");
    rc.attribution.steps = get<int>(a["steps"], "attribution.steps");
    rc.max_token_lag = get<int>(a["max_lag"], "attribution.max_lag");
    rc.auto_lags = get<bool>(a["auto_lags"], "attribution.auto_lags");
    rc.encoder_dim = get<std::size_t>(a["encoder"]["dim"], "attribution.encoder.dim");
    rc.encoder_window = get<std::size_t>(a["encoder"]["window"], "attribution.encoder.window");
    const auto& c = a["classifier"];
    rc.training.hidden = get<std::size_t>(c["hidden"], "attribution.classifier.hidden");
    rc.training.learning_rate = get<double>(c["learning_rate"], "attribution.classifier.learning_rate");
    rc.training.max_epochs = get<int>(c["max_epochs"], "attribution.classifier.max_epochs");
    rc.training.patience = get<int>(c["patience"], "attribution.classifier.patience");
    rc.training.seed = rc.seed;
    if (rc.max_token_lag < 1 || rc.max_token_lag > 11) {
        fail(ErrorCode::InvalidArgument, "config: attribution.max_lag must lie in [1, 11]");
    }
    return rc;
}

}  // namespace sempol
