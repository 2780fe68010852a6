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
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sempol/error.hpp"
#include "sempol/ingest.hpp"

namespace sempol {

using nlohmann::json;

namespace {

bool string_field(const json& record, const char* key, std::string& out) {
    const auto it = record.find(key);
    if (it == record.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
}

}  // namespace

std::string tweet_source_for(std::string_view target) {
    if (target.size() < 2 || target.front() != '@') return {};
    return "twitter" + normalize_text(target);
}

TweetIngestResult ingest_tweets(std::istream& lines, const std::vector<KeywordSpec>& keywords,
                                const TweetIngestOptions& options) {
    TweetIngestResult result;
    std::vector<std::string> targets;
    for (const auto& t : options.targets) targets.push_back(normalize_text(t));

    std::string line;
    while (std::getline(lines, line)) {
        if (normalize_text(line).empty()) continue;
        ++result.records;
        json record = json::parse(line, nullptr, false);
        std::string text, created_at, target, id;
        if (record.is_discarded() || !record.is_object() || !string_field(record, "text", text) ||
            !string_field(record, "created_at", created_at) || !string_field(record, "target", target) ||
            !string_field(record, "id", id)) {
            ++result.skipped_malformed;
            continue;
        }
        if (std::find(targets.begin(), targets.end(), normalize_text(target)) == targets.end()) {
            ++result.skipped_target;
            continue;
        }
        Date date;
        if (!parse_iso_date(created_at, date) || !options.window.contains(date.year)) {
            ++result.skipped_date;
            continue;
        }
        sanitize_utf8(text);
        auto turn = make_turn("tweet/" + id, tweet_source_for(target), date, text, keywords);
        if (turn.keywords.empty()) {
            ++result.dropped_no_keyword;
            continue;
        }
        for (int k : turn.keywords) {
            auto& tally = result.tallies[{turn.source, k}];
            ++tally.records;
            tally.words += turn.word_count;
        }
        result.turns.push_back(std::move(turn));
    }
    return result;
}

void write_turns(std::ostream& out, const std::vector<SpeakerTurn>& turns, const std::vector<KeywordSpec>& keywords) {
    for (const auto& t : turns) {
        json names = json::array();
        for (int id : t.keywords) {
            const auto* k = find_keyword(keywords, id);
            if (!k) fail(ErrorCode::InvalidArgument, "turn " + t.turn_id + " carries unknown keyword id");
            names.push_back(k->name);
        }
        json record = {{"turn_id", t.turn_id}, {"source", t.source},   {"date", t.date.to_string()},
                       {"text", t.text},       {"keywords", names}, {"word_count", t.word_count}};
        out << record.dump() << '\n';
    }
    if (!out) fail(ErrorCode::Io, "failed writing turn store");
}

std::vector<SpeakerTurn> read_turns(std::istream& in, const std::vector<KeywordSpec>& keywords) {
    std::vector<SpeakerTurn> turns;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto where = "turn store line " + std::to_string(line_no);
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) fail(ErrorCode::Format, where + ": not a JSON object");
        try {
            SpeakerTurn t;
            t.turn_id = record.at("turn_id").get<std::string>();
            t.source = record.at("source").get<std::string>();
            if (!parse_iso_date(record.at("date").get<std::string>(), t.date)) {
                fail(ErrorCode::Format, where + ": bad date");
            }
            t.text = record.at("text").get<std::string>();
            for (const auto& name : record.at("keywords")) {
                const auto* k = find_keyword(keywords, name.get<std::string>());
                if (!k) fail(ErrorCode::Format, where + ": unknown keyword '" + name.get<std::string>() + "'");
                t.keywords.push_back(k->id);
            }
            std::sort(t.keywords.begin(), t.keywords.end());
            t.word_count = record.at("word_count").get<std::size_t>();
            turns.push_back(std::move(t));
        } catch (const json::exception& e) {
            fail(ErrorCode::Format, where + ": " + e.what());
        }
    }
    return turns;
}

}  // namespace sempol
