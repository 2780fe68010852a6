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
#include <unordered_map>

#include "sempol/ingest.hpp"

namespace sempol {

namespace {

bool blocklisted(const std::string& normalized, const std::vector<std::string>& blocklist) {
    return std::any_of(blocklist.begin(), blocklist.end(), [&](const std::string& entry) {
        return !entry.empty() && normalized.find(entry) != std::string::npos;
    });
}

}  // namespace

std::vector<SrtCue> remove_commercials(const std::vector<SrtCue>& cues, const std::vector<std::string>& blocklist,
                                       CommercialStats* stats) {
    return remove_commercials(std::vector<std::vector<SrtCue>>{cues}, blocklist, kNoDuplicateLimit, stats).front();
}

std::vector<std::vector<SrtCue>> remove_commercials(const std::vector<std::vector<SrtCue>>& daily_files,
                                                    const std::vector<std::string>& blocklist,
                                                    std::size_t duplicate_threshold, CommercialStats* stats) {
    std::vector<std::string> entries;
    for (const auto& b : blocklist) entries.push_back(normalize_text(b));

    std::vector<std::vector<std::string>> normalized(daily_files.size());
    std::unordered_map<std::string, std::size_t> repeats;
    for (std::size_t f = 0; f < daily_files.size(); ++f) {
        for (const auto& cue : daily_files[f]) {
            normalized[f].push_back(normalize_text(cue.text));
            if (!normalized[f].back().empty()) ++repeats[normalized[f].back()];
        }
    }

    CommercialStats local;
    std::vector<std::vector<SrtCue>> out(daily_files.size());
    for (std::size_t f = 0; f < daily_files.size(); ++f) {
        for (std::size_t c = 0; c < daily_files[f].size(); ++c) {
            const auto& text = normalized[f][c];
            if (blocklisted(text, entries)) {
                ++local.blocklisted;
                continue;
            }
            if (!text.empty() && repeats[text] > duplicate_threshold) {
                ++local.duplicates;
                continue;
            }
            out[f].push_back(daily_files[f][c]);
        }
    }
    if (stats) {
        stats->blocklisted += local.blocklisted;
        stats->duplicates += local.duplicates;
    }
    return out;
}

SpeakerTurn make_turn(std::string turn_id, std::string source, const Date& date, std::string_view raw_text,
                      const std::vector<KeywordSpec>& keywords) {
    SpeakerTurn turn;
    turn.turn_id = std::move(turn_id);
    turn.source = std::move(source);
    turn.date = date;
    turn.text = normalize_text(raw_text);
    turn.keywords = matched_keyword_ids(turn.text, keywords);
    turn.word_count = split_tokens(turn.text).size();
    return turn;
}

std::vector<SpeakerTurn> segment_turns(const std::vector<SrtCue>& cues, const std::string& source, const Date& date,
                                       const std::vector<KeywordSpec>& keywords, const TurnOptions& options,
                                       const std::string& tag) {
    std::vector<std::string> texts;
    std::string current;
    std::int64_t last_end = 0;
    bool have_last = false;

    auto close_turn = [&] {
        if (!normalize_text(current).empty()) texts.push_back(current);
        current.clear();
    };

    for (const auto& cue : cues) {
        if (have_last && cue.start_ms - last_end > options.max_gap_ms) close_turn();
        have_last = true;
        last_end = cue.end_ms;

        std::string_view rest = cue.text;
        while (true) {
            const auto marker = rest.find(">>");
            current.push_back(' ');
            current.append(rest.substr(0, marker));
            if (marker == std::string_view::npos) break;
            close_turn();
            rest.remove_prefix(marker + 2);
            while (!rest.empty() && rest.front() == '>') rest.remove_prefix(1);
        }
    }
    close_turn();

    std::vector<SpeakerTurn> turns;
    turns.reserve(texts.size());
    const auto prefix = source + "/" + date.to_string() + "/" + tag + "#";
    for (std::size_t n = 0; n < texts.size(); ++n) {
        turns.push_back(make_turn(prefix + std::to_string(n + 1), source, date, texts[n], keywords));
    }
    return turns;
}

std::vector<SpeakerTurn> extract_turns(const std::vector<SrtCue>& cues, const std::string& source, const Date& date,
                                       const std::vector<KeywordSpec>& keywords, const TurnOptions& options,
                                       const std::string& tag) {
    auto turns = segment_turns(cues, source, date, keywords, options, tag);
    std::erase_if(turns, [](const SpeakerTurn& t) { return t.keywords.empty(); });
    return turns;
}

}  // namespace sempol
