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
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sempol/keywords.hpp"
#include "sempol/types.hpp"

namespace sempol {

// ---------------------------------------------------------------------------
// SubRip cues

struct SrtCue {
    int index = 0;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string text;  ///< cue lines joined with single spaces

    bool operator==(const SrtCue&) const = default;
};

struct SrtParseOptions {
    /// Replace invalid UTF-8 with U+FFFD. When false, invalid input is a Format error.
    bool lossy_utf8 = true;
};

struct SrtParseResult {
    std::vector<SrtCue> cues;
    std::size_t skipped = 0;         ///< malformed cue blocks
    std::size_t replaced_bytes = 0;  ///< invalid UTF-8 bytes replaced
};

/// Parses SubRip content. Tolerates a UTF-8 BOM, CRLF/CR/LF line endings and
/// missing blank lines between cues. Malformed cues are skipped and counted.
SrtParseResult parse_srt(std::string_view bytes, const SrtParseOptions& options = {});

/// Writes cues in canonical SubRip form ("HH:MM:SS,mmm --> HH:MM:SS,mmm", LF endings).
std::string serialize_srt(const std::vector<SrtCue>& cues);

/// "HH:MM:SS,mmm" (hours may exceed two digits). Returns false when malformed.
bool parse_srt_time(std::string_view text, std::int64_t& ms);
std::string format_srt_time(std::int64_t ms);

/// Replaces invalid UTF-8 sequences with U+FFFD; returns the number of bytes replaced.
std::size_t sanitize_utf8(std::string& text);

// ---------------------------------------------------------------------------
// Commercial removal

constexpr std::size_t kNoDuplicateLimit = std::numeric_limits<std::size_t>::max();

struct CommercialStats {
    std::size_t blocklisted = 0;
    std::size_t duplicates = 0;
};

/// Drops cues whose normalized text contains a blocklist entry. Order is preserved.
std::vector<SrtCue> remove_commercials(const std::vector<SrtCue>& cues,
                                       const std::vector<std::string>& blocklist,
                                       CommercialStats* stats = nullptr);

/// Same, across the files of one daily set; additionally drops every cue whose
/// normalized text occurs more than `duplicate_threshold` times across the set.
std::vector<std::vector<SrtCue>> remove_commercials(const std::vector<std::vector<SrtCue>>& daily_files,
                                                    const std::vector<std::string>& blocklist,
                                                    std::size_t duplicate_threshold,
                                                    CommercialStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Speaker turns

struct SpeakerTurn {
    std::string turn_id;
    std::string source;
    Date date;
    std::string text;           ///< normalized (lowercase, single-spaced)
    std::vector<int> keywords;  ///< ascending keyword ids
    std::size_t word_count = 0;

    bool operator==(const SpeakerTurn&) const = default;
};

struct TurnOptions {
    std::int64_t max_gap_ms = 5000;  ///< a longer silence between cues starts a new turn
};

/// Merges cues into turns: ">>" starts a new speaker, as does a gap above
/// `max_gap_ms`. Every turn is returned, matched or not. Turn ids are
/// "<source>/<date>/<tag>#<n>" with n counting all turns of the file.
std::vector<SpeakerTurn> segment_turns(const std::vector<SrtCue>& cues, const std::string& source,
                                       const Date& date, const std::vector<KeywordSpec>& keywords,
                                       const TurnOptions& options = {}, const std::string& tag = "srt");

/// segment_turns restricted to turns matching at least one keyword.
std::vector<SpeakerTurn> extract_turns(const std::vector<SrtCue>& cues, const std::string& source,
                                       const Date& date, const std::vector<KeywordSpec>& keywords,
                                       const TurnOptions& options = {}, const std::string& tag = "srt");

/// Builds a turn from raw text; the keyword set may be empty.
SpeakerTurn make_turn(std::string turn_id, std::string source, const Date& date, std::string_view raw_text,
                      const std::vector<KeywordSpec>& keywords);

// ---------------------------------------------------------------------------
// Tweet dumps

struct VolumeTally {
    std::size_t records = 0;
    std::size_t words = 0;

    [[nodiscard]] double mean_words() const { return records ? double(words) / double(records) : 0.0; }
};

struct TweetIngestOptions {
    YearWindow window;
    /// Accepted mention targets, compared case-insensitively. "@CNN" maps to source "twitter@cnn".
    std::vector<std::string> targets = {"@cnn", "@foxnews"};
};

struct TweetIngestResult {
    std::vector<SpeakerTurn> turns;
    std::size_t records = 0;
    std::size_t skipped_malformed = 0;  ///< not a record, or a required field missing / mistyped
    std::size_t skipped_target = 0;
    std::size_t skipped_date = 0;  ///< unparseable or outside the window
    std::size_t dropped_no_keyword = 0;
    /// (source, keyword id) -> volume
    std::map<std::pair<std::string, int>, VolumeTally> tallies;
};

/// Reads newline-delimited JSON records {text, created_at, target, id}.
TweetIngestResult ingest_tweets(std::istream& lines, const std::vector<KeywordSpec>& keywords,
                                const TweetIngestOptions& options = {});

/// "twitter@cnn" for "@CNN"; empty when the target is not a mention handle.
std::string tweet_source_for(std::string_view target);

// ---------------------------------------------------------------------------
// Turn store (newline-delimited JSON)

void write_turns(std::ostream& out, const std::vector<SpeakerTurn>& turns,
                 const std::vector<KeywordSpec>& keywords);

/// Unknown keyword names are a Format error.
std::vector<SpeakerTurn> read_turns(std::istream& in, const std::vector<KeywordSpec>& keywords);

}  // namespace sempol
