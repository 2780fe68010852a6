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

#include <string>
#include <string_view>
#include <vector>

namespace sempol {

/// One tracked keyword. Surface forms are stored normalized (lowercase,
/// single-spaced) and matched on word boundaries.
struct KeywordSpec {
    int id = 0;
    std::string name;   ///< stable slug, e.g. "climate-change"
    std::string topic;  ///< topic slug, e.g. "climate-change"
    std::vector<std::string> surface_forms;
};

/// The nine keywords across six topics used by the default configuration.
const std::vector<KeywordSpec>& default_keywords();

/// Distinct topic slugs in first-appearance order.
std::vector<std::string> topics_of(const std::vector<KeywordSpec>& keywords);

const KeywordSpec* find_keyword(const std::vector<KeywordSpec>& keywords, std::string_view name);
const KeywordSpec* find_keyword(const std::vector<KeywordSpec>& keywords, int id);

/// Validates ids (1..255, unique), names, topics and forms. Throws InvalidArgument.
void validate_keywords(const std::vector<KeywordSpec>& keywords);

/// Lowercases ASCII, collapses whitespace runs into one space, trims.
std::string normalize_text(std::string_view text);

/// Whitespace tokens of already-normalized text.
std::vector<std::string_view> split_tokens(std::string_view normalized);

/// Token with leading and trailing non-alphanumeric bytes removed ("police," -> "police").
std::string_view bare_token(std::string_view token);

/// One occurrence of a keyword inside normalized text, in token coordinates.
struct KeywordHit {
    int keyword_id = 0;
    std::size_t first_token = 0;
    std::size_t token_count = 1;
};

/// All keyword occurrences in `normalized`, ordered by position then keyword id.
/// A surface form matches when it occurs as a substring bounded on both sides by
/// the text edge or a non-alphanumeric byte.
std::vector<KeywordHit> find_keyword_hits(std::string_view normalized,
                                          const std::vector<KeywordSpec>& keywords);

/// Distinct ids of the keywords present, ascending.
std::vector<int> matched_keyword_ids(std::string_view normalized,
                                     const std::vector<KeywordSpec>& keywords);

}  // namespace sempol
