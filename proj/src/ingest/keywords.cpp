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


#include "sempol/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sempol/error.hpp"

namespace sempol {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

const std::vector<KeywordSpec>& default_keywords() {
    static const std::vector<KeywordSpec> keywords = {
        {1, "racism", "racism", {"racism"}},
        {2, "racist", "racism", {"racist"}},
        {3, "blacklivesmatter", "black-lives-matter", {"blacklivesmatter", "black lives matter"}},
        {4, "police", "police", {"police"}},
        {5, "immigration", "immigration", {"immigration"}},
        {6, "immigrants", "immigration", {"immigrants"}},
        {7, "climate-change", "climate-change", {"climate change"}},
        {8, "global-warming", "climate-change", {"global warming"}},
        {9, "health-care", "health-care", {"health care"}},
    };
    return keywords;
}

std::vector<std::string> topics_of(const std::vector<KeywordSpec>& keywords) {
    std::vector<std::string> topics;
    for (const auto& k : keywords) {
        if (std::find(topics.begin(), topics.end(), k.topic) == topics.end()) {
            topics.push_back(k.topic);
        }
    }
    return topics;
}

const KeywordSpec* find_keyword(const std::vector<KeywordSpec>& keywords, std::string_view name) {
    for (const auto& k : keywords) {
        if (k.name == name) return &k;
    }
    return nullptr;
}

const KeywordSpec* find_keyword(const std::vector<KeywordSpec>& keywords, int id) {
    for (const auto& k : keywords) {
        if (k.id == id) return &k;
    }
    return nullptr;
}

void validate_keywords(const std::vector<KeywordSpec>& keywords) {
    if (keywords.empty()) fail(ErrorCode::InvalidArgument, "keyword set is empty");
    std::set<int> ids;
    std::set<std::string> names;
    for (const auto& k : keywords) {
        if (k.id < 1 || k.id > 255) {
            fail(ErrorCode::InvalidArgument, "keyword '" + k.name + "': id must be in 1..255");
        }
        if (!ids.insert(k.id).second) {
            fail(ErrorCode::InvalidArgument, "duplicate keyword id " + std::to_string(k.id));
        }
        if (k.name.empty() || !names.insert(k.name).second) {
            fail(ErrorCode::InvalidArgument, "keyword name empty or duplicated: '" + k.name + "'");
        }
        if (k.topic.empty()) fail(ErrorCode::InvalidArgument, "keyword '" + k.name + "' has no topic");
        if (k.surface_forms.empty()) {
            fail(ErrorCode::InvalidArgument, "keyword '" + k.name + "' has no surface forms");
        }
        for (const auto& form : k.surface_forms) {
            if (form.empty() || normalize_text(form) != form) {
                fail(ErrorCode::InvalidArgument,
                     "surface form '" + form + "' of keyword '" + k.name + "' is not normalized");
            }
        }
    }
}

std::string normalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::vector<std::string_view> split_tokens(std::string_view normalized) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < normalized.size()) {
        while (pos < normalized.size() && is_space(normalized[pos])) ++pos;
        std::size_t end = pos;
        while (end < normalized.size() && !is_space(normalized[end])) ++end;
        if (end > pos) tokens.push_back(normalized.substr(pos, end - pos));
        pos = end;
    }
    return tokens;
}

std::string_view bare_token(std::string_view token) {
    std::size_t b = 0;
    std::size_t e = token.size();
    while (b < e && !is_alnum(token[b])) ++b;
    while (e > b && !is_alnum(token[e - 1])) --e;
    return token.substr(b, e - b);
}

std::vector<KeywordHit> find_keyword_hits(std::string_view normalized,
                                          const std::vector<KeywordSpec>& keywords) {
    std::vector<KeywordHit> hits;
    for (const auto& k : keywords) {
        for (const auto& form : k.surface_forms) {
            std::size_t from = 0;
            while (true) {
                const auto at = normalized.find(form, from);
                if (at == std::string_view::npos) break;
                const auto end = at + form.size();
                const bool left_ok = at == 0 || !is_alnum(normalized[at - 1]);
                const bool right_ok = end == normalized.size() || !is_alnum(normalized[end]);
                if (left_ok && right_ok) {
                    const auto first_token = static_cast<std::size_t>(
                        std::count(normalized.begin(), normalized.begin() + at, ' '));
                    const auto span = static_cast<std::size_t>(std::count(form.begin(), form.end(), ' ')) + 1;
                    hits.push_back({k.id, first_token, span});
                }
                from = at + 1;
            }
        }
    }
    std::sort(hits.begin(), hits.end(), [](const KeywordHit& l, const KeywordHit& r) {
        if (l.first_token != r.first_token) return l.first_token < r.first_token;
        if (l.keyword_id != r.keyword_id) return l.keyword_id < r.keyword_id;
        return l.token_count < r.token_count;
    });
    // Two surface forms of one keyword can land on the same span; keep one.
    hits.erase(std::unique(hits.begin(), hits.end(),
                           [](const KeywordHit& l, const KeywordHit& r) {
                               return l.first_token == r.first_token && l.keyword_id == r.keyword_id;
                           }),
               hits.end());
    return hits;
}

std::vector<int> matched_keyword_ids(std::string_view normalized,
                                     const std::vector<KeywordSpec>& keywords) {
    std::vector<int> ids;
    for (const auto& hit : find_keyword_hits(normalized, keywords)) ids.push_back(hit.keyword_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace sempol
