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


#include <cctype>
#include <charconv>
#include <cstdio>

#include "sempol/error.hpp"
#include "sempol/ingest.hpp"

namespace sempol {

namespace {

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_uint(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_index(std::string_view line, int& index) {
    std::int64_t v = 0;
    if (!parse_uint(trim(line), v) || v < 1 || v > 1'000'000'000) return false;
    index = static_cast<int>(v);
    return true;
}

/// "start --> end[ trailing positioning]"
bool parse_timing(std::string_view line, std::int64_t& start, std::int64_t& end) {
    line = trim(line);
    const auto arrow = line.find("-->");
    if (arrow == std::string_view::npos) return false;
    auto lhs = trim(line.substr(0, arrow));
    auto rhs = trim(line.substr(arrow + 3));
    const auto space = rhs.find_first_of(" \t");
    if (space != std::string_view::npos) rhs = rhs.substr(0, space);
    return parse_srt_time(lhs, start) && parse_srt_time(rhs, end);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::size_t utf8_sequence_length(const std::string& s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    unsigned lo = 0x80, hi = 0xBF;
    if (b0 < 0x80) return 1;
    if (b0 >= 0xC2 && b0 <= 0xDF) {
        len = 2;
    } else if (b0 >= 0xE0 && b0 <= 0xEF) {
        len = 3;
        if (b0 == 0xE0) lo = 0xA0;
        if (b0 == 0xED) hi = 0x9F;
    } else if (b0 >= 0xF0 && b0 <= 0xF4) {
        len = 4;
        if (b0 == 0xF0) lo = 0x90;
        if (b0 == 0xF4) hi = 0x8F;
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        const unsigned l = k == 1 ? lo : 0x80;
        const unsigned h = k == 1 ? hi : 0xBF;
        if (b < l || b > h) return 0;
    }
    return len;
}

}  // namespace

std::size_t sanitize_utf8(std::string& text) {
    std::string out;
    std::size_t replaced = 0;
    std::size_t i = 0;
    bool dirty = false;
    while (i < text.size()) {
        const auto len = utf8_sequence_length(text, i);
        if (len == 0) {
            if (!dirty) {
                out.assign(text, 0, i);
                dirty = true;
            }
            out.append(kReplacement);
            ++replaced;
            ++i;
            continue;
        }
        if (dirty) out.append(text, i, len);
        i += len;
    }
    if (dirty) text = std::move(out);
    return replaced;
}

bool parse_srt_time(std::string_view text, std::int64_t& ms) {
    // H+:MM:SS[,.]mmm
    const auto c1 = text.find(':');
    if (c1 == std::string_view::npos) return false;
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) return false;
    const auto sep = text.find_first_of(",.", c2 + 1);
    if (sep == std::string_view::npos) return false;
    std::int64_t h = 0, m = 0, s = 0, f = 0;
    const auto hs = text.substr(0, c1);
    const auto ms_part = text.substr(sep + 1);
    if (!parse_uint(hs, h) || hs.size() > 4) return false;
    if (c2 - c1 - 1 != 2 || !parse_uint(text.substr(c1 + 1, 2), m) || m > 59) return false;
    if (sep - c2 - 1 != 2 || !parse_uint(text.substr(c2 + 1, 2), s) || s > 59) return false;
    if (ms_part.empty() || ms_part.size() > 3 || !parse_uint(ms_part, f)) return false;
    for (std::size_t k = ms_part.size(); k < 3; ++k) f *= 10;
    ms = ((h * 60 + m) * 60 + s) * 1000 + f;
    return true;
}

std::string format_srt_time(std::int64_t ms) {
    if (ms < 0) fail(ErrorCode::InvalidArgument, "negative SRT timestamp");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(ms / 3'600'000),
                  static_cast<long long>(ms / 60'000 % 60), static_cast<long long>(ms / 1000 % 60),
                  static_cast<long long>(ms % 1000));
    return buf;
}

SrtParseResult parse_srt(std::string_view bytes, const SrtParseOptions& options) {
    SrtParseResult result;
    std::string text(bytes);
    if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

    // Unify line endings.
    std::string unified;
    unified.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            unified.push_back('\n');
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        } else {
            unified.push_back(text[i]);
        }
    }

    std::string probe = unified;
    const auto replaced = sanitize_utf8(probe);
    if (replaced > 0 && !options.lossy_utf8) {
        fail(ErrorCode::Format, "input is not valid UTF-8 (" + std::to_string(replaced) + " invalid bytes)");
    }
    result.replaced_bytes = replaced;
    unified = std::move(probe);

    const auto lines = split_lines(unified);
    auto is_blank = [](std::string_view l) { return trim(l).empty(); };

    int last_index = 0;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (is_blank(lines[i])) {
            ++i;
            continue;
        }
        // Block: [index] [timing] text... up to a blank line or the next "index + timing" pair.
        const std::size_t block_start = i;
        std::size_t block_end = i + 1;
        while (block_end < lines.size() && !is_blank(lines[block_end])) {
            int idx = 0;
            std::int64_t s = 0, e = 0;
            if (block_end > block_start + 1 && block_end + 1 < lines.size() && parse_index(lines[block_end], idx) &&
                parse_timing(lines[block_end + 1], s, e)) {
                break;
            }
            ++block_end;
        }
        i = block_end;

        SrtCue cue;
        std::int64_t start = 0, end = 0;
        const bool well_formed = block_end - block_start >= 2 && parse_index(lines[block_start], cue.index) &&
                                 parse_timing(lines[block_start + 1], start, end) && start <= end &&
                                 cue.index > last_index;
        if (!well_formed) {
            ++result.skipped;
            continue;
        }
        cue.start_ms = start;
        cue.end_ms = end;
        for (std::size_t l = block_start + 2; l < block_end; ++l) {
            const auto line = trim(lines[l]);
            if (line.empty()) continue;
            if (!cue.text.empty()) cue.text.push_back(' ');
            cue.text.append(line);
        }
        last_index = cue.index;
        result.cues.push_back(std::move(cue));
    }
    return result;
}

std::string serialize_srt(const std::vector<SrtCue>& cues) {
    std::string out;
    for (const auto& cue : cues) {
        out += std::to_string(cue.index);
        out += '\n';
        out += format_srt_time(cue.start_ms);
        out += " --> ";
        out += format_srt_time(cue.end_ms);
        out += '\n';
        out += cue.text;
        out += "\n\n";
    }
    return out;
}

}  // namespace sempol
