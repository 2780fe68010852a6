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


#include <doctest.h>

#include <cstdio>
#include <random>
#include <regex>
#include <sstream>

#include "sempol/error.hpp"
#include "sempol/ingest.hpp"

using namespace sempol;

namespace {

const auto& kw() { return default_keywords(); }

int id_of(const std::string& name) { return find_keyword(kw(), name)->id; }

std::string srt_block(int index, long long start, long long end, const std::string& text) {
    char ts[80];
    std::snprintf(ts, sizeof ts, "%02lld:%02lld:%02lld,%03lld --> %02lld:%02lld:%02lld,%03lld", start / 3600000,
                  start / 60000 % 60, start / 1000 % 60, start % 1000, end / 3600000, end / 60000 % 60,
                  end / 1000 % 60, end % 1000);
    return std::to_string(index) + "\n" + ts + "\n" + text + "\n\n";
}

SrtCue cue(int index, const std::string& text, std::int64_t start = 0, std::int64_t end = 1000) {
    return {index, start, end, text};
}

}  // namespace

TEST_SUITE("srt") {
    TEST_CASE("single cue parses to milliseconds") {
        const auto r = parse_srt("1\n00:00:01,000 --> 00:00:02,500\nhello world\n\n");
        REQUIRE(r.cues.size() == 1);
        CHECK(r.cues[0] == SrtCue{1, 1000, 2500, "hello world"});
        CHECK(r.skipped == 0);
    }

    TEST_CASE("empty input") {
        const auto r = parse_srt("");
        CHECK(r.cues.empty());
        CHECK(r.skipped == 0);
    }

    TEST_CASE("BOM, CRLF and multi-line text") {
        const auto r = parse_srt("\xEF\xBB\xBF" "1\r\n00:00:01,000 --> 00:00:02,000\r\nfirst line\r\n  second line \r\n\r\n"
                                 "2\r\n01:02:03,004 --> 01:02:04,005\r\n>> next\r\n");
        REQUIRE(r.cues.size() == 2);
        CHECK(r.cues[0].text == "first line second line");
        CHECK(r.cues[1].start_ms == ((1 * 60 + 2) * 60 + 3) * 1000 + 4);
        CHECK(r.cues[1].text == ">> next");
    }

    TEST_CASE("malformed cues are skipped and counted") {
        const std::string text = srt_block(1, 0, 1000, "ok one") +
                                 "2\n00:00:05,000 -> 00:00:06,000\nbad arrow\n\n" +   // bad timing
                                 srt_block(3, 9000, 8000, "ends before start") +      // start > end
                                 "x\n00:00:07,000 --> 00:00:08,000\nbad index\n\n" +  // bad index
                                 srt_block(1, 9000, 9500, "index does not increase") + srt_block(4, 10000, 11000, "ok two");
        const auto r = parse_srt(text);
        REQUIRE(r.cues.size() == 2);
        CHECK(r.cues[0].text == "ok one");
        CHECK(r.cues[1].text == "ok two");
        CHECK(r.skipped == 4);
    }

    TEST_CASE("missing blank line between cues") {
        const auto r = parse_srt("1\n00:00:01,000 --> 00:00:02,000\nalpha\n2\n00:00:03,000 --> 00:00:04,000\nbeta\n");
        REQUIRE(r.cues.size() == 2);
        CHECK(r.cues[0].text == "alpha");
        CHECK(r.cues[1].text == "beta");
    }

    TEST_CASE("invalid UTF-8: lossy replacement or a format error") {
        const std::string bytes = "1\n00:00:01,000 --> 00:00:02,000\ncaf\xE9 racism\n\n";
        const auto lossy = parse_srt(bytes);
        REQUIRE(lossy.cues.size() == 1);
        CHECK(lossy.cues[0].text == "caf\xEF\xBF\xBD racism");
        CHECK(lossy.replaced_bytes == 1);
        SrtParseOptions strict;
        strict.lossy_utf8 = false;
        CHECK_THROWS_AS(parse_srt(bytes, strict), Error);
    }

    TEST_CASE("round trip: 1000 generated cues reparse identically") {
        std::mt19937_64 rng(11);
        const std::vector<std::string> words = {"the", "senate", "voted", "police", ">>", "report", "1-800", "42"};
        std::vector<SrtCue> expected;
        std::string text;
        long long t = 0;
        int index = 0;
        for (int i = 0; i < 1000; ++i) {
            index += 1 + static_cast<int>(rng() % 3);
            const long long start = t + static_cast<long long>(rng() % 4000);
            const long long end = start + static_cast<long long>(rng() % 5000);
            t = end;
            std::string line;
            const auto n = 1 + rng() % 7;
            for (std::size_t w = 0; w < n; ++w) line += (w ? " " : "") + words[rng() % words.size()];
            expected.push_back({index, start, end, line});
            text += srt_block(index, start, end, line);
        }
        const auto parsed = parse_srt(text);
        CHECK(parsed.skipped == 0);
        CHECK(parsed.cues == expected);
        // serialize(parse(x)) reparses to the same cue list.
        CHECK(parse_srt(serialize_srt(parsed.cues)).cues == expected);
    }

    TEST_CASE("timestamp helpers") {
        std::int64_t ms = 0;
        CHECK(parse_srt_time("00:00:01,5", ms));
        CHECK(ms == 1500);
        CHECK(parse_srt_time("123:00:00.000", ms));
        CHECK(ms == 123LL * 3600 * 1000);
        CHECK_FALSE(parse_srt_time("00:61:00,000", ms));
        CHECK_FALSE(parse_srt_time("00:00:00", ms));
        CHECK(format_srt_time(3723004) == "01:02:03,004");
    }
}

TEST_SUITE("commercials") {
    TEST_CASE("blocklist match") {
        const auto out = remove_commercials({cue(1, "Call NOW 1-800"), cue(2, "the senate voted")}, {"call now"});
        REQUIRE(out.size() == 1);
        CHECK(out[0].text == "the senate voted");
    }

    TEST_CASE("empty blocklist and no duplicate limit is the identity") {
        const std::vector<SrtCue> in = {cue(1, "a"), cue(2, "a"), cue(3, "b")};
        CHECK(remove_commercials(in, {}) == in);
        CHECK(remove_commercials(std::vector<std::vector<SrtCue>>{in}, {}, kNoDuplicateLimit).front() == in);
    }

    TEST_CASE("a line repeated 50 times across files exceeds threshold 10") {
        std::vector<std::vector<SrtCue>> files(10);
        int repeated = 0;
        for (std::size_t f = 0; f < files.size(); ++f) {
            for (int i = 0; i < 5; ++i) {
                files[f].push_back(cue(2 * i + 1, "Ask your doctor about brand X"));
                ++repeated;
                files[f].push_back(cue(2 * i + 2, "news item " + std::to_string(f) + "-" + std::to_string(i)));
            }
        }
        REQUIRE(repeated == 50);
        CommercialStats stats;
        const auto out = remove_commercials(files, {}, 10, &stats);
        CHECK(stats.duplicates == 50);
        for (const auto& f : out) {
            CHECK(f.size() == 5);
            for (const auto& c : f) CHECK(c.text.starts_with("news item"));
        }
        // At exactly the threshold nothing is dropped.
        CHECK(remove_commercials(files, {}, 50).front().size() == 10);
    }

    TEST_CASE("monotonicity: a superset blocklist never keeps more cues") {
        std::mt19937_64 rng(5);
        const std::vector<std::string> vocab = {"buy", "now", "senate", "police", "vote", "call", "deal", "today"};
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<SrtCue> cues;
            for (int i = 0; i < 20; ++i) {
                cues.push_back(cue(i + 1, vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()]));
            }
            std::vector<std::string> small = {vocab[rng() % vocab.size()]};
            auto big = small;
            big.push_back(vocab[rng() % vocab.size()]);
            CHECK(remove_commercials(cues, big).size() <= remove_commercials(cues, small).size());
        }
    }
}

TEST_SUITE("turns") {
    const Date day{2015, 3, 4};

    TEST_CASE("single keyword match") {
        const auto turns = extract_turns({cue(1, "racism is discussed")}, "cnn", day, kw());
        REQUIRE(turns.size() == 1);
        CHECK(turns[0].keywords == std::vector<int>{id_of("racism")});
        CHECK(turns[0].word_count == 3);
        CHECK(turns[0].source == "cnn");
        CHECK(turns[0].turn_id == "cnn/2015-03-04/srt#1");
    }

    TEST_CASE("no match yields no turns") { CHECK(extract_turns({cue(1, "the weather today")}, "cnn", day, kw()).empty()); }

    TEST_CASE("speaker markers merge and split cues") {
        const std::vector<SrtCue> cues = {cue(1, ">> A talks about police", 0, 1000), cue(2, "and immigration", 1500, 2000),
                                          cue(3, ">> B replies", 2500, 3000)};
        const auto all = segment_turns(cues, "cnn", day, kw());
        REQUIRE(all.size() == 2);
        CHECK(all[0].text == "a talks about police and immigration");
        CHECK(all[0].keywords == std::vector<int>{id_of("police"), id_of("immigration")});
        CHECK(all[1].text == "b replies");
        CHECK(all[1].keywords.empty());
        const auto matched = extract_turns(cues, "cnn", day, kw());
        REQUIRE(matched.size() == 1);
        CHECK(matched[0] == all[0]);
    }

    TEST_CASE("a long silence starts a new turn") {
        const std::vector<SrtCue> cues = {cue(1, "police said", 0, 1000), cue(2, "more police news", 6001, 7000),
                                          cue(3, "still police", 7100, 8000)};
        const auto turns = extract_turns(cues, "foxnews", day, kw());
        REQUIRE(turns.size() == 2);
        CHECK(turns[0].text == "police said");
        CHECK(turns[1].text == "more police news still police");
        TurnOptions loose;
        loose.max_gap_ms = 10000;
        CHECK(extract_turns(cues, "foxnews", day, kw(), loose).size() == 1);
    }

    TEST_CASE("keyword matching respects word boundaries and spoken forms") {
        CHECK(matched_keyword_ids("antiracism rally", kw()).empty());
        CHECK(matched_keyword_ids("policemen", kw()).empty());
        CHECK(matched_keyword_ids(normalize_text("#BlackLivesMatter trends"), kw()) == std::vector<int>{id_of("blacklivesmatter")});
        CHECK(matched_keyword_ids(normalize_text("Black   Lives\tMatter"), kw()) == std::vector<int>{id_of("blacklivesmatter")});
        CHECK(matched_keyword_ids("on climate change and global warming.", kw()) ==
              std::vector<int>{id_of("climate-change"), id_of("global-warming")});
        const auto hits = find_keyword_hits("the health care debate", kw());
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].first_token == 1);
        CHECK(hits[0].token_count == 2);
    }

    TEST_CASE("every emitted turn contains a surface form on word boundaries") {
        std::mt19937_64 rng(17);
        const std::vector<std::string> vocab = {"police", "policy", "racist", "racism's", "immigrants", "climate",
                                                "change", ">>", "health", "care", "x", "blacklivesmatter,"};
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<SrtCue> cues;
            for (int i = 0; i < 8; ++i) {
                std::string text;
                for (int w = 0; w < 5; ++w) text += vocab[rng() % vocab.size()] + " ";
                cues.push_back(cue(i + 1, text, i * 1000, i * 1000 + 900));
            }
            for (const auto& t : extract_turns(cues, "cnn", day, kw())) {
                bool found = false;
                for (const auto& k : kw()) {
                    for (const auto& form : k.surface_forms) {
                        found = found || std::regex_search(t.text, std::regex("(^|[^a-z0-9])" + form + "([^a-z0-9]|$)"));
                    }
                }
                CHECK(found);
                CHECK(t.word_count == split_tokens(t.text).size());
            }
        }
    }

    TEST_CASE("extraction is deterministic") {
        const std::vector<SrtCue> cues = {cue(1, ">> police and racism"), cue(2, ">> health care costs")};
        std::ostringstream a, b;
        write_turns(a, extract_turns(cues, "cnn", day, kw()), kw());
        write_turns(b, extract_turns(cues, "cnn", day, kw()), kw());
        CHECK(a.str() == b.str());
    }
}

TEST_SUITE("tweets") {
    TEST_CASE("direct mapping") {
        std::istringstream in(R"({"text":"Climate change is real","created_at":"2018-04-01","target":"@CNN","id":"1"})");
        const auto r = ingest_tweets(in, kw());
        REQUIRE(r.turns.size() == 1);
        CHECK(r.turns[0].source == "twitter@cnn");
        CHECK(r.turns[0].keywords == std::vector<int>{id_of("climate-change")});
        CHECK(r.turns[0].date == Date{2018, 4, 1});
    }

    TEST_CASE("records without a keyword are dropped; malformed ones counted") {
        std::istringstream in(
            "{\"text\":\"nice weather\",\"created_at\":\"2018-04-01\",\"target\":\"@FoxNews\",\"id\":\"2\"}\n"
            "{\"text\":\"police\",\"created_at\":\"2018-04-01\",\"id\":\"3\"}\n"
            "not json\n"
            "{\"text\":\"police\",\"created_at\":\"2018-04-01T10:00:00Z\",\"target\":\"@MSNBC\",\"id\":\"4\"}\n"
            "{\"text\":\"police\",\"created_at\":\"2009-12-31\",\"target\":\"@foxnews\",\"id\":\"5\"}\n"
            "{\"text\":\"police\",\"created_at\":\"2019-12-31T23:59:59Z\",\"target\":\"@foxnews\",\"id\":\"6\"}\n");
        const auto r = ingest_tweets(in, kw());
        CHECK(r.records == 6);
        CHECK(r.dropped_no_keyword == 1);
        CHECK(r.skipped_malformed == 2);
        CHECK(r.skipped_target == 1);
        CHECK(r.skipped_date == 1);
        REQUIRE(r.turns.size() == 1);
        CHECK(r.turns[0].source == "twitter@foxnews");
        CHECK(r.turns[0].turn_id == "tweet/6");
    }

    TEST_CASE("per-keyword tallies equal the fixture construction") {
        // 100 records: record i mentions keyword (i % 9) + 1; every 10th has no keyword.
        std::ostringstream dump;
        std::map<std::pair<std::string, int>, VolumeTally> expected;
        for (int i = 0; i < 100; ++i) {
            const std::string target = i % 2 ? "@CNN" : "@FoxNews";
            std::string text = "word word";
            if (i % 10 != 0) {
                const auto& k = kw()[static_cast<std::size_t>(i % 9)];
                text += " " + k.surface_forms.front();
                auto& tally = expected[{tweet_source_for(target), k.id}];
                ++tally.records;
                tally.words += 2 + split_tokens(k.surface_forms.front()).size();
            }
            dump << R"({"id":")" << i << R"(","text":")" << text << R"(","created_at":"2016-01-0)" << (1 + i % 9)
                 << R"(","target":")" << target << "\"}\n";
        }
        std::istringstream in(dump.str());
        const auto r = ingest_tweets(in, kw());
        CHECK(r.turns.size() == 90);
        CHECK(r.dropped_no_keyword == 10);
        REQUIRE(r.tallies.size() == expected.size());
        for (const auto& [key, tally] : expected) {
            CHECK(r.tallies.at(key).records == tally.records);
            CHECK(r.tallies.at(key).words == tally.words);
        }
    }
}

TEST_CASE("turn store round trip") {
    const std::vector<SrtCue> cues = {cue(1, ">> police and racism"), cue(2, ">> health care, \"quoted\" costs")};
    const auto turns = extract_turns(cues, "cnn", {2020, 1, 2}, kw(), {}, "file-a");
    std::stringstream io;
    write_turns(io, turns, kw());
    CHECK(read_turns(io, kw()) == turns);

    std::istringstream bad(R"({"turn_id":"x","source":"cnn","date":"2020-01-01","text":"t","keywords":["nope"],"word_count":1})");
    CHECK_THROWS_AS(read_turns(bad, kw()), Error);
}

TEST_CASE("default keyword table") {
    CHECK(kw().size() == 9);
    CHECK(topics_of(kw()).size() == 6);
    CHECK_NOTHROW(validate_keywords(kw()));
    auto broken = kw();
    broken[1].id = broken[0].id;
    CHECK_THROWS_AS(validate_keywords(broken), Error);
}
