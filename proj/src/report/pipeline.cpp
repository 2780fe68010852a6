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
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "sempol/error.hpp"
#include "sempol/pipeline.hpp"
#include "sempol/polarity.hpp"
#include "sempol/store.hpp"

namespace sempol {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTurnsFile = "turns.jsonl";
constexpr const char* kMonthlySeries = "series_monthly.csv";

std::string write_output(const RunConfig& config, const std::string& rel, const std::string& content) {
    const auto path = config.output_dir / rel;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
    return rel;
}

std::string manifest_name(const RunConfig& config, const fs::path& path) {
    const auto rel = path.lexically_relative(config.output_dir);
    if (rel.empty() || *rel.begin() == "..") return path.string();
    return rel.generic_string();
}

void finish(const RunConfig& config, CommandResult& result) {
    update_manifest(config, result.outputs);
    for (const auto& w : result.warnings) result.summary += "warning: " + w + "\n";
}

void absorb(CommandResult& into, CommandResult&& from) {
    into.summary += from.summary;
    into.warnings.insert(into.warnings.end(), from.warnings.begin(), from.warnings.end());
    for (auto& o : from.outputs) {
        if (std::find(into.outputs.begin(), into.outputs.end(), o) == into.outputs.end()) into.outputs.push_back(o);
    }
}

std::vector<SpeakerTurn> load_turns(const RunConfig& config) {
    const auto path = config.output_dir / kTurnsFile;
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Data, "no turn store at '" + path.string() + "'; run the ingest command first");
    return read_turns(in, config.keywords);
}

const KeywordSpec& keyword_by_id(const RunConfig& config, int id) {
    const auto* k = find_keyword(config.keywords, id);
    if (!k) fail(ErrorCode::Format, "keyword id " + std::to_string(id) + " is not configured");
    return *k;
}

// ---------------------------------------------------------------------------
// Ingest

struct SrtFile {
    std::string source;
    Date date;
    fs::path path;
};

struct IngestCounters {
    std::size_t files = 0, unreadable = 0, undated = 0, out_of_window = 0, invalid_utf8 = 0;
    std::size_t cues = 0, skipped_cues = 0, replaced_bytes = 0, blocklisted = 0, duplicates = 0;
    std::size_t turns_total = 0, turns_matched = 0;
};

struct Volume {
    std::size_t all_turns = 0, all_words = 0, turns = 0, words = 0;
    bool tv = false;
};

bool has_srt_extension(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".srt";
}

}  // namespace

CommandResult cmd_ingest(const RunConfig& config) {
    CommandResult result;
    IngestCounters counters;
    const std::regex date_re(config.date_pattern);

    std::vector<SrtFile> files;
    for (const auto& spec : config.tv_sources) {
        if (!fs::exists(spec.path)) {
            fail(ErrorCode::Io, "corpus path '" + spec.path.string() + "' for source '" + spec.source + "' does not exist");
        }
        std::vector<fs::path> found;
        if (fs::is_regular_file(spec.path)) {
            found.push_back(spec.path);
        } else {
            for (const auto& entry : fs::recursive_directory_iterator(spec.path)) {
                // dangling links are kept so they surface as unreadable files
                if ((entry.is_regular_file() || entry.is_symlink()) && has_srt_extension(entry.path())) {
                    found.push_back(entry.path());
                }
            }
        }
        std::sort(found.begin(), found.end());
        if (found.empty()) result.warnings.push_back("no .srt files under '" + spec.path.string() + "'");
        for (const auto& p : found) {
            ++counters.files;
            std::smatch m;
            const auto name = p.filename().string();
            Date date;
            if (!std::regex_search(name, m, date_re) ||
                !parse_iso_date(m[1].str() + "-" + m[2].str() + "-" + m[3].str(), date)) {
                ++counters.undated;
                continue;
            }
            if (!config.window.contains(date.year)) {
                ++counters.out_of_window;
                continue;
            }
            files.push_back({spec.source, date, p});
        }
    }
    std::sort(files.begin(), files.end(), [](const SrtFile& l, const SrtFile& r) {
        return std::tie(l.date, l.source, l.path) < std::tie(r.date, r.source, r.path);
    });

    std::vector<SpeakerTurn> turns;
    std::map<std::pair<std::string, int>, Volume> volume;
    SrtParseOptions parse_options;
    parse_options.lossy_utf8 = config.lossy_utf8;
    const TurnOptions turn_options{config.max_gap_ms};

    // One daily set per (source, date): commercials repeat within a channel's day.
    for (std::size_t begin = 0; begin < files.size();) {
        std::size_t end = begin;
        while (end < files.size() && files[end].source == files[begin].source && files[end].date == files[begin].date) {
            ++end;
        }
        std::vector<std::vector<SrtCue>> daily;
        std::vector<const SrtFile*> daily_files;
        for (std::size_t i = begin; i < end; ++i) {
            std::ifstream in(files[i].path, std::ios::binary);
            std::string bytes;
            if (in) bytes.assign(std::istreambuf_iterator<char>(in), {});
            if (!in.is_open() || in.bad()) {
                ++counters.unreadable;
                result.warnings.push_back("unreadable file skipped: " + files[i].path.string());
                continue;
            }
            try {
                auto parsed = parse_srt(bytes, parse_options);
                counters.cues += parsed.cues.size();
                counters.skipped_cues += parsed.skipped;
                counters.replaced_bytes += parsed.replaced_bytes;
                daily.push_back(std::move(parsed.cues));
                daily_files.push_back(&files[i]);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Format) throw;
                ++counters.invalid_utf8;
                result.warnings.push_back(files[i].path.string() + ": " + e.what());
            }
        }
        CommercialStats stats;
        const auto filtered = remove_commercials(daily, config.blocklist, config.duplicate_threshold, &stats);
        counters.blocklisted += stats.blocklisted;
        counters.duplicates += stats.duplicates;
        for (std::size_t f = 0; f < filtered.size(); ++f) {
            const auto& file = *daily_files[f];
            const auto all = segment_turns(filtered[f], file.source, file.date, config.keywords, turn_options,
                                           file.path.stem().string());
            auto& vol = volume[{file.source, file.date.year}];
            vol.tv = true;
            for (const auto& t : all) {
                ++counters.turns_total;
                ++vol.all_turns;
                vol.all_words += t.word_count;
                if (t.keywords.empty()) continue;
                ++counters.turns_matched;
                ++vol.turns;
                vol.words += t.word_count;
                turns.push_back(t);
            }
        }
        begin = end;
    }

    json tweet_diag = json::array();
    TweetIngestOptions tweet_options;
    tweet_options.window = config.window;
    tweet_options.targets = config.tweet_targets;
    std::vector<SpeakerTurn> tweets;
    for (const auto& path : config.tweet_files) {
        std::ifstream in(path);
        if (!in) fail(ErrorCode::Io, "tweet dump '" + path.string() + "' cannot be read");
        auto r = ingest_tweets(in, config.keywords, tweet_options);
        tweet_diag.push_back({{"file", path.string()},
                              {"records", r.records},
                              {"skipped_malformed", r.skipped_malformed},
                              {"skipped_target", r.skipped_target},
                              {"skipped_date", r.skipped_date},
                              {"dropped_no_keyword", r.dropped_no_keyword},
                              {"turns", r.turns.size()}});
        for (auto& t : r.turns) {
            auto& vol = volume[{t.source, t.date.year}];
            ++vol.turns;
            vol.words += t.word_count;
            tweets.push_back(std::move(t));
        }
    }
    std::stable_sort(tweets.begin(), tweets.end(),
                     [](const SpeakerTurn& l, const SpeakerTurn& r) { return l.date < r.date; });
    turns.insert(turns.end(), std::make_move_iterator(tweets.begin()), std::make_move_iterator(tweets.end()));
    std::stable_sort(turns.begin(), turns.end(),
                     [](const SpeakerTurn& l, const SpeakerTurn& r) { return l.date < r.date; });

    std::ostringstream turns_out;
    write_turns(turns_out, turns, config.keywords);
    result.outputs.push_back(write_output(config, kTurnsFile, turns_out.str()));

    std::map<std::pair<std::string, int>, VolumeTally> per_keyword;
    for (const auto& t : turns) {
        for (int id : t.keywords) {
            auto& tally = per_keyword[{t.source, id}];
            ++tally.records;
            tally.words += t.word_count;
        }
    }
    std::ostringstream counts;
    counts << "source,keyword,turns,words,mean_words\n";
    for (const auto& [key, tally] : per_keyword) {
        counts << key.first << ',' << keyword_by_id(config, key.second).name << ',' << tally.records << ','
               << tally.words << ',' << format_number(tally.mean_words()) << '\n';
    }
    result.outputs.push_back(write_output(config, "ingest_counts.csv", counts.str()));

    std::ostringstream vol_out;
    vol_out << "source,year,caption_turns,caption_words,keyword_turns,keyword_words\n";
    for (const auto& [key, v] : volume) {
        vol_out << key.first << ',' << key.second << ',';
        if (v.tv) {
            vol_out << v.all_turns << ',' << v.all_words;
        } else {
            vol_out << ',';
        }
        vol_out << ',' << v.turns << ',' << v.words << '\n';
    }
    result.outputs.push_back(write_output(config, "volume.csv", vol_out.str()));

    const json diag = {{"srt",
                        {{"files", counters.files},
                         {"unreadable", counters.unreadable},
                         {"undated", counters.undated},
                         {"out_of_window", counters.out_of_window},
                         {"invalid_utf8", counters.invalid_utf8},
                         {"cues", counters.cues},
                         {"skipped_cues", counters.skipped_cues},
                         {"replaced_bytes", counters.replaced_bytes},
                         {"blocklisted_cues", counters.blocklisted},
                         {"duplicate_cues", counters.duplicates},
                         {"turns", counters.turns_total},
                         {"keyword_turns", counters.turns_matched}}},
                       {"tweets", tweet_diag},
                       {"warnings", result.warnings}};
    result.outputs.push_back(write_output(config, "ingest_diagnostics.json", diag.dump(2) + "\n"));

    if (counters.files == 0 && config.tweet_files.empty()) result.warnings.push_back("no input files; counts are zero");
    result.summary += fmt::format("ingest: {} SRT files, {} cues ({} malformed), {} turns, {} with keywords\n",
                                  counters.files, counters.cues, counters.skipped_cues, counters.turns_total,
                                  counters.turns_matched);
    result.summary += fmt::format("ingest: {} tweet turns; {} turns written to {}\n", tweets.size(), turns.size(),
                                  (config.output_dir / kTurnsFile).string());
    for (const auto& [key, tally] : per_keyword) {
        result.summary += fmt::format("  {:<18} {:<18} {:>8} turns\n", key.first,
                                      keyword_by_id(config, key.second).name, tally.records);
    }
    finish(config, result);
    return result;
}

// ---------------------------------------------------------------------------
// Embedding

CommandResult cmd_embed_toy(const RunConfig& config) {
    CommandResult result;
    const auto turns = load_turns(config);
    std::set<std::string> source_set;
    for (const auto& t : turns) source_set.insert(t.source);
    const ToyEmbedder embedder(config.toy_dim, config.toy_window);
    json meta = {{"provider", embedder.describe()}};
    json names = json::array();
    for (const auto& k : config.keywords) names.push_back(k.name);
    meta["keywords"] = names;
    fs::create_directories(config.store_path.parent_path());
    EmbedStats stats;
    {
        StoreWriter writer(config.store_path, config.toy_dim, {source_set.begin(), source_set.end()}, meta);
        stats = embed_turns(turns, config.keywords, embedder, config.window, writer);
        writer.finish();
    }
    result.outputs.push_back(manifest_name(config, config.store_path));
    const json diag = {{"turns", stats.turns},
                       {"records", stats.records},
                       {"repeated_occurrences", stats.repeated_occurrences},
                       {"skipped_out_of_window", stats.skipped_out_of_window}};
    result.outputs.push_back(write_output(config, "embed_diagnostics.json", diag.dump(2) + "\n"));
    result.summary += fmt::format(
        "embed-toy: {} records (d = {}, window = {}) from {} turns; {} repeated in-turn occurrences -> {}\n",
        stats.records, config.toy_dim, config.toy_window, stats.turns, stats.repeated_occurrences,
        config.store_path.string());
    finish(config, result);
    return result;
}

// ---------------------------------------------------------------------------
// Polarization

CommandResult cmd_polarize(const RunConfig& config) {
    CommandResult result;
    if (!fs::exists(config.store_path)) {
        if (!config.toy_embedder) {
            fail(ErrorCode::Data, "no embedding store at '" + config.store_path.string() +
                                      "'; run the embed-toy command, pass --toy-embedder, or set embedding.store");
        }
        absorb(result, cmd_embed_toy(config));
    }
    const auto store = EmbeddingStore::open(config.store_path);

    json filled = json::object();
    std::ostringstream ranges;
    ranges << "keyword,pair,granularity,min,argmin,max,argmax\n";
    std::map<int, std::vector<SPSeries>> chart_series;
    std::size_t built = 0;
    auto has_keyword = [&](const std::string& source, int id) {
        const auto ids = store.keywords_for(source);
        return std::find(ids.begin(), ids.end(), id) != ids.end();
    };

    for (const auto g : config.granularities) {
        std::vector<SPSeries> all;
        for (const auto& k : config.keywords) {
            for (const auto* pair : {&config.tv_pair, &config.social_pair}) {
                if (!has_keyword(pair->a, k.id) || !has_keyword(pair->b, k.id)) {
                    if (g == config.granularities.front()) {
                        result.warnings.push_back("keyword " + k.name + ": no vectors for both sides of " +
                                                  pair->label() + "; series skipped");
                    }
                    continue;
                }
                try {
                    all.push_back(build_series(store, k.id, *pair, g, config.window));
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::Data) throw;
                    if (g == config.granularities.front()) {
                        result.warnings.push_back("keyword " + k.name + ": " + e.what());
                    }
                }
            }
        }
        for (const auto& s : all) {
            const auto& name = keyword_by_id(config, s.keyword_id).name;
            std::size_t lo = 0, hi = 0;
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                if (s.points[i].value < s.points[lo].value) lo = i;
                if (s.points[i].value > s.points[hi].value) hi = i;
            }
            ranges << name << ',' << s.pair.label() << ',' << to_string(g) << ','
                   << format_number(s.points[lo].value) << ',' << s.points[lo].bucket.to_string() << ','
                   << format_number(s.points[hi].value) << ',' << s.points[hi].bucket.to_string() << '\n';
            json buckets = json::array();
            for (const auto& b : s.filled_buckets()) buckets.push_back(b.to_string());
            if (!buckets.empty()) filled[name + " " + s.pair.label() + " " + to_string(g)] = buckets;
            if (g == config.granularities.front()) chart_series[s.keyword_id].push_back(s);
        }
        built += all.size();
        std::ostringstream csv;
        write_series_csv(csv, all, config.keywords);
        result.outputs.push_back(write_output(config, std::string("series_") + to_string(g) + ".csv", csv.str()));
    }
    if (built == 0) fail(ErrorCode::Data, "no keyword has embeddings on both sides of any configured pair");

    for (const auto& [id, series] : chart_series) {
        const auto& name = keyword_by_id(config, id).name;
        std::vector<std::string> labels;
        for (const auto& p : series.front().points) labels.push_back(p.bucket.to_string());
        std::vector<ChartSeries> lines;
        for (const auto& s : series) lines.push_back({s.pair.label(), s.values()});
        const auto title = "Semantic polarization: " + name + " (" + to_string(series.front().granularity) + ")";
        result.outputs.push_back(write_output(config, "charts/sp_" + name + ".svg", line_chart_svg(title, labels, lines)));
    }
    result.outputs.push_back(write_output(config, "sp_range.csv", ranges.str()));
    const json diag = {{"filled_buckets", filled}, {"warnings", result.warnings}};
    result.outputs.push_back(write_output(config, "polarize_diagnostics.json", diag.dump(2) + "\n"));
    result.summary += fmt::format("polarize: {} series over {}-{} from {} records\n", built, config.window.first,
                                  config.window.last, store.size());
    if (!filled.empty()) {
        result.summary += fmt::format("polarize: {} series contain interpolated buckets (see polarize_diagnostics.json)\n",
                                      filled.size());
    }
    finish(config, result);
    return result;
}

// ---------------------------------------------------------------------------
// Granger

namespace {

struct KeywordHypotheses {
    int keyword_id = 0;
    HypothesisReport report;
};

struct GrangerRun {
    CommandResult result;
    std::vector<KeywordHypotheses> keywords;
};

std::string lag_cell(const std::optional<int>& lag) { return lag ? std::to_string(*lag) : std::string(); }

GrangerRun run_granger(const RunConfig& config) {
    GrangerRun run;
    auto& result = run.result;
    const auto path = config.output_dir / kMonthlySeries;
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Data, "no monthly series at '" + path.string() +
                                  "'; run the polarize command with the monthly granularity enabled");
    }
    const auto series = read_series_csv(in, config.keywords);

    HypothesisOptions options = config.hypotheses;
    options.tv_label = "tv";
    options.social_label = "twitter";
    std::vector<std::string> errors;
    for (const auto& k : config.keywords) {
        const SPSeries* tv = nullptr;
        const SPSeries* social = nullptr;
        for (const auto& s : series) {
            if (s.keyword_id != k.id) continue;
            if (s.pair.label() == config.tv_pair.label()) tv = &s;
            if (s.pair.label() == config.social_pair.label()) social = &s;
        }
        if (!tv || !social) {
            result.warnings.push_back("keyword " + k.name + ": no " + (!tv ? "tv" : "twitter") +
                                      " series; Granger tests skipped");
            continue;
        }
        try {
            run.keywords.push_back({k.id, run_hypotheses(tv->values(), social->values(), options)});
        } catch (const Error& e) {
            errors.push_back("keyword " + k.name + ": " + e.what());
        }
    }
    if (run.keywords.empty()) {
        std::string message = "no keyword could be tested";
        for (const auto& w : result.warnings) message += "; " + w;
        for (const auto& e : errors) message += "; " + e;
        fail(ErrorCode::Data, message);
    }
    result.warnings.insert(result.warnings.end(), errors.begin(), errors.end());

    std::ostringstream granger, adf, summary;
    granger << "keyword,direction,lag,f_value,p_value,significant\n";
    adf << "keyword,series,statistic,crit_1pct,crit_5pct,crit_10pct,lags,n,conclusion\n";
    summary << "keyword,h1_min_lag,h2_min_lag,tv_differenced,twitter_differenced,n\n";
    auto adf_row = [&](const std::string& keyword, const std::string& label, const AdfResult& r) {
        adf << keyword << ',' << label << ',' << format_number(r.statistic) << ',' << format_number(r.crit_1pct) << ','
            << format_number(r.crit_5pct) << ',' << format_number(r.crit_10pct) << ',' << r.lags_used << ',' << r.n
            << ',' << r.conclusion() << '\n';
    };
    for (const auto& [id, report] : run.keywords) {
        const auto& name = keyword_by_id(config, id).name;
        for (const auto* list : {&report.h1, &report.h2}) {
            for (const auto& g : *list) {
                granger << name << ',' << g.direction << ',' << g.lag << ',' << format_number(g.f_value) << ','
                        << format_number(g.p_value) << ',' << (g.significant(options.alpha) ? 1 : 0) << '\n';
            }
        }
        adf_row(name, "tv", report.tv.adf);
        if (report.tv.adf_diff) adf_row(name, "diff(tv)", *report.tv.adf_diff);
        adf_row(name, "twitter", report.social.adf);
        if (report.social.adf_diff) adf_row(name, "diff(twitter)", *report.social.adf_diff);
        summary << name << ',' << lag_cell(report.h1_min_lag) << ',' << lag_cell(report.h2_min_lag) << ','
                << (report.tv.differenced() ? 1 : 0) << ',' << (report.social.differenced() ? 1 : 0) << ','
                << report.aligned_length << '\n';
        result.summary += fmt::format("  {:<18} H1 tv->twitter min lag {:>2}   H2 twitter->tv min lag {:>2}\n", name,
                                      report.h1_min_lag ? std::to_string(*report.h1_min_lag) : "-",
                                      report.h2_min_lag ? std::to_string(*report.h2_min_lag) : "-");
    }
    result.outputs.push_back(write_output(config, "granger.csv", granger.str()));
    result.outputs.push_back(write_output(config, "adf.csv", adf.str()));
    result.outputs.push_back(write_output(config, "granger_summary.csv", summary.str()));
    result.summary = fmt::format("granger: {} keywords, lags {}-{}, alpha {} (p-values uncorrected across lags)\n",
                                 run.keywords.size(), options.min_lag, options.max_lag,
                                 format_number(options.alpha)) +
                     result.summary;
    return run;
}

std::vector<KeywordSpec> topic_keywords(const RunConfig& config, const std::string& topic) {
    std::vector<KeywordSpec> out;
    for (const auto& k : config.keywords) {
        if (k.topic == topic) out.push_back(k);
    }
    if (out.empty()) {
        std::string valid;
        for (const auto& t : topics_of(config.keywords)) valid += (valid.empty() ? "" : ", ") + t;
        fail(ErrorCode::InvalidArgument, "unknown topic '" + topic + "'; valid topics: " + valid);
    }
    return out;
}

struct CorpusRun {
    std::string corpus;
    AttributionReport report;
    TrainResult trained;
    std::size_t turns_a = 0, turns_b = 0;
};

CorpusRun attribute_corpus(const RunConfig& config, const std::string& corpus, const SourcePair& pair,
                           const std::vector<SpeakerTurn>& turns, const std::vector<KeywordSpec>& keywords,
                           std::optional<int> lag, const TokenEncoder& encoder) {
    CorpusRun run;
    run.corpus = corpus;
    std::vector<SpeakerTurn> a, b;
    for (const auto& t : turns) {
        if (t.source == pair.a) a.push_back(t);
        if (t.source == pair.b) b.push_back(t);
    }
    run.turns_a = a.size();
    run.turns_b = b.size();
    const auto where = "topic " + keywords.front().topic + ", " + corpus + " corpus (" + pair.label() + ")";
    try {
        run.trained = train_classifier(a, b, encoder, config.training);
        run.report = token_attributions(run.trained.model, encoder, a, b, keywords, config.attribution);
    } catch (const Error& e) {
        throw Error(e.code(), where + ": " + e.what());
    }
    run.report.class_a = pair.a;
    run.report.class_b = pair.b;
    run.report.lag = lag;
    return run;
}

}  // namespace

CommandResult cmd_granger(const RunConfig& config) {
    auto run = run_granger(config);
    finish(config, run.result);
    return std::move(run.result);
}

// ---------------------------------------------------------------------------
// Attribution

LeadDirection parse_direction(const std::string& text) {
    if (text == "tv-leads") return LeadDirection::TvLeads;
    if (text == "twitter-leads") return LeadDirection::TwitterLeads;
    fail(ErrorCode::InvalidArgument, "direction must be tv-leads or twitter-leads, got '" + text + "'");
}

const char* to_string(LeadDirection direction) {
    return direction == LeadDirection::TvLeads ? "tv-leads" : "twitter-leads";
}

CommandResult cmd_attribute(const RunConfig& config, const std::string& topic, std::optional<int> lag,
                            LeadDirection direction) {
    CommandResult result;
    const auto keywords = topic_keywords(config, topic);
    if (lag) (void)lag_window(*lag, LagSide::A, direction, config.max_token_lag);
    std::set<int> ids;
    for (const auto& k : keywords) ids.insert(k.id);

    std::vector<SpeakerTurn> topical;
    for (auto& t : load_turns(config)) {
        if (!config.window.contains(t.date.year)) continue;
        if (std::any_of(t.keywords.begin(), t.keywords.end(), [&](int id) { return ids.contains(id); })) {
            topical.push_back(std::move(t));
        }
    }
    const ToyTokenEncoder encoder(config.encoder_dim, config.encoder_window);

    std::vector<CorpusRun> runs;
    std::string stem = "attribution_" + topic;
    if (!lag) {
        std::vector<SpeakerTurn> year;
        for (const auto& t : topical) {
            if (t.date.year == config.attribution_year) year.push_back(t);
        }
        runs.push_back(attribute_corpus(config, "tv", config.tv_pair, year, keywords, lag, encoder));
    } else {
        stem += fmt::format("_lag{}_{}", *lag, to_string(direction));
        const auto tv = lag_split(topical, *lag, LagSide::A, direction, config.max_token_lag);
        const auto social = lag_split(topical, *lag, LagSide::B, direction, config.max_token_lag);
        runs.push_back(attribute_corpus(config, "tv", config.tv_pair, tv.kept, keywords, lag, encoder));
        runs.push_back(attribute_corpus(config, "twitter", config.social_pair, social.kept, keywords, lag, encoder));
    }

    std::vector<AttributionReport> reports;
    std::ostringstream md, metrics;
    metrics << "corpus,class_a,class_b,turns_a,turns_b,accuracy,precision,recall,f1,support,epochs\n";
    md << "## Token attributions: " << topic;
    if (lag) md << ", lag " << *lag << " (" << to_string(direction) << ")";
    md << "\n\n";
    md << (lag ? fmt::format("Turns from all years {}-{}; month windows per corpus below.\n\n", config.window.first,
                             config.window.last)
               : fmt::format("TV turns from {}.\n\n", config.attribution_year));
    md << "| corpus | classes | turns | accuracy | precision | recall | f1 |\n|---|---|---:|---:|---:|---:|---:|\n";
    for (const auto& r : runs) {
        const auto& m = r.trained.test;
        metrics << r.corpus << ',' << r.report.class_a << ',' << r.report.class_b << ',' << r.turns_a << ','
                << r.turns_b << ',' << format_number(m.accuracy) << ',' << format_number(m.precision) << ','
                << format_number(m.recall) << ',' << format_number(m.f1) << ',' << m.support << ','
                << r.trained.epochs << '\n';
        md << fmt::format("| {} | {} vs {} | {} / {} | {:.3f} | {:.3f} | {:.3f} | {:.3f} |\n", r.corpus,
                          r.report.class_a, r.report.class_b, r.turns_a, r.turns_b, m.accuracy, m.precision, m.recall,
                          m.f1);
    }
    md << '\n';
    for (auto& r : runs) {
        if (lag) {
            const auto months = lag_window(*lag, r.corpus == "tv" ? LagSide::A : LagSide::B, direction,
                                           config.max_token_lag);
            md << fmt::format("{} corpus: months {}-{} of each year.\n\n", r.corpus, months.first, months.last);
        }
        write_attribution_markdown(md, r.report);
        for (const auto& d : r.report.diagnostics) result.warnings.push_back(topic + " (" + r.corpus + "): " + d);
        result.summary += fmt::format("attribute: {} {} corpus: accuracy {:.3f}; top {}: {}; top {}: {}\n", topic,
                                      r.corpus, r.trained.test.accuracy, r.report.class_a,
                                      r.report.tokens_a.empty() ? "-" : r.report.tokens_a.front().token,
                                      r.report.class_b,
                                      r.report.tokens_b.empty() ? "-" : r.report.tokens_b.front().token);
        reports.push_back(r.report);
    }
    std::ostringstream csv;
    write_attribution_csv(csv, reports);
    result.outputs.push_back(write_output(config, "attribution/" + stem + ".csv", csv.str()));
    result.outputs.push_back(write_output(config, "attribution/" + stem + ".md", md.str()));
    result.outputs.push_back(write_output(config, "attribution/" + stem + "_metrics.csv", metrics.str()));
    finish(config, result);
    return result;
}

// ---------------------------------------------------------------------------

CommandResult cmd_report_all(const RunConfig& config) {
    CommandResult result;
    absorb(result, cmd_ingest(config));
    if (config.toy_embedder) {
        absorb(result, cmd_embed_toy(config));
    } else if (!fs::exists(config.store_path)) {
        fail(ErrorCode::Data, "no embedding store at '" + config.store_path.string() +
                                  "'; enable the toy embedder (--toy-embedder) or provide embedding.store");
    }
    absorb(result, cmd_polarize(config));
    auto granger = run_granger(config);
    absorb(result, std::move(granger.result));

    std::ostringstream report;
    report << "# Semantic polarization report\n\n";
    report << fmt::format("Window {}-{}; TV pair {}; social pair {}.\n\n", config.window.first, config.window.last,
                          config.tv_pair.label(), config.social_pair.label());
    report << "Files: `sp_range.csv`, `series_*.csv`, `charts/`, `adf.csv`, `granger.csv`, `attribution/`.\n\n";
    report << "## Granger summary (minimal significant lag, uncorrected)\n\n| keyword | H1 tv->twitter | H2 "
              "twitter->tv |\n|---|---:|---:|\n";
    for (const auto& [id, r] : granger.keywords) {
        report << "| " << keyword_by_id(config, id).name << " | " << (r.h1_min_lag ? std::to_string(*r.h1_min_lag) : "-")
               << " | " << (r.h2_min_lag ? std::to_string(*r.h2_min_lag) : "-") << " |\n";
    }
    report << "\n## Attribution runs\n\n";

    for (const auto& topic : topics_of(config.keywords)) {
        try {
            absorb(result, cmd_attribute(config, topic));
            report << "- `attribution/attribution_" << topic << ".md`\n";
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Data) throw;
            result.warnings.push_back(e.what());
            report << "- " << topic << ": skipped (" << e.what() << ")\n";
        }
        if (!config.auto_lags) continue;
        // Lag-split runs at the topic's smallest significant lag in each direction.
        std::optional<int> h1, h2;
        for (const auto& [id, r] : granger.keywords) {
            if (keyword_by_id(config, id).topic != topic) continue;
            if (r.h1_min_lag && *r.h1_min_lag <= config.max_token_lag) h1 = std::min(h1.value_or(99), *r.h1_min_lag);
            if (r.h2_min_lag && *r.h2_min_lag <= config.max_token_lag) h2 = std::min(h2.value_or(99), *r.h2_min_lag);
        }
        for (const auto& [lag, dir] : {std::pair{h1, LeadDirection::TvLeads}, std::pair{h2, LeadDirection::TwitterLeads}}) {
            if (!lag) continue;
            try {
                absorb(result, cmd_attribute(config, topic, lag, dir));
                report << fmt::format("- `attribution/attribution_{}_lag{}_{}.md`\n", topic, *lag, to_string(dir));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Data) throw;
                result.warnings.push_back(e.what());
                report << fmt::format("- {} lag {} {}: skipped ({})\n", topic, *lag, to_string(dir), e.what());
            }
        }
    }
    result.outputs.push_back(write_output(config, "report.md", report.str()));
    update_manifest(config, result.outputs);
    return result;
}

}  // namespace sempol
