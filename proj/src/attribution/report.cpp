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
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "sempol/attribution.hpp"
#include "sempol/error.hpp"
#include "sempol/polarity.hpp"

namespace sempol {

namespace {

// Positive and negative parts each summed in ascending magnitude: independent
// of input order, and negating every input negates the result exactly.
double symmetric_sum(std::vector<double>& values) {
    std::sort(values.begin(), values.end(), [](double l, double r) { return std::abs(l) < std::abs(r); });
    double pos = 0.0, neg = 0.0;
    for (double v : values) (v > 0 ? pos : neg) += v;
    return pos + neg;
}

}  // namespace

double percentile_of(std::vector<double> values, double p) {
    if (values.empty()) fail(ErrorCode::Data, "percentile of an empty set");
    if (p < 0.0 || p > 100.0) fail(ErrorCode::InvalidArgument, "percentile must lie in [0, 100]");
    std::sort(values.begin(), values.end());
    const double rank = p / 100.0 * double(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (rank - double(lo)) * (values[hi] - values[lo]);
}

AttributionReport token_attributions(const ReferenceClassifier& model, const TokenEncoder& encoder,
                                     const std::vector<SpeakerTurn>& corpus_a,
                                     const std::vector<SpeakerTurn>& corpus_b,
                                     const std::vector<KeywordSpec>& topic_keywords,
                                     const AttributionOptions& options) {
    if (corpus_a.empty() || corpus_b.empty()) fail(ErrorCode::Data, "attribution needs two nonempty corpora");
    if (options.k == 0) fail(ErrorCode::InvalidArgument, "k must be positive");

    AttributionReport report;
    report.frequency_percentile = options.percentile;
    report.keyword_excluded = true;
    if (!topic_keywords.empty()) report.topic = topic_keywords.front().topic;

    std::set<std::string, std::less<>> excluded;
    for (const auto& k : topic_keywords) {
        for (const auto& form : k.surface_forms) {
            for (auto word : split_tokens(form)) excluded.emplace(bare_token(word));
        }
    }

    std::map<std::string, std::vector<double>, std::less<>> occurrences;
    for (const auto* corpus : {&corpus_a, &corpus_b}) {
        for (const auto& turn : *corpus) {
            const auto encoded = encoder.encode(turn);
            if (encoded.tokens.empty()) continue;
            const Eigen::MatrixXd ig = integrated_gradients(model, encoded.vectors, options.steps);
            for (std::size_t t = 0; t < encoded.tokens.size(); ++t) {
                occurrences[encoded.tokens[t]].push_back(ig.row(static_cast<Eigen::Index>(t)).sum());
            }
        }
    }
    if (occurrences.empty()) fail(ErrorCode::Data, "no tokens in the attribution corpora");

    std::vector<double> counts;
    counts.reserve(occurrences.size());
    for (const auto& [token, scores] : occurrences) counts.push_back(double(scores.size()));
    report.frequency_threshold = percentile_of(counts, options.percentile);

    std::vector<TokenScore> positive, negative;
    for (auto& [token, scores] : occurrences) {
        if (double(scores.size()) <= report.frequency_threshold) continue;
        if (excluded.contains(token)) continue;
        const TokenScore ts{token, symmetric_sum(scores) / double(scores.size()), scores.size()};
        if (ts.score > 0) positive.push_back(ts);
        if (ts.score < 0) negative.push_back(ts);
    }
    std::sort(positive.begin(), positive.end(), [](const TokenScore& l, const TokenScore& r) {
        return l.score != r.score ? l.score > r.score : l.token < r.token;
    });
    std::sort(negative.begin(), negative.end(), [](const TokenScore& l, const TokenScore& r) {
        return l.score != r.score ? l.score < r.score : l.token < r.token;
    });
    if (positive.size() > options.k) positive.resize(options.k);
    if (negative.size() > options.k) negative.resize(options.k);
    report.tokens_a = std::move(positive);
    report.tokens_b = std::move(negative);

    if (report.tokens_a.size() < options.k || report.tokens_b.size() < options.k) {
        report.diagnostics.push_back("fewer than " + std::to_string(options.k) + " tokens per class: " +
                                     std::to_string(report.tokens_a.size()) + " positive, " +
                                     std::to_string(report.tokens_b.size()) + " negative above frequency " +
                                     format_number(report.frequency_threshold) + " (percentile " +
                                     format_number(options.percentile) + ")");
    }
    return report;
}

// ---------------------------------------------------------------------------

MonthRange lag_window(int lag, LagSide side, LeadDirection direction, int max_lag) {
    if (max_lag < 1 || max_lag > 11) fail(ErrorCode::InvalidArgument, "lag cap must lie in [1, 11]");
    if (lag < 1 || lag > max_lag) {
        fail(ErrorCode::InvalidArgument,
             "lag " + std::to_string(lag) + " outside [1, " + std::to_string(max_lag) + "]");
    }
    const bool early = (side == LagSide::A) == (direction == LeadDirection::TvLeads);
    return early ? MonthRange{1, 12 - lag} : MonthRange{1 + lag, 12};
}

LagSplit lag_split(const std::vector<SpeakerTurn>& turns, int lag, LagSide side, LeadDirection direction,
                   int max_lag) {
    LagSplit split;
    split.months = lag_window(lag, side, direction, max_lag);
    for (const auto& t : turns) {
        (split.months.contains(t.date.month) ? split.kept : split.dropped).push_back(t);
    }
    return split;
}

// ---------------------------------------------------------------------------

void write_attribution_csv(std::ostream& out, const std::vector<AttributionReport>& reports) {
    out << "token,attribution,class,topic,lag\n";
    for (const auto& r : reports) {
        const auto lag = r.lag ? std::to_string(*r.lag) : std::string();
        for (const auto& t : r.tokens_a) {
            out << t.token << ',' << format_number(t.score) << ',' << r.class_a << ',' << r.topic << ',' << lag << '\n';
        }
        for (const auto& t : r.tokens_b) {
            out << t.token << ',' << format_number(t.score) << ',' << r.class_b << ',' << r.topic << ',' << lag << '\n';
        }
    }
}

void write_attribution_markdown(std::ostream& out, const AttributionReport& r) {
    out << "### " << r.topic;
    if (r.lag) out << " (lag " << *r.lag << ")";
    out << "\n\n";
    out << "Tokens above the " << format_number(r.frequency_percentile) << "th frequency percentile (count > "
        << format_number(r.frequency_threshold) << "); topical keyword excluded; scores are mean IG per occurrence.\n\n";
    out << "| rank | " << r.class_a << " | attribution | " << r.class_b << " | attribution |\n";
    out << "|---:|---|---:|---|---:|\n";
    const auto rows = std::max(r.tokens_a.size(), r.tokens_b.size());
    for (std::size_t i = 0; i < rows; ++i) {
        out << "| " << i + 1 << " | ";
        if (i < r.tokens_a.size()) {
            out << r.tokens_a[i].token << " | " << format_number(r.tokens_a[i].score);
        } else {
            out << " | ";
        }
        out << " | ";
        if (i < r.tokens_b.size()) {
            out << r.tokens_b[i].token << " | " << format_number(r.tokens_b[i].score);
        } else {
            out << " | ";
        }
        out << " |\n";
    }
    for (const auto& d : r.diagnostics) out << "\n> " << d << '\n';
    out << '\n';
}

}  // namespace sempol
