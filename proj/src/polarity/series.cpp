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
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "sempol/error.hpp"
#include "sempol/polarity.hpp"

namespace sempol {

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    if (v == 0.0) return "0";
    return fmt::format("{:.10g}", v);
}

std::vector<double> SPSeries::values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.value);
    return out;
}

std::vector<Bucket> SPSeries::filled_buckets() const {
    std::vector<Bucket> out;
    for (const auto& p : points) {
        if (p.filled) out.push_back(p.bucket);
    }
    return out;
}

void interpolate_missing(std::vector<SPPoint>& points, const std::vector<bool>& defined) {
    const auto n = points.size();
    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < n; ++i) {
        if (defined[i]) known.push_back(i);
    }
    if (known.empty()) fail(ErrorCode::Data, "no bucket has vectors on both sides");
    std::size_t next = 0;  // first known index >= i
    for (std::size_t i = 0; i < n; ++i) {
        while (next < known.size() && known[next] < i) ++next;
        if (defined[i]) continue;
        points[i].filled = true;
        if (next == 0) {
            points[i].value = points[known.front()].value;
        } else if (next == known.size()) {
            points[i].value = points[known.back()].value;
        } else {
            const auto lo = known[next - 1];
            const auto hi = known[next];
            const double t = double(i - lo) / double(hi - lo);
            points[i].value = points[lo].value + t * (points[hi].value - points[lo].value);
        }
    }
}

SPSeries build_series(const EmbeddingStore& store, int keyword_id, const SourcePair& pair, Granularity granularity,
                      const YearWindow& window) {
    if (window.first > window.last) fail(ErrorCode::InvalidArgument, "empty analysis window");
    SPSeries series;
    series.keyword_id = keyword_id;
    series.pair = pair;
    series.granularity = granularity;

    const auto buckets = buckets_for(window, granularity);
    std::vector<bool> defined(buckets.size(), false);
    bool any_a = false;
    bool any_b = false;
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        SPPoint point;
        point.bucket = buckets[i];
        const auto a = store.query(pair.a, keyword_id, buckets[i]);
        const auto b = store.query(pair.b, keyword_id, buckets[i]);
        point.n1 = a ? a->size() : 0;
        point.n2 = b ? b->size() : 0;
        any_a = any_a || a;
        any_b = any_b || b;
        if (a && b) {
            point.value = sp_fast(a->view(), b->view()).value;
            defined[i] = true;
        }
        series.points.push_back(point);
    }
    const auto label = "keyword " + std::to_string(keyword_id) + " (" + pair.label() + ")";
    if (!any_a || !any_b) {
        fail(ErrorCode::Data, label + ": no vectors for '" + (!any_a ? pair.a : pair.b) + "' in the whole window");
    }
    if (std::none_of(defined.begin(), defined.end(), [](bool d) { return d; })) {
        fail(ErrorCode::Data, label + ": the two sources never share a bucket");
    }
    interpolate_missing(series.points, defined);
    return series;
}

void write_series_csv(std::ostream& out, const std::vector<SPSeries>& series,
                      const std::vector<KeywordSpec>& keywords) {
    out << "keyword,pair,granularity,bucket,value,n1,n2,filled\n";
    for (const auto& s : series) {
        const auto* k = find_keyword(keywords, s.keyword_id);
        const auto name = k ? k->name : std::to_string(s.keyword_id);
        for (const auto& p : s.points) {
            out << name << ',' << s.pair.label() << ',' << to_string(s.granularity) << ',' << p.bucket.to_string()
                << ',' << format_number(p.value) << ',' << p.n1 << ',' << p.n2 << ',' << (p.filled ? 1 : 0) << '\n';
        }
    }
}

std::vector<SPSeries> read_series_csv(std::istream& in, const std::vector<KeywordSpec>& keywords) {
    std::vector<SPSeries> out;
    std::string line;
    if (!std::getline(in, line) || line != "keyword,pair,granularity,bucket,value,n1,n2,filled") {
        fail(ErrorCode::Format, "series CSV: unexpected header");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        const auto where = "series CSV line " + std::to_string(line_no);
        if (cols.size() != 8) fail(ErrorCode::Format, where + ": expected 8 columns");
        const auto* k = find_keyword(keywords, cols[0]);
        if (!k) fail(ErrorCode::Format, where + ": unknown keyword '" + cols[0] + "'");
        const auto bar = cols[1].find('|');
        if (bar == std::string::npos) fail(ErrorCode::Format, where + ": bad pair");
        const SourcePair pair{cols[1].substr(0, bar), cols[1].substr(bar + 1)};
        const auto g = cols[2] == "yearly" ? Granularity::Yearly : Granularity::Monthly;
        if (cols[2] != "yearly" && cols[2] != "monthly") fail(ErrorCode::Format, where + ": bad granularity");

        SPPoint p;
        try {
            p.bucket.year = std::stoi(cols[3].substr(0, 4));
            p.bucket.month = cols[3].size() > 4 ? std::stoi(cols[3].substr(5)) : 0;
            p.value = std::stod(cols[4]);
            p.n1 = std::stoull(cols[5]);
            p.n2 = std::stoull(cols[6]);
        } catch (const std::exception&) {
            fail(ErrorCode::Format, where + ": bad number");
        }
        p.filled = cols[7] == "1";

        if (out.empty() || out.back().keyword_id != k->id || out.back().pair.label() != pair.label() ||
            out.back().granularity != g) {
            out.push_back({k->id, pair, g, {}});
        }
        out.back().points.push_back(p);
    }
    return out;
}

}  // namespace sempol
