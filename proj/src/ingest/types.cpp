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


#include "sempol/types.hpp"

#include <cctype>
#include <cstdio>

namespace sempol {

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

bool parse_iso_date(const std::string& text, Date& out) {
    if (text.size() < 10) return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    }
    if (text[4] != '-' || text[7] != '-') return false;
    Date d{std::stoi(text.substr(0, 4)), std::stoi(text.substr(5, 2)), std::stoi(text.substr(8, 2))};
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return false;
    out = d;
    return true;
}

std::string Bucket::to_string() const {
    char buf[16];
    if (yearly()) {
        std::snprintf(buf, sizeof(buf), "%04d", year);
    } else {
        std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    }
    return buf;
}

const char* to_string(Granularity g) { return g == Granularity::Yearly ? "yearly" : "monthly"; }

std::vector<Bucket> buckets_for(const YearWindow& window, Granularity g) {
    std::vector<Bucket> out;
    for (int y = window.first; y <= window.last; ++y) {
        if (g == Granularity::Yearly) {
            out.push_back({y, 0});
        } else {
            for (int m = 1; m <= 12; ++m) out.push_back({y, m});
        }
    }
    return out;
}

}  // namespace sempol
