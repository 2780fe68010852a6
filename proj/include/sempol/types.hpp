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

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace sempol {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    /// "YYYY-MM-DD"
    [[nodiscard]] std::string to_string() const;
};

/// Parses the leading "YYYY-MM-DD" of an ISO-8601 date or timestamp.
/// Returns false when the prefix is absent or out of calendar range.
bool parse_iso_date(const std::string& text, Date& out);

/// A yearly bucket has month == 0.
struct Bucket {
    int year = 0;
    int month = 0;

    auto operator<=>(const Bucket&) const = default;

    [[nodiscard]] bool yearly() const noexcept { return month == 0; }
    /// "2015" or "2015-03"
    [[nodiscard]] std::string to_string() const;
};

enum class Granularity { Yearly, Monthly };

const char* to_string(Granularity g);

/// Inclusive range of calendar years.
struct YearWindow {
    int first = 2010;
    int last = 2020;

    [[nodiscard]] bool contains(int year) const noexcept { return year >= first && year <= last; }
    [[nodiscard]] int years() const noexcept { return last - first + 1; }
};

/// All buckets of the window in increasing order.
std::vector<Bucket> buckets_for(const YearWindow& window, Granularity g);

struct SourcePair {
    std::string a;
    std::string b;

    [[nodiscard]] std::string label() const { return a + "|" + b; }
};

}  // namespace sempol
