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

#include <iosfwd>
#include <string>
#include <vector>

#include "sempol/keywords.hpp"
#include "sempol/store.hpp"
#include "sempol/types.hpp"

namespace sempol {

/// Mean cosine distance over all cross pairs of two vector sets, in [0, 2].
struct SPValue {
    double value = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

/// Exact double loop over all n1 * n2 pairs.
SPValue sp_bruteforce(VectorView<float> c, VectorView<float> f);
SPValue sp_bruteforce(VectorView<double> c, VectorView<double> f);

/// O(n1 + n2): the mean pairwise cosine equals the dot product of the sums of
/// the unit-normalized vectors divided by n1 * n2.
SPValue sp_fast(VectorView<float> c, VectorView<float> f);
SPValue sp_fast(VectorView<double> c, VectorView<double> f);

/// Streaming sum of unit-normalized vectors with pairwise (binary-counter)
/// accumulation in double precision.
class UnitVectorSum {
public:
    explicit UnitVectorSum(std::size_t dim);

    template <typename T>
    void add(std::span<const T> v);

    [[nodiscard]] std::size_t count() const { return count_; }
    [[nodiscard]] std::size_t dim() const { return dim_; }
    /// Sum of everything added so far.
    [[nodiscard]] std::vector<double> total() const;

private:
    void push_block();

    std::size_t dim_;
    std::size_t count_ = 0;
    std::size_t block_fill_ = 0;
    std::vector<double> block_;
    std::vector<std::vector<double>> levels_;  ///< levels_[k] holds a 2^k-block partial sum or is empty
};

/// SP from two accumulated sums.
SPValue sp_from_sums(const UnitVectorSum& c, const UnitVectorSum& f);

struct SPPoint {
    Bucket bucket;
    double value = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    bool filled = false;  ///< interpolated because one side had no vectors
};

struct SPSeries {
    int keyword_id = 0;
    SourcePair pair;
    Granularity granularity = Granularity::Yearly;
    std::vector<SPPoint> points;

    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::vector<Bucket> filled_buckets() const;
};

/// One point per bucket of the window. Buckets where either side is empty are
/// linearly interpolated between the nearest defined neighbours (nearest value
/// at the ends) and flagged. Throws Data when no bucket is defined.
SPSeries build_series(const EmbeddingStore& store, int keyword_id, const SourcePair& pair, Granularity granularity,
                      const YearWindow& window);

/// Fills undefined points in place; `defined[i]` marks measured points.
void interpolate_missing(std::vector<SPPoint>& points, const std::vector<bool>& defined);

/// CSV: keyword,pair,granularity,bucket,value,n1,n2,filled
void write_series_csv(std::ostream& out, const std::vector<SPSeries>& series,
                      const std::vector<KeywordSpec>& keywords);
std::vector<SPSeries> read_series_csv(std::istream& in, const std::vector<KeywordSpec>& keywords);

/// Fixed-precision number formatting shared by every CSV writer.
std::string format_number(double v);

}  // namespace sempol
