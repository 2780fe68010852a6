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

#include "sempol/error.hpp"
#include "sempol/polarity.hpp"

namespace sempol {

namespace {

constexpr std::size_t kBlock = 64;

template <typename T>
void check_sets(VectorView<T> c, VectorView<T> f) {
    if (c.dim == 0 || f.dim == 0) fail(ErrorCode::InvalidArgument, "vector dimension must be positive");
    if (c.dim != f.dim) {
        fail(ErrorCode::InvalidArgument,
             "dimension mismatch: " + std::to_string(c.dim) + " vs " + std::to_string(f.dim));
    }
    if (c.values.size() % c.dim != 0 || f.values.size() % f.dim != 0) {
        fail(ErrorCode::InvalidArgument, "vector data is not a whole number of rows");
    }
    if (c.rows() == 0 || f.rows() == 0) fail(ErrorCode::Data, "SP is undefined for an empty embedding set");
}

template <typename T>
double norm_of(std::span<const T> v) {
    double n2 = 0.0;
    for (T x : v) n2 += double(x) * double(x);
    const double n = std::sqrt(n2);
    if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorCode::InvalidArgument, "zero or non-finite vector in set");
    return n;
}

double clamp_sp(double v) { return std::clamp(v, 0.0, 2.0); }

// Canonical argument order, so that swapping the sets cannot change the
// summation order and SP(c, f) == SP(f, c) holds bit for bit.
template <typename T>
bool precedes(VectorView<T> a, VectorView<T> b) {
    if (a.values.size() != b.values.size()) return a.values.size() < b.values.size();
    return std::lexicographical_compare(a.values.begin(), a.values.end(), b.values.begin(), b.values.end());
}

template <typename T>
SPValue brute(VectorView<T> c, VectorView<T> f) {
    check_sets(c, f);
    if (precedes(f, c)) {
        const auto swapped = brute(f, c);
        return {swapped.value, swapped.n2, swapped.n1};
    }
    const auto n1 = c.rows();
    const auto n2 = f.rows();
    std::vector<double> fnorm(n2);
    for (std::size_t j = 0; j < n2; ++j) fnorm[j] = norm_of(f.row(j));
    double total = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        const auto ci = c.row(i);
        const double cn = norm_of(ci);
        double row = 0.0;
        for (std::size_t j = 0; j < n2; ++j) {
            const auto fj = f.row(j);
            double dot = 0.0;
            for (std::size_t k = 0; k < c.dim; ++k) dot += double(ci[k]) * double(fj[k]);
            row += 1.0 - dot / (cn * fnorm[j]);
        }
        total += row;
    }
    return {clamp_sp(total / (double(n1) * double(n2))), n1, n2};
}

template <typename T>
SPValue fast(VectorView<T> c, VectorView<T> f) {
    check_sets(c, f);
    UnitVectorSum sc(c.dim);
    UnitVectorSum sf(f.dim);
    for (std::size_t i = 0; i < c.rows(); ++i) sc.add(c.row(i));
    for (std::size_t j = 0; j < f.rows(); ++j) sf.add(f.row(j));
    return sp_from_sums(sc, sf);
}

}  // namespace

SPValue sp_bruteforce(VectorView<float> c, VectorView<float> f) { return brute(c, f); }
SPValue sp_bruteforce(VectorView<double> c, VectorView<double> f) { return brute(c, f); }
SPValue sp_fast(VectorView<float> c, VectorView<float> f) { return fast(c, f); }
SPValue sp_fast(VectorView<double> c, VectorView<double> f) { return fast(c, f); }

UnitVectorSum::UnitVectorSum(std::size_t dim) : dim_(dim), block_(dim, 0.0) {
    if (dim == 0) fail(ErrorCode::InvalidArgument, "vector dimension must be positive");
}

template <typename T>
void UnitVectorSum::add(std::span<const T> v) {
    if (v.size() != dim_) fail(ErrorCode::InvalidArgument, "vector dimension mismatch in sum");
    const double inv = 1.0 / norm_of(v);
    for (std::size_t k = 0; k < dim_; ++k) block_[k] += double(v[k]) * inv;
    ++count_;
    if (++block_fill_ == kBlock) push_block();
}

template void UnitVectorSum::add<float>(std::span<const float>);
template void UnitVectorSum::add<double>(std::span<const double>);

void UnitVectorSum::push_block() {
    std::vector<double> carry(dim_, 0.0);
    carry.swap(block_);
    block_fill_ = 0;
    for (auto& level : levels_) {
        if (level.empty()) {
            level = std::move(carry);
            return;
        }
        for (std::size_t k = 0; k < dim_; ++k) carry[k] += level[k];
        level.clear();
    }
    levels_.push_back(std::move(carry));
}

std::vector<double> UnitVectorSum::total() const {
    std::vector<double> sum = block_;
    for (const auto& level : levels_) {
        if (level.empty()) continue;
        for (std::size_t k = 0; k < dim_; ++k) sum[k] += level[k];
    }
    return sum;
}

SPValue sp_from_sums(const UnitVectorSum& c, const UnitVectorSum& f) {
    if (c.dim() != f.dim()) fail(ErrorCode::InvalidArgument, "dimension mismatch between sums");
    if (c.count() == 0 || f.count() == 0) fail(ErrorCode::Data, "SP is undefined for an empty embedding set");
    const auto a = c.total();
    const auto b = f.total();
    double dot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
    const double pairs = double(c.count()) * double(f.count());
    return {clamp_sp(1.0 - dot / pairs), c.count(), f.count()};
}

}  // namespace sempol
