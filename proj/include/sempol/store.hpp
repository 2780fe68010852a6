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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "sempol/ingest.hpp"
#include "sempol/types.hpp"

namespace sempol {

/// One contextual vector for one keyword occurrence.
struct EmbeddingRecord {
    std::string turn_id;
    std::string source;
    int keyword_id = 0;
    int year = 0;
    int month = 0;
    std::vector<float> vector;

    bool operator==(const EmbeddingRecord&) const = default;
};

/// Row-major view over n vectors of dimension `dim`.
template <typename T>
struct VectorView {
    std::span<const T> values;
    std::size_t dim = 0;

    [[nodiscard]] std::size_t rows() const { return dim ? values.size() / dim : 0; }
    [[nodiscard]] std::span<const T> row(std::size_t i) const { return values.subspan(i * dim, dim); }
};

/// Records sharing (source, keyword, bucket), as returned by a query.
struct EmbeddingSet {
    std::string source;
    int keyword_id = 0;
    Bucket bucket;
    std::size_t dim = 0;
    std::vector<std::string> turn_ids;
    std::vector<float> vectors;  ///< row-major, turn_ids.size() x dim

    [[nodiscard]] std::size_t size() const { return turn_ids.size(); }
    [[nodiscard]] VectorView<float> view() const { return {vectors, dim}; }
};

inline constexpr char kStoreMagic[4] = {'D', 'L', 'N', 'S'};
inline constexpr std::uint16_t kStoreVersion = 1;

/// Streams records into the binary store layout:
///   "DLNS" | u16 version | u32 dim | u32 meta_len | meta JSON
///   records: u16 id_len | id | u8 source | u8 keyword | u16 year | u8 month | dim x f32
///   index:   u32 entries, each u8 source | u8 keyword | u16 year | u8 month | u32 n | n x u64 offset
///   footer:  u64 record_count | u64 index_offset | "DLNS"
/// All integers and floats little-endian. The metadata blob carries the
/// source table ("sources") that maps u8 ids back to names.
class StoreWriter {
public:
    StoreWriter(const std::filesystem::path& path, std::size_t dim, std::vector<std::string> sources,
                nlohmann::json metadata = nlohmann::json::object());
    ~StoreWriter();

    StoreWriter(const StoreWriter&) = delete;
    StoreWriter& operator=(const StoreWriter&) = delete;

    /// Rejects a wrong dimension, non-finite entries, a zero vector, or an unknown source;
    /// the error names the record's turn_id.
    void append(const EmbeddingRecord& record);

    /// Writes index and footer. Called by the destructor if omitted, with errors swallowed.
    void finish();

    [[nodiscard]] std::uint64_t count() const { return count_; }

private:
    using Key = std::tuple<std::uint8_t, std::uint8_t, std::uint16_t, std::uint8_t>;

    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t dim_;
    std::vector<std::string> sources_;
    std::map<Key, std::vector<std::uint64_t>> index_;
    std::uint64_t count_ = 0;
    std::uint64_t offset_ = 0;
    bool finished_ = false;
};

/// Writes all records in one call; returns the record count.
std::uint64_t write_store(std::span<const EmbeddingRecord> records, const std::filesystem::path& path,
                          std::size_t dim, nlohmann::json metadata = nlohmann::json::object());

struct StoreSummary;

/// Immutable, fully loaded store.
class EmbeddingStore {
public:
    static EmbeddingStore open(const std::filesystem::path& path);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::uint64_t size() const { return offsets_.size(); }
    [[nodiscard]] const nlohmann::json& metadata() const { return metadata_; }
    [[nodiscard]] const std::vector<std::string>& sources() const { return sources_; }

    [[nodiscard]] EmbeddingRecord record(std::uint64_t ordinal) const;
    [[nodiscard]] std::vector<EmbeddingRecord> records() const;

    /// Records for (source, keyword, bucket); a yearly bucket is the union of its
    /// months. std::nullopt when nothing matches (distinct from I/O failure, which throws).
    [[nodiscard]] std::optional<EmbeddingSet> query(const std::string& source, int keyword_id,
                                                    const Bucket& bucket) const;

    /// Keyword ids present for a source.
    [[nodiscard]] std::vector<int> keywords_for(const std::string& source) const;

private:
    friend StoreSummary validate_store(const std::filesystem::path& path);
    using Key = std::tuple<std::uint8_t, std::uint8_t, std::uint16_t, std::uint8_t>;

    void decode_into(std::uint64_t offset, EmbeddingRecord* record, EmbeddingSet* set) const;

    std::vector<char> bytes_;
    std::size_t dim_ = 0;
    nlohmann::json metadata_;
    std::vector<std::string> sources_;
    std::vector<std::uint64_t> offsets_;
    std::map<Key, std::vector<std::uint64_t>> index_;
};

struct StoreSummary {
    std::size_t dim = 0;
    std::uint64_t records = 0;
    std::size_t index_entries = 0;
    nlohmann::json metadata;
};

/// Structural check of a store file: magic, bounds, finite non-zero vectors,
/// index consistent with a record scan. Throws Format on the first defect.
StoreSummary validate_store(const std::filesystem::path& path);

/// Concatenates shards with equal dimension into one store.
std::uint64_t merge_stores(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& output);

// ---------------------------------------------------------------------------
// Providers

/// Produces one vector per keyword occurrence in a turn. Must be deterministic
/// for a fixed configuration.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    [[nodiscard]] virtual std::size_t dim() const = 0;
    [[nodiscard]] virtual std::vector<float> embed(const SpeakerTurn& turn, const KeywordHit& hit) const = 0;
    /// Stamped into the store metadata.
    [[nodiscard]] virtual nlohmann::json describe() const = 0;
};

/// Unit vector drawn from a generator seeded by the token's hash.
std::vector<double> hash_unit_vector(std::string_view token, std::size_t dim);

/// L2-normalized sum of the hash vectors of the token at `position` and its
/// +-window neighbours. Tokens are whitespace-delimited words of the normalized
/// text with edge punctuation removed.
std::vector<double> toy_embed(std::string_view text, std::size_t position, std::size_t dim, std::size_t window);

/// Multiword spans: normalized mean of the per-constituent toy vectors.
std::vector<double> toy_embed_span(std::string_view text, std::size_t first, std::size_t count, std::size_t dim,
                                   std::size_t window);

class ToyEmbedder final : public EmbeddingProvider {
public:
    ToyEmbedder(std::size_t dim, std::size_t window);

    [[nodiscard]] std::size_t dim() const override { return dim_; }
    [[nodiscard]] std::vector<float> embed(const SpeakerTurn& turn, const KeywordHit& hit) const override;
    [[nodiscard]] nlohmann::json describe() const override;

private:
    std::size_t dim_;
    std::size_t window_;
};

struct EmbedStats {
    std::uint64_t turns = 0;
    std::uint64_t records = 0;
    std::uint64_t repeated_occurrences = 0;  ///< extra occurrences of a keyword already seen in the same turn
    std::uint64_t skipped_out_of_window = 0;
};

/// One record per keyword occurrence of every turn inside the window.
EmbedStats embed_turns(std::span<const SpeakerTurn> turns, const std::vector<KeywordSpec>& keywords,
                       const EmbeddingProvider& provider, const YearWindow& window, StoreWriter& writer);

}  // namespace sempol
