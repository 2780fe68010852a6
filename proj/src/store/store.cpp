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
#include <bit>
#include <cmath>
#include <cstring>

#include "sempol/error.hpp"
#include "sempol/store.hpp"

namespace sempol {

using nlohmann::json;

namespace {

constexpr std::size_t kFooterSize = 8 + 8 + 4;
constexpr std::size_t kIndexEntryHead = 1 + 1 + 2 + 1 + 4;

class ByteSink {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f32(float v) { put(std::bit_cast<std::uint32_t>(v), 4); }
    void bytes(std::string_view s) { buf_.append(s); }

    [[nodiscard]] const std::string& data() const { return buf_; }
    void clear() { buf_.clear(); }

private:
    void put(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    std::string buf_;
};

class ByteSource {
public:
    ByteSource(std::span<const char> bytes, std::uint64_t pos, std::string what)
        : bytes_(bytes), pos_(pos), what_(std::move(what)) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    float f32() { return std::bit_cast<float>(static_cast<std::uint32_t>(get(4))); }
    std::string_view bytes(std::size_t n) {
        need(n);
        std::string_view s(bytes_.data() + pos_, n);
        pos_ += n;
        return s;
    }
    [[nodiscard]] std::uint64_t pos() const { return pos_; }

private:
    void need(std::uint64_t n) const {
        if (pos_ + n > bytes_.size()) fail(ErrorCode::Format, what_ + ": truncated at byte " + std::to_string(pos_));
    }
    std::uint64_t get(int n) {
        need(static_cast<std::uint64_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += n;
        return v;
    }

    std::span<const char> bytes_;
    std::uint64_t pos_;
    std::string what_;
};

std::vector<char> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open store " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(ErrorCode::Io, "read failure on " + path.string());
    return bytes;
}

struct Header {
    std::size_t dim = 0;
    json metadata;
    std::vector<std::string> sources;
    std::uint64_t records_begin = 0;
};

Header read_header(std::span<const char> bytes, const std::string& what) {
    ByteSource src(bytes, 0, what);
    if (std::memcmp(src.bytes(4).data(), kStoreMagic, 4) != 0) fail(ErrorCode::Format, what + ": bad magic");
    const auto version = src.u16();
    if (version != kStoreVersion) {
        fail(ErrorCode::Format, what + ": unsupported format version " + std::to_string(version));
    }
    Header h;
    h.dim = src.u32();
    if (h.dim == 0) fail(ErrorCode::Format, what + ": zero dimension");
    const auto meta_len = src.u32();
    h.metadata = json::parse(src.bytes(meta_len), nullptr, false);
    if (h.metadata.is_discarded() || !h.metadata.is_object()) {
        fail(ErrorCode::Format, what + ": metadata is not a JSON object");
    }
    if (h.metadata.contains("sources") && h.metadata["sources"].is_array()) {
        for (const auto& s : h.metadata["sources"]) {
            if (!s.is_string()) fail(ErrorCode::Format, what + ": non-string source name");
            h.sources.push_back(s.get<std::string>());
        }
    }
    h.records_begin = src.pos();
    return h;
}

}  // namespace

// ---------------------------------------------------------------------------

StoreWriter::StoreWriter(const std::filesystem::path& path, std::size_t dim, std::vector<std::string> sources,
                         json metadata)
    : path_(path), dim_(dim), sources_(std::move(sources)) {
    if (dim_ == 0 || dim_ > 0xFFFFFFFFu) fail(ErrorCode::InvalidArgument, "store dimension must be positive");
    if (sources_.size() > 256) fail(ErrorCode::InvalidArgument, "a store holds at most 256 sources");
    if (!metadata.is_object()) fail(ErrorCode::InvalidArgument, "store metadata must be a JSON object");
    metadata["sources"] = sources_;
    metadata["dimension"] = dim_;

    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) fail(ErrorCode::Io, "cannot create store " + path_.string());
    const auto meta = metadata.dump();
    ByteSink sink;
    sink.bytes(std::string_view(kStoreMagic, 4));
    sink.u16(kStoreVersion);
    sink.u32(static_cast<std::uint32_t>(dim_));
    sink.u32(static_cast<std::uint32_t>(meta.size()));
    sink.bytes(meta);
    out_.write(sink.data().data(), static_cast<std::streamsize>(sink.data().size()));
    offset_ = sink.data().size();
}

StoreWriter::~StoreWriter() {
    if (!finished_) {
        try {
            finish();
        } catch (...) {
        }
    }
}

void StoreWriter::append(const EmbeddingRecord& r) {
    if (finished_) fail(ErrorCode::InvalidArgument, "store already finished");
    const auto where = "record '" + r.turn_id + "'";
    if (r.vector.size() != dim_) {
        fail(ErrorCode::InvalidArgument, where + ": dimension " + std::to_string(r.vector.size()) +
                                             " does not match store dimension " + std::to_string(dim_));
    }
    double norm2 = 0.0;
    for (float v : r.vector) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, where + ": non-finite vector entry");
        norm2 += double(v) * double(v);
    }
    if (norm2 <= 0.0) fail(ErrorCode::InvalidArgument, where + ": zero vector");
    const auto src = std::find(sources_.begin(), sources_.end(), r.source);
    if (src == sources_.end()) fail(ErrorCode::InvalidArgument, where + ": unknown source '" + r.source + "'");
    if (r.turn_id.size() > 0xFFFF) fail(ErrorCode::InvalidArgument, where + ": turn id too long");
    if (r.keyword_id < 0 || r.keyword_id > 255 || r.year < 0 || r.year > 0xFFFF || r.month < 1 || r.month > 12) {
        fail(ErrorCode::InvalidArgument, where + ": keyword id, year or month out of range");
    }

    ByteSink sink;
    sink.u16(static_cast<std::uint16_t>(r.turn_id.size()));
    sink.bytes(r.turn_id);
    const auto source_id = static_cast<std::uint8_t>(src - sources_.begin());
    sink.u8(source_id);
    sink.u8(static_cast<std::uint8_t>(r.keyword_id));
    sink.u16(static_cast<std::uint16_t>(r.year));
    sink.u8(static_cast<std::uint8_t>(r.month));
    for (float v : r.vector) sink.f32(v);
    out_.write(sink.data().data(), static_cast<std::streamsize>(sink.data().size()));
    if (!out_) fail(ErrorCode::Io, "write failure on " + path_.string());

    index_[{source_id, static_cast<std::uint8_t>(r.keyword_id), static_cast<std::uint16_t>(r.year),
            static_cast<std::uint8_t>(r.month)}]
        .push_back(offset_);
    offset_ += sink.data().size();
    ++count_;
}

void StoreWriter::finish() {
    if (finished_) return;
    finished_ = true;
    ByteSink sink;
    const auto index_offset = offset_;
    sink.u32(static_cast<std::uint32_t>(index_.size()));
    for (const auto& [key, offsets] : index_) {
        sink.u8(std::get<0>(key));
        sink.u8(std::get<1>(key));
        sink.u16(std::get<2>(key));
        sink.u8(std::get<3>(key));
        sink.u32(static_cast<std::uint32_t>(offsets.size()));
        for (auto o : offsets) sink.u64(o);
    }
    sink.u64(count_);
    sink.u64(index_offset);
    sink.bytes(std::string_view(kStoreMagic, 4));
    out_.write(sink.data().data(), static_cast<std::streamsize>(sink.data().size()));
    out_.close();
    if (!out_) fail(ErrorCode::Io, "write failure on " + path_.string());
}

std::uint64_t write_store(std::span<const EmbeddingRecord> records, const std::filesystem::path& path,
                          std::size_t dim, json metadata) {
    std::vector<std::string> sources;
    for (const auto& r : records) {
        if (std::find(sources.begin(), sources.end(), r.source) == sources.end()) sources.push_back(r.source);
    }
    std::sort(sources.begin(), sources.end());
    StoreWriter writer(path, dim, sources, std::move(metadata));
    for (const auto& r : records) writer.append(r);
    writer.finish();
    return writer.count();
}

// ---------------------------------------------------------------------------

EmbeddingStore EmbeddingStore::open(const std::filesystem::path& path) {
    EmbeddingStore store;
    store.bytes_ = slurp(path);
    const auto what = path.string();
    const std::span<const char> bytes(store.bytes_);
    const auto header = read_header(bytes, what);
    store.dim_ = header.dim;
    store.metadata_ = header.metadata;
    store.sources_ = header.sources;

    if (bytes.size() < header.records_begin + kFooterSize) fail(ErrorCode::Format, what + ": missing footer");
    ByteSource footer(bytes, bytes.size() - kFooterSize, what);
    const auto count = footer.u64();
    const auto index_offset = footer.u64();
    if (std::memcmp(footer.bytes(4).data(), kStoreMagic, 4) != 0) {
        fail(ErrorCode::Format, what + ": bad trailing magic");
    }
    if (index_offset < header.records_begin || index_offset > bytes.size() - kFooterSize) {
        fail(ErrorCode::Format, what + ": index offset out of range");
    }

    ByteSource index(bytes.first(bytes.size() - kFooterSize), index_offset, what);
    const auto entries = index.u32();
    for (std::uint32_t e = 0; e < entries; ++e) {
        Key key{index.u8(), index.u8(), index.u16(), index.u8()};
        const auto n = index.u32();
        auto& offsets = store.index_[key];
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto o = index.u64();
            if (o < header.records_begin || o >= index_offset) fail(ErrorCode::Format, what + ": bad record offset");
            offsets.push_back(o);
            store.offsets_.push_back(o);
        }
    }
    if (store.offsets_.size() != count) {
        fail(ErrorCode::Format, what + ": footer count " + std::to_string(count) + " disagrees with index (" +
                                    std::to_string(store.offsets_.size()) + ")");
    }
    std::sort(store.offsets_.begin(), store.offsets_.end());
    return store;
}

void EmbeddingStore::decode_into(std::uint64_t offset, EmbeddingRecord* record, EmbeddingSet* set) const {
    ByteSource src(bytes_, offset, "store record");
    const auto id_len = src.u16();
    const auto id = src.bytes(id_len);
    const auto source_id = src.u8();
    const auto keyword = src.u8();
    const auto year = src.u16();
    const auto month = src.u8();
    if (source_id >= sources_.size()) fail(ErrorCode::Format, "store record references unknown source id");
    if (record) {
        record->turn_id.assign(id);
        record->source = sources_[source_id];
        record->keyword_id = keyword;
        record->year = year;
        record->month = month;
        record->vector.resize(dim_);
        for (auto& v : record->vector) v = src.f32();
    }
    if (set) {
        set->turn_ids.emplace_back(id);
        for (std::size_t i = 0; i < dim_; ++i) set->vectors.push_back(src.f32());
    }
}

EmbeddingRecord EmbeddingStore::record(std::uint64_t ordinal) const {
    if (ordinal >= offsets_.size()) fail(ErrorCode::InvalidArgument, "record ordinal out of range");
    EmbeddingRecord r;
    decode_into(offsets_[ordinal], &r, nullptr);
    return r;
}

std::vector<EmbeddingRecord> EmbeddingStore::records() const {
    std::vector<EmbeddingRecord> out(offsets_.size());
    for (std::size_t i = 0; i < offsets_.size(); ++i) decode_into(offsets_[i], &out[i], nullptr);
    return out;
}

std::optional<EmbeddingSet> EmbeddingStore::query(const std::string& source, int keyword_id,
                                                  const Bucket& bucket) const {
    const auto src = std::find(sources_.begin(), sources_.end(), source);
    if (src == sources_.end() || keyword_id < 0 || keyword_id > 255 || bucket.year < 0 || bucket.year > 0xFFFF) {
        return std::nullopt;
    }
    const auto source_id = static_cast<std::uint8_t>(src - sources_.begin());
    EmbeddingSet set;
    set.source = source;
    set.keyword_id = keyword_id;
    set.bucket = bucket;
    set.dim = dim_;
    const int first_month = bucket.yearly() ? 1 : bucket.month;
    const int last_month = bucket.yearly() ? 12 : bucket.month;
    for (int m = first_month; m <= last_month; ++m) {
        const auto it = index_.find(
            {source_id, static_cast<std::uint8_t>(keyword_id), static_cast<std::uint16_t>(bucket.year),
             static_cast<std::uint8_t>(m)});
        if (it == index_.end()) continue;
        for (auto offset : it->second) decode_into(offset, nullptr, &set);
    }
    if (set.turn_ids.empty()) return std::nullopt;
    return set;
}

std::vector<int> EmbeddingStore::keywords_for(const std::string& source) const {
    std::vector<int> out;
    const auto src = std::find(sources_.begin(), sources_.end(), source);
    if (src == sources_.end()) return out;
    const auto source_id = static_cast<std::uint8_t>(src - sources_.begin());
    for (const auto& [key, offsets] : index_) {
        if (std::get<0>(key) == source_id) out.push_back(std::get<1>(key));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------

StoreSummary validate_store(const std::filesystem::path& path) {
    const auto store = EmbeddingStore::open(path);
    const auto what = path.string();
    const std::span<const char> bytes(store.bytes_);

    ByteSource footer(bytes, bytes.size() - kFooterSize, what);
    footer.u64();
    const auto index_offset = footer.u64();

    // Scan records back to back; the scan must end exactly at the index.
    const auto header = read_header(bytes, what);
    std::map<std::uint64_t, EmbeddingStore::Key> scanned;
    ByteSource scan(bytes.first(index_offset), header.records_begin, what);
    while (scan.pos() < index_offset) {
        const auto at = scan.pos();
        const auto id_len = scan.u16();
        scan.bytes(id_len);
        EmbeddingStore::Key key{scan.u8(), scan.u8(), scan.u16(), scan.u8()};
        if (std::get<0>(key) >= store.sources_.size()) fail(ErrorCode::Format, what + ": unknown source id");
        if (std::get<3>(key) < 1 || std::get<3>(key) > 12) fail(ErrorCode::Format, what + ": month out of range");
        double norm2 = 0.0;
        for (std::size_t i = 0; i < store.dim_; ++i) {
            const float v = scan.f32();
            if (!std::isfinite(v)) fail(ErrorCode::Format, what + ": non-finite vector entry");
            norm2 += double(v) * double(v);
        }
        if (norm2 <= 0.0) fail(ErrorCode::Format, what + ": zero vector");
        scanned.emplace(at, key);
    }
    if (scanned.size() != store.size()) fail(ErrorCode::Format, what + ": record count mismatch");
    for (const auto& [key, offsets] : store.index_) {
        for (auto o : offsets) {
            const auto it = scanned.find(o);
            if (it == scanned.end() || it->second != key) {
                fail(ErrorCode::Format, what + ": index entry does not point at a matching record");
            }
        }
    }
    StoreSummary summary;
    summary.dim = store.dim_;
    summary.records = store.size();
    summary.index_entries = store.index_.size();
    summary.metadata = store.metadata_;
    return summary;
}

std::uint64_t merge_stores(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& output) {
    if (inputs.empty()) fail(ErrorCode::InvalidArgument, "nothing to merge");
    std::vector<EmbeddingStore> stores;
    std::vector<std::string> sources;
    for (const auto& p : inputs) {
        stores.push_back(EmbeddingStore::open(p));
        if (stores.back().dim() != stores.front().dim()) {
            fail(ErrorCode::InvalidArgument, "cannot merge " + p.string() + ": dimension differs");
        }
        for (const auto& s : stores.back().sources()) {
            if (std::find(sources.begin(), sources.end(), s) == sources.end()) sources.push_back(s);
        }
    }
    auto metadata = stores.front().metadata();
    metadata["merged_from"] = inputs.size();
    StoreWriter writer(output, stores.front().dim(), sources, metadata);
    for (const auto& store : stores) {
        for (std::uint64_t i = 0; i < store.size(); ++i) writer.append(store.record(i));
    }
    writer.finish();
    return writer.count();
}

}  // namespace sempol
