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


#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "sempol/error.hpp"
#include "sempol/pipeline.hpp"
#include "sempol/polarity.hpp"
#include "sempol/sempol.h"
#include "sempol/store.hpp"
#include "sempol/timeseries.hpp"

struct sempol_config {
    sempol::ConfigDocument doc;
};

struct sempol_store {
    sempol::EmbeddingStore store;
};

namespace {

thread_local std::string last_error;

sempol_status record(sempol_status status, const std::string& message) {
    last_error = message;
    return status;
}

template <typename F>
sempol_status guarded(F&& body) {
    last_error.clear();
    try {
        body();
        return SEMPOL_OK;
    } catch (const sempol::Error& e) {
        return record(static_cast<sempol_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return record(SEMPOL_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(SEMPOL_INTERNAL, e.what());
    }
}

char* copy_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) sempol::fail(sempol::ErrorCode::InvalidArgument, what);
}

sempol_status run(const sempol_config* config, char** summary,
                  sempol::CommandResult (*command)(const sempol::RunConfig&)) {
    return guarded([&] {
        require(config && summary, "null argument");
        *summary = nullptr;
        *summary = copy_string(command(sempol::resolve(config->doc)).summary);
    });
}

sempol_status sp_impl(const double* c, size_t n1, const double* f, size_t n2, size_t dim, double* out, bool fast) {
    return guarded([&] {
        require(c && f && out, "null argument");
        require(dim > 0, "dimension must be positive");
        const sempol::VectorView<double> cv{{c, n1 * dim}, dim};
        const sempol::VectorView<double> fv{{f, n2 * dim}, dim};
        *out = (fast ? sempol::sp_fast(cv, fv) : sempol::sp_bruteforce(cv, fv)).value;
    });
}

}  // namespace

extern "C" {

const char* sempol_version(void) { return SEMPOL_VERSION; }

const char* sempol_last_error(void) { return last_error.c_str(); }

const char* sempol_status_name(sempol_status status) {
    switch (status) {
        case SEMPOL_OK: return "ok";
        case SEMPOL_INVALID_ARGUMENT: return "invalid argument";
        case SEMPOL_DATA: return "data error";
        case SEMPOL_IO: return "i/o error";
        case SEMPOL_DEGENERATE: return "degenerate input";
        case SEMPOL_FORMAT: return "format error";
        case SEMPOL_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void sempol_string_free(char* s) { std::free(s); }

sempol_status sempol_config_default(sempol_config** out) {
    return guarded([&] {
        require(out, "null argument");
        *out = new sempol_config{sempol::ConfigDocument::defaults()};
    });
}

sempol_status sempol_config_load(const char* path, sempol_config** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = nullptr;
        *out = new sempol_config{sempol::ConfigDocument::load(path)};
    });
}

sempol_status sempol_config_set(sempol_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config && key && value, "null argument");
        auto parsed = nlohmann::json::parse(value, nullptr, false);
        if (parsed.is_discarded()) parsed = std::string(value);
        config->doc.set(key, parsed);
    });
}

sempol_status sempol_config_apply_env(sempol_config* config) {
    return guarded([&] {
        require(config, "null argument");
        config->doc.apply_env(sempol::process_environment());
    });
}

sempol_status sempol_config_validate(const sempol_config* config) {
    return guarded([&] {
        require(config, "null argument");
        (void)sempol::resolve(config->doc);
    });
}

sempol_status sempol_config_dump(const sempol_config* config, char** json_out) {
    return guarded([&] {
        require(config && json_out, "null argument");
        *json_out = copy_string(config->doc.doc.dump(2));
    });
}

void sempol_config_free(sempol_config* config) { delete config; }

sempol_status sempol_cmd_ingest(const sempol_config* config, char** summary) {
    return run(config, summary, sempol::cmd_ingest);
}

sempol_status sempol_cmd_embed_toy(const sempol_config* config, char** summary) {
    return run(config, summary, sempol::cmd_embed_toy);
}

sempol_status sempol_cmd_polarize(const sempol_config* config, char** summary) {
    return run(config, summary, sempol::cmd_polarize);
}

sempol_status sempol_cmd_granger(const sempol_config* config, char** summary) {
    return run(config, summary, sempol::cmd_granger);
}

sempol_status sempol_cmd_report_all(const sempol_config* config, char** summary) {
    return run(config, summary, sempol::cmd_report_all);
}

sempol_status sempol_cmd_attribute(const sempol_config* config, const char* topic, int lag,
                                   sempol_direction direction, char** summary) {
    return guarded([&] {
        require(config && topic && summary, "null argument");
        require(direction == SEMPOL_TV_LEADS || direction == SEMPOL_TWITTER_LEADS, "unknown lead direction");
        *summary = nullptr;
        const auto dir =
            direction == SEMPOL_TV_LEADS ? sempol::LeadDirection::TvLeads : sempol::LeadDirection::TwitterLeads;
        const auto result = sempol::cmd_attribute(sempol::resolve(config->doc), topic,
                                                  lag > 0 ? std::optional<int>(lag) : std::nullopt, dir);
        *summary = copy_string(result.summary);
    });
}

sempol_status sempol_sp(const double* c, size_t n1, const double* f, size_t n2, size_t dim, double* out) {
    return sp_impl(c, n1, f, n2, dim, out, true);
}

sempol_status sempol_sp_bruteforce(const double* c, size_t n1, const double* f, size_t n2, size_t dim,
                                   double* out) {
    return sp_impl(c, n1, f, n2, dim, out, false);
}

sempol_status sempol_adf(const double* series, size_t n, int max_lag, sempol_adf_result* out) {
    return guarded([&] {
        require(series && out, "null argument");
        const auto r = sempol::adf_test({series, n}, max_lag < 0 ? std::nullopt : std::optional<int>(max_lag));
        *out = {r.statistic, r.crit_1pct, r.crit_5pct, r.crit_10pct, r.lags_used, r.n, r.stationary ? 1 : 0};
    });
}

sempol_status sempol_granger(const double* x, const double* y, size_t n, int lag, sempol_granger_result* out) {
    return guarded([&] {
        require(x && y && out, "null argument");
        const auto r = sempol::granger_test({x, n}, {y, n}, lag);
        *out = {r.f_value, r.p_value, r.df_num, r.df_den};
    });
}

sempol_status sempol_store_validate(const char* path, uint64_t* records) {
    return guarded([&] {
        require(path, "null argument");
        const auto summary = sempol::validate_store(path);
        if (records) *records = summary.records;
    });
}

sempol_status sempol_store_open(const char* path, sempol_store** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = nullptr;
        *out = new sempol_store{sempol::EmbeddingStore::open(path)};
    });
}

uint64_t sempol_store_size(const sempol_store* store) { return store ? store->store.size() : 0; }

size_t sempol_store_dim(const sempol_store* store) { return store ? store->store.dim() : 0; }

sempol_status sempol_store_count(const sempol_store* store, const char* source, int keyword_id, int year,
                                 int month, size_t* count) {
    return guarded([&] {
        require(store && source && count, "null argument");
        require(month >= 0 && month <= 12, "month must lie in [0, 12]");
        const auto set = store->store.query(source, keyword_id, {year, month});
        *count = set ? set->size() : 0;
    });
}

void sempol_store_close(sempol_store* store) { delete store; }

sempol_status sempol_srt_count(const char* bytes, size_t length, size_t* cues, size_t* skipped) {
    return guarded([&] {
        require(bytes || length == 0, "null argument");
        const auto parsed = sempol::parse_srt({bytes ? bytes : "", length});
        if (cues) *cues = parsed.cues.size();
        if (skipped) *skipped = parsed.skipped;
    });
}

}  // extern "C"
