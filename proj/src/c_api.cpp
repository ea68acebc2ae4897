#include "siq/siq.h"

#include "siq/engine.hpp"
#include "siq/error.hpp"

#include <cstdlib>
#include <cstring>
#include <new>

struct siq_engine {
    siq::Engine engine;
    std::string last_error;
};

struct siq_result {
    siq::QueryResult result;
};

namespace {

siq_status status_of(siq::ErrorCode code) {
    using siq::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return SIQ_ERR_INVALID_ARGUMENT;
    case ErrorCode::UnknownAtom: return SIQ_ERR_UNKNOWN_ATOM;
    case ErrorCode::IndentError: return SIQ_ERR_INDENT;
    case ErrorCode::NameError: return SIQ_ERR_NAME;
    case ErrorCode::EmptyLink: return SIQ_ERR_EMPTY_LINK;
    case ErrorCode::SyntaxError: return SIQ_ERR_SYNTAX;
    case ErrorCode::FormatError: return SIQ_ERR_FORMAT;
    case ErrorCode::GeometryError: return SIQ_ERR_GEOMETRY;
    case ErrorCode::RangeError: return SIQ_ERR_RANGE;
    case ErrorCode::IoError: return SIQ_ERR_IO;
    case ErrorCode::IllFormed: return SIQ_ERR_ILL_FORMED;
    case ErrorCode::NotNumeric: return SIQ_ERR_NOT_NUMERIC;
    case ErrorCode::UnknownRelation: return SIQ_ERR_UNKNOWN_RELATION;
    case ErrorCode::AliasClassMismatch: return SIQ_ERR_ALIAS_CLASS_MISMATCH;
    case ErrorCode::EmptyQuery: return SIQ_ERR_EMPTY_QUERY;
    case ErrorCode::FixpointLimit: return SIQ_ERR_FIXPOINT_LIMIT;
    case ErrorCode::CyclicRules: return SIQ_ERR_CYCLIC_RULES;
    }
    return SIQ_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into a status and the engine's message.
template <class Fn>
siq_status guarded(const siq_engine* engine, Fn&& fn) {
    auto* e = const_cast<siq_engine*>(engine);
    try {
        fn();
        if (e) e->last_error.clear();
        return SIQ_OK;
    } catch (const siq::Error& err) {
        if (e) e->last_error = err.what();
        return status_of(err.code());
    } catch (const std::bad_alloc&) {
        if (e) e->last_error = "out of memory";
        return SIQ_ERR_INTERNAL;
    } catch (const std::exception& err) {
        if (e) e->last_error = err.what();
        return SIQ_ERR_INTERNAL;
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::optional<double> min_conf_of(double v) { return v < 0 ? std::nullopt : std::optional<double>(v); }

siq_status null_argument() { return SIQ_ERR_INVALID_ARGUMENT; }

} // namespace

extern "C" {

const char* siq_status_name(siq_status status) {
    switch (status) {
    case SIQ_OK: return "OK";
    case SIQ_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case SIQ_ERR_UNKNOWN_ATOM: return "UnknownAtom";
    case SIQ_ERR_INDENT: return "IndentError";
    case SIQ_ERR_NAME: return "NameError";
    case SIQ_ERR_EMPTY_LINK: return "EmptyLink";
    case SIQ_ERR_SYNTAX: return "SyntaxError";
    case SIQ_ERR_FORMAT: return "FormatError";
    case SIQ_ERR_GEOMETRY: return "GeometryError";
    case SIQ_ERR_RANGE: return "RangeError";
    case SIQ_ERR_IO: return "IoError";
    case SIQ_ERR_ILL_FORMED: return "IllFormed";
    case SIQ_ERR_NOT_NUMERIC: return "NotNumeric";
    case SIQ_ERR_UNKNOWN_RELATION: return "UnknownRelation";
    case SIQ_ERR_ALIAS_CLASS_MISMATCH: return "AliasClassMismatch";
    case SIQ_ERR_EMPTY_QUERY: return "EmptyQuery";
    case SIQ_ERR_FIXPOINT_LIMIT: return "FixpointLimit";
    case SIQ_ERR_CYCLIC_RULES: return "CyclicRules";
    case SIQ_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

siq_params siq_default_params(void) {
    siq::RelParams p;
    return siq_params{p.on_tau, p.on_overlap_min, p.inside_slack};
}

siq_status siq_engine_new(siq_engine** out) {
    if (!out) return null_argument();
    *out = nullptr;
    return guarded(nullptr, [&] { *out = new siq_engine(); });
}

void siq_engine_free(siq_engine* engine) { delete engine; }

const char* siq_last_error(const siq_engine* engine) { return engine ? engine->last_error.c_str() : ""; }

siq_status siq_engine_set_params(siq_engine* engine, const siq_params* params) {
    if (!engine || !params) return null_argument();
    return guarded(engine, [&] {
        engine->engine.set_params(siq::RelParams{params->on_tau, params->on_overlap_min, params->inside_slack});
    });
}

siq_status siq_engine_get_params(const siq_engine* engine, siq_params* out) {
    if (!engine || !out) return null_argument();
    const siq::RelParams& p = engine->engine.params();
    *out = siq_params{p.on_tau, p.on_overlap_min, p.inside_slack};
    return SIQ_OK;
}

siq_status siq_engine_ingest_file(siq_engine* engine, const char* path, double min_conf, size_t* atoms_added) {
    if (!engine || !path) return null_argument();
    return guarded(engine, [&] {
        std::size_t n = engine->engine.ingest_file(path, min_conf_of(min_conf));
        if (atoms_added) *atoms_added = n;
    });
}

siq_status siq_engine_ingest_jsonl(siq_engine* engine, const char* jsonl, double min_conf, size_t* atoms_added) {
    if (!engine || !jsonl) return null_argument();
    return guarded(engine, [&] {
        std::size_t n = engine->engine.ingest_jsonl(jsonl, min_conf_of(min_conf));
        if (atoms_added) *atoms_added = n;
    });
}

siq_status siq_engine_load_atomese(siq_engine* engine, const char* text, size_t* root_count) {
    if (!engine || !text) return null_argument();
    return guarded(engine, [&] {
        std::size_t n = engine->engine.load_atomese(text).size();
        if (root_count) *root_count = n;
    });
}

siq_status siq_engine_dump_atomese(const siq_engine* engine, char** out) {
    if (!engine || !out) return null_argument();
    return guarded(engine, [&] { *out = copy_string(engine->engine.dump()); });
}

size_t siq_engine_atom_count(const siq_engine* engine) { return engine ? engine->engine.store().size() : 0; }

size_t siq_engine_frame_count(const siq_engine* engine) {
    return engine ? engine->engine.detections().frames.size() : 0;
}

size_t siq_engine_detection_count(const siq_engine* engine) {
    return engine ? engine->engine.detections().detections.size() : 0;
}

siq_status siq_engine_query(siq_engine* engine, const char* query, siq_result** out) {
    if (!engine || !query || !out) return null_argument();
    *out = nullptr;
    return guarded(engine, [&] { *out = new siq_result{engine->engine.query(std::string_view(query))}; });
}

siq_status siq_engine_query_atomese(siq_engine* engine, const char* atomese, siq_result** out) {
    if (!engine || !atomese || !out) return null_argument();
    *out = nullptr;
    return guarded(engine, [&] { *out = new siq_result{engine->engine.query_atomese(atomese)}; });
}

siq_status siq_engine_check(siq_engine* engine, const char* query, int* agree, char** report) {
    if (!engine || !query) return null_argument();
    return guarded(engine, [&] {
        siq::CheckReport r = engine->engine.check(std::string_view(query));
        if (agree) *agree = r.agree ? 1 : 0;
        if (report) *report = copy_string(r.text);
    });
}

void siq_result_free(siq_result* result) { delete result; }

size_t siq_result_frame_count(const siq_result* result) { return result ? result->result.frames.size() : 0; }

const char* siq_result_frame_id(const siq_result* result, size_t frame) {
    if (!result || frame >= result->result.frames.size()) return nullptr;
    return result->result.frames[frame].frame_id.c_str();
}

size_t siq_result_grounding_count(const siq_result* result, size_t frame) {
    if (!result || frame >= result->result.frames.size()) return 0;
    return result->result.frames[frame].groundings.size();
}

siq_status siq_result_text(const siq_result* result, char** out) {
    if (!result || !out) return null_argument();
    return guarded(nullptr, [&] { *out = copy_string(siq::format_text(result->result)); });
}

siq_status siq_result_json(const siq_result* result, char** out) {
    if (!result || !out) return null_argument();
    return guarded(nullptr, [&] { *out = copy_string(siq::format_json(result->result)); });
}

siq_status siq_result_explain(const siq_result* result, char** out) {
    if (!result || !out) return null_argument();
    return guarded(nullptr, [&] { *out = copy_string(siq::format_explain(result->result.log)); });
}

siq_status siq_result_svg(const siq_result* result, size_t frame, char** out) {
    if (!result || !out || frame >= result->result.frames.size()) return null_argument();
    return guarded(nullptr, [&] { *out = copy_string(siq::render_svg(result->result.frames[frame])); });
}

void siq_string_free(char* s) { std::free(s); }

} // extern "C"
