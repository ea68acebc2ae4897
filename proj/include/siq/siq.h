/* C interface to the siq frame retrieval engine.
 *
 * All objects are opaque handles. Every fallible call returns a siq_status;
 * on failure the engine keeps a message retrievable with siq_last_error().
 * Strings handed out through `char**` parameters are owned by the caller
 * and released with siq_string_free(). An engine must not be used from
 * two threads at once.
 */
#ifndef SIQ_SIQ_H
#define SIQ_SIQ_H

#include <stddef.h>

#if defined(SIQ_BUILDING_LIBRARY)
#define SIQ_API __attribute__((visibility("default")))
#else
#define SIQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum siq_status {
    SIQ_OK = 0,
    SIQ_ERR_INVALID_ARGUMENT = 1,
    SIQ_ERR_UNKNOWN_ATOM = 2,
    SIQ_ERR_INDENT = 3,
    SIQ_ERR_NAME = 4,
    SIQ_ERR_EMPTY_LINK = 5,
    SIQ_ERR_SYNTAX = 6,
    SIQ_ERR_FORMAT = 7,
    SIQ_ERR_GEOMETRY = 8,
    SIQ_ERR_RANGE = 9,
    SIQ_ERR_IO = 10,
    SIQ_ERR_ILL_FORMED = 11,
    SIQ_ERR_NOT_NUMERIC = 12,
    SIQ_ERR_UNKNOWN_RELATION = 13,
    SIQ_ERR_ALIAS_CLASS_MISMATCH = 14,
    SIQ_ERR_EMPTY_QUERY = 15,
    SIQ_ERR_FIXPOINT_LIMIT = 16,
    SIQ_ERR_CYCLIC_RULES = 17,
    SIQ_ERR_INTERNAL = 99
} siq_status;

typedef struct siq_engine siq_engine;
typedef struct siq_result siq_result;

typedef struct siq_params {
    double on_tau;
    double on_overlap_min;
    double inside_slack;
} siq_params;

SIQ_API const char* siq_status_name(siq_status status);
SIQ_API siq_params siq_default_params(void);

SIQ_API siq_status siq_engine_new(siq_engine** out);
SIQ_API void siq_engine_free(siq_engine* engine);
/* Message of the last failed call on this engine, "" if none. */
SIQ_API const char* siq_last_error(const siq_engine* engine);

SIQ_API siq_status siq_engine_set_params(siq_engine* engine, const siq_params* params);
SIQ_API siq_status siq_engine_get_params(const siq_engine* engine, siq_params* out);

/* min_conf < 0 disables confidence filtering. */
SIQ_API siq_status siq_engine_ingest_file(siq_engine* engine, const char* path, double min_conf,
                                          size_t* atoms_added);
SIQ_API siq_status siq_engine_ingest_jsonl(siq_engine* engine, const char* jsonl, double min_conf,
                                           size_t* atoms_added);
SIQ_API siq_status siq_engine_load_atomese(siq_engine* engine, const char* text, size_t* root_count);
SIQ_API siq_status siq_engine_dump_atomese(const siq_engine* engine, char** out);
SIQ_API size_t siq_engine_atom_count(const siq_engine* engine);
SIQ_API size_t siq_engine_frame_count(const siq_engine* engine);
SIQ_API size_t siq_engine_detection_count(const siq_engine* engine);

SIQ_API siq_status siq_engine_query(siq_engine* engine, const char* query, siq_result** out);
SIQ_API siq_status siq_engine_query_atomese(siq_engine* engine, const char* atomese, siq_result** out);

/* Runs engine and oracle on `query`; *agree is 1 iff the assignment sets match. */
SIQ_API siq_status siq_engine_check(siq_engine* engine, const char* query, int* agree, char** report);

SIQ_API void siq_result_free(siq_result* result);
SIQ_API size_t siq_result_frame_count(const siq_result* result);
SIQ_API const char* siq_result_frame_id(const siq_result* result, size_t frame);
SIQ_API size_t siq_result_grounding_count(const siq_result* result, size_t frame);
SIQ_API siq_status siq_result_text(const siq_result* result, char** out);
SIQ_API siq_status siq_result_json(const siq_result* result, char** out);
SIQ_API siq_status siq_result_explain(const siq_result* result, char** out);
SIQ_API siq_status siq_result_svg(const siq_result* result, size_t frame, char** out);

SIQ_API void siq_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SIQ_SIQ_H */
