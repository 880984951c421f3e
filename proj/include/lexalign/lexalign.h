/* lexalign — term-distribution analysis and source-preference toolkit for
 * term-based retrieval, exposed as a C ABI around the C++ core.
 *
 * Conventions:
 *   - Every fallible call returns a lexalign_status; LEXALIGN_OK means
 *     success. On failure, lexalign_last_error() returns a thread-local
 *     message describing what went wrong.
 *   - Objects are opaque handles created by *_open/*_build calls and
 *     released with the matching *_free. Handles are immutable after
 *     construction unless a call says otherwise, and may be shared across
 *     threads once fully built.
 */
#ifndef LEXALIGN_H
#define LEXALIGN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LEXALIGN_API __declspec(dllexport)
#else
#define LEXALIGN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lexalign_status {
    LEXALIGN_OK = 0,
    LEXALIGN_ERR_IO = 1,
    LEXALIGN_ERR_PARSE = 2,
    LEXALIGN_ERR_INVALID_ARGUMENT = 3,
    LEXALIGN_ERR_DUPLICATE_ID = 4,
    LEXALIGN_ERR_STATE = 5,
    LEXALIGN_ERR_DOMAIN = 6,
    LEXALIGN_ERR_UNKNOWN = 99
} lexalign_status;

LEXALIGN_API const char* lexalign_version(void);
/* Message for the most recent failure on this thread ("" if none). */
LEXALIGN_API const char* lexalign_last_error(void);

typedef struct lexalign_corpus lexalign_corpus;
typedef struct lexalign_queries lexalign_queries;
typedef struct lexalign_index lexalign_index;
typedef struct lexalign_run lexalign_run;

/* ------------------------------------------------------------- pipeline */

typedef struct lexalign_pipeline_opts {
    int lowercase; /* default 1 */
    int stem;      /* Porter stemming, default 0 */
    int stopwords; /* stopword removal after stemming, default 0 */
    const char* stopword_file; /* NULL = bundled classic list */
} lexalign_pipeline_opts;

LEXALIGN_API void lexalign_pipeline_opts_init(lexalign_pipeline_opts* opts);

/* Stems one lowercase word into buf (NUL-terminated). */
LEXALIGN_API lexalign_status lexalign_stem(const char* word, char* buf, size_t buflen);

/* --------------------------------------------------------------- corpus */

LEXALIGN_API lexalign_status lexalign_corpus_open_jsonl(const char* path, lexalign_corpus** out);
LEXALIGN_API lexalign_status lexalign_corpus_tokenize(lexalign_corpus* corpus,
                                                      const lexalign_pipeline_opts* opts);
LEXALIGN_API size_t lexalign_corpus_size(const lexalign_corpus* corpus);
LEXALIGN_API void lexalign_corpus_free(lexalign_corpus* corpus);

LEXALIGN_API lexalign_status lexalign_queries_open_jsonl(const char* path,
                                                         lexalign_queries** out);
LEXALIGN_API lexalign_status lexalign_queries_tokenize(lexalign_queries* queries,
                                                       const lexalign_pipeline_opts* opts);
/* TREC qrels: `qid 0 docid grade`. */
LEXALIGN_API lexalign_status lexalign_queries_load_qrels(lexalign_queries* queries,
                                                         const char* path);
LEXALIGN_API size_t lexalign_queries_size(const lexalign_queries* queries);
LEXALIGN_API void lexalign_queries_free(lexalign_queries* queries);

/* ---------------------------------------------------------------- index */

typedef struct lexalign_index_stats {
    uint64_t doc_count;
    uint64_t total_tokens;
    double avgdl;
    uint64_t vocab_size;
} lexalign_index_stats;

LEXALIGN_API lexalign_status lexalign_index_build(const lexalign_corpus* corpus,
                                                  unsigned threads, lexalign_index** out);
LEXALIGN_API lexalign_status lexalign_index_save(const lexalign_index* index, const char* path);
LEXALIGN_API lexalign_status lexalign_index_open(const char* path, lexalign_index** out);
LEXALIGN_API lexalign_status lexalign_index_get_stats(const lexalign_index* index,
                                                      lexalign_index_stats* out);
LEXALIGN_API uint64_t lexalign_index_df(const lexalign_index* index, const char* term);
LEXALIGN_API uint64_t lexalign_index_cf(const lexalign_index* index, const char* term);
LEXALIGN_API void lexalign_index_free(lexalign_index* index);

/* -------------------------------------------------------------- scoring */

typedef struct lexalign_scorer_opts {
    const char* model; /* "tfidf" | "bm25" | "ql" | "dfr" */
    double k1;         /* 0.9 */
    double b;          /* 0.4 */
    double lambda;     /* 0.1, Jelinek-Mercer collection weight */
    double c;          /* 1.0, DFR H2 normalization */
    int dfr_h2;        /* 1 = H2-normalized In-L, 0 = raw-tf InL2 */
    double z;          /* carried, used by no formula */
} lexalign_scorer_opts;

LEXALIGN_API void lexalign_scorer_opts_init(lexalign_scorer_opts* opts);

/* Score one query (bag of terms) against one document.
 * degenerate is set for zero-norm TF-IDF cases and for QL queries containing
 * a term unseen in the whole collection (score is -inf then). */
LEXALIGN_API lexalign_status lexalign_score(const lexalign_index* index,
                                            const lexalign_scorer_opts* opts,
                                            const char* const* query_terms, size_t n_terms,
                                            const char* doc_id, double* value, int* degenerate);

/* Exact top-k retrieval for every query; zero-score documents are pruned and
 * ties break by ascending document id. */
LEXALIGN_API lexalign_status lexalign_search(const lexalign_index* index,
                                             const lexalign_queries* queries,
                                             const lexalign_scorer_opts* opts, size_t k,
                                             unsigned threads, lexalign_run** out);
LEXALIGN_API size_t lexalign_run_list_count(const lexalign_run* run);
/* TREC run format: `qid Q0 docid rank score tag`, six-decimal scores. */
LEXALIGN_API lexalign_status lexalign_run_save_trec(const lexalign_run* run, const char* tag,
                                                    const char* path);
LEXALIGN_API void lexalign_run_free(lexalign_run* run);

/* --------------------------------------------------- preference metrics */

typedef struct lexalign_preference_report {
    double sr_human, sr_llm;
    double ndsr_human, ndsr_llm;
    double masr_human, masr_llm;
    double delta_sr, delta_ndsr, delta_masr; /* human - llm */
    double p_sr, p_ndsr, p_masr;             /* paired sign-flip permutation */
    uint64_t masr_human_excluded, masr_llm_excluded;
} lexalign_preference_report;

LEXALIGN_API lexalign_status lexalign_run_preference(const lexalign_run* run, size_t k,
                                                     uint64_t resamples, uint64_t seed,
                                                     lexalign_preference_report* out);

/* ------------------------------------------------- distribution profile */

typedef struct lexalign_zipf_fit {
    double alpha1, r2_core;
    double alpha2, r2_ext;
    uint64_t n_core, n_ext;
    int core_present, ext_present;
} lexalign_zipf_fit;

/* Two-segment Zipf fit over the corpus' pooled rank-frequency table. */
LEXALIGN_API lexalign_status lexalign_corpus_zipf(const lexalign_corpus* corpus, size_t r_c,
                                                  lexalign_zipf_fit* out);

/* Smoothed IDF, ln(1 + (N - n + 0.5)/(n + 0.5)); negative on domain error. */
LEXALIGN_API double lexalign_idf_smoothed(uint64_t doc_count, uint64_t containing);

/* ------------------------------------------------------------ alignment */

/* The array functions treat positions as a shared vocabulary. */
LEXALIGN_API lexalign_status lexalign_kl(const double* p, const double* q, size_t n,
                                         double* out);
LEXALIGN_API lexalign_status lexalign_ql_bound(const double* p_q, const double* p_d, size_t n,
                                               double* out);
/* Water-filling optimum; dfr_offset selects the delta=1 offset instead of
 * delta=k1. out_probs must hold n doubles. */
LEXALIGN_API lexalign_status lexalign_waterfill(const double* p_q, const double* idf, size_t n,
                                                double k1, double l_d, int dfr_offset,
                                                double* out_probs);
LEXALIGN_API lexalign_status lexalign_pearson(const double* xs, const double* ys, size_t n,
                                              double* r, double* p_value);
LEXALIGN_API lexalign_status lexalign_paired_significance(const double* a, const double* b,
                                                          size_t n, uint64_t resamples,
                                                          uint64_t seed, double* p_value);

/* --------------------------------------------------------------- stages */

/* Runs one pipeline stage (ingest|index|retrieve|profile|metrics|align|
 * synth|report) from a resolved configuration in the canonical JSON layout
 * (see the README; the CLI assembles this from TOML + flags). */
LEXALIGN_API lexalign_status lexalign_stage_run(const char* config_json, const char* stage);

/* 16-hex-digit hash echoed into every report; buf must hold >= 17 bytes. */
LEXALIGN_API lexalign_status lexalign_config_hash(const char* config_json, char* buf,
                                                  size_t buflen);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LEXALIGN_H */
