#include "lexalign/lexalign.h"

#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "core/alignment.hpp"
#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/index.hpp"
#include "core/linglab.hpp"
#include "core/pipeline.hpp"
#include "core/prefmetrics.hpp"
#include "core/scoring.hpp"
#include "core/stats.hpp"
#include "core/tokenizer.hpp"

namespace {

thread_local std::string g_last_error;

lexalign_status map_code(lexalign::errc code) {
    switch (code) {
    case lexalign::errc::io: return LEXALIGN_ERR_IO;
    case lexalign::errc::parse: return LEXALIGN_ERR_PARSE;
    case lexalign::errc::invalid_argument: return LEXALIGN_ERR_INVALID_ARGUMENT;
    case lexalign::errc::duplicate_id: return LEXALIGN_ERR_DUPLICATE_ID;
    case lexalign::errc::state: return LEXALIGN_ERR_STATE;
    case lexalign::errc::domain: return LEXALIGN_ERR_DOMAIN;
    default: return LEXALIGN_ERR_UNKNOWN;
    }
}

template <typename Fn>
lexalign_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return LEXALIGN_OK;
    } catch (const lexalign::error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LEXALIGN_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return LEXALIGN_ERR_UNKNOWN;
    }
}

lexalign_status require(bool cond, const char* message) {
    if (cond) return LEXALIGN_OK;
    g_last_error = message;
    return LEXALIGN_ERR_INVALID_ARGUMENT;
}

lexalign::pipeline_config to_pipeline(const lexalign_pipeline_opts* opts) {
    lexalign::pipeline_config cfg;
    if (opts != nullptr) {
        cfg.lowercase = opts->lowercase != 0;
        cfg.stem = opts->stem != 0;
        cfg.stopwords = opts->stopwords != 0;
        if (opts->stopword_file != nullptr) cfg.stopword_file = opts->stopword_file;
    }
    return cfg;
}

lexalign::scorer_config to_scorer(const lexalign_scorer_opts* opts) {
    lexalign::scorer_config cfg;
    if (opts != nullptr) {
        cfg.model = lexalign::scorer_model_from_string(opts->model ? opts->model : "bm25");
        cfg.k1 = opts->k1;
        cfg.b = opts->b;
        cfg.lambda = opts->lambda;
        cfg.c = opts->c;
        cfg.dfr_h2 = opts->dfr_h2 != 0;
        cfg.z = opts->z;
    }
    return cfg;
}

std::vector<std::string> positional_vocab(size_t n) {
    std::vector<std::string> vocab;
    vocab.reserve(n);
    char buf[24];
    for (size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "w%012zu", i);
        vocab.emplace_back(buf);
    }
    return vocab;
}

lexalign::term_distribution from_array(const double* p, size_t n,
                                       const std::vector<std::string>& vocab) {
    lexalign::term_distribution dist;
    dist.vocab = vocab;
    dist.probs.assign(p, p + n);
    dist.validate();
    return dist;
}

} // namespace

struct lexalign_corpus {
    lexalign::corpus value;
};
struct lexalign_queries {
    std::vector<lexalign::query> value;
};
struct lexalign_index {
    lexalign::inverted_index value;
};
struct lexalign_run {
    std::vector<lexalign::ranked_list> value;
};

extern "C" {

const char* lexalign_version(void) { return "0.1.0"; }

const char* lexalign_last_error(void) { return g_last_error.c_str(); }

void lexalign_pipeline_opts_init(lexalign_pipeline_opts* opts) {
    if (opts == nullptr) return;
    opts->lowercase = 1;
    opts->stem = 0;
    opts->stopwords = 0;
    opts->stopword_file = nullptr;
}

lexalign_status lexalign_stem(const char* word, char* buf, size_t buflen) {
    if (auto rc = require(word && buf && buflen > 0, "lexalign_stem: null argument")) return rc;
    return guarded([&]() {
        std::string out = lexalign::porter_stem(word);
        if (out.size() + 1 > buflen)
            lexalign::raise(lexalign::errc::invalid_argument, "stem buffer too small");
        std::memcpy(buf, out.c_str(), out.size() + 1);
    });
}

lexalign_status lexalign_corpus_open_jsonl(const char* path, lexalign_corpus** out) {
    if (auto rc = require(path && out, "corpus_open: null argument")) return rc;
    return guarded([&]() { *out = new lexalign_corpus{lexalign::ingest_corpus(path)}; });
}

lexalign_status lexalign_corpus_tokenize(lexalign_corpus* corpus,
                                         const lexalign_pipeline_opts* opts) {
    if (auto rc = require(corpus != nullptr, "corpus_tokenize: null corpus")) return rc;
    return guarded([&]() { corpus->value.tokenize_all(to_pipeline(opts)); });
}

size_t lexalign_corpus_size(const lexalign_corpus* corpus) {
    return corpus == nullptr ? 0 : corpus->value.size();
}

void lexalign_corpus_free(lexalign_corpus* corpus) { delete corpus; }

lexalign_status lexalign_queries_open_jsonl(const char* path, lexalign_queries** out) {
    if (auto rc = require(path && out, "queries_open: null argument")) return rc;
    return guarded([&]() { *out = new lexalign_queries{lexalign::ingest_queries(path)}; });
}

lexalign_status lexalign_queries_tokenize(lexalign_queries* queries,
                                          const lexalign_pipeline_opts* opts) {
    if (auto rc = require(queries != nullptr, "queries_tokenize: null queries")) return rc;
    return guarded([&]() { lexalign::tokenize_queries(queries->value, to_pipeline(opts)); });
}

lexalign_status lexalign_queries_load_qrels(lexalign_queries* queries, const char* path) {
    if (auto rc = require(queries && path, "queries_load_qrels: null argument")) return rc;
    return guarded([&]() { lexalign::load_qrels(path, queries->value); });
}

size_t lexalign_queries_size(const lexalign_queries* queries) {
    return queries == nullptr ? 0 : queries->value.size();
}

void lexalign_queries_free(lexalign_queries* queries) { delete queries; }

lexalign_status lexalign_index_build(const lexalign_corpus* corpus, unsigned threads,
                                     lexalign_index** out) {
    if (auto rc = require(corpus && out, "index_build: null argument")) return rc;
    return guarded([&]() {
        *out = new lexalign_index{lexalign::inverted_index::build(corpus->value, threads)};
    });
}

lexalign_status lexalign_index_save(const lexalign_index* index, const char* path) {
    if (auto rc = require(index && path, "index_save: null argument")) return rc;
    return guarded([&]() { index->value.save(path); });
}

lexalign_status lexalign_index_open(const char* path, lexalign_index** out) {
    if (auto rc = require(path && out, "index_open: null argument")) return rc;
    return guarded([&]() { *out = new lexalign_index{lexalign::inverted_index::load(path)}; });
}

lexalign_status lexalign_index_get_stats(const lexalign_index* index,
                                         lexalign_index_stats* out) {
    if (auto rc = require(index && out, "index_get_stats: null argument")) return rc;
    out->doc_count = index->value.doc_count();
    out->total_tokens = index->value.total_tokens();
    out->avgdl = index->value.avgdl();
    out->vocab_size = index->value.vocab_size();
    return LEXALIGN_OK;
}

uint64_t lexalign_index_df(const lexalign_index* index, const char* term) {
    if (index == nullptr || term == nullptr) return 0;
    return index->value.df(std::string(term));
}

uint64_t lexalign_index_cf(const lexalign_index* index, const char* term) {
    if (index == nullptr || term == nullptr) return 0;
    return index->value.cf(std::string(term));
}

void lexalign_index_free(lexalign_index* index) { delete index; }

void lexalign_scorer_opts_init(lexalign_scorer_opts* opts) {
    if (opts == nullptr) return;
    opts->model = "bm25";
    opts->k1 = 0.9;
    opts->b = 0.4;
    opts->lambda = 0.1;
    opts->c = 1.0;
    opts->dfr_h2 = 1;
    opts->z = 0.3;
}

lexalign_status lexalign_score(const lexalign_index* index, const lexalign_scorer_opts* opts,
                               const char* const* query_terms, size_t n_terms,
                               const char* doc_id, double* value, int* degenerate) {
    if (auto rc = require(index && query_terms && doc_id && value, "score: null argument"))
        return rc;
    return guarded([&]() {
        auto slot = index->value.slot_of(doc_id);
        if (!slot)
            lexalign::raise(lexalign::errc::invalid_argument,
                            std::string("unknown document id: ") + doc_id);
        std::vector<std::string> tokens(query_terms, query_terms + n_terms);
        lexalign::scorer s(index->value, to_scorer(opts));
        auto outcome = s.score_pair(tokens, *slot);
        *value = outcome.value;
        if (degenerate != nullptr) *degenerate = outcome.degenerate || outcome.unseen_term;
    });
}

lexalign_status lexalign_search(const lexalign_index* index, const lexalign_queries* queries,
                                const lexalign_scorer_opts* opts, size_t k, unsigned threads,
                                lexalign_run** out) {
    if (auto rc = require(index && queries && out, "search: null argument")) return rc;
    return guarded([&]() {
        *out = new lexalign_run{lexalign::run_retrieval(index->value, to_scorer(opts),
                                                        queries->value, k, threads)};
    });
}

size_t lexalign_run_list_count(const lexalign_run* run) {
    return run == nullptr ? 0 : run->value.size();
}

lexalign_status lexalign_run_save_trec(const lexalign_run* run, const char* tag,
                                       const char* path) {
    if (auto rc = require(run && tag && path, "run_save_trec: null argument")) return rc;
    return guarded([&]() { lexalign::write_run_trec(run->value, tag, path); });
}

void lexalign_run_free(lexalign_run* run) { delete run; }

lexalign_status lexalign_run_preference(const lexalign_run* run, size_t k, uint64_t resamples,
                                        uint64_t seed, lexalign_preference_report* out) {
    if (auto rc = require(run && out, "run_preference: null argument")) return rc;
    return guarded([&]() {
        auto rep = lexalign::build_preference_report(run->value, k, "", resamples, seed);
        out->sr_human = rep.sr_human;
        out->sr_llm = rep.sr_llm;
        out->ndsr_human = rep.ndsr_human;
        out->ndsr_llm = rep.ndsr_llm;
        out->masr_human = rep.masr_human;
        out->masr_llm = rep.masr_llm;
        out->delta_sr = rep.delta_sr;
        out->delta_ndsr = rep.delta_ndsr;
        out->delta_masr = rep.delta_masr;
        out->p_sr = rep.p_sr;
        out->p_ndsr = rep.p_ndsr;
        out->p_masr = rep.p_masr;
        out->masr_human_excluded = rep.masr_human_excluded;
        out->masr_llm_excluded = rep.masr_llm_excluded;
    });
}

lexalign_status lexalign_corpus_zipf(const lexalign_corpus* corpus, size_t r_c,
                                     lexalign_zipf_fit* out) {
    if (auto rc = require(corpus && out, "corpus_zipf: null argument")) return rc;
    return guarded([&]() {
        auto table = lexalign::rank_frequency(corpus->value);
        auto fit = lexalign::fit_zipf(table, r_c);
        out->core_present = fit.core.has_value();
        out->ext_present = fit.ext.has_value();
        out->alpha1 = fit.core ? fit.core->alpha : 0.0;
        out->r2_core = fit.core ? fit.core->r2 : 0.0;
        out->alpha2 = fit.ext ? fit.ext->alpha : 0.0;
        out->r2_ext = fit.ext ? fit.ext->r2 : 0.0;
        out->n_core = fit.n_core;
        out->n_ext = fit.n_ext;
    });
}

double lexalign_idf_smoothed(uint64_t doc_count, uint64_t containing) {
    try {
        return lexalign::idf_smoothed(doc_count, containing);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return -1.0;
    }
}

lexalign_status lexalign_kl(const double* p, const double* q, size_t n, double* out) {
    if (auto rc = require(p && q && out && n > 0, "kl: null argument")) return rc;
    return guarded([&]() {
        auto vocab = positional_vocab(n);
        *out = lexalign::kl_divergence(from_array(p, n, vocab), from_array(q, n, vocab));
    });
}

lexalign_status lexalign_ql_bound(const double* p_q, const double* p_d, size_t n, double* out) {
    if (auto rc = require(p_q && p_d && out && n > 0, "ql_bound: null argument")) return rc;
    return guarded([&]() {
        auto vocab = positional_vocab(n);
        *out = lexalign::ql_expected_bound(from_array(p_q, n, vocab), from_array(p_d, n, vocab));
    });
}

lexalign_status lexalign_waterfill(const double* p_q, const double* idf, size_t n, double k1,
                                   double l_d, int dfr_offset, double* out_probs) {
    if (auto rc = require(p_q && idf && out_probs && n > 0, "waterfill: null argument"))
        return rc;
    return guarded([&]() {
        auto vocab = positional_vocab(n);
        auto result = lexalign::waterfill_optimum(
            from_array(p_q, n, vocab), std::vector<double>(idf, idf + n), k1, l_d,
            dfr_offset ? lexalign::offset_model::dfr : lexalign::offset_model::bm25);
        std::memcpy(out_probs, result.probs.data(), n * sizeof(double));
    });
}

lexalign_status lexalign_pearson(const double* xs, const double* ys, size_t n, double* r,
                                 double* p_value) {
    if (auto rc = require(xs && ys && r, "pearson: null argument")) return rc;
    return guarded([&]() {
        auto res = lexalign::pearson(std::vector<double>(xs, xs + n),
                                     std::vector<double>(ys, ys + n));
        *r = res.r;
        if (p_value != nullptr) *p_value = res.p_value;
    });
}

lexalign_status lexalign_paired_significance(const double* a, const double* b, size_t n,
                                             uint64_t resamples, uint64_t seed,
                                             double* p_value) {
    if (auto rc = require(a && b && p_value, "paired_significance: null argument")) return rc;
    return guarded([&]() {
        *p_value = lexalign::paired_permutation_test(std::vector<double>(a, a + n),
                                                     std::vector<double>(b, b + n), resamples,
                                                     seed);
    });
}

lexalign_status lexalign_stage_run(const char* config_json, const char* stage) {
    if (auto rc = require(config_json && stage, "stage_run: null argument")) return rc;
    return guarded([&]() {
        auto cfg = lexalign::run_config::from_json(config_json);
        lexalign::run_stage(cfg, stage);
    });
}

lexalign_status lexalign_config_hash(const char* config_json, char* buf, size_t buflen) {
    if (auto rc = require(config_json && buf && buflen >= 17, "config_hash: buffer too small"))
        return rc;
    return guarded([&]() {
        auto cfg = lexalign::run_config::from_json(config_json);
        std::string hex = cfg.config_hash();
        std::memcpy(buf, hex.c_str(), hex.size() + 1);
    });
}

} // extern "C"
