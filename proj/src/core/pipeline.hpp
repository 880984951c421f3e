#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/index.hpp"
#include "core/prefmetrics.hpp"
#include "core/scoring.hpp"

namespace lexalign {

/// Parameters of the bundled synthetic family: a KL ladder of mixed-source
/// corpora plus a shared query set, sized for desk-scale runs.
struct synth_params {
    size_t vocab = 800;
    double alpha1 = 0.9;
    double alpha2 = 1.7;
    size_t r_c = 2000;
    size_t docs = 500;
    double doc_len = 50.0;
    size_t queries = 300;
    double query_len = 10.0;
    size_t rungs = 8;
    double max_kl = 0.5;
    /// Query-side single power-law exponent; kept flat so per-term document
    /// frequencies stay below half the collection.
    double pq_exponent = 0.4;
    /// Exponent of the increasing-rank tilt used as the ladder perturbation.
    double tilt_exponent = 1.2;
};

/// Resolved run configuration. Stage runners consume this structure; the CLI
/// assembles it from flags, environment and the TOML config file. The
/// canonical JSON form feeds the config hash echoed in every report.
struct run_config {
    // inputs
    std::vector<std::string> inputs; ///< document corpora (JSONL)
    std::string queries;
    std::string qrels;
    std::string reference; ///< reference corpus for IDF profiles
    // files
    std::string index_file;
    std::string run_file;
    std::string sidecar;
    std::string output;
    std::string dump; ///< optional rank-frequency TSV dump (profile zipf)
    // stage selectors
    std::string kind;   ///< profile/synth subtype
    std::string scorer; ///< single scorer for retrieve
    std::string source = "human";
    std::string tag = "lexalign";
    // text pipeline
    pipeline_config pipeline;
    // retrieval
    std::vector<std::string> scorers{"tfidf", "bm25", "ql", "dfr"};
    size_t k = 200;
    scorer_config params; ///< shared scorer parameters (model field unused)
    // analysis
    size_t r_c = 2000;
    std::string synonyms;
    double smoothing_eps = 1e-10;
    size_t metrics_k = 10;
    // significance
    uint64_t resamples = 10000;
    uint64_t seed = 42;
    // synthetic family
    synth_params synth;
    // reporting labels
    std::string dataset = "dataset";
    std::string query_type = "human";
    std::string out_dir = "out";
    unsigned threads = 1;

    std::string canonical_json() const;
    static run_config from_json(const std::string& json_text);
    std::string config_hash() const;
};

/// One row of the alignment report.
struct align_row {
    std::string scorer;
    double kl_q_human = 0.0;
    double kl_q_llm = 0.0;
    double delta_kl = 0.0;
    double delta_masr = 0.0;
};

/// Retrieval over all queries with a fixed scorer; parallel across queries,
/// output ordered by query position.
std::vector<ranked_list> run_retrieval(const inverted_index& index, const scorer_config& cfg,
                                       const std::vector<query>& queries, size_t k,
                                       unsigned threads);

/// KL alignment and preference deltas of one mixed corpus against a query
/// set, for each scorer name given.
std::vector<align_row> align_corpora(const corpus& human_docs, const corpus& llm_docs,
                                     const std::vector<query>& queries,
                                     const run_config& cfg);

/// Stage runners. Each reads its inputs from disk, writes its outputs
/// atomically, and raises lexalign::error on failure.
void stage_ingest(const run_config& cfg);
void stage_index(const run_config& cfg);
void stage_retrieve(const run_config& cfg);
void stage_profile(const run_config& cfg);
void stage_metrics(const run_config& cfg);
void stage_align(const run_config& cfg);
void stage_synth(const run_config& cfg);
void stage_report(const run_config& cfg);

/// Dispatch by stage name (ingest|index|retrieve|profile|metrics|align|
/// synth|report).
void run_stage(const run_config& cfg, const std::string& stage);

} // namespace lexalign
