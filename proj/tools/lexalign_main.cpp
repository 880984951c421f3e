// lexalign command line. All heavy lifting happens behind the C API; this
// binary only resolves configuration (flag > environment > config file >
// default, courtesy of CLI11) and dispatches pipeline stages.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexalign/lexalign.h"

namespace {

struct cli_state {
    // text pipeline
    bool no_lowercase = false;
    bool stem = false;
    bool stopwords = false;
    std::string stopword_file;
    // retrieval
    std::vector<std::string> scorers{"tfidf", "bm25", "ql", "dfr"};
    size_t k = 200;
    double k1 = 0.9, b = 0.4, lambda = 0.1, c = 1.0, z = 0.3;
    bool dfr_raw_tf = false;
    // analysis
    size_t rc = 2000;
    std::string synonyms;
    double smoothing_eps = 1e-10;
    size_t metrics_k = 10;
    // significance
    uint64_t resamples = 10000;
    uint64_t seed = 42;
    // synth family
    size_t synth_vocab = 800, synth_rc = 2000, synth_docs = 500, synth_queries = 300,
           synth_rungs = 8;
    double synth_alpha1 = 0.9, synth_alpha2 = 1.7, synth_doc_len = 50.0,
           synth_query_len = 10.0, synth_max_kl = 0.5, synth_pq_exponent = 0.4,
           synth_tilt_exponent = 1.2;
    // common
    std::string dataset = "dataset", query_type = "human", out_dir = "out",
                tag = "lexalign";
    unsigned threads = 1;
    // per-stage I/O
    std::vector<std::string> inputs;
    std::string queries, qrels, reference, index_file, run_file, sidecar, output, dump,
        scorer, source = "human", kind;

    nlohmann::json to_config() const {
        nlohmann::json j;
        j["inputs"] = inputs;
        j["queries"] = queries;
        j["qrels"] = qrels;
        j["reference"] = reference;
        j["index_file"] = index_file;
        j["run_file"] = run_file;
        j["sidecar"] = sidecar;
        j["output"] = output;
        j["dump"] = dump;
        j["kind"] = kind;
        j["scorer"] = scorer;
        j["source"] = source;
        j["tag"] = tag;
        j["pipeline"] = {{"lowercase", !no_lowercase},
                         {"stem", stem},
                         {"stopwords", stopwords},
                         {"stopword_file", stopword_file}};
        j["scorers"] = scorers;
        j["k"] = k;
        j["params"] = {{"k1", k1},           {"b", b}, {"lambda", lambda},
                       {"c", c},             {"z", z}, {"dfr_h2", !dfr_raw_tf}};
        j["r_c"] = rc;
        j["synonyms"] = synonyms;
        j["smoothing_eps"] = smoothing_eps;
        j["metrics_k"] = metrics_k;
        j["resamples"] = resamples;
        j["seed"] = seed;
        j["synth"] = {{"vocab", synth_vocab},
                      {"alpha1", synth_alpha1},
                      {"alpha2", synth_alpha2},
                      {"r_c", synth_rc},
                      {"docs", synth_docs},
                      {"doc_len", synth_doc_len},
                      {"queries", synth_queries},
                      {"query_len", synth_query_len},
                      {"rungs", synth_rungs},
                      {"max_kl", synth_max_kl},
                      {"pq_exponent", synth_pq_exponent},
                      {"tilt_exponent", synth_tilt_exponent}};
        j["dataset"] = dataset;
        j["query_type"] = query_type;
        j["out_dir"] = out_dir;
        j["threads"] = threads;
        return j;
    }
};

int exit_code_for(lexalign_status status) {
    switch (status) {
    case LEXALIGN_OK: return 0;
    case LEXALIGN_ERR_INVALID_ARGUMENT: return 2;
    case LEXALIGN_ERR_IO:
    case LEXALIGN_ERR_PARSE:
    case LEXALIGN_ERR_DUPLICATE_ID: return 3;
    default: return 4;
    }
}

int dispatch(const cli_state& st, const std::string& stage) {
    std::string config = st.to_config().dump();
    lexalign_status status = lexalign_stage_run(config.c_str(), stage.c_str());
    if (status != LEXALIGN_OK)
        std::fprintf(stderr, "lexalign %s: %s\n", stage.c_str(), lexalign_last_error());
    return exit_code_for(status);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Term-distribution analysis and source-preference measurement for "
                 "term-based retrieval"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", lexalign_version());
    app.set_config("--config", "", "TOML configuration file (flags and environment win)");

    cli_state st;
    // Shared options; LEXALIGN_* environment variables override the file.
    app.add_flag("--no-lowercase", st.no_lowercase, "Keep original casing")
        ->envname("LEXALIGN_NO_LOWERCASE");
    app.add_flag("--stem", st.stem, "Porter stemming")->envname("LEXALIGN_STEM");
    app.add_flag("--stopwords", st.stopwords, "Remove stopwords (after stemming)")
        ->envname("LEXALIGN_STOPWORDS");
    app.add_option("--stopword-file", st.stopword_file, "Stopword list override")
        ->envname("LEXALIGN_STOPWORD_FILE");
    app.add_option("--scorers", st.scorers, "Scorer set for align/report")
        ->envname("LEXALIGN_SCORERS");
    app.add_option("--k", st.k, "Retrieval depth")->envname("LEXALIGN_K");
    app.add_option("--k1", st.k1, "BM25 k1")->envname("LEXALIGN_K1");
    app.add_option("--b", st.b, "BM25 b")->envname("LEXALIGN_B");
    app.add_option("--lambda", st.lambda, "QL Jelinek-Mercer collection weight")
        ->envname("LEXALIGN_LAMBDA");
    app.add_option("--c", st.c, "DFR H2 normalization constant")->envname("LEXALIGN_C");
    app.add_option("--z", st.z, "DFR z (carried, unused by the formulas)")
        ->envname("LEXALIGN_Z");
    app.add_flag("--dfr-raw-tf", st.dfr_raw_tf, "Raw-tf InL2 instead of the H2 form")
        ->envname("LEXALIGN_DFR_RAW_TF");
    app.add_option("--rc", st.rc, "Zipf transition rank")->envname("LEXALIGN_RC");
    app.add_option("--synonyms", st.synonyms, "Synonym lexicon TSV")
        ->envname("LEXALIGN_SYNONYMS");
    app.add_option("--smoothing-eps", st.smoothing_eps, "Additive KL smoothing")
        ->envname("LEXALIGN_SMOOTHING_EPS");
    app.add_option("--metrics-k", st.metrics_k, "Cutoff for SR/NDSR and relevance metrics")
        ->envname("LEXALIGN_METRICS_K");
    app.add_option("--resamples", st.resamples, "Permutation-test resamples")
        ->envname("LEXALIGN_RESAMPLES");
    app.add_option("--seed", st.seed, "Master random seed")->envname("LEXALIGN_SEED");
    app.add_option("--dataset", st.dataset, "Dataset label in reports")
        ->envname("LEXALIGN_DATASET");
    app.add_option("--query-type", st.query_type, "Query type label in reports")
        ->envname("LEXALIGN_QUERY_TYPE");
    app.add_option("--outdir", st.out_dir, "Output directory for family stages")
        ->envname("LEXALIGN_OUTDIR");
    app.add_option("--tag", st.tag, "TREC run tag")->envname("LEXALIGN_TAG");
    app.add_option("--threads", st.threads, "Worker threads (outputs are identical for any N)")
        ->envname("LEXALIGN_THREADS");
    app.add_option("--synth-vocab", st.synth_vocab, "Synthetic vocabulary size");
    app.add_option("--synth-alpha1", st.synth_alpha1, "Synthetic core exponent");
    app.add_option("--synth-alpha2", st.synth_alpha2, "Synthetic extended exponent");
    app.add_option("--synth-rc", st.synth_rc, "Synthetic transition rank");
    app.add_option("--synth-docs", st.synth_docs, "Documents per synthetic corpus");
    app.add_option("--synth-doc-len", st.synth_doc_len, "Mean synthetic document length");
    app.add_option("--synth-queries", st.synth_queries, "Synthetic query count");
    app.add_option("--synth-query-len", st.synth_query_len, "Mean synthetic query length");
    app.add_option("--synth-rungs", st.synth_rungs, "KL ladder rungs");
    app.add_option("--synth-max-kl", st.synth_max_kl, "Top-of-ladder KL target (nats)");
    app.add_option("--synth-pq-exponent", st.synth_pq_exponent,
                   "Query-side power-law exponent of the family");
    app.add_option("--synth-tilt-exponent", st.synth_tilt_exponent,
                   "Rank-tilt exponent of the ladder perturbation");

    auto* ingest = app.add_subcommand("ingest", "Validate and canonicalize a JSONL corpus");
    ingest->add_option("--input", st.inputs, "Corpus JSONL")->required()->expected(1);
    ingest->add_option("--output", st.output, "Canonical JSONL destination")->required();

    auto* index_cmd = app.add_subcommand("index", "Build an index snapshot");
    index_cmd->add_option("--input", st.inputs, "Corpora to merge")->required();
    index_cmd->add_option("--index", st.index_file, "Snapshot destination")->required();

    auto* retrieve = app.add_subcommand("retrieve", "Top-k retrieval to a TREC run file");
    retrieve->add_option("--input", st.inputs, "Corpora (unless --index is given)");
    retrieve->add_option("--index", st.index_file, "Index snapshot");
    retrieve->add_option("--queries", st.queries, "Query JSONL")->required();
    retrieve->add_option("--qrels", st.qrels, "TREC qrels (extends the source sidecar)");
    retrieve->add_option("--scorer", st.scorer, "tfidf|bm25|ql|dfr")->required();
    retrieve->add_option("--run", st.run_file, "TREC run destination")->required();
    retrieve->add_option("--sources", st.sidecar, "Source sidecar destination");

    auto* profile = app.add_subcommand("profile", "Distribution profiles");
    for (const char* kind : {"zipf", "idf", "ttr", "synonyms"}) {
        auto* sub = profile->add_subcommand(kind);
        sub->add_option("--input", st.inputs, "Corpora to profile")->required();
        sub->add_option("--output", st.output, "Report CSV")->required();
        if (std::string(kind) == "zipf")
            sub->add_option("--dump", st.dump, "Rank-frequency TSV dump prefix");
        if (std::string(kind) == "idf")
            sub->add_option("--reference", st.reference, "Reference corpus")->required();
    }

    auto* metrics = app.add_subcommand("metrics", "Source-preference and relevance metrics");
    metrics->add_option("--run", st.run_file, "TREC run file")->required();
    metrics->add_option("--sources", st.sidecar, "Source sidecar")->required();
    metrics->add_option("--qrels", st.qrels, "TREC qrels (adds relevance metrics)");
    metrics->add_option("--scorer", st.scorer, "Scorer label for the report");
    metrics->add_option("--output", st.output, "Metrics CSV")->required();

    auto* align = app.add_subcommand("align", "KL alignment vs preference deltas");
    align->add_option("--input", st.inputs, "Two corpora: human then llm")
        ->required()
        ->expected(2);
    align->add_option("--queries", st.queries, "Query JSONL")->required();
    align->add_option("--output", st.output, "Alignment CSV")->required();

    auto* synth = app.add_subcommand("synth", "Synthetic corpora");
    auto* synth_corpus = synth->add_subcommand("corpus", "Double power-law corpus");
    synth_corpus->add_option("--output", st.output, "Corpus JSONL")->required();
    synth_corpus->add_option("--source", st.source, "Source label");
    auto* synth_queries = synth->add_subcommand("queries", "Query sample from the family P_Q");
    synth_queries->add_option("--output", st.output, "Query JSONL")->required();
    synth_queries->add_option("--source", st.source, "Source label");
    auto* synth_ladder =
        synth->add_subcommand("ladder", "KL-ladder family (corpora + queries) under --outdir");

    auto* report = app.add_subcommand(
        "report", "Family alignment report (KL vs preference, Pearson summary)");

    CLI11_PARSE(app, argc, argv);

    if (ingest->parsed()) return dispatch(st, "ingest");
    if (index_cmd->parsed()) return dispatch(st, "index");
    if (retrieve->parsed()) return dispatch(st, "retrieve");
    if (profile->parsed()) {
        for (auto* sub : profile->get_subcommands()) st.kind = sub->get_name();
        if (st.kind.empty()) {
            std::fprintf(stderr, "profile requires a subcommand: zipf|idf|ttr|synonyms\n");
            return 2;
        }
        return dispatch(st, "profile");
    }
    if (metrics->parsed()) return dispatch(st, "metrics");
    if (align->parsed()) return dispatch(st, "align");
    if (synth->parsed()) {
        if (synth_corpus->parsed()) st.kind = "corpus";
        else if (synth_queries->parsed()) st.kind = "queries";
        else if (synth_ladder->parsed()) st.kind = "ladder";
        if (st.kind.empty()) {
            std::fprintf(stderr, "synth requires a subcommand: corpus|queries|ladder\n");
            return 2;
        }
        return dispatch(st, "synth");
    }
    if (report->parsed()) return dispatch(st, "report");
    return 2;
}
