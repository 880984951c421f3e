#pragma once

#include <limits>
#include <string>
#include <vector>

#include "core/index.hpp"

namespace lexalign {

enum class scorer_model { tfidf, bm25, ql_jm, dfr_inlh2 };

scorer_model scorer_model_from_string(const std::string& name);
const char* scorer_model_name(scorer_model m);

/// Scorer parameters. Defaults reproduce the reference configuration:
/// BM25 k1=0.9 b=0.4, Jelinek-Mercer lambda=0.1 (collection-model weight),
/// DFR In-L with H2 length normalization and c=1.
struct scorer_config {
    scorer_model model = scorer_model::bm25;
    double k1 = 0.9;
    double b = 0.4;
    double lambda = 0.1;
    double c = 1.0;
    /// When false, DFR uses the raw-tf InL2 form (tfn := tf) instead of the
    /// H2-normalized one.
    bool dfr_h2 = true;
    /// Listed alongside the reference DFR parameters but used by no formula;
    /// kept so configurations round-trip.
    double z = 0.3;

    void validate() const;
};

struct ranked_entry {
    std::string doc_id;
    double score = 0.0;
    source_label source;
};

struct ranked_list {
    std::string query_id;
    std::vector<ranked_entry> entries; ///< scores non-increasing, ties by id
    size_t depth = 0;                  ///< the k this list was cut at
};

struct score_outcome {
    double value = 0.0;
    bool degenerate = false;  ///< zero-norm query or document (TF-IDF)
    bool unseen_term = false; ///< QL met a term with zero collection frequency
};

/// Scores queries against an immutable index. Instances are read-only after
/// construction and safe to share across threads. Queries are treated as
/// bags: a term occurring twice contributes twice.
class scorer {
  public:
    scorer(const inverted_index& index, const scorer_config& cfg);

    const scorer_config& config() const { return m_cfg; }

    /// Relevance of one document for one query; reports degenerate cases
    /// instead of silently folding them into the score.
    score_outcome score_pair(const std::vector<std::string>& query_tokens, uint32_t slot) const;

    /// Exact top-k over posting-matched candidates. Zero-score documents are
    /// pruned; ties are broken by ascending document id. QL terms absent from
    /// the whole collection are skipped (they shift every candidate equally).
    ranked_list search_topk(const std::string& query_id,
                            const std::vector<std::string>& query_tokens, size_t k) const;

  private:
    struct query_view {
        std::vector<uint32_t> term_ids;
        std::vector<double> term_counts;       // query-side tf per entry
        std::vector<std::string> precise_oov;  // terms with no posting (QL sentinel)
    };
    query_view analyze(const std::vector<std::string>& tokens) const;
    double term_weight_tfidf(uint32_t tid) const;
    double contribution(uint32_t tid, double qtf, uint32_t tf, uint32_t doc_len) const;

    const inverted_index& m_index;
    scorer_config m_cfg;
    std::vector<double> m_tfidf_doc_norms; // filled for the tfidf model only
};

/// TREC run format: `qid Q0 docid rank score tag`, rank from 1, score with
/// six decimals.
void write_run_trec(const std::vector<ranked_list>& lists, const std::string& tag,
                    const std::string& path);
std::vector<ranked_list> read_run_trec(const std::string& path);

/// Sidecar mapping doc id -> source for metric consumption, one JSON object
/// per line, ordered by doc id.
void write_source_sidecar(const std::vector<std::pair<std::string, std::string>>& id_sources,
                          const std::string& path);
std::vector<std::pair<std::string, std::string>> read_source_sidecar(const std::string& path);

} // namespace lexalign
