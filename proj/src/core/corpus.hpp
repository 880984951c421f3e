#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/tokenizer.hpp"

namespace lexalign {

/// Origin label of a text. Anything other than "human" or "llm" is carried
/// through verbatim as an opaque tag.
struct source_label {
    enum class kind : uint8_t { human, llm, other };
    kind type = kind::other;
    std::string tag;

    static source_label parse(const std::string& s);
    const std::string& str() const;
    bool operator==(const source_label& rhs) const { return str() == rhs.str(); }
};

struct document {
    std::string id;
    std::string text;
    source_label source;
    std::optional<std::string> pair_id;
    std::vector<std::string> tokens;
};

struct query {
    std::string id;
    std::string text;
    source_label source;
    std::vector<std::string> tokens;
    /// doc id -> relevance grade (>= 0).
    std::map<std::string, int> qrels;
};

class corpus {
  public:
    void add(document doc);
    size_t size() const { return m_docs.size(); }
    bool empty() const { return m_docs.empty(); }
    const document& at(size_t i) const { return m_docs[i]; }
    document& at(size_t i) { return m_docs[i]; }
    const document* find(const std::string& id) const;
    const std::vector<document>& docs() const { return m_docs; }

    bool tokenized() const { return m_tokenized; }
    void tokenize_all(const pipeline_config& cfg);
    /// For generators that fill `tokens` directly instead of running the
    /// text pipeline.
    void mark_tokenized() { m_tokenized = true; }

  private:
    std::vector<document> m_docs;
    std::unordered_map<std::string, size_t> m_by_id;
    bool m_tokenized = false;
};

/// Reads a corpus from JSONL (fields: id, text, source, optional pair_id).
/// Input order is preserved; malformed lines and duplicate ids are reported
/// with their line numbers.
corpus ingest_corpus(const std::string& path);

/// Canonical JSONL form; ingest(write(ingest(x))) is byte-stable.
void write_corpus_jsonl(const corpus& c, const std::string& path);
std::string document_to_jsonl(const document& d);

/// Queries use the same JSONL layout as documents.
std::vector<query> ingest_queries(const std::string& path);
void write_queries_jsonl(const std::vector<query>& qs, const std::string& path);

/// TREC qrels: `qid 0 docid grade`, whitespace separated. Grades must be
/// non-negative. Judgments for unknown query ids are ignored.
void load_qrels(const std::string& path, std::vector<query>& queries);

void tokenize_queries(std::vector<query>& queries, const pipeline_config& cfg);

struct overlap_result {
    double jaccard = 0.0;
    double overlap = 0.0;
};

/// Jaccard and overlap coefficients over token sets; `reference` is the
/// denominator of the overlap ratio (the human side in paired checks).
overlap_result lexical_similarity(const std::vector<std::string>& candidate,
                                  const std::vector<std::string>& reference);

} // namespace lexalign
