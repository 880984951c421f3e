#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/corpus.hpp"

namespace lexalign {

struct posting {
    uint32_t slot; ///< document slot, ascending by document id
    uint32_t tf;   ///< term frequency, >= 1
};

/// Snapshot of the collection statistics used by the scorers and the
/// distribution analyses.
struct collection_stats {
    uint64_t doc_count = 0;
    uint64_t total_tokens = 0;
    double avgdl = 0.0; ///< total_tokens / doc_count; this is L_d
    std::map<std::string, uint64_t> df;
    std::map<std::string, uint64_t> cf;
    std::optional<double> mean_query_length; ///< L_q when built over a query set
};

/// Immutable inverted index. Documents occupy slots ordered by id so that
/// postings, term ids and statistics are identical for any permutation of the
/// input corpus and any worker count.
class inverted_index {
  public:
    struct doc_entry {
        std::string id;
        source_label source;
        uint32_t length = 0;
    };

    static inverted_index build(const corpus& docs, unsigned threads = 1);

    size_t doc_count() const { return m_docs.size(); }
    uint64_t total_tokens() const { return m_total_tokens; }
    double avgdl() const {
        return m_docs.empty() ? 0.0 : static_cast<double>(m_total_tokens) / m_docs.size();
    }
    const doc_entry& doc(uint32_t slot) const { return m_docs[slot]; }
    std::optional<uint32_t> slot_of(const std::string& doc_id) const;

    size_t vocab_size() const { return m_terms.size(); }
    const std::string& term(uint32_t term_id) const { return m_terms[term_id]; }
    std::optional<uint32_t> term_id(const std::string& term) const;
    const std::vector<posting>& postings(uint32_t term_id) const { return m_postings[term_id]; }

    uint64_t df(uint32_t term_id) const { return m_postings[term_id].size(); }
    uint64_t cf(uint32_t term_id) const { return m_cf[term_id]; }
    uint64_t df(const std::string& term) const;
    uint64_t cf(const std::string& term) const;
    uint32_t tf(uint32_t term_id, uint32_t slot) const;

    /// Materializes the full statistics snapshot (read-only view of the
    /// embedded counts).
    collection_stats stats() const;

    void save(const std::string& path) const;
    static inverted_index load(const std::string& path);

  private:
    std::vector<doc_entry> m_docs; // ordered by id ascending
    std::unordered_map<std::string, uint32_t> m_doc_slots;
    std::vector<std::string> m_terms; // ordered lexicographically
    std::unordered_map<std::string, uint32_t> m_term_ids;
    std::vector<std::vector<posting>> m_postings;
    std::vector<uint64_t> m_cf;
    uint64_t m_total_tokens = 0;

    void rebuild_lookups();
};

double mean_query_length(const std::vector<query>& queries);

} // namespace lexalign
