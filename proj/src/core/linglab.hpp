#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/index.hpp"

namespace lexalign {

struct rank_row {
    std::string term;
    uint64_t freq = 0;
    size_t rank = 0; // 1-based
};

/// Rank-frequency table with frequencies non-increasing and ties broken
/// lexicographically, so the ranking is a pure function of the counts.
struct rank_frequency_table {
    std::vector<rank_row> rows;
};

rank_frequency_table rank_frequency(const std::map<std::string, uint64_t>& counts);
rank_frequency_table rank_frequency(const corpus& docs);

std::map<std::string, uint64_t> pooled_counts(const corpus& docs);

struct segment_fit {
    double alpha = 0.0; ///< negated log-log slope
    double r2 = 0.0;
    size_t n = 0;
};

/// Two-segment fit of log10 f against log10 r, split at the transition rank
/// (the boundary rank itself belongs to the core segment). A side with fewer
/// than two points is reported absent.
struct zipf_fit {
    size_t r_c = 0;
    std::optional<segment_fit> core;
    std::optional<segment_fit> ext;
    size_t n_core = 0;
    size_t n_ext = 0;
};

zipf_fit fit_zipf(const rank_frequency_table& table, size_t r_c);

/// Smoothed inverse document frequency, ln(1 + (N - n + 0.5) / (n + 0.5)).
/// Strictly decreasing in n and finite at n = 0.
double idf_smoothed(uint64_t doc_count, uint64_t containing);

struct idf_profile_result {
    double mean_idf_core = 0.0;
    double mean_idf_ext = 0.0;
    std::map<std::string, double> per_term;
    std::string reference;
};

/// IDF of every term in the target's rank table, computed against the
/// reference collection's document frequencies (absent terms use n = 0).
/// Means are unweighted over the terms of each segment.
idf_profile_result idf_profile(const rank_frequency_table& target,
                               const inverted_index& reference, size_t r_c,
                               const std::string& reference_name);

/// Type-token ratio of one document's token sequence.
double ttr(const std::vector<std::string>& tokens);

struct synonym_lexicon {
    std::map<std::string, std::vector<std::string>> clusters;
};

/// TSV loader: `cluster_id<TAB>term`, one pair per line; '#' starts a
/// comment line. Terms may belong to several clusters.
synonym_lexicon load_synonym_lexicon(const std::string& path);

struct cluster_usage {
    std::string cluster_id;
    size_t used_size = 0; ///< member terms occurring at least once
    size_t lexicon_size = 0;
};

struct synonym_stats {
    std::vector<cluster_usage> clusters;
    double mean_used_size = 0.0; ///< averaged over all lexicon clusters
};

synonym_stats synonym_cluster_stats(const std::map<std::string, uint64_t>& counts,
                                    const synonym_lexicon& lexicon);

/// Corpus frequencies of one cluster's member terms.
std::map<std::string, uint64_t> cluster_distribution(const std::map<std::string, uint64_t>& counts,
                                                     const synonym_lexicon& lexicon,
                                                     const std::string& cluster_id);

} // namespace lexalign
