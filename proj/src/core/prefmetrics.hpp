#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/scoring.hpp"

namespace lexalign {

struct at_k_result {
    double value = 0.0;
    size_t effective_k = 0; ///< the depth actually available
    bool truncated = false; ///< list was shorter than the requested k
};

/// Proportion of source-s documents among the top k (computed at available
/// depth when the list is shorter).
at_k_result sr_at_k(const ranked_list& list, const std::string& source, size_t k);

/// Position-discounted source ratio with w_i = 1 / log2(1 + i).
at_k_result ndsr_at_k(const ranked_list& list, const std::string& source, size_t k);

/// Mean of SR_s@i over the positions i that hold a source-s document.
/// Undefined (nullopt) when the list contains no source-s document; such
/// queries are excluded from macro averages.
std::optional<double> masr(const ranked_list& list, const std::string& source);

enum class eval_mode { mixed, source_filtered };

struct relevance_result {
    double precision_at_k = 0.0;
    double ndcg_at_k = 0.0;
    double map = 0.0;
    bool unjudged = false; ///< no qualifying judged document for this query
};

/// Standard P@k / NDCG@k (gain = grade, log2 discount) / MAP. In
/// source_filtered mode, judged documents from other sources count as
/// irrelevant while keeping their ranks; `source_of` supplies labels for
/// judged documents that were not retrieved.
relevance_result relevance_metrics(const ranked_list& list,
                                   const std::map<std::string, int>& qrels, eval_mode mode,
                                   const std::string& source_filter, size_t k,
                                   const std::map<std::string, std::string>& source_of);

/// Relative performance difference, (h - l) / ((h + l) / 2); undefined when
/// both inputs are zero.
std::optional<double> relative_delta(double value_human, double value_llm);

struct preference_row {
    std::string query_id;
    at_k_result sr_human, sr_llm;
    at_k_result ndsr_human, ndsr_llm;
    std::optional<double> masr_human, masr_llm;
};

/// Macro-averaged source-preference report over a run. MASR-undefined
/// queries are dropped from the affected mean (and from the paired test for
/// that metric); the counts record how many were dropped.
struct source_preference_report {
    size_t k = 0;
    std::string scorer;
    std::vector<preference_row> per_query;
    double sr_human = 0.0, sr_llm = 0.0, ndsr_human = 0.0, ndsr_llm = 0.0;
    double masr_human = 0.0, masr_llm = 0.0;
    size_t masr_human_excluded = 0, masr_llm_excluded = 0;
    double delta_sr = 0.0, delta_ndsr = 0.0, delta_masr = 0.0;
    double p_sr = 1.0, p_ndsr = 1.0, p_masr = 1.0;
};

source_preference_report build_preference_report(const std::vector<ranked_list>& lists, size_t k,
                                                 const std::string& scorer_name,
                                                 uint64_t resamples, uint64_t seed);

} // namespace lexalign
