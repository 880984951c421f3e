#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/scoring.hpp"

namespace lexalign {

/// Probability distribution over a fixed, sorted vocabulary. Distributions
/// that should be compared must be built over the same (union) vocabulary.
struct term_distribution {
    std::vector<std::string> vocab; ///< sorted, unique
    std::vector<double> probs;      ///< aligned with vocab, sums to 1
    double smoothing_epsilon = 0.0; ///< additive smoothing that produced it

    double prob_of(const std::string& term) const;
    void validate() const;
};

/// Sorted union of the key sets.
std::vector<std::string> union_vocab(const std::vector<const std::map<std::string, uint64_t>*>& counts);

/// Maximum-likelihood token distribution with optional additive smoothing
/// over the supplied vocabulary (which must cover every observed term).
term_distribution make_distribution(const std::map<std::string, uint64_t>& counts,
                                    const std::vector<std::string>& vocab,
                                    double smoothing_epsilon);

/// KL(P || Q) in nats. Supports must be identical; returns +infinity when Q
/// vanishes somewhere P does not.
double kl_divergence(const term_distribution& p, const term_distribution& q);

double entropy_nats(const term_distribution& p);

/// The expected-QL upper bound, -KL(P_Q||P_D) + sum_w P_Q(w) ln P_Q(w).
/// Maximized over P_D exactly at P_D = P_Q, where it equals -H(P_Q).
double ql_expected_bound(const term_distribution& p_q, const term_distribution& p_d);

struct length_law {
    enum class kind { fixed, poisson };
    kind type = kind::poisson;
    double value = 8.0;

    double mean() const { return value; }
    uint64_t draw(class rng& gen) const;
};

struct mc_model {
    term_distribution query_dist;
    length_law query_length{length_law::kind::poisson, 8.0};
    std::vector<term_distribution> doc_models; ///< all over query_dist's vocab
    length_law doc_length{length_law::kind::poisson, 100.0};
};

struct mc_result {
    double estimate = 0.0;
    double std_error = 0.0;
    uint64_t samples = 0;
};

/// Plain Monte-Carlo mean of Score(q, d) over independent draws: q is a
/// token bag from the query model, d a uniformly chosen document model. QL
/// scores the model probabilities directly (JM-smoothed against the mean
/// model with the configured lambda); the tf-based scorers realize the
/// document as a token sequence first and take df/avgdl statistics from the
/// model set. Deterministic per seed for any thread count.
mc_result mc_expected_score(const mc_model& model, const scorer_config& cfg, uint64_t samples,
                            uint64_t seed, unsigned threads = 1);

enum class offset_model { bm25, dfr };

/// Water-filling maximizer of the expected-score surrogate:
/// P*(w) = max{0, alpha * sqrt(P_Q(w) idf(w)) - delta / L_d} with delta = k1
/// for BM25 and 1 for DFR; alpha is found by bisection so the mass is 1
/// within 1e-12.
term_distribution waterfill_optimum(const term_distribution& p_q,
                                    const std::vector<double>& idf, double k1, double l_d,
                                    offset_model model);

struct tf_deviation_result {
    double sigma_sq_max = 0.0;
    std::vector<std::pair<std::string, double>> per_term; ///< sorted by term
};

/// Empirical E_d[(tf(w,d)/|d| - P_D(w))^2] per term, the witness for the
/// bounded-deviation assumption. Empty documents contribute a normalized
/// frequency of zero.
tf_deviation_result tf_deviation_diagnostic(const corpus& docs);

} // namespace lexalign
