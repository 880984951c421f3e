#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/alignment.hpp"
#include "core/corpus.hpp"

namespace lexalign {

/// Parameters of the synthetic double power-law corpus. Token probabilities
/// follow rank^(-alpha1) up to the transition rank and are stitched
/// continuously to rank^(-alpha2) beyond it.
struct generator_spec {
    size_t vocab_size = 10000;
    double alpha1 = 0.9;
    double alpha2 = 1.7;
    size_t r_c = 2000;
    size_t n_docs = 1000;
    double doc_len_mean = 100.0;
    uint64_t seed = 1;

    void validate() const;
};

/// Normalized double power-law weights, rank 1 first.
std::vector<double> double_power_law(size_t vocab_size, double alpha1, double alpha2, size_t r_c);

/// Synthetic vocabulary term for a 1-based rank ("t0000001", ...); the
/// lexicographic order of names follows the rank order.
std::string synth_term(size_t rank);

term_distribution double_power_law_distribution(size_t vocab_size, double alpha1, double alpha2,
                                                size_t r_c);

/// Documents with i.i.d. tokens from the spec's distribution and Poisson
/// lengths. Each document uses its own split seed stream, so output is
/// byte-identical for any parallel schedule; ids are `<prefix><index>`.
corpus gen_corpus(const generator_spec& spec, const source_label& src,
                  const std::string& id_prefix);

/// Query set with i.i.d. tokens from an explicit term distribution.
std::vector<query> gen_queries(const term_distribution& p_q, size_t count,
                               const length_law& length, uint64_t seed, const source_label& src,
                               const std::string& id_prefix);

/// Ladder of distributions with strictly increasing KL(P_Q || P_i), hit by
/// geometric interpolation P_t ∝ P_Q^(1-t) * U^t toward a fixed perturbation
/// U. Targets are evenly spaced from 0 (rung 1 equals P_Q) to max_kl.
/// Errors out when max_kl exceeds KL(P_Q || U).
std::vector<term_distribution> kl_ladder_toward(const term_distribution& p_q,
                                                const term_distribution& perturbation,
                                                size_t rungs, double max_kl);

/// Same, with the perturbation derived from the seed (exponential tilt of
/// P_Q by N(0, 2^2) log-weights).
std::vector<term_distribution> kl_ladder(const term_distribution& p_q, size_t rungs,
                                         double max_kl, uint64_t seed);

} // namespace lexalign
