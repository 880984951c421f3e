#include "core/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace lexalign {

double term_distribution::prob_of(const std::string& term) const {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), term);
    if (it == vocab.end() || *it != term) return 0.0;
    return probs[static_cast<size_t>(it - vocab.begin())];
}

void term_distribution::validate() const {
    if (vocab.size() != probs.size())
        raise(errc::invalid_argument, "distribution vocab/probability size mismatch");
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) raise(errc::domain, "negative probability in term distribution");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        raise(errc::domain, "term distribution does not sum to 1");
}

std::vector<std::string> union_vocab(
    const std::vector<const std::map<std::string, uint64_t>*>& counts) {
    std::set<std::string> all;
    for (const auto* m : counts)
        for (const auto& [term, freq] : *m) all.insert(term);
    return {all.begin(), all.end()};
}

term_distribution make_distribution(const std::map<std::string, uint64_t>& counts,
                                    const std::vector<std::string>& vocab,
                                    double smoothing_epsilon) {
    term_distribution dist;
    dist.vocab = vocab;
    dist.smoothing_epsilon = smoothing_epsilon;
    dist.probs.assign(vocab.size(), 0.0);

    uint64_t total = 0;
    for (const auto& [term, freq] : counts) {
        if (!std::binary_search(vocab.begin(), vocab.end(), term))
            raise(errc::invalid_argument, "observed term outside the supplied vocabulary: " + term);
        total += freq;
    }
    if (total == 0) raise(errc::invalid_argument, "term distribution over zero tokens");

    double denom = static_cast<double>(total) +
                   smoothing_epsilon * static_cast<double>(vocab.size());
    for (size_t i = 0; i < vocab.size(); ++i) {
        auto it = counts.find(vocab[i]);
        double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        dist.probs[i] = (c + smoothing_epsilon) / denom;
    }
    return dist;
}

double kl_divergence(const term_distribution& p, const term_distribution& q) {
    if (p.vocab != q.vocab)
        raise(errc::invalid_argument, "KL divergence requires identical support vocabularies");
    double sum = 0.0;
    for (size_t i = 0; i < p.probs.size(); ++i) {
        double pi = p.probs[i];
        if (pi <= 0.0) continue;
        double qi = q.probs[i];
        if (qi <= 0.0) return std::numeric_limits<double>::infinity();
        sum += pi * std::log(pi / qi);
    }
    return std::max(sum, 0.0);
}

double entropy_nats(const term_distribution& p) {
    double h = 0.0;
    for (double pi : p.probs)
        if (pi > 0.0) h -= pi * std::log(pi);
    return h;
}

double ql_expected_bound(const term_distribution& p_q, const term_distribution& p_d) {
    double kl = kl_divergence(p_q, p_d);
    if (std::isinf(kl)) return -std::numeric_limits<double>::infinity();
    return -kl - entropy_nats(p_q);
}

uint64_t length_law::draw(rng& gen) const {
    switch (type) {
    case kind::fixed: return static_cast<uint64_t>(std::llround(value));
    case kind::poisson: return gen.next_poisson(value);
    }
    return 0;
}

namespace {

struct mc_context {
    const mc_model& model;
    const scorer_config& cfg;
    discrete_sampler query_sampler;
    term_distribution mean_model;
    std::vector<uint64_t> df;   // per vocab term, over doc models
    double avgdl;

    explicit mc_context(const mc_model& m, const scorer_config& c)
        : model(m), cfg(c), query_sampler(m.query_dist.probs) {
        size_t v = m.query_dist.vocab.size();
        mean_model.vocab = m.query_dist.vocab;
        mean_model.probs.assign(v, 0.0);
        df.assign(v, 0);
        for (const auto& dm : m.doc_models) {
            if (dm.vocab != m.query_dist.vocab)
                raise(errc::invalid_argument,
                      "document models must share the query distribution's vocabulary");
            for (size_t i = 0; i < v; ++i) {
                mean_model.probs[i] += dm.probs[i];
                if (dm.probs[i] > 0.0) ++df[i];
            }
        }
        for (auto& p : mean_model.probs) p /= static_cast<double>(m.doc_models.size());
        avgdl = m.doc_length.mean();
    }

    double sample_score(rng& gen) const {
        size_t doc_idx = static_cast<size_t>(gen.next_below(model.doc_models.size()));
        const auto& dm = model.doc_models[doc_idx];
        uint64_t qlen = model.query_length.draw(gen);

        if (cfg.model == scorer_model::ql_jm) {
            double score = 0.0;
            for (uint64_t t = 0; t < qlen; ++t) {
                size_t w = query_sampler.sample(gen);
                double p = (1.0 - cfg.lambda) * dm.probs[w] + cfg.lambda * mean_model.probs[w];
                score += std::log(p);
            }
            return score;
        }

        // tf-based scorers: realize the document as tokens first.
        std::map<size_t, double> qtf;
        for (uint64_t t = 0; t < qlen; ++t) ++qtf[query_sampler.sample(gen)];
        uint64_t dlen = model.doc_length.draw(gen);
        discrete_sampler doc_sampler(dm.probs);
        std::map<size_t, uint32_t> dtf;
        for (uint64_t t = 0; t < dlen; ++t) ++dtf[doc_sampler.sample(gen)];

        double n = static_cast<double>(model.doc_models.size());
        switch (cfg.model) {
        case scorer_model::tfidf: {
            double dot = 0.0, qs = 0.0, ds = 0.0;
            std::map<size_t, double> widf;
            for (const auto& [w, tf] : dtf) {
                if (df[w] == 0) continue;
                double idf = std::log(n / static_cast<double>(df[w]));
                double td = tf * idf;
                ds += td * td;
                widf[w] = idf;
            }
            for (const auto& [w, tf] : qtf) {
                if (df[w] == 0) continue;
                double idf = std::log(n / static_cast<double>(df[w]));
                double tq = tf * idf;
                qs += tq * tq;
                auto it = dtf.find(w);
                if (it != dtf.end()) dot += tq * it->second * idf;
            }
            if (qs <= 0.0 || ds <= 0.0) return 0.0;
            return dot / (std::sqrt(qs) * std::sqrt(ds));
        }
        case scorer_model::bm25: {
            double score = 0.0;
            for (const auto& [w, qf] : qtf) {
                auto it = dtf.find(w);
                if (it == dtf.end() || df[w] == 0) continue;
                double dfw = static_cast<double>(df[w]);
                double idf = std::log((n - dfw + 0.5) / (dfw + 0.5));
                double k = cfg.k1 * ((1.0 - cfg.b) + cfg.b * static_cast<double>(dlen) / avgdl);
                score += qf * idf * (cfg.k1 + 1.0) * it->second / (k + it->second);
            }
            return score;
        }
        case scorer_model::dfr_inlh2: {
            double score = 0.0;
            for (const auto& [w, qf] : qtf) {
                auto it = dtf.find(w);
                if (it == dtf.end() || df[w] == 0) continue;
                double tfn = cfg.dfr_h2 ? it->second * std::log2(1.0 + cfg.c * avgdl / dlen)
                                        : static_cast<double>(it->second);
                double idf = std::log2((n + 1.0) / (static_cast<double>(df[w]) + 0.5));
                score += qf * tfn * idf / (tfn + 1.0);
            }
            return score;
        }
        default:
            return 0.0;
        }
    }
};

} // namespace

mc_result mc_expected_score(const mc_model& model, const scorer_config& cfg, uint64_t samples,
                            uint64_t seed, unsigned threads) {
    if (samples < 1) raise(errc::invalid_argument, "mc estimator needs at least one sample");
    if (model.doc_models.empty())
        raise(errc::invalid_argument, "mc estimator needs at least one document model");
    model.query_dist.validate();
    cfg.validate();

    mc_context ctx(model, cfg);
    rng root(seed);

    // Fixed-size chunks pin each sample to a split stream, making the result
    // independent of the worker count.
    constexpr uint64_t chunk_size = 4096;
    uint64_t n_chunks = (samples + chunk_size - 1) / chunk_size;
    std::vector<double> chunk_sum(n_chunks, 0.0), chunk_sumsq(n_chunks, 0.0);

    auto run_chunk = [&](uint64_t c) {
        rng gen = root.split(c);
        uint64_t begin = c * chunk_size;
        uint64_t end = std::min(samples, begin + chunk_size);
        double s = 0.0, ss = 0.0;
        for (uint64_t i = begin; i < end; ++i) {
            double v = ctx.sample_score(gen);
            s += v;
            ss += v * v;
        }
        chunk_sum[c] = s;
        chunk_sumsq[c] = ss;
    };

    if (threads <= 1 || n_chunks == 1) {
        for (uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<uint64_t> next{0};
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    uint64_t c = next.fetch_add(1);
                    if (c >= n_chunks) return;
                    run_chunk(c);
                }
            });
        for (auto& t : pool) t.join();
    }

    double sum = 0.0, sumsq = 0.0;
    for (uint64_t c = 0; c < n_chunks; ++c) {
        sum += chunk_sum[c];
        sumsq += chunk_sumsq[c];
    }
    mc_result out;
    out.samples = samples;
    out.estimate = sum / static_cast<double>(samples);
    if (samples > 1) {
        double var = (sumsq - sum * sum / static_cast<double>(samples)) /
                     static_cast<double>(samples - 1);
        out.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    }
    return out;
}

term_distribution waterfill_optimum(const term_distribution& p_q,
                                    const std::vector<double>& idf, double k1, double l_d,
                                    offset_model model) {
    p_q.validate();
    if (idf.size() != p_q.vocab.size())
        raise(errc::invalid_argument, "idf vector does not match the vocabulary");
    for (double v : idf)
        if (!(v > 0.0)) raise(errc::invalid_argument, "water-filling requires positive idf");
    if (!(l_d > 0.0)) raise(errc::invalid_argument, "average document length must be positive");
    if (!(k1 > 0.0)) raise(errc::invalid_argument, "k1 must be positive");

    double delta = model == offset_model::bm25 ? k1 : 1.0;
    double offset = delta / l_d;

    std::vector<double> s(p_q.probs.size());
    double s_min_pos = std::numeric_limits<double>::infinity();
    bool any_positive = false;
    for (size_t i = 0; i < s.size(); ++i) {
        s[i] = std::sqrt(p_q.probs[i] * idf[i]);
        if (s[i] > 0.0) {
            any_positive = true;
            s_min_pos = std::min(s_min_pos, s[i]);
        }
    }
    if (!any_positive)
        raise(errc::domain, "water-filling infeasible: sqrt(P_Q * idf) vanishes everywhere, "
                            "normalization to unit mass cannot bind");

    auto mass = [&](double alpha) {
        double m = 0.0;
        for (double si : s) m += std::max(0.0, alpha * si - offset);
        return m;
    };

    double lo = 0.0;
    double hi = (1.0 + offset * static_cast<double>(s.size())) / s_min_pos;
    double alpha = hi;
    for (int iter = 0; iter < 200; ++iter) {
        alpha = 0.5 * (lo + hi);
        double m = mass(alpha);
        if (std::fabs(m - 1.0) <= 1e-12) break;
        if (m < 1.0)
            lo = alpha;
        else
            hi = alpha;
    }

    term_distribution out;
    out.vocab = p_q.vocab;
    out.probs.resize(s.size());
    double total = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        out.probs[i] = std::max(0.0, alpha * s[i] - offset);
        total += out.probs[i];
    }
    for (auto& p : out.probs) p /= total;
    return out;
}

tf_deviation_result tf_deviation_diagnostic(const corpus& docs) {
    if (docs.size() < 2)
        raise(errc::invalid_argument, "deviation diagnostic needs at least two documents");
    if (!docs.tokenized()) raise(errc::state, "corpus must be tokenized");

    std::map<std::string, double> marginal;
    uint64_t total = 0;
    for (const auto& d : docs.docs()) {
        total += d.tokens.size();
        for (const auto& t : d.tokens) marginal[t] += 1.0;
    }
    if (total == 0) raise(errc::invalid_argument, "deviation diagnostic over zero tokens");
    for (auto& [term, c] : marginal) c /= static_cast<double>(total);

    std::map<std::string, double> acc;
    for (const auto& [term, p] : marginal) acc[term] = 0.0;
    for (const auto& d : docs.docs()) {
        std::map<std::string, uint64_t> tf;
        for (const auto& t : d.tokens) ++tf[t];
        double len = static_cast<double>(d.tokens.size());
        for (auto& [term, p] : marginal) {
            double norm_tf = 0.0;
            if (len > 0.0) {
                auto it = tf.find(term);
                norm_tf = it == tf.end() ? 0.0 : static_cast<double>(it->second) / len;
            }
            double dev = norm_tf - p;
            acc[term] += dev * dev;
        }
    }

    tf_deviation_result out;
    double n = static_cast<double>(docs.size());
    for (auto& [term, sum] : acc) {
        double var = sum / n;
        out.per_term.emplace_back(term, var);
        out.sigma_sq_max = std::max(out.sigma_sq_max, var);
    }
    return out;
}

} // namespace lexalign
