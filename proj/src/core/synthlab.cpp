#include "core/synthlab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace lexalign {

void generator_spec::validate() const {
    if (vocab_size < 1) raise(errc::invalid_argument, "vocab_size must be positive");
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        raise(errc::invalid_argument, "power-law exponents must be positive");
    if (r_c >= vocab_size && vocab_size > 1)
        raise(errc::invalid_argument, "transition rank must be below the vocabulary size");
    if (n_docs < 1) raise(errc::invalid_argument, "n_docs must be positive");
    if (!(doc_len_mean > 0.0)) raise(errc::invalid_argument, "doc_len_mean must be positive");
}

std::vector<double> double_power_law(size_t vocab_size, double alpha1, double alpha2, size_t r_c) {
    std::vector<double> w(vocab_size);
    // Continuity at the transition: C2 = r_c^(alpha2 - alpha1).
    double stitch = std::pow(static_cast<double>(r_c), alpha2 - alpha1);
    double total = 0.0;
    for (size_t r = 1; r <= vocab_size; ++r) {
        double v = r <= r_c ? std::pow(static_cast<double>(r), -alpha1)
                            : stitch * std::pow(static_cast<double>(r), -alpha2);
        w[r - 1] = v;
        total += v;
    }
    for (auto& v : w) v /= total;
    return w;
}

std::string synth_term(size_t rank) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%07zu", rank);
    return buf;
}

term_distribution double_power_law_distribution(size_t vocab_size, double alpha1, double alpha2,
                                                size_t r_c) {
    term_distribution dist;
    dist.probs = double_power_law(vocab_size, alpha1, alpha2, r_c);
    dist.vocab.reserve(vocab_size);
    for (size_t r = 1; r <= vocab_size; ++r) dist.vocab.push_back(synth_term(r));
    return dist;
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string text;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) text.push_back(' ');
        text += tokens[i];
    }
    return text;
}

} // namespace

corpus gen_corpus(const generator_spec& spec, const source_label& src,
                  const std::string& id_prefix) {
    spec.validate();
    auto weights = double_power_law(spec.vocab_size, spec.alpha1, spec.alpha2, spec.r_c);
    discrete_sampler sampler(weights);
    rng root(spec.seed);

    corpus out;
    char idbuf[32];
    for (size_t i = 0; i < spec.n_docs; ++i) {
        rng gen = root.split(i);
        uint64_t len = gen.next_poisson(spec.doc_len_mean);
        document d;
        std::snprintf(idbuf, sizeof(idbuf), "%s%06zu", id_prefix.c_str(), i + 1);
        d.id = idbuf;
        d.source = src;
        d.tokens.reserve(len);
        for (uint64_t t = 0; t < len; ++t) d.tokens.push_back(synth_term(sampler.sample(gen) + 1));
        d.text = join_tokens(d.tokens);
        out.add(std::move(d));
    }
    out.mark_tokenized();
    return out;
}

std::vector<query> gen_queries(const term_distribution& p_q, size_t count,
                               const length_law& length, uint64_t seed, const source_label& src,
                               const std::string& id_prefix) {
    p_q.validate();
    discrete_sampler sampler(p_q.probs);
    rng root(seed);
    std::vector<query> out;
    out.reserve(count);
    char idbuf[32];
    for (size_t i = 0; i < count; ++i) {
        rng gen = root.split(i);
        uint64_t len = std::max<uint64_t>(1, length.draw(gen));
        query q;
        std::snprintf(idbuf, sizeof(idbuf), "%s%06zu", id_prefix.c_str(), i + 1);
        q.id = idbuf;
        q.source = src;
        q.tokens.reserve(len);
        for (uint64_t t = 0; t < len; ++t) q.tokens.push_back(p_q.vocab[sampler.sample(gen)]);
        q.text = join_tokens(q.tokens);
        out.push_back(std::move(q));
    }
    return out;
}

namespace {

term_distribution geometric_blend(const term_distribution& p, const term_distribution& u,
                                  double t) {
    term_distribution out;
    out.vocab = p.vocab;
    out.probs.resize(p.probs.size());
    double total = 0.0;
    for (size_t i = 0; i < p.probs.size(); ++i) {
        double v = 0.0;
        if (p.probs[i] > 0.0 && u.probs[i] > 0.0)
            v = std::exp((1.0 - t) * std::log(p.probs[i]) + t * std::log(u.probs[i]));
        else if (t <= 0.0)
            v = p.probs[i];
        else if (t >= 1.0)
            v = u.probs[i];
        out.probs[i] = v;
        total += v;
    }
    for (auto& v : out.probs) v /= total;
    return out;
}

} // namespace

std::vector<term_distribution> kl_ladder_toward(const term_distribution& p_q,
                                                const term_distribution& perturbation,
                                                size_t rungs, double max_kl) {
    if (rungs < 2) raise(errc::invalid_argument, "a KL ladder needs at least two rungs");
    p_q.validate();
    perturbation.validate();
    if (p_q.vocab != perturbation.vocab)
        raise(errc::invalid_argument, "perturbation must share the query vocabulary");

    double reach = kl_divergence(p_q, perturbation);
    if (!(max_kl >= 0.0) || std::isinf(reach) || max_kl > reach)
        raise(errc::domain, "max_kl " + std::to_string(max_kl) +
                                " is unreachable: KL(P_Q||perturbation) = " +
                                std::to_string(reach));

    std::vector<term_distribution> ladder;
    ladder.reserve(rungs);
    for (size_t i = 0; i < rungs; ++i) {
        double target = max_kl * static_cast<double>(i) / static_cast<double>(rungs - 1);
        if (target <= 0.0) {
            ladder.push_back(p_q);
            continue;
        }
        // KL(P_Q || blend(t)) grows monotonically in t on [0, 1].
        double lo = 0.0, hi = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double mid = 0.5 * (lo + hi);
            if (kl_divergence(p_q, geometric_blend(p_q, perturbation, mid)) < target)
                lo = mid;
            else
                hi = mid;
        }
        ladder.push_back(geometric_blend(p_q, perturbation, 0.5 * (lo + hi)));
    }

    double prev = -1.0;
    for (const auto& rung : ladder) {
        double kl = kl_divergence(p_q, rung);
        if (kl <= prev && prev > 0.0)
            raise(errc::domain, "KL ladder is not strictly increasing");
        prev = kl;
    }
    return ladder;
}

std::vector<term_distribution> kl_ladder(const term_distribution& p_q, size_t rungs,
                                         double max_kl, uint64_t seed) {
    rng gen(seed);
    term_distribution tilt;
    tilt.vocab = p_q.vocab;
    tilt.probs.resize(p_q.probs.size());
    double total = 0.0;
    for (size_t i = 0; i < p_q.probs.size(); ++i) {
        double v = p_q.probs[i] > 0.0 ? p_q.probs[i] * std::exp(2.0 * gen.next_gaussian()) : 0.0;
        tilt.probs[i] = v;
        total += v;
    }
    for (auto& v : tilt.probs) v /= total;
    return kl_ladder_toward(p_q, tilt, rungs, max_kl);
}

} // namespace lexalign
