// Independent reference implementations used only by tests. These
// deliberately recompute everything from first principles (dense vectors,
// full rescans) and share no code with the library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct doc {
    std::string id;
    std::string source;
    std::vector<std::string> tokens;
};

using token_bag = std::vector<std::string>;

inline std::map<std::string, double> tf_of(const token_bag& tokens) {
    std::map<std::string, double> tf;
    for (const auto& t : tokens) tf[t] += 1.0;
    return tf;
}

inline std::map<std::string, double> df_of(const std::vector<doc>& docs) {
    std::map<std::string, double> df;
    for (const auto& d : docs)
        for (const auto& [term, tf] : tf_of(d.tokens)) df[term] += 1.0;
    return df;
}

inline double total_tokens(const std::vector<doc>& docs) {
    double n = 0.0;
    for (const auto& d : docs) n += d.tokens.size();
    return n;
}

inline double avgdl_of(const std::vector<doc>& docs) {
    return docs.empty() ? 0.0 : total_tokens(docs) / docs.size();
}

inline double naive_tfidf(const token_bag& query, const doc& d, const std::vector<doc>& docs) {
    auto df = df_of(docs);
    double n = static_cast<double>(docs.size());
    auto qtf = tf_of(query);
    auto dtf = tf_of(d.tokens);
    std::set<std::string> vocab;
    for (const auto& [t, v] : qtf) vocab.insert(t);
    for (const auto& [t, v] : dtf) vocab.insert(t);
    double dot = 0.0, qn = 0.0, dn = 0.0;
    for (const auto& t : vocab) {
        auto it = df.find(t);
        double idf = it == df.end() ? 0.0 : std::log(n / it->second);
        double tq = (qtf.count(t) ? qtf[t] : 0.0) * idf;
        double td = (dtf.count(t) ? dtf[t] : 0.0) * idf;
        dot += tq * td;
        qn += tq * tq;
        dn += td * td;
    }
    if (qn <= 0.0 || dn <= 0.0) return 0.0;
    return dot / (std::sqrt(qn) * std::sqrt(dn));
}

inline double naive_bm25(const token_bag& query, const doc& d, const std::vector<doc>& docs,
                         double k1, double b) {
    auto df = df_of(docs);
    double n = static_cast<double>(docs.size());
    double avgdl = avgdl_of(docs);
    auto dtf = tf_of(d.tokens);
    double score = 0.0;
    for (const auto& term : query) {
        auto it = dtf.find(term);
        if (it == dtf.end()) continue;
        double dfw = df[term];
        double idf = std::log((n - dfw + 0.5) / (dfw + 0.5));
        double k = k1 * ((1.0 - b) + b * d.tokens.size() / avgdl);
        score += idf * (k1 + 1.0) * it->second / (k + it->second);
    }
    return score;
}

inline double naive_ql(const token_bag& query, const doc& d, const std::vector<doc>& docs,
                       double lambda) {
    std::map<std::string, double> cf;
    for (const auto& dd : docs)
        for (const auto& t : dd.tokens) cf[t] += 1.0;
    double total = total_tokens(docs);
    auto dtf = tf_of(d.tokens);
    double score = 0.0;
    for (const auto& term : query) {
        double ml = d.tokens.empty()
                        ? 0.0
                        : (dtf.count(term) ? dtf[term] : 0.0) / d.tokens.size();
        double coll = (cf.count(term) ? cf[term] : 0.0) / total;
        score += std::log((1.0 - lambda) * ml + lambda * coll);
    }
    return score;
}

inline double naive_dfr(const token_bag& query, const doc& d, const std::vector<doc>& docs,
                        double c, bool h2) {
    auto df = df_of(docs);
    double n = static_cast<double>(docs.size());
    double avgdl = avgdl_of(docs);
    auto dtf = tf_of(d.tokens);
    double score = 0.0;
    for (const auto& term : query) {
        auto it = dtf.find(term);
        if (it == dtf.end()) continue;
        double tf = it->second;
        double tfn = h2 ? tf * std::log2(1.0 + c * avgdl / d.tokens.size()) : tf;
        double idf = std::log2((n + 1.0) / (df[term] + 0.5));
        score += tfn * idf / (tfn + 1.0);
    }
    return score;
}

/// Full scoring + stable sort + zero pruning, the reference for search_topk.
inline std::vector<std::pair<std::string, double>> naive_topk(
    const std::vector<std::pair<std::string, double>>& id_scores, size_t k,
    bool prune_zero = true) {
    std::vector<std::pair<std::string, double>> hits;
    for (const auto& [id, s] : id_scores)
        if (!prune_zero || s != 0.0) hits.emplace_back(id, s);
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

// ------------------------------------------------- preference metric oracles

inline double brute_sr(const std::vector<std::string>& sources, const std::string& s, size_t k) {
    size_t depth = std::min(k, sources.size());
    size_t hits = 0;
    for (size_t i = 0; i < depth; ++i)
        if (sources[i] == s) ++hits;
    return static_cast<double>(hits) / static_cast<double>(depth);
}

inline double brute_ndsr(const std::vector<std::string>& sources, const std::string& s,
                         size_t k) {
    size_t depth = std::min(k, sources.size());
    double num = 0.0, den = 0.0;
    for (size_t i = 1; i <= depth; ++i) {
        double w = 1.0 / std::log2(1.0 + static_cast<double>(i));
        den += w;
        if (sources[i - 1] == s) num += w;
    }
    return num / den;
}

inline std::optional<double> brute_masr(const std::vector<std::string>& sources,
                                        const std::string& s) {
    double sum = 0.0;
    size_t positions = 0;
    for (size_t i = 1; i <= sources.size(); ++i) {
        if (sources[i - 1] != s) continue;
        size_t count = 0;
        for (size_t j = 0; j < i; ++j)
            if (sources[j] == s) ++count;
        sum += static_cast<double>(count) / static_cast<double>(i);
        ++positions;
    }
    if (positions == 0) return std::nullopt;
    return sum / static_cast<double>(positions);
}

// --------------------------------------------------- relevance oracles

struct judged_list {
    std::vector<std::string> doc_ids;
    std::vector<std::string> sources; // aligned
};

inline double brute_dcg(const judged_list& list, const std::map<std::string, int>& qrels,
                        const std::string& filter, size_t k) {
    double dcg = 0.0;
    for (size_t i = 1; i <= std::min(k, list.doc_ids.size()); ++i) {
        auto it = qrels.find(list.doc_ids[i - 1]);
        if (it == qrels.end() || it->second <= 0) continue;
        if (!filter.empty() && list.sources[i - 1] != filter) continue;
        dcg += it->second / std::log2(1.0 + static_cast<double>(i));
    }
    return dcg;
}

// --------------------------------------------------- water-filling oracle

/// Maximizes a concave functional on the probability simplex by cyclic
/// pairwise mass transfers, each solved with golden-section search. Slow and
/// simple; independent of the closed-form KKT solution.
template <typename F>
std::vector<double> simplex_maximize(F&& objective, size_t dims, int sweeps = 400) {
    std::vector<double> x(dims, 1.0 / static_cast<double>(dims));
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (size_t i = 0; i < dims; ++i) {
            for (size_t j = i + 1; j < dims; ++j) {
                double mass = x[i] + x[j];
                if (mass <= 0.0) continue;
                // x[i] = t, x[j] = mass - t over t in [0, mass].
                auto eval = [&](double t) {
                    std::vector<double> y = x;
                    y[i] = t;
                    y[j] = mass - t;
                    return objective(y);
                };
                double lo = 0.0, hi = mass;
                double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
                double f1 = eval(m1), f2 = eval(m2);
                for (int it = 0; it < 80; ++it) {
                    if (f1 < f2) {
                        lo = m1;
                        m1 = m2;
                        f1 = f2;
                        m2 = lo + phi * (hi - lo);
                        f2 = eval(m2);
                    } else {
                        hi = m2;
                        m2 = m1;
                        f2 = f1;
                        m1 = hi - phi * (hi - lo);
                        f1 = eval(m1);
                    }
                }
                double t = 0.5 * (lo + hi);
                x[i] = t;
                x[j] = mass - t;
            }
        }
    }
    return x;
}

/// The BM25/DFR expected-score surrogates being maximized.
inline double surrogate_f(const std::vector<double>& p_d, const std::vector<double>& p_q,
                          const std::vector<double>& idf, double k1, double l_d, bool bm25) {
    double f = 0.0;
    for (size_t i = 0; i < p_d.size(); ++i) {
        double t = l_d * p_d[i];
        double gain = bm25 ? (k1 + 1.0) * t / (k1 + t) : t / (t + 1.0);
        f += p_q[i] * idf[i] * gain;
    }
    return f;
}

} // namespace oracle
