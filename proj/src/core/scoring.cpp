#include "core/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "core/error.hpp"

namespace lexalign {

scorer_model scorer_model_from_string(const std::string& name) {
    if (name == "tfidf") return scorer_model::tfidf;
    if (name == "bm25") return scorer_model::bm25;
    if (name == "ql") return scorer_model::ql_jm;
    if (name == "dfr") return scorer_model::dfr_inlh2;
    raise(errc::invalid_argument, "unknown scorer: " + name + " (expected tfidf|bm25|ql|dfr)");
}

const char* scorer_model_name(scorer_model m) {
    switch (m) {
    case scorer_model::tfidf: return "tfidf";
    case scorer_model::bm25: return "bm25";
    case scorer_model::ql_jm: return "ql";
    case scorer_model::dfr_inlh2: return "dfr";
    }
    return "?";
}

void scorer_config::validate() const {
    if (!(k1 > 0.0)) raise(errc::invalid_argument, "k1 must be positive");
    if (!(b >= 0.0 && b <= 1.0)) raise(errc::invalid_argument, "b must be in [0,1]");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        raise(errc::invalid_argument, "lambda must be in [0,1]");
    if (!(c > 0.0)) raise(errc::invalid_argument, "c must be positive");
}

scorer::scorer(const inverted_index& index, const scorer_config& cfg)
    : m_index(index), m_cfg(cfg) {
    m_cfg.validate();
    if (m_cfg.model == scorer_model::tfidf) {
        // ||t_d|| over the full vocabulary, one pass over the postings.
        m_tfidf_doc_norms.assign(m_index.doc_count(), 0.0);
        const double n = static_cast<double>(m_index.doc_count());
        for (uint32_t tid = 0; tid < m_index.vocab_size(); ++tid) {
            double idf = std::log(n / static_cast<double>(m_index.df(tid)));
            for (const auto& p : m_index.postings(tid)) {
                double t = static_cast<double>(p.tf) * idf;
                m_tfidf_doc_norms[p.slot] += t * t;
            }
        }
        for (auto& v : m_tfidf_doc_norms) v = std::sqrt(v);
    }
}

scorer::query_view scorer::analyze(const std::vector<std::string>& tokens) const {
    query_view qv;
    std::map<std::string, double> counts;
    for (const auto& t : tokens) counts[t] += 1.0;
    for (const auto& [term, qtf] : counts) {
        auto tid = m_index.term_id(term);
        if (!tid) {
            qv.precise_oov.push_back(term);
            continue;
        }
        qv.term_ids.push_back(*tid);
        qv.term_counts.push_back(qtf);
    }
    return qv;
}

double scorer::term_weight_tfidf(uint32_t tid) const {
    double n = static_cast<double>(m_index.doc_count());
    return std::log(n / static_cast<double>(m_index.df(tid)));
}

double scorer::contribution(uint32_t tid, double qtf, uint32_t tf, uint32_t doc_len) const {
    double n = static_cast<double>(m_index.doc_count());
    double dfw = static_cast<double>(m_index.df(tid));
    switch (m_cfg.model) {
    case scorer_model::bm25: {
        if (tf == 0) return 0.0;
        double idf = std::log((n - dfw + 0.5) / (dfw + 0.5));
        double k = m_cfg.k1 * ((1.0 - m_cfg.b) +
                               m_cfg.b * static_cast<double>(doc_len) / m_index.avgdl());
        double gain = (m_cfg.k1 + 1.0) * tf / (k + tf);
        return qtf * idf * gain;
    }
    case scorer_model::ql_jm: {
        double cfw = static_cast<double>(m_index.cf(tid));
        double total = static_cast<double>(m_index.total_tokens());
        double ml = doc_len == 0 ? 0.0 : static_cast<double>(tf) / doc_len;
        double p = (1.0 - m_cfg.lambda) * ml + m_cfg.lambda * cfw / total;
        return qtf * std::log(p);
    }
    case scorer_model::dfr_inlh2: {
        if (tf == 0) return 0.0;
        double tfn = m_cfg.dfr_h2
                         ? tf * std::log2(1.0 + m_cfg.c * m_index.avgdl() / doc_len)
                         : static_cast<double>(tf);
        double idf = std::log2((n + 1.0) / (dfw + 0.5));
        return qtf * tfn * idf / (tfn + 1.0);
    }
    case scorer_model::tfidf:
        break; // handled by the dense cosine path
    }
    return 0.0;
}

score_outcome scorer::score_pair(const std::vector<std::string>& query_tokens,
                                 uint32_t slot) const {
    score_outcome out;
    query_view qv = analyze(query_tokens);
    const auto& doc = m_index.doc(slot);

    if (m_cfg.model == scorer_model::tfidf) {
        double dot = 0.0, qnorm_sq = 0.0;
        for (size_t i = 0; i < qv.term_ids.size(); ++i) {
            uint32_t tid = qv.term_ids[i];
            double idf = term_weight_tfidf(tid);
            double tq = qv.term_counts[i] * idf;
            qnorm_sq += tq * tq;
            uint32_t tf = m_index.tf(tid, slot);
            if (tf > 0) dot += tq * static_cast<double>(tf) * idf;
        }
        double dnorm = m_tfidf_doc_norms[slot];
        if (qnorm_sq <= 0.0 || dnorm <= 0.0) {
            out.degenerate = true;
            out.value = 0.0;
            return out;
        }
        out.value = dot / (std::sqrt(qnorm_sq) * dnorm);
        return out;
    }

    if (m_cfg.model == scorer_model::ql_jm && !qv.precise_oov.empty()) {
        out.unseen_term = true;
        out.value = -std::numeric_limits<double>::infinity();
        return out;
    }
    double total = 0.0;
    for (size_t i = 0; i < qv.term_ids.size(); ++i)
        total += contribution(qv.term_ids[i], qv.term_counts[i],
                              m_index.tf(qv.term_ids[i], slot), doc.length);
    out.value = total;
    return out;
}

ranked_list scorer::search_topk(const std::string& query_id,
                                const std::vector<std::string>& query_tokens, size_t k) const {
    if (k < 1) raise(errc::invalid_argument, "retrieval depth k must be >= 1");
    query_view qv = analyze(query_tokens);

    // Candidate accumulation over postings.
    std::unordered_map<uint32_t, double> scores;
    if (m_cfg.model == scorer_model::tfidf) {
        double qnorm_sq = 0.0;
        for (size_t i = 0; i < qv.term_ids.size(); ++i) {
            double idf = term_weight_tfidf(qv.term_ids[i]);
            double tq = qv.term_counts[i] * idf;
            qnorm_sq += tq * tq;
        }
        if (qnorm_sq > 0.0) {
            double qnorm = std::sqrt(qnorm_sq);
            for (size_t i = 0; i < qv.term_ids.size(); ++i) {
                uint32_t tid = qv.term_ids[i];
                double idf = term_weight_tfidf(tid);
                double tq = qv.term_counts[i] * idf;
                for (const auto& p : m_index.postings(tid))
                    scores[p.slot] += tq * static_cast<double>(p.tf) * idf;
            }
            for (auto& [slot, dot] : scores) {
                double dnorm = m_tfidf_doc_norms[slot];
                dot = dnorm > 0.0 ? dot / (qnorm * dnorm) : 0.0;
            }
        }
    } else {
        // Candidates are docs matching at least one query term.
        for (uint32_t tid : qv.term_ids)
            for (const auto& p : m_index.postings(tid)) scores.emplace(p.slot, 0.0);
        for (auto& [slot, acc] : scores) {
            uint32_t doc_len = m_index.doc(slot).length;
            for (size_t i = 0; i < qv.term_ids.size(); ++i)
                acc += contribution(qv.term_ids[i], qv.term_counts[i],
                                    m_index.tf(qv.term_ids[i], slot), doc_len);
        }
    }

    // Zero scores mean "no signal" for the cosine/gain scorers and are
    // pruned; QL scores are log-probabilities where zero is the best
    // possible value, so QL keeps every posting-matched candidate.
    bool prune_zero = m_cfg.model != scorer_model::ql_jm;
    std::vector<std::pair<uint32_t, double>> hits;
    hits.reserve(scores.size());
    for (const auto& [slot, s] : scores)
        if (!prune_zero || s != 0.0) hits.emplace_back(slot, s);
    std::sort(hits.begin(), hits.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return m_index.doc(a.first).id < m_index.doc(b.first).id;
    });
    if (hits.size() > k) hits.resize(k);

    ranked_list out;
    out.query_id = query_id;
    out.depth = k;
    out.entries.reserve(hits.size());
    for (const auto& [slot, s] : hits) {
        const auto& d = m_index.doc(slot);
        out.entries.push_back({d.id, s, d.source});
    }
    return out;
}

void write_run_trec(const std::vector<ranked_list>& lists, const std::string& tag,
                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io, "cannot write run file: " + path);
    char buf[64];
    for (const auto& list : lists) {
        size_t rank = 1;
        for (const auto& e : list.entries) {
            std::snprintf(buf, sizeof(buf), "%.6f", e.score);
            out << list.query_id << " Q0 " << e.doc_id << ' ' << rank << ' ' << buf << ' ' << tag
                << '\n';
            ++rank;
        }
    }
    if (!out) raise(errc::io, "run file write failed: " + path);
}

std::vector<ranked_list> read_run_trec(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open run file: " + path);
    std::vector<ranked_list> lists;
    std::unordered_map<std::string, size_t> by_qid;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string qid, q0, docid, tag;
        size_t rank = 0;
        double score = 0.0;
        if (!(row >> qid >> q0 >> docid >> rank >> score >> tag))
            raise(errc::parse,
                  "run file line " + std::to_string(lineno) + ": expected TREC run format");
        auto it = by_qid.find(qid);
        if (it == by_qid.end()) {
            it = by_qid.emplace(qid, lists.size()).first;
            lists.push_back({qid, {}, 0});
        }
        lists[it->second].entries.push_back({docid, score, source_label::parse("")});
        lists[it->second].depth = std::max(lists[it->second].depth, rank);
    }
    return lists;
}

void write_source_sidecar(const std::vector<std::pair<std::string, std::string>>& id_sources,
                          const std::string& path) {
    auto sorted = id_sources;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io, "cannot write source sidecar: " + path);
    for (const auto& [id, src] : sorted) {
        nlohmann::ordered_json j;
        j["id"] = id;
        j["source"] = src;
        out << j.dump() << "\n";
    }
    if (!out) raise(errc::io, "sidecar write failed: " + path);
}

std::vector<std::pair<std::string, std::string>> read_source_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open source sidecar: " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            raise(errc::parse, "sidecar line " + std::to_string(lineno) + ": " + e.what());
        }
        out.emplace_back(j.at("id").get<std::string>(), j.at("source").get<std::string>());
    }
    return out;
}

} // namespace lexalign
