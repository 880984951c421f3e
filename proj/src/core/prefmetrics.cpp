#include "core/prefmetrics.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/stats.hpp"

namespace lexalign {

namespace {

double position_weight(size_t i) { return 1.0 / std::log2(1.0 + static_cast<double>(i)); }

size_t effective_depth(const ranked_list& list, size_t k) {
    if (list.entries.empty()) raise(errc::invalid_argument, "metric on an empty ranked list");
    if (k == 0) raise(errc::invalid_argument, "metric depth k must be >= 1");
    return std::min(k, list.entries.size());
}

} // namespace

at_k_result sr_at_k(const ranked_list& list, const std::string& source, size_t k) {
    at_k_result out;
    out.effective_k = effective_depth(list, k);
    out.truncated = out.effective_k < k;
    size_t hits = 0;
    for (size_t i = 0; i < out.effective_k; ++i)
        if (list.entries[i].source.str() == source) ++hits;
    out.value = static_cast<double>(hits) / static_cast<double>(out.effective_k);
    return out;
}

at_k_result ndsr_at_k(const ranked_list& list, const std::string& source, size_t k) {
    at_k_result out;
    out.effective_k = effective_depth(list, k);
    out.truncated = out.effective_k < k;
    double num = 0.0, den = 0.0;
    for (size_t i = 1; i <= out.effective_k; ++i) {
        double w = position_weight(i);
        den += w;
        if (list.entries[i - 1].source.str() == source) num += w;
    }
    out.value = num / den;
    return out;
}

std::optional<double> masr(const ranked_list& list, const std::string& source) {
    if (list.entries.empty()) raise(errc::invalid_argument, "MASR on an empty ranked list");
    size_t seen = 0;
    double sum = 0.0;
    size_t positions = 0;
    for (size_t i = 1; i <= list.entries.size(); ++i) {
        if (list.entries[i - 1].source.str() == source) {
            ++seen;
            sum += static_cast<double>(seen) / static_cast<double>(i);
            ++positions;
        }
    }
    if (positions == 0) return std::nullopt;
    return sum / static_cast<double>(positions);
}

relevance_result relevance_metrics(const ranked_list& list,
                                   const std::map<std::string, int>& qrels, eval_mode mode,
                                   const std::string& source_filter, size_t k,
                                   const std::map<std::string, std::string>& source_of) {
    if (qrels.empty()) raise(errc::invalid_argument, "relevance metrics need nonempty qrels");

    auto qualifies = [&](const std::string& doc_id, const std::string& entry_source) {
        if (mode == eval_mode::mixed) return true;
        if (!entry_source.empty()) return entry_source == source_filter;
        auto it = source_of.find(doc_id);
        return it != source_of.end() && it->second == source_filter;
    };

    // Qualifying judged set: grades > 0, restricted by source in filtered mode.
    std::vector<int> ideal_grades;
    size_t relevant_total = 0;
    for (const auto& [doc_id, grade] : qrels) {
        if (grade <= 0) continue;
        if (!qualifies(doc_id, "")) continue;
        ideal_grades.push_back(grade);
        ++relevant_total;
    }

    relevance_result out;
    if (relevant_total == 0) {
        out.unjudged = true;
        return out;
    }

    std::sort(ideal_grades.begin(), ideal_grades.end(), std::greater<int>());
    double idcg = 0.0;
    for (size_t i = 1; i <= std::min(k, ideal_grades.size()); ++i)
        idcg += ideal_grades[i - 1] * position_weight(i);

    double dcg = 0.0;
    size_t hits_at_k = 0;
    size_t hits = 0;
    double ap_sum = 0.0;
    for (size_t i = 1; i <= list.entries.size(); ++i) {
        const auto& e = list.entries[i - 1];
        auto it = qrels.find(e.doc_id);
        int grade = it == qrels.end() ? 0 : it->second;
        bool counted = grade > 0 && qualifies(e.doc_id, e.source.str());
        if (counted) {
            ++hits;
            ap_sum += static_cast<double>(hits) / static_cast<double>(i);
            if (i <= k) {
                ++hits_at_k;
                dcg += grade * position_weight(i);
            }
        }
    }
    out.precision_at_k = static_cast<double>(hits_at_k) / static_cast<double>(k);
    out.ndcg_at_k = idcg > 0.0 ? dcg / idcg : 0.0;
    out.map = ap_sum / static_cast<double>(relevant_total);
    return out;
}

std::optional<double> relative_delta(double value_human, double value_llm) {
    double sum = value_human + value_llm;
    if (sum <= 0.0) return std::nullopt;
    return (value_human - value_llm) / (sum / 2.0);
}

source_preference_report build_preference_report(const std::vector<ranked_list>& lists, size_t k,
                                                 const std::string& scorer_name,
                                                 uint64_t resamples, uint64_t seed) {
    source_preference_report rep;
    rep.k = k;
    rep.scorer = scorer_name;

    std::vector<double> sr_h, sr_l, ndsr_h, ndsr_l, masr_h_paired, masr_l_paired;
    double masr_h_sum = 0.0, masr_l_sum = 0.0;
    size_t masr_h_n = 0, masr_l_n = 0;

    for (const auto& list : lists) {
        if (list.entries.empty()) continue;
        preference_row row;
        row.query_id = list.query_id;
        row.sr_human = sr_at_k(list, "human", k);
        row.sr_llm = sr_at_k(list, "llm", k);
        row.ndsr_human = ndsr_at_k(list, "human", k);
        row.ndsr_llm = ndsr_at_k(list, "llm", k);
        row.masr_human = masr(list, "human");
        row.masr_llm = masr(list, "llm");

        sr_h.push_back(row.sr_human.value);
        sr_l.push_back(row.sr_llm.value);
        ndsr_h.push_back(row.ndsr_human.value);
        ndsr_l.push_back(row.ndsr_llm.value);
        if (row.masr_human) {
            masr_h_sum += *row.masr_human;
            ++masr_h_n;
        } else {
            ++rep.masr_human_excluded;
        }
        if (row.masr_llm) {
            masr_l_sum += *row.masr_llm;
            ++masr_l_n;
        } else {
            ++rep.masr_llm_excluded;
        }
        if (row.masr_human && row.masr_llm) {
            masr_h_paired.push_back(*row.masr_human);
            masr_l_paired.push_back(*row.masr_llm);
        }
        rep.per_query.push_back(std::move(row));
    }

    auto mean = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    rep.sr_human = mean(sr_h);
    rep.sr_llm = mean(sr_l);
    rep.ndsr_human = mean(ndsr_h);
    rep.ndsr_llm = mean(ndsr_l);
    rep.masr_human = masr_h_n > 0 ? masr_h_sum / masr_h_n : 0.0;
    rep.masr_llm = masr_l_n > 0 ? masr_l_sum / masr_l_n : 0.0;
    rep.delta_sr = rep.sr_human - rep.sr_llm;
    rep.delta_ndsr = rep.ndsr_human - rep.ndsr_llm;
    rep.delta_masr = rep.masr_human - rep.masr_llm;
    rep.p_sr = sr_h.size() >= 2 ? paired_permutation_test(sr_h, sr_l, resamples, seed) : 1.0;
    rep.p_ndsr =
        ndsr_h.size() >= 2 ? paired_permutation_test(ndsr_h, ndsr_l, resamples, seed) : 1.0;
    rep.p_masr = masr_h_paired.size() >= 2
                     ? paired_permutation_test(masr_h_paired, masr_l_paired, resamples, seed)
                     : 1.0;
    return rep;
}

} // namespace lexalign
