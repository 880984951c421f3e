#include "core/linglab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "core/error.hpp"

namespace lexalign {

std::map<std::string, uint64_t> pooled_counts(const corpus& docs) {
    std::map<std::string, uint64_t> counts;
    for (const auto& d : docs.docs())
        for (const auto& t : d.tokens) ++counts[t];
    return counts;
}

rank_frequency_table rank_frequency(const std::map<std::string, uint64_t>& counts) {
    if (counts.empty()) raise(errc::invalid_argument, "rank-frequency of an empty corpus");
    rank_frequency_table table;
    table.rows.reserve(counts.size());
    for (const auto& [term, freq] : counts) table.rows.push_back({term, freq, 0});
    std::sort(table.rows.begin(), table.rows.end(), [](const rank_row& a, const rank_row& b) {
        if (a.freq != b.freq) return a.freq > b.freq;
        return a.term < b.term;
    });
    for (size_t i = 0; i < table.rows.size(); ++i) table.rows[i].rank = i + 1;
    return table;
}

rank_frequency_table rank_frequency(const corpus& docs) {
    return rank_frequency(pooled_counts(docs));
}

namespace {

segment_fit ols_loglog(const std::vector<rank_row>& rows, size_t begin, size_t end) {
    segment_fit fit;
    fit.n = end - begin;
    double sx = 0, sy = 0;
    for (size_t i = begin; i < end; ++i) {
        sx += std::log10(static_cast<double>(rows[i].rank));
        sy += std::log10(static_cast<double>(rows[i].freq));
    }
    double mx = sx / fit.n, my = sy / fit.n;
    double sxx = 0, sxy = 0;
    for (size_t i = begin; i < end; ++i) {
        double dx = std::log10(static_cast<double>(rows[i].rank)) - mx;
        double dy = std::log10(static_cast<double>(rows[i].freq)) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    double slope = sxy / sxx;
    double ss_res = 0, ss_tot = 0;
    for (size_t i = begin; i < end; ++i) {
        double x = std::log10(static_cast<double>(rows[i].rank));
        double y = std::log10(static_cast<double>(rows[i].freq));
        double yhat = my + slope * (x - mx);
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - my) * (y - my);
    }
    fit.alpha = -slope;
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

} // namespace

zipf_fit fit_zipf(const rank_frequency_table& table, size_t r_c) {
    if (table.rows.size() < 2)
        raise(errc::invalid_argument, "zipf fit needs at least two rank-frequency points");
    zipf_fit out;
    out.r_c = r_c;
    size_t split = std::min(r_c, table.rows.size());
    out.n_core = split;
    out.n_ext = table.rows.size() - split;
    if (out.n_core >= 2) out.core = ols_loglog(table.rows, 0, split);
    if (out.n_ext >= 2) out.ext = ols_loglog(table.rows, split, table.rows.size());
    return out;
}

double idf_smoothed(uint64_t doc_count, uint64_t containing) {
    if (doc_count < 1) raise(errc::domain, "idf requires at least one document");
    if (containing > doc_count)
        raise(errc::domain, "document frequency exceeds collection size");
    double n = static_cast<double>(doc_count);
    double k = static_cast<double>(containing);
    return std::log(1.0 + (n - k + 0.5) / (k + 0.5));
}

idf_profile_result idf_profile(const rank_frequency_table& target,
                               const inverted_index& reference, size_t r_c,
                               const std::string& reference_name) {
    if (reference.doc_count() == 0) raise(errc::invalid_argument, "empty reference collection");
    idf_profile_result out;
    out.reference = reference_name;
    double core_sum = 0.0, ext_sum = 0.0;
    size_t core_n = 0, ext_n = 0;
    for (const auto& row : target.rows) {
        double idf = idf_smoothed(reference.doc_count(), reference.df(row.term));
        out.per_term[row.term] = idf;
        if (row.rank <= r_c) {
            core_sum += idf;
            ++core_n;
        } else {
            ext_sum += idf;
            ++ext_n;
        }
    }
    out.mean_idf_core = core_n > 0 ? core_sum / core_n : 0.0;
    out.mean_idf_ext = ext_n > 0 ? ext_sum / ext_n : 0.0;
    return out;
}

double ttr(const std::vector<std::string>& tokens) {
    if (tokens.empty()) raise(errc::invalid_argument, "type-token ratio of an empty document");
    std::set<std::string> unique(tokens.begin(), tokens.end());
    return static_cast<double>(unique.size()) / static_cast<double>(tokens.size());
}

synonym_lexicon load_synonym_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open synonym lexicon: " + path);
    synonym_lexicon lex;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            raise(errc::parse, "synonym lexicon line " + std::to_string(lineno) +
                                   ": expected `cluster_id<TAB>term`");
        lex.clusters[line.substr(0, tab)].push_back(line.substr(tab + 1));
    }
    for (auto& [id, terms] : lex.clusters) {
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        if (terms.empty())
            raise(errc::parse, "synonym cluster '" + id + "' has no members");
    }
    return lex;
}

synonym_stats synonym_cluster_stats(const std::map<std::string, uint64_t>& counts,
                                    const synonym_lexicon& lexicon) {
    if (lexicon.clusters.empty()) raise(errc::invalid_argument, "empty synonym lexicon");
    synonym_stats out;
    double total = 0.0;
    for (const auto& [id, terms] : lexicon.clusters) {
        cluster_usage usage;
        usage.cluster_id = id;
        usage.lexicon_size = terms.size();
        for (const auto& t : terms)
            if (counts.count(t) > 0) ++usage.used_size;
        total += static_cast<double>(usage.used_size);
        out.clusters.push_back(std::move(usage));
    }
    out.mean_used_size = total / static_cast<double>(lexicon.clusters.size());
    return out;
}

std::map<std::string, uint64_t> cluster_distribution(const std::map<std::string, uint64_t>& counts,
                                                     const synonym_lexicon& lexicon,
                                                     const std::string& cluster_id) {
    auto it = lexicon.clusters.find(cluster_id);
    if (it == lexicon.clusters.end())
        raise(errc::invalid_argument, "unknown synonym cluster: " + cluster_id);
    std::map<std::string, uint64_t> dist;
    for (const auto& t : it->second) {
        auto c = counts.find(t);
        dist[t] = c == counts.end() ? 0 : c->second;
    }
    return dist;
}

} // namespace lexalign
