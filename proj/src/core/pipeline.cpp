#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include <json.hpp>

#include "core/alignment.hpp"
#include "core/error.hpp"
#include "core/linglab.hpp"
#include "core/report.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"
#include "core/synthlab.hpp"

namespace lexalign {

using nlohmann::json;

// --------------------------------------------------------------- config

std::string run_config::canonical_json() const {
    json j;
    j["inputs"] = inputs;
    j["queries"] = queries;
    j["qrels"] = qrels;
    j["reference"] = reference;
    j["index_file"] = index_file;
    j["run_file"] = run_file;
    j["sidecar"] = sidecar;
    j["output"] = output;
    j["dump"] = dump;
    j["kind"] = kind;
    j["scorer"] = scorer;
    j["source"] = source;
    j["tag"] = tag;
    j["pipeline"] = {{"lowercase", pipeline.lowercase},
                     {"stem", pipeline.stem},
                     {"stopwords", pipeline.stopwords},
                     {"stopword_file", pipeline.stopword_file}};
    j["scorers"] = scorers;
    j["k"] = k;
    j["params"] = {{"k1", params.k1},     {"b", params.b},         {"lambda", params.lambda},
                   {"c", params.c},       {"dfr_h2", params.dfr_h2}, {"z", params.z}};
    j["r_c"] = r_c;
    j["synonyms"] = synonyms;
    j["smoothing_eps"] = smoothing_eps;
    j["metrics_k"] = metrics_k;
    j["resamples"] = resamples;
    j["seed"] = seed;
    j["synth"] = {{"vocab", synth.vocab},
                  {"alpha1", synth.alpha1},
                  {"alpha2", synth.alpha2},
                  {"r_c", synth.r_c},
                  {"docs", synth.docs},
                  {"doc_len", synth.doc_len},
                  {"queries", synth.queries},
                  {"query_len", synth.query_len},
                  {"rungs", synth.rungs},
                  {"max_kl", synth.max_kl},
                  {"pq_exponent", synth.pq_exponent},
                  {"tilt_exponent", synth.tilt_exponent}};
    j["dataset"] = dataset;
    j["query_type"] = query_type;
    j["out_dir"] = out_dir;
    j["threads"] = threads;
    return j.dump();
}

run_config run_config::from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        raise(errc::invalid_argument, std::string("config JSON does not parse: ") + e.what());
    }
    run_config cfg;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("inputs", cfg.inputs);
    get("queries", cfg.queries);
    get("qrels", cfg.qrels);
    get("reference", cfg.reference);
    get("index_file", cfg.index_file);
    get("run_file", cfg.run_file);
    get("sidecar", cfg.sidecar);
    get("output", cfg.output);
    get("dump", cfg.dump);
    get("kind", cfg.kind);
    get("scorer", cfg.scorer);
    get("source", cfg.source);
    get("tag", cfg.tag);
    if (j.contains("pipeline")) {
        const auto& p = j.at("pipeline");
        if (p.contains("lowercase")) p.at("lowercase").get_to(cfg.pipeline.lowercase);
        if (p.contains("stem")) p.at("stem").get_to(cfg.pipeline.stem);
        if (p.contains("stopwords")) p.at("stopwords").get_to(cfg.pipeline.stopwords);
        if (p.contains("stopword_file")) p.at("stopword_file").get_to(cfg.pipeline.stopword_file);
    }
    get("scorers", cfg.scorers);
    get("k", cfg.k);
    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (p.contains("k1")) p.at("k1").get_to(cfg.params.k1);
        if (p.contains("b")) p.at("b").get_to(cfg.params.b);
        if (p.contains("lambda")) p.at("lambda").get_to(cfg.params.lambda);
        if (p.contains("c")) p.at("c").get_to(cfg.params.c);
        if (p.contains("dfr_h2")) p.at("dfr_h2").get_to(cfg.params.dfr_h2);
        if (p.contains("z")) p.at("z").get_to(cfg.params.z);
    }
    get("r_c", cfg.r_c);
    get("synonyms", cfg.synonyms);
    get("smoothing_eps", cfg.smoothing_eps);
    get("metrics_k", cfg.metrics_k);
    get("resamples", cfg.resamples);
    get("seed", cfg.seed);
    if (j.contains("synth")) {
        const auto& s = j.at("synth");
        auto gets = [&](const char* key, auto& field) {
            if (s.contains(key)) s.at(key).get_to(field);
        };
        gets("vocab", cfg.synth.vocab);
        gets("alpha1", cfg.synth.alpha1);
        gets("alpha2", cfg.synth.alpha2);
        gets("r_c", cfg.synth.r_c);
        gets("docs", cfg.synth.docs);
        gets("doc_len", cfg.synth.doc_len);
        gets("queries", cfg.synth.queries);
        gets("query_len", cfg.synth.query_len);
        gets("rungs", cfg.synth.rungs);
        gets("max_kl", cfg.synth.max_kl);
        gets("pq_exponent", cfg.synth.pq_exponent);
        gets("tilt_exponent", cfg.synth.tilt_exponent);
    }
    get("dataset", cfg.dataset);
    get("query_type", cfg.query_type);
    get("out_dir", cfg.out_dir);
    get("threads", cfg.threads);
    return cfg;
}

std::string run_config::config_hash() const { return hash_hex(fnv1a64(canonical_json())); }

// --------------------------------------------------------------- helpers

namespace {

corpus load_merged_corpus(const std::vector<std::string>& paths, const pipeline_config& pipe) {
    if (paths.empty()) raise(errc::invalid_argument, "no input corpus given");
    corpus merged;
    for (const auto& path : paths) {
        corpus part = ingest_corpus(path);
        for (const auto& d : part.docs()) merged.add(d);
    }
    merged.tokenize_all(pipe);
    return merged;
}

std::vector<query> load_tokenized_queries(const run_config& cfg) {
    if (cfg.queries.empty()) raise(errc::invalid_argument, "stage requires --queries");
    auto qs = ingest_queries(cfg.queries);
    tokenize_queries(qs, cfg.pipeline);
    if (!cfg.qrels.empty()) load_qrels(cfg.qrels, qs);
    return qs;
}

std::string uniform_source(const corpus& docs) {
    if (docs.empty()) return "";
    std::string first = docs.at(0).source.str();
    for (const auto& d : docs.docs())
        if (d.source.str() != first) return "mixed";
    return first;
}

std::string basename_of(const std::string& path) {
    return std::filesystem::path(path).filename().string();
}

term_distribution corpus_token_distribution(const std::map<std::string, uint64_t>& counts,
                                            const std::vector<std::string>& vocab, double eps) {
    return make_distribution(counts, vocab, eps);
}

std::map<std::string, uint64_t> query_token_counts(const std::vector<query>& queries) {
    std::map<std::string, uint64_t> counts;
    for (const auto& q : queries)
        for (const auto& t : q.tokens) ++counts[t];
    return counts;
}

} // namespace

std::vector<ranked_list> run_retrieval(const inverted_index& index, const scorer_config& cfg,
                                       const std::vector<query>& queries, size_t k,
                                       unsigned threads) {
    scorer s(index, cfg);
    std::vector<ranked_list> lists(queries.size());
    if (threads <= 1 || queries.size() < 2) {
        for (size_t i = 0; i < queries.size(); ++i)
            lists[i] = s.search_topk(queries[i].id, queries[i].tokens, k);
        return lists;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= queries.size()) return;
                lists[i] = s.search_topk(queries[i].id, queries[i].tokens, k);
            }
        });
    for (auto& t : pool) t.join();
    return lists;
}

std::vector<align_row> align_corpora(const corpus& human_docs, const corpus& llm_docs,
                                     const std::vector<query>& queries, const run_config& cfg) {
    // KL side: epsilon-smoothed token distributions over the union vocab.
    auto hc = pooled_counts(human_docs);
    auto lc = pooled_counts(llm_docs);
    auto qc = query_token_counts(queries);
    auto vocab = union_vocab({&hc, &lc, &qc});
    auto p_q = corpus_token_distribution(qc, vocab, cfg.smoothing_eps);
    auto p_h = corpus_token_distribution(hc, vocab, cfg.smoothing_eps);
    auto p_l = corpus_token_distribution(lc, vocab, cfg.smoothing_eps);
    double kl_h = kl_divergence(p_q, p_h);
    double kl_l = kl_divergence(p_q, p_l);

    // Preference side: retrieval over the mixed pool.
    corpus mixed;
    for (const auto& d : human_docs.docs()) mixed.add(d);
    for (const auto& d : llm_docs.docs()) mixed.add(d);
    mixed.mark_tokenized();
    inverted_index index = inverted_index::build(mixed, cfg.threads);

    std::vector<align_row> rows;
    for (const auto& name : cfg.scorers) {
        scorer_config sc = cfg.params;
        sc.model = scorer_model_from_string(name);
        auto lists = run_retrieval(index, sc, queries, cfg.k, cfg.threads);
        auto report = build_preference_report(lists, cfg.metrics_k, name, cfg.resamples, cfg.seed);
        align_row row;
        row.scorer = name;
        row.kl_q_human = kl_h;
        row.kl_q_llm = kl_l;
        row.delta_kl = kl_l - kl_h;
        row.delta_masr = report.delta_masr;
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------- stages

void stage_ingest(const run_config& cfg) {
    if (cfg.inputs.size() != 1)
        raise(errc::invalid_argument, "ingest expects exactly one --input corpus");
    if (cfg.output.empty()) raise(errc::invalid_argument, "ingest requires --output");
    corpus c = ingest_corpus(cfg.inputs[0]);
    std::string body;
    for (const auto& d : c.docs()) body += document_to_jsonl(d) + "\n";
    atomic_write_text(cfg.output, body);
}

void stage_index(const run_config& cfg) {
    if (cfg.index_file.empty()) raise(errc::invalid_argument, "index stage requires --index");
    corpus merged = load_merged_corpus(cfg.inputs, cfg.pipeline);
    inverted_index idx = inverted_index::build(merged, cfg.threads);
    ensure_parent_dir(cfg.index_file);
    std::string tmp = cfg.index_file + ".tmp";
    idx.save(tmp);
    std::error_code ec;
    std::filesystem::rename(tmp, cfg.index_file, ec);
    if (ec) raise(errc::io, "cannot move index snapshot into place: " + ec.message());
}

void stage_retrieve(const run_config& cfg) {
    if (cfg.run_file.empty()) raise(errc::invalid_argument, "retrieve requires --run");
    if (cfg.scorer.empty()) raise(errc::invalid_argument, "retrieve requires --scorer");

    inverted_index idx = [&]() {
        if (!cfg.index_file.empty() && std::filesystem::exists(cfg.index_file))
            return inverted_index::load(cfg.index_file);
        corpus merged = load_merged_corpus(cfg.inputs, cfg.pipeline);
        return inverted_index::build(merged, cfg.threads);
    }();

    auto queries = load_tokenized_queries(cfg);
    scorer_config sc = cfg.params;
    sc.model = scorer_model_from_string(cfg.scorer);
    auto lists = run_retrieval(idx, sc, queries, cfg.k, cfg.threads);

    // TREC run, atomically.
    std::string run_body;
    {
        char buf[64];
        for (const auto& list : lists) {
            size_t rank = 1;
            for (const auto& e : list.entries) {
                std::snprintf(buf, sizeof(buf), "%.6f", e.score);
                run_body += list.query_id + " Q0 " + e.doc_id + ' ' + std::to_string(rank) + ' ' +
                            buf + ' ' + cfg.tag + '\n';
                ++rank;
            }
        }
    }
    atomic_write_text(cfg.run_file, run_body);

    if (!cfg.sidecar.empty()) {
        // Sources for every retrieved doc plus every judged doc we know.
        std::vector<std::pair<std::string, std::string>> id_sources;
        for (const auto& list : lists)
            for (const auto& e : list.entries) id_sources.emplace_back(e.doc_id, e.source.str());
        for (const auto& q : queries)
            for (const auto& [doc_id, grade] : q.qrels) {
                auto slot = idx.slot_of(doc_id);
                if (slot) id_sources.emplace_back(doc_id, idx.doc(*slot).source.str());
            }
        std::sort(id_sources.begin(), id_sources.end());
        id_sources.erase(std::unique(id_sources.begin(), id_sources.end()), id_sources.end());
        std::string body;
        for (const auto& [id, src] : id_sources) {
            nlohmann::ordered_json j;
            j["id"] = id;
            j["source"] = src;
            body += j.dump() + "\n";
        }
        atomic_write_text(cfg.sidecar, body);
    }
}

namespace {

void profile_zipf(const run_config& cfg) {
    table_writer csv(',', cfg.config_hash(),
                     {"corpus", "source", "r_c", "alpha1", "r2_core", "alpha2", "r2_ext",
                      "n_core", "n_ext"});
    for (const auto& path : cfg.inputs) {
        corpus docs = ingest_corpus(path);
        docs.tokenize_all(cfg.pipeline);
        auto table = rank_frequency(docs);
        auto fit = fit_zipf(table, cfg.r_c);
        csv.row({basename_of(path), uniform_source(docs), std::to_string(cfg.r_c),
                 fit.core ? fmt6(fit.core->alpha) : "", fit.core ? fmt6(fit.core->r2) : "",
                 fit.ext ? fmt6(fit.ext->alpha) : "", fit.ext ? fmt6(fit.ext->r2) : "",
                 std::to_string(fit.n_core), std::to_string(fit.n_ext)});
        if (!cfg.dump.empty()) {
            std::string body = "# config=" + cfg.config_hash() + "\n";
            for (const auto& row : table.rows)
                body += row.term + "\t" + std::to_string(row.freq) + "\n";
            atomic_write_text(cfg.dump + "." + basename_of(path) + ".tsv", body);
        }
    }
    csv.save(cfg.output);
}

void profile_idf(const run_config& cfg) {
    if (cfg.reference.empty())
        raise(errc::invalid_argument, "profile idf requires --reference corpus");
    corpus ref = ingest_corpus(cfg.reference);
    ref.tokenize_all(cfg.pipeline);
    inverted_index ref_idx = inverted_index::build(ref, cfg.threads);
    table_writer csv(',', cfg.config_hash(),
                     {"corpus", "source", "reference", "r_c", "mean_idf_core", "mean_idf_ext",
                      "n_core", "n_ext"});
    for (const auto& path : cfg.inputs) {
        corpus docs = ingest_corpus(path);
        docs.tokenize_all(cfg.pipeline);
        auto table = rank_frequency(docs);
        auto prof = idf_profile(table, ref_idx, cfg.r_c, basename_of(cfg.reference));
        size_t n_core = std::min(cfg.r_c, table.rows.size());
        csv.row({basename_of(path), uniform_source(docs), prof.reference,
                 std::to_string(cfg.r_c), fmt6(prof.mean_idf_core), fmt6(prof.mean_idf_ext),
                 std::to_string(n_core), std::to_string(table.rows.size() - n_core)});
    }
    csv.save(cfg.output);
}

void profile_ttr(const run_config& cfg) {
    table_writer csv(',', cfg.config_hash(), {"corpus", "source", "n_docs", "mean_ttr"});
    for (const auto& path : cfg.inputs) {
        corpus docs = ingest_corpus(path);
        docs.tokenize_all(cfg.pipeline);
        double sum = 0.0;
        size_t counted = 0;
        for (const auto& d : docs.docs()) {
            if (d.tokens.empty()) continue;
            sum += ttr(d.tokens);
            ++counted;
        }
        csv.row({basename_of(path), uniform_source(docs), std::to_string(counted),
                 counted > 0 ? fmt6(sum / counted) : ""});
    }
    csv.save(cfg.output);
}

void profile_synonyms(const run_config& cfg) {
    if (cfg.synonyms.empty())
        raise(errc::invalid_argument, "profile synonyms requires --synonyms lexicon");
    auto lexicon = load_synonym_lexicon(cfg.synonyms);
    table_writer csv(',', cfg.config_hash(),
                     {"corpus", "source", "cluster_id", "used_size", "lexicon_size",
                      "mean_used_size"});
    for (const auto& path : cfg.inputs) {
        corpus docs = ingest_corpus(path);
        docs.tokenize_all(cfg.pipeline);
        auto counts = pooled_counts(docs);
        auto stats = synonym_cluster_stats(counts, lexicon);
        for (const auto& cu : stats.clusters)
            csv.row({basename_of(path), uniform_source(docs), cu.cluster_id,
                     std::to_string(cu.used_size), std::to_string(cu.lexicon_size),
                     fmt6(stats.mean_used_size)});
    }
    csv.save(cfg.output);
}

} // namespace

void stage_profile(const run_config& cfg) {
    if (cfg.output.empty()) raise(errc::invalid_argument, "profile requires --output");
    if (cfg.inputs.empty()) raise(errc::invalid_argument, "profile requires at least one --input");
    if (cfg.kind == "zipf")
        profile_zipf(cfg);
    else if (cfg.kind == "idf")
        profile_idf(cfg);
    else if (cfg.kind == "ttr")
        profile_ttr(cfg);
    else if (cfg.kind == "synonyms")
        profile_synonyms(cfg);
    else
        raise(errc::invalid_argument, "unknown profile kind: " + cfg.kind +
                                          " (expected zipf|idf|ttr|synonyms)");
}

void stage_metrics(const run_config& cfg) {
    if (cfg.run_file.empty() || cfg.sidecar.empty())
        raise(errc::invalid_argument, "metrics requires --run and --sources");
    if (cfg.output.empty()) raise(errc::invalid_argument, "metrics requires --output");

    auto lists = read_run_trec(cfg.run_file);
    auto sources = read_source_sidecar(cfg.sidecar);
    std::map<std::string, std::string> source_of(sources.begin(), sources.end());
    for (auto& list : lists)
        for (auto& e : list.entries) {
            auto it = source_of.find(e.doc_id);
            e.source = source_label::parse(it == source_of.end() ? "" : it->second);
        }

    std::string scorer_name = cfg.scorer.empty() ? cfg.tag : cfg.scorer;
    auto pref = build_preference_report(lists, cfg.metrics_k, scorer_name, cfg.resamples,
                                        cfg.seed);

    table_writer csv(',', cfg.config_hash(),
                     {"dataset", "query_type", "scorer", "metric", "k", "value_human",
                      "value_llm", "delta", "p_value"});
    auto kstr = std::to_string(cfg.metrics_k);
    csv.row({cfg.dataset, cfg.query_type, scorer_name, "sr", kstr, fmt6(pref.sr_human),
             fmt6(pref.sr_llm), fmt6(pref.delta_sr), fmt6(pref.p_sr)});
    csv.row({cfg.dataset, cfg.query_type, scorer_name, "ndsr", kstr, fmt6(pref.ndsr_human),
             fmt6(pref.ndsr_llm), fmt6(pref.delta_ndsr), fmt6(pref.p_ndsr)});
    csv.row({cfg.dataset, cfg.query_type, scorer_name, "masr", kstr, fmt6(pref.masr_human),
             fmt6(pref.masr_llm), fmt6(pref.delta_masr), fmt6(pref.p_masr)});

    if (!cfg.qrels.empty()) {
        // Relevance-based preference with source filtering; delta is the
        // relative difference, human versus llm.
        std::map<std::string, std::map<std::string, int>> qrels_by_query;
        {
            std::vector<query> shells;
            for (const auto& list : lists) {
                query q;
                q.id = list.query_id;
                shells.push_back(q);
            }
            load_qrels(cfg.qrels, shells);
            for (auto& q : shells) qrels_by_query[q.id] = std::move(q.qrels);
        }
        struct metric_acc {
            std::vector<double> human, llm;
        };
        metric_acc prec, ndcg, map_acc;
        for (const auto& list : lists) {
            const auto& qr = qrels_by_query[list.query_id];
            if (qr.empty()) continue;
            auto h = relevance_metrics(list, qr, eval_mode::source_filtered, "human",
                                       cfg.metrics_k, source_of);
            auto l = relevance_metrics(list, qr, eval_mode::source_filtered, "llm",
                                       cfg.metrics_k, source_of);
            if (h.unjudged && l.unjudged) continue;
            prec.human.push_back(h.precision_at_k);
            prec.llm.push_back(l.precision_at_k);
            ndcg.human.push_back(h.ndcg_at_k);
            ndcg.llm.push_back(l.ndcg_at_k);
            map_acc.human.push_back(h.map);
            map_acc.llm.push_back(l.map);
        }
        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return v.empty() ? 0.0 : s / v.size();
        };
        auto emit = [&](const char* name, metric_acc& acc) {
            if (acc.human.empty()) return;
            double h = mean(acc.human), l = mean(acc.llm);
            auto rd = relative_delta(h, l);
            double p = acc.human.size() >= 2
                           ? paired_permutation_test(acc.human, acc.llm, cfg.resamples, cfg.seed)
                           : 1.0;
            csv.row({cfg.dataset, cfg.query_type, scorer_name, name, kstr, fmt6(h), fmt6(l),
                     rd ? fmt6(*rd) : "", fmt6(p)});
        };
        emit("p", prec);
        emit("ndcg", ndcg);
        emit("map", map_acc);
    }
    csv.save(cfg.output);
}

void stage_align(const run_config& cfg) {
    if (cfg.inputs.size() != 2)
        raise(errc::invalid_argument,
              "align expects exactly two --input corpora (human first, llm second)");
    if (cfg.output.empty()) raise(errc::invalid_argument, "align requires --output");
    corpus human_docs = ingest_corpus(cfg.inputs[0]);
    corpus llm_docs = ingest_corpus(cfg.inputs[1]);
    human_docs.tokenize_all(cfg.pipeline);
    llm_docs.tokenize_all(cfg.pipeline);
    auto queries = load_tokenized_queries(cfg);
    auto rows = align_corpora(human_docs, llm_docs, queries, cfg);
    table_writer csv(',', cfg.config_hash(),
                     {"dataset", "query_type", "kl_q_human", "kl_q_llm", "delta_kl", "scorer",
                      "delta_masr"});
    for (const auto& r : rows)
        csv.row({cfg.dataset, cfg.query_type, fmt6(r.kl_q_human), fmt6(r.kl_q_llm),
                 fmt6(r.delta_kl), r.scorer, fmt6(r.delta_masr)});
    csv.save(cfg.output);
}

namespace {

term_distribution single_power_law_distribution(size_t vocab, double exponent) {
    term_distribution dist;
    dist.vocab.reserve(vocab);
    dist.probs.resize(vocab);
    double total = 0.0;
    for (size_t r = 1; r <= vocab; ++r) {
        dist.vocab.push_back(synth_term(r));
        double v = std::pow(static_cast<double>(r), -exponent);
        dist.probs[r - 1] = v;
        total += v;
    }
    for (auto& p : dist.probs) p /= total;
    return dist;
}

term_distribution rank_tilt_distribution(size_t vocab, double exponent) {
    term_distribution dist;
    dist.vocab.reserve(vocab);
    dist.probs.resize(vocab);
    double total = 0.0;
    for (size_t r = 1; r <= vocab; ++r) {
        dist.vocab.push_back(synth_term(r));
        double v = std::pow(static_cast<double>(r), exponent);
        dist.probs[r - 1] = v;
        total += v;
    }
    for (auto& p : dist.probs) p /= total;
    return dist;
}

std::string rung_corpus_path(const run_config& cfg, size_t rung) {
    return cfg.out_dir + "/synth/rung_" + std::to_string(rung) + ".jsonl";
}

std::string family_queries_path(const run_config& cfg) {
    return cfg.out_dir + "/synth/queries.jsonl";
}

/// Generates the ladder family: one mixed corpus per rung (human side fixed,
/// llm side drawn from the rung distribution with common random numbers) and
/// one query set.
void synth_family(const run_config& cfg) {
    const auto& sp = cfg.synth;
    auto p_q = single_power_law_distribution(sp.vocab, sp.pq_exponent);
    auto tilt = rank_tilt_distribution(sp.vocab, sp.tilt_exponent);
    auto ladder = kl_ladder_toward(p_q, tilt, sp.rungs, sp.max_kl);

    auto queries = gen_queries(p_q, sp.queries, {length_law::kind::poisson, sp.query_len},
                               cfg.seed + 1000, source_label::parse("human"), "q");
    write_queries_jsonl(queries, family_queries_path(cfg));

    // Human side: documents drawn from the query distribution itself.
    auto draw_docs = [&](const term_distribution& dist, uint64_t seed, const char* prefix,
                         const char* src) {
        corpus out;
        discrete_sampler sampler(dist.probs);
        rng root(seed);
        char idbuf[32];
        for (size_t i = 0; i < sp.docs; ++i) {
            rng gen = root.split(i);
            uint64_t len = std::max<uint64_t>(1, gen.next_poisson(sp.doc_len));
            document d;
            std::snprintf(idbuf, sizeof(idbuf), "%s%06zu", prefix, i + 1);
            d.id = idbuf;
            d.source = source_label::parse(src);
            d.tokens.reserve(len);
            for (uint64_t t = 0; t < len; ++t)
                d.tokens.push_back(dist.vocab[sampler.sample(gen)]);
            std::string text;
            for (size_t ti = 0; ti < d.tokens.size(); ++ti) {
                if (ti > 0) text.push_back(' ');
                text += d.tokens[ti];
            }
            d.text = std::move(text);
            out.add(std::move(d));
        }
        out.mark_tokenized();
        return out;
    };

    corpus human_docs = draw_docs(p_q, cfg.seed + 2000, "h", "human");
    for (size_t rung = 0; rung < ladder.size(); ++rung) {
        corpus llm_docs = draw_docs(ladder[rung], cfg.seed + 3000, "l", "llm");
        corpus mixed;
        for (const auto& d : human_docs.docs()) mixed.add(d);
        for (const auto& d : llm_docs.docs()) mixed.add(d);
        write_corpus_jsonl(mixed, rung_corpus_path(cfg, rung));
    }
}

} // namespace

void stage_synth(const run_config& cfg) {
    if (cfg.kind == "corpus") {
        if (cfg.output.empty()) raise(errc::invalid_argument, "synth corpus requires --output");
        generator_spec spec;
        spec.vocab_size = cfg.synth.vocab;
        spec.alpha1 = cfg.synth.alpha1;
        spec.alpha2 = cfg.synth.alpha2;
        spec.r_c = cfg.synth.r_c;
        spec.n_docs = cfg.synth.docs;
        spec.doc_len_mean = cfg.synth.doc_len;
        spec.seed = cfg.seed;
        corpus docs = gen_corpus(spec, source_label::parse(cfg.source), "d");
        ensure_parent_dir(cfg.output);
        write_corpus_jsonl(docs, cfg.output);
    } else if (cfg.kind == "queries") {
        if (cfg.output.empty()) raise(errc::invalid_argument, "synth queries requires --output");
        auto p_q = single_power_law_distribution(cfg.synth.vocab, cfg.synth.pq_exponent);
        auto queries = gen_queries(p_q, cfg.synth.queries,
                                   {length_law::kind::poisson, cfg.synth.query_len}, cfg.seed,
                                   source_label::parse(cfg.source), "q");
        ensure_parent_dir(cfg.output);
        write_queries_jsonl(queries, cfg.output);
    } else if (cfg.kind == "ladder") {
        synth_family(cfg);
    } else {
        raise(errc::invalid_argument,
              "unknown synth kind: " + cfg.kind + " (expected corpus|queries|ladder)");
    }
}

void stage_report(const run_config& cfg) {
    // Family inputs from the synth stage (regenerated when missing).
    if (!std::filesystem::exists(family_queries_path(cfg))) synth_family(cfg);

    auto queries = ingest_queries(family_queries_path(cfg));
    tokenize_queries(queries, cfg.pipeline);

    table_writer family_csv(',', cfg.config_hash(),
                            {"dataset", "query_type", "kl_q_human", "kl_q_llm", "delta_kl",
                             "scorer", "delta_masr"});
    table_writer scatter('\t', cfg.config_hash(), {"scorer", "delta_kl", "delta_masr"});
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_scorer;

    for (size_t rung = 0; rung < cfg.synth.rungs; ++rung) {
        std::string path = rung_corpus_path(cfg, rung);
        if (!std::filesystem::exists(path))
            raise(errc::io, "missing family corpus " + path + "; run `synth ladder` first");
        corpus mixed = ingest_corpus(path);
        mixed.tokenize_all(cfg.pipeline);
        corpus human_docs, llm_docs;
        for (const auto& d : mixed.docs()) {
            if (d.source.str() == "human")
                human_docs.add(d);
            else
                llm_docs.add(d);
        }
        human_docs.mark_tokenized();
        llm_docs.mark_tokenized();

        std::string dataset = cfg.dataset + "-rung" + std::to_string(rung);
        auto rows = align_corpora(human_docs, llm_docs, queries, cfg);
        for (const auto& r : rows) {
            family_csv.row({dataset, cfg.query_type, fmt6(r.kl_q_human), fmt6(r.kl_q_llm),
                            fmt6(r.delta_kl), r.scorer, fmt6(r.delta_masr)});
            scatter.row({r.scorer, fmt6(r.delta_kl), fmt6(r.delta_masr)});
            by_scorer[r.scorer].first.push_back(r.delta_kl);
            by_scorer[r.scorer].second.push_back(r.delta_masr);
        }
    }

    table_writer summary(',', cfg.config_hash(), {"scorer", "n", "pearson_r", "p_value"});
    for (const auto& name : cfg.scorers) {
        auto it = by_scorer.find(name);
        if (it == by_scorer.end() || it->second.first.size() < 3) continue;
        auto res = pearson(it->second.first, it->second.second);
        summary.row({name, std::to_string(it->second.first.size()), fmt6(res.r),
                     fmt6(res.p_value)});
    }

    family_csv.save(cfg.out_dir + "/alignment_family.csv");
    scatter.save(cfg.out_dir + "/alignment_scatter.tsv");
    summary.save(cfg.out_dir + "/alignment_summary.csv");
}

void run_stage(const run_config& cfg, const std::string& stage) {
    if (stage == "ingest")
        stage_ingest(cfg);
    else if (stage == "index")
        stage_index(cfg);
    else if (stage == "retrieve")
        stage_retrieve(cfg);
    else if (stage == "profile")
        stage_profile(cfg);
    else if (stage == "metrics")
        stage_metrics(cfg);
    else if (stage == "align")
        stage_align(cfg);
    else if (stage == "synth")
        stage_synth(cfg);
    else if (stage == "report")
        stage_report(cfg);
    else
        raise(errc::invalid_argument, "unknown stage: " + stage);
}

} // namespace lexalign
