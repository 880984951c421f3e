#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "core/error.hpp"
#include "core/scoring.hpp"
#include "oracles.hpp"

using namespace lexalign;

namespace {

corpus corpus_from(const std::vector<oracle::doc>& docs) {
    corpus c;
    for (const auto& od : docs) {
        document d;
        d.id = od.id;
        d.source = source_label::parse(od.source);
        d.tokens = od.tokens;
        for (const auto& t : od.tokens) d.text += t + " ";
        c.add(d);
    }
    c.mark_tokenized();
    return c;
}

const std::vector<oracle::doc> three_docs = {
    {"d1", "human", {"apple", "banana", "apple"}},
    {"d2", "human", {"banana", "cherry"}},
    {"d3", "human", {"cherry", "cherry"}}};

scorer_config config_for(scorer_model m) {
    scorer_config cfg;
    cfg.model = m;
    return cfg;
}

double pair_score(const inverted_index& idx, scorer_model m,
                  const std::vector<std::string>& q, const std::string& doc_id) {
    scorer s(idx, config_for(m));
    return s.score_pair(q, *idx.slot_of(doc_id)).value;
}

} // namespace

TEST_CASE("scorer config validation") {
    scorer_config cfg;
    cfg.validate();
    cfg.k1 = 0.0;
    CHECK_THROWS_AS(cfg.validate(), error);
    cfg = scorer_config{};
    cfg.b = 1.5;
    CHECK_THROWS_AS(cfg.validate(), error);
    cfg = scorer_config{};
    cfg.lambda = -0.1;
    CHECK_THROWS_AS(cfg.validate(), error);
    cfg = scorer_config{};
    cfg.c = 0.0;
    CHECK_THROWS_AS(cfg.validate(), error);
    CHECK_THROWS_AS(scorer_model_from_string("lucene"), error);
}

TEST_CASE("hand-evaluated scores on the three-document corpus") {
    auto idx = inverted_index::build(corpus_from(three_docs));
    std::vector<std::string> q{"apple"};

    SUBCASE("tfidf cosine") {
        double impl = pair_score(idx, scorer_model::tfidf, q, "d1");
        double ref = oracle::naive_tfidf(q, three_docs[0], three_docs);
        CHECK(impl == doctest::Approx(ref).epsilon(1e-12));
        // Frozen from the dense-vector oracle: 2*ln(3)^2 normalized.
        CHECK(impl == doctest::Approx(0.9833963).epsilon(1e-6));
    }
    SUBCASE("bm25") {
        double impl = pair_score(idx, scorer_model::bm25, q, "d1");
        double ref = oracle::naive_bm25(q, three_docs[0], three_docs, 0.9, 0.4);
        CHECK(impl == doctest::Approx(ref).epsilon(1e-12));
        CHECK(impl == doctest::Approx(0.6464).epsilon(2e-4));
    }
    SUBCASE("ql with lambda 0.1") {
        double impl = pair_score(idx, scorer_model::ql_jm, q, "d1");
        double ref = oracle::naive_ql(q, three_docs[0], three_docs, 0.1);
        CHECK(impl == doctest::Approx(ref).epsilon(1e-12));
        CHECK(impl == doctest::Approx(-0.4643).epsilon(2e-4));
    }
    SUBCASE("dfr in-l-h2 with c=1") {
        double impl = pair_score(idx, scorer_model::dfr_inlh2, q, "d1");
        double ref = oracle::naive_dfr(q, three_docs[0], three_docs, 1.0, true);
        CHECK(impl == doctest::Approx(ref).epsilon(1e-12));
        CHECK(impl == doctest::Approx(0.8831).epsilon(2e-4));
    }
}

TEST_CASE("tfidf edge cases") {
    auto idx = inverted_index::build(corpus_from(three_docs));
    scorer s(idx, config_for(scorer_model::tfidf));

    SUBCASE("query identical to document scores 1") {
        auto out = s.score_pair({"cherry", "cherry"}, *idx.slot_of("d3"));
        CHECK(out.value == doctest::Approx(1.0));
    }
    SUBCASE("no shared term scores 0") {
        auto out = s.score_pair({"apple"}, *idx.slot_of("d3"));
        CHECK(out.value == 0.0);
        CHECK_FALSE(out.degenerate);
    }
    SUBCASE("zero-norm query is degenerate") {
        auto out = s.score_pair({"durian"}, *idx.slot_of("d1"));
        CHECK(out.value == 0.0);
        CHECK(out.degenerate);
    }
    SUBCASE("cosine stays in [0,1] for every pair") {
        for (const char* id : {"d1", "d2", "d3"}) {
            auto out = s.score_pair({"apple", "banana", "cherry"}, *idx.slot_of(id));
            CHECK(out.value >= 0.0);
            CHECK(out.value <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("bm25 edge cases") {
    SUBCASE("absent query term contributes zero") {
        auto idx = inverted_index::build(corpus_from(three_docs));
        double with = pair_score(idx, scorer_model::bm25, {"apple", "durian"}, "d1");
        double without = pair_score(idx, scorer_model::bm25, {"apple"}, "d1");
        CHECK(with == doctest::Approx(without).epsilon(1e-12));
    }
    SUBCASE("df = (N+?)/2 makes idf zero: N=2, df=1") {
        auto idx = inverted_index::build(
            corpus_from({{"a", "human", {"x"}}, {"b", "human", {"y"}}}));
        CHECK(pair_score(idx, scorer_model::bm25, {"x"}, "a") == doctest::Approx(0.0));
    }
    SUBCASE("negative idf is kept when df > N/2") {
        auto idx = inverted_index::build(corpus_from(
            {{"a", "human", {"x"}}, {"b", "human", {"x"}}, {"c", "human", {"y"}}}));
        CHECK(pair_score(idx, scorer_model::bm25, {"x"}, "a") < 0.0);
    }
}

TEST_CASE("ql edge cases") {
    SUBCASE("single-term collection scores zero") {
        auto idx = inverted_index::build(corpus_from({{"a", "human", {"w"}}}));
        CHECK(pair_score(idx, scorer_model::ql_jm, {"w"}, "a") == doctest::Approx(0.0));
    }
    SUBCASE("term in collection but not in doc uses the collection model") {
        auto idx = inverted_index::build(corpus_from(three_docs));
        double impl = pair_score(idx, scorer_model::ql_jm, {"apple"}, "d3");
        CHECK(impl == doctest::Approx(std::log(0.1 * 2.0 / 7.0)).epsilon(1e-12));
    }
    SUBCASE("unseen term raises the sentinel") {
        auto idx = inverted_index::build(corpus_from(three_docs));
        scorer s(idx, config_for(scorer_model::ql_jm));
        auto out = s.score_pair({"durian"}, *idx.slot_of("d1"));
        CHECK(out.unseen_term);
        CHECK(std::isinf(out.value));
        CHECK(out.value < 0.0);
    }
}

TEST_CASE("dfr edge cases") {
    SUBCASE("tf=0 contributes zero") {
        auto idx = inverted_index::build(corpus_from(three_docs));
        double with = pair_score(idx, scorer_model::dfr_inlh2, {"apple", "cherry"}, "d1");
        double apple_only = pair_score(idx, scorer_model::dfr_inlh2, {"apple"}, "d1");
        CHECK(with == doctest::Approx(apple_only).epsilon(1e-12));
    }
    SUBCASE("document at average length has tfn = tf") {
        // Both docs have length 2, so |d| = avgdl.
        auto idx = inverted_index::build(
            corpus_from({{"a", "human", {"x", "x"}}, {"b", "human", {"y", "z"}}}));
        scorer_config h2 = config_for(scorer_model::dfr_inlh2);
        scorer_config raw = h2;
        raw.dfr_h2 = false;
        scorer s1(idx, h2), s2(idx, raw);
        uint32_t slot = *idx.slot_of("a");
        CHECK(s1.score_pair({"x"}, slot).value ==
              doctest::Approx(s2.score_pair({"x"}, slot).value).epsilon(1e-12));
    }
}

TEST_CASE("per-term additivity for the sum-form scorers") {
    auto idx = inverted_index::build(corpus_from(three_docs));
    std::vector<std::string> q{"apple", "banana", "banana", "cherry"};
    for (auto model : {scorer_model::bm25, scorer_model::ql_jm, scorer_model::dfr_inlh2}) {
        scorer s(idx, config_for(model));
        uint32_t slot = *idx.slot_of("d2");
        double whole = s.score_pair(q, slot).value;
        double parts = 0.0;
        for (const auto& t : q) parts += s.score_pair({t}, slot).value;
        CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
    }
}

TEST_CASE("bm25 tf gain: increasing, concave, bounded") {
    double k1 = 0.9;
    auto gain = [&](double tf) { return (k1 + 1.0) * tf / (k1 + tf); };
    double prev = gain(0);
    double prev_diff = gain(1) - gain(0);
    for (int tf = 1; tf <= 50; ++tf) {
        double g = gain(tf);
        CHECK(g > prev);
        if (tf >= 2) {
            double diff = g - gain(tf - 1);
            CHECK(diff < prev_diff);
            prev_diff = diff;
        }
        CHECK(g < k1 + 1.0); // caps the per-term score at (k1+1)*idf
        prev = g;
    }
}

TEST_CASE("ql strictly increases with tf") {
    auto base = corpus_from({{"a", "human", {"x", "y", "y"}}, {"b", "human", {"x", "z"}}});
    auto more = corpus_from({{"a", "human", {"x", "x", "y"}}, {"b", "human", {"x", "z"}}});
    auto idx1 = inverted_index::build(base);
    auto idx2 = inverted_index::build(more);
    // same |d| and same collection size; tf(x, a) goes 1 -> 2
    CHECK(pair_score(idx2, scorer_model::ql_jm, {"x"}, "a") >
          pair_score(idx1, scorer_model::ql_jm, {"x"}, "a"));
}

TEST_CASE("search_topk") {
    auto idx = inverted_index::build(corpus_from(three_docs));

    SUBCASE("bm25 apple: d1 only, zero-score docs pruned") {
        scorer s(idx, config_for(scorer_model::bm25));
        auto list = s.search_topk("q1", {"apple"}, 3);
        REQUIRE(list.entries.size() == 1);
        CHECK(list.entries[0].doc_id == "d1");
        CHECK(list.entries[0].score == doctest::Approx(0.6464).epsilon(2e-4));
        CHECK(list.entries[0].source.str() == "human");
    }
    SUBCASE("ties break by ascending doc id") {
        auto tie_idx = inverted_index::build(
            corpus_from({{"zb", "human", {"x"}}, {"za", "human", {"x"}}, {"c", "llm", {"y"}}}));
        scorer s(tie_idx, config_for(scorer_model::dfr_inlh2));
        auto list = s.search_topk("q1", {"x"}, 5);
        REQUIRE(list.entries.size() == 2);
        CHECK(list.entries[0].doc_id == "za");
        CHECK(list.entries[1].doc_id == "zb");
    }
    SUBCASE("k=1 on a single-doc corpus") {
        auto one = inverted_index::build(corpus_from({{"only", "llm", {"x"}}}));
        scorer s(one, config_for(scorer_model::ql_jm));
        auto list = s.search_topk("q1", {"x"}, 1);
        REQUIRE(list.entries.size() == 1);
        CHECK(list.entries[0].doc_id == "only");
    }
    SUBCASE("k larger than the candidate set shortens the list") {
        scorer s(idx, config_for(scorer_model::bm25));
        CHECK(s.search_topk("q1", {"banana"}, 100).entries.size() == 2);
        CHECK_THROWS_AS(s.search_topk("q1", {"banana"}, 0), error);
    }
}

TEST_CASE("oracle equivalence on random collections") {
    std::mt19937 rnd(20240811);
    auto word = [&](int i) { return "w" + std::to_string(i); };
    for (int trial = 0; trial < 50; ++trial) {
        int vocab = 2 + static_cast<int>(rnd() % 49);
        int n_docs = 1 + static_cast<int>(rnd() % 20);
        std::vector<oracle::doc> docs;
        for (int i = 0; i < n_docs; ++i) {
            oracle::doc d;
            d.id = "d" + std::to_string(i);
            d.source = i % 2 == 0 ? "human" : "llm";
            int len = 1 + static_cast<int>(rnd() % 30);
            for (int t = 0; t < len; ++t)
                d.tokens.push_back(word(static_cast<int>(rnd() % vocab)));
            docs.push_back(d);
        }
        auto idx = inverted_index::build(corpus_from(docs));
        // query terms drawn from the observed vocabulary (the out-of-
        // collection sentinel has its own test)
        std::vector<std::string> observed;
        for (uint32_t tid = 0; tid < idx.vocab_size(); ++tid)
            observed.push_back(idx.term(tid));
        std::vector<std::string> q;
        int qlen = 1 + static_cast<int>(rnd() % 6);
        for (int t = 0; t < qlen; ++t)
            q.push_back(observed[rnd() % observed.size()]);

        for (auto model : {scorer_model::tfidf, scorer_model::bm25, scorer_model::ql_jm,
                           scorer_model::dfr_inlh2}) {
            scorer s(idx, config_for(model));
            std::vector<std::pair<std::string, double>> id_scores;
            for (const auto& od : docs) {
                double ref = 0.0;
                switch (model) {
                case scorer_model::tfidf: ref = oracle::naive_tfidf(q, od, docs); break;
                case scorer_model::bm25: ref = oracle::naive_bm25(q, od, docs, 0.9, 0.4); break;
                case scorer_model::ql_jm: ref = oracle::naive_ql(q, od, docs, 0.1); break;
                case scorer_model::dfr_inlh2:
                    ref = oracle::naive_dfr(q, od, docs, 1.0, true);
                    break;
                }
                double impl = s.score_pair(q, *idx.slot_of(od.id)).value;
                double tol = 1e-9 * std::max(1.0, std::fabs(ref));
                CHECK(std::fabs(impl - ref) <= tol);
                // retrieval candidates are posting-matched documents only
                bool matches = false;
                for (const auto& t : q)
                    for (const auto& tok : od.tokens)
                        if (t == tok) matches = true;
                if (matches) id_scores.emplace_back(od.id, impl);
            }
            // search agrees with full scoring + stable sort
            size_t k = 1 + rnd() % 10;
            auto expected =
                oracle::naive_topk(id_scores, k, model != scorer_model::ql_jm);
            auto got = s.search_topk("q", q, k);
            REQUIRE(got.entries.size() == expected.size());
            for (size_t i = 0; i < expected.size(); ++i) {
                CHECK(got.entries[i].doc_id == expected[i].first);
                CHECK(got.entries[i].score == doctest::Approx(expected[i].second).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("trec run file and source sidecar round-trip") {
    std::vector<ranked_list> lists(1);
    lists[0].query_id = "q1";
    lists[0].entries = {{"d2", 1.25, source_label::parse("human")},
                        {"d1", 0.5, source_label::parse("llm")}};
    const char* run_path = "ts_run.txt";
    write_run_trec(lists, "tagx", run_path);
    {
        std::ifstream in(run_path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "q1 Q0 d2 1 1.250000 tagx");
        std::getline(in, line);
        CHECK(line == "q1 Q0 d1 2 0.500000 tagx");
    }
    auto read = read_run_trec(run_path);
    REQUIRE(read.size() == 1);
    REQUIRE(read[0].entries.size() == 2);
    CHECK(read[0].entries[0].doc_id == "d2");
    std::remove(run_path);

    const char* side_path = "ts_sources.jsonl";
    write_source_sidecar({{"d2", "human"}, {"d1", "llm"}, {"d2", "human"}}, side_path);
    auto sources = read_source_sidecar(side_path);
    REQUIRE(sources.size() == 2); // dedupe + sort
    CHECK(sources[0] == std::pair<std::string, std::string>{"d1", "llm"});
    std::remove(side_path);
}
