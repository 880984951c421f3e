#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "core/error.hpp"
#include "core/linglab.hpp"

using namespace lexalign;

namespace {

corpus single_doc_corpus(const std::vector<std::string>& tokens) {
    corpus c;
    document d;
    d.id = "d1";
    d.source = source_label::parse("human");
    d.tokens = tokens;
    c.add(d);
    c.mark_tokenized();
    return c;
}

rank_frequency_table exact_double_law_table(double a1, double a2, size_t r_c, size_t vocab,
                                            double scale) {
    std::map<std::string, uint64_t> counts;
    double stitch = std::pow(static_cast<double>(r_c), a2 - a1);
    char term[16];
    for (size_t r = 1; r <= vocab; ++r) {
        double f = r <= r_c ? scale * std::pow(static_cast<double>(r), -a1)
                            : scale * stitch * std::pow(static_cast<double>(r), -a2);
        std::snprintf(term, sizeof(term), "t%06zu", r);
        counts[term] = static_cast<uint64_t>(std::llround(f));
    }
    return rank_frequency(counts);
}

} // namespace

TEST_CASE("rank frequency basics") {
    SUBCASE("direct count") {
        auto t = rank_frequency(single_doc_corpus({"a", "a", "b"}));
        REQUIRE(t.rows.size() == 2);
        CHECK(t.rows[0].term == "a");
        CHECK(t.rows[0].freq == 2);
        CHECK(t.rows[0].rank == 1);
        CHECK(t.rows[1].term == "b");
        CHECK(t.rows[1].rank == 2);
    }
    SUBCASE("all-distinct tokens tie lexicographically") {
        auto t = rank_frequency(single_doc_corpus({"c", "a", "b"}));
        CHECK(t.rows[0].term == "a");
        CHECK(t.rows[1].term == "b");
        CHECK(t.rows[2].term == "c");
        for (const auto& row : t.rows) CHECK(row.freq == 1);
    }
    SUBCASE("permutation invariance") {
        auto t1 = rank_frequency(single_doc_corpus({"a", "b", "a", "c"}));
        auto t2 = rank_frequency(single_doc_corpus({"c", "a", "b", "a"}));
        REQUIRE(t1.rows.size() == t2.rows.size());
        for (size_t i = 0; i < t1.rows.size(); ++i) {
            CHECK(t1.rows[i].term == t2.rows[i].term);
            CHECK(t1.rows[i].freq == t2.rows[i].freq);
        }
    }
    SUBCASE("empty corpus is an error") {
        corpus c;
        c.mark_tokenized();
        CHECK_THROWS_AS(rank_frequency(c), error);
    }
}

TEST_CASE("zipf fit on exact power laws") {
    SUBCASE("single exponent across both segments") {
        // f(r) = 1e7 * r^-1 exactly (large scale keeps rounding negligible)
        auto table = exact_double_law_table(1.0, 1.0, 2000, 5000, 1e7);
        auto fit = fit_zipf(table, 2000);
        REQUIRE(fit.core);
        REQUIRE(fit.ext);
        CHECK(fit.core->alpha == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(fit.ext->alpha == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(fit.core->r2 > 0.999999);
        CHECK(fit.ext->r2 > 0.999999);
        CHECK(fit.n_core + fit.n_ext == table.rows.size());
    }
    SUBCASE("double regime recovered from the closed form") {
        // Continuous stitch of r^-0.9 to r^-1.7; frequencies taken from the
        // formula directly (no sampling noise). Tolerance reflects integer
        // rounding of the frequencies at scale 1e9.
        auto table = exact_double_law_table(0.9, 1.7, 2000, 6000, 1e9);
        auto fit = fit_zipf(table, 2000);
        REQUIRE(fit.core);
        REQUIRE(fit.ext);
        CHECK(fit.core->alpha == doctest::Approx(0.9).epsilon(1e-6));
        CHECK(fit.ext->alpha == doctest::Approx(1.7).epsilon(1e-6));
        CHECK(fit.core->r2 == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fit.ext->r2 == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("scale invariance of slopes and r2") {
        auto t1 = exact_double_law_table(0.8, 1.5, 100, 400, 1e8);
        std::map<std::string, uint64_t> scaled;
        for (const auto& row : t1.rows) scaled[row.term] = row.freq * 7;
        auto t2 = rank_frequency(scaled);
        auto f1 = fit_zipf(t1, 100);
        auto f2 = fit_zipf(t2, 100);
        CHECK(f1.core->alpha == doctest::Approx(f2.core->alpha).epsilon(1e-12));
        CHECK(f1.ext->alpha == doctest::Approx(f2.ext->alpha).epsilon(1e-12));
        CHECK(f1.core->r2 == doctest::Approx(f2.core->r2).epsilon(1e-9));
        CHECK(f1.ext->r2 == doctest::Approx(f2.ext->r2).epsilon(1e-9));
    }
    SUBCASE("short side reported absent") {
        auto table = rank_frequency(single_doc_corpus({"a", "a", "b", "c"}));
        auto fit = fit_zipf(table, 2000); // everything lands in the core
        CHECK(fit.core.has_value());
        CHECK_FALSE(fit.ext.has_value());
        CHECK(fit.n_ext == 0);
        auto fit2 = fit_zipf(table, 1); // core has a single point
        CHECK_FALSE(fit2.core.has_value());
        CHECK(fit2.ext.has_value());
    }
    SUBCASE("fewer than two points is an error") {
        auto table = rank_frequency(single_doc_corpus({"a", "a"}));
        CHECK_THROWS_AS(fit_zipf(table, 10), error);
    }
}

TEST_CASE("smoothed idf") {
    CHECK(idf_smoothed(100, 10) == doctest::Approx(2.2638).epsilon(1e-4));
    CHECK(idf_smoothed(100, 100) == doctest::Approx(0.0050).epsilon(1e-2));
    CHECK(idf_smoothed(100, 0) == doctest::Approx(std::log(1.0 + 100.5 / 0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(idf_smoothed(10, 11), error);
    CHECK_THROWS_AS(idf_smoothed(0, 0), error);

    SUBCASE("strictly decreasing in n") {
        for (uint64_t n = 0; n < 100; ++n)
            CHECK(idf_smoothed(100, n) > idf_smoothed(100, n + 1));
    }
    SUBCASE("never negative") {
        for (uint64_t n = 0; n <= 50; ++n) CHECK(idf_smoothed(50, n) >= 0.0);
    }
}

TEST_CASE("idf profile") {
    corpus ref;
    {
        auto add = [&](const char* id, std::vector<std::string> toks) {
            document d;
            d.id = id;
            d.source = source_label::parse("human");
            d.tokens = std::move(toks);
            ref.add(d);
        };
        add("r1", {"common", "common", "rare"});
        add("r2", {"common", "mid"});
        add("r3", {"common", "mid"});
        ref.mark_tokenized();
    }
    auto ref_idx = inverted_index::build(ref);

    SUBCASE("target = reference reproduces the self profile") {
        auto table = rank_frequency(ref);
        auto p1 = idf_profile(table, ref_idx, 2, "ref");
        auto p2 = idf_profile(table, ref_idx, 2, "ref");
        CHECK(p1.mean_idf_core == doctest::Approx(p2.mean_idf_core));
        CHECK(p1.per_term.at("common") == doctest::Approx(idf_smoothed(3, 3)));
        CHECK(p1.per_term.at("rare") == doctest::Approx(idf_smoothed(3, 1)));
    }
    SUBCASE("reference-unseen terms get the n=0 idf") {
        auto table = rank_frequency(single_doc_corpus({"novel", "common"}));
        auto prof = idf_profile(table, ref_idx, 10, "ref");
        CHECK(prof.per_term.at("novel") == doctest::Approx(idf_smoothed(3, 0)));
    }
    SUBCASE("rarer-in-reference core terms raise the core mean") {
        auto rare_table = rank_frequency(single_doc_corpus({"rare", "rare", "mid"}));
        auto common_table = rank_frequency(single_doc_corpus({"common", "common", "mid"}));
        auto rare_prof = idf_profile(rare_table, ref_idx, 10, "ref");
        auto common_prof = idf_profile(common_table, ref_idx, 10, "ref");
        CHECK(rare_prof.mean_idf_core > common_prof.mean_idf_core);
    }
    SUBCASE("empty reference is an error") {
        corpus empty;
        auto idx = inverted_index::build(empty);
        auto table = rank_frequency(single_doc_corpus({"x"}));
        CHECK_THROWS_AS(idf_profile(table, idx, 10, "none"), error);
    }
}

TEST_CASE("type-token ratio") {
    CHECK(ttr({"to", "be", "or", "not", "to", "be"}) == doctest::Approx(4.0 / 6.0));
    CHECK(ttr({"a", "b", "c"}) == doctest::Approx(1.0));
    CHECK(ttr({"x", "x", "x", "x"}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ttr({}), error);

    SUBCASE("duplication never raises diversity") {
        std::mt19937 rnd(99);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<std::string> doc;
            int len = 1 + static_cast<int>(rnd() % 12);
            for (int i = 0; i < len; ++i) doc.push_back(std::string(1, 'a' + rnd() % 5));
            auto doubled = doc;
            doubled.insert(doubled.end(), doc.begin(), doc.end());
            CHECK(ttr(doubled) <= ttr(doc) + 1e-12);
        }
    }
}

TEST_CASE("synonym clusters") {
    synonym_lexicon lex;
    lex.clusters["size"] = {"small", "tiny", "little"};
    lex.clusters["importance"] = {"important", "crucial", "significant"};

    SUBCASE("used size counts distinct occurring members") {
        auto counts = pooled_counts(single_doc_corpus({"small", "tiny", "small", "dog"}));
        auto stats = synonym_cluster_stats(counts, lex);
        REQUIRE(stats.clusters.size() == 2);
        for (const auto& cu : stats.clusters) {
            if (cu.cluster_id == "size") CHECK(cu.used_size == 2);
            if (cu.cluster_id == "importance") CHECK(cu.used_size == 0);
        }
        CHECK(stats.mean_used_size == doctest::Approx(1.0));
    }
    SUBCASE("distribution over member terms") {
        std::map<std::string, uint64_t> counts{{"important", 5}, {"crucial", 2}, {"dog", 9}};
        auto dist = cluster_distribution(counts, lex, "importance");
        CHECK(dist.at("important") == 5);
        CHECK(dist.at("crucial") == 2);
        CHECK(dist.at("significant") == 0);
        CHECK_THROWS_AS(cluster_distribution(counts, lex, "nope"), error);
    }
    SUBCASE("mean used size grows with corpus supersets") {
        std::map<std::string, uint64_t> small{{"small", 1}};
        std::map<std::string, uint64_t> bigger{{"small", 1}, {"crucial", 2}, {"tiny", 1}};
        CHECK(synonym_cluster_stats(small, lex).mean_used_size <=
              synonym_cluster_stats(bigger, lex).mean_used_size);
    }
    SUBCASE("lexicon tsv loader") {
        const char* path = "tl_lex.tsv";
        {
            std::ofstream out(path);
            out << "# sample lexicon\nsize\tsmall\nsize\ttiny\nimportance\timportant\n";
        }
        auto loaded = load_synonym_lexicon(path);
        CHECK(loaded.clusters.at("size").size() == 2);
        CHECK(loaded.clusters.at("importance").size() == 1);
        std::remove(path);
        CHECK_THROWS_AS(load_synonym_lexicon("tl_missing.tsv"), error);
    }
    SUBCASE("empty lexicon is an error") {
        synonym_lexicon empty;
        CHECK_THROWS_AS(synonym_cluster_stats({}, empty), error);
    }
}
