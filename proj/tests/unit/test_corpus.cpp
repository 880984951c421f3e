#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "core/corpus.hpp"
#include "core/error.hpp"

using namespace lexalign;

namespace {

struct temp_file {
    std::string path;
    explicit temp_file(const std::string& name, const std::string& content) : path(name) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~temp_file() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("ingest: minimal valid corpus") {
    temp_file f("tc_min.jsonl", R"({"id":"d1","text":"apple","source":"human"})"
                                "\n");
    corpus c = ingest_corpus(f.path);
    REQUIRE(c.size() == 1);
    CHECK(c.at(0).id == "d1");
    CHECK(c.at(0).text == "apple");
    CHECK(c.at(0).source.str() == "human");
    CHECK_FALSE(c.at(0).pair_id.has_value());
}

TEST_CASE("ingest: empty file gives empty corpus") {
    temp_file f("tc_empty.jsonl", "");
    CHECK(ingest_corpus(f.path).empty());
}

TEST_CASE("ingest: duplicate id names the offender") {
    temp_file f("tc_dup.jsonl", R"({"id":"d1","text":"a","source":"human"})"
                                "\n"
                                R"({"id":"d1","text":"b","source":"llm"})"
                                "\n");
    try {
        ingest_corpus(f.path);
        FAIL("expected duplicate-id error");
    } catch (const error& e) {
        CHECK(e.code() == errc::duplicate_id);
        CHECK(std::string(e.what()).find("d1") != std::string::npos);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("ingest: malformed record reports the line number") {
    temp_file f("tc_bad.jsonl", R"({"id":"d1","text":"a","source":"human"})"
                                "\n{not json\n");
    try {
        ingest_corpus(f.path);
        FAIL("expected parse error");
    } catch (const error& e) {
        CHECK(e.code() == errc::parse);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("ingest: missing field and pair_id handling") {
    temp_file bad("tc_nofield.jsonl", R"({"id":"d1","source":"human"})"
                                      "\n");
    CHECK_THROWS_AS(ingest_corpus(bad.path), error);

    temp_file withpair("tc_pair.jsonl",
                       R"({"id":"d1","text":"a","source":"llm","pair_id":"h1"})"
                       "\n");
    corpus c = ingest_corpus(withpair.path);
    REQUIRE(c.at(0).pair_id.has_value());
    CHECK(*c.at(0).pair_id == "h1");
    CHECK(c.at(0).source.str() == "llm");
}

TEST_CASE("other source labels are carried verbatim") {
    source_label s = source_label::parse("wiki-bot");
    CHECK(s.str() == "wiki-bot");
    CHECK(s.type == source_label::kind::other);
}

TEST_CASE("ingest -> serialize -> ingest is byte-stable") {
    // Arbitrary well-formed input, including field order and escapes.
    temp_file f("tc_round.jsonl",
                R"({"text":"b \"quoted\" é","id":"d2","source":"llm","pair_id":"d1"})"
                "\n"
                R"({"id":"d1","text":"apple  pie","source":"human"})"
                "\n");
    corpus first = ingest_corpus(f.path);
    temp_file g("tc_round2.jsonl", "");
    write_corpus_jsonl(first, g.path);
    std::string once = slurp(g.path);
    corpus second = ingest_corpus(g.path);
    write_corpus_jsonl(second, g.path);
    CHECK(slurp(g.path) == once);
    CHECK(second.size() == first.size());
    CHECK(second.at(0).id == "d2"); // input order preserved
}

TEST_CASE("queries and qrels") {
    temp_file qf("tc_q.jsonl", R"({"id":"q1","text":"apple pie","source":"human"})"
                               "\n");
    temp_file rf("tc_q.qrels", "q1 0 d1 2\nq1 0 d2 0\nqX 0 d9 1\n");
    auto qs = ingest_queries(qf.path);
    REQUIRE(qs.size() == 1);
    load_qrels(rf.path, qs);
    CHECK(qs[0].qrels.at("d1") == 2);
    CHECK(qs[0].qrels.at("d2") == 0);
    CHECK(qs[0].qrels.size() == 2); // unknown query ids ignored

    temp_file neg("tc_neg.qrels", "q1 0 d1 -1\n");
    CHECK_THROWS_AS(load_qrels(neg.path, qs), error);
}

TEST_CASE("lexical similarity examples") {
    using tokens = std::vector<std::string>;
    SUBCASE("identical sets") {
        auto r = lexical_similarity(tokens{"a", "b"}, tokens{"b", "a", "a"});
        CHECK(r.jaccard == doctest::Approx(1.0));
        CHECK(r.overlap == doctest::Approx(1.0));
    }
    SUBCASE("hand-set arithmetic 2/4 and 2/3") {
        auto r = lexical_similarity(tokens{"a", "b", "c"}, tokens{"b", "c", "d"});
        CHECK(r.jaccard == doctest::Approx(0.5));
        CHECK(r.overlap == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("disjoint nonempty sets") {
        auto r = lexical_similarity(tokens{"a"}, tokens{"b"});
        CHECK(r.jaccard == doctest::Approx(0.0));
        CHECK(r.overlap == doctest::Approx(0.0));
    }
    SUBCASE("both empty is undefined") {
        CHECK_THROWS_AS(lexical_similarity(tokens{}, tokens{}), error);
    }
    SUBCASE("jaccard symmetric, overlap reference-sensitive") {
        tokens a{"a", "b", "c"}, b{"b", "c", "d", "e"};
        auto ab = lexical_similarity(a, b);
        auto ba = lexical_similarity(b, a);
        CHECK(ab.jaccard == doctest::Approx(ba.jaccard));
        CHECK(ab.overlap == doctest::Approx(2.0 / 4.0));
        CHECK(ba.overlap == doctest::Approx(2.0 / 3.0));
    }
}

TEST_CASE("tokenize_all fills tokens for alphanumeric text") {
    temp_file f("tc_tok.jsonl", R"({"id":"d1","text":"An apple!","source":"human"})"
                                "\n");
    corpus c = ingest_corpus(f.path);
    CHECK_FALSE(c.tokenized());
    c.tokenize_all(pipeline_config{});
    CHECK(c.tokenized());
    CHECK(c.at(0).tokens == std::vector<std::string>{"an", "apple"});
}
