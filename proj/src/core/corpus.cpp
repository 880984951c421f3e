#include "core/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"

namespace lexalign {

using nlohmann::ordered_json;

source_label source_label::parse(const std::string& s) {
    source_label out;
    if (s == "human") {
        out.type = kind::human;
    } else if (s == "llm") {
        out.type = kind::llm;
    } else {
        out.type = kind::other;
        out.tag = s;
    }
    return out;
}

const std::string& source_label::str() const {
    static const std::string human_s = "human";
    static const std::string llm_s = "llm";
    switch (type) {
    case kind::human: return human_s;
    case kind::llm: return llm_s;
    default: return tag;
    }
}

void corpus::add(document doc) {
    auto [it, inserted] = m_by_id.emplace(doc.id, m_docs.size());
    if (!inserted) raise(errc::duplicate_id, "duplicate document id: " + doc.id);
    m_docs.push_back(std::move(doc));
}

const document* corpus::find(const std::string& id) const {
    auto it = m_by_id.find(id);
    return it == m_by_id.end() ? nullptr : &m_docs[it->second];
}

void corpus::tokenize_all(const pipeline_config& cfg) {
    for (auto& d : m_docs) d.tokens = tokenize(d.text, cfg);
    m_tokenized = true;
}

namespace {

struct parsed_record {
    std::string id;
    std::string text;
    std::string source;
    std::optional<std::string> pair_id;
};

parsed_record parse_record(const std::string& line, size_t lineno) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const std::exception& e) {
        raise(errc::parse, "line " + std::to_string(lineno) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object())
        raise(errc::parse, "line " + std::to_string(lineno) + ": record is not a JSON object");
    parsed_record rec;
    for (const char* field : {"id", "text", "source"}) {
        if (!j.contains(field) || !j[field].is_string())
            raise(errc::parse, "line " + std::to_string(lineno) + ": missing string field '" +
                                   field + "'");
    }
    rec.id = j["id"].get<std::string>();
    rec.text = j["text"].get<std::string>();
    rec.source = j["source"].get<std::string>();
    if (j.contains("pair_id")) {
        if (!j["pair_id"].is_string())
            raise(errc::parse, "line " + std::to_string(lineno) + ": pair_id must be a string");
        rec.pair_id = j["pair_id"].get<std::string>();
    }
    return rec;
}

} // namespace

corpus ingest_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open corpus file: " + path);
    corpus c;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        parsed_record rec = parse_record(line, lineno);
        document d;
        d.id = std::move(rec.id);
        d.text = std::move(rec.text);
        d.source = source_label::parse(rec.source);
        d.pair_id = std::move(rec.pair_id);
        try {
            c.add(std::move(d));
        } catch (const error& e) {
            raise(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

std::string document_to_jsonl(const document& d) {
    ordered_json j;
    j["id"] = d.id;
    j["text"] = d.text;
    j["source"] = d.source.str();
    if (d.pair_id) j["pair_id"] = *d.pair_id;
    return j.dump();
}

void write_corpus_jsonl(const corpus& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io, "cannot write corpus file: " + path);
    for (const auto& d : c.docs()) out << document_to_jsonl(d) << "\n";
    if (!out) raise(errc::io, "write failed: " + path);
}

std::vector<query> ingest_queries(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open query file: " + path);
    std::vector<query> qs;
    std::set<std::string> seen;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        parsed_record rec = parse_record(line, lineno);
        if (!seen.insert(rec.id).second)
            raise(errc::duplicate_id,
                  "line " + std::to_string(lineno) + ": duplicate query id: " + rec.id);
        query q;
        q.id = std::move(rec.id);
        q.text = std::move(rec.text);
        q.source = source_label::parse(rec.source);
        qs.push_back(std::move(q));
    }
    return qs;
}

void write_queries_jsonl(const std::vector<query>& qs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io, "cannot write query file: " + path);
    for (const auto& q : qs) {
        ordered_json j;
        j["id"] = q.id;
        j["text"] = q.text;
        j["source"] = q.source.str();
        out << j.dump() << "\n";
    }
    if (!out) raise(errc::io, "write failed: " + path);
}

void load_qrels(const std::string& path, std::vector<query>& queries) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open qrels file: " + path);
    std::unordered_map<std::string, query*> by_id;
    for (auto& q : queries) by_id[q.id] = &q;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream row(line);
        std::string qid, iter, docid;
        long grade = 0;
        if (!(row >> qid)) continue;
        if (!(row >> iter >> docid >> grade))
            raise(errc::parse, "qrels line " + std::to_string(lineno) +
                                   ": expected `qid 0 docid grade`");
        if (grade < 0)
            raise(errc::parse,
                  "qrels line " + std::to_string(lineno) + ": negative relevance grade");
        auto it = by_id.find(qid);
        if (it != by_id.end()) it->second->qrels[docid] = static_cast<int>(grade);
    }
}

void tokenize_queries(std::vector<query>& queries, const pipeline_config& cfg) {
    for (auto& q : queries) q.tokens = tokenize(q.text, cfg);
}

overlap_result lexical_similarity(const std::vector<std::string>& candidate,
                                  const std::vector<std::string>& reference) {
    std::set<std::string> a(candidate.begin(), candidate.end());
    std::set<std::string> b(reference.begin(), reference.end());
    if (a.empty() && b.empty())
        raise(errc::invalid_argument, "lexical similarity of two empty token sets is undefined");
    size_t inter = 0;
    for (const auto& t : a) inter += b.count(t);
    size_t uni = a.size() + b.size() - inter;
    overlap_result out;
    out.jaccard = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    out.overlap = b.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(b.size());
    return out;
}

} // namespace lexalign
