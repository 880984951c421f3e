#include "core/index.hpp"

#include <algorithm>
#include <fstream>
#include <cstring>
#include <numeric>
#include <thread>

#include "core/error.hpp"

namespace lexalign {

namespace {

constexpr char snapshot_magic[8] = {'L', 'E', 'X', 'I', 'D', 'X', '0', '1'};

void put_u64(std::ostream& out, uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 8);
}

uint64_t get_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
    return v;
}

void put_str(std::ostream& out, const std::string& s) {
    put_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_str(std::istream& in) {
    uint64_t n = get_u64(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    return s;
}

} // namespace

inverted_index inverted_index::build(const corpus& docs, unsigned threads) {
    if (!docs.tokenized() && !docs.empty())
        raise(errc::state, "corpus must be tokenized before indexing");

    inverted_index idx;

    // Slot order: ascending document id, independent of input order.
    std::vector<size_t> order(docs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return docs.at(a).id < docs.at(b).id; });

    idx.m_docs.resize(docs.size());
    std::vector<std::map<std::string, uint32_t>> counts(docs.size());

    auto count_range = [&](size_t begin, size_t end) {
        for (size_t slot = begin; slot < end; ++slot) {
            const document& d = docs.at(order[slot]);
            idx.m_docs[slot] = {d.id, d.source, static_cast<uint32_t>(d.tokens.size())};
            auto& m = counts[slot];
            for (const auto& tok : d.tokens) ++m[tok];
        }
    };

    if (threads <= 1 || docs.size() < 2) {
        count_range(0, docs.size());
    } else {
        unsigned workers = std::min<unsigned>(threads, std::thread::hardware_concurrency() * 4 + 1);
        std::vector<std::thread> pool;
        size_t chunk = (docs.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            size_t begin = w * chunk;
            size_t end = std::min(docs.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(count_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    // Ordered merge: term ids follow lexicographic order, postings follow
    // slot order, so the result is identical for any worker count.
    std::map<std::string, uint32_t> term_ids;
    for (const auto& m : counts)
        for (const auto& [term, tf] : m) term_ids.emplace(term, 0);
    idx.m_terms.reserve(term_ids.size());
    for (auto& [term, tid] : term_ids) {
        tid = static_cast<uint32_t>(idx.m_terms.size());
        idx.m_terms.push_back(term);
    }
    idx.m_postings.resize(idx.m_terms.size());
    idx.m_cf.assign(idx.m_terms.size(), 0);
    for (size_t slot = 0; slot < counts.size(); ++slot) {
        for (const auto& [term, tf] : counts[slot]) {
            uint32_t tid = term_ids[term];
            idx.m_postings[tid].push_back({static_cast<uint32_t>(slot), tf});
            idx.m_cf[tid] += tf;
            idx.m_total_tokens += tf;
        }
    }
    idx.rebuild_lookups();
    return idx;
}

void inverted_index::rebuild_lookups() {
    m_doc_slots.clear();
    m_doc_slots.reserve(m_docs.size());
    for (uint32_t i = 0; i < m_docs.size(); ++i) m_doc_slots[m_docs[i].id] = i;
    m_term_ids.clear();
    m_term_ids.reserve(m_terms.size());
    for (uint32_t i = 0; i < m_terms.size(); ++i) m_term_ids[m_terms[i]] = i;
}

std::optional<uint32_t> inverted_index::slot_of(const std::string& doc_id) const {
    auto it = m_doc_slots.find(doc_id);
    if (it == m_doc_slots.end()) return std::nullopt;
    return it->second;
}

std::optional<uint32_t> inverted_index::term_id(const std::string& term) const {
    auto it = m_term_ids.find(term);
    if (it == m_term_ids.end()) return std::nullopt;
    return it->second;
}

uint64_t inverted_index::df(const std::string& term) const {
    auto tid = term_id(term);
    return tid ? df(*tid) : 0;
}

uint64_t inverted_index::cf(const std::string& term) const {
    auto tid = term_id(term);
    return tid ? cf(*tid) : 0;
}

uint32_t inverted_index::tf(uint32_t tid, uint32_t slot) const {
    const auto& plist = m_postings[tid];
    auto it = std::lower_bound(plist.begin(), plist.end(), slot,
                               [](const posting& p, uint32_t s) { return p.slot < s; });
    if (it == plist.end() || it->slot != slot) return 0;
    return it->tf;
}

collection_stats inverted_index::stats() const {
    collection_stats s;
    s.doc_count = m_docs.size();
    s.total_tokens = m_total_tokens;
    s.avgdl = avgdl();
    for (uint32_t tid = 0; tid < m_terms.size(); ++tid) {
        s.df[m_terms[tid]] = df(tid);
        s.cf[m_terms[tid]] = cf(tid);
    }
    return s;
}

void inverted_index::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io, "cannot write index snapshot: " + path);
    out.write(snapshot_magic, sizeof(snapshot_magic));
    put_u64(out, m_docs.size());
    put_u64(out, m_terms.size());
    put_u64(out, m_total_tokens);
    for (const auto& d : m_docs) {
        put_str(out, d.id);
        put_str(out, d.source.str());
        put_u64(out, d.length);
    }
    for (uint32_t tid = 0; tid < m_terms.size(); ++tid) {
        put_str(out, m_terms[tid]);
        put_u64(out, m_postings[tid].size());
        for (const auto& p : m_postings[tid]) {
            put_u64(out, p.slot);
            put_u64(out, p.tf);
        }
    }
    if (!out) raise(errc::io, "index snapshot write failed: " + path);
}

inverted_index inverted_index::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open index snapshot: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, snapshot_magic, 8) != 0)
        raise(errc::parse, "not a lexalign index snapshot: " + path);
    inverted_index idx;
    uint64_t n_docs = get_u64(in);
    uint64_t n_terms = get_u64(in);
    idx.m_total_tokens = get_u64(in);
    idx.m_docs.resize(n_docs);
    for (auto& d : idx.m_docs) {
        d.id = get_str(in);
        d.source = source_label::parse(get_str(in));
        d.length = static_cast<uint32_t>(get_u64(in));
    }
    idx.m_terms.resize(n_terms);
    idx.m_postings.resize(n_terms);
    idx.m_cf.assign(n_terms, 0);
    for (uint64_t tid = 0; tid < n_terms; ++tid) {
        idx.m_terms[tid] = get_str(in);
        uint64_t len = get_u64(in);
        idx.m_postings[tid].resize(len);
        for (auto& p : idx.m_postings[tid]) {
            p.slot = static_cast<uint32_t>(get_u64(in));
            p.tf = static_cast<uint32_t>(get_u64(in));
            idx.m_cf[tid] += p.tf;
        }
    }
    if (!in) raise(errc::parse, "truncated index snapshot: " + path);
    idx.rebuild_lookups();
    return idx;
}

double mean_query_length(const std::vector<query>& queries) {
    if (queries.empty()) return 0.0;
    uint64_t total = 0;
    for (const auto& q : queries) total += q.tokens.size();
    return static_cast<double>(total) / static_cast<double>(queries.size());
}

} // namespace lexalign
