#include "core/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/error.hpp"

namespace lexalign {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void ensure_parent_dir(const std::string& path) {
    std::filesystem::path p(path);
    auto parent = p.parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
        if (ec) raise(errc::io, "cannot create directory " + parent.string() + ": " + ec.message());
    }
}

void atomic_write_text(const std::string& path, const std::string& content) {
    ensure_parent_dir(path);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(errc::io, "cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) raise(errc::io, "write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) raise(errc::io, "cannot rename " + tmp + " to " + path + ": " + ec.message());
}

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

table_writer::table_writer(char delim, std::string config_hash,
                           std::vector<std::string> header)
    : m_delim(delim) {
    m_body = "# config=" + config_hash + "\n";
    row(header);
}

void table_writer::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) m_body.push_back(m_delim);
        m_body += cells[i];
    }
    m_body.push_back('\n');
}

void table_writer::save(const std::string& path) const { atomic_write_text(path, m_body); }

} // namespace lexalign
