#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lexalign {

/// Fixed 6-decimal rendering used for every floating-point value in report
/// files, so reruns diff clean.
std::string fmt6(double v);

/// Writes via a temp file in the same directory plus rename, so a failing
/// stage never clobbers a previous output.
void atomic_write_text(const std::string& path, const std::string& content);

/// FNV-1a 64-bit over the canonical config serialization.
uint64_t fnv1a64(const std::string& data);
std::string hash_hex(uint64_t h);

/// Accumulates a delimited report with the `# config=<hash>` echo line on
/// top.
class table_writer {
  public:
    table_writer(char delim, std::string config_hash, std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    void save(const std::string& path) const;

  private:
    char m_delim;
    std::string m_body;
};

void ensure_parent_dir(const std::string& path);

} // namespace lexalign
