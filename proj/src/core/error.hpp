#pragma once

#include <stdexcept>
#include <string>

namespace lexalign {

enum class errc {
    io = 1,
    parse = 2,
    invalid_argument = 3,
    duplicate_id = 4,
    state = 5,
    domain = 6,
    unknown = 99,
};

/// Error type carried across module boundaries; the C API maps `code`
/// onto its status enum.
class error : public std::runtime_error {
  public:
    error(errc code, std::string message) : std::runtime_error(std::move(message)), m_code(code) {}
    errc code() const noexcept { return m_code; }

  private:
    errc m_code;
};

[[noreturn]] inline void raise(errc code, const std::string& message) { throw error(code, message); }

} // namespace lexalign
