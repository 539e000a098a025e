#pragma once

#include <stdexcept>
#include <string>

namespace rrdlab {

enum class Errc {
  field_mismatch,
  q_mismatch,
  invalid_argument,
  determinant_violation,
  out_of_registry,
  depth_too_small,
  degree_too_small,
  window_overflow,
  empty_sphere,
  table_too_small,
  malformed_polynomial,
  memory_budget,
  parse_error,
  stale_cache,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::field_mismatch: return "field-descriptor mismatch";
    case Errc::q_mismatch: return "q mismatch";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::determinant_violation: return "determinant violation";
    case Errc::out_of_registry: return "out of registry";
    case Errc::depth_too_small: return "depth too small";
    case Errc::degree_too_small: return "degree too small";
    case Errc::window_overflow: return "window overflow";
    case Errc::empty_sphere: return "empty sphere";
    case Errc::table_too_small: return "table too small";
    case Errc::malformed_polynomial: return "malformed polynomial";
    case Errc::memory_budget: return "memory budget exceeded";
    case Errc::parse_error: return "parse error";
    case Errc::stale_cache: return "stale cache";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rrdlab
