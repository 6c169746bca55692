#pragma once

#include <stdexcept>
#include <string>

namespace ghc {

enum class errc {
  invalid_interval,
  arithmetic_overflow,
  zero_in_divisor,
  parse,
  arity,
  validation,
  domain,
  evaluation,
  boundary_starvation,
  nonexistence,
  invalid_argument,
};

inline const char* to_string(errc code) {
  switch (code) {
    case errc::invalid_interval: return "invalid-interval";
    case errc::arithmetic_overflow: return "arithmetic-overflow";
    case errc::zero_in_divisor: return "zero-in-divisor";
    case errc::parse: return "parse";
    case errc::arity: return "arity";
    case errc::validation: return "validation";
    case errc::domain: return "domain";
    case errc::evaluation: return "evaluation";
    case errc::boundary_starvation: return "boundary-starvation";
    case errc::nonexistence: return "nonexistence";
    case errc::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace ghc
