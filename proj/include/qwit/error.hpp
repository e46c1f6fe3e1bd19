#pragma once

#include <stdexcept>
#include <string>

namespace qwit {

enum class Errc {
  invalid_dimension,
  invalid_argument,
  contract_violation,
  not_psd,
  not_converged,
  truncation,
  leakage,
  trace_drift,
  step_too_large,
  non_uniform_grid,
  unsupported,
  parse,
  io,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::contract_violation: return "contract-violation";
    case Errc::not_psd: return "not-psd";
    case Errc::not_converged: return "not-converged";
    case Errc::truncation: return "truncation";
    case Errc::leakage: return "leakage";
    case Errc::trace_drift: return "trace-drift";
    case Errc::step_too_large: return "step-too-large";
    case Errc::non_uniform_grid: return "non-uniform-grid";
    case Errc::unsupported: return "unsupported";
    case Errc::parse: return "parse";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace qwit
