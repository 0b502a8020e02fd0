#pragma once

#include <stdexcept>
#include <string>

namespace npkit {

// Error categories used across the library. Input errors (bad syntax, bad
// notation, scheme misuse) map to CLI exit code 2; domain errors (infeasible
// instances, invalid statistics inputs) map to exit code 1.
enum class errc {
  malformed_code,
  scheme_mismatch,
  syntax,
  duplicate_name,
  infeasible,
  uncoverable_step,
  invalid_count,
  empty_window,
  out_of_range,
  non_monotone_time,
  degenerate_sample,
  usage,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  errc code() const { return code_; }

  // True for errors caused by malformed input text or bad invocation.
  bool is_input_error() const {
    switch (code_) {
      case errc::malformed_code:
      case errc::scheme_mismatch:
      case errc::syntax:
      case errc::duplicate_name:
      case errc::usage:
        return true;
      default:
        return false;
    }
  }

 private:
  errc code_;
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_code: return "MalformedCode";
    case errc::scheme_mismatch: return "SchemeMismatch";
    case errc::syntax: return "SyntaxError";
    case errc::duplicate_name: return "DuplicateName";
    case errc::infeasible: return "Infeasible";
    case errc::uncoverable_step: return "UncoverableStep";
    case errc::invalid_count: return "InvalidCount";
    case errc::empty_window: return "EmptyWindow";
    case errc::out_of_range: return "OutOfRange";
    case errc::non_monotone_time: return "NonMonotoneTime";
    case errc::degenerate_sample: return "DegenerateSample";
    case errc::usage: return "UsageError";
  }
  return "Error";
}

}  // namespace npkit
