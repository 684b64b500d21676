#pragma once

#include <stdexcept>
#include <string>

namespace mclt {

// Failure modes of the individual modules. Carried by every mclt::Error so
// that callers (and the CLI exit-code mapping) can tell which check tripped
// without string matching.
enum class errc {
  // chain construction
  non_stochastic,
  duplicate_state,
  reducible,
  periodic_matrix,
  bad_distribution,
  label_out_of_range,
  // spectral
  eigen_failure,
  tracking_lost,
  inconclusive_near_threshold,
  degenerate,
  not_centered,
  // exact laws
  under_resolved,
  too_large,
  // step functions
  domain_mismatch,
  // reports
  not_strongly_aperiodic,
  // cli
  config_invalid,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw Error(code, std::string(errc_name(code)) + ": " + what);
}

}  // namespace mclt
