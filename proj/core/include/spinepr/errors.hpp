#pragma once

#include <stdexcept>
#include <string>

namespace spinepr {

// Error taxonomy shared by all modules.  Numerical results that merely leave a
// formula's validity regime attach warnings instead of throwing; throwing is
// reserved for conditions where no meaningful value exists.
enum class errc {
  invalid_parameter,         // precondition on user-supplied values violated
  unsupported_configuration, // e.g. thermal seed requested from the sector solver
  resource_limit,            // cutoff/dimension beyond configured ceiling
  numerical_failure,         // eigensolver or integrator breakdown
  degenerate_denominator,    // depleted LO / zero conditioning variance
  criterion_undefined,       // EPR denominator outside its regime of validity
  formula_breakdown,         // closed form evaluated outside its domain
  root_not_found,            // bracketing failure in a root search
  invalid_data,              // malformed input to a fit or file parser
};

inline const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::invalid_parameter: return "invalid parameter";
    case errc::unsupported_configuration: return "unsupported configuration";
    case errc::resource_limit: return "resource limit";
    case errc::numerical_failure: return "numerical failure";
    case errc::degenerate_denominator: return "degenerate denominator";
    case errc::criterion_undefined: return "criterion undefined";
    case errc::formula_breakdown: return "formula breakdown";
    case errc::root_not_found: return "root not found";
    case errc::invalid_data: return "invalid data";
  }
  return "unknown error";
}

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}
