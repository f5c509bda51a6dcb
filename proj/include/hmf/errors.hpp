#pragma once

#include <stdexcept>
#include <string>

namespace hmf {

// Machine-readable error codes; the CLI maps these to {"error":{"code":...}}
// on stderr.  Codes tagged config_* exit with status 2, everything else 1.
enum class errc {
  empty_config,
  mixed_rational_primes,
  non_positive_degree,
  unknown_embedding,
  unknown_prime,
  internal_mismatch,
  not_quado_bt,
  inconsistent_flags,
  out_of_range_w,
  out_of_range_b,
  not_ramified_quadratic,
  weight_too_small,
  truncation_too_small,
  field_mismatch,
  not_squarefree,
  prime_unramified,
  negative_valuation,
  untracked_prime,
  missing_s_action,
  weight_inequality_violated,
  zero_constant,
  undeclared_character,
  unreachable_index,
  inconsistent_eigenvalues,
  config_invalid,
  unknown_subcommand,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) {
  throw error(c, msg);
}

inline void check(bool ok, errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

}  // namespace hmf
