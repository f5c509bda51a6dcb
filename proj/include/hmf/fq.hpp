#pragma once

#include <cstdint>
#include <vector>

#include "hmf/errors.hpp"

namespace hmf {

// Small finite field F_{p^k} with elements encoded as base-p digit strings of
// the polynomial representation: elt = sum c_i x^i maps to sum c_i p^i.
class FqField {
 public:
  using Elt = uint32_t;

  FqField(long p, int k);

  long p() const { return p_; }
  int degree() const { return k_; }
  long q() const { return q_; }

  Elt zero() const { return 0; }
  Elt one() const { return 1; }
  bool is_zero(Elt a) const { return a == 0; }

  Elt from_int(long n) const;
  Elt add(Elt a, Elt b) const;
  Elt sub(Elt a, Elt b) const;
  Elt neg(Elt a) const;
  Elt mul(Elt a, Elt b) const;
  Elt inv(Elt a) const;
  Elt pow(Elt a, long n) const;

  std::vector<Elt> all() const;       // all q elements
  std::vector<Elt> units() const;     // the q-1 nonzero elements

 private:
  std::vector<long> digits(Elt a) const;
  Elt undigits(const std::vector<long>& d) const;

  long p_;
  int k_;
  long q_;
  std::vector<long> modulus_;  // monic irreducible, coefficients of x^0..x^k
};

}  // namespace hmf
