#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "hmf/errors.hpp"
#include "hmf/fq.hpp"

namespace hmf {

class QuadField;

// Element x + y * omega of a real quadratic field, exact rational coordinates
// in the integral basis (1, omega).
struct QuadElem {
  mpq_class x;
  mpq_class y;
  friend bool operator==(const QuadElem&, const QuadElem&) = default;
};

// Real quadratic field Q(sqrt(D)) with p ramified; integral basis (1, omega)
// with omega = sqrt(D) or (1 + sqrt(D))/2, and the residue map at the prime
// over p.
class QuadField {
 public:
  QuadField(long D, long p);

  long D() const { return D_; }
  long p() const { return p_; }
  mpz_class disc() const { return disc_; }
  bool omega_is_half() const { return half_basis_; }

  QuadElem from_pair(const mpq_class& x, const mpq_class& y) const {
    return {x, y};
  }
  QuadElem from_long(long n) const { return {mpq_class(n), mpq_class(0)}; }
  QuadElem zero() const { return from_long(0); }
  QuadElem one() const { return from_long(1); }

  QuadElem add(const QuadElem& a, const QuadElem& b) const;
  QuadElem sub(const QuadElem& a, const QuadElem& b) const;
  QuadElem neg(const QuadElem& a) const;
  QuadElem mul(const QuadElem& a, const QuadElem& b) const;
  QuadElem inv(const QuadElem& a) const;
  QuadElem div(const QuadElem& a, const QuadElem& b) const;
  QuadElem pow(const QuadElem& a, long n) const;
  QuadElem conjugate(const QuadElem& a) const;  // the second embedding

  bool is_zero(const QuadElem& a) const { return a.x == 0 && a.y == 0; }
  mpq_class norm(const QuadElem& a) const;   // product of embeddings
  mpq_class trace(const QuadElem& a) const;
  bool is_integral(const QuadElem& a) const;
  bool is_totally_positive(const QuadElem& a) const;  // both embeddings > 0

  // Valuation at the ramified prime over p (v(p) = 2); element must be
  // nonzero.
  long valuation(const QuadElem& a) const;

  // Residue at the prime over p, for p-integral elements.
  FqField::Elt residue(const QuadElem& a, const FqField& F) const;

  // sigma1(a)^{n1} sigma2(a)^{n2} reduced at the prime: 0 when the valuation
  // is positive, the residue when it is zero, negative_valuation otherwise.
  FqField::Elt value_power_product(const QuadElem& a, long n1, long n2,
                                   const FqField& F) const;

  std::string to_string(const QuadElem& a) const;

 private:
  long D_;
  long p_;
  mpz_class disc_;
  bool half_basis_;
  long omega_residue_;  // image of omega in F_p
};

}  // namespace hmf
