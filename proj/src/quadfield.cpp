#include "hmf/quadfield.hpp"

#include <sstream>

namespace hmf {

static bool is_prime_long(long n) {
  if (n < 2) return false;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

static bool is_squarefree(long n) {
  for (long q = 2; q * q <= n; ++q)
    if (n % (q * q) == 0) return false;
  return true;
}

static long vp_of_mpz(const mpz_class& n, long p) {
  check(n != 0, errc::negative_valuation, "valuation of zero");
  mpz_class m = n;
  long v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

QuadField::QuadField(long D, long p) : D_(D), p_(p) {
  check(D > 1 && is_squarefree(D), errc::not_squarefree,
        "D must be squarefree and > 1");
  check(is_prime_long(p), errc::prime_unramified, "p must be prime");
  half_basis_ = (D % 4 == 1);
  disc_ = half_basis_ ? mpz_class(D) : mpz_class(4) * D;
  check(disc_ % p == 0, errc::prime_unramified,
        "p does not divide the discriminant, so it is unramified");
  // Image of omega under the residue map: the double root of its minimal
  // polynomial mod p.
  if (half_basis_) {
    // t^2 - t + (1-D)/4, double root (p+1)/2 for odd p
    check(p != 2, errc::prime_unramified, "p = 2 is unramified when D = 1 mod 4");
    omega_residue_ = (p + 1) / 2;
  } else if (p == 2) {
    omega_residue_ = (D % 2 == 0) ? 0 : 1;
  } else {
    omega_residue_ = 0;  // p odd divides D, sqrt(D) reduces to 0
  }
}

QuadElem QuadField::add(const QuadElem& a, const QuadElem& b) const {
  return {a.x + b.x, a.y + b.y};
}

QuadElem QuadField::sub(const QuadElem& a, const QuadElem& b) const {
  return {a.x - b.x, a.y - b.y};
}

QuadElem QuadField::neg(const QuadElem& a) const { return {-a.x, -a.y}; }

QuadElem QuadField::mul(const QuadElem& a, const QuadElem& b) const {
  if (half_basis_) {
    // omega^2 = omega + (D-1)/4
    mpq_class c = mpq_class(D_ - 1) / 4;
    return {a.x * b.x + a.y * b.y * c, a.x * b.y + a.y * b.x + a.y * b.y};
  }
  return {a.x * b.x + a.y * b.y * D_, a.x * b.y + a.y * b.x};
}

QuadElem QuadField::conjugate(const QuadElem& a) const {
  if (half_basis_) return {a.x + a.y, -a.y};  // conj(omega) = 1 - omega
  return {a.x, -a.y};
}

mpq_class QuadField::norm(const QuadElem& a) const {
  QuadElem prod = mul(a, conjugate(a));
  check(prod.y == 0, errc::internal_mismatch, "norm must be rational");
  return prod.x;
}

mpq_class QuadField::trace(const QuadElem& a) const {
  return half_basis_ ? mpq_class(2 * a.x + a.y) : mpq_class(2 * a.x);
}

QuadElem QuadField::inv(const QuadElem& a) const {
  check(!is_zero(a), errc::negative_valuation, "inverse of zero");
  mpq_class n = norm(a);
  QuadElem c = conjugate(a);
  return {c.x / n, c.y / n};
}

QuadElem QuadField::div(const QuadElem& a, const QuadElem& b) const {
  return mul(a, inv(b));
}

QuadElem QuadField::pow(const QuadElem& a, long n) const {
  if (n < 0) return pow(inv(a), -n);
  QuadElem acc = one(), base = a;
  while (n > 0) {
    if (n & 1) acc = mul(acc, base);
    base = mul(base, base);
    n >>= 1;
  }
  return acc;
}

bool QuadField::is_integral(const QuadElem& a) const {
  return a.x.get_den() == 1 && a.y.get_den() == 1;
}

bool QuadField::is_totally_positive(const QuadElem& a) const {
  if (is_zero(a)) return false;
  return trace(a) > 0 && norm(a) > 0;
}

long QuadField::valuation(const QuadElem& a) const {
  check(!is_zero(a), errc::negative_valuation, "valuation of zero");
  // The prime over p is stable under conjugation, so v(a) = v_p(Nm(a))
  // (residue degree one).
  mpq_class n = norm(a);
  return vp_of_mpz(n.get_num(), p_) - vp_of_mpz(n.get_den(), p_);
}

FqField::Elt QuadField::residue(const QuadElem& a, const FqField& F) const {
  check(F.p() == p_, errc::field_mismatch,
        "coefficient field has the wrong characteristic");
  // p-integral coordinates are exactly the elements with v >= 0
  check(a.x.get_den() % p_ != 0 && a.y.get_den() % p_ != 0,
        errc::negative_valuation, "element is not integral at the prime");
  auto red = [&](const mpq_class& q) {
    mpz_class num = q.get_num() % p_, den = q.get_den() % p_;
    long n = num.get_si(), d = den.get_si();
    if (n < 0) n += p_;
    FqField::Elt vn = F.from_int(n), vd = F.from_int(d);
    return F.mul(vn, F.inv(vd));
  };
  return F.add(red(a.x), F.mul(red(a.y), F.from_int(omega_residue_)));
}

FqField::Elt QuadField::value_power_product(const QuadElem& a, long n1,
                                            long n2, const FqField& F) const {
  check(!is_zero(a), errc::negative_valuation,
        "power product of the zero element");
  QuadElem prod = mul(pow(a, n1), pow(conjugate(a), n2));
  long v = valuation(prod);
  check(v >= 0, errc::negative_valuation,
        "power product is not integral at the prime");
  if (v > 0) return F.zero();
  return residue(prod, F);
}

std::string QuadField::to_string(const QuadElem& a) const {
  std::ostringstream os;
  os << a.x.get_str() << (half_basis_ ? " + (" : " + (") << a.y.get_str()
     << ")*" << (half_basis_ ? "(1+sqrt(D))/2" : "sqrt(D)");
  return os.str();
}

}  // namespace hmf
