#include "hmf/fq.hpp"

namespace hmf {

static long mod_p(long a, long p) {
  long r = a % p;
  return r < 0 ? r + p : r;
}

// Polynomial arithmetic over F_p on small coefficient vectors.
static std::vector<long> poly_mulmod(const std::vector<long>& a,
                                     const std::vector<long>& b,
                                     const std::vector<long>& m, long p) {
  std::vector<long> prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = mod_p(prod[i + j] + a[i] * b[j], p);
  int k = static_cast<int>(m.size()) - 1;
  for (int d = static_cast<int>(prod.size()) - 1; d >= k; --d) {
    long c = prod[d];
    if (c == 0) continue;
    for (int t = 0; t <= k; ++t)
      prod[d - k + t] = mod_p(prod[d - k + t] - c * m[t], p);
  }
  prod.resize(k, 0);
  return prod;
}

static bool poly_is_irreducible(const std::vector<long>& m, long p) {
  // Brute force: no roots and, for degree <= 3 that suffices; for degree 4
  // also exclude quadratic factors.
  int k = static_cast<int>(m.size()) - 1;
  auto eval = [&](long x) {
    long acc = 0, pw = 1;
    for (int i = 0; i <= k; ++i) {
      acc = mod_p(acc + m[i] * pw, p);
      pw = mod_p(pw * x, p);
    }
    return acc;
  };
  for (long x = 0; x < p; ++x)
    if (eval(x) == 0) return false;
  if (k <= 3) return true;
  // degree 4: trial division by monic irreducible quadratics
  for (long b = 0; b < p; ++b)
    for (long c = 0; c < p; ++c) {
      // q(x) = x^2 + bx + c irreducible iff no roots
      bool has_root = false;
      for (long x = 0; x < p && !has_root; ++x)
        has_root = mod_p(x * x + b * x + c, p) == 0;
      if (has_root) continue;
      // divide m by q and check remainder
      std::vector<long> rem(m);
      for (int d = k; d >= 2; --d) {
        long lead = rem[d];
        if (lead == 0) continue;
        rem[d] = 0;
        rem[d - 1] = mod_p(rem[d - 1] - lead * b, p);
        rem[d - 2] = mod_p(rem[d - 2] - lead * c, p);
      }
      if (rem[0] == 0 && rem[1] == 0) return false;
    }
  return true;
}

FqField::FqField(long p, int k) : p_(p), k_(k) {
  check(p >= 2 && k >= 1 && k <= 4, errc::config_invalid,
        "coefficient field must be F_{p^k} with 1 <= k <= 4");
  q_ = 1;
  for (int i = 0; i < k; ++i) {
    check(q_ <= (1L << 24) / p, errc::config_invalid,
          "coefficient field too large");
    q_ *= p;
  }
  modulus_.assign(k + 1, 0);
  modulus_[k] = 1;
  if (k == 1) return;
  // Smallest monic irreducible of degree k, scanning constant-first.
  for (long code = 0; code < q_; ++code) {
    long c = code;
    for (int i = 0; i < k; ++i) {
      modulus_[i] = c % p;
      c /= p;
    }
    if (poly_is_irreducible(modulus_, p)) return;
  }
  fail(errc::internal_mismatch, "no irreducible modulus found");
}

std::vector<long> FqField::digits(Elt a) const {
  std::vector<long> d(k_, 0);
  long v = a;
  for (int i = 0; i < k_; ++i) {
    d[i] = v % p_;
    v /= p_;
  }
  return d;
}

FqField::Elt FqField::undigits(const std::vector<long>& d) const {
  long v = 0, pw = 1;
  for (int i = 0; i < k_; ++i) {
    v += mod_p(d[i], p_) * pw;
    pw *= p_;
  }
  return static_cast<Elt>(v);
}

FqField::Elt FqField::from_int(long n) const {
  return static_cast<Elt>(mod_p(n, p_));
}

FqField::Elt FqField::add(Elt a, Elt b) const {
  auto da = digits(a), db = digits(b);
  for (int i = 0; i < k_; ++i) da[i] = mod_p(da[i] + db[i], p_);
  return undigits(da);
}

FqField::Elt FqField::sub(Elt a, Elt b) const { return add(a, neg(b)); }

FqField::Elt FqField::neg(Elt a) const {
  auto d = digits(a);
  for (auto& c : d) c = mod_p(-c, p_);
  return undigits(d);
}

FqField::Elt FqField::mul(Elt a, Elt b) const {
  if (a == 0 || b == 0) return 0;
  auto prod = poly_mulmod(digits(a), digits(b), modulus_, p_);
  return undigits(prod);
}

FqField::Elt FqField::pow(Elt a, long n) const {
  if (n < 0) return pow(inv(a), -n);
  Elt acc = one(), base = a;
  while (n > 0) {
    if (n & 1) acc = mul(acc, base);
    base = mul(base, base);
    n >>= 1;
  }
  return acc;
}

FqField::Elt FqField::inv(Elt a) const {
  check(a != 0, errc::config_invalid, "division by zero in F_q");
  return pow(a, q_ - 2);
}

std::vector<FqField::Elt> FqField::all() const {
  std::vector<Elt> v(q_);
  for (long i = 0; i < q_; ++i) v[i] = static_cast<Elt>(i);
  return v;
}

std::vector<FqField::Elt> FqField::units() const {
  std::vector<Elt> v(q_ - 1);
  for (long i = 1; i < q_; ++i) v[i - 1] = static_cast<Elt>(i);
  return v;
}

}  // namespace hmf
