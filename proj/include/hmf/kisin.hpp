#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "hmf/fq.hpp"

namespace hmf {

// Truncated power series over F_q: coefficients of u^0 .. u^{N-1}; products
// drop terms of degree >= N.
class TruncatedSeries {
 public:
  TruncatedSeries(const FqField& field, long N);

  const FqField& field() const { return *field_; }
  long trunc() const { return static_cast<long>(coeff_.size()); }
  FqField::Elt coeff(long deg) const;
  void set_coeff(long deg, FqField::Elt c);

  TruncatedSeries add(const TruncatedSeries& other) const;
  TruncatedSeries sub(const TruncatedSeries& other) const;
  TruncatedSeries mul(const TruncatedSeries& other) const;
  TruncatedSeries scale(FqField::Elt c) const;
  TruncatedSeries shift(long k) const;      // multiply by u^k
  TruncatedSeries frobenius(long p) const;  // u -> u^p
  TruncatedSeries resized(long N) const;
  bool is_zero() const;
  bool operator==(const TruncatedSeries& other) const;

  static TruncatedSeries monomial(const FqField& field, long N, long deg,
                                  FqField::Elt c);

 private:
  const FqField* field_;
  std::vector<FqField::Elt> coeff_;
};

struct RankOneShape {
  long exponent = 0;
  FqField::Elt unit = 1;
};

// phi(e) = b u^t e on the sub piece, phi(f) = a u^s f + y e on the lift of the
// quotient generator.
struct RankTwoExtensionShape {
  RankOneShape sub;   // (t, b)
  RankOneShape quot;  // (s, a)
  TruncatedSeries y;
  long r = 0;  // top labelled weight, for support bookkeeping
  std::optional<long> exceptional_degree;
};

RankTwoExtensionShape make_shape(const FqField& field, long s, long t,
                                 FqField::Elt a, FqField::Elt b, long N);

// {s, t} = {r + x, eps - x} for x in [0, eps], both assignments; r = 0 forces
// s = 0.
std::vector<std::tuple<long, long, long>> allowed_st(long r, long eps, long p);

// Allowed degrees of the normal-form cocycle: {0..t} union {r..s-1} when
// t < r, else {0..s-1}; the optional exceptional degree is appended.
std::vector<long> y_support(long s, long t, long r,
                            std::optional<long> exceptional = std::nullopt);

// A nonzero map between the rank-one pieces exists iff the units agree and
// the exponent gap is a nonnegative multiple of p-1.
bool rank_one_hom_exists(long s, long t, FqField::Elt a, FqField::Elt b,
                         long p);
long default_exceptional_degree(long s, long t, long p);

// Dimension over F_q of the space of extension classes realizable by
// normal-form cocycles, via exact linear algebra on the truncated cocycle
// space (two cocycles present the same class iff they differ by
// b u^t lam(u^p) - a u^s lam(u)).  Recomputed at N and 2N; the two dimensions
// must agree.
int ext_dimension(const FqField& field, long s, long t, FqField::Elt a,
                  FqField::Elt b, long N = 0);

// One representative cocycle per class; count is q^ext_dimension.
std::vector<TruncatedSeries> enumerate_extension_classes(const FqField& field,
                                                         long s, long t,
                                                         FqField::Elt a,
                                                         FqField::Elt b);

// 2x2 matrix over truncated series; column j holds the coordinates of the
// image of the j-th source basis vector in the target basis.
struct KisinMorphism {
  TruncatedSeries m00, m01, m10, m11;
};

// Verifies H * Phi_src = Phi_tgt * H^phi over F_q[u]/(u^N), where
// Phi = [[b u^t, y], [0, a u^s]] and phi acts on series entries via u -> u^p.
bool check_phi_morphism(const KisinMorphism& map,
                        const RankTwoExtensionShape& src,
                        const RankTwoExtensionShape& dst, long N);

// Tensor with the rank-one module of exponent 1 and unit 1: s, t gain 1 and
// y picks up a factor of u.
RankTwoExtensionShape twist_shift(const RankTwoExtensionShape& shape);

// Regularity threshold nu(alpha) >= p/(p-1) + p/e from the classification's
// auxiliary-ring condition.  Recorded for reference only; nothing in this
// module computes with that ring.
inline double typicality_valuation_bound(long p, long e) {
  return static_cast<double>(p) / (p - 1) + static_cast<double>(p) / e;
}

// The two explicit morphism families verified by the acceptance suite.
struct MorphismCase {
  RankTwoExtensionShape src;
  RankTwoExtensionShape dst;
  KisinMorphism map;
};
MorphismCase morphism_family_wp(const FqField& field, FqField::Elt a,
                                FqField::Elt b, FqField::Elt c,
                                std::optional<FqField::Elt> d, long N);
MorphismCase morphism_family_wp1(const FqField& field, FqField::Elt a,
                                 FqField::Elt b, FqField::Elt c,
                                 std::optional<FqField::Elt> d, long N);

}  // namespace hmf
