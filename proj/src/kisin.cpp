#include "hmf/kisin.hpp"

#include <algorithm>
#include <array>

namespace hmf {

TruncatedSeries::TruncatedSeries(const FqField& field, long N)
    : field_(&field), coeff_(static_cast<size_t>(N), 0) {
  check(N >= 1, errc::truncation_too_small, "truncation order must be >= 1");
}

FqField::Elt TruncatedSeries::coeff(long deg) const {
  if (deg < 0 || deg >= trunc()) return 0;
  return coeff_[deg];
}

void TruncatedSeries::set_coeff(long deg, FqField::Elt c) {
  check(deg >= 0 && deg < trunc(), errc::truncation_too_small,
        "coefficient degree outside the truncation window");
  coeff_[deg] = c;
}

TruncatedSeries TruncatedSeries::add(const TruncatedSeries& other) const {
  check(field_->q() == other.field_->q(), errc::field_mismatch,
        "series over different coefficient fields");
  TruncatedSeries out(*field_, std::min(trunc(), other.trunc()));
  for (long d = 0; d < out.trunc(); ++d)
    out.coeff_[d] = field_->add(coeff(d), other.coeff(d));
  return out;
}

TruncatedSeries TruncatedSeries::sub(const TruncatedSeries& other) const {
  return add(other.scale(field_->neg(field_->one())));
}

TruncatedSeries TruncatedSeries::mul(const TruncatedSeries& other) const {
  check(field_->q() == other.field_->q(), errc::field_mismatch,
        "series over different coefficient fields");
  TruncatedSeries out(*field_, std::min(trunc(), other.trunc()));
  for (long i = 0; i < out.trunc(); ++i) {
    if (coeff(i) == 0) continue;
    for (long j = 0; i + j < out.trunc(); ++j) {
      if (other.coeff(j) == 0) continue;
      out.coeff_[i + j] = field_->add(
          out.coeff_[i + j], field_->mul(coeff(i), other.coeff(j)));
    }
  }
  return out;
}

TruncatedSeries TruncatedSeries::scale(FqField::Elt c) const {
  TruncatedSeries out(*field_, trunc());
  for (long d = 0; d < trunc(); ++d) out.coeff_[d] = field_->mul(coeff_[d], c);
  return out;
}

TruncatedSeries TruncatedSeries::shift(long k) const {
  TruncatedSeries out(*field_, trunc());
  for (long d = 0; d + k < trunc(); ++d)
    if (d + k >= 0) out.coeff_[d + k] = coeff(d);
  return out;
}

TruncatedSeries TruncatedSeries::frobenius(long p) const {
  TruncatedSeries out(*field_, trunc());
  for (long d = 0; d < trunc(); ++d) {
    if (coeff_[d] == 0) continue;
    if (d * p < trunc()) out.coeff_[d * p] = coeff_[d];
  }
  return out;
}

TruncatedSeries TruncatedSeries::resized(long N) const {
  TruncatedSeries out(*field_, N);
  for (long d = 0; d < std::min(N, trunc()); ++d) out.coeff_[d] = coeff_[d];
  return out;
}

bool TruncatedSeries::is_zero() const {
  for (auto c : coeff_)
    if (c != 0) return false;
  return true;
}

bool TruncatedSeries::operator==(const TruncatedSeries& other) const {
  long n = std::min(trunc(), other.trunc());
  for (long d = 0; d < n; ++d)
    if (coeff(d) != other.coeff(d)) return false;
  return true;
}

TruncatedSeries TruncatedSeries::monomial(const FqField& field, long N,
                                          long deg, FqField::Elt c) {
  TruncatedSeries out(field, N);
  if (deg < N) out.set_coeff(deg, c);
  return out;
}

RankTwoExtensionShape make_shape(const FqField& field, long s, long t,
                                 FqField::Elt a, FqField::Elt b, long N) {
  check(s >= 0 && t >= 0, errc::config_invalid, "exponents must be >= 0");
  check(a != 0 && b != 0, errc::config_invalid, "units must be nonzero");
  return RankTwoExtensionShape{{t, b}, {s, a}, TruncatedSeries(field, N), s,
                               std::nullopt};
}

std::vector<std::tuple<long, long, long>> allowed_st(long r, long eps,
                                                     long p) {
  check(r >= 0 && r <= p && eps >= 0, errc::not_quado_bt,
        "need 0 <= r <= p and eps >= 0");
  std::vector<std::tuple<long, long, long>> out;
  auto push = [&](long s, long t, long x) {
    if (r == 0 && s != 0) return;
    for (const auto& [s0, t0, x0] : out)
      if (s0 == s && t0 == t) return;
    out.push_back({s, t, x});
  };
  for (long x = 0; x <= eps; ++x) {
    push(r + x, eps - x, x);
    push(eps - x, r + x, x);
  }
  return out;
}

std::vector<long> y_support(long s, long t, long r,
                            std::optional<long> exceptional) {
  check(s >= 0 && t >= 0 && r >= 0, errc::config_invalid,
        "exponents must be >= 0");
  std::vector<long> out;
  if (t < r) {
    for (long d = 0; d <= t; ++d) out.push_back(d);
    for (long d = r; d <= s - 1; ++d) out.push_back(d);
  } else {
    for (long d = 0; d <= s - 1; ++d) out.push_back(d);
  }
  if (exceptional) {
    if (std::find(out.begin(), out.end(), *exceptional) == out.end())
      out.push_back(*exceptional);
  }
  return out;
}

bool rank_one_hom_exists(long s, long t, FqField::Elt a, FqField::Elt b,
                         long p) {
  return a == b && s >= t && (s - t) % (p - 1) == 0;
}

long default_exceptional_degree(long s, long t, long p) {
  return s + (s - t) / (p - 1);
}

namespace {

// Row-echelon accumulator over F_q for vectors indexed by degree.
class EchelonBasis {
 public:
  EchelonBasis(const FqField& field, long dim) : field_(&field), dim_(dim) {}

  // Reduces v against the basis; returns true (and absorbs v) if v added a
  // new pivot.
  bool add(std::vector<FqField::Elt> v) {
    reduce(v);
    long piv = pivot(v);
    if (piv < 0) return false;
    FqField::Elt lead = v[piv];
    if (lead != field_->one()) {
      FqField::Elt inv = field_->inv(lead);
      for (auto& c : v) c = field_->mul(c, inv);
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  bool contains(std::vector<FqField::Elt> v) const {
    reduce(v);
    return pivot(v) < 0;
  }

  long rank() const { return static_cast<long>(rows_.size()); }

 private:
  long pivot(const std::vector<FqField::Elt>& v) const {
    for (long i = 0; i < dim_; ++i)
      if (v[i] != 0) return i;
    return -1;
  }

  void reduce(std::vector<FqField::Elt>& v) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      FqField::Elt c = v[pivots_[r]];
      if (c == 0) continue;
      for (long i = pivots_[r]; i < dim_; ++i)
        v[i] = field_->sub(v[i], field_->mul(c, rows_[r][i]));
    }
  }

  const FqField* field_;
  long dim_;
  std::vector<std::vector<FqField::Elt>> rows_;
  std::vector<long> pivots_;
};

std::vector<FqField::Elt> coboundary_row(const FqField& F, long s, long t,
                                         FqField::Elt a, FqField::Elt b,
                                         long p, long j, long N) {
  std::vector<FqField::Elt> v(N, 0);
  long hi = t + p * j, lo = s + j;
  if (hi < N) v[hi] = F.add(v[hi], b);
  if (lo < N) v[lo] = F.sub(v[lo], a);
  return v;
}

// Degrees of the realizable normal-form family (the exceptional one is
// included only in the fully degenerate case where sub and quotient are
// isomorphic).
std::vector<long> realizable_degrees(long s, long t, FqField::Elt a,
                                     FqField::Elt b, long p) {
  std::vector<long> degs;
  if (t < s) {
    degs.push_back(t);
  } else {
    for (long d = 0; d < s; ++d) degs.push_back(d);
  }
  if (s == t && s >= 1 && a == b)
    degs.push_back(default_exceptional_degree(s, t, p));
  return degs;
}

int ext_dimension_at(const FqField& F, long s, long t, FqField::Elt a,
                     FqField::Elt b, long N) {
  long p = F.p();
  EchelonBasis basis(F, N);
  for (long j = 0; j < N; ++j)
    basis.add(coboundary_row(F, s, t, a, b, p, j, N));
  int dim = 0;
  for (long d : realizable_degrees(s, t, a, b, p)) {
    check(d < N, errc::truncation_too_small,
          "truncation window does not contain the cocycle support");
    std::vector<FqField::Elt> v(N, 0);
    v[d] = F.one();
    if (basis.add(std::move(v))) ++dim;
  }
  return dim;
}

}  // namespace

int ext_dimension(const FqField& field, long s, long t, FqField::Elt a,
                  FqField::Elt b, long N) {
  check(s >= 0 && t >= 0, errc::config_invalid, "exponents must be >= 0");
  check(a != 0 && b != 0, errc::config_invalid, "units must be nonzero");
  long p = field.p();
  if (N == 0) N = p * (std::max(s, t) + 2) + 2;
  check(N > s + p * s && N > t, errc::truncation_too_small,
        "truncation must exceed the stabilization margin");
  int d1 = ext_dimension_at(field, s, t, a, b, N);
  int d2 = ext_dimension_at(field, s, t, a, b, 2 * N);
  check(d1 == d2, errc::truncation_too_small,
        "class-space dimension did not stabilize; increase the truncation");
  return d1;
}

std::vector<TruncatedSeries> enumerate_extension_classes(const FqField& field,
                                                         long s, long t,
                                                         FqField::Elt a,
                                                         FqField::Elt b) {
  long p = field.p();
  long N = p * (std::max(s, t) + 2) + 2;
  int dim = ext_dimension(field, s, t, a, b, N);

  // Select degrees whose cocycle classes are independent.
  EchelonBasis basis(field, N);
  for (long j = 0; j < N; ++j)
    basis.add(coboundary_row(field, s, t, a, b, p, j, N));
  std::vector<long> free_degs;
  for (long d : realizable_degrees(s, t, a, b, p)) {
    std::vector<FqField::Elt> v(N, 0);
    v[d] = field.one();
    if (basis.add(std::move(v))) free_degs.push_back(d);
  }
  check(static_cast<int>(free_degs.size()) == dim, errc::internal_mismatch,
        "independent support selection disagrees with the class dimension");

  std::vector<TruncatedSeries> reps;
  long count = 1;
  for (int i = 0; i < dim; ++i) count *= field.q();
  for (long code = 0; code < count; ++code) {
    TruncatedSeries y(field, N);
    long c = code;
    for (long d : free_degs) {
      y.set_coeff(d, static_cast<FqField::Elt>(c % field.q()));
      c /= field.q();
    }
    reps.push_back(std::move(y));
  }
  return reps;
}

static TruncatedSeries phi_entry(const RankOneShape& shape,
                                 const FqField& field, long N) {
  return TruncatedSeries::monomial(field, N, shape.exponent, shape.unit);
}

bool check_phi_morphism(const KisinMorphism& map,
                        const RankTwoExtensionShape& src,
                        const RankTwoExtensionShape& dst, long N) {
  const FqField& F = src.y.field();
  check(F.q() == dst.y.field().q() && F.q() == map.m00.field().q(),
        errc::field_mismatch, "shapes and map must share a coefficient field");
  long p = F.p();
  long maxexp = std::max({src.sub.exponent, src.quot.exponent,
                          dst.sub.exponent, dst.quot.exponent});
  check(N > p * maxexp + 2, errc::truncation_too_small,
        "truncation too small for a faithful product check");

  // Phi = [[b u^t, y], [0, a u^s]]
  auto phi_of = [&](const RankTwoExtensionShape& sh) {
    return std::array<TruncatedSeries, 4>{
        phi_entry(sh.sub, F, N), sh.y.resized(N),
        TruncatedSeries(F, N), phi_entry(sh.quot, F, N)};
  };
  auto src_phi = phi_of(src);
  auto dst_phi = phi_of(dst);
  std::array<TruncatedSeries, 4> H = {map.m00.resized(N), map.m01.resized(N),
                                      map.m10.resized(N), map.m11.resized(N)};
  std::array<TruncatedSeries, 4> Hphi = {
      H[0].frobenius(p), H[1].frobenius(p), H[2].frobenius(p),
      H[3].frobenius(p)};

  auto mul2 = [&](const std::array<TruncatedSeries, 4>& X,
                  const std::array<TruncatedSeries, 4>& Y) {
    // entries row-major: [0]=00 [1]=01 [2]=10 [3]=11
    return std::array<TruncatedSeries, 4>{
        X[0].mul(Y[0]).add(X[1].mul(Y[2])),
        X[0].mul(Y[1]).add(X[1].mul(Y[3])),
        X[2].mul(Y[0]).add(X[3].mul(Y[2])),
        X[2].mul(Y[1]).add(X[3].mul(Y[3]))};
  };
  auto lhs = mul2(H, src_phi);
  auto rhs = mul2(dst_phi, Hphi);
  for (int i = 0; i < 4; ++i)
    if (!(lhs[i] == rhs[i])) return false;
  return true;
}

RankTwoExtensionShape twist_shift(const RankTwoExtensionShape& shape) {
  RankTwoExtensionShape out = shape;
  out.sub.exponent += 1;
  out.quot.exponent += 1;
  out.y = shape.y.shift(1);
  out.r += 1;
  if (out.exceptional_degree) *out.exceptional_degree += 1;
  return out;
}

MorphismCase morphism_family_wp(const FqField& field, FqField::Elt a,
                                FqField::Elt b, FqField::Elt c,
                                std::optional<FqField::Elt> d, long N) {
  long p = field.p();
  MorphismCase out{make_shape(field, p, 1, a, b, N),
                   make_shape(field, 1, 1, a, b, N),
                   {TruncatedSeries(field, N), TruncatedSeries(field, N),
                    TruncatedSeries(field, N), TruncatedSeries(field, N)}};
  out.src.y.set_coeff(1, c);
  out.dst.y.set_coeff(0, field.mul(a, field.mul(field.inv(b), c)));
  if (d) {
    check(a == b, errc::config_invalid,
          "the extra term only occurs when the units agree");
    out.src.y.set_coeff(p + 1, *d);
    out.src.exceptional_degree = p + 1;
    out.dst.y.set_coeff(1, *d);
    out.dst.exceptional_degree = 1;
  }
  out.map.m00.set_coeff(0, field.one());
  out.map.m01.set_coeff(0, field.mul(field.inv(b), c));
  out.map.m11.set_coeff(1, field.one());
  return out;
}

MorphismCase morphism_family_wp1(const FqField& field, FqField::Elt a,
                                 FqField::Elt b, FqField::Elt c,
                                 std::optional<FqField::Elt> d, long N) {
  long p = field.p();
  MorphismCase out{make_shape(field, p, 0, a, b, N),
                   make_shape(field, 1, 0, a, b, N),
                   {TruncatedSeries(field, N), TruncatedSeries(field, N),
                    TruncatedSeries(field, N), TruncatedSeries(field, N)}};
  out.src.y.set_coeff(0, c);
  out.dst.y.set_coeff(0, field.mul(a, field.mul(field.inv(b), c)));
  if (d) {
    check(a == b && p == 2, errc::config_invalid,
          "the extra term only occurs for p = 2 with equal units");
    out.src.y.set_coeff(4, *d);
    out.src.exceptional_degree = 4;
    out.dst.y.set_coeff(2, *d);
    out.dst.exceptional_degree = 2;
  }
  out.map.m00.set_coeff(0, field.one());
  out.map.m01.set_coeff(0, field.mul(field.inv(b), c));
  out.map.m11.set_coeff(1, field.one());
  return out;
}

}  // namespace hmf
