#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hmf/qexp_json.hpp"
#include "hmf/selftest.hpp"

using namespace hmf;

namespace {

QuadElem el(const QuadField& F, long x, long y) {
  return F.from_pair(mpq_class(x), mpq_class(y));
}

Weight Wt(long a, long b) { return {mpz_class(a), mpz_class(b)}; }

}  // namespace

TEST_CASE("quadratic field arithmetic") {
  QuadField F(3, 3);
  CHECK(F.disc() == 12);
  CHECK(F.valuation(el(F, 0, 1)) == 1);   // sqrt(3)
  CHECK(F.valuation(el(F, 6, 1)) == 1);   // 6 + sqrt(3)
  CHECK(F.valuation(el(F, 3, 0)) == 2);   // p itself
  FqField C(3, 1);
  CHECK(F.residue(el(F, 2, 1), C) == 2);
  CHECK(F.is_totally_positive(el(F, 6, 1)));
  CHECK_FALSE(F.is_totally_positive(el(F, 1, 1)));  // 1 - sqrt(3) < 0

  QuadField F5(5, 5);
  CHECK(F5.disc() == 5);
  CHECK(F5.omega_is_half());
  // varpi = 2 + omega = (5 + sqrt 5)/2 has norm 5
  CHECK(F5.norm(el(F5, 2, 1)) == 5);
  CHECK(F5.valuation(el(F5, 2, 1)) == 1);
  CHECK(F5.is_totally_positive(el(F5, 2, 1)));

  // p = 2 divides disc(Q(sqrt 3)) = 12
  CHECK_NOTHROW(QuadField(3, 2));
  CHECK_THROWS_AS(QuadField(12, 3), error);  // not squarefree
  CHECK_THROWS_AS(QuadField(3, 5), error);   // unramified
}

TEST_CASE("power products at the ramified prime") {
  QuadField F(3, 3);
  FqField C(3, 1);
  QuadElem x = el(F, 6, 1);
  CHECK(F.value_power_product(x, 1, 1, C) == 0);      // norm 33, positive val
  CHECK(F.value_power_product(x, 0, 0, C) == 1);
  CHECK(F.value_power_product(x, 1, -1, C) == 2);     // (13+4r3)/11 -> 2
  CHECK_THROWS_AS(F.value_power_product(el(F, 0, 1), -1, 0, C), error);
}

TEST_CASE("theta operator on coefficients") {
  auto ctx = demo_context_d3();
  QExpansion f = blank_form(ctx, Wt(1, 2), Wt(-1, -1), 10);
  f.set({0, el(ctx->field, 2, 1)}, 1);   // residue 2, unit index
  f.set({0, el(ctx->field, 3, 1)}, 1);   // positive valuation
  QExpansion tf = op_Theta(f);
  CHECK(tf.read(0, el(ctx->field, 2, 1)).value() == 2);
  CHECK(tf.read(0, el(ctx->field, 3, 1)).value() == 0);
  CHECK(tf.k() == Wt(2, 3));
  CHECK(tf.m() == Wt(-1, -2));
}

TEST_CASE("partial Frobenius moves a single coefficient") {
  auto ctx = demo_context_d3();
  QExpansion f(ctx, Wt(1, 2), Wt(-1, -1));
  QuadElem mu = el(ctx->field, 2, 1);
  f.set({1, mu}, 2);  // one coefficient on component c1
  QExpansion vf = op_Vp(f);
  // x moves c0 -> c1 with multiplier 1, so the image sits on c0 at varpi*mu
  QuadElem target = ctx->field.mul(ctx->uniformizer, mu);
  REQUIRE(vf.coeffs().size() == 1);
  auto val = vf.read(0, target);
  REQUIRE(val.has_value());
  CHECK(*val == 2);
  // weight moved by the partial Frobenius: k' = (k2, p k1)
  CHECK(vf.k() == Wt(2, 3));
  // the image is supported at positive depth
  CHECK_FALSE(is_strongly_stabilized(vf));
  CHECK(op_Theta(vf).is_zero_on_window());
}

TEST_CASE("theta kills the Frobenius image over each shipped field") {
  std::mt19937_64 rng(23);
  for (auto ctx : {demo_context_d3(), demo_context_d5(), demo_context_d2()}) {
    for (int trial = 0; trial < 200; ++trial) {
      QExpansion f = random_form(ctx, Wt(2, 2), Wt(0, -1), 8, rng);
      CHECK(op_Theta(op_Vp(f)).is_zero_on_window());
      // the theta image is supported exactly on unit-depth indices
      CHECK(is_strongly_stabilized(op_Theta(f)));
    }
  }
}

TEST_CASE("Hecke operator matches a direct evaluation") {
  auto ctx = demo_context_d5();
  std::mt19937_64 rng(31);
  QExpansion f = random_form(ctx, Wt(2, 3), Wt(-1, 0), 30, rng);
  const auto& v = ctx->tracked_prime("v2");
  FqField::Elt d = 3;
  QExpansion tf = op_Tv(f, "v2", s_scalar(d));
  const auto& C = ctx->coeff;
  for (const auto& [key, val] : tf.coeffs()) {
    // direct two-term evaluation: Nm(v) alpha^m f(alpha mu) +
    // d alpha^{-m} f(alpha^{-1} mu)
    QuadElem alpha = v.motion.alpha[key.comp];
    FqField::Elt nm = C.from_int(4);
    FqField::Elt t1 =
        C.mul(nm, C.mul(ctx->power(alpha, f.m()),
                        f.read(key.comp, ctx->field.mul(alpha, key.mu))
                            .value()));
    QuadElem down = ctx->field.div(key.mu, alpha);
    FqField::Elt t2 = 0;
    auto r = f.read(key.comp, down);
    REQUIRE(r.has_value());
    t2 = C.mul(d, C.mul(ctx->power(ctx->field.inv(alpha), f.m()), *r));
    CHECK(val == C.add(t1, t2));
  }
  CHECK_FALSE(tf.coeffs().empty());
}

TEST_CASE("operator at the ramified prime") {
  auto ctx = demo_context_d5();
  std::mt19937_64 rng(37);
  // m = -1: the first term carries the unit epsilon = p / Nm(varpi) = 1
  QExpansion f = random_form(ctx, Wt(1, 2), Wt(-1, -1), 30, rng);
  QExpansion tf = op_Tp(f, s_scalar(2));
  const auto& C = ctx->coeff;
  // k + m = (0, 1): varpi^{(0,1)} = conj(varpi) has valuation 1, so the
  // second term vanishes identically and T_p reduces to the reindexing term
  for (const auto& [key, val] : tf.coeffs()) {
    auto up = f.read(key.comp, ctx->field.mul(ctx->uniformizer, key.mu));
    REQUIRE(up.has_value());
    CHECK(val == *up);
  }
  CHECK_FALSE(tf.coeffs().empty());

  QExpansion g = blank_form(ctx, Wt(0, 0), Wt(-2, -2), 6);
  CHECK_THROWS_AS(op_Tp(g, s_scalar(1)), error);
}

TEST_CASE("leading unit of the ramified-prime operator") {
  // D = 3: epsilon = p / Nm(varpi) = 3/33 = 1/11 = 2 in F_3
  auto ctx = demo_context_d3();
  const auto& F = ctx->field;
  QExpansion f(ctx, Wt(1, 2), Wt(-1, -1));
  QuadElem alpha = ctx->x_motion.alpha[1];  // 13 + 4 sqrt(3)
  f.set({1, ctx->uniformizer}, 1);
  QExpansion tf = op_Tp(f, s_scalar(1));
  // reading the first term at (c0, alpha): index alpha^{-1} varpi alpha =
  // varpi on component c1, weighted by alpha^{-m} = 1
  auto val = tf.read(0, alpha);
  REQUIRE(val.has_value());
  CHECK(*val == 2);
}

TEST_CASE("twisting") {
  auto ctx = demo_context_d3();
  std::mt19937_64 rng(41);
  QExpansion f = random_form(ctx, Wt(2, 2), Wt(0, 0), 8, rng);

  QExpansion t1 = twist(f, "triv", TwistMode::plain);
  CHECK(equal_on_common_window(t1, f));

  QExpansion t2 = twist(f, "genus", TwistMode::plain);
  for (const auto& [key, val] : f.coeffs()) {
    FqField::Elt expect = key.comp == 1 ? ctx->coeff.mul(2, val) : val;
    CHECK(t2.read(key.comp, key.mu).value() == expect);
  }

  QExpansion t3 = twist(f, "normsq", TwistMode::plain);
  CHECK(t3.m() == Wt(2, 2));

  CHECK_THROWS_AS(twist(f, "nosuch", TwistMode::plain), error);
  CHECK_THROWS_AS(twist(f, "triv", TwistMode::u1), error);
}

TEST_CASE("masked twist at a conductor prime") {
  auto ctx = demo_context_d3();
  QExpansion f(ctx, Wt(2, 2), Wt(0, 0));
  const auto& F = ctx->field;
  QuadElem pi13 = el(F, 4, 1);
  f.set({0, F.from_long(1)}, 1);
  f.set({0, F.from_long(2)}, 1);
  f.set({0, pi13}, 1);
  f.set({0, F.mul(pi13, F.from_long(2))}, 2);
  QExpansion tf = twist(f, "u1chi", TwistMode::u1);
  // indices divisible by the conductor prime are masked
  CHECK(tf.read(0, pi13).value() == 0);
  CHECK(tf.read(0, F.mul(pi13, F.from_long(2))).value() == 0);
  // residue 1 is fixed; residue 2 is scaled by the inverse character value
  CHECK(tf.read(0, F.from_long(1)).value() == 1);
  // ind_2(2) = 1 in F_13, value 2, so the coefficient is divided by 2
  CHECK(tf.read(0, F.from_long(2)).value() == ctx->coeff.inv(2));
}

TEST_CASE("stabilization predicates") {
  auto ctx = demo_context_d3(/*level_v5=*/true);
  QExpansion zero = blank_form(ctx, Wt(2, 2), Wt(-1, -1), 6);
  CHECK(is_strongly_stabilized(zero));
  CHECK(is_stabilized(zero, {"v5"}));

  QExpansion f(ctx, Wt(2, 2), Wt(-1, -1));
  f.set({0, el(ctx->field, 2, 1)}, 1);  // unit-depth index
  CHECK(is_strongly_stabilized(f));
  f.set({0, el(ctx->field, 3, 1)}, 1);  // positive depth
  CHECK_FALSE(is_strongly_stabilized(f));

  CHECK_THROWS_AS(is_stabilized(zero, {"v7"}), error);  // not a level prime
}

TEST_CASE("unit invariance of generated forms") {
  auto ctx = demo_context_d3();
  std::mt19937_64 rng(43);
  QExpansion f = random_form(ctx, Wt(2, 2), Wt(1, -1), 40, rng);
  CHECK(unit_consistent(f));
  // poke one orbit member and the invariance breaks
  QuadElem u = ctx->declared_units[0];  // 7 + 4 sqrt(3), trace 14
  QuadElem mu = ctx->field.one();
  REQUIRE(f.in_window({0, ctx->field.mul(mu, u)}));
  FqField::Elt old = f.read(0, mu).value();
  f.set({0, mu}, ctx->coeff.add(old, 1));
  CHECK_FALSE(unit_consistent(f));
}

TEST_CASE("eigen construction") {
  auto ctx = demo_context_d5();
  EigenSpec spec;
  spec.k = Wt(2, 2);
  spec.m = Wt(-1, -1);
  spec.base_component = 0;
  spec.base_mu = ctx->field.one();
  spec.eigenvalues = {{"v2", 1, 2}, {"v3", 2, 1}};
  spec.trace_bound = 40;
  QExpansion f = eigen_build(ctx, spec);
  CHECK(f.read(0, ctx->field.one()).value() == 1);
  for (const auto& pe : spec.eigenvalues) {
    QExpansion tf = op_Tv(f, pe.label, s_scalar(pe.d));
    for (const auto& [key, val] : tf.coeffs())
      CHECK(val == ctx->coeff.mul(pe.a, f.read(key.comp, key.mu).value()));
  }

  // requesting the full trace window fails: unit indices off the orbit of
  // the base are not connected to it by the tracked motions
  spec.full_window = true;
  CHECK_THROWS_AS(eigen_build(ctx, spec), error);
}

TEST_CASE("form JSON round trip") {
  auto ctx = demo_context_d3();
  std::mt19937_64 rng(47);
  QExpansion f = random_form(ctx, Wt(1, 2), Wt(-1, -1), 8, rng);
  auto j = form_to_json(f);
  QExpansion g = form_from_json(ctx, j);
  CHECK(g.coeffs() == f.coeffs());
  CHECK(g.k() == f.k());
  CHECK(g.m() == f.m());
}

TEST_CASE("demo contexts validate") {
  CHECK_NOTHROW(demo_context_d3()->validate());
  CHECK_NOTHROW(demo_context_d5()->validate());
  CHECK_NOTHROW(demo_context_d2()->validate());
}

TEST_CASE("operators kill the zero form") {
  auto ctx = demo_context_d3();
  QExpansion z = blank_form(ctx, Wt(2, 2), Wt(-1, -1), 8);
  CHECK(op_Theta(z).is_zero_on_window());
  CHECK(op_Vp(z).is_zero_on_window());
  CHECK(op_Tv(z, "v5", s_scalar(1)).is_zero_on_window());
  CHECK(op_Tp(z, s_scalar(1)).is_zero_on_window());
}

TEST_CASE("theta is a derivation against constant multipliers") {
  auto ctx = demo_context_d3();
  std::mt19937_64 rng(53);
  QExpansion f = random_form(ctx, Wt(1, 2), Wt(-1, -1), 10, rng);
  std::vector<FqField::Elt> consts = {2, 1};
  for (auto mode : {HasseMode::H, HasseMode::G}) {
    QExpansion lhs = op_Theta(mul_Hasse(f, ctx->ramified_set.at(1), consts,
                                        mode));
    QExpansion rhs = mul_Hasse(op_Theta(f), ctx->ramified_set.at(1), consts,
                               mode);
    CHECK(equal_on_common_window(lhs, rhs));
    CHECK(lhs.k() == rhs.k());
    CHECK(lhs.m() == rhs.m());
  }
  // H then G with inverse constants restores the coefficients
  std::vector<FqField::Elt> inv = {ctx->coeff.inv(2), 1};
  QExpansion back = mul_Hasse(
      mul_Hasse(f, ctx->ramified_set.at(0), consts, HasseMode::H),
      ctx->ramified_set.at(0), inv, HasseMode::G);
  CHECK(equal_on_common_window(back, f));
  Weight h = hasse_weight(ctx->ramified_set, ctx->ramified_set.at(0));
  CHECK(back.k()[0] == f.k()[0] + h[0]);
  CHECK(back.m()[1] == f.m()[1] + h[1]);

  CHECK_THROWS_AS(
      mul_Hasse(f, ctx->ramified_set.at(0), {0, 1}, HasseMode::H), error);
}

TEST_CASE("conflicting eigen systems are rejected") {
  auto ctx = demo_context_d5();
  EigenSpec spec;
  spec.k = Wt(2, 2);
  spec.m = Wt(-1, -1);
  spec.base_component = 0;
  spec.base_mu = ctx->field.one();
  // the same prime with two different eigenvalues cannot be satisfied
  spec.eigenvalues = {{"v2", 1, 1}, {"v2", 2, 1}};
  spec.trace_bound = 20;
  CHECK_THROWS_AS(eigen_build(ctx, spec), error);
}
