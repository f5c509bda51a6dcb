#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "hmf/local_galois.hpp"

using namespace hmf;

namespace {
long md(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}
}  // namespace

TEST_CASE("degeneracy degrees") {
  for (long w = 2; w <= 5; ++w) {
    auto q = make_quado_bt({5, 1, 2}, {{0, w - 1}});
    CHECK(degeneracy(q, 0) == std::pair{1L, 0L});
  }
  CHECK(degeneracy(make_quado_bt({5, 1, 2}, {{1, 4}}), 0) ==
        std::pair{0L, 1L});
  CHECK(degeneracy(make_quado_bt({5, 1, 2}, {{0, 0}}), 0) ==
        std::pair{2L, 0L});
}

TEST_CASE("quado validation") {
  CHECK_THROWS_AS(make_quado_bt({5, 1, 2}, {{2, 3}}), error);   // r_{e-1} > 1
  CHECK_THROWS_AS(make_quado_bt({5, 1, 2}, {{1, 0}}), error);   // unsorted
  CHECK_THROWS_AS(make_quado_bt({5, 1, 2}, {{0, 6}}), error);   // > p
  CHECK_THROWS_AS(make_quado_bt({5, 1, 2}, {{0, 1}, {0, 1}}), error);
}

TEST_CASE("inertial pairs by brute force") {
  // ramified quadratic, r = (0, 2), p = 5: subsets give totals {0, 2}
  auto pairs = inertial_pairs(make_quado_bt({5, 1, 2}, {{0, 2}}));
  CHECK(pairs == std::set<std::pair<long, long>>{{0, 2}});

  auto zero = inertial_pairs(make_quado_bt({5, 1, 2}, {{0, 0}}));
  CHECK(zero == std::set<std::pair<long, long>>{{0, 0}});

  // inert quadratic (f = 2, e = 1): independent enumeration of the four
  // subsets
  long p = 3, r0 = 1, r1 = 2;
  auto got = inertial_pairs(make_quado_bt({p, 2, 1}, {{r0}, {r1}}));
  std::set<std::pair<long, long>> expect;
  long mod = p * p - 1;
  for (int mask = 0; mask < 4; ++mask) {
    long in = (mask & 1 ? r0 : 0) + (mask & 2 ? r1 * p : 0);
    long out = (mask & 1 ? 0 : r0) + (mask & 2 ? 0 : r1 * p);
    long a = md(in, mod), b = md(out, mod);
    expect.insert({std::min(a, b), std::max(a, b)});
  }
  CHECK(got == expect);
}

TEST_CASE("vchi dimensions") {
  CHECK(vchi_dim(2, 4, false) == 1);
  CHECK(vchi_dim(0, 4, true) == 2);
  CHECK(vchi_dim(0, 4, false) == 1);  // unramified but globally nontrivial
  CHECK_THROWS_AS(vchi_dim(2, 4, true), error);
}

TEST_CASE("partial weight one decisions") {
  long p = 5;
  CHECK(pw1_lift_decision(
      p, make_reducible(p, 0, 2, ExtensionTag::in_vchi), 3, 0));
  CHECK(pw1_lift_decision(
      p, make_reducible(p, 0, 2, ExtensionTag::split), 3, 0));
  CHECK_FALSE(pw1_lift_decision(
      p, make_reducible(p, 0, 2, ExtensionTag::outside_vchi), 3, 0));
  CHECK_FALSE(pw1_lift_decision(
      p, make_reducible(p, 1, 2, ExtensionTag::in_vchi), 3, 0));

  // (-1-w-m)(p+1) + (w-1) = (-4)(6) + 2 = -22 = 2 mod 24
  CHECK(pw1_lift_decision(p, make_irreducible(p, 2), 3, 0));
  CHECK(pw1_lift_decision(p, make_irreducible(p, 10), 3, 0));  // conjugate
  CHECK_FALSE(pw1_lift_decision(p, make_irreducible(p, 3), 3, 0));

  CHECK_THROWS_AS(pw1_lift_decision(p, make_irreducible(p, 2), 0, 0), error);
  CHECK_THROWS_AS(pw1_lift_decision(p, make_irreducible(p, 2), p + 2, 0),
                  error);
}

TEST_CASE("conjugation-fixed exponents are rejected") {
  // xi with p*xi = xi mod p^2-1 corresponds to a reducible induction
  CHECK_THROWS_AS(make_irreducible(5, 0), error);
  CHECK_THROWS_AS(make_irreducible(5, 6), error);  // 6*5 = 30 = 6 mod 24
  CHECK_NOTHROW(make_irreducible(5, 2));
}

TEST_CASE("twist equivariance of the decision") {
  for (long p : {3L, 5L}) {
    long m2 = p * p - 1;
    for (long w = 1; w <= p + 1; ++w)
      for (long m = 0; m < p - 1; ++m)
        for (long ell = 0; ell < p - 1; ++ell) {
          for (long psi = 0; psi < p - 1; ++psi)
            for (long chi = 0; chi < p - 1; ++chi) {
              auto rep = make_reducible(p, psi, chi, ExtensionTag::in_vchi);
              auto twisted =
                  make_reducible(p, psi - ell, chi, ExtensionTag::in_vchi);
              CHECK(pw1_lift_decision(p, twisted, w, m + ell) ==
                    pw1_lift_decision(p, rep, w, m));
            }
          for (long xi = 0; xi < m2; ++xi) {
            if (md(xi * p, m2) == xi) continue;
            auto rep = make_irreducible(p, xi);
            auto twisted = make_irreducible(p, xi - ell * (p + 1));
            CHECK(pw1_lift_decision(p, twisted, w, m + ell) ==
                  pw1_lift_decision(p, rep, w, m));
          }
        }
  }
}

TEST_CASE("weight membership patterns") {
  long p = 7;
  // irreducible: xi = a(p+1) + b + 2
  long a = 3, b = 2;
  CHECK(weight2_membership(p, make_irreducible(p, a * (p + 1) + b + 2), a,
                           b) == Membership::yes);
  CHECK(weight2_membership(p, make_irreducible(p, (a + 1) * (p + 1) + b), a,
                           b) == Membership::yes);
  CHECK(weight2_membership(p, make_irreducible(p, a * (p + 1) + b + 3), a,
                           b) == Membership::no);

  // reducible middle range
  CHECK(weight2_membership(
            p, make_reducible(p, a, b + 2, ExtensionTag::in_vchi), a, b) ==
        Membership::yes);
  CHECK(weight2_membership(
            p, make_reducible(p, a, b + 2, ExtensionTag::outside_vchi), a,
            b) == Membership::unknown);
  CHECK(weight2_membership(
            p, make_reducible(p, a + 1, b + 2, ExtensionTag::in_vchi), a,
            b) == Membership::unknown);

  // boundary dichotomy at b = 0
  CHECK(weight2_membership(p, make_reducible(p, a, 2, ExtensionTag::split), a,
                           0) == Membership::yes);
  CHECK(weight2_membership(
            p, make_reducible(p, a + 1, 0, ExtensionTag::in_vchi), a, 0) ==
        Membership::yes);
  CHECK(weight2_membership(
            p, make_reducible(p, a + 1, 0, ExtensionTag::outside_vchi), a,
            0) == Membership::no);
  CHECK(weight2_membership(
            p, make_reducible(p, a + 2, 1, ExtensionTag::in_vchi), a, 0) ==
        Membership::no);

  // b = p-2 is outside every explicit pattern
  CHECK(weight2_membership(
            p, make_reducible(p, a, 1, ExtensionTag::in_vchi), a, p - 2) ==
        Membership::unknown);

  CHECK_THROWS_AS(weight2_membership(p, make_irreducible(p, 2), 0, p), error);
}

TEST_CASE("membership is encoding-invariant") {
  long p = 5, m2 = p * p - 1;
  for (long xi = 0; xi < m2; ++xi) {
    if (md(xi * p, m2) == xi) continue;
    for (long a = 0; a < p - 1; ++a)
      for (long b = 0; b <= p - 1; ++b)
        CHECK(weight2_membership(p, make_irreducible(p, xi), a, b) ==
              weight2_membership(p, make_irreducible(p, xi * p), a, b));
  }
}

TEST_CASE("ordinary shape bookkeeping") {
  auto set = EmbeddingSet::build({{"", 5, 1, 2}});
  Weight k = weight_from(set, {1, 2}), m = weight_from(set, {-1, -1});
  auto shape = ordinary_shape(set, 0, 2, k, m);
  CHECK(shape.a_unit == 2);
  CHECK(shape.sub_exponent.exponents[0] == 0);  // unramified sub at m = -1
  CHECK(shape.chi1_exponent.exponents[0] == 1);
  REQUIRE(shape.ram_quad_combined.has_value());
  CHECK(*shape.ram_quad_combined == md(-1, 4));

  auto shape2 = ordinary_shape(set, 0, 1, weight_from(set, {2, 2}), m);
  CHECK(*shape2.ram_quad_combined == md(-2, 4));

  CHECK_THROWS_AS(ordinary_shape(set, 0, 1, weight_from(set, {1, 1}), m),
                  error);
  CHECK_THROWS_AS(ordinary_shape(set, 0, 5, k, m), error);  // non-unit
}

TEST_CASE("theta cycle tables") {
  long p = 5;
  // inertially unramified shape: w = 1 appears exactly at m = -2
  auto unram = make_reducible(p, md(-2 - 2, p - 1), 0, ExtensionTag::split);
  auto table = theta_cycle_table(p, unram);
  for (const auto& [m, ws] : table) {
    bool has_w1 =
        std::find(ws.begin(), ws.end(), 1L) != ws.end();
    CHECK(has_w1 == (md(unram.psi + 2 + m, p - 1) == 0));
  }

  auto rep = make_reducible(p, 0, 2, ExtensionTag::in_vchi);
  auto t2 = theta_cycle_table(p, rep);
  auto row0 = t2[0].second;
  CHECK(std::find(row0.begin(), row0.end(), 3L) != row0.end());

  // conjugate exponents give the same table
  auto irr = theta_cycle_table(p, make_irreducible(p, 7));
  auto conj = theta_cycle_table(p, make_irreducible(p, md(7 * p, p * p - 1)));
  CHECK(irr == conj);
}

TEST_CASE("rep parsing round trip") {
  auto r1 = parse_rep(5, "red:psi=0,chi=2,ext=invchi");
  CHECK(r1.reducible);
  CHECK(r1.chi == 2);
  CHECK(r1.ext == ExtensionTag::in_vchi);
  CHECK(parse_rep(5, format_rep(r1)).chi == 2);
  auto r2 = parse_rep(5, "irr:xi=2");
  CHECK_FALSE(r2.reducible);
  CHECK_THROWS_AS(parse_rep(5, "bogus"), error);
  CHECK_THROWS_AS(parse_rep(5, "red:psi=0"), error);
}
