#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hmf/embeddings.hpp"

using namespace hmf;

TEST_CASE("ramified quadratic indexing") {
  auto set = EmbeddingSet::build({{"p1", 3, 1, 2}});
  CHECK(set.size() == 2);
  CHECK(set.at(0) == EmbeddingIndex{0, 0, 1});
  CHECK(set.at(1) == EmbeddingIndex{0, 0, 2});
  CHECK(set.phi(set.at(0), PhiDirection::forward) == set.at(1));
  CHECK(set.phi(set.at(1), PhiDirection::forward) == set.at(0));
  CHECK(set.nu(set.at(0)) == 3);
  CHECK(set.nu(set.at(1)) == 1);
}

TEST_CASE("inert quadratic indexing") {
  auto set = EmbeddingSet::build({{"p1", 3, 2, 1}});
  CHECK(set.size() == 2);
  CHECK(set.at(0) == EmbeddingIndex{0, 0, 1});
  CHECK(set.at(1) == EmbeddingIndex{0, 1, 1});
  CHECK(set.phi(set.at(0), PhiDirection::forward) == set.at(1));
  CHECK(set.nu(set.at(0)) == 3);
  CHECK(set.nu(set.at(1)) == 3);
}

TEST_CASE("split configuration") {
  auto set =
      EmbeddingSet::build({{"", 5, 1, 1}, {"", 5, 1, 1}});
  CHECK(set.size() == 2);
  CHECK(set.num_primes() == 2);
  // auto-assigned ids stay distinct
  CHECK(set.prime(0).id != set.prime(1).id);
}

TEST_CASE("phi cycles and nu products per prime block") {
  for (long p : {2L, 3L, 5L})
    for (long f = 1; f <= 3; ++f)
      for (long e = 1; e <= 3; ++e) {
        auto set = EmbeddingSet::build({{"", p, f, e}, {"", p, 2, 1}});
        for (int pi = 0; pi < set.num_primes(); ++pi) {
          auto [b, eend] = set.block(pi);
          long len = eend - b;
          // phi is a single cycle of length e*f on the block
          EmbeddingIndex cur = set.at(b);
          long nu_product = 1;
          for (long step = 0; step < len; ++step) {
            nu_product *= set.nu(cur);
            cur = set.phi(cur, PhiDirection::forward);
          }
          CHECK(cur == set.at(b));
          long pf = 1;
          for (long i = 0; i < set.prime(pi).f; ++i) pf *= p;
          CHECK(nu_product == pf);
          // forward then inverse is the identity everywhere
          for (long pos = b; pos < eend; ++pos) {
            auto s = set.at(pos);
            CHECK(set.phi(set.phi(s, PhiDirection::forward),
                          PhiDirection::inverse) == s);
          }
        }
      }
}

TEST_CASE("deterministic ordering") {
  auto a = EmbeddingSet::build({{"x", 3, 2, 2}, {"y", 3, 1, 3}});
  auto b = EmbeddingSet::build({{"x", 3, 2, 2}, {"y", 3, 1, 3}});
  REQUIRE(a.size() == b.size());
  for (long i = 0; i < a.size(); ++i) CHECK(a.at(i) == b.at(i));
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_WITH_AS(EmbeddingSet::build({}), doctest::Contains("no primes"),
                       error);
  CHECK_THROWS_AS(EmbeddingSet::build({{"", 3, 1, 1}, {"", 5, 1, 1}}), error);
  CHECK_THROWS_AS(EmbeddingSet::build({{"", 3, 0, 1}}), error);
  CHECK_THROWS_AS(EmbeddingSet::build({{"", 4, 1, 1}}), error);
  auto set = EmbeddingSet::build({{"", 3, 1, 2}});
  CHECK_THROWS_AS(set.position({0, 0, 3}), error);
  CHECK_THROWS_AS(set.position({1, 0, 1}), error);
}
