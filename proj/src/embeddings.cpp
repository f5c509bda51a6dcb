#include "hmf/embeddings.hpp"

#include <algorithm>

namespace hmf {

const char* errc_name(errc c) {
  switch (c) {
    case errc::empty_config: return "EmptyConfig";
    case errc::mixed_rational_primes: return "MixedRationalPrimes";
    case errc::non_positive_degree: return "NonPositiveDegree";
    case errc::unknown_embedding: return "UnknownEmbedding";
    case errc::unknown_prime: return "UnknownPrime";
    case errc::internal_mismatch: return "InternalMismatch";
    case errc::not_quado_bt: return "NotQuadoBT";
    case errc::inconsistent_flags: return "InconsistentFlags";
    case errc::out_of_range_w: return "OutOfRangeW";
    case errc::out_of_range_b: return "OutOfRangeB";
    case errc::not_ramified_quadratic: return "NotRamifiedQuadratic";
    case errc::weight_too_small: return "WeightTooSmall";
    case errc::truncation_too_small: return "TruncationTooSmall";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::not_squarefree: return "NotSquarefree";
    case errc::prime_unramified: return "PrimeUnramified";
    case errc::negative_valuation: return "NegativeValuation";
    case errc::untracked_prime: return "UntrackedPrime";
    case errc::missing_s_action: return "MissingSAction";
    case errc::weight_inequality_violated: return "WeightInequalityViolated";
    case errc::zero_constant: return "ZeroConstant";
    case errc::undeclared_character: return "UndeclaredCharacter";
    case errc::unreachable_index: return "UnreachableIndex";
    case errc::inconsistent_eigenvalues: return "InconsistentEigenvalues";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::unknown_subcommand: return "UnknownSubcommand";
  }
  return "Unknown";
}

static bool is_prime_long(long n) {
  if (n < 2) return false;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

EmbeddingSet EmbeddingSet::build(std::vector<PrimeDatum> primes) {
  check(!primes.empty(), errc::empty_config, "no primes configured");
  EmbeddingSet set;
  set.p_ = primes[0].p;
  check(is_prime_long(set.p_), errc::non_positive_degree,
        "p must be a rational prime >= 2");
  for (size_t idx = 0; idx < primes.size(); ++idx) {
    auto& pr = primes[idx];
    if (pr.id.empty()) pr.id = "p" + std::to_string(idx + 1);
    check(pr.p == set.p_, errc::mixed_rational_primes,
          "all configured primes must lie over the same rational prime");
    check(pr.f >= 1 && pr.e >= 1, errc::non_positive_degree,
          "residue degree and ramification index must be >= 1");
  }
  set.primes_ = std::move(primes);
  long pos = 0;
  for (int pi = 0; pi < set.num_primes(); ++pi) {
    set.offsets_.push_back(pos);
    const auto& pr = set.primes_[pi];
    for (long i = 0; i < pr.f; ++i)
      for (long j = 1; j <= pr.e; ++j) {
        set.emb_.push_back({pi, i, j});
        ++pos;
      }
  }
  set.offsets_.push_back(pos);
  set.d_ = pos;
  return set;
}

long EmbeddingSet::position(const EmbeddingIndex& sigma) const {
  check(sigma.prime >= 0 && sigma.prime < num_primes(), errc::unknown_embedding,
        "embedding refers to an unknown prime");
  const auto& pr = primes_[sigma.prime];
  check(sigma.i >= 0 && sigma.i < pr.f && sigma.j >= 1 && sigma.j <= pr.e,
        errc::unknown_embedding, "embedding index out of range");
  return offsets_[sigma.prime] + sigma.i * pr.e + (sigma.j - 1);
}

EmbeddingIndex EmbeddingSet::phi(const EmbeddingIndex& sigma,
                                 PhiDirection dir) const {
  position(sigma);  // validates
  const auto& pr = primes_[sigma.prime];
  EmbeddingIndex out = sigma;
  if (dir == PhiDirection::forward) {
    if (sigma.j != pr.e) {
      out.j = sigma.j + 1;
    } else {
      out.i = (sigma.i + 1) % pr.f;
      out.j = 1;
    }
  } else {
    if (sigma.j != 1) {
      out.j = sigma.j - 1;
    } else {
      out.i = (sigma.i - 1 + pr.f) % pr.f;
      out.j = pr.e;
    }
  }
  return out;
}

long EmbeddingSet::nu(const EmbeddingIndex& sigma) const {
  position(sigma);  // validates
  return sigma.j == 1 ? p_ : 1;
}

std::pair<long, long> EmbeddingSet::block(int prime_idx) const {
  check(prime_idx >= 0 && prime_idx < num_primes(), errc::unknown_prime,
        "prime index out of range");
  return {offsets_[prime_idx], offsets_[prime_idx + 1]};
}

}  // namespace hmf
