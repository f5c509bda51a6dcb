#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hmf/errors.hpp"

namespace hmf {

struct PrimeDatum {
  std::string id;
  long p = 0;  // rational prime below
  long f = 1;  // residue degree
  long e = 1;  // ramification index
};

// One embedding index (prime, i mod f, j in [1, e]).
struct EmbeddingIndex {
  int prime = 0;  // position in EmbeddingSet::primes()
  long i = 0;
  long j = 1;
  friend bool operator==(const EmbeddingIndex&, const EmbeddingIndex&) = default;
};

enum class PhiDirection { forward, inverse };

// The indexed set of embeddings for a configuration of primes above a single
// rational prime p.  Canonical ordering: by prime, then i, then j.  Immutable
// after construction.
class EmbeddingSet {
 public:
  static EmbeddingSet build(std::vector<PrimeDatum> primes);

  long p() const { return p_; }
  int num_primes() const { return static_cast<int>(primes_.size()); }
  const PrimeDatum& prime(int idx) const { return primes_.at(idx); }
  const std::vector<PrimeDatum>& primes() const { return primes_; }
  long size() const { return d_; }  // d = sum of e*f

  const std::vector<EmbeddingIndex>& embeddings() const { return emb_; }
  long position(const EmbeddingIndex& sigma) const;
  const EmbeddingIndex& at(long pos) const { return emb_.at(pos); }

  EmbeddingIndex phi(const EmbeddingIndex& sigma, PhiDirection dir) const;
  long nu(const EmbeddingIndex& sigma) const;

  // Half-open position range [begin, end) of one prime's block.
  std::pair<long, long> block(int prime_idx) const;

  bool is_ramified_quadratic() const {
    return num_primes() == 1 && primes_[0].f == 1 && primes_[0].e == 2;
  }

 private:
  std::vector<PrimeDatum> primes_;
  std::vector<EmbeddingIndex> emb_;
  std::vector<long> offsets_;
  long p_ = 0;
  long d_ = 0;
};

}  // namespace hmf
