#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "hmf/embeddings.hpp"

namespace hmf {

// Integer weight vector over the embeddings of a set, in canonical order.
using Weight = std::vector<mpz_class>;

Weight zero_weight(const EmbeddingSet& set);
Weight weight_from(const EmbeddingSet& set, const std::vector<long>& coords);

// h_sigma = nu_sigma * e_{phi^{-1} sigma} - e_sigma
Weight hasse_weight(const EmbeddingSet& set, const EmbeddingIndex& sigma);

// delta_{p,i,j} = j - 1
Weight delta_weight(const EmbeddingSet& set);

struct ThetaShift {
  Weight k_shift;  // t_tau = h_sigma + 2 e_sigma with sigma = (p, i, e)
  Weight m_shift;  // -e_sigma
  EmbeddingIndex sigma;
};
ThetaShift theta_shift(const EmbeddingSet& set, int prime_idx, long i);

// Weight of the partial Frobenius: k' = k + sum_{sigma in block} k_sigma h_sigma,
// and likewise for m.
std::pair<Weight, Weight> frobenius_weight_shift(const EmbeddingSet& set,
                                                 int prime_idx, const Weight& k,
                                                 const Weight& m);

// nu_sigma k_sigma >= k_{phi^{-1} sigma} for all sigma; strict positivity when
// `positive` is set.
bool in_min_cone(const EmbeddingSet& set, const Weight& k, bool positive);

struct HasseDecomposition {
  std::vector<mpq_class> r;  // unique rational solution of A r = hi - lo
  bool nonnegative = false;
  bool integral = false;
  // Membership in the rational cone spanned by the h_sigma.
  bool comparable() const { return nonnegative; }
  // lo <= hi in the partial order induced by the integral cone.
  bool hasse_le() const { return nonnegative && integral; }
};
HasseDecomposition hasse_compare(const EmbeddingSet& set, const Weight& hi,
                                 const Weight& lo);

// Exact determinant of the matrix with columns h_sigma.
mpz_class hasse_det(const EmbeddingSet& set);

// |det| computed two ways (exact elimination and the closed form
// prod (p^f - 1)); throws internal_mismatch if they disagree.
mpz_class lattice_index(const EmbeddingSet& set);

// Per-prime exponent sum_{i,j} m_{p,i,j} p^i reduced mod p^f - 1.
struct CharacterClass {
  std::vector<mpz_class> exponents;  // one per prime, in [0, p^f - 1)
  std::vector<mpz_class> moduli;
  friend bool operator==(const CharacterClass&, const CharacterClass&) = default;
};
CharacterClass lambda_class(const EmbeddingSet& set, const Weight& m);
bool lambda_equal(const EmbeddingSet& set, const Weight& m, const Weight& n);

// For every (p, i) there is j0 with 2 <= k_{p,i,j0} <= p + 1 and k_{p,i,j} = 2
// for j != j0.
bool is_irreducible_weight(const EmbeddingSet& set, const Weight& k);

std::pair<Weight, Weight> dual_weight(const Weight& k, const Weight& m);

// Precomputed exact inverse of the Hasse matrix, for solving many right-hand
// sides: r = adjugate * b / det.
class LatticeSolver {
 public:
  explicit LatticeSolver(const EmbeddingSet& set);
  const mpz_class& det() const { return det_; }
  std::vector<mpq_class> solve(const Weight& b) const;
  bool integral_solution(const Weight& b) const;

 private:
  mpz_class det_;
  std::vector<std::vector<mpz_class>> adj_;  // adjugate (A^{-1} * det)
  long d_;
};

}  // namespace hmf
