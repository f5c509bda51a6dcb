#include "hmf/weight_lattice.hpp"

#include <algorithm>

namespace hmf {

Weight zero_weight(const EmbeddingSet& set) {
  return Weight(set.size(), mpz_class(0));
}

Weight weight_from(const EmbeddingSet& set, const std::vector<long>& coords) {
  check(static_cast<long>(coords.size()) == set.size(), errc::config_invalid,
        "weight vector has wrong length for this configuration");
  Weight w;
  w.reserve(coords.size());
  for (long c : coords) w.emplace_back(c);
  return w;
}

Weight hasse_weight(const EmbeddingSet& set, const EmbeddingIndex& sigma) {
  Weight h = zero_weight(set);
  EmbeddingIndex prev = set.phi(sigma, PhiDirection::inverse);
  h[set.position(prev)] += set.nu(sigma);
  h[set.position(sigma)] -= 1;
  return h;
}

Weight delta_weight(const EmbeddingSet& set) {
  Weight d = zero_weight(set);
  for (long pos = 0; pos < set.size(); ++pos) d[pos] = set.at(pos).j - 1;
  return d;
}

ThetaShift theta_shift(const EmbeddingSet& set, int prime_idx, long i) {
  check(prime_idx >= 0 && prime_idx < set.num_primes(), errc::unknown_prime,
        "prime index out of range");
  const auto& pr = set.prime(prime_idx);
  check(i >= 0 && i < pr.f, errc::unknown_prime, "residue index out of range");
  EmbeddingIndex sigma{prime_idx, i, pr.e};
  ThetaShift out;
  out.sigma = sigma;
  out.k_shift = hasse_weight(set, sigma);
  out.k_shift[set.position(sigma)] += 2;
  out.m_shift = zero_weight(set);
  out.m_shift[set.position(sigma)] -= 1;
  return out;
}

std::pair<Weight, Weight> frobenius_weight_shift(const EmbeddingSet& set,
                                                 int prime_idx, const Weight& k,
                                                 const Weight& m) {
  auto [b, e] = set.block(prime_idx);
  Weight k2 = k, m2 = m;
  for (long pos = b; pos < e; ++pos) {
    Weight h = hasse_weight(set, set.at(pos));
    for (long r = 0; r < set.size(); ++r) {
      k2[r] += k[pos] * h[r];
      m2[r] += m[pos] * h[r];
    }
  }
  return {k2, m2};
}

bool in_min_cone(const EmbeddingSet& set, const Weight& k, bool positive) {
  for (long pos = 0; pos < set.size(); ++pos) {
    const auto& sigma = set.at(pos);
    if (positive && k[pos] <= 0) return false;
    long prev = set.position(set.phi(sigma, PhiDirection::inverse));
    if (set.nu(sigma) * k[pos] < k[prev]) return false;
  }
  return true;
}

// Columns h_sigma in canonical order; A[row][col].
static std::vector<std::vector<mpz_class>> hasse_matrix(
    const EmbeddingSet& set) {
  long d = set.size();
  std::vector<std::vector<mpz_class>> A(d, std::vector<mpz_class>(d, 0));
  for (long col = 0; col < d; ++col) {
    Weight h = hasse_weight(set, set.at(col));
    for (long row = 0; row < d; ++row) A[row][col] = h[row];
  }
  return A;
}

// Exact Gauss-Jordan over Q; returns (det, inverse). A must be square.
static mpz_class invert_exact(std::vector<std::vector<mpq_class>> M,
                              std::vector<std::vector<mpq_class>>& inv) {
  long d = static_cast<long>(M.size());
  inv.assign(d, std::vector<mpq_class>(d, 0));
  for (long i = 0; i < d; ++i) inv[i][i] = 1;
  mpq_class det = 1;
  for (long col = 0; col < d; ++col) {
    long piv = -1;
    for (long r = col; r < d; ++r)
      if (M[r][col] != 0) {
        piv = r;
        break;
      }
    check(piv >= 0, errc::internal_mismatch, "Hasse matrix is singular");
    if (piv != col) {
      std::swap(M[piv], M[col]);
      std::swap(inv[piv], inv[col]);
      det = -det;
    }
    mpq_class p = M[col][col];
    det *= p;
    for (long c = 0; c < d; ++c) {
      M[col][c] /= p;
      inv[col][c] /= p;
    }
    for (long r = 0; r < d; ++r) {
      if (r == col || M[r][col] == 0) continue;
      mpq_class factor = M[r][col];
      for (long c = 0; c < d; ++c) {
        M[r][c] -= factor * M[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  det.canonicalize();
  check(det.get_den() == 1, errc::internal_mismatch, "determinant not integral");
  return det.get_num();
}

LatticeSolver::LatticeSolver(const EmbeddingSet& set) : d_(set.size()) {
  auto A = hasse_matrix(set);
  std::vector<std::vector<mpq_class>> M(d_, std::vector<mpq_class>(d_));
  for (long r = 0; r < d_; ++r)
    for (long c = 0; c < d_; ++c) M[r][c] = A[r][c];
  std::vector<std::vector<mpq_class>> inv;
  det_ = invert_exact(std::move(M), inv);
  adj_.assign(d_, std::vector<mpz_class>(d_, 0));
  for (long r = 0; r < d_; ++r)
    for (long c = 0; c < d_; ++c) {
      mpq_class v = inv[r][c] * det_;
      v.canonicalize();
      check(v.get_den() == 1, errc::internal_mismatch,
            "adjugate entry not integral");
      adj_[r][c] = v.get_num();
    }
}

std::vector<mpq_class> LatticeSolver::solve(const Weight& b) const {
  check(static_cast<long>(b.size()) == d_, errc::config_invalid,
        "right-hand side has the wrong length");
  std::vector<mpq_class> r(d_);
  for (long i = 0; i < d_; ++i) {
    mpz_class acc = 0;
    for (long j = 0; j < d_; ++j) acc += adj_[i][j] * b[j];
    r[i] = mpq_class(acc, det_);
    r[i].canonicalize();
  }
  return r;
}

bool LatticeSolver::integral_solution(const Weight& b) const {
  check(static_cast<long>(b.size()) == d_, errc::config_invalid,
        "right-hand side has the wrong length");
  for (long i = 0; i < d_; ++i) {
    mpz_class acc = 0;
    for (long j = 0; j < d_; ++j) acc += adj_[i][j] * b[j];
    if (acc % det_ != 0) return false;
  }
  return true;
}

HasseDecomposition hasse_compare(const EmbeddingSet& set, const Weight& hi,
                                 const Weight& lo) {
  check(hi.size() == lo.size() &&
            static_cast<long>(hi.size()) == set.size(),
        errc::config_invalid, "weights must match the configuration");
  Weight b(set.size());
  for (long i = 0; i < set.size(); ++i) b[i] = hi[i] - lo[i];
  LatticeSolver solver(set);
  HasseDecomposition out;
  out.r = solver.solve(b);
  out.nonnegative = true;
  out.integral = true;
  for (const auto& q : out.r) {
    if (q < 0) out.nonnegative = false;
    if (q.get_den() != 1) out.integral = false;
  }
  return out;
}

mpz_class hasse_det(const EmbeddingSet& set) {
  return LatticeSolver(set).det();
}

mpz_class lattice_index(const EmbeddingSet& set) {
  mpz_class det = abs(hasse_det(set));
  mpz_class closed = 1;
  for (int i = 0; i < set.num_primes(); ++i) {
    mpz_class pf;
    mpz_ui_pow_ui(pf.get_mpz_t(), set.p(), set.prime(i).f);
    closed *= pf - 1;
  }
  check(det == closed, errc::internal_mismatch,
        "determinant disagrees with the product formula");
  return det;
}

CharacterClass lambda_class(const EmbeddingSet& set, const Weight& m) {
  check(static_cast<long>(m.size()) == set.size(), errc::config_invalid,
        "weight must match the configuration");
  CharacterClass out;
  for (int pi = 0; pi < set.num_primes(); ++pi) {
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), set.p(), set.prime(pi).f);
    mod -= 1;
    mpz_class acc = 0;
    auto [b, e] = set.block(pi);
    for (long pos = b; pos < e; ++pos) {
      mpz_class pw;
      mpz_ui_pow_ui(pw.get_mpz_t(), set.p(), set.at(pos).i);
      acc += m[pos] * pw;
    }
    mpz_class red = acc % mod;
    if (red < 0) red += mod;
    out.exponents.push_back(red);
    out.moduli.push_back(mod);
  }
  return out;
}

bool lambda_equal(const EmbeddingSet& set, const Weight& m, const Weight& n) {
  return lambda_class(set, m) == lambda_class(set, n);
}

bool is_irreducible_weight(const EmbeddingSet& set, const Weight& k) {
  for (int pi = 0; pi < set.num_primes(); ++pi) {
    const auto& pr = set.prime(pi);
    auto [b, e] = set.block(pi);
    for (long i = 0; i < pr.f; ++i) {
      long not_two = 0;
      mpz_class special = 2;
      for (long j = 0; j < pr.e; ++j) {
        const mpz_class& v = k[b + i * pr.e + j];
        if (v != 2) {
          ++not_two;
          special = v;
        }
      }
      if (not_two > 1) return false;
      if (special < 2 || special > set.p() + 1) return false;
    }
  }
  return true;
}

std::pair<Weight, Weight> dual_weight(const Weight& k, const Weight& m) {
  Weight m2(k.size());
  for (size_t i = 0; i < k.size(); ++i) m2[i] = -k[i] - m[i];
  return {k, m2};
}

}  // namespace hmf
