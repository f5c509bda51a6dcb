#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hmf/embeddings.hpp"
#include "hmf/fq.hpp"
#include "hmf/quadfield.hpp"
#include "hmf/weight_lattice.hpp"

namespace hmf {

// How multiplication by a tracked idele moves cusp labels, with the totally
// positive p-unit multipliers relating the chosen representatives:
// (idele) * t_s = alpha[s] * t_{perm[s]} * (unit idele).
struct Motion {
  std::vector<int> perm;
  std::vector<QuadElem> alpha;
};

struct TrackedPrime {
  std::string label;
  QuadElem pi;       // totally positive generator
  mpz_class norm;    // Nm(v), prime to p
  bool level = false;  // level primes use the one-term coefficient formula
  Motion motion;
};

// Character of the residue group at a degree-one conductor prime, given by
// its value at a generator of the residue field's unit group.
struct UnitCharData {
  std::string prime_label;
  long generator = 0;
  FqField::Elt value = 1;
};

struct DeclaredCharacter {
  std::string name;
  std::vector<FqField::Elt> component_values;  // xi(t) per component
  std::map<std::string, FqField::Elt> prime_values;  // xi(pi_v)
  std::vector<long> ell;  // m-weight shift (two coordinates)
  std::vector<UnitCharData> conductor;  // nonempty enables the masked mode
};

// Everything a coefficient system needs to interpret its indices: the field,
// the coefficient field, cusp components with their motions, tracked primes
// and declared characters.
struct QexpContext {
  QuadField field;
  FqField coeff;
  QuadElem uniformizer;
  std::vector<std::string> components;
  Motion x_motion;  // action of the prime-to-p part of the uniformizer
  std::vector<TrackedPrime> tracked;
  std::vector<DeclaredCharacter> characters;
  QuadElem theta_gamma;    // local generator for the theta multiplier
  QuadElem c_normalizer;   // element normalizing the coefficient indexing
  std::vector<QuadElem> declared_units;  // totally positive units, optional
  EmbeddingSet ramified_set;

  QexpContext(QuadField f, FqField c)
      : field(std::move(f)),
        coeff(std::move(c)),
        uniformizer(field.zero()),
        theta_gamma(field.one()),
        c_normalizer(field.one()),
        ramified_set(EmbeddingSet::build({{"p1", field.p(), 1, 2}})) {}

  int component_index(const std::string& label) const;
  const TrackedPrime& tracked_prime(const std::string& label) const;
  const DeclaredCharacter& character(const std::string& name) const;
  void validate() const;

  // sigma1(a)^{w1} sigma2(a)^{w2} in the coefficient field.
  FqField::Elt power(const QuadElem& a, const Weight& w) const;
};

using QexpContextPtr = std::shared_ptr<const QexpContext>;

struct CoeffKey {
  int comp = 0;
  QuadElem mu;
  bool operator<(const CoeffKey& other) const;
  bool operator==(const CoeffKey& other) const = default;
};

// Truncated coefficient system: the stored keys ARE the validity window;
// a key absent from the window is unknown, not zero.  Indices outside the
// lattice of integral totally-positive-or-zero elements are known zeros.
class QExpansion {
 public:
  QExpansion(QexpContextPtr ctx, Weight k, Weight m);

  const QexpContext& ctx() const { return *ctx_; }
  QexpContextPtr ctx_ptr() const { return ctx_; }
  const Weight& k() const { return k_; }
  const Weight& m() const { return m_; }
  Weight& mutable_k() { return k_; }
  Weight& mutable_m() { return m_; }

  const std::map<CoeffKey, FqField::Elt>& coeffs() const { return coeffs_; }
  bool in_window(const CoeffKey& key) const { return coeffs_.count(key) > 0; }
  void set(const CoeffKey& key, FqField::Elt v) { coeffs_[key] = v; }

  // Known value (0 for off-lattice indices) or nullopt when outside the
  // window.
  std::optional<FqField::Elt> read(int comp, const QuadElem& mu) const;

  bool is_zero_on_window() const;

 private:
  QexpContextPtr ctx_;
  Weight k_, m_;
  std::map<CoeffKey, FqField::Elt> coeffs_;
};

// Populates a window of all integral indices with trace in [0, bound]
// (zero included) on every component.
QExpansion blank_form(QexpContextPtr ctx, Weight k, Weight m, long trace_bound);
QExpansion random_form(QexpContextPtr ctx, Weight k, Weight m, long trace_bound,
                       std::mt19937_64& rng);

std::vector<QuadElem> lattice_points_by_trace(const QuadField& field,
                                              long trace_bound);

enum class SActionKind { scalar, companion };
struct SAction {
  SActionKind kind = SActionKind::scalar;
  FqField::Elt scalar = 1;
  const QExpansion* companion = nullptr;
};
inline SAction s_scalar(FqField::Elt d) {
  return {SActionKind::scalar, d, nullptr};
}
inline SAction s_companion(const QExpansion& g) {
  return {SActionKind::companion, 1, &g};
}

QExpansion op_Tv(const QExpansion& f, const std::string& prime_label,
                 const SAction& s);
QExpansion op_Tp(const QExpansion& f, const SAction& s_varpi);
QExpansion op_Vp(const QExpansion& f);
QExpansion op_Theta(const QExpansion& f);

enum class HasseMode { H, G };
QExpansion mul_Hasse(const QExpansion& f, const EmbeddingIndex& sigma,
                     const std::vector<FqField::Elt>& constants,
                     HasseMode mode);

enum class TwistMode { plain, u1 };
QExpansion twist(const QExpansion& f, const std::string& character_name,
                 TwistMode mode);

bool is_strongly_stabilized(const QExpansion& f);
bool is_stabilized(const QExpansion& f,
                   const std::vector<std::string>& level_primes);

// Exact equality of the stored coefficients on the common window.
bool equal_on_common_window(const QExpansion& a, const QExpansion& b);

// Checks the declared unit invariance r(t, mu) = alpha^m r(t, alpha mu) on
// the window.
bool unit_consistent(const QExpansion& f);

struct EigenSpec {
  Weight k, m;
  int base_component = 0;
  QuadElem base_mu;
  FqField::Elt base_value = 1;
  struct PrimeEigen {
    std::string label;
    FqField::Elt a = 0;
    FqField::Elt d = 1;
  };
  std::vector<PrimeEigen> eigenvalues;
  std::optional<std::pair<FqField::Elt, FqField::Elt>> ap;  // (a_p, S_varpi)
  long trace_bound = 20;
  bool full_window = false;  // demand every trace-window index be reachable
};

QExpansion eigen_build(QexpContextPtr ctx, const EigenSpec& spec);

}  // namespace hmf
