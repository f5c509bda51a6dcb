#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hmf/embeddings.hpp"
#include "hmf/weight_lattice.hpp"

namespace hmf {

// Ambient local field data for inertial-character bookkeeping.
struct LocalField {
  long p = 0;
  long f = 1;
  long e = 1;
};

enum class ExtensionTag { split, in_vchi, outside_vchi };

// Inertial shape of a two-dimensional mod-p local representation at a
// ramified quadratic prime.  Reducible: diagonal characters psi*chi, psi with
// exponents mod p-1 and an extension-class tag.  Irreducible: induced from a
// niveau-two character with exponent mod p^2-1 (conjugate-distinct).
struct LocalRepShape {
  bool reducible = true;
  long psi = 0;           // mod p-1
  long chi = 0;           // mod p-1
  ExtensionTag ext = ExtensionTag::split;
  long xi = 0;            // mod p^2-1
};

LocalRepShape make_reducible(long p, long psi, long chi, ExtensionTag ext);
LocalRepShape make_irreducible(long p, long xi);

// 'red:psi=0,chi=2,ext=invchi' or 'irr:xi=2'
LocalRepShape parse_rep(long p, const std::string& text);
std::string format_rep(const LocalRepShape& rep);

// Sorted labelled-weight profiles (r_{i,1} <= ... <= r_{i,e} <= p with
// r_{i,e-1} <= 1), one row per i in Z/fZ.
struct QuadoBT {
  LocalField field;
  std::vector<std::vector<long>> r;
};
QuadoBT make_quado_bt(LocalField field, std::vector<std::vector<long>> r);

// (delta_i, epsilon_i); the two epsilon formulas are recomputed and must agree.
std::pair<long, long> degeneracy(const QuadoBT& qbt, long i);

// All unordered pairs (sum over J, sum over complement) of the exponents
// r_sigma p^{i(sigma)} mod p^f - 1, over subsets J of the embeddings.
std::set<std::pair<long, long>> inertial_pairs(const QuadoBT& qbt);

// 2 iff chi is globally trivial; a character with zero inertial exponent can
// still be a nontrivial unramified character, so the flag is required input.
int vchi_dim(long chi_exponent, long modulus, bool chi_trivial_globally);

// Partial-weight-one crystalline-lift decision at a ramified quadratic prime;
// w in [1, p+1], m carried as a single residue mod p-1.
bool pw1_lift_decision(long p, const LocalRepShape& rep, long w, long m);

enum class Membership { yes, no, unknown };
const char* membership_name(Membership m);

// Membership of det^a Sym^b in the weight set of rep, decided from the
// explicit shape patterns; abstains (unknown) where the patterns do not
// determine the answer.
Membership weight2_membership(long p, const LocalRepShape& rep, long a, long b);

struct OrdinaryShape {
  long a_unit = 0;                 // Frobenius eigenvalue of the unramified sub
  CharacterClass sub_exponent;     // inertial class of the sub: lambda(-1-m)
  CharacterClass chi1_exponent;    // lambda(1-k-m); quotient is cyc^{-1} chi1
  std::optional<long> ram_quad_combined;  // chi1 - 2 mod p-1 when applicable
};
OrdinaryShape ordinary_shape(const EmbeddingSet& set, int prime_idx,
                             long a_unit, const Weight& k, const Weight& m);

// Row per m-class mod p-1: the set of w in [1, p] accepted by
// pw1_lift_decision.
std::vector<std::pair<long, std::vector<long>>> theta_cycle_table(
    long p, const LocalRepShape& rep);

}  // namespace hmf
