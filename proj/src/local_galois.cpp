#include "hmf/local_galois.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace hmf {

static long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

LocalRepShape make_reducible(long p, long psi, long chi, ExtensionTag ext) {
  check(p >= 2, errc::not_ramified_quadratic, "p must be prime >= 2");
  LocalRepShape rep;
  rep.reducible = true;
  rep.psi = mod(psi, p - 1 > 0 ? p - 1 : 1);
  rep.chi = mod(chi, p - 1 > 0 ? p - 1 : 1);
  rep.ext = ext;
  return rep;
}

LocalRepShape make_irreducible(long p, long xi) {
  LocalRepShape rep;
  rep.reducible = false;
  long m2 = p * p - 1;
  rep.xi = mod(xi, m2);
  check(mod(rep.xi * p, m2) != rep.xi, errc::inconsistent_flags,
        "niveau-two exponent is fixed by conjugation; the induced "
        "representation would be reducible");
  return rep;
}

LocalRepShape parse_rep(long p, const std::string& text) {
  auto colon = text.find(':');
  check(colon != std::string::npos, errc::config_invalid,
        "rep must look like 'red:psi=0,chi=2,ext=invchi' or 'irr:xi=2'");
  std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  std::map<std::string, std::string> kv;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    check(eq != std::string::npos, errc::config_invalid,
          "rep fields must be key=value");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (kind == "red") {
    check(kv.count("psi") && kv.count("chi"), errc::config_invalid,
          "reducible rep needs psi= and chi=");
    ExtensionTag ext = ExtensionTag::split;
    if (kv.count("ext")) {
      const std::string& e = kv["ext"];
      if (e == "split")
        ext = ExtensionTag::split;
      else if (e == "invchi")
        ext = ExtensionTag::in_vchi;
      else if (e == "outside" || e == "outsidevchi")
        ext = ExtensionTag::outside_vchi;
      else
        fail(errc::config_invalid, "ext must be split|invchi|outside");
    }
    return make_reducible(p, std::stol(kv["psi"]), std::stol(kv["chi"]), ext);
  }
  if (kind == "irr") {
    check(kv.count("xi"), errc::config_invalid, "irreducible rep needs xi=");
    return make_irreducible(p, std::stol(kv["xi"]));
  }
  fail(errc::config_invalid, "rep kind must be red or irr");
}

std::string format_rep(const LocalRepShape& rep) {
  std::ostringstream os;
  if (rep.reducible) {
    os << "red:psi=" << rep.psi << ",chi=" << rep.chi << ",ext=";
    switch (rep.ext) {
      case ExtensionTag::split: os << "split"; break;
      case ExtensionTag::in_vchi: os << "invchi"; break;
      case ExtensionTag::outside_vchi: os << "outside"; break;
    }
  } else {
    os << "irr:xi=" << rep.xi;
  }
  return os.str();
}

QuadoBT make_quado_bt(LocalField field, std::vector<std::vector<long>> r) {
  check(field.p >= 2 && field.f >= 1 && field.e >= 1, errc::not_quado_bt,
        "invalid local field data");
  check(static_cast<long>(r.size()) == field.f, errc::not_quado_bt,
        "need one weight row per residue index");
  for (const auto& row : r) {
    check(static_cast<long>(row.size()) == field.e, errc::not_quado_bt,
          "each row needs e entries");
    for (long j = 0; j < field.e; ++j) {
      check(row[j] >= 0 && row[j] <= field.p, errc::not_quado_bt,
            "weights must lie in [0, p]");
      if (j > 0)
        check(row[j - 1] <= row[j], errc::not_quado_bt,
              "weights must be sorted ascending");
    }
    if (field.e >= 2)
      check(row[field.e - 2] <= 1, errc::not_quado_bt,
            "second-largest weight must be <= 1");
  }
  return QuadoBT{field, std::move(r)};
}

std::pair<long, long> degeneracy(const QuadoBT& qbt, long i) {
  check(i >= 0 && i < qbt.field.f, errc::not_quado_bt,
        "residue index out of range");
  const auto& row = qbt.r[i];
  long delta = 0;  // r_{i,0} = 0 by convention
  for (long j = 0; j < qbt.field.e; ++j)
    if (row[j] == 0) delta = j + 1;
  long eps_sum = 0;
  for (long j = 0; j + 1 < qbt.field.e; ++j) eps_sum += row[j];
  long eps_closed = std::max(0L, qbt.field.e - 1 - delta);
  check(eps_sum == eps_closed, errc::internal_mismatch,
        "degeneracy formulas disagree; weight profile is not in sorted "
        "quado form");
  return {delta, eps_sum};
}

std::set<std::pair<long, long>> inertial_pairs(const QuadoBT& qbt) {
  for (long i = 0; i < qbt.field.f; ++i) degeneracy(qbt, i);  // validates
  long p = qbt.field.p, f = qbt.field.f, e = qbt.field.e;
  long modulus = 1;
  for (long i = 0; i < f; ++i) modulus *= p;
  modulus -= 1;
  long n = f * e;
  std::vector<long> weight(n);
  for (long i = 0; i < f; ++i) {
    long pw = 1;
    for (long t = 0; t < i; ++t) pw *= p;
    for (long j = 0; j < e; ++j) weight[i * e + j] = qbt.r[i][j] * pw;
  }
  std::set<std::pair<long, long>> out;
  for (long mask = 0; mask < (1L << n); ++mask) {
    long in = 0, outside = 0;
    for (long b = 0; b < n; ++b)
      ((mask >> b) & 1 ? in : outside) += weight[b];
    long a = mod(in, modulus), c = mod(outside, modulus);
    out.insert({std::min(a, c), std::max(a, c)});
  }
  return out;
}

int vchi_dim(long chi_exponent, long modulus, bool chi_trivial_globally) {
  long red = mod(chi_exponent, modulus);
  if (chi_trivial_globally) {
    check(red == 0, errc::inconsistent_flags,
          "a globally trivial character cannot have a nonzero inertial "
          "exponent");
    return 2;
  }
  return 1;
}

bool pw1_lift_decision(long p, const LocalRepShape& rep, long w, long m) {
  check(p >= 2, errc::not_ramified_quadratic, "p must be prime >= 2");
  check(w >= 1 && w <= p + 1, errc::out_of_range_w,
        "w must lie in [1, p+1]");
  long m1 = p - 1, m2 = p * p - 1;
  long mm = mod(m, m1);
  if (rep.reducible) {
    if (mod(rep.psi - (-1 - w - mm), m1) != 0) return false;
    if (mod(rep.chi - (w - 1), m1) != 0) return false;
    // w = 1 is the unramified boundary at the inertial level: the
    // extension-class tag carries no inertial information there.
    if (w == 1) return true;
    return rep.ext != ExtensionTag::outside_vchi;
  }
  long target = mod((-1 - w - mm) * (p + 1) + (w - 1), m2);
  return rep.xi == target || mod(rep.xi * p, m2) == target;
}

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::yes: return "yes";
    case Membership::no: return "no";
    case Membership::unknown: return "unknown";
  }
  return "unknown";
}

Membership weight2_membership(long p, const LocalRepShape& rep, long a,
                              long b) {
  check(p >= 3, errc::not_ramified_quadratic,
        "weight membership table needs p >= 3");
  check(b >= 0 && b <= p - 1, errc::out_of_range_b, "b must lie in [0, p-1]");
  long m1 = p - 1, m2 = p * p - 1;
  long aa = mod(a, m1);
  if (!rep.reducible) {
    long pat1 = mod(aa * (p + 1) + b + 2, m2);
    long pat2 = mod((aa + 1) * (p + 1) + b, m2);
    long conj = mod(rep.xi * p, m2);
    bool hit = rep.xi == pat1 || conj == pat1 || rep.xi == pat2 || conj == pat2;
    return hit ? Membership::yes : Membership::no;
  }
  bool class_in_vchi = rep.ext != ExtensionTag::outside_vchi;
  if (b == 0 || b == p - 1) {
    // The two boundary weights have the same membership dichotomy.
    bool branch_a = rep.psi == aa && rep.chi == mod(2, m1);
    bool branch_b = rep.psi == mod(aa + 1, m1) && rep.chi == 0;
    if (branch_a) {
      // chi is inertially cyclotomic here; when it is globally cyclotomic
      // the requirement moves to the larger peu-ramifiee space, which the
      // distinguished space is contained in but the tags cannot see beyond.
      return class_in_vchi ? Membership::yes : Membership::unknown;
    }
    if (branch_b)
      return class_in_vchi ? Membership::yes : Membership::no;
    return Membership::no;
  }
  if (b <= p - 4) {
    bool match = rep.psi == aa && rep.chi == mod(b + 2, m1);
    if (match && class_in_vchi) return Membership::yes;
    return Membership::unknown;
  }
  // b = p-3 and p-2 are not covered by the explicit patterns.
  return Membership::unknown;
}

OrdinaryShape ordinary_shape(const EmbeddingSet& set, int prime_idx,
                             long a_unit, const Weight& k, const Weight& m) {
  check(static_cast<long>(k.size()) == set.size() && k.size() == m.size(),
        errc::config_invalid, "weights must match the configuration");
  check(mod(a_unit, set.p()) != 0, errc::config_invalid,
        "ordinary eigenvalue must be a unit");
  auto [b, e] = set.block(prime_idx);
  bool some_big = false;
  for (long pos = b; pos < e; ++pos) {
    check(k[pos] >= 1, errc::weight_too_small,
          "all weights at the prime must be >= 1");
    if (k[pos] > 1) some_big = true;
  }
  check(some_big, errc::weight_too_small,
        "all weights 1 at this prime: the semisimplified local "
        "representation is unramified and carries no ordinary shape data");
  OrdinaryShape out;
  out.a_unit = a_unit;
  Weight sub(set.size()), chi1(set.size());
  for (long pos = 0; pos < set.size(); ++pos) {
    sub[pos] = -1 - m[pos];
    chi1[pos] = 1 - k[pos] - m[pos];
  }
  out.sub_exponent = lambda_class(set, sub);
  out.chi1_exponent = lambda_class(set, chi1);
  if (set.is_ramified_quadratic()) {
    long pm1 = set.p() - 1;
    long c1 = out.chi1_exponent.exponents[0].get_si();
    out.ram_quad_combined = mod(c1 - 2, pm1);
  }
  return out;
}

std::vector<std::pair<long, std::vector<long>>> theta_cycle_table(
    long p, const LocalRepShape& rep) {
  std::vector<std::pair<long, std::vector<long>>> table;
  for (long m = 0; m <= p - 2; ++m) {
    std::vector<long> ws;
    for (long w = 1; w <= p; ++w)
      if (pw1_lift_decision(p, rep, w, m)) ws.push_back(w);
    table.push_back({m, ws});
  }
  return table;
}

}  // namespace hmf
