#include "hmf/qexp.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace hmf {

bool CoeffKey::operator<(const CoeffKey& other) const {
  if (comp != other.comp) return comp < other.comp;
  if (mu.x != other.mu.x) return mu.x < other.mu.x;
  return mu.y < other.mu.y;
}

int QexpContext::component_index(const std::string& label) const {
  for (size_t i = 0; i < components.size(); ++i)
    if (components[i] == label) return static_cast<int>(i);
  fail(errc::config_invalid, "unknown component label: " + label);
}

const TrackedPrime& QexpContext::tracked_prime(const std::string& label) const {
  for (const auto& t : tracked)
    if (t.label == label) return t;
  fail(errc::untracked_prime, "prime is not tracked: " + label);
}

const DeclaredCharacter& QexpContext::character(const std::string& name) const {
  for (const auto& c : characters)
    if (c.name == name) return c;
  fail(errc::undeclared_character, "character is not declared: " + name);
}

FqField::Elt QexpContext::power(const QuadElem& a, const Weight& w) const {
  check(w.size() == 2, errc::config_invalid, "weight must have 2 coordinates");
  return field.value_power_product(a, w[0].get_si(), w[1].get_si(), coeff);
}

static void validate_motion(const QexpContext& ctx, const Motion& motion,
                            const std::string& what) {
  size_t n = ctx.components.size();
  check(motion.perm.size() == n && motion.alpha.size() == n,
        errc::config_invalid, what + ": motion tables have the wrong size");
  std::vector<bool> seen(n, false);
  for (size_t s = 0; s < n; ++s) {
    int tgt = motion.perm[s];
    check(tgt >= 0 && tgt < static_cast<int>(n) && !seen[tgt],
          errc::config_invalid, what + ": motion is not a permutation");
    seen[tgt] = true;
    const QuadElem& a = motion.alpha[s];
    check(ctx.field.is_totally_positive(a), errc::config_invalid,
          what + ": motion multiplier must be totally positive");
    check(ctx.field.valuation(a) == 0, errc::config_invalid,
          what + ": motion multiplier must be a unit at the prime over p");
  }
}

void QexpContext::validate() const {
  check(!components.empty(), errc::config_invalid, "no components declared");
  check(coeff.p() == field.p(), errc::field_mismatch,
        "coefficient field characteristic must match p");
  check(field.is_totally_positive(uniformizer), errc::config_invalid,
        "uniformizer must be totally positive");
  check(field.valuation(uniformizer) == 1, errc::config_invalid,
        "uniformizer must have valuation 1 at the prime over p");
  validate_motion(*this, x_motion, "x action");
  check(!field.is_zero(theta_gamma) && field.valuation(theta_gamma) >= 0,
        errc::config_invalid, "theta basis element must be integral at p");
  for (const auto& t : tracked) {
    check(field.is_totally_positive(t.pi), errc::config_invalid,
          "tracked generator must be totally positive: " + t.label);
    check(field.is_integral(t.pi), errc::config_invalid,
          "tracked generator must be integral: " + t.label);
    check(field.valuation(t.pi) == 0, errc::config_invalid,
          "tracked prime must not divide p: " + t.label);
    mpq_class nm = abs(field.norm(t.pi));
    check(nm == t.norm, errc::config_invalid,
          "declared norm disagrees with the generator: " + t.label);
    check(t.norm % field.p() != 0, errc::config_invalid,
          "tracked norm must be prime to p: " + t.label);
    validate_motion(*this, t.motion, "prime " + t.label);
  }
  for (const auto& u : declared_units) {
    check(field.is_totally_positive(u) && field.is_integral(u) &&
              abs(field.norm(u)) == 1,
          errc::config_invalid, "declared units must be totally positive units");
  }
  // Characters must be multiplicative along the tracked motions:
  // xi(perm(s)) * alpha^ell = xi(pi_v) * xi(s).
  for (const auto& chi : characters) {
    check(chi.component_values.size() == components.size(),
          errc::config_invalid,
          "character " + chi.name + " needs a value per component");
    check(chi.ell.size() == 2, errc::config_invalid,
          "character " + chi.name + " needs a 2-coordinate weight shift");
    for (auto v : chi.component_values)
      check(v != 0, errc::config_invalid,
            "character values must be nonzero: " + chi.name);
    Weight ell = {mpz_class(chi.ell[0]), mpz_class(chi.ell[1])};
    for (const auto& t : tracked) {
      auto it = chi.prime_values.find(t.label);
      check(it != chi.prime_values.end(), errc::config_invalid,
            "character " + chi.name + " lacks a value at " + t.label);
      check(it->second != 0, errc::config_invalid,
            "character prime values must be nonzero");
      for (size_t s = 0; s < components.size(); ++s) {
        FqField::Elt lhs = coeff.mul(
            chi.component_values[t.motion.perm[s]], power(t.motion.alpha[s], ell));
        FqField::Elt rhs = coeff.mul(it->second, chi.component_values[s]);
        check(lhs == rhs, errc::config_invalid,
              "character " + chi.name + " is not multiplicative along " +
                  t.label);
      }
    }
    for (const auto& uc : chi.conductor) {
      const auto& t = tracked_prime(uc.prime_label);
      mpq_class nm = abs(field.norm(t.pi));
      mpz_class l = nm.get_num();
      check(nm.get_den() == 1 && l > 1, errc::config_invalid,
            "conductor prime must be integral");
      // degree-one residue field required for the masked mode
      mpz_class probe = l;
      check(mpz_probab_prime_p(probe.get_mpz_t(), 25) != 0,
            errc::config_invalid,
            "conductor primes must have a prime residue field");
      check(uc.value != 0, errc::config_invalid,
            "unit character value must be nonzero");
    }
  }
}

QExpansion::QExpansion(QexpContextPtr ctx, Weight k, Weight m)
    : ctx_(std::move(ctx)), k_(std::move(k)), m_(std::move(m)) {
  check(k_.size() == 2 && m_.size() == 2, errc::config_invalid,
        "forms carry 2-coordinate weights");
}

std::optional<FqField::Elt> QExpansion::read(int comp,
                                             const QuadElem& mu) const {
  const QuadField& F = ctx_->field;
  if (!F.is_integral(mu)) return ctx_->coeff.zero();
  if (!F.is_zero(mu) && !F.is_totally_positive(mu)) return ctx_->coeff.zero();
  auto it = coeffs_.find({comp, mu});
  if (it == coeffs_.end()) return std::nullopt;
  return it->second;
}

bool QExpansion::is_zero_on_window() const {
  for (const auto& [key, v] : coeffs_)
    if (v != 0) return false;
  return true;
}

std::vector<QuadElem> lattice_points_by_trace(const QuadField& field,
                                              long trace_bound) {
  std::vector<QuadElem> out;
  out.push_back(field.zero());
  // mu = x + y*omega, trace = 2x (omega = sqrt(D)) or 2x + y.
  for (long tr = 1; tr <= trace_bound; ++tr) {
    for (long y = -trace_bound * 2; y <= trace_bound * 2; ++y) {
      QuadElem mu;
      if (field.omega_is_half()) {
        if ((tr - y) % 2 != 0) continue;
        mu = field.from_pair(mpq_class((tr - y) / 2), mpq_class(y));
      } else {
        if (tr % 2 != 0) break;
        mu = field.from_pair(mpq_class(tr / 2), mpq_class(y));
      }
      if (field.is_totally_positive(mu)) out.push_back(mu);
    }
  }
  return out;
}

QExpansion blank_form(QexpContextPtr ctx, Weight k, Weight m,
                      long trace_bound) {
  QExpansion f(ctx, std::move(k), std::move(m));
  auto pts = lattice_points_by_trace(ctx->field, trace_bound);
  for (int c = 0; c < static_cast<int>(ctx->components.size()); ++c)
    for (const auto& mu : pts) f.set({c, mu}, 0);
  return f;
}

QExpansion random_form(QexpContextPtr ctx, Weight k, Weight m,
                       long trace_bound, std::mt19937_64& rng) {
  QExpansion f = blank_form(ctx, std::move(k), std::move(m), trace_bound);
  std::uniform_int_distribution<long> dist(0, ctx->coeff.q() - 1);
  // Fill respecting the declared unit invariances: derive the value at
  // alpha*mu from mu whenever both lie in the window.
  std::map<CoeffKey, FqField::Elt> values;
  for (const auto& [key, unused] : f.coeffs()) {
    if (values.count(key)) continue;
    FqField::Elt v = static_cast<FqField::Elt>(dist(rng));
    values[key] = v;
    // push the unit orbit
    std::deque<CoeffKey> todo{key};
    while (!todo.empty()) {
      CoeffKey cur = todo.front();
      todo.pop_front();
      FqField::Elt cv = values[cur];
      for (const auto& u : ctx->declared_units) {
        for (int dir = 0; dir < 2; ++dir) {
          QuadElem target = dir == 0 ? ctx->field.mul(cur.mu, u)
                                     : ctx->field.div(cur.mu, u);
          CoeffKey tk{cur.comp, target};
          if (!f.in_window(tk) || values.count(tk)) continue;
          // r(t, mu) = alpha^m r(t, alpha mu)  =>  r(t, alpha mu) =
          // alpha^{-m} r(t, mu)
          FqField::Elt factor =
              dir == 0 ? ctx->coeff.inv(ctx->power(u, f.m()))
                       : ctx->power(u, f.m());
          values[tk] = ctx->coeff.mul(factor, cv);
          todo.push_back(tk);
        }
      }
    }
  }
  for (const auto& [key, v] : values) f.set(key, v);
  return f;
}

// Resolves the idele motion: reading the coefficient of `f` at component
// idele (motion) * t and index mu0 gives alpha^m * f(perm(t), alpha * mu0).
struct ResolvedRead {
  int comp;
  QuadElem index_factor;  // alpha
  bool forward;
};

static std::optional<FqField::Elt> motion_read(const QExpansion& f,
                                               const Motion& motion, int t,
                                               const QuadElem& mu0,
                                               bool forward) {
  const auto& ctx = f.ctx();
  int comp;
  QuadElem alpha = ctx.field.one();
  if (forward) {
    comp = motion.perm[t];
    alpha = motion.alpha[t];
  } else {
    comp = -1;
    for (size_t s = 0; s < motion.perm.size(); ++s)
      if (motion.perm[s] == t) {
        comp = static_cast<int>(s);
        alpha = ctx.field.inv(motion.alpha[s]);
        break;
      }
    check(comp >= 0, errc::internal_mismatch, "motion is not a permutation");
  }
  QuadElem idx = ctx.field.mul(alpha, mu0);
  auto val = f.read(comp, idx);
  if (!val) return std::nullopt;
  if (*val == 0) return ctx.coeff.zero();
  return ctx.coeff.mul(ctx.power(alpha, f.m()), *val);
}

static std::optional<FqField::Elt> s_action_read(const SAction& s,
                                                 const QExpansion& f,
                                                 const Motion& motion, int t,
                                                 const QuadElem& mu0,
                                                 bool forward) {
  if (s.kind == SActionKind::scalar) {
    auto v = motion_read(f, motion, t, mu0, forward);
    if (!v) return std::nullopt;
    return f.ctx().coeff.mul(s.scalar, *v);
  }
  check(s.companion != nullptr, errc::missing_s_action,
        "companion S-form missing");
  return motion_read(*s.companion, motion, t, mu0, forward);
}

// Candidate output indices for an operator whose terms read the input at
// the given motions: the input window itself plus the pullbacks of every
// stored index under each (motion, index-factor) pair.
static std::set<CoeffKey> pullback_candidates(
    const QExpansion& f,
    const std::vector<std::pair<const Motion*, QuadElem>>& reads) {
  const auto& ctx = f.ctx();
  std::set<CoeffKey> cand;
  for (const auto& [key, unused] : f.coeffs()) cand.insert(key);
  for (const auto& [motion, extra] : reads) {
    // A term at output (t, mu) reads component perm(t) at index
    // alpha(t) * extra * mu; invert that for every stored index.
    for (const auto& [key, unused] : f.coeffs()) {
      for (size_t t = 0; t < ctx.components.size(); ++t) {
        if (motion->perm[t] != key.comp) continue;
        QuadElem mu = ctx.field.div(
            key.mu, ctx.field.mul(motion->alpha[t], extra));
        if (!ctx.field.is_integral(mu)) break;
        if (!ctx.field.is_zero(mu) && !ctx.field.is_totally_positive(mu))
          break;
        cand.insert({static_cast<int>(t), mu});
        break;
      }
    }
  }
  return cand;
}

QExpansion op_Tv(const QExpansion& f, const std::string& prime_label,
                 const SAction& s) {
  const auto& ctx = f.ctx();
  const TrackedPrime& v = ctx.tracked_prime(prime_label);
  if (!v.level && s.kind == SActionKind::companion)
    check(s.companion != nullptr, errc::missing_s_action,
          "two-term formula needs an S-action");
  QExpansion out(f.ctx_ptr(), f.k(), f.m());
  FqField::Elt nm = ctx.coeff.from_int(mpz_class(v.norm % ctx.field.p()).get_si());
  Motion inverse;  // term 2 reads along the inverse motion
  inverse.perm.resize(ctx.components.size());
  inverse.alpha.assign(ctx.components.size(), ctx.field.one());
  for (size_t t = 0; t < ctx.components.size(); ++t) {
    inverse.perm[v.motion.perm[t]] = static_cast<int>(t);
    inverse.alpha[v.motion.perm[t]] = ctx.field.inv(v.motion.alpha[t]);
  }
  std::vector<std::pair<const Motion*, QuadElem>> reads = {
      {&v.motion, ctx.field.one()}};
  if (!v.level) reads.push_back({&inverse, ctx.field.one()});
  for (const auto& key : pullback_candidates(f, reads)) {
    auto term1 = motion_read(f, v.motion, key.comp, key.mu, true);
    if (!term1) continue;
    FqField::Elt val = ctx.coeff.mul(nm, *term1);
    if (!v.level) {
      auto term2 = s_action_read(s, f, v.motion, key.comp, key.mu, false);
      if (!term2) continue;
      val = ctx.coeff.add(val, *term2);
    }
    out.set(key, val);
  }
  return out;
}

QExpansion op_Tp(const QExpansion& f, const SAction& s_varpi) {
  const auto& ctx = f.ctx();
  // sum over both embeddings of min(m+1, m+k) must be >= 0
  mpz_class total = 0;
  for (int i = 0; i < 2; ++i) {
    mpz_class a = f.m()[i] + 1, b = f.m()[i] + f.k()[i];
    total += a < b ? a : b;
  }
  check(total >= 0, errc::weight_inequality_violated,
        "weight fails the operator's defining inequality");

  // epsilon = p^f / Nm(varpi), a p-unit rational
  mpq_class eps = mpq_class(ctx.field.p()) / ctx.field.norm(ctx.uniformizer);
  eps.canonicalize();
  mpz_class en = eps.get_num() % ctx.field.p(),
            ed = eps.get_den() % ctx.field.p();
  FqField::Elt eps_v = ctx.coeff.mul(
      ctx.coeff.from_int(en.get_si()),
      ctx.coeff.inv(ctx.coeff.from_int(ed.get_si())));

  Weight m_plus_1 = {f.m()[0] + 1, f.m()[1] + 1};
  Weight k_plus_m = {f.k()[0] + f.m()[0], f.k()[1] + f.m()[1]};
  FqField::Elt c1 = ctx.coeff.mul(eps_v, ctx.power(ctx.uniformizer, m_plus_1));
  FqField::Elt c2 = ctx.power(ctx.uniformizer, k_plus_m);

  QExpansion out(f.ctx_ptr(), f.k(), f.m());
  Motion inverse;  // term 1 reads along the inverse of the x motion
  inverse.perm.resize(ctx.components.size());
  inverse.alpha.assign(ctx.components.size(), ctx.field.one());
  for (size_t t = 0; t < ctx.components.size(); ++t) {
    inverse.perm[ctx.x_motion.perm[t]] = static_cast<int>(t);
    inverse.alpha[ctx.x_motion.perm[t]] = ctx.field.inv(ctx.x_motion.alpha[t]);
  }
  std::vector<std::pair<const Motion*, QuadElem>> reads = {
      {&inverse, ctx.uniformizer},
      {&ctx.x_motion, ctx.field.inv(ctx.uniformizer)}};
  for (const auto& key : pullback_candidates(f, reads)) {
    QuadElem up = ctx.field.mul(ctx.uniformizer, key.mu);
    auto term1 = motion_read(f, ctx.x_motion, key.comp, up, false);
    if (!term1) continue;
    QuadElem down = ctx.field.div(key.mu, ctx.uniformizer);
    auto term2 = s_action_read(s_varpi, f, ctx.x_motion, key.comp, down, true);
    if (!term2) continue;
    out.set(key, ctx.coeff.add(ctx.coeff.mul(c1, *term1),
                               ctx.coeff.mul(c2, *term2)));
  }
  return out;
}

QExpansion op_Vp(const QExpansion& f) {
  const auto& ctx = f.ctx();
  auto [k2, m2] = frobenius_weight_shift(ctx.ramified_set, 0, f.k(), f.m());
  QExpansion out(f.ctx_ptr(), k2, m2);
  // out(t, mu) = alpha^m f(perm(t), alpha * varpi^{-1} * mu); the window is
  // the image of f's window under the inverse motion.
  for (const auto& [key, val] : f.coeffs()) {
    // key = (t', mu'); out index: t with perm(t) = t', mu = varpi *
    // alpha^{-1} * mu'
    for (size_t t = 0; t < ctx.components.size(); ++t) {
      if (ctx.x_motion.perm[t] != key.comp) continue;
      QuadElem mu = ctx.field.mul(
          ctx.uniformizer, ctx.field.div(key.mu, ctx.x_motion.alpha[t]));
      if (!ctx.field.is_integral(mu)) break;
      if (!ctx.field.is_zero(mu) && !ctx.field.is_totally_positive(mu)) break;
      FqField::Elt scaled =
          ctx.coeff.mul(ctx.power(ctx.x_motion.alpha[t], f.m()), val);
      out.set({static_cast<int>(t), mu}, scaled);
      break;
    }
  }
  return out;
}

QExpansion op_Theta(const QExpansion& f) {
  const auto& ctx = f.ctx();
  auto shift = theta_shift(ctx.ramified_set, 0, 0);
  Weight k2 = f.k(), m2 = f.m();
  for (int i = 0; i < 2; ++i) {
    k2[i] += shift.k_shift[i];
    m2[i] += shift.m_shift[i];
  }
  QExpansion out(f.ctx_ptr(), k2, m2);
  long gamma_val = ctx.field.valuation(ctx.theta_gamma);
  for (const auto& [key, val] : f.coeffs()) {
    FqField::Elt factor = 0;
    if (!ctx.field.is_zero(key.mu) &&
        ctx.field.valuation(key.mu) == gamma_val) {
      factor = ctx.field.residue(ctx.field.div(key.mu, ctx.theta_gamma),
                                 ctx.coeff);
    }
    out.set(key, ctx.coeff.mul(factor, val));
  }
  return out;
}

QExpansion mul_Hasse(const QExpansion& f, const EmbeddingIndex& sigma,
                     const std::vector<FqField::Elt>& constants,
                     HasseMode mode) {
  const auto& ctx = f.ctx();
  check(constants.size() == ctx.components.size(), errc::config_invalid,
        "need one constant per component");
  for (auto c : constants)
    check(c != 0, errc::zero_constant, "Hasse constants must be nonzero");
  Weight h = hasse_weight(ctx.ramified_set, sigma);
  Weight k2 = f.k(), m2 = f.m();
  for (int i = 0; i < 2; ++i)
    (mode == HasseMode::H ? k2[i] : m2[i]) += h[i];
  QExpansion out(f.ctx_ptr(), k2, m2);
  for (const auto& [key, val] : f.coeffs())
    out.set(key, ctx.coeff.mul(constants[key.comp], val));
  return out;
}

// Discrete log in F_l^x by brute force (small l).
static long residue_index(long value, long generator, long l) {
  long acc = 1;
  for (long e = 0; e < l - 1; ++e) {
    if (acc == value) return e;
    acc = (acc * generator) % l;
  }
  fail(errc::config_invalid, "declared generator does not generate");
}

// Residue of an integral element at a declared degree-one prime (pi):
// omega maps to the root r of its minimal polynomial with pi | (omega - r).
static long residue_at_prime(const QuadField& F, const QuadElem& z,
                             const QuadElem& pi, long l) {
  check(F.is_integral(z), errc::config_invalid,
        "conductor evaluation needs an integral element");
  long r_omega = -1;
  for (long r = 0; r < l; ++r) {
    QuadElem diff = F.sub(F.from_pair(mpq_class(0), mpq_class(1)),
                          F.from_long(r));
    QuadElem quot = F.div(diff, pi);
    if (F.is_integral(quot)) {
      r_omega = r;
      break;
    }
  }
  check(r_omega >= 0, errc::config_invalid,
        "no residue root found; is the prime degree one?");
  mpz_class val = (z.x.get_num() + z.y.get_num() * r_omega) % l;
  long out = val.get_si();
  return out < 0 ? out + l : out;
}

static long prime_valuation(const QuadField& F, QuadElem z, const QuadElem& pi,
                            long l) {
  check(!F.is_zero(z), errc::config_invalid, "valuation of zero");
  long v = 0;
  while (F.is_integral(z) && residue_at_prime(F, z, pi, l) == 0) {
    z = F.div(z, pi);
    ++v;
    check(v < 64, errc::internal_mismatch, "runaway prime valuation");
  }
  return v;
}

QExpansion twist(const QExpansion& f, const std::string& character_name,
                 TwistMode mode) {
  const auto& ctx = f.ctx();
  const DeclaredCharacter& chi = ctx.character(character_name);
  Weight m2 = f.m();
  for (int i = 0; i < 2; ++i) m2[i] += chi.ell[i];
  QExpansion out(f.ctx_ptr(), f.k(), m2);
  if (mode == TwistMode::plain) {
    for (const auto& [key, val] : f.coeffs())
      out.set(key, ctx.coeff.mul(chi.component_values[key.comp], val));
    return out;
  }
  check(!chi.conductor.empty(), errc::undeclared_character,
        "character has no conductor data for the masked mode");
  for (const auto& [key, val] : f.coeffs()) {
    if (ctx.field.is_zero(key.mu)) {
      out.set(key, 0);
      continue;
    }
    QuadElem z = ctx.field.mul(ctx.c_normalizer, key.mu);
    FqField::Elt scaled = ctx.coeff.mul(chi.component_values[key.comp], val);
    bool masked = false;
    for (const auto& uc : chi.conductor) {
      const auto& t = ctx.tracked_prime(uc.prime_label);
      mpq_class nm = abs(ctx.field.norm(t.pi));
      long l = mpz_class(nm.get_num()).get_si();
      if (prime_valuation(ctx.field, z, t.pi, l) != 0) {
        masked = true;
        break;
      }
      long res = residue_at_prime(ctx.field, z, t.pi, l);
      long idx = residue_index(res, uc.generator, l);
      scaled = ctx.coeff.mul(scaled,
                             ctx.coeff.inv(ctx.coeff.pow(uc.value, idx)));
    }
    out.set(key, masked ? 0 : scaled);
  }
  return out;
}

bool is_strongly_stabilized(const QExpansion& f) {
  const auto& ctx = f.ctx();
  long gamma_val = ctx.field.valuation(ctx.theta_gamma);
  for (const auto& [key, val] : f.coeffs()) {
    bool deep = ctx.field.is_zero(key.mu) ||
                ctx.field.valuation(key.mu) > gamma_val;
    if (deep && val != 0) return false;
  }
  return true;
}

bool is_stabilized(const QExpansion& f,
                   const std::vector<std::string>& level_primes) {
  for (const auto& label : level_primes) {
    const TrackedPrime& v = f.ctx().tracked_prime(label);
    check(v.level, errc::config_invalid,
          "stabilization test needs level primes");
    QExpansion tf = op_Tv(f, label, s_scalar(0));
    if (!tf.is_zero_on_window()) return false;
  }
  return true;
}

bool equal_on_common_window(const QExpansion& a, const QExpansion& b) {
  for (const auto& [key, va] : a.coeffs()) {
    auto it = b.coeffs().find(key);
    if (it == b.coeffs().end()) continue;
    if (va != it->second) return false;
  }
  return true;
}

bool unit_consistent(const QExpansion& f) {
  const auto& ctx = f.ctx();
  for (const auto& [key, val] : f.coeffs()) {
    for (const auto& u : ctx.declared_units) {
      CoeffKey shifted{key.comp, ctx.field.mul(key.mu, u)};
      auto it = f.coeffs().find(shifted);
      if (it == f.coeffs().end()) continue;
      FqField::Elt expect = ctx.coeff.mul(ctx.power(u, f.m()), it->second);
      if (val != expect) return false;
    }
  }
  return true;
}

namespace {

struct EigenEngine {
  QexpContextPtr ctx;
  const EigenSpec& spec;
  std::map<CoeffKey, FqField::Elt> values;
  std::set<CoeffKey> window;

  FqField::Elt power(const QuadElem& a, const Weight& w) const {
    return ctx->power(a, w);
  }

  bool known(const CoeffKey& k, FqField::Elt& out) const {
    const QuadField& F = ctx->field;
    if (!F.is_integral(k.mu) ||
        (!F.is_zero(k.mu) && !F.is_totally_positive(k.mu))) {
      out = 0;
      return true;
    }
    auto it = values.find(k);
    if (it == values.end()) return false;
    out = it->second;
    return true;
  }

  void assign(const CoeffKey& k, FqField::Elt v, bool& changed) {
    auto it = values.find(k);
    if (it != values.end()) {
      check(it->second == v, errc::inconsistent_eigenvalues,
            "two derivation paths disagree");
      return;
    }
    if (!window.count(k)) return;  // outside the requested window
    values[k] = v;
    changed = true;
  }
};

}  // namespace

QExpansion eigen_build(QexpContextPtr ctx, const EigenSpec& spec) {
  ctx->validate();
  const QuadField& F = ctx->field;
  const FqField& C = ctx->coeff;
  long B = spec.trace_bound;
  check(F.is_zero(spec.base_mu) || F.is_totally_positive(spec.base_mu),
        errc::config_invalid, "base index must be totally positive or zero");

  EigenEngine eng{ctx, spec, {}, {}};

  auto trace_ok = [&](const QuadElem& mu) { return F.trace(mu) <= B; };

  // Forward-reachable window from the base, within the trace bound.
  CoeffKey base{spec.base_component, spec.base_mu};
  std::deque<CoeffKey> todo{base};
  eng.window.insert(base);
  bool use_ap = spec.ap.has_value();
  Weight m_plus_1 = {spec.m[0] + 1, spec.m[1] + 1};
  if (use_ap) {
    // the first-term coefficient must be invertible to propagate upward
    check(ctx->power(ctx->uniformizer, m_plus_1) != 0, errc::config_invalid,
          "a_p propagation needs an invertible leading coefficient; "
          "normalize m");
  }
  while (!todo.empty()) {
    CoeffKey cur = todo.front();
    todo.pop_front();
    auto push = [&](int comp, const QuadElem& mu) {
      if (!F.is_integral(mu)) return;
      if (!F.is_zero(mu) && !F.is_totally_positive(mu)) return;
      if (!trace_ok(mu)) return;
      CoeffKey k{comp, mu};
      if (eng.window.insert(k).second) todo.push_back(k);
    };
    for (const auto& pe : spec.eigenvalues) {
      const TrackedPrime& v = ctx->tracked_prime(pe.label);
      push(v.motion.perm[cur.comp], F.mul(v.motion.alpha[cur.comp], cur.mu));
    }
    if (use_ap) {
      // upward index of the T_p relation at cur: component s with
      // perm_x(s) = cur.comp, index alpha_x(s)^{-1} * varpi * mu
      for (size_t s = 0; s < ctx->components.size(); ++s) {
        if (ctx->x_motion.perm[s] != cur.comp) continue;
        push(static_cast<int>(s),
             F.div(F.mul(ctx->uniformizer, cur.mu), ctx->x_motion.alpha[s]));
        break;
      }
    }
  }

  if (spec.full_window) {
    auto pts = lattice_points_by_trace(F, B);
    std::vector<std::string> missing;
    for (int c = 0; c < static_cast<int>(ctx->components.size()); ++c)
      for (const auto& mu : pts)
        if (!eng.window.count({c, mu}))
          missing.push_back(ctx->components[c] + ":" + F.to_string(mu));
    if (!missing.empty())
      fail(errc::unreachable_index,
           "window indices not connected to the base: " + missing.front() +
               (missing.size() > 1 ? " (and " +
                                         std::to_string(missing.size() - 1) +
                                         " more)"
                                   : ""));
  }

  eng.values[base] = spec.base_value;

  // Fixpoint propagation of the eigen relations:
  //   a_v r(t,mu) = Nm(v) alpha^m r(perm t, alpha mu)
  //                 + d_v alpha^{-m} r(perm^{-1} t, alpha^{-1} mu)
  // (level primes drop the second term), plus the T_p relation when enabled.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& key : eng.window) {
      for (const auto& pe : spec.eigenvalues) {
        const TrackedPrime& v = ctx->tracked_prime(pe.label);
        int fc = v.motion.perm[key.comp];
        QuadElem fa = v.motion.alpha[key.comp];
        CoeffKey fwd{fc, F.mul(fa, key.mu)};
        FqField::Elt cf = C.mul(
            C.from_int(mpz_class(v.norm % F.p()).get_si()),
            eng.power(fa, spec.m));
        int bc = -1;
        QuadElem ba = F.one();
        for (size_t s = 0; s < ctx->components.size(); ++s)
          if (v.motion.perm[s] == key.comp) {
            bc = static_cast<int>(s);
            ba = F.inv(v.motion.alpha[s]);
            break;
          }
        CoeffKey bwd{bc, F.mul(ba, key.mu)};
        FqField::Elt cb =
            v.level ? 0 : C.mul(pe.d, eng.power(ba, spec.m));
        FqField::Elt rc, rf, rb = 0;
        bool kc = eng.known(key, rc), kf = eng.known(fwd, rf),
             kb = v.level ? true : eng.known(bwd, rb);
        // a r_c = cf r_f + cb r_b
        if (kc && kb && !kf) {
          FqField::Elt rhs = C.sub(C.mul(pe.a, rc), C.mul(cb, rb));
          eng.assign(fwd, C.mul(C.inv(cf), rhs), changed);
        } else if (kc && kf && !kb && cb != 0) {
          FqField::Elt rhs = C.sub(C.mul(pe.a, rc), C.mul(cf, rf));
          eng.assign(bwd, C.mul(C.inv(cb), rhs), changed);
        } else if (!kc && kf && kb && pe.a != 0) {
          FqField::Elt rhs = C.add(C.mul(cf, rf), C.mul(cb, rb));
          eng.assign(key, C.mul(C.inv(pe.a), rhs), changed);
        } else if (kc && kf && kb) {
          FqField::Elt lhs = C.mul(pe.a, rc);
          FqField::Elt rhs = C.add(C.mul(cf, rf), C.mul(cb, rb));
          check(lhs == rhs, errc::inconsistent_eigenvalues,
                "eigen relation fails at a fully determined index");
        }
      }
      if (use_ap) {
        auto [ap, dp] = *spec.ap;
        // a_p r(t,mu) = c1 alpha^{-m} r(perm^{-1}t, alpha^{-1} varpi mu)
        //               + c2 dp alpha^{m} r(perm t, alpha varpi^{-1} mu)
        mpq_class eps_q = mpq_class(F.p()) / F.norm(ctx->uniformizer);
        eps_q.canonicalize();
        FqField::Elt eps_v = C.mul(
            C.from_int(mpz_class(eps_q.get_num() % F.p()).get_si()),
            C.inv(C.from_int(mpz_class(eps_q.get_den() % F.p()).get_si())));
        FqField::Elt c1 = C.mul(eps_v, eng.power(ctx->uniformizer, m_plus_1));
        Weight k_plus_m = {spec.k[0] + spec.m[0], spec.k[1] + spec.m[1]};
        FqField::Elt c2 = eng.power(ctx->uniformizer, k_plus_m);
        int uc = -1;
        QuadElem ua = F.one();
        for (size_t s = 0; s < ctx->components.size(); ++s)
          if (ctx->x_motion.perm[s] == key.comp) {
            uc = static_cast<int>(s);
            ua = F.inv(ctx->x_motion.alpha[s]);
            break;
          }
        CoeffKey up{uc, F.mul(ua, F.mul(ctx->uniformizer, key.mu))};
        FqField::Elt cu = C.mul(c1, eng.power(ua, spec.m));
        int dc = ctx->x_motion.perm[key.comp];
        QuadElem da = ctx->x_motion.alpha[key.comp];
        CoeffKey down{dc, F.mul(da, F.div(key.mu, ctx->uniformizer))};
        FqField::Elt cd = C.mul(C.mul(c2, dp), eng.power(da, spec.m));
        FqField::Elt rc, ru, rd;
        bool kc = eng.known(key, rc), ku = eng.known(up, ru),
             kd = eng.known(down, rd);
        if (kc && kd && !ku && cu != 0) {
          FqField::Elt rhs = C.sub(C.mul(ap, rc), C.mul(cd, rd));
          eng.assign(up, C.mul(C.inv(cu), rhs), changed);
        } else if (kc && ku && kd) {
          FqField::Elt lhs = C.mul(ap, rc);
          FqField::Elt rhs = C.add(C.mul(cu, ru), C.mul(cd, rd));
          check(lhs == rhs, errc::inconsistent_eigenvalues,
                "T_p relation fails at a fully determined index");
        }
      }
    }
  }

  QExpansion out(ctx, spec.k, spec.m);
  std::vector<std::string> unknown;
  for (const auto& key : eng.window) {
    auto it = eng.values.find(key);
    if (it == eng.values.end()) {
      unknown.push_back(ctx->components[key.comp] + ":" + F.to_string(key.mu));
      continue;
    }
    out.set(key, it->second);
  }
  if (!unknown.empty())
    fail(errc::unreachable_index,
         "indices in the window could not be derived: " + unknown.front());
  return out;
}

}  // namespace hmf
