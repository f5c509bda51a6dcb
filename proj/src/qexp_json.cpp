#include "hmf/qexp_json.hpp"

#include <set>

namespace hmf {

using nlohmann::json;

static QuadElem elem_from_json(const QuadField& F, const json& j) {
  check(j.is_array() && j.size() == 2, errc::config_invalid,
        "field elements are [rational-part, omega-part] pairs");
  auto part = [&](const json& v) {
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (v.is_string()) {
      mpq_class q(v.get<std::string>());
      q.canonicalize();
      return q;
    }
    fail(errc::config_invalid, "element parts must be integers or strings");
  };
  return F.from_pair(part(j[0]), part(j[1]));
}

static json elem_to_json(const QuadElem& e) {
  auto part = [](const mpq_class& q) -> json {
    if (q.get_den() == 1) {
      if (q.get_num().fits_slong_p()) return q.get_num().get_si();
      return q.get_num().get_str();
    }
    return q.get_str();
  };
  return json::array({part(e.x), part(e.y)});
}

static Motion motion_from_json(const QexpContext& ctx, const json& j,
                               bool identity_default) {
  Motion m;
  size_t n = ctx.components.size();
  if (j.is_null() && identity_default) {
    for (size_t i = 0; i < n; ++i) {
      m.perm.push_back(static_cast<int>(i));
      m.alpha.push_back(ctx.field.one());
    }
    return m;
  }
  check(j.contains("perm") && j.contains("alpha"), errc::config_invalid,
        "motions need perm and alpha tables");
  m.perm.resize(n);
  m.alpha.assign(n, ctx.field.one());
  for (size_t s = 0; s < n; ++s) {
    const std::string& label = ctx.components[s];
    check(j["perm"].contains(label), errc::config_invalid,
          "motion perm missing component " + label);
    m.perm[s] = ctx.component_index(j["perm"][label].get<std::string>());
    check(j["alpha"].contains(label), errc::config_invalid,
          "motion alpha missing component " + label);
    m.alpha[s] = elem_from_json(ctx.field, j["alpha"][label]);
  }
  return m;
}

QexpContextPtr context_from_json(const json& j) {
  check(j.contains("field"), errc::config_invalid, "config needs a field");
  long D = j["field"].at("D").get<long>();
  long p = j["field"].at("p").get<long>();
  long q = p;
  if (j.contains("coeff_field")) q = j["coeff_field"].value("q", p);
  int k = 0;
  for (long t = q; t > 1; t /= p) {
    check(t % p == 0, errc::config_invalid, "q must be a power of p");
    ++k;
  }
  if (k == 0) k = 1;
  auto ctx = std::make_shared<QexpContext>(QuadField(D, p), FqField(p, k));
  if (j.contains("components"))
    ctx->components = j["components"].get<std::vector<std::string>>();
  else
    ctx->components = {"c0"};
  check(j.contains("uniformizer"), errc::config_invalid,
        "config needs a uniformizer");
  ctx->uniformizer = elem_from_json(ctx->field, j["uniformizer"]);
  ctx->x_motion = motion_from_json(
      *ctx, j.contains("x_action") ? j["x_action"] : json(), true);
  if (j.contains("theta_gamma"))
    ctx->theta_gamma = elem_from_json(ctx->field, j["theta_gamma"]);
  if (j.contains("c_normalizer"))
    ctx->c_normalizer = elem_from_json(ctx->field, j["c_normalizer"]);
  if (j.contains("tracked_primes")) {
    for (const auto& tj : j["tracked_primes"]) {
      TrackedPrime t;
      t.label = tj.at("label").get<std::string>();
      t.pi = elem_from_json(ctx->field, tj.at("pi"));
      t.norm = mpz_class(tj.value("norm", 0L));
      if (t.norm == 0) {
        mpq_class nm = abs(ctx->field.norm(t.pi));
        t.norm = nm.get_num();
      }
      t.level = tj.value("level", false);
      check(tj.contains("perm") == tj.contains("alpha"), errc::config_invalid,
            "tracked prime motions need both perm and alpha (or neither)");
      if (tj.contains("perm")) {
        t.motion = motion_from_json(
            *ctx, json({{"perm", tj.at("perm")}, {"alpha", tj.at("alpha")}}),
            false);
      } else {
        // Principal prime with a narrowly trivial class: the label motion is
        // trivial and the index multiplier is the generator itself.
        for (size_t s = 0; s < ctx->components.size(); ++s) {
          t.motion.perm.push_back(static_cast<int>(s));
          t.motion.alpha.push_back(t.pi);
        }
      }
      ctx->tracked.push_back(std::move(t));
    }
  }
  if (j.contains("units"))
    for (const auto& uj : j["units"])
      ctx->declared_units.push_back(elem_from_json(ctx->field, uj));
  if (j.contains("characters")) {
    for (const auto& cj : j["characters"]) {
      DeclaredCharacter chi;
      chi.name = cj.at("name").get<std::string>();
      chi.ell = cj.value("ell", std::vector<long>{0, 0});
      chi.component_values.assign(ctx->components.size(), 1);
      if (cj.contains("values"))
        for (size_t s = 0; s < ctx->components.size(); ++s)
          if (cj["values"].contains(ctx->components[s]))
            chi.component_values[s] = static_cast<FqField::Elt>(
                cj["values"][ctx->components[s]].get<long>());
      if (cj.contains("prime_values"))
        for (auto it = cj["prime_values"].begin();
             it != cj["prime_values"].end(); ++it)
          chi.prime_values[it.key()] =
              static_cast<FqField::Elt>(it.value().get<long>());
      if (cj.contains("conductor"))
        for (const auto& uj : cj["conductor"])
          chi.conductor.push_back(
              {uj.at("prime").get<std::string>(), uj.at("generator").get<long>(),
               static_cast<FqField::Elt>(uj.at("value").get<long>())});
      ctx->characters.push_back(std::move(chi));
    }
  }
  ctx->validate();
  return ctx;
}

QexpContextPtr context_from_form_json(const json& j) {
  json cfg;
  cfg["field"] = j.at("field");
  if (j.contains("coeff_field")) cfg["coeff_field"] = j["coeff_field"];
  std::set<std::string> comps;
  if (j.contains("coeffs"))
    for (const auto& cj : j["coeffs"]) comps.insert(cj.at("t").get<std::string>());
  if (comps.empty()) comps.insert("c0");
  cfg["components"] = std::vector<std::string>(comps.begin(), comps.end());
  // pick a default uniformizer for the shipped fields
  long D = j["field"].at("D").get<long>();
  long p = j["field"].at("p").get<long>();
  QuadField F(D, p);
  QuadElem cand = F.from_pair(mpq_class(0), mpq_class(1));  // omega
  if (!(F.is_totally_positive(cand) && F.valuation(cand) == 1)) {
    bool found = false;
    for (long a = 1; a <= 4 * D && !found; ++a)
      for (long b = 1; b <= 2 * D && !found; ++b) {
        cand = F.from_pair(mpq_class(a), mpq_class(b));
        if (F.is_totally_positive(cand) && F.valuation(cand) == 1) found = true;
      }
    check(found, errc::config_invalid, "no default uniformizer found");
  }
  cfg["uniformizer"] = elem_to_json(cand);
  return context_from_json(cfg);
}

static Weight weight_from_json(const json& j) {
  auto v = j.get<std::vector<long>>();
  check(v.size() == 2, errc::config_invalid, "weights have 2 coordinates");
  return {mpz_class(v[0]), mpz_class(v[1])};
}

QExpansion form_from_json(QexpContextPtr ctx, const json& j) {
  check(j.contains("weight"), errc::config_invalid, "form needs a weight");
  Weight k = weight_from_json(j["weight"].at("k"));
  Weight m = weight_from_json(j["weight"].at("m"));
  bool explicit_window =
      j.contains("window") && j["window"].value("explicit", false);
  QExpansion f = explicit_window
                     ? QExpansion(ctx, k, m)
                     : blank_form(ctx, k, m,
                                  j.contains("window")
                                      ? j["window"].value("trace_bound", 20L)
                                      : 20L);
  if (j.contains("coeffs")) {
    for (const auto& cj : j["coeffs"]) {
      int comp = ctx->component_index(cj.at("t").get<std::string>());
      QuadElem mu = elem_from_json(ctx->field, cj.at("mu"));
      check(ctx->field.is_integral(mu) &&
                (ctx->field.is_zero(mu) || ctx->field.is_totally_positive(mu)),
            errc::config_invalid,
            "coefficient indices must be integral and totally positive "
            "or zero");
      f.set({comp, mu}, static_cast<FqField::Elt>(cj.at("val").get<long>()));
    }
  }
  return f;
}

json form_to_json(const QExpansion& f) {
  const auto& ctx = f.ctx();
  json j;
  j["field"] = {{"D", ctx.field.D()}, {"p", ctx.field.p()}};
  j["coeff_field"] = {{"q", ctx.coeff.q()}};
  j["weight"] = {{"k", {f.k()[0].get_si(), f.k()[1].get_si()}},
                 {"m", {f.m()[0].get_si(), f.m()[1].get_si()}}};
  j["window"] = {{"explicit", true}};
  json coeffs = json::array();
  for (const auto& [key, val] : f.coeffs()) {
    json cj;
    cj["t"] = ctx.components[key.comp];
    cj["mu"] = elem_to_json(key.mu);
    cj["val"] = static_cast<long>(val);
    coeffs.push_back(std::move(cj));
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

EigenSpec eigenspec_from_json(const QexpContext& ctx, const json& j) {
  EigenSpec spec;
  spec.k = weight_from_json(j.at("weight").at("k"));
  spec.m = weight_from_json(j.at("weight").at("m"));
  const auto& bj = j.at("base");
  spec.base_component = ctx.component_index(bj.at("t").get<std::string>());
  spec.base_mu = elem_from_json(ctx.field, bj.at("mu"));
  spec.base_value = static_cast<FqField::Elt>(bj.value("value", 1L));
  for (const auto& ej : j.at("eigenvalues")) {
    EigenSpec::PrimeEigen pe;
    pe.label = ej.at("label").get<std::string>();
    pe.a = static_cast<FqField::Elt>(ej.at("a").get<long>());
    pe.d = static_cast<FqField::Elt>(ej.value("d", 1L));
    spec.eigenvalues.push_back(std::move(pe));
  }
  if (j.contains("ap") && !j["ap"].is_null())
    spec.ap = {static_cast<FqField::Elt>(j["ap"].at("a").get<long>()),
               static_cast<FqField::Elt>(j["ap"].value("delta", 1L))};
  if (j.contains("window")) {
    spec.trace_bound = j["window"].value("trace_bound", 20L);
    spec.full_window = j["window"].value("full", false);
  }
  return spec;
}

}  // namespace hmf
