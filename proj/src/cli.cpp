#include "hmf/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "hmf/kisin.hpp"
#include "hmf/local_galois.hpp"
#include "hmf/qexp_json.hpp"
#include "hmf/selftest.hpp"
#include "hmf/weight_lattice.hpp"

namespace hmf {

namespace {

using nlohmann::json;

std::vector<long> parse_vector(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  check(!out.empty(), errc::config_invalid, "empty vector argument");
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), errc::config_invalid, "cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    fail(errc::config_invalid, std::string("bad JSON in ") + path + ": " +
                                   ex.what());
  }
  return j;
}

EmbeddingSet set_from_options(const std::string& config_path, long p,
                              bool ram_quad, bool inert_quad) {
  if (!config_path.empty()) {
    json j = load_json_file(config_path);
    check(j.contains("primes"), errc::config_invalid,
          "config needs a primes list");
    std::vector<PrimeDatum> primes;
    for (const auto& pj : j["primes"]) {
      PrimeDatum d;
      d.id = pj.value("id", "");
      d.p = pj.at("p").get<long>();
      d.f = pj.value("f", 1L);
      d.e = pj.value("e", 1L);
      primes.push_back(std::move(d));
    }
    return EmbeddingSet::build(primes);
  }
  check(p > 0, errc::config_invalid, "need --config or --p");
  if (inert_quad) return EmbeddingSet::build({{"p1", p, 2, 1}});
  check(ram_quad, errc::config_invalid,
        "without --config, pass --ram-quad or --inert-quad");
  return EmbeddingSet::build({{"p1", p, 1, 2}});
}

json rational_vector_json(const std::vector<mpq_class>& r) {
  json out = json::array();
  for (const auto& q : r) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p())
      out.push_back(q.get_num().get_si());
    else
      out.push_back(q.get_str());
  }
  return out;
}

json character_class_json(const CharacterClass& c) {
  json out = json::array();
  for (size_t i = 0; i < c.exponents.size(); ++i)
    out.push_back({{"exponent", c.exponents[i].get_si()},
                   {"modulus", c.moduli[i].get_si()}});
  return out;
}

struct CommonLattice {
  std::string config;
  long p = 0;
  bool ram_quad = false;
  bool inert_quad = false;
  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "configuration JSON file");
    cmd->add_option("--p", p, "rational prime");
    cmd->add_flag("--ram-quad", ram_quad, "ramified quadratic configuration");
    cmd->add_flag("--inert-quad", inert_quad, "inert quadratic configuration");
  }
  EmbeddingSet build() const {
    return set_from_options(config, p, ram_quad, inert_quad);
  }
};

void emit(const json& j) { std::cout << j.dump() << "\n"; }

int dispatch(int argc, char** argv) {
  CLI::App app{"computable weight combinatorics for mod-p Hilbert modular "
               "forms over ramified real quadratic fields"};
  app.require_subcommand(1);

  // ---- cones ----
  auto* cones = app.add_subcommand("cones", "minimal-cone membership");
  CommonLattice cones_cfg;
  cones_cfg.attach(cones);
  std::string cones_weight;
  bool cones_positive = false;
  cones->add_option("--weight", cones_weight, "comma-separated weight")
      ->required();
  cones->add_flag("--positive", cones_positive, "require strict positivity");

  // ---- decompose ----
  auto* dec = app.add_subcommand("decompose",
                                 "solve for the weight-shifter coordinates");
  CommonLattice dec_cfg;
  dec_cfg.attach(dec);
  std::string dec_hi, dec_lo;
  dec->add_option("--hi", dec_hi, "upper weight")->required();
  dec->add_option("--lo", dec_lo, "lower weight")->required();

  // ---- lambda ----
  auto* lam = app.add_subcommand("lambda", "character classes of weights");
  CommonLattice lam_cfg;
  lam_cfg.attach(lam);
  std::string lam_m, lam_n;
  lam->add_option("--m", lam_m, "first weight")->required();
  lam->add_option("--n", lam_n, "second weight");

  // ---- pw1 ----
  auto* pw1 = app.add_subcommand("pw1", "partial-weight-one lift decision");
  long pw1_p = 0, pw1_w = 0;
  std::string pw1_rep, pw1_m;
  pw1->add_option("--p", pw1_p, "rational prime")->required();
  pw1->add_option("--rep", pw1_rep, "local shape")->required();
  pw1->add_option("--w", pw1_w, "partial weight")->required();
  pw1->add_option("--m", pw1_m, "twist residue (a vector is summed mod p-1)")
      ->required();

  // ---- theta-cycle ----
  auto* tc = app.add_subcommand("theta-cycle", "lift table over twist classes");
  long tc_p = 0;
  std::string tc_rep;
  tc->add_option("--p", tc_p, "rational prime")->required();
  tc->add_option("--rep", tc_rep, "local shape")->required();

  // ---- weight2 ----
  auto* w2 = app.add_subcommand("weight2", "membership of det^a Sym^b");
  long w2_p = 0, w2_a = 0, w2_b = 0;
  std::string w2_rep;
  w2->add_option("--p", w2_p, "rational prime")->required();
  w2->add_option("--rep", w2_rep, "local shape")->required();
  w2->add_option("--a", w2_a, "determinant exponent")->required();
  w2->add_option("--b", w2_b, "symmetric power")->required();

  // ---- kisin ----
  auto* kis = app.add_subcommand("kisin", "rank-two reduction shapes");
  kis->require_subcommand(1);
  auto* ked = kis->add_subcommand("ext-dim", "extension class dimension");
  long ked_p = 0, ked_q = 0, ked_s = 0, ked_t = 0, ked_a = 1, ked_b = 1;
  ked->add_option("--p", ked_p, "characteristic")->required();
  ked->add_option("--q", ked_q, "coefficient field size");
  ked->add_option("--s", ked_s)->required();
  ked->add_option("--t", ked_t)->required();
  ked->add_option("--a", ked_a)->required();
  ked->add_option("--b", ked_b)->required();
  auto* kcm = kis->add_subcommand("check-morphism",
                                  "verify an explicit phi-morphism family");
  std::string kcm_case;
  long kcm_q = 0, kcm_a = 1, kcm_b = 1, kcm_c = 0, kcm_d = -1;
  kcm->add_option("--case", kcm_case, "w=p or w=p+1")->required();
  kcm->add_option("--q", kcm_q, "coefficient field size")->required();
  kcm->add_option("--a", kcm_a)->required();
  kcm->add_option("--b", kcm_b)->required();
  kcm->add_option("--c", kcm_c)->required();
  kcm->add_option("--d", kcm_d, "extra coefficient (units equal)");

  // ---- qexp ----
  auto* qx = app.add_subcommand("qexp", "coefficient-system operators");
  qx->require_subcommand(1);
  auto* qap = qx->add_subcommand("apply", "apply an operator to a form file");
  std::string qap_op, qap_form, qap_config, qap_prime, qap_char;
  std::string qap_mode = "plain", qap_hasse_mode = "H", qap_constants;
  long qap_sv = 1, qap_sigma = 2;
  qap->add_option("--op", qap_op, "theta|vp|tp|tv|hasse|twist")->required();
  qap->add_option("--form", qap_form, "form JSON file")->required();
  qap->add_option("--config", qap_config, "context JSON file");
  qap->add_option("--prime", qap_prime, "tracked prime label (tv)");
  qap->add_option("--sv", qap_sv, "scalar S-eigenvalue (tv, tp)");
  qap->add_option("--character", qap_char, "declared character (twist)");
  qap->add_option("--mode", qap_mode, "plain|u1 (twist)");
  qap->add_option("--sigma", qap_sigma, "embedding index 1|2 (hasse)");
  qap->add_option("--hasse-mode", qap_hasse_mode, "H|G");
  qap->add_option("--constants", qap_constants,
                  "comma-separated per-component constants (hasse)");
  auto* qeb = qx->add_subcommand("eigenbuild",
                                 "build a coefficient system from eigenvalues");
  std::string qeb_config, qeb_spec;
  qeb->add_option("--config", qeb_config, "context JSON file")->required();
  qeb->add_option("--spec", qeb_spec, "eigen spec JSON file")->required();

  // ---- selftest ----
  auto* st = app.add_subcommand("selftest", "run the acceptance suite");
  uint64_t st_seed = 7;
  st->add_option("--seed", st_seed, "seed for the randomized suites");

  app.parse(argc, argv);

  if (*cones) {
    auto set = cones_cfg.build();
    Weight k = weight_from(set, parse_vector(cones_weight));
    bool in_cone = in_min_cone(set, k, cones_positive);
    emit({{"in_cone", in_cone}, {"positive", cones_positive}});
    return 0;
  }
  if (*dec) {
    auto set = dec_cfg.build();
    Weight hi = weight_from(set, parse_vector(dec_hi));
    Weight lo = weight_from(set, parse_vector(dec_lo));
    auto d = hasse_compare(set, hi, lo);
    emit({{"comparable", d.comparable()},
          {"r", rational_vector_json(d.r)},
          {"integral", d.integral},
          {"hasse_le", d.hasse_le()}});
    return 0;
  }
  if (*lam) {
    auto set = lam_cfg.build();
    Weight m = weight_from(set, parse_vector(lam_m));
    json out;
    out["class_m"] = character_class_json(lambda_class(set, m));
    if (!lam_n.empty()) {
      Weight n = weight_from(set, parse_vector(lam_n));
      out["class_n"] = character_class_json(lambda_class(set, n));
      out["equal"] = lambda_equal(set, m, n);
    }
    emit(out);
    return 0;
  }
  if (*pw1) {
    auto rep = parse_rep(pw1_p, pw1_rep);
    long m_total = 0;
    for (long part : parse_vector(pw1_m)) m_total += part;
    bool lift = pw1_lift_decision(pw1_p, rep, pw1_w, m_total);
    emit({{"lift", lift}});
    return 0;
  }
  if (*tc) {
    auto rep = parse_rep(tc_p, tc_rep);
    std::cout << "m_class,w_set\n";
    for (const auto& [m, ws] : theta_cycle_table(tc_p, rep)) {
      std::cout << m << ",";
      for (size_t i = 0; i < ws.size(); ++i)
        std::cout << (i ? " " : "") << ws[i];
      std::cout << "\n";
    }
    return 0;
  }
  if (*w2) {
    auto rep = parse_rep(w2_p, w2_rep);
    const char* verdict =
        membership_name(weight2_membership(w2_p, rep, w2_a, w2_b));
    emit({{"membership", verdict}});
    return 0;
  }
  if (*ked) {
    if (ked_q == 0) ked_q = ked_p;
    int deg = 0;
    for (long t = ked_q; t > 1; t /= ked_p) {
      check(t % ked_p == 0, errc::config_invalid, "q must be a power of p");
      ++deg;
    }
    FqField F(ked_p, deg == 0 ? 1 : deg);
    int dim = ext_dimension(F, ked_s, ked_t,
                            static_cast<FqField::Elt>(ked_a),
                            static_cast<FqField::Elt>(ked_b));
    long count = 1;
    for (int i = 0; i < dim; ++i) count *= F.q();
    emit({{"dimension", dim}, {"class_count", count}});
    return 0;
  }
  if (*kcm) {
    long p = 2;
    // q = p^k: recover the characteristic as the smallest prime factor
    for (p = 2; p * p <= kcm_q; ++p)
      if (kcm_q % p == 0) break;
    if (kcm_q % p != 0) p = kcm_q;
    int deg = 0;
    for (long t = kcm_q; t > 1; t /= p) ++deg;
    FqField F(p, deg);
    std::optional<FqField::Elt> d;
    if (kcm_d >= 0) d = static_cast<FqField::Elt>(kcm_d);
    long N = p * (p + 1) + 4;
    auto make_case = [&]() -> MorphismCase {
      FqField::Elt a = static_cast<FqField::Elt>(kcm_a);
      FqField::Elt b = static_cast<FqField::Elt>(kcm_b);
      FqField::Elt c = static_cast<FqField::Elt>(kcm_c);
      if (kcm_case == "w=p") return morphism_family_wp(F, a, b, c, d, N);
      if (kcm_case == "w=p+1") return morphism_family_wp1(F, a, b, c, d, N);
      fail(errc::config_invalid, "case must be w=p or w=p+1");
    };
    MorphismCase mc = make_case();
    bool pass = check_phi_morphism(mc.map, mc.src, mc.dst, N);
    json out = {{"case", kcm_case}, {"pass", pass}};
    if (kcm_c != 0) {
      KisinMorphism broken = mc.map;
      broken.m01 = TruncatedSeries(F, N);
      out["perturbed_fails"] = !check_phi_morphism(broken, mc.src, mc.dst, N);
    }
    emit(out);
    return 0;
  }
  if (*qap) {
    json fj = load_json_file(qap_form);
    QexpContextPtr ctx = qap_config.empty()
                             ? context_from_form_json(fj)
                             : context_from_json(load_json_file(qap_config));
    QExpansion f = form_from_json(ctx, fj);
    QExpansion out = f;
    if (qap_op == "theta") {
      out = op_Theta(f);
    } else if (qap_op == "vp") {
      out = op_Vp(f);
    } else if (qap_op == "tp") {
      out = op_Tp(f, s_scalar(static_cast<FqField::Elt>(qap_sv)));
    } else if (qap_op == "tv") {
      check(!qap_prime.empty(), errc::config_invalid, "tv needs --prime");
      out = op_Tv(f, qap_prime, s_scalar(static_cast<FqField::Elt>(qap_sv)));
    } else if (qap_op == "hasse") {
      check(qap_sigma == 1 || qap_sigma == 2, errc::config_invalid,
            "--sigma must be 1 or 2");
      std::vector<FqField::Elt> consts(ctx->components.size(), 1);
      if (!qap_constants.empty()) {
        auto vals = parse_vector(qap_constants);
        check(vals.size() == consts.size(), errc::config_invalid,
              "need one constant per component");
        for (size_t i = 0; i < vals.size(); ++i)
          consts[i] = static_cast<FqField::Elt>(vals[i]);
      }
      out = mul_Hasse(f, ctx->ramified_set.at(qap_sigma - 1), consts,
                      qap_hasse_mode == "G" ? HasseMode::G : HasseMode::H);
    } else if (qap_op == "twist") {
      check(!qap_char.empty(), errc::config_invalid, "twist needs --character");
      out = twist(f, qap_char,
                  qap_mode == "u1" ? TwistMode::u1 : TwistMode::plain);
    } else {
      fail(errc::config_invalid, "unknown operator: " + qap_op);
    }
    emit(form_to_json(out));
    return 0;
  }
  if (*qeb) {
    QexpContextPtr ctx = context_from_json(load_json_file(qeb_config));
    EigenSpec spec = eigenspec_from_json(*ctx, load_json_file(qeb_spec));
    emit(form_to_json(eigen_build(ctx, spec)));
    return 0;
  }
  if (*st) {
    auto results = run_acceptance(st_seed, &std::cout);
    int passed = 0;
    for (const auto& r : results)
      if (r.pass) ++passed;
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    return all_passed(results) ? 0 : 1;
  }
  fail(errc::unknown_subcommand, "no subcommand given");
}

}  // namespace

int run_cli(int argc, char** argv) {
  const char* log_env = std::getenv("HMF_LOG");
  auto start = std::chrono::steady_clock::now();
  auto report = [&](int code) {
    if (log_env && *log_env) {
      double secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
      std::cerr << "hmf: exit " << code << " after " << secs << "s\n";
    }
    return code;
  };
  try {
    return report(dispatch(argc, argv));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return report(0);  // --help
    std::cerr << nlohmann::json(
                     {{"error",
                       {{"code", "UsageError"}, {"message", e.what()}}}})
                     .dump()
              << "\n";
    return report(2);
  } catch (const error& e) {
    std::cerr << nlohmann::json(
                     {{"error",
                       {{"code", errc_name(e.code())},
                        {"message", e.what()}}}})
                     .dump()
              << "\n";
    return report((e.code() == errc::config_invalid ||
                   e.code() == errc::unknown_subcommand)
                      ? 2
                      : 1);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json(
                     {{"error",
                       {{"code", "Internal"}, {"message", e.what()}}}})
                     .dump()
              << "\n";
    return report(1);
  }
}

}  // namespace hmf
