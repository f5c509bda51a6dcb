#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>
#include <sstream>

#include "hmf/kisin.hpp"
#include "hmf/local_galois.hpp"
#include "hmf/qexp_json.hpp"
#include "hmf/selftest.hpp"
#include "hmf/weight_lattice.hpp"

namespace py = pybind11;
using namespace hmf;

namespace {

Weight to_weight(const EmbeddingSet& set, const std::vector<long>& v) {
  return weight_from(set, v);
}

EmbeddingSet set_from_tuples(
    const std::vector<std::tuple<long, long, long>>& primes) {
  std::vector<PrimeDatum> data;
  for (auto [p, f, e] : primes) data.push_back({"", p, f, e});
  return EmbeddingSet::build(data);
}

std::vector<std::string> rationals_to_strings(
    const std::vector<mpq_class>& r) {
  std::vector<std::string> out;
  for (const auto& q : r) out.push_back(q.get_str());
  return out;
}

struct PyForm {
  QExpansion form;
};

FqField field_for(long p, long q) {
  int deg = 0;
  for (long t = q; t > 1; t /= p) {
    if (t % p != 0) fail(errc::config_invalid, "q must be a power of p");
    ++deg;
  }
  return FqField(p, deg == 0 ? 1 : deg);
}

}  // namespace

PYBIND11_MODULE(_hmf, m) {
  m.doc() = "weight-cone, local-shape, reduction-shape and coefficient-system "
            "calculators for mod-p Hilbert modular forms over ramified real "
            "quadratic fields";

  py::register_exception<error>(m, "HmfError");

  py::class_<EmbeddingIndex>(m, "EmbeddingIndex")
      .def_readonly("prime", &EmbeddingIndex::prime)
      .def_readonly("i", &EmbeddingIndex::i)
      .def_readonly("j", &EmbeddingIndex::j)
      .def("__repr__", [](const EmbeddingIndex& s) {
        std::ostringstream os;
        os << "EmbeddingIndex(prime=" << s.prime << ", i=" << s.i
           << ", j=" << s.j << ")";
        return os.str();
      });

  py::class_<EmbeddingSet>(m, "EmbeddingSet")
      .def(py::init(&set_from_tuples), py::arg("primes"),
           "build from a list of (p, f, e) tuples")
      .def_property_readonly("p", &EmbeddingSet::p)
      .def_property_readonly("size", &EmbeddingSet::size)
      .def("embedding", &EmbeddingSet::at)
      .def("phi",
           [](const EmbeddingSet& set, const EmbeddingIndex& s, bool forward) {
             return set.phi(s, forward ? PhiDirection::forward
                                       : PhiDirection::inverse);
           },
           py::arg("sigma"), py::arg("forward") = true)
      .def("nu", &EmbeddingSet::nu);

  m.def("hasse_weight",
        [](const EmbeddingSet& set, long pos) {
          Weight h = hasse_weight(set, set.at(pos));
          std::vector<long> out;
          for (const auto& c : h) out.push_back(c.get_si());
          return out;
        },
        py::arg("set"), py::arg("position"));

  m.def("lattice_index",
        [](const EmbeddingSet& set) { return lattice_index(set).get_si(); });

  m.def("in_min_cone",
        [](const EmbeddingSet& set, const std::vector<long>& k, bool positive) {
          return in_min_cone(set, to_weight(set, k), positive);
        },
        py::arg("set"), py::arg("k"), py::arg("positive") = false);

  m.def("hasse_compare",
        [](const EmbeddingSet& set, const std::vector<long>& hi,
           const std::vector<long>& lo) {
          auto d = hasse_compare(set, to_weight(set, hi), to_weight(set, lo));
          py::dict out;
          out["comparable"] = d.comparable();
          out["integral"] = d.integral;
          out["hasse_le"] = d.hasse_le();
          out["r"] = rationals_to_strings(d.r);
          return out;
        });

  m.def("lambda_class",
        [](const EmbeddingSet& set, const std::vector<long>& mvec) {
          auto c = lambda_class(set, to_weight(set, mvec));
          std::vector<std::pair<long, long>> out;
          for (size_t i = 0; i < c.exponents.size(); ++i)
            out.push_back({c.exponents[i].get_si(), c.moduli[i].get_si()});
          return out;
        });

  m.def("lambda_equal",
        [](const EmbeddingSet& set, const std::vector<long>& a,
           const std::vector<long>& b) {
          return lambda_equal(set, to_weight(set, a), to_weight(set, b));
        });

  m.def("is_irreducible_weight",
        [](const EmbeddingSet& set, const std::vector<long>& k) {
          return is_irreducible_weight(set, to_weight(set, k));
        });

  m.def("pw1_lift_decision",
        [](long p, const std::string& rep, long w, long mm) {
          return pw1_lift_decision(p, parse_rep(p, rep), w, mm);
        },
        py::arg("p"), py::arg("rep"), py::arg("w"), py::arg("m"));

  m.def("theta_cycle_table",
        [](long p, const std::string& rep) {
          return theta_cycle_table(p, parse_rep(p, rep));
        });

  m.def("weight2_membership",
        [](long p, const std::string& rep, long a, long b) {
          return std::string(
              membership_name(weight2_membership(p, parse_rep(p, rep), a, b)));
        });

  m.def("inertial_pairs",
        [](long p, long f, long e, const std::vector<std::vector<long>>& r) {
          auto pairs = inertial_pairs(make_quado_bt({p, f, e}, r));
          return std::vector<std::pair<long, long>>(pairs.begin(),
                                                    pairs.end());
        });

  m.def("degeneracy",
        [](long p, long f, long e, const std::vector<std::vector<long>>& r,
           long i) { return degeneracy(make_quado_bt({p, f, e}, r), i); });

  m.def("vchi_dim", &vchi_dim, py::arg("chi_exponent"), py::arg("modulus"),
        py::arg("chi_trivial_globally"));

  m.def("ext_dimension",
        [](long p, long q, long s, long t, long a, long b) {
          FqField F = field_for(p, q);
          return ext_dimension(F, s, t, static_cast<FqField::Elt>(a),
                               static_cast<FqField::Elt>(b));
        },
        py::arg("p"), py::arg("q"), py::arg("s"), py::arg("t"), py::arg("a"),
        py::arg("b"));

  m.def("check_morphism_family",
        [](const std::string& which, long p, long q, long a, long b, long c,
           std::optional<long> d) {
          FqField F = field_for(p, q);
          long N = p * (p + 1) + 4;
          std::optional<FqField::Elt> dd;
          if (d) dd = static_cast<FqField::Elt>(*d);
          MorphismCase mc =
              which == "w=p"
                  ? morphism_family_wp(F, static_cast<FqField::Elt>(a),
                                       static_cast<FqField::Elt>(b),
                                       static_cast<FqField::Elt>(c), dd, N)
                  : morphism_family_wp1(F, static_cast<FqField::Elt>(a),
                                        static_cast<FqField::Elt>(b),
                                        static_cast<FqField::Elt>(c), dd, N);
          return check_phi_morphism(mc.map, mc.src, mc.dst, N);
        },
        py::arg("which"), py::arg("p"), py::arg("q"), py::arg("a"),
        py::arg("b"), py::arg("c"), py::arg("d") = std::nullopt);

  m.def("allowed_st", &allowed_st, py::arg("r"), py::arg("eps"), py::arg("p"));
  m.def("y_support", &y_support, py::arg("s"), py::arg("t"), py::arg("r"),
        py::arg("exceptional") = std::nullopt);

  // Coefficient systems travel through JSON strings; the handle keeps the
  // context alive.
  py::class_<PyForm>(m, "Form")
      .def_property_readonly("json",
                             [](const PyForm& f) {
                               return form_to_json(f.form).dump();
                             })
      .def_property_readonly("is_zero",
                             [](const PyForm& f) {
                               return f.form.is_zero_on_window();
                             })
      .def_property_readonly("weight", [](const PyForm& f) {
        std::vector<long> k{f.form.k()[0].get_si(), f.form.k()[1].get_si()};
        std::vector<long> mm{f.form.m()[0].get_si(), f.form.m()[1].get_si()};
        return std::make_pair(k, mm);
      });

  m.def("load_form",
        [](const std::string& form_json, const std::string& config_json) {
          auto fj = nlohmann::json::parse(form_json);
          QexpContextPtr ctx = config_json.empty()
                                   ? context_from_form_json(fj)
                                   : context_from_json(
                                         nlohmann::json::parse(config_json));
          return PyForm{form_from_json(ctx, fj)};
        },
        py::arg("form_json"), py::arg("config_json") = std::string());

  m.def("apply_op",
        [](const PyForm& f, const std::string& op, const std::string& prime,
           long sv) {
          if (op == "theta") return PyForm{op_Theta(f.form)};
          if (op == "vp") return PyForm{op_Vp(f.form)};
          if (op == "tp")
            return PyForm{op_Tp(f.form,
                                s_scalar(static_cast<FqField::Elt>(sv)))};
          if (op == "tv")
            return PyForm{op_Tv(f.form, prime,
                                s_scalar(static_cast<FqField::Elt>(sv)))};
          fail(errc::config_invalid, "unknown operator: " + op);
        },
        py::arg("form"), py::arg("op"), py::arg("prime") = std::string(),
        py::arg("sv") = 1);

  m.def("apply_twist",
        [](const PyForm& f, const std::string& character, bool masked) {
          return PyForm{twist(f.form, character,
                              masked ? TwistMode::u1 : TwistMode::plain)};
        },
        py::arg("form"), py::arg("character"), py::arg("masked") = false);

  m.def("apply_hasse",
        [](const PyForm& f, int sigma, const std::vector<long>& constants,
           const std::string& mode) {
          const auto& ctx = f.form.ctx();
          check(sigma == 1 || sigma == 2, errc::config_invalid,
                "sigma must be 1 or 2");
          std::vector<FqField::Elt> consts;
          if (constants.empty())
            consts.assign(ctx.components.size(), 1);
          else
            for (long c : constants)
              consts.push_back(static_cast<FqField::Elt>(c));
          return PyForm{mul_Hasse(f.form, ctx.ramified_set.at(sigma - 1),
                                  consts,
                                  mode == "G" ? HasseMode::G : HasseMode::H)};
        },
        py::arg("form"), py::arg("sigma"),
        py::arg("constants") = std::vector<long>{}, py::arg("mode") = "H");

  m.def("is_strongly_stabilized",
        [](const PyForm& f) { return is_strongly_stabilized(f.form); });
  m.def("is_stabilized",
        [](const PyForm& f, const std::vector<std::string>& level_primes) {
          return is_stabilized(f.form, level_primes);
        });
  m.def("forms_equal_on_common_window",
        [](const PyForm& a, const PyForm& b) {
          return equal_on_common_window(a.form, b.form);
        });

  m.def("eigen_build_json",
        [](const std::string& config_json, const std::string& spec_json) {
          QexpContextPtr ctx =
              context_from_json(nlohmann::json::parse(config_json));
          EigenSpec spec =
              eigenspec_from_json(*ctx, nlohmann::json::parse(spec_json));
          return PyForm{eigen_build(ctx, spec)};
        });

  m.def("demo_config", [](long D) {
    if (D == 3) return std::string(kDemoConfigD3);
    if (D == 5) return std::string(kDemoConfigD5);
    if (D == 2) return std::string(kDemoConfigD2);
    fail(errc::config_invalid, "demo configs exist for D in {2, 3, 5}");
  });

  m.def("run_acceptance",
        [](uint64_t seed) {
          auto results = run_acceptance(seed, nullptr);
          std::vector<std::tuple<int, std::string, bool>> out;
          for (const auto& r : results) out.push_back({r.id, r.name, r.pass});
          return out;
        },
        py::arg("seed") = 7);
}
