#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "orthostab/algebra.hpp"
#include "orthostab/errors.hpp"
#include "orthostab/hyers.hpp"
#include "orthostab/orthogonality.hpp"
#include "orthostab/pexider.hpp"
#include "orthostab/spaces.hpp"

namespace orthostab {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Enum names
// ---------------------------------------------------------------------------

inline std::string to_string(Field f) {
  return f == Field::Real ? "real" : "complex";
}

inline Field field_from_string(const std::string& s) {
  if (s == "real") return Field::Real;
  if (s == "complex") return Field::Complex;
  throw ConfigError("unknown field: " + s);
}

inline std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::Euclidean: return "euclidean";
    case NormKind::PNorm: return "p_norm";
    case NormKind::WeightedEuclidean: return "weighted_euclidean";
  }
  return "euclidean";
}

inline NormKind norm_kind_from_string(const std::string& s) {
  if (s == "euclidean") return NormKind::Euclidean;
  if (s == "p_norm") return NormKind::PNorm;
  if (s == "weighted_euclidean") return NormKind::WeightedEuclidean;
  throw ConfigError("unknown norm: " + s);
}

inline std::string to_string(OrthKind k) {
  switch (k) {
    case OrthKind::Trivial: return "trivial";
    case OrthKind::InnerProduct: return "inner_product";
    case OrthKind::BirkhoffJames: return "birkhoff_james";
  }
  return "trivial";
}

inline OrthKind orth_kind_from_string(const std::string& s) {
  if (s == "trivial") return OrthKind::Trivial;
  if (s == "inner_product") return OrthKind::InnerProduct;
  if (s == "birkhoff_james") return OrthKind::BirkhoffJames;
  throw ConfigError("unknown relation kind: " + s);
}

inline std::string to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::RealSigns: return "real_signs";
    case AlgebraKind::ComplexCircle: return "complex_circle";
    case AlgebraKind::DiagonalReal: return "diagonal_real";
  }
  return "real_signs";
}

inline AlgebraKind algebra_kind_from_string(const std::string& s) {
  if (s == "real_signs") return AlgebraKind::RealSigns;
  if (s == "complex_circle") return AlgebraKind::ComplexCircle;
  if (s == "diagonal_real") return AlgebraKind::DiagonalReal;
  throw ConfigError("unknown algebra kind: " + s);
}

inline std::string to_string(DefectShape s) {
  switch (s) {
    case DefectShape::Eq1: return "even_squared_scalar";
    case DefectShape::Eq12: return "odd_scalar";
    case DefectShape::Eq22: return "two_scalar";
    case DefectShape::Eq29: return "scalar_free";
  }
  return "scalar_free";
}

inline std::string to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::General: return "general";
  }
  return "general";
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

/// Real spaces serialize vectors as arrays of numbers, complex spaces as
/// arrays of [re, im] pairs.
inline Json vec_to_json(Field field, const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (field == Field::Real)
      a.push_back(v[i].real());
    else
      a.push_back(Json::array({v[i].real(), v[i].imag()}));
  }
  return a;
}

inline Json mat_to_json(Field field, const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (field == Field::Real)
        row.push_back(m(r, c).real());
      else
        row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json scalar_to_json(const Scalar& a) {
  switch (a.kind) {
    case AlgebraKind::RealSigns:
      return Json{{"kind", "sign"}, {"value", a.sign}};
    case AlgebraKind::ComplexCircle:
      return Json{{"kind", "unit_complex"}, {"re", a.z.real()},
                  {"im", a.z.imag()}};
    case AlgebraKind::DiagonalReal: {
      Json d = Json::array();
      for (Eigen::Index i = 0; i < a.diag.size(); ++i) d.push_back(a.diag[i]);
      return Json{{"kind", "diagonal"}, {"entries", std::move(d)}};
    }
  }
  return Json();
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json axiom_report_to_json(Field field, const AxiomReport& rep) {
  Json failures = Json::array();
  for (const auto& w : rep.failures) {
    failures.push_back(Json{{"axiom", w.axiom},
                            {"x", vec_to_json(field, w.x)},
                            {"y", vec_to_json(field, w.y)},
                            {"alpha", w.alpha},
                            {"beta", w.beta},
                            {"lambda", w.lambda},
                            {"detail", w.detail}});
  }
  return Json{{"o1_pass", rep.o1_pass},     {"o2_pass", rep.o2_pass},
              {"o3_pass", rep.o3_pass},     {"o4_pass", rep.o4_pass},
              {"o1_samples", rep.o1_samples}, {"o2_samples", rep.o2_samples},
              {"o3_samples", rep.o3_samples}, {"o4_samples", rep.o4_samples},
              {"o4_failures", rep.o4_failures},
              {"all_pass", rep.all_pass()},
              {"failures", std::move(failures)}};
}

inline Json epsilon_to_json(Field field, const EpsilonEstimate& e) {
  return Json{{"eps_hat", e.eps_hat},
              {"n_pairs", e.n_pairs},
              {"n_scalars", e.n_scalars},
              {"witness",
               Json{{"x", vec_to_json(field, e.witness_x)},
                    {"y", vec_to_json(field, e.witness_y)},
                    {"a", scalar_to_json(e.witness_a)},
                    {"b", scalar_to_json(e.witness_b)}}}};
}

inline Json decomposition_to_json(Field field,
                                  const CanonicalDecomposition& d) {
  return Json{{"carrier_index", 0},
              {"q_matrix", mat_to_json(field, d.q_matrix)},
              {"t_matrix", mat_to_json(field, d.t_matrix)},
              {"q_residual", d.q_residual},
              {"t_residual", d.t_residual},
              {"q_matrix_max_abs", d.q_matrix_max_abs()},
              {"t_matrix_max_abs", d.t_matrix_max_abs()}};
}

inline Json certificate_to_json(const StabilityCertificate& c) {
  Json bounds = Json::array();
  for (const auto& b : c.bounds)
    bounds.push_back(Json{{"name", b.name},
                          {"constant", b.constant},
                          {"attained_sup", b.attained_sup},
                          {"ratio", b.ratio},
                          {"pass", b.pass},
                          {"gating", b.gating}});
  Json hom = Json::array();
  for (const auto& h : c.homogeneity)
    hom.push_back(Json{{"scalar", scalar_to_json(h.a)},
                       {"t_residual", h.t_residual},
                       {"q_residual", h.q_residual}});
  Json checks = Json::array();
  for (const auto& k : c.checks)
    checks.push_back(Json{{"name", k.name},
                          {"sup", k.sup},
                          {"tol", k.tol},
                          {"pass", k.pass},
                          {"gating", k.gating}});
  return Json{{"eps_hat", c.eps_hat},
              {"slack_max", c.slack_max},
              {"bounds", std::move(bounds)},
              {"homogeneity", std::move(hom)},
              {"homogeneity_t_sup", c.homogeneity_t_sup},
              {"homogeneity_q_sup", c.homogeneity_q_sup},
              {"homogeneity_tol", c.homogeneity_tol},
              {"homogeneity_gated", c.homogeneity_gated},
              {"homogeneity_pass", c.homogeneity_pass},
              {"checks", std::move(checks)},
              {"pass", c.pass}};
}

// ---------------------------------------------------------------------------
// Strict-object helper
// ---------------------------------------------------------------------------

namespace detail {

/// Wraps a JSON object and rejects unknown keys, so config typos fail
/// loudly instead of silently using defaults.
class StrictObject {
 public:
  StrictObject(const Json& j, std::string where)
      : j_(j), where_(std::move(where)) {
    if (!j.is_object())
      throw ConfigError(where_ + " must be a JSON object");
    for (const auto& item : j.items()) seen_[item.key()] = false;
  }

  bool has(const std::string& key) {
    auto it = seen_.find(key);
    if (it == seen_.end()) return false;
    it->second = true;
    return true;
  }

  const Json& get(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
    return j_.at(key);
  }

  template <class T>
  T value(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(where_ + ": bad value for '" + key + "': " + e.what());
    }
  }

  template <class T>
  T require(const std::string& key) {
    const Json& v = get(key);
    try {
      return v.get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(where_ + ": bad value for '" + key + "': " + e.what());
    }
  }

  void finish() const {
    for (const auto& [key, used] : seen_)
      if (!used)
        throw ConfigError(where_ + ": unknown key '" + key + "'");
  }

 private:
  const Json& j_;
  std::string where_;
  std::map<std::string, bool> seen_;
};

}  // namespace detail

}  // namespace orthostab
