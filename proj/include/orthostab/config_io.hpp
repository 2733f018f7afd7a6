#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "orthostab/harness.hpp"
#include "orthostab/json_io.hpp"

namespace orthostab {

// ---------------------------------------------------------------------------
// Config <-> JSON
// ---------------------------------------------------------------------------

inline Json space_spec_to_json(const SpaceSpec& s) {
  Json j{{"field", to_string(s.field)},
         {"dim", s.dim},
         {"norm", to_string(s.norm)}};
  if (s.norm == NormKind::PNorm) j["p"] = s.p;
  if (s.norm == NormKind::WeightedEuclidean) j["weights"] = s.weights;
  return j;
}

inline SpaceSpec space_spec_from_json(const Json& j) {
  detail::StrictObject o(j, "space");
  SpaceSpec s;
  s.field = field_from_string(o.value<std::string>("field", "real"));
  s.dim = o.require<int>("dim");
  s.norm = norm_kind_from_string(o.value<std::string>("norm", "euclidean"));
  s.p = o.value<double>("p", 2.0);
  s.weights = o.value<std::vector<double>>("weights", {});
  o.finish();
  return s;
}

inline Json relation_spec_to_json(const RelationSpec& r) {
  return Json{{"kind", to_string(r.kind)}, {"tol", r.tol}};
}

inline RelationSpec relation_spec_from_json(const Json& j) {
  detail::StrictObject o(j, "relation");
  RelationSpec r;
  r.kind = orth_kind_from_string(o.value<std::string>("kind", "inner_product"));
  r.tol = o.value<double>("tol", 1e-9);
  o.finish();
  return r;
}

inline std::string to_string(LinearSpec::Kind k) {
  switch (k) {
    case LinearSpec::Kind::Zero: return "zero";
    case LinearSpec::Kind::Identity: return "identity";
    case LinearSpec::Kind::Diagonal: return "diagonal";
    case LinearSpec::Kind::Dense: return "dense";
  }
  return "zero";
}

inline LinearSpec::Kind linear_kind_from_string(const std::string& s) {
  if (s == "zero") return LinearSpec::Kind::Zero;
  if (s == "identity") return LinearSpec::Kind::Identity;
  if (s == "diagonal") return LinearSpec::Kind::Diagonal;
  if (s == "dense") return LinearSpec::Kind::Dense;
  throw ConfigError("unknown linear kind: " + s);
}

inline std::string to_string(OffsetsSpec::Kind k) {
  return k == OffsetsSpec::Kind::Zero ? "zero" : "random";
}

inline OffsetsSpec::Kind offsets_kind_from_string(const std::string& s) {
  if (s == "zero") return OffsetsSpec::Kind::Zero;
  if (s == "random") return OffsetsSpec::Kind::Random;
  throw ConfigError("unknown offsets kind: " + s);
}

inline Json gt_spec_to_json(const GroundTruthSpec& g) {
  Json j{{"quad_coeff", g.quad_coeff},
         {"linear", Json{{"kind", to_string(g.linear.kind)},
                         {"scale", g.linear.scale}}},
         {"offsets", Json{{"kind", to_string(g.offsets.kind)},
                          {"scale", g.offsets.scale}}},
         {"noise_amp", g.noise_amp},
         {"seed", g.seed}};
  if (g.collapse_alpha) j["collapse_alpha"] = *g.collapse_alpha;
  return j;
}

inline GroundTruthSpec gt_spec_from_json(const Json& j) {
  detail::StrictObject o(j, "ground_truth");
  GroundTruthSpec g;
  g.quad_coeff = o.value<double>("quad_coeff", 0.0);
  if (o.has("linear")) {
    detail::StrictObject lo(j.at("linear"), "ground_truth.linear");
    g.linear.kind = linear_kind_from_string(lo.value<std::string>("kind", "zero"));
    g.linear.scale = lo.value<double>("scale", 1.0);
    lo.finish();
  }
  if (o.has("offsets")) {
    detail::StrictObject oo(j.at("offsets"), "ground_truth.offsets");
    g.offsets.kind =
        offsets_kind_from_string(oo.value<std::string>("kind", "zero"));
    g.offsets.scale = oo.value<double>("scale", 0.5);
    oo.finish();
  }
  g.noise_amp = o.value<double>("noise_amp", 0.0);
  g.seed = o.value<std::uint64_t>("seed", 1);
  if (o.has("collapse_alpha"))
    g.collapse_alpha = j.at("collapse_alpha").get<double>();
  o.finish();
  return g;
}

inline Json sampling_spec_to_json(const SamplingSpec& s) {
  return Json{{"n_pairs", s.n_pairs},
              {"n_scalars", s.n_scalars},
              {"n_validation", s.n_validation},
              {"n_axiom_samples", s.n_axiom_samples},
              {"n_homogeneity_scalars", s.n_homogeneity_scalars},
              {"n_homogeneity_points", s.n_homogeneity_points},
              {"max_attempts", s.max_attempts},
              {"seed", s.seed}};
}

inline SamplingSpec sampling_spec_from_json(const Json& j) {
  detail::StrictObject o(j, "sampling");
  SamplingSpec s;
  s.n_pairs = o.value<int>("n_pairs", s.n_pairs);
  s.n_scalars = o.value<int>("n_scalars", s.n_scalars);
  s.n_validation = o.value<int>("n_validation", s.n_validation);
  s.n_axiom_samples = o.value<int>("n_axiom_samples", s.n_axiom_samples);
  s.n_homogeneity_scalars =
      o.value<int>("n_homogeneity_scalars", s.n_homogeneity_scalars);
  s.n_homogeneity_points =
      o.value<int>("n_homogeneity_points", s.n_homogeneity_points);
  s.max_attempts = o.value<int>("max_attempts", s.max_attempts);
  s.seed = o.value<std::uint64_t>("seed", s.seed);
  o.finish();
  return s;
}

inline Json scenario_config_to_json(const ScenarioConfig& c) {
  return Json{{"preset", to_string(c.preset)},
              {"space", space_spec_to_json(c.space)},
              {"relation", relation_spec_to_json(c.relation)},
              {"algebra", Json{{"kind", to_string(c.algebra.kind)}}},
              {"ground_truth", gt_spec_to_json(c.gt)},
              {"sampling", sampling_spec_to_json(c.sampling)},
              {"approximant", Json{{"n_max", c.approx.n_max},
                                   {"stop_tol", c.approx.stop_tol}}}};
}

inline ScenarioConfig scenario_config_from_json(const Json& j) {
  detail::StrictObject o(j, "config");
  ScenarioConfig c;
  c.preset = preset_from_string(o.require<std::string>("preset"));
  if (o.has("space")) c.space = space_spec_from_json(j.at("space"));
  if (o.has("relation")) c.relation = relation_spec_from_json(j.at("relation"));
  if (o.has("algebra")) {
    detail::StrictObject ao(j.at("algebra"), "algebra");
    c.algebra.kind =
        algebra_kind_from_string(ao.value<std::string>("kind", "real_signs"));
    ao.finish();
  }
  if (o.has("ground_truth")) c.gt = gt_spec_from_json(j.at("ground_truth"));
  if (o.has("sampling")) c.sampling = sampling_spec_from_json(j.at("sampling"));
  if (o.has("approximant")) {
    detail::StrictObject po(j.at("approximant"), "approximant");
    c.approx.n_max = po.value<int>("n_max", c.approx.n_max);
    c.approx.stop_tol = po.value<double>("stop_tol", c.approx.stop_tol);
    po.finish();
  }
  o.finish();
  return c;
}

inline Json axioms_config_to_json(const AxiomsConfig& c) {
  return Json{{"space", space_spec_to_json(c.space)},
              {"relation", relation_spec_to_json(c.relation)},
              {"samples", c.samples},
              {"seed", c.seed}};
}

inline AxiomsConfig axioms_config_from_json(const Json& j) {
  detail::StrictObject o(j, "axioms config");
  AxiomsConfig c;
  c.space = space_spec_from_json(o.get("space"));
  if (o.has("relation")) c.relation = relation_spec_from_json(j.at("relation"));
  c.samples = o.value<int>("samples", c.samples);
  c.seed = o.value<std::uint64_t>("seed", c.seed);
  o.finish();
  return c;
}

// ---------------------------------------------------------------------------
// Report -> JSON
// ---------------------------------------------------------------------------

inline Json report_to_json(const RunReport& rep) {
  const Field field = rep.config.space.field;
  return Json{{"artifact_version", std::string(kVersion)},
              {"config", scenario_config_to_json(rep.config)},
              {"axioms", axiom_report_to_json(field, rep.axioms)},
              {"epsilon", epsilon_to_json(field, rep.eps)},
              {"decomposition", decomposition_to_json(field, rep.decomp)},
              {"certificate", certificate_to_json(rep.cert)},
              {"pass", rep.pass},
              {"timing", Json{{"total_ms", rep.total_ms}}}};
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("JSON parse error in " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file for writing: " + path);
  out << body;
  if (!out) throw Error("failed while writing: " + path);
}

/// Report body with the volatile timing section removed; used for
/// reproducibility comparisons.
inline std::string report_without_timing(const Json& report) {
  Json copy = report;
  copy.erase("timing");
  return copy.dump(2);
}

}  // namespace orthostab
