#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthostab/algebra.hpp"
#include "orthostab/errors.hpp"
#include "orthostab/hyers.hpp"
#include "orthostab/json_io.hpp"
#include "orthostab/orthogonality.hpp"
#include "orthostab/pexider.hpp"
#include "orthostab/spaces.hpp"
#include "orthostab/version.hpp"

namespace orthostab {

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

enum class Preset {
  Lemma1,
  Corollary1,
  Lemma2,
  Corollary2,
  Theorem1,
  Theorem2,
  Corollary3,
  Theorem3,
  Remark3,
  Remark4,
};

inline const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> k = {
      Preset::Lemma1,   Preset::Corollary1, Preset::Lemma2,
      Preset::Corollary2, Preset::Theorem1, Preset::Theorem2,
      Preset::Corollary3, Preset::Theorem3, Preset::Remark3,
      Preset::Remark4};
  return k;
}

inline std::string to_string(Preset p) {
  switch (p) {
    case Preset::Lemma1: return "lemma1";
    case Preset::Corollary1: return "corollary1";
    case Preset::Lemma2: return "lemma2";
    case Preset::Corollary2: return "corollary2";
    case Preset::Theorem1: return "theorem1";
    case Preset::Theorem2: return "theorem2";
    case Preset::Corollary3: return "corollary3";
    case Preset::Theorem3: return "theorem3";
    case Preset::Remark3: return "remark3";
    case Preset::Remark4: return "remark4";
  }
  return "theorem3";
}

inline Preset preset_from_string(const std::string& s) {
  for (Preset p : all_presets())
    if (to_string(p) == s) return p;
  throw ConfigError("unknown preset: " + s);
}

struct SpaceSpec {
  Field field = Field::Real;
  int dim = 4;
  NormKind norm = NormKind::Euclidean;
  double p = 2.0;
  std::vector<double> weights;

  NormedSpace build() const {
    switch (norm) {
      case NormKind::Euclidean:
        return NormedSpace::euclidean(field, dim);
      case NormKind::PNorm:
        return NormedSpace::p_space(field, dim, p);
      case NormKind::WeightedEuclidean: {
        Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
        for (std::size_t i = 0; i < weights.size(); ++i)
          w[static_cast<Eigen::Index>(i)] = weights[i];
        return NormedSpace::weighted(field, std::move(w));
      }
    }
    return NormedSpace::euclidean(field, dim);
  }

  bool operator==(const SpaceSpec&) const = default;
};

struct RelationSpec {
  OrthKind kind = OrthKind::InnerProduct;
  double tol = 1e-9;
  bool operator==(const RelationSpec&) const = default;
};

struct AlgebraSpec {
  AlgebraKind kind = AlgebraKind::RealSigns;
  bool operator==(const AlgebraSpec&) const = default;
};

struct LinearSpec {
  enum class Kind { Zero, Identity, Diagonal, Dense };
  Kind kind = Kind::Zero;
  double scale = 1.0;
  bool operator==(const LinearSpec&) const = default;
};

struct OffsetsSpec {
  enum class Kind { Zero, Random };
  Kind kind = Kind::Zero;
  double scale = 0.5;
  bool operator==(const OffsetsSpec&) const = default;
};

struct GroundTruthSpec {
  double quad_coeff = 0.0;
  LinearSpec linear;
  OffsetsSpec offsets;
  double noise_amp = 0.0;
  std::uint64_t seed = 1;
  std::optional<double> collapse_alpha;
  bool operator==(const GroundTruthSpec&) const = default;
};

struct SamplingSpec {
  int n_pairs = 300;
  int n_scalars = 8;
  int n_validation = 120;
  int n_axiom_samples = 200;
  int n_homogeneity_scalars = 32;
  int n_homogeneity_points = 64;
  int max_attempts = 64;
  std::uint64_t seed = 2024;
  bool operator==(const SamplingSpec&) const = default;
};

struct ApproximantSpec {
  int n_max = 40;
  double stop_tol = 1e-10;
  bool operator==(const ApproximantSpec&) const = default;

  ApproximantConfig build(ApproxMode mode) const {
    ApproximantConfig c{n_max, stop_tol, mode};
    c.validate();
    return c;
  }
};

struct ScenarioConfig {
  Preset preset = Preset::Theorem3;
  SpaceSpec space;
  RelationSpec relation;
  AlgebraSpec algebra;
  GroundTruthSpec gt;
  SamplingSpec sampling;
  ApproximantSpec approx;
  bool operator==(const ScenarioConfig&) const = default;
};

struct AxiomsConfig {
  SpaceSpec space;
  RelationSpec relation;
  int samples = 500;
  std::uint64_t seed = 2024;
  bool operator==(const AxiomsConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Preset semantics
// ---------------------------------------------------------------------------

struct PresetTraits {
  Parity parity = Parity::General;
  DefectShape shape = DefectShape::Eq29;
  ScalarMode scalar_mode = ScalarMode::Units;
  bool gate_homogeneity = false;
  bool rational_scaling = false;
  bool orbit_checks = false;
  bool force_compatible_ground_truth = false;
  bool collapse = false;
};

inline PresetTraits preset_traits(Preset p) {
  switch (p) {
    case Preset::Lemma1:
      return {Parity::Even, DefectShape::Eq1, ScalarMode::Units,
              false, false, true, false, false};
    case Preset::Corollary1:
      return {Parity::Even, DefectShape::Eq1, ScalarMode::IdentityOnly,
              false, false, true, false, false};
    case Preset::Lemma2:
      return {Parity::Odd, DefectShape::Eq12, ScalarMode::Units,
              false, false, true, false, false};
    case Preset::Corollary2:
      return {Parity::Odd, DefectShape::Eq12, ScalarMode::IdentityOnly,
              false, false, true, false, false};
    case Preset::Theorem1:
      return {Parity::General, DefectShape::Eq22, ScalarMode::Units,
              false, false, false, false, false};
    case Preset::Theorem2:
      return {Parity::General, DefectShape::Eq22, ScalarMode::Units,
              true, true, false, true, false};
    case Preset::Corollary3:
      return {Parity::General, DefectShape::Eq22, ScalarMode::Units,
              true, false, false, true, false};
    case Preset::Theorem3:
      return {Parity::General, DefectShape::Eq29, ScalarMode::IdentityOnly,
              false, false, false, false, false};
    case Preset::Remark3:
      return {Parity::General, DefectShape::Eq22, ScalarMode::Idempotents,
              true, false, false, true, false};
    case Preset::Remark4:
      return {Parity::General, DefectShape::Eq29, ScalarMode::IdentityOnly,
              false, false, false, false, true};
  }
  return {};
}

/// Applies the structural constraints of the preset to the configuration.
/// Structural fields (parity-driven ground-truth shape, forced field or
/// algebra, scalar-compatibility of the ground truth) are overridden; the
/// resolved config is echoed into reports and re-runs identically.
inline ScenarioConfig resolve_config(ScenarioConfig cfg) {
  const PresetTraits traits = preset_traits(cfg.preset);

  if (cfg.preset == Preset::Corollary3) {
    cfg.space.field = Field::Complex;
    cfg.algebra.kind = AlgebraKind::ComplexCircle;
  }

  if (traits.parity == Parity::Even) {
    cfg.gt.linear.kind = LinearSpec::Kind::Zero;
  } else if (traits.parity == Parity::Odd) {
    cfg.gt.quad_coeff = 0.0;
    cfg.gt.offsets.kind = OffsetsSpec::Kind::Zero;
  }

  if (traits.collapse) {
    if (!cfg.gt.collapse_alpha) cfg.gt.collapse_alpha = 2.0;
    // Only a uniformly bounded f1 can satisfy the collapsed hypothesis with
    // a meaningful epsilon; keep the exact part trivial.
    cfg.gt.quad_coeff = 0.0;
    cfg.gt.linear.kind = LinearSpec::Kind::Zero;
    cfg.gt.offsets.kind = OffsetsSpec::Kind::Zero;
  } else {
    cfg.gt.collapse_alpha.reset();
  }

  if (traits.force_compatible_ground_truth) {
    if (cfg.algebra.kind == AlgebraKind::ComplexCircle) {
      cfg.gt.quad_coeff = 0.0;
    } else if (cfg.algebra.kind == AlgebraKind::DiagonalReal) {
      cfg.gt.quad_coeff = 0.0;
      if (cfg.gt.linear.kind == LinearSpec::Kind::Dense)
        cfg.gt.linear.kind = LinearSpec::Kind::Diagonal;
    }
  }

  if (cfg.algebra.kind == AlgebraKind::ComplexCircle &&
      cfg.space.field != Field::Complex)
    throw ConfigError("complex_circle algebra needs a complex space");

  if (cfg.gt.quad_coeff != 0.0) {
    const bool ok = cfg.relation.kind != OrthKind::Trivial &&
                    cfg.space.norm != NormKind::PNorm;
    if (!ok)
      throw ConfigError(
          "quad_coeff must be 0: no orthogonally additive quadratic kernel "
          "for this relation/norm");
  }

  if (cfg.sampling.n_pairs < 1 || cfg.sampling.n_validation < 1)
    throw ConfigError("sampling sizes must be positive");
  return cfg;
}

// ---------------------------------------------------------------------------
// Building runtime objects
// ---------------------------------------------------------------------------

inline GroundTruth build_ground_truth(const NormedSpace& space,
                                      const GroundTruthSpec& spec) {
  GroundTruth gt;
  gt.quad_coeff = spec.quad_coeff;
  gt.noise_amp = spec.noise_amp;
  gt.seed = spec.seed;
  const int d = space.dim;
  Stream rng(hash_combine(spec.seed, 0x9d7ull));

  switch (spec.linear.kind) {
    case LinearSpec::Kind::Zero:
      gt.linear = Mat::Zero(d, d);
      break;
    case LinearSpec::Kind::Identity:
      gt.linear = Mat::Identity(d, d) * spec.linear.scale;
      break;
    case LinearSpec::Kind::Diagonal: {
      gt.linear = Mat::Zero(d, d);
      for (int i = 0; i < d; ++i) {
        const double mag = rng.uniform(0.5, 1.5) * spec.linear.scale;
        const double sgn = rng.below(2) == 0 ? 1.0 : -1.0;
        gt.linear(i, i) = Cx(sgn * mag, 0.0);
      }
      break;
    }
    case LinearSpec::Kind::Dense: {
      gt.linear = Mat::Zero(d, d);
      const double s = spec.linear.scale / std::sqrt(static_cast<double>(d));
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          const double re = rng.gaussian() * s;
          const double im =
              space.field == Field::Complex ? rng.gaussian() * s : 0.0;
          gt.linear(r, c) = Cx(re, im);
        }
      break;
    }
  }

  if (spec.offsets.kind == OffsetsSpec::Kind::Random) {
    gt.c1 = gaussian_vec(space, rng) * spec.offsets.scale;
    gt.c2 = gaussian_vec(space, rng) * spec.offsets.scale;
    gt.c3 = gaussian_vec(space, rng) * spec.offsets.scale;
  } else {
    gt.c1 = zero_vec(space);
    gt.c2 = zero_vec(space);
    gt.c3 = zero_vec(space);
  }
  return gt;
}

inline PexiderInstance build_instance(const ScenarioConfig& cfg) {
  const PresetTraits traits = preset_traits(cfg.preset);
  const NormedSpace space = cfg.space.build();
  const Relation rel =
      Relation::create(cfg.relation.kind, space, cfg.relation.tol);
  GroundTruth gt = build_ground_truth(space, cfg.gt);
  return PexiderInstance::create(rel, traits.parity, std::move(gt),
                                 cfg.gt.collapse_alpha);
}

// ---------------------------------------------------------------------------
// Scenario run
// ---------------------------------------------------------------------------

struct RunReport {
  ScenarioConfig config;  // resolved
  AxiomReport axioms;
  EpsilonEstimate eps;
  CanonicalDecomposition decomp;
  StabilityCertificate cert;
  double total_ms = 0.0;
  bool pass = false;
};

inline RunReport run_scenario(const ScenarioConfig& raw) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config = resolve_config(raw);
  const ScenarioConfig& cfg = rep.config;
  const PresetTraits traits = preset_traits(cfg.preset);

  const PexiderInstance inst = build_instance(cfg);
  const ScalarAlgebra alg =
      ScalarAlgebra::create(cfg.algebra.kind, inst.space());

  rep.axioms = check_axioms(inst.relation(),
                            hash_combine(cfg.sampling.seed, 0xa10ull),
                            cfg.sampling.n_axiom_samples);

  rep.eps = estimate_epsilon(inst, alg, traits.shape, traits.scalar_mode,
                             cfg.sampling.seed, cfg.sampling.n_pairs,
                             cfg.sampling.n_scalars,
                             cfg.sampling.max_attempts);

  const ApproximantConfig acfg = cfg.approx.build(ApproxMode::Quadratic);
  const std::vector<Vec> val = validation_points(
      inst.space(), hash_combine(cfg.sampling.seed, 0x7a1ull),
      cfg.sampling.n_validation);
  rep.decomp = canonicalize(inst, acfg, val);

  CertifyOptions opt;
  opt.shape = traits.shape;
  opt.scalar_mode = traits.scalar_mode;
  opt.n_validation = cfg.sampling.n_validation;
  opt.n_scalar_samples = cfg.sampling.n_homogeneity_scalars;
  opt.n_homogeneity_points = cfg.sampling.n_homogeneity_points;
  opt.n_pair_checks = std::min(64, cfg.sampling.n_pairs);
  opt.n_pairs = cfg.sampling.n_pairs;
  opt.n_scalars = cfg.sampling.n_scalars;
  opt.sample_seed = cfg.sampling.seed;
  opt.validation_seed = hash_combine(cfg.sampling.seed, 0x7a1ull);
  opt.gate_homogeneity = traits.gate_homogeneity;
  opt.rational_scaling = traits.rational_scaling;
  opt.orbit_checks = traits.orbit_checks;
  opt.max_attempts = cfg.sampling.max_attempts;
  rep.cert = certify(inst, alg, rep.eps, rep.decomp, acfg, opt);

  rep.pass = rep.cert.pass;
  const auto t1 = std::chrono::steady_clock::now();
  rep.total_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Default configurations per preset (the suite's documented defaults)
// ---------------------------------------------------------------------------

inline ScenarioConfig default_config(Preset p, std::uint64_t seed) {
  ScenarioConfig c;
  c.preset = p;
  c.space = {Field::Real, 4, NormKind::Euclidean, 2.0, {}};
  c.relation = {OrthKind::InnerProduct, 1e-9};
  c.algebra = {AlgebraKind::RealSigns};
  c.gt.seed = hash_combine(seed, static_cast<std::uint64_t>(p));
  c.sampling.seed = hash_combine(c.gt.seed, 0x5eedull);

  switch (p) {
    case Preset::Lemma1:
    case Preset::Corollary1:
      c.gt.quad_coeff = 1.5;
      c.gt.offsets = {OffsetsSpec::Kind::Random, 0.5};
      c.gt.noise_amp = 1e-3;
      break;
    case Preset::Lemma2:
    case Preset::Corollary2:
      c.gt.linear = {LinearSpec::Kind::Dense, 1.2};
      c.gt.noise_amp = 1e-3;
      break;
    case Preset::Theorem1:
      c.gt.quad_coeff = 1.0;
      c.gt.linear = {LinearSpec::Kind::Dense, 0.8};
      c.gt.offsets = {OffsetsSpec::Kind::Random, 0.4};
      c.gt.noise_amp = 1e-2;
      break;
    case Preset::Theorem2:
      c.algebra.kind = AlgebraKind::DiagonalReal;
      c.gt.linear = {LinearSpec::Kind::Diagonal, 1.0};
      c.gt.offsets = {OffsetsSpec::Kind::Random, 0.4};
      c.gt.noise_amp = 1e-2;
      break;
    case Preset::Corollary3:
      c.space.field = Field::Complex;
      c.space.dim = 3;
      c.algebra.kind = AlgebraKind::ComplexCircle;
      c.gt.linear = {LinearSpec::Kind::Dense, 0.9};
      c.gt.offsets = {OffsetsSpec::Kind::Random, 0.3};
      c.gt.noise_amp = 1e-2;
      break;
    case Preset::Theorem3:
      c.gt.quad_coeff = 1.0;
      c.gt.linear = {LinearSpec::Kind::Dense, 0.8};
      c.gt.offsets = {OffsetsSpec::Kind::Random, 0.4};
      c.gt.noise_amp = 1e-2;
      break;
    case Preset::Remark3:
      c.algebra.kind = AlgebraKind::DiagonalReal;
      c.gt.linear = {LinearSpec::Kind::Diagonal, 1.1};
      c.gt.offsets = {OffsetsSpec::Kind::Random, 0.3};
      c.gt.noise_amp = 1e-2;
      break;
    case Preset::Remark4:
      c.space.dim = 3;
      c.gt.noise_amp = 5e-2;
      c.gt.collapse_alpha = 2.0;
      break;
  }
  return resolve_config(c);
}

inline constexpr std::uint64_t kDefaultSuiteSeed = 417;

}  // namespace orthostab
