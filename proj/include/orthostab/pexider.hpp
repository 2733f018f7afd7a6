#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "orthostab/algebra.hpp"
#include "orthostab/errors.hpp"
#include "orthostab/orthogonality.hpp"
#include "orthostab/rng.hpp"
#include "orthostab/spaces.hpp"

namespace orthostab {

enum class Parity { Even, Odd, General };

/// Which hypothesis expression a defect measures.
///   Eq1  — centered maps, scalar a^2   (even system)
///   Eq12 — centered maps, scalar a     (odd system)
///   Eq22 — raw maps, scalar product ab (two-scalar system)
///   Eq29 — raw maps, no scalars
enum class DefectShape { Eq1, Eq12, Eq22, Eq29 };

/// Exact content of a Pexider triple: scalar quadratic part, linear part,
/// per-function offsets, plus a deterministic bounded noise amplitude.
struct GroundTruth {
  double quad_coeff = 0.0;
  Mat linear;  // dim x dim, zero matrix when absent
  Vec c1, c2, c3;
  double noise_amp = 0.0;
  std::uint64_t seed = 0;
};

/// Evaluable perturbed triple (f1, f2, f3). Immutable; evaluation is pure
/// and bitwise deterministic, so instances can be shared across workers.
class PexiderInstance {
 public:
  static PexiderInstance create(const Relation& relation, Parity parity,
                                GroundTruth gt,
                                std::optional<double> collapse_alpha = {}) {
    const NormedSpace& space = relation.space;
    const int d = space.dim;
    if (gt.linear.size() == 0) gt.linear = Mat::Zero(d, d);
    if (gt.linear.rows() != d || gt.linear.cols() != d)
      throw ConfigError("linear part must be dim x dim");
    if (gt.c1.size() == 0) gt.c1 = zero_vec(space);
    if (gt.c2.size() == 0) gt.c2 = zero_vec(space);
    if (gt.c3.size() == 0) gt.c3 = zero_vec(space);
    check_dim(space, gt.c1, "offset c1");
    check_dim(space, gt.c2, "offset c2");
    check_dim(space, gt.c3, "offset c3");
    if (!(gt.noise_amp >= 0.0))
      throw ConfigError("noise amplitude must be nonnegative");
    if (!gt.linear.allFinite())
      throw ConfigError("linear part has non-finite entries");

    if (gt.quad_coeff != 0.0 && !quad_kernel_available(relation))
      throw ConfigError(
          "no orthogonally additive quadratic kernel for this relation/norm; "
          "quad_coeff must be 0");

    if (parity == Parity::Even && !gt.linear.isZero(0.0))
      throw ConfigError("even parity forces a zero linear part");
    if (parity == Parity::Odd) {
      if (gt.quad_coeff != 0.0)
        throw ConfigError("odd parity forces quad_coeff = 0");
      if (!is_zero_vec(gt.c1) || !is_zero_vec(gt.c2) || !is_zero_vec(gt.c3))
        throw ConfigError("odd parity forces zero offsets");
    }
    if (collapse_alpha && *collapse_alpha == 1.0)
      throw ConfigError("collapse alpha must differ from 1");
    return PexiderInstance(relation, parity, std::move(gt), collapse_alpha);
  }

  /// True when the relation admits an exactly orthogonally additive
  /// quadratic kernel (the squared norm of an inner-product norm).
  static bool quad_kernel_available(const Relation& rel) {
    return rel.kind != OrthKind::Trivial && rel.space.has_inner_product();
  }

  const Relation& relation() const { return relation_; }
  const NormedSpace& space() const { return relation_.space; }
  Parity parity() const { return parity_; }
  const GroundTruth& ground() const { return gt_; }
  std::optional<double> collapse_alpha() const { return collapse_alpha_; }

  /// Quadratic kernel value q(x) (squared inner-product norm).
  double quad_kernel(const Vec& x) const {
    const NormedSpace& s = space();
    if (s.kind == NormKind::Euclidean) return x.squaredNorm();
    double acc = 0.0;
    for (int i = 0; i < s.dim; ++i) acc += s.weights[i] * std::norm(x[i]);
    return acc;
  }

  /// f_i(x) = quad_coeff * q(x) * e1 + L x + c_i + eta_i(x).
  Vec eval(int i, const Vec& x) const {
    check_dim(space(), x);
    if (collapse_alpha_ && i == 2) return Vec(*collapse_alpha_ * eval(1, x));
    Vec v = Vec::Zero(space().dim);
    if (gt_.quad_coeff != 0.0)
      v[0] = Cx(gt_.quad_coeff * quad_kernel(x), 0.0);
    v += gt_.linear * x;
    v += offset(i);
    v += noise(i, x);
    return v;
  }

  /// f_i(0); equals the offset exactly because the noise vanishes at 0.
  Vec at_zero(int i) const {
    if (collapse_alpha_ && i == 2) return Vec(*collapse_alpha_ * offset(1));
    return offset(i);
  }

  /// Centered map F_i(x) = f_i(x) - f_i(0).
  Vec eval_centered(int i, const Vec& x) const {
    return Vec(eval(i, x) - at_zero(i));
  }

  /// Even/odd decomposition of the centered map at x. Both parts carry
  /// their parity exactly (the half-sum is symmetric in its arguments and
  /// the half-difference antisymmetric, bit for bit); recombination is
  /// exact to the last rounding of the two halves.
  std::pair<Vec, Vec> center_and_split(int i, const Vec& x) const {
    const Vec fp = eval_centered(i, x);
    const Vec fm = eval_centered(i, Vec(-x));
    const Vec even = Vec((fp + fm) * 0.5);
    const Vec odd = Vec((fp - fm) * 0.5);
    return {even, odd};
  }

  /// Deterministic bounded noise, keyed on (seed, i, quantized x) and
  /// symmetrized to the instance parity. eta_i(0) = 0 always.
  Vec noise(int i, const Vec& x) const {
    if (gt_.noise_amp == 0.0 || is_zero_vec(x)) return zero_vec(space());
    switch (parity_) {
      case Parity::General:
        return noise_raw(i, x);
      case Parity::Even:
        return Vec((noise_raw(i, x) + noise_raw(i, Vec(-x))) * 0.5);
      case Parity::Odd:
        return Vec((noise_raw(i, x) - noise_raw(i, Vec(-x))) * 0.5);
    }
    return zero_vec(space());
  }

  /// Hypothesis defect at an orthogonal pair under the given shape.
  double defect(const Vec& x, const Vec& y, const Scalar& a, const Scalar& b,
                DefectShape shape) const {
    if (!is_orthogonal(relation_, x, y))
      throw NonOrthogonalPair("defect requires an orthogonal pair");
    const Vec sum = Vec(x + y);
    switch (shape) {
      case DefectShape::Eq1: {
        const Scalar a2 = square(a);
        const Vec lhs = eval_centered(1, act(a, sum));
        return norm_of(space(), Vec(lhs - act(a2, eval_centered(2, x)) -
                                    act(a2, eval_centered(3, y))));
      }
      case DefectShape::Eq12: {
        const Vec lhs = eval_centered(1, act(a, sum));
        return norm_of(space(), Vec(lhs - act(a, eval_centered(2, x)) -
                                    act(a, eval_centered(3, y))));
      }
      case DefectShape::Eq22: {
        const Scalar ab = mul(a, b);
        const Vec lhs = eval(1, act(a, sum));
        return norm_of(space(), Vec(lhs - act(ab, eval(2, x)) -
                                    act(ab, eval(3, y))));
      }
      case DefectShape::Eq29:
        return norm_of(space(), Vec(eval(1, sum) - eval(2, x) - eval(3, y)));
    }
    return 0.0;
  }

 private:
  PexiderInstance(Relation relation, Parity parity, GroundTruth gt,
                  std::optional<double> collapse_alpha)
      : relation_(std::move(relation)),
        parity_(parity),
        gt_(std::move(gt)),
        collapse_alpha_(collapse_alpha) {}

  const Vec& offset(int i) const {
    switch (i) {
      case 1: return gt_.c1;
      case 2: return gt_.c2;
      case 3: return gt_.c3;
    }
    throw Error("function index must be 1, 2 or 3");
  }

  Vec noise_raw(int i, const Vec& x) const {
    std::uint64_t h = gt_.seed;
    h = hash_combine(h, 0x6f727468u);  // field tag
    h = hash_combine(h, static_cast<std::uint64_t>(i));
    for (int k = 0; k < x.size(); ++k) {
      h = hash_combine(h, quantize_bits(x[k].real()));
      h = hash_combine(h, quantize_bits(x[k].imag()));
    }
    Stream s(h);
    Vec g = gaussian_vec(space(), s);
    const double n = norm_of(space(), g);
    const double u = 0.5 + 0.499999 * s.uniform();
    if (n < 1e-300) g = basis_vec(space(), 0);
    const double gn = norm_of(space(), g);
    return Vec(g * (gt_.noise_amp * u / gn));
  }

  Relation relation_;
  Parity parity_;
  GroundTruth gt_;
  std::optional<double> collapse_alpha_;
};

// ---------------------------------------------------------------------------
// Defect sampling and epsilon estimation
// ---------------------------------------------------------------------------

enum class ScalarMode { Units, Idempotents, IdentityOnly };

/// Measured perturbation level: the max defect over the sample, with the
/// attaining witness.
struct EpsilonEstimate {
  double eps_hat = 0.0;
  int n_pairs = 0;
  int n_scalars = 0;
  Vec witness_x, witness_y;
  Scalar witness_a, witness_b;
};

/// Deterministic defect-sample stream. Every 4th pair degenerates to
/// (x, 0) or (0, y) — orthogonal by (O1) — so the y = 0 and x = 0
/// specializations of the hypothesis are always in the sample. The first
/// scalar draw per pair is the algebra unit. Callers that re-run with the
/// same arguments see the identical sequence.
template <class Fn>
void for_each_defect_sample(const PexiderInstance& inst,
                            const ScalarAlgebra& alg, DefectShape shape,
                            ScalarMode mode, std::uint64_t seed, int n_pairs,
                            int n_scalars, Fn&& fn, int max_attempts = 64) {
  if (n_pairs < 1) throw ConfigError("epsilon sampling needs n_pairs >= 1");
  Stream rng(seed);
  const Scalar unit = alg.one();
  for (int k = 0; k < n_pairs; ++k) {
    auto [x, y] = sample_orthogonal_pair(inst.relation(), rng, max_attempts);
    if (k % 4 == 1) y = zero_vec(inst.space());
    if (k % 4 == 3) x = zero_vec(inst.space());
    const bool scalar_free =
        shape == DefectShape::Eq29 || mode == ScalarMode::IdentityOnly;
    const int ns = scalar_free ? 1 : std::max(1, n_scalars);
    for (int j = 0; j < ns; ++j) {
      Scalar a = unit, b = unit;
      if (j > 0) {
        if (mode == ScalarMode::Idempotents) {
          a = alg.sample_idempotent_unit(rng);
          b = alg.sample_idempotent_unit(rng);
        } else {
          a = alg.sample_unit(rng);
          b = alg.sample_unit(rng);
        }
      }
      const double d = inst.defect(x, y, a, b, shape);
      fn(x, y, a, b, d);
    }
  }
}

/// eps_hat = max defect over n_pairs sampled orthogonal pairs and the
/// scalar draws attached to each pair.
inline EpsilonEstimate estimate_epsilon(const PexiderInstance& inst,
                                        const ScalarAlgebra& alg,
                                        DefectShape shape, ScalarMode mode,
                                        std::uint64_t seed, int n_pairs,
                                        int n_scalars, int max_attempts = 64) {
  EpsilonEstimate est;
  est.n_pairs = n_pairs;
  est.n_scalars = n_scalars;
  est.witness_x = zero_vec(inst.space());
  est.witness_y = zero_vec(inst.space());
  est.witness_a = alg.one();
  est.witness_b = alg.one();
  bool first = true;
  for_each_defect_sample(
      inst, alg, shape, mode, seed, n_pairs, n_scalars,
      [&](const Vec& x, const Vec& y, const Scalar& a, const Scalar& b,
          double d) {
        if (first || d > est.eps_hat) {
          est.eps_hat = d;
          est.witness_x = x;
          est.witness_y = y;
          est.witness_a = a;
          est.witness_b = b;
          first = false;
        }
      },
      max_attempts);
  return est;
}

}  // namespace orthostab
