#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "orthostab/algebra.hpp"
#include "orthostab/errors.hpp"
#include "orthostab/pexider.hpp"
#include "orthostab/spaces.hpp"

namespace orthostab {

enum class ApproxMode { Quadratic, Additive };

/// Stopping rule for the doubling-orbit limits. The effective tolerance at
/// a point x is stop_tol * (1 + |x|^2), matching quadratic growth.
struct ApproximantConfig {
  int n_max = 32;
  double stop_tol = 1e-10;
  ApproxMode mode = ApproxMode::Quadratic;

  void validate() const {
    if (n_max < 1 || n_max > 48)
      throw ConfigError("approximant n_max must be in [1, 48]");
    if (!(stop_tol > 0.0)) throw ConfigError("stop_tol must be positive");
  }

  double tol_at(const NormedSpace& space, const Vec& x) const {
    const double n = norm_of(space, x);
    return stop_tol * (1.0 + n * n);
  }
};

struct ApproximantResult {
  Vec value;
  int steps = 0;
  double last_increment = 0.0;
  bool converged = true;
};

namespace detail {

/// Common driver: returns ratio^-N f(2^N x) for the first N <= n_max whose
/// increment against the previous iterate drops below the effective
/// tolerance. Scaling by powers of two is exact in binary floating point,
/// so exactly self-similar maps converge at N = 1 with increment zero.
template <class MapFn>
ApproximantResult hyers_limit(const NormedSpace& space, MapFn&& f,
                              const Vec& x, const ApproximantConfig& cfg,
                              double ratio, int depth_cap) {
  cfg.validate();
  const double tol = cfg.tol_at(space, x);
  const int n_stop = std::min(cfg.n_max, std::max(depth_cap, 1));
  Vec point = x;
  double scale = 1.0;
  Vec prev = f(x);
  if (!prev.allFinite()) throw OrbitOverflow("map value not finite at orbit start");
  double inc = 0.0;
  for (int n = 1; n <= n_stop; ++n) {
    point = Vec(2.0 * point);
    scale *= ratio;
    if (!point.allFinite()) throw OrbitOverflow("orbit point overflowed");
    Vec fv = f(point);
    if (!fv.allFinite()) throw OrbitOverflow("map value overflowed on orbit");
    Vec cur = Vec(fv / scale);
    inc = norm_of(space, Vec(cur - prev));
    prev = std::move(cur);
    if (inc <= tol) return {std::move(prev), n, inc, true};
  }
  return {std::move(prev), n_stop, inc, false};
}

}  // namespace detail

/// Limit of 4^-n F(2^n x) for an even centered map.
template <class MapFn>
ApproximantResult quadratic_approximant(const NormedSpace& space, MapFn&& f,
                                        const Vec& x,
                                        const ApproximantConfig& cfg,
                                        int depth_cap = 48) {
  if (cfg.mode != ApproxMode::Quadratic)
    throw ConfigError("quadratic_approximant needs mode = quadratic");
  return detail::hyers_limit(space, std::forward<MapFn>(f), x, cfg, 4.0,
                             depth_cap);
}

/// Limit of 2^-n F(2^n x) for an odd centered map.
template <class MapFn>
ApproximantResult additive_approximant(const NormedSpace& space, MapFn&& f,
                                       const Vec& x,
                                       const ApproximantConfig& cfg,
                                       int depth_cap = 48) {
  if (cfg.mode != ApproxMode::Additive)
    throw ConfigError("additive_approximant needs mode = additive");
  return detail::hyers_limit(space, std::forward<MapFn>(f), x, cfg, 2.0,
                             depth_cap);
}

// ---------------------------------------------------------------------------
// Canonical matrix form of the recovered maps
// ---------------------------------------------------------------------------

struct CanonicalDecomposition {
  Mat q_matrix;          // symmetric (real field) or hermitian (complex)
  Mat t_matrix;
  double q_residual = 0.0;
  double t_residual = 0.0;

  double q_matrix_max_abs() const { return q_matrix.cwiseAbs().maxCoeff(); }
  double t_matrix_max_abs() const { return t_matrix.cwiseAbs().maxCoeff(); }
};

namespace detail {

struct InstanceMaps {
  const PexiderInstance* inst;
  Vec even(const Vec& x) const { return inst->center_and_split(1, x).first; }
  Vec odd(const Vec& x) const { return inst->center_and_split(1, x).second; }
};

inline ApproximantConfig with_mode(ApproximantConfig cfg, ApproxMode m) {
  cfg.mode = m;
  return cfg;
}

}  // namespace detail

/// Recovered quadratic map (approximant of the even part of F1) at x.
inline ApproximantResult recover_quadratic(const PexiderInstance& inst,
                                           const ApproximantConfig& cfg,
                                           const Vec& x) {
  detail::InstanceMaps maps{&inst};
  return quadratic_approximant(
      inst.space(), [&](const Vec& z) { return maps.even(z); }, x,
      detail::with_mode(cfg, ApproxMode::Quadratic));
}

namespace detail {

/// Size of the quadratic bulk whose cancellation residue pollutes the odd
/// part, with headroom for the handful of roundings per evaluation.
inline double quad_bulk(const PexiderInstance& inst, const Vec& x) {
  const double cq = std::abs(inst.ground().quad_coeff);
  return 4.0 * cq * (1.0 + inst.quad_kernel(x));
}

}  // namespace detail

/// Deepest additive-orbit step that still carries signal at x. The residue
/// of the quadratic bulk in the odd part grows like 2^n (it is divided by
/// 2^n but accrues at scale eps * 4^n * q(x)), while the genuine tail
/// decays like 2^-n; past their crossing the iterates are floating-point
/// artifacts, including spells of spurious agreement. The cap is exactly
/// that crossing, and it never cuts off a tolerance-reachable orbit: the
/// stop fires before the cap whenever the tolerance sits above the floor.
inline int additive_depth_cap(const PexiderInstance& inst,
                              const ApproximantConfig& cfg, const Vec& x) {
  const double mq = detail::quad_bulk(inst, x);
  if (mq == 0.0) return 48;
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = cfg.tol_at(inst.space(), x);
  const double num = 3.0 * inst.ground().noise_amp + tol + eps * mq;
  const double cap = 0.5 * std::log2(num / (eps * mq));
  return std::max(1, static_cast<int>(std::floor(cap)));
}

/// Recovered additive map (approximant of the odd part of F1) at x.
inline ApproximantResult recover_additive(const PexiderInstance& inst,
                                          const ApproximantConfig& cfg,
                                          const Vec& x) {
  detail::InstanceMaps maps{&inst};
  return additive_approximant(
      inst.space(), [&](const Vec& z) { return maps.odd(z); }, x,
      detail::with_mode(cfg, ApproxMode::Additive),
      additive_depth_cap(inst, cfg, x));
}

/// Floating-point accuracy floor of the recovered maps at x: the value of
/// the decaying tail at the depth cap. Zero when the instance has no
/// quadratic component.
inline double recovery_floor(const PexiderInstance& inst,
                             const ApproximantConfig& cfg, const Vec& x) {
  const double mq = detail::quad_bulk(inst, x);
  if (mq == 0.0) return 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = cfg.tol_at(inst.space(), x);
  const double delta = inst.ground().noise_amp;
  return 4.0 * (std::sqrt(eps * mq * (3.0 * delta + tol)) + eps * mq);
}

/// Extracts matrix forms of the recovered maps: columns of the additive
/// matrix are approximant values at basis vectors; the quadratic form comes
/// from polarizing the carrier coefficient over basis pairs. Residuals are
/// sups over the validation samples of the distance between the recovered
/// maps and their matrix forms.
inline CanonicalDecomposition canonicalize(const PexiderInstance& inst,
                                           const ApproximantConfig& cfg,
                                           const std::vector<Vec>& validation) {
  const NormedSpace& space = inst.space();
  const int d = space.dim;
  CanonicalDecomposition out;
  out.t_matrix = Mat::Zero(d, d);
  out.q_matrix = Mat::Zero(d, d);

  for (int j = 0; j < d; ++j)
    out.t_matrix.col(j) = recover_additive(inst, cfg, basis_vec(space, j)).value;

  // Carrier coefficient of the recovered quadratic map.
  const auto qc = [&](const Vec& x) -> double {
    return recover_quadratic(inst, cfg, x).value[0].real();
  };
  std::vector<double> q_basis(d);
  for (int i = 0; i < d; ++i) q_basis[i] = qc(basis_vec(space, i));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Vec eij = Vec(basis_vec(space, i) + basis_vec(space, j));
      const double re = 0.5 * (qc(eij) - q_basis[i] - q_basis[j]);
      double im = 0.0;
      if (space.field == Field::Complex && i != j) {
        Vec mixed = basis_vec(space, i);
        mixed[j] += Cx(0.0, 1.0);
        im = -0.5 * (qc(mixed) - q_basis[i] - q_basis[j]);
      }
      out.q_matrix(i, j) = Cx(re, im);
      out.q_matrix(j, i) = Cx(re, -im);
    }
  }

  const auto q_form = [&](const Vec& x) -> double {
    return (x.adjoint() * out.q_matrix * x)(0, 0).real();
  };

  double q_res = 0.0, t_res = 0.0;
  double worst_thr = 0.0;
  for (const Vec& x : validation) {
    Vec qv = recover_quadratic(inst, cfg, x).value;
    qv[0] -= Cx(q_form(x), 0.0);
    q_res = std::max(q_res, norm_of(space, qv));
    const Vec tv = recover_additive(inst, cfg, x).value;
    t_res = std::max(t_res, norm_of(space, Vec(tv - out.t_matrix * x)));
    const double amplified =
        3.0 * cfg.stop_tol * (1.0 + d * x.squaredNorm());
    const double thr = 10.0 * cfg.tol_at(space, x) + amplified +
                       recovery_floor(inst, cfg, x);
    worst_thr = std::max(worst_thr, thr);
  }
  out.q_residual = q_res;
  out.t_residual = t_res;
  if (!validation.empty() && (q_res > worst_thr || t_res > worst_thr))
    throw CanonicalizationMismatch(
        "recovered limits are not globally quadratic/additive at the working "
        "tolerance: q_residual=" + std::to_string(q_res) +
        " t_residual=" + std::to_string(t_res));
  return out;
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

struct BoundRecord {
  std::string name;
  double constant = 0.0;
  double attained_sup = 0.0;
  double ratio = 0.0;  // attained_sup / (constant * eps_hat), 0 when eps_hat = 0
  bool pass = true;
  bool gating = true;
};

struct CheckRecord {
  std::string name;
  double sup = 0.0;
  double tol = 0.0;
  bool pass = true;
  bool gating = true;
};

struct HomogeneityRecord {
  Scalar a;
  double t_residual = 0.0;
  double q_residual = 0.0;
};

struct StabilityCertificate {
  double eps_hat = 0.0;
  double slack_max = 0.0;
  std::vector<BoundRecord> bounds;
  std::vector<HomogeneityRecord> homogeneity;
  double homogeneity_t_sup = 0.0;
  double homogeneity_q_sup = 0.0;
  double homogeneity_tol = 0.0;
  bool homogeneity_gated = false;
  bool homogeneity_pass = true;
  std::vector<CheckRecord> checks;
  bool pass = true;
};

struct CertifyOptions {
  DefectShape shape = DefectShape::Eq29;
  ScalarMode scalar_mode = ScalarMode::Units;
  int n_validation = 120;
  int n_scalar_samples = 32;
  int n_homogeneity_points = 64;
  int n_pair_checks = 64;
  int n_pairs = 300;    // epsilon-stream regeneration
  int n_scalars = 8;    // epsilon-stream regeneration
  std::uint64_t sample_seed = 1;
  std::uint64_t validation_seed = 2;
  bool gate_homogeneity = false;
  bool rational_scaling = false;
  bool orbit_checks = false;
  int convergence_max_n = 30;
  int max_attempts = 64;
};

/// Validation points drawn from the same magnitude distribution as the
/// hypothesis sampler.
inline std::vector<Vec> validation_points(const NormedSpace& space,
                                          std::uint64_t seed, int n) {
  Stream rng(seed);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.push_back(sample_point(space, rng));
  return pts;
}

/// Checks every stability bound of the active shape against the measured
/// eps_hat, records scalar-homogeneity residuals, and runs the structural
/// probes (orthogonal additivity of the limit, even/odd annihilation,
/// uniqueness, the y = 0 specialization, and — for the centered shapes —
/// the doubling and convergence inequalities).
inline StabilityCertificate certify(const PexiderInstance& inst,
                                    const ScalarAlgebra& alg,
                                    const EpsilonEstimate& eps,
                                    const CanonicalDecomposition& decomp,
                                    const ApproximantConfig& cfg,
                                    const CertifyOptions& opt) {
  const NormedSpace& space = inst.space();
  StabilityCertificate cert;
  cert.eps_hat = eps.eps_hat;

  const auto q_at = [&](const Vec& x) {
    return recover_quadratic(inst, cfg, x).value;
  };
  const auto t_at = [&](const Vec& x) {
    return recover_additive(inst, cfg, x).value;
  };

  const std::vector<Vec> val =
      validation_points(space, opt.validation_seed, opt.n_validation);
  std::vector<Vec> qv, tv;
  std::vector<double> tol_eff, slack;
  qv.reserve(val.size());
  tv.reserve(val.size());
  for (const Vec& x : val) {
    qv.push_back(q_at(x));
    tv.push_back(t_at(x));
    const double t = cfg.tol_at(space, x);
    tol_eff.push_back(t);
    slack.push_back(4.0 * t + decomp.q_residual + decomp.t_residual);
    cert.slack_max = std::max(cert.slack_max, slack.back());
  }

  const auto add_bound = [&](const std::string& name, double constant,
                             const std::function<Vec(int)>& residual_at,
                             bool gating) {
    BoundRecord b;
    b.name = name;
    b.constant = constant;
    b.gating = gating;
    for (int i = 0; i < static_cast<int>(val.size()); ++i) {
      const double v = norm_of(space, residual_at(i));
      b.attained_sup = std::max(b.attained_sup, v);
      if (v > constant * eps.eps_hat + slack[i]) b.pass = false;
    }
    b.ratio = eps.eps_hat > 0.0
                  ? b.attained_sup / (constant * eps.eps_hat)
                  : 0.0;
    cert.bounds.push_back(b);
  };

  switch (opt.shape) {
    case DefectShape::Eq1:
      for (int i = 1; i <= 3; ++i)
        add_bound("F" + std::to_string(i) + "_vs_Q",
                  i == 1 ? 13.0 / 3.0 : 16.0 / 3.0,
                  [&, i](int k) {
                    return Vec(inst.eval_centered(i, val[k]) - qv[k]);
                  },
                  true);
      break;
    case DefectShape::Eq12:
      for (int i = 1; i <= 3; ++i)
        add_bound("F" + std::to_string(i) + "_vs_T", i == 1 ? 7.0 : 8.0,
                  [&, i](int k) {
                    return Vec(inst.eval_centered(i, val[k]) - tv[k]);
                  },
                  true);
      break;
    case DefectShape::Eq22:
    case DefectShape::Eq29: {
      for (int i = 1; i <= 3; ++i)
        add_bound("f" + std::to_string(i) + "_vs_Q_plus_T",
                  i == 1 ? 68.0 / 3.0 : 80.0 / 3.0,
                  [&, i](int k) {
                    return Vec(inst.eval_centered(i, val[k]) - qv[k] - tv[k]);
                  },
                  true);
      // Recorded intermediates: even part via the doubled-epsilon even
      // system, odd part via the doubled-epsilon odd system.
      add_bound("F1_even_vs_Q", 26.0 / 3.0,
                [&](int k) {
                  return Vec(inst.center_and_split(1, val[k]).first - qv[k]);
                },
                false);
      add_bound("F1_odd_vs_T", 14.0,
                [&](int k) {
                  return Vec(inst.center_and_split(1, val[k]).second - tv[k]);
                },
                false);
      break;
    }
  }

  // Scalar homogeneity residuals: T(ax) vs aT(x), Q(ax) vs a^2 Q(x).
  {
    Stream srng(opt.validation_seed ^ 0x5ca1a5ull);
    const int npts = std::min<int>(opt.n_homogeneity_points,
                                   static_cast<int>(val.size()));
    bool hom_ok = true;
    for (int k = 0; k < opt.n_scalar_samples; ++k) {
      Scalar a;
      if (opt.scalar_mode == ScalarMode::Idempotents)
        a = alg.sample_idempotent_unit(srng);
      else if (opt.scalar_mode == ScalarMode::IdentityOnly)
        a = alg.one();
      else
        a = alg.sample_unit(srng);
      HomogeneityRecord rec;
      rec.a = a;
      const Scalar a2 = square(a);
      for (int i = 0; i < npts; ++i) {
        const Vec ax = act(a, val[i]);
        const double tq =
            norm_of(space, Vec(q_at(ax) - act(a2, qv[i])));
        const double tt = norm_of(space, Vec(t_at(ax) - act(a, tv[i])));
        rec.q_residual = std::max(rec.q_residual, tq);
        rec.t_residual = std::max(rec.t_residual, tt);
        const double thr = 10.0 * tol_eff[i];
        cert.homogeneity_tol = std::max(cert.homogeneity_tol, thr);
        if (tq > thr || tt > thr) hom_ok = false;
      }
      cert.homogeneity_t_sup = std::max(cert.homogeneity_t_sup, rec.t_residual);
      cert.homogeneity_q_sup = std::max(cert.homogeneity_q_sup, rec.q_residual);
      cert.homogeneity.push_back(std::move(rec));
    }
    cert.homogeneity_gated = opt.gate_homogeneity;
    cert.homogeneity_pass = hom_ok;
  }

  const auto add_check = [&](CheckRecord c) {
    cert.checks.push_back(std::move(c));
  };

  // Orthogonal additivity of the recovered limit along sampled pairs.
  {
    CheckRecord c;
    c.name = "orthogonal_additivity";
    Stream prng(opt.sample_seed ^ 0xaddull);
    for (int k = 0; k < opt.n_pair_checks; ++k) {
      auto [x, y] = sample_orthogonal_pair(inst.relation(), prng,
                                           opt.max_attempts);
      const Vec s = Vec(x + y);
      const Vec lim_s = Vec(q_at(s) + t_at(s));
      const Vec lim_x = Vec(q_at(x) + t_at(x));
      const Vec lim_y = Vec(q_at(y) + t_at(y));
      const double v = norm_of(space, Vec(lim_s - lim_x - lim_y));
      const double tol = (4.0 / 3.0) * (cfg.tol_at(space, s) +
                                        cfg.tol_at(space, x) +
                                        cfg.tol_at(space, y)) +
                         recovery_floor(inst, cfg, s) +
                         recovery_floor(inst, cfg, x) +
                         recovery_floor(inst, cfg, y);
      c.sup = std::max(c.sup, v);
      c.tol = std::max(c.tol, tol);
      if (v > tol) c.pass = false;
    }
    add_check(std::move(c));
  }

  // Annihilation: the odd path carries no quadratic component and the even
  // path no additive one. Tolerance is twice the stop scale (the final
  // iterate of a geometrically decaying orbit matches its last increment).
  {
    detail::InstanceMaps maps{&inst};
    CheckRecord cq{"annihilation_quadratic_of_odd", 0, 0, true, true};
    CheckRecord ca{"annihilation_additive_of_even", 0, 0, true, true};
    for (const Vec& x : val) {
      const double t = 2.0 * cfg.tol_at(space, x);
      const Vec qv_odd =
          quadratic_approximant(space, [&](const Vec& z) { return maps.odd(z); },
                                x, detail::with_mode(cfg, ApproxMode::Quadratic))
              .value;
      cq.sup = std::max(cq.sup, norm_of(space, qv_odd));
      cq.tol = std::max(cq.tol, t);
      if (norm_of(space, qv_odd) > t) cq.pass = false;

      const auto odd_of_even = [&](const Vec& z) {
        const Vec e_plus = maps.even(z);
        const Vec e_minus = maps.even(Vec(-z));
        return Vec((e_plus - e_minus) * 0.5);
      };
      const Vec av = additive_approximant(space, odd_of_even, x,
                                          detail::with_mode(
                                              cfg, ApproxMode::Additive))
                         .value;
      ca.sup = std::max(ca.sup, norm_of(space, av));
      ca.tol = std::max(ca.tol, t);
      if (norm_of(space, av) > t) ca.pass = false;
    }
    add_check(std::move(cq));
    add_check(std::move(ca));
  }

  // Uniqueness probe: a deeper orbit with a tighter stop must land on the
  // same limits.
  {
    ApproximantConfig deep = cfg;
    deep.n_max = std::min(48, cfg.n_max + 6);
    deep.stop_tol = cfg.stop_tol / 16.0;
    CheckRecord uq{"uniqueness_probe_q", 0, 0, true, true};
    CheckRecord ut{"uniqueness_probe_t", 0, 0, true, true};
    for (int i = 0; i < static_cast<int>(val.size()); ++i) {
      const double t = 2.0 * tol_eff[i] + 2.0 * recovery_floor(inst, cfg, val[i]);
      const Vec q2 = recover_quadratic(inst, deep, val[i]).value;
      const Vec t2 = recover_additive(inst, deep, val[i]).value;
      uq.sup = std::max(uq.sup, norm_of(space, Vec(q2 - qv[i])));
      ut.sup = std::max(ut.sup, norm_of(space, Vec(t2 - tv[i])));
      uq.tol = std::max(uq.tol, t);
      ut.tol = std::max(ut.tol, t);
    }
    uq.pass = uq.sup <= uq.tol;
    ut.pass = ut.sup <= ut.tol;
    add_check(std::move(uq));
    add_check(std::move(ut));
  }

  // y = 0 specialization: F1 and F2 stay eps-close. Centered shapes carry
  // the constant 1, the raw-map shapes 2 (offset removal doubles epsilon).
  {
    CheckRecord c{"eq2_specialization", 0, 0, true, true};
    const double factor =
        (opt.shape == DefectShape::Eq1 || opt.shape == DefectShape::Eq12)
            ? 1.0
            : 2.0;
    const double noise_slack = 2.0 * inst.ground().noise_amp;
    c.tol = factor * eps.eps_hat + noise_slack + cert.slack_max;
    for (const Vec& x : val) {
      const double v = norm_of(
          space, Vec(inst.eval_centered(1, x) - inst.eval_centered(2, x)));
      c.sup = std::max(c.sup, v);
    }
    c.pass = c.sup <= c.tol;
    add_check(std::move(c));
  }

  // Doubling and convergence inequalities along orbits (centered shapes).
  if (opt.orbit_checks &&
      (opt.shape == DefectShape::Eq1 || opt.shape == DefectShape::Eq12)) {
    detail::InstanceMaps maps{&inst};
    const bool even_shape = opt.shape == DefectShape::Eq1;
    Stream srng(opt.validation_seed ^ 0xd0b1ull);
    CheckRecord dbl{even_shape ? "doubling_even" : "doubling_odd", 0, 0, true,
                    true};
    const double dbl_const = even_shape ? 13.0 : 7.0;
    const int n_scal = opt.scalar_mode == ScalarMode::IdentityOnly ? 1 : 8;
    for (const Vec& x : val) {
      for (int j = 0; j < n_scal; ++j) {
        const Scalar a = j == 0 ? alg.one()
                                : (opt.scalar_mode == ScalarMode::Idempotents
                                       ? alg.sample_idempotent_unit(srng)
                                       : alg.sample_unit(srng));
        double v;
        if (even_shape) {
          const Vec lhs = maps.even(act(a, Vec(2.0 * x)));
          const Vec rhs = Vec(4.0 * act(square(a), maps.even(x)));
          v = norm_of(space, Vec(lhs - rhs));
        } else {
          const Vec lhs = maps.odd(act(a, Vec(2.0 * x)));
          const Vec rhs = Vec(2.0 * act(a, maps.odd(x)));
          v = norm_of(space, Vec(lhs - rhs));
        }
        dbl.sup = std::max(dbl.sup, v);
        const double tol = dbl_const * eps.eps_hat + 4.0 * cfg.tol_at(space, x);
        dbl.tol = std::max(dbl.tol, tol);
        if (v > tol) dbl.pass = false;
      }
    }
    add_check(std::move(dbl));

    CheckRecord conv{even_shape ? "convergence_geometric_quartic"
                                : "convergence_geometric_halving",
                     0, 0, true, true};
    const int n_orbits = std::min<int>(100, static_cast<int>(val.size()));
    for (int i = 0; i < n_orbits; ++i) {
      const Vec& x = val[i];
      const Vec base = even_shape ? maps.even(x) : maps.odd(x);
      Vec point = x;
      double scale = 1.0;
      for (int n = 1; n <= opt.convergence_max_n; ++n) {
        point = Vec(2.0 * point);
        scale *= even_shape ? 4.0 : 2.0;
        const Vec it =
            Vec((even_shape ? maps.even(point) : maps.odd(point)) / scale);
        const double lhs = norm_of(space, Vec(it - base));
        const double frac = 1.0 - 1.0 / scale;
        const double bound = even_shape
                                 ? frac * (13.0 / 3.0) * eps.eps_hat
                                 : frac * 7.0 * eps.eps_hat;
        const double tol = bound + slack[i];
        conv.sup = std::max(conv.sup, lhs);
        conv.tol = std::max(conv.tol, tol);
        if (lhs > tol) conv.pass = false;
      }
    }
    add_check(std::move(conv));
  }

  // Collapsed-instance facts (f2 = alpha f1).
  if (inst.collapse_alpha()) {
    const double alpha = *inst.collapse_alpha();
    CheckRecord cb{"collapse_f1_bound", 0, 0, true, true};
    const double f10 = norm_of(space, inst.at_zero(1));
    cb.tol = f10 + (68.0 / 3.0) * eps.eps_hat + cert.slack_max;
    for (const Vec& x : val)
      cb.sup = std::max(cb.sup, norm_of(space, inst.eval(1, x)));
    cb.pass = cb.sup <= cb.tol;
    add_check(std::move(cb));

    // |1 - alpha| |F1(x)| <= eps_hat at the sampled (x, 0) pairs.
    CheckRecord cf{"collapse_f1_vs_eps", 0, 0, true, true};
    cf.tol = eps.eps_hat * (1.0 + 1e-9) + 1e-300;
    for_each_defect_sample(
        inst, alg, opt.shape, opt.scalar_mode, opt.sample_seed, opt.n_pairs,
        opt.n_scalars,
        [&](const Vec& x, const Vec& y, const Scalar&, const Scalar&, double) {
          if (!is_zero_vec(y) || is_zero_vec(x)) return;
          const double v = std::abs(1.0 - alpha) *
                           norm_of(space, inst.eval_centered(1, x));
          cf.sup = std::max(cf.sup, v);
        },
        opt.max_attempts);
    cf.pass = cf.sup <= cf.tol;
    add_check(std::move(cf));
  }

  // Rational scaling probes for real-scalar linearity/quadraticity.
  if (opt.rational_scaling) {
    const double ts[] = {-1.5, -0.5, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.25, 1.5, 2.0};
    CheckRecord rq{"rational_scaling_q", 0, 0, true, true};
    CheckRecord rt{"rational_scaling_t", 0, 0, true, true};
    const int npts = std::min<int>(32, static_cast<int>(val.size()));
    for (double t : ts) {
      for (int i = 0; i < npts; ++i) {
        const Vec tx = Vec(t * val[i]);
        const double vq =
            norm_of(space, Vec(q_at(tx) - (t * t) * qv[i]));
        const double vt = norm_of(space, Vec(t_at(tx) - t * tv[i]));
        const double tol = 10.0 * (1.0 + t * t) * tol_eff[i];
        rq.sup = std::max(rq.sup, vq);
        rt.sup = std::max(rt.sup, vt);
        rq.tol = std::max(rq.tol, tol);
        rt.tol = std::max(rt.tol, tol);
        if (vq > tol) rq.pass = false;
        if (vt > tol) rt.pass = false;
      }
    }
    add_check(std::move(rq));
    add_check(std::move(rt));
  }

  bool ok = true;
  for (const auto& b : cert.bounds)
    if (b.gating && !b.pass) ok = false;
  for (const auto& c : cert.checks)
    if (c.gating && !c.pass) ok = false;
  if (cert.homogeneity_gated && !cert.homogeneity_pass) ok = false;
  cert.pass = ok;
  return cert;
}

}  // namespace orthostab
