#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthostab/errors.hpp"
#include "orthostab/rng.hpp"
#include "orthostab/spaces.hpp"

namespace orthostab {

enum class OrthKind { Trivial, InnerProduct, BirkhoffJames };

/// Residual targets used by the Thalesian solver per relation kind.
inline constexpr double kInnerProductResidualTarget = 1e-9;
inline constexpr double kBirkhoffJamesResidualTarget = 1e-6;

/// One of the three concrete orthogonality relations on a normed space.
struct Relation {
  OrthKind kind = OrthKind::InnerProduct;
  NormedSpace space;
  double tol = 1e-9;

  static Relation create(OrthKind k, const NormedSpace& space,
                         double tol = 1e-9) {
    if (!(tol > 0.0)) throw ConfigError("relation tol must be positive");
    if (k == OrthKind::InnerProduct && !space.has_inner_product())
      throw ConfigError(
          "inner_product relation needs a euclidean or weighted norm");
    return Relation{k, space, tol};
  }

  /// Scale-free effective tolerance for a membership decision on (x, y).
  double tol_for(const Vec& x, const Vec& y) const {
    return tol * (1.0 + norm_of(space, x) * norm_of(space, y));
  }
};

// ---------------------------------------------------------------------------
// Birkhoff-James machinery
// ---------------------------------------------------------------------------

namespace detail {

/// Right-hand derivative of t -> ||u + t v|| at t = 0.
inline double dir_deriv_right(const NormedSpace& s, const Vec& u,
                              const Vec& v) {
  if (is_zero_vec(u)) return norm_of(s, v);
  switch (s.kind) {
    case NormKind::Euclidean:
    case NormKind::WeightedEuclidean:
      return inner(s, u, v).real() / norm_of(s, u);
    case NormKind::PNorm: {
      const double p = s.p;
      double smooth = 0.0;
      double corner = 0.0;
      for (int i = 0; i < s.dim; ++i) {
        const double au = std::abs(u[i]);
        const double dv = (std::conj(u[i]) * v[i]).real();
        if (au > 0.0) {
          smooth += std::pow(au, p - 2.0) * dv;
        } else if (p == 1.0) {
          corner += std::abs(v[i]);
        }
        // for p > 1 a zero coordinate contributes nothing
      }
      if (p == 1.0) return smooth + corner;
      const double nu = norm_of(s, u);
      return smooth / std::pow(nu, p - 1.0);
    }
  }
  return 0.0;
}

inline double dir_deriv_left(const NormedSpace& s, const Vec& u,
                             const Vec& v) {
  return -dir_deriv_right(s, u, Vec(-v));
}

/// Signed orthogonality residual: zero iff 0 lies in the subdifferential of
/// t -> ||u + t v|| at 0, i.e. iff u is Birkhoff-James orthogonal to v.
inline double bj_signed_residual(const NormedSpace& s, const Vec& u,
                                 const Vec& v) {
  const double dl = dir_deriv_left(s, u, v);
  if (dl > 0.0) return dl;
  const double dr = dir_deriv_right(s, u, v);
  if (dr < 0.0) return dr;
  return 0.0;
}

}  // namespace detail

/// Global minimum of the convex map t -> ||x + t y|| found by bracket
/// expansion and golden-section search.
inline double bj_min_over_line(const NormedSpace& space, const Vec& x,
                               const Vec& y, int max_iter = 200) {
  if (is_zero_vec(y)) return norm_of(space, x);
  const auto g = [&](double t) { return norm_of(space, Vec(x + t * y)); };

  double a = -1.0, b = 1.0, m = 0.0;
  double ga = g(a), gb = g(b), gm = g(m);
  for (int i = 0; i < 120 && (gm > ga || gm > gb); ++i) {
    if (ga < gb) {
      b = m; gb = gm;
      m = a; gm = ga;
      a *= 2.0; ga = g(a);
    } else {
      a = m; ga = gm;
      m = b; gm = gb;
      b *= 2.0; gb = g(b);
    }
  }

  constexpr double kInvPhi = 0.6180339887498949;
  double lo = a, hi = b;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < max_iter && hi - lo > 1e-13 * (1.0 + std::abs(lo) +
                                                     std::abs(hi)); ++i) {
    if (gc < gd) {
      hi = d; d = c; gd = gc;
      c = hi - kInvPhi * (hi - lo);
      gc = g(c);
    } else {
      lo = c; c = d; gc = gd;
      d = lo + kInvPhi * (hi - lo);
      gd = g(d);
    }
  }
  return std::min({ga, gb, gm, gc, gd});
}

/// Nonnegative membership defect, relative scale. Zero means orthogonal.
inline double membership_defect(const Relation& rel, const Vec& x,
                                const Vec& y) {
  if (is_zero_vec(x) || is_zero_vec(y)) return 0.0;
  switch (rel.kind) {
    case OrthKind::Trivial:
      return independent_real(x, y) ? 0.0 : 1.0;
    case OrthKind::InnerProduct: {
      const double nx = norm_of(rel.space, x);
      const double ny = norm_of(rel.space, y);
      return std::abs(inner(rel.space, x, y)) / (1.0 + nx * ny);
    }
    case OrthKind::BirkhoffJames: {
      const double nx = norm_of(rel.space, x);
      const double defect = nx - bj_min_over_line(rel.space, x, y);
      return std::max(defect, 0.0) / (1.0 + nx);
    }
  }
  return 0.0;
}

/// Membership test.
///   trivial        — x = 0, y = 0, or linear independence over R
///   inner_product  — |<x,y>| <= tol * (1 + |x||y|)
///   birkhoff_james — min_t ||x + t y|| >= ||x|| - tol * (1 + |x||y|),
///                    the minimum located by golden-section search
inline bool is_orthogonal(const Relation& rel, const Vec& x, const Vec& y) {
  check_dim(rel.space, x);
  check_dim(rel.space, y);
  if (is_zero_vec(x) || is_zero_vec(y)) return true;
  switch (rel.kind) {
    case OrthKind::Trivial:
      return independent_real(x, y);
    case OrthKind::InnerProduct:
      return std::abs(inner(rel.space, x, y)) <= rel.tol_for(x, y);
    case OrthKind::BirkhoffJames:
      return bj_min_over_line(rel.space, x, y) >=
             norm_of(rel.space, x) - rel.tol_for(x, y);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Thalesian solver
// ---------------------------------------------------------------------------

struct ThalesianSolution {
  Vec y0;
  double res1 = 0.0;  // membership defect of (x, y0)
  double res2 = 0.0;  // membership defect of (x + y0, lambda x - y0)
};

namespace detail {

inline double thalesian_target(OrthKind kind) {
  switch (kind) {
    case OrthKind::InnerProduct: return kInnerProductResidualTarget;
    case OrthKind::BirkhoffJames: return kBirkhoffJamesResidualTarget;
    case OrthKind::Trivial: return 0.5;
  }
  return 0.5;
}

inline ThalesianSolution finish_solution(const Relation& rel, const Vec& x,
                                         double lambda, Vec y0) {
  ThalesianSolution sol;
  sol.res1 = membership_defect(rel, x, y0);
  sol.res2 = membership_defect(rel, Vec(x + y0), Vec(lambda * x - y0));
  sol.y0 = std::move(y0);
  const double target = thalesian_target(rel.kind);
  if (sol.res1 > target || sol.res2 > target)
    throw ThalesianFailure("thalesian solve missed residual target", sol.res1,
                           sol.res2);
  return sol;
}

/// Unit direction in the plane, coordinate-orthogonal to e.
inline Vec plane_complement(const Subspace2& plane, const Vec& e) {
  Vec w1 = plane.b1 - cdot(plane.b1, e) * e;
  Vec w2 = plane.b2 - cdot(plane.b2, e) * e;
  Vec w = w1.norm() >= w2.norm() ? w1 : w2;
  w -= cdot(w, e) * e;
  const double n = w.norm();
  if (n < 1e-12) throw Error("plane collapsed onto the base direction");
  return Vec(w / n);
}

}  // namespace detail

/// Solves the Thalesian condition in the plane: finds y0 in the plane with
/// x orthogonal to y0 and x + y0 orthogonal to lambda x - y0.
///
/// Inner-product relations use the closed form y0 = sqrt(lambda) |x| u with
/// u a unit vector in the plane orthogonal to x (then
/// <x + y0, lambda x - y0> = lambda |x|^2 - |y0|^2 = 0). Birkhoff-James
/// relations solve a direction angle and a radius: the first condition is
/// scale-free in y0 and pins the angle by bisection on the signed
/// derivative residual; the radius then follows from a second bisection.
/// A dense grid scan with local refinement backs both up when a bracket
/// cannot be established.
inline ThalesianSolution thalesian_solve(const Relation& rel,
                                         const Subspace2& plane, const Vec& x,
                                         double lambda) {
  check_dim(rel.space, x);
  if (lambda < 0.0) throw Error("thalesian lambda must be nonnegative");
  if (is_zero_vec(x)) throw Error("thalesian base point must be nonzero");
  if (!plane.contains(x))
    throw Error("thalesian base point is not in the plane");
  const NormedSpace& space = rel.space;

  if (rel.kind == OrthKind::Trivial) {
    const double scale = x.norm();
    Vec cand = plane.b1;
    if (rank2_ratio_real(x, cand) <= rank2_ratio_real(x, plane.b2))
      cand = plane.b2;
    Vec y0 = cand * scale;
    if (!is_orthogonal(rel, x, y0) ||
        !is_orthogonal(rel, Vec(x + y0), Vec(lambda * x - y0)))
      throw ThalesianFailure("trivial thalesian candidates failed", 1.0, 1.0);
    return detail::finish_solution(rel, x, lambda, std::move(y0));
  }

  if (rel.kind == OrthKind::InnerProduct) {
    const double nx = norm_of(space, x);
    const double xx = inner(space, x, x).real();
    Vec u = plane.b2 - (inner(space, plane.b2, x) / xx) * x;
    Vec alt = plane.b1 - (inner(space, plane.b1, x) / xx) * x;
    if (norm_of(space, alt) > norm_of(space, u)) u = alt;
    const double nu = norm_of(space, u);
    if (nu < 1e-12 * (1.0 + nx))
      throw ThalesianFailure("plane degenerate against base point", 1.0, 1.0);
    Vec y0 = u * (std::sqrt(lambda) * nx / nu);
    return detail::finish_solution(rel, x, lambda, std::move(y0));
  }

  // Birkhoff-James
  const Vec e = Vec(x / x.norm());
  const Vec g = detail::plane_complement(plane, e);
  const auto dir = [&](double theta) {
    return Vec(std::cos(theta) * e + std::sin(theta) * g);
  };

  const auto rho1 = [&](double theta) {
    return detail::bj_signed_residual(space, x, dir(theta));
  };

  std::optional<Vec> d_star;
  double lo = 0.0, hi = std::numbers::pi;
  double rlo = rho1(lo), rhi = rho1(hi);
  if (rlo > 0.0 && rhi < 0.0) {
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double rm = rho1(mid);
      if (rm > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    Vec d = dir(0.5 * (lo + hi));
    if (is_orthogonal(rel, x, d)) d_star = std::move(d);
  }

  const auto radius_residual = [&](const Vec& d, double r) {
    return detail::bj_signed_residual(space, Vec(x + r * d),
                                      Vec(lambda * x - r * d));
  };

  if (d_star) {
    const Vec& d = *d_star;
    if (lambda == 0.0 && radius_residual(d, 0.0) == 0.0)
      return detail::finish_solution(rel, x, lambda, zero_vec(space));
    double r_lo = 0.0;
    double r_hi = std::max(x.norm(), 1e-6);
    bool bracketed = false;
    if (radius_residual(d, r_lo) >= 0.0) {
      for (int i = 0; i < 80; ++i) {
        if (radius_residual(d, r_hi) < 0.0) { bracketed = true; break; }
        r_hi *= 2.0;
      }
    }
    if (bracketed) {
      for (int i = 0; i < 120; ++i) {
        const double rm = 0.5 * (r_lo + r_hi);
        if (radius_residual(d, rm) >= 0.0) r_lo = rm; else r_hi = rm;
      }
      Vec y0 = Vec(0.5 * (r_lo + r_hi) * d);
      try {
        return detail::finish_solution(rel, x, lambda, std::move(y0));
      } catch (const ThalesianFailure&) {
        // fall through to the grid
      }
    }
  }

  // Grid fallback: 400 x 400 scan over angle and radius, then local
  // coordinate refinement.
  const double nx2 = x.norm();
  const double r_scale = std::max(1.0, std::sqrt(std::max(lambda, 1e-3))) * nx2;
  double best_theta = 0.0, best_r = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  const auto score_at = [&](double theta, double r) {
    const Vec d = dir(theta);
    const Vec y0 = Vec(r * d);
    return membership_defect(rel, x, y0) +
           membership_defect(rel, Vec(x + y0), Vec(lambda * x - y0));
  };
  for (int i = 0; i < 400; ++i) {
    const double theta = std::numbers::pi * i / 400.0;
    for (int j = 0; j < 400; ++j) {
      const double r = r_scale * (1e-4 + 4.0 * j / 399.0);
      const double s = score_at(theta, r);
      if (s < best_score) {
        best_score = s;
        best_theta = theta;
        best_r = r;
      }
    }
  }
  double step_t = std::numbers::pi / 400.0;
  double step_r = r_scale * 4.0 / 399.0;
  for (int round = 0; round < 60; ++round) {
    bool moved = false;
    for (const auto& [dt, dr] : {std::pair{step_t, 0.0}, {-step_t, 0.0},
                                 {0.0, step_r}, {0.0, -step_r}}) {
      const double t2 = best_theta + dt;
      const double r2 = std::max(best_r + dr, 0.0);
      const double s = score_at(t2, r2);
      if (s < best_score) {
        best_score = s;
        best_theta = t2;
        best_r = r2;
        moved = true;
      }
    }
    if (!moved) {
      step_t *= 0.5;
      step_r *= 0.5;
    }
  }
  Vec y0 = Vec(best_r * dir(best_theta));
  return detail::finish_solution(rel, x, lambda, std::move(y0));
}

// ---------------------------------------------------------------------------
// Orthogonal-pair sampling
// ---------------------------------------------------------------------------

/// Draws a pair (x, y) with x orthogonal to y, both nonzero, magnitudes
/// log-uniform in [1e-2, 1e2]. Deterministic given the stream state.
inline std::pair<Vec, Vec> sample_orthogonal_pair(const Relation& rel,
                                                  Stream& rng,
                                                  int max_attempts = 64) {
  const NormedSpace& space = rel.space;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    switch (rel.kind) {
      case OrthKind::Trivial: {
        Vec x = sample_point(space, rng);
        Vec y = sample_point(space, rng);
        if (independent_real(x, y)) return {std::move(x), std::move(y)};
        break;
      }
      case OrthKind::InnerProduct: {
        Vec x = sample_point(space, rng);
        Vec w = gaussian_vec(space, rng);
        const double xx = inner(space, x, x).real();
        Vec y = w - (inner(space, w, x) / xx) * x;
        const double ny = norm_of(space, y);
        if (ny < 1e-9 * norm_of(space, w)) break;
        y *= rng.log_uniform(1e-2, 1e2) / ny;
        if (is_orthogonal(rel, x, y)) return {std::move(x), std::move(y)};
        break;
      }
      case OrthKind::BirkhoffJames: {
        Vec x = sample_point(space, rng);
        const Vec e = Vec(x / x.norm());
        Vec h = gaussian_vec(space, rng);
        h -= cdot(h, e) * e;
        const double nh = h.norm();
        if (nh < 1e-9) break;
        const Vec g = Vec(h / nh);
        const auto rho = [&](double theta) {
          return detail::bj_signed_residual(
              space, x, Vec(std::cos(theta) * e + std::sin(theta) * g));
        };
        double lo = 0.0, hi = std::numbers::pi;
        if (!(rho(lo) > 0.0 && rho(hi) < 0.0)) break;
        for (int i = 0; i < 100; ++i) {
          const double mid = 0.5 * (lo + hi);
          if (rho(mid) > 0.0) lo = mid; else hi = mid;
        }
        const double theta = 0.5 * (lo + hi);
        Vec y = Vec(std::cos(theta) * e + std::sin(theta) * g);
        y *= rng.log_uniform(1e-2, 1e2);
        if (is_orthogonal(rel, x, y)) return {std::move(x), std::move(y)};
        break;
      }
    }
  }
  throw SamplerExhausted("orthogonal pair sampler ran out of attempts");
}

// ---------------------------------------------------------------------------
// Axiom checker
// ---------------------------------------------------------------------------

struct AxiomWitness {
  std::string axiom;
  Vec x;
  Vec y;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  std::string detail;
};

struct AxiomReport {
  bool o1_pass = true;
  bool o2_pass = true;
  bool o3_pass = true;
  bool o4_pass = true;
  long o1_samples = 0;
  long o2_samples = 0;
  long o3_samples = 0;
  long o4_samples = 0;
  long o4_failures = 0;
  std::vector<AxiomWitness> failures;  // capped

  bool all_pass() const { return o1_pass && o2_pass && o3_pass && o4_pass; }
};

namespace detail {

inline void add_witness(AxiomReport& rep, AxiomWitness w) {
  if (rep.failures.size() < 16) rep.failures.push_back(std::move(w));
}

}  // namespace detail

/// Samples the four defining axioms of the relation. Failures are data in
/// the report, not exceptions.
inline AxiomReport check_axioms(const Relation& rel, std::uint64_t seed,
                                int n_samples) {
  if (n_samples < 1) throw ConfigError("check_axioms needs n_samples >= 1");
  const NormedSpace& space = rel.space;
  AxiomReport rep;
  Stream rng(seed);
  const Vec zero = zero_vec(space);

  // (O1) totality for zero.
  for (int i = 0; i < n_samples; ++i) {
    Vec x = sample_point(space, rng);
    ++rep.o1_samples;
    if (!is_orthogonal(rel, x, zero) || !is_orthogonal(rel, zero, x)) {
      rep.o1_pass = false;
      detail::add_witness(rep, {"O1", x, zero, 0, 0, 0, "zero totality"});
    }
  }

  // (O2) independence of nonzero orthogonal pairs.
  const int n_pairs = std::max(1, n_samples / 2);
  for (int i = 0; i < n_pairs; ++i) {
    try {
      auto [x, y] = sample_orthogonal_pair(rel, rng);
      ++rep.o2_samples;
      if (!independent_real(x, y)) {
        rep.o2_pass = false;
        detail::add_witness(rep, {"O2", x, y, 0, 0, 0, "dependent pair"});
      }
      // (O3) homogeneity over the same pair.
      for (int j = 0; j < 8; ++j) {
        double alpha, beta;
        if (j == 0) { alpha = 0.0; beta = rng.uniform(-3.0, 3.0); }
        else if (j == 1) { alpha = rng.uniform(-3.0, 3.0); beta = 0.0; }
        else if (j == 2) { alpha = -1.0; beta = 1.0; }
        else { alpha = rng.uniform(-3.0, 3.0); beta = rng.uniform(-3.0, 3.0); }
        ++rep.o3_samples;
        if (!is_orthogonal(rel, Vec(alpha * x), Vec(beta * y))) {
          rep.o3_pass = false;
          detail::add_witness(rep,
                              {"O3", x, y, alpha, beta, 0, "scaling broke"});
        }
      }
    } catch (const SamplerExhausted&) {
      rep.o2_pass = false;
      detail::add_witness(rep, {"O2", zero, zero, 0, 0, 0,
                                "pair sampler exhausted"});
      break;
    }
  }

  // (O4) Thalesian property on sampled (x, lambda) in sampled planes.
  const int n_thales = std::max(1, n_samples / 4);
  const double target = detail::thalesian_target(rel.kind);
  for (int i = 0; i < n_thales; ++i) {
    Vec x = sample_point(space, rng);
    Vec u = gaussian_vec(space, rng);
    double lambda;
    if (i % 4 == 0) lambda = 0.0;
    else if (i % 4 == 1) lambda = 1.0;
    else lambda = rng.uniform(0.0, 4.0);
    ++rep.o4_samples;
    try {
      const Subspace2 plane = span2(space, x, u);
      const ThalesianSolution sol = thalesian_solve(rel, plane, x, lambda);
      if (sol.res1 > target || sol.res2 > target) {
        ++rep.o4_failures;
        rep.o4_pass = false;
        detail::add_witness(rep, {"O4", x, sol.y0, 0, 0, lambda,
                                  "residuals above target"});
      }
    } catch (const DegenerateSubspace&) {
      --rep.o4_samples;  // plane draw failed, not an axiom statement
    } catch (const ThalesianFailure& tf) {
      ++rep.o4_failures;
      rep.o4_pass = false;
      detail::add_witness(rep, {"O4", x, zero, 0, 0, lambda,
                                "solver failed: res1=" +
                                    std::to_string(tf.res1) +
                                    " res2=" + std::to_string(tf.res2)});
    }
  }

  return rep;
}

}  // namespace orthostab
