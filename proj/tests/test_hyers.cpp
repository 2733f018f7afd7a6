#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracle_helpers.hpp"
#include "orthostab/hyers.hpp"

using namespace orthostab;

namespace {

Relation ip_relation(int dim, Field f = Field::Real) {
  return Relation::create(OrthKind::InnerProduct,
                          NormedSpace::euclidean(f, dim));
}

PexiderInstance even_instance(int dim, double c_q, double delta,
                              std::uint64_t seed, double offset_scale) {
  const auto rel = ip_relation(dim);
  GroundTruth gt;
  gt.quad_coeff = c_q;
  gt.noise_amp = delta;
  gt.seed = seed;
  if (offset_scale != 0.0) {
    Stream rng(seed + 70);
    gt.c1 = gaussian_vec(rel.space, rng) * offset_scale;
    gt.c2 = gaussian_vec(rel.space, rng) * offset_scale;
    gt.c3 = gaussian_vec(rel.space, rng) * offset_scale;
  }
  return PexiderInstance::create(rel, Parity::Even, std::move(gt));
}

PexiderInstance odd_instance(int dim, double delta, std::uint64_t seed,
                             bool diagonal = false) {
  const auto rel = ip_relation(dim);
  GroundTruth gt;
  gt.noise_amp = delta;
  gt.seed = seed;
  gt.linear = Mat::Zero(dim, dim);
  Stream rng(seed + 71);
  for (int r = 0; r < dim; ++r) {
    if (diagonal) {
      gt.linear(r, r) = Cx(rng.uniform(0.5, 1.5), 0.0);
    } else {
      for (int c = 0; c < dim; ++c) gt.linear(r, c) = Cx(rng.gaussian(), 0.0);
    }
  }
  return PexiderInstance::create(rel, Parity::Odd, std::move(gt));
}

PexiderInstance general_instance(int dim, double c_q, double delta,
                                 std::uint64_t seed) {
  const auto rel = ip_relation(dim);
  GroundTruth gt;
  gt.quad_coeff = c_q;
  gt.noise_amp = delta;
  gt.seed = seed;
  Stream rng(seed + 72);
  gt.linear = Mat::Zero(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      gt.linear(r, c) = Cx(rng.gaussian() * 0.7, 0.0);
  gt.c1 = gaussian_vec(rel.space, rng) * 0.4;
  gt.c2 = gaussian_vec(rel.space, rng) * 0.4;
  gt.c3 = gaussian_vec(rel.space, rng) * 0.4;
  return PexiderInstance::create(rel, Parity::General, std::move(gt));
}

ApproximantConfig quad_cfg() { return {40, 1e-10, ApproxMode::Quadratic}; }

}  // namespace

TEST_CASE("center and split on pure parities") {
  const auto even = even_instance(3, 1.0, 0.0, 1, 0.8);
  Stream rng(5);
  const Vec x = sample_point(even.space(), rng);
  const auto [e, o] = even.center_and_split(1, x);
  CHECK(e == even.eval_centered(1, x));
  CHECK(is_zero_vec(o));

  const auto odd = odd_instance(3, 0.0, 2);
  const auto [e2, o2] = odd.center_and_split(1, x);
  CHECK(is_zero_vec(e2));
  CHECK(o2 == odd.eval_centered(1, x));
}

TEST_CASE("center and split carries parity exactly and recombines") {
  const auto inst = general_instance(4, 1.3, 0.05, 3);
  Stream rng(7);
  for (int i = 0; i < 500; ++i) {
    const Vec x = sample_point(inst.space(), rng);
    for (int fi : {1, 2, 3}) {
      const auto [e, o] = inst.center_and_split(fi, x);
      const auto [em, om] = inst.center_and_split(fi, Vec(-x));
      CHECK(em == e);            // even part is exactly even
      CHECK(om == Vec(-o));      // odd part is exactly odd
      // recombination is exact up to the final rounding of the halves
      const Vec f = inst.eval_centered(fi, x);
      for (int k = 0; k < inst.space().dim; ++k) {
        const double scale = std::abs(e[k]) + std::abs(o[k]) + std::abs(f[k]);
        CHECK(std::abs(e[k] + o[k] - f[k]) <= 0x1.0p-50 * (1.0 + scale));
      }
    }
  }
}

TEST_CASE("exactly quadratic maps converge at the first step") {
  const auto space = NormedSpace::euclidean(Field::Real, 3);
  const auto f = [&](const Vec& x) {
    Vec v = zero_vec(space);
    v[0] = Cx(x.squaredNorm(), 0.0);
    return v;
  };
  Stream rng(9);
  for (int i = 0; i < 50; ++i) {
    const Vec x = sample_point(space, rng);
    const auto res = quadratic_approximant(space, f, x, quad_cfg());
    CHECK(res.steps == 1);
    CHECK(res.last_increment == 0.0);
    CHECK(res.value == f(x));
  }
}

TEST_CASE("exactly linear maps converge at the first step") {
  const auto space = NormedSpace::euclidean(Field::Real, 3);
  Mat L = Mat::Zero(3, 3);
  Stream mr(11);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) L(r, c) = Cx(mr.gaussian(), 0.0);
  const auto f = [&](const Vec& x) { return Vec(L * x); };
  ApproximantConfig cfg{40, 1e-10, ApproxMode::Additive};
  Stream rng(13);
  for (int i = 0; i < 50; ++i) {
    const Vec x = sample_point(space, rng);
    const auto res = additive_approximant(space, f, x, cfg);
    CHECK(res.steps == 1);
    CHECK(res.value == f(x));
  }
}

TEST_CASE("bounded even noise washes out geometrically") {
  const auto space = NormedSpace::euclidean(Field::Real, 2);
  const double delta = 1e-2;
  // Custom bounded noise, unrelated to the instance noise field.
  const auto wiggle = [&](const Vec& x) {
    const double t =
        std::sin(17.3 * x[0].real()) * std::cos(5.1 * std::abs(x[1]));
    Vec v(2);
    v[0] = Cx(x.squaredNorm() + delta * t, 0.0);
    v[1] = Cx(delta * std::sin(3.7 * std::abs(x[0])), 0.0);
    return v;
  };
  Stream rng(15);
  for (int i = 0; i < 50; ++i) {
    const Vec x = sample_point(space, rng, 1e-1, 1e1);
    const auto res = quadratic_approximant(space, wiggle, x, quad_cfg());
    Vec exact = zero_vec(space);
    exact[0] = Cx(x.squaredNorm(), 0.0);
    const double err = norm_of(space, Vec(res.value - exact));
    const double sqrt2 = std::sqrt(2.0);
    // loose geometric-series bound, then the tight per-run bound
    CHECK(err <= oracle::geometric_noise_bound(5.0 * sqrt2 * delta, 4.0, 60));
    CHECK(err <= std::pow(4.0, -res.steps) * sqrt2 * delta * (1.0 + 1e-9));
  }
}

TEST_CASE("bounded odd noise washes out at ratio one half") {
  const auto space = NormedSpace::euclidean(Field::Real, 2);
  const double delta = 5e-3;
  Mat L = Mat::Identity(2, 2) * 1.7;
  const auto wiggle = [&](const Vec& x) {
    Vec v = Vec(L * x);
    v[1] += Cx(delta * std::sin(7.9 * x[0].real()), 0.0);
    return v;
  };
  ApproximantConfig cfg{44, 1e-12, ApproxMode::Additive};
  Stream rng(17);
  for (int i = 0; i < 50; ++i) {
    const Vec x = sample_point(space, rng, 1e-1, 1e1);
    const auto res = additive_approximant(space, wiggle, x, cfg);
    const double err = norm_of(space, Vec(res.value - L * x));
    CHECK(err <= oracle::geometric_noise_bound(3.0 * delta, 2.0, 80));
    CHECK(err <= std::pow(2.0, -res.steps) * delta * (1.0 + 1e-9));
  }
}

TEST_CASE("orbit overflow is loud") {
  const auto space = NormedSpace::euclidean(Field::Real, 2);
  const auto f = [&](const Vec& x) {
    Vec v = zero_vec(space);
    v[0] = Cx(x.squaredNorm(), 0.0);
    return v;
  };
  Vec huge = real_vec({1e200, 0});
  CHECK_THROWS_AS(quadratic_approximant(space, f, huge, quad_cfg()),
                  OrbitOverflow);
}

TEST_CASE("approximant config is validated") {
  const auto space = NormedSpace::euclidean(Field::Real, 2);
  const auto f = [](const Vec& x) { return x; };
  ApproximantConfig bad{60, 1e-10, ApproxMode::Additive};
  CHECK_THROWS_AS(additive_approximant(space, f, basis_vec(space, 0), bad),
                  ConfigError);
  ApproximantConfig wrong_mode{30, 1e-10, ApproxMode::Additive};
  CHECK_THROWS_AS(
      quadratic_approximant(space, f, basis_vec(space, 0), wrong_mode),
      ConfigError);
}

TEST_CASE("canonicalize recovers exact ground truth") {
  const auto rel = ip_relation(4);
  GroundTruth gt;
  gt.quad_coeff = 2.0;
  gt.linear = Mat::Identity(4, 4);
  const auto inst =
      PexiderInstance::create(rel, Parity::General, std::move(gt));
  const auto val = validation_points(rel.space, 19, 40);
  const auto dec = canonicalize(inst, quad_cfg(), val);
  CHECK((dec.q_matrix - 2.0 * Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <=
        1e-10);
  CHECK((dec.t_matrix - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(dec.q_residual <= 1e-10);
  CHECK(dec.t_residual <= 1e-10);
}

TEST_CASE("canonicalize with no quadratic part returns a zero form") {
  const auto inst = odd_instance(3, 0.0, 23);
  const auto val = validation_points(inst.space(), 29, 30);
  const auto dec = canonicalize(inst, quad_cfg(), val);
  CHECK(dec.q_matrix_max_abs() <= 1e-12);
  CHECK((dec.t_matrix - inst.ground().linear).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("canonicalize on a weighted norm recovers the weight matrix") {
  const auto space =
      NormedSpace::weighted(Field::Real, Eigen::Vector3d(0.5, 2.0, 3.0));
  const auto rel = Relation::create(OrthKind::InnerProduct, space);
  GroundTruth gt;
  gt.quad_coeff = 1.5;
  const auto inst = PexiderInstance::create(rel, Parity::Even, std::move(gt));
  const auto val = validation_points(space, 31, 30);
  const auto dec = canonicalize(inst, quad_cfg(), val);
  Mat expect = Mat::Zero(3, 3);
  expect(0, 0) = 0.75;
  expect(1, 1) = 3.0;
  expect(2, 2) = 4.5;
  CHECK((dec.q_matrix - expect).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("canonicalize recovers complex linear parts") {
  const auto rel = ip_relation(3, Field::Complex);
  GroundTruth gt;
  gt.quad_coeff = 1.2;
  gt.linear = Mat::Zero(3, 3);
  Stream rng(37);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      gt.linear(r, c) = Cx(rng.gaussian(), rng.gaussian());
  const Mat L = gt.linear;
  const auto inst =
      PexiderInstance::create(rel, Parity::General, std::move(gt));
  const auto val = validation_points(rel.space, 41, 30);
  const auto dec = canonicalize(inst, quad_cfg(), val);
  CHECK((dec.t_matrix - L).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((dec.q_matrix - 1.2 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <=
        1e-10);
  // hermitian by construction
  CHECK((dec.q_matrix - dec.q_matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("canonicalize tracks the linear part through noise") {
  const double delta = 1e-3;
  const auto inst = odd_instance(4, delta, 43);
  const auto val = validation_points(inst.space(), 47, 30);
  const auto dec = canonicalize(inst, quad_cfg(), val);
  CHECK((dec.t_matrix - inst.ground().linear).cwiseAbs().maxCoeff() <=
        delta * 1e-2);
}

namespace {

StabilityCertificate run_certify(const PexiderInstance& inst,
                                 AlgebraKind algebra_kind, DefectShape shape,
                                 ScalarMode mode, std::uint64_t seed,
                                 bool orbit_checks,
                                 bool gate_homogeneity = false) {
  const auto alg = ScalarAlgebra::create(algebra_kind, inst.space());
  const auto est = estimate_epsilon(inst, alg, shape, mode, seed, 200, 6);
  const auto cfg = quad_cfg();
  const auto val = validation_points(inst.space(), seed ^ 0x7a1, 40);
  const auto dec = canonicalize(inst, cfg, val);
  CertifyOptions opt;
  opt.shape = shape;
  opt.scalar_mode = mode;
  opt.n_validation = 40;
  opt.n_scalar_samples = 16;
  opt.n_homogeneity_points = 24;
  opt.n_pair_checks = 32;
  opt.n_pairs = 200;
  opt.n_scalars = 6;
  opt.sample_seed = seed;
  opt.validation_seed = seed ^ 0x7a1;
  opt.gate_homogeneity = gate_homogeneity;
  opt.orbit_checks = orbit_checks;
  return certify(inst, alg, est, dec, cfg, opt);
}

}  // namespace

TEST_CASE("certify an even instance under the even system") {
  const auto inst = even_instance(3, 1.5, 1e-3, 51, 0.6);
  const auto cert = run_certify(inst, AlgebraKind::RealSigns, DefectShape::Eq1,
                                ScalarMode::Units, 53, true);
  CHECK(cert.pass);
  REQUIRE(cert.bounds.size() == 3);
  for (const auto& b : cert.bounds) {
    CHECK(b.pass);
    CHECK(b.ratio <= 1.0);
  }
  for (const auto& c : cert.checks) CHECK(c.pass);
}

TEST_CASE("certify an odd instance under the odd system") {
  const auto inst = odd_instance(3, 1e-3, 57);
  const auto cert = run_certify(inst, AlgebraKind::RealSigns,
                                DefectShape::Eq12, ScalarMode::Units, 59, true);
  CHECK(cert.pass);
  for (const auto& b : cert.bounds) {
    CHECK(b.pass);
    CHECK(b.ratio <= 1.0);
  }
}

TEST_CASE("certify a general instance under the two-scalar system") {
  const auto inst = general_instance(4, 1.0, 1e-2, 61);
  const auto cert = run_certify(inst, AlgebraKind::RealSigns,
                                DefectShape::Eq22, ScalarMode::Units, 63,
                                false);
  CHECK(cert.pass);
  int recorded = 0;
  for (const auto& b : cert.bounds) {
    if (!b.gating) ++recorded;
    CHECK(b.pass);
  }
  CHECK(recorded == 2);  // even/odd intermediates are recorded, not gated
  CHECK(cert.homogeneity_t_sup <= cert.homogeneity_tol);
  CHECK(cert.homogeneity_q_sup <= cert.homogeneity_tol);
}

TEST_CASE("certify gates homogeneity on a compatible diagonal instance") {
  const auto inst = odd_instance(4, 1e-2, 67, /*diagonal=*/true);
  const auto cert =
      run_certify(inst, AlgebraKind::DiagonalReal, DefectShape::Eq12,
                  ScalarMode::Units, 69, true, /*gate_homogeneity=*/true);
  CHECK(cert.homogeneity_gated);
  CHECK(cert.homogeneity_pass);
  CHECK(cert.pass);
}

TEST_CASE("certify a collapsed instance") {
  const auto rel = ip_relation(3);
  GroundTruth gt;
  gt.noise_amp = 5e-2;
  gt.seed = 71;
  const auto inst =
      PexiderInstance::create(rel, Parity::General, std::move(gt), 2.0);
  const auto alg = ScalarAlgebra::create(AlgebraKind::RealSigns, inst.space());
  const auto est = estimate_epsilon(inst, alg, DefectShape::Eq29,
                                    ScalarMode::IdentityOnly, 73, 200, 1);
  const auto cfg = quad_cfg();
  const auto val = validation_points(inst.space(), 75, 40);
  const auto dec = canonicalize(inst, cfg, val);
  CHECK(dec.q_matrix_max_abs() <= 1e-8);
  CHECK(dec.t_matrix_max_abs() <= 1e-8);
  CertifyOptions opt;
  opt.shape = DefectShape::Eq29;
  opt.scalar_mode = ScalarMode::IdentityOnly;
  opt.n_validation = 40;
  opt.n_pairs = 200;
  opt.n_scalars = 1;
  opt.sample_seed = 73;
  opt.validation_seed = 75;
  const auto cert = certify(inst, alg, est, dec, cfg, opt);
  CHECK(cert.pass);
  bool saw_collapse = false;
  for (const auto& c : cert.checks)
    if (c.name == "collapse_f1_vs_eps") {
      saw_collapse = true;
      CHECK(c.pass);
    }
  CHECK(saw_collapse);
}
