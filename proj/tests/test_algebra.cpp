#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "orthostab/algebra.hpp"

using namespace orthostab;

TEST_CASE("sign action") {
  const auto r2 = NormedSpace::euclidean(Field::Real, 2);
  const auto alg = ScalarAlgebra::create(AlgebraKind::RealSigns, r2);
  Scalar minus = alg.one();
  minus.sign = -1.0;
  CHECK(act(minus, real_vec({1, 2})) == real_vec({-1, -2}));
  CHECK(mul(minus, minus).sign == 1.0);
}

TEST_CASE("unit circle action") {
  const auto c1 = NormedSpace::euclidean(Field::Complex, 2);
  const auto alg = ScalarAlgebra::create(AlgebraKind::ComplexCircle, c1);
  Scalar i = alg.one();
  i.z = Cx(0.0, 1.0);
  Vec x = zero_vec(c1);
  x[0] = Cx(1.0, 0.0);
  const Vec r = act(i, x);
  CHECK(r[0] == Cx(0.0, 1.0));
  // angles add under multiplication
  Stream rng(3);
  for (int k = 0; k < 200; ++k) {
    const Scalar a = alg.sample_unit(rng);
    const Scalar b = alg.sample_unit(rng);
    const Cx prod = mul(a, b).z;
    CHECK(std::abs(prod - a.z * b.z) == 0.0);
    CHECK(std::abs(std::abs(prod) - 1.0) <= 1e-12);
  }
}

TEST_CASE("circle algebra rejects real spaces") {
  const auto r2 = NormedSpace::euclidean(Field::Real, 2);
  CHECK_THROWS_AS(ScalarAlgebra::create(AlgebraKind::ComplexCircle, r2),
                  ConfigError);
}

TEST_CASE("diagonal action and idempotents") {
  const auto r2 = NormedSpace::euclidean(Field::Real, 2);
  const auto alg = ScalarAlgebra::create(AlgebraKind::DiagonalReal, r2);
  Scalar proj = alg.one();
  proj.diag << 1.0, 0.0;
  CHECK(act(proj, real_vec({3, 4})) == real_vec({3, 0}));
  CHECK(is_idempotent(proj));
  CHECK(mul(proj, proj).diag == proj.diag);

  Scalar wrong = proj;
  wrong.diag = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(act(wrong, real_vec({1, 2})), DimensionMismatch);
}

TEST_CASE("unit element acts as identity") {
  const auto r3 = NormedSpace::euclidean(Field::Real, 3);
  const auto c3 = NormedSpace::euclidean(Field::Complex, 3);
  Stream rng(17);
  for (const auto& alg :
       {ScalarAlgebra::create(AlgebraKind::RealSigns, r3),
        ScalarAlgebra::create(AlgebraKind::DiagonalReal, r3),
        ScalarAlgebra::create(AlgebraKind::ComplexCircle, c3)}) {
    const Vec x = gaussian_vec(alg.action_space, rng);
    CHECK(act(alg.one(), x) == x);
    CHECK(alg.one().norm() == 1.0);
  }
}

TEST_CASE("sampled units live on the unit sphere and square correctly") {
  const auto r4 = NormedSpace::euclidean(Field::Real, 4);
  const auto c4 = NormedSpace::euclidean(Field::Complex, 4);
  Stream rng(29);
  for (const auto& alg :
       {ScalarAlgebra::create(AlgebraKind::RealSigns, r4),
        ScalarAlgebra::create(AlgebraKind::DiagonalReal, r4),
        ScalarAlgebra::create(AlgebraKind::ComplexCircle, c4)}) {
    for (int k = 0; k < 300; ++k) {
      const Scalar a = alg.sample_unit(rng);
      CHECK(std::abs(a.norm() - 1.0) <= 1e-12);
      CHECK(square(a).norm() <= 1.0 + 1e-12);
      const Vec x = gaussian_vec(alg.action_space, rng);
      const Vec two_step = act(a, act(a, x));
      const Vec squared = act(square(a), x);
      CHECK(norm_of(alg.action_space, Vec(two_step - squared)) <=
            1e-12 * (1.0 + norm_of(alg.action_space, x)));
    }
  }
}

TEST_CASE("idempotent samplers") {
  const auto r3 = NormedSpace::euclidean(Field::Real, 3);
  const auto c3 = NormedSpace::euclidean(Field::Complex, 3);
  Stream rng(101);

  const auto signs = ScalarAlgebra::create(AlgebraKind::RealSigns, r3);
  for (int k = 0; k < 20; ++k)
    CHECK(signs.sample_idempotent_unit(rng).sign == 1.0);

  const auto circle = ScalarAlgebra::create(AlgebraKind::ComplexCircle, c3);
  for (int k = 0; k < 20; ++k)
    CHECK(circle.sample_idempotent_unit(rng).z == Cx(1.0, 0.0));

  const auto diag = ScalarAlgebra::create(AlgebraKind::DiagonalReal, r3);
  bool saw_nontrivial = false;
  for (int k = 0; k < 50; ++k) {
    const Scalar a = diag.sample_idempotent_unit(rng);
    CHECK(is_idempotent(a));
    CHECK(a.norm() == 1.0);
    CHECK(mul(a, a).diag == a.diag);
    if (a.diag.sum() < 3.0) saw_nontrivial = true;
  }
  CHECK(saw_nontrivial);
}

TEST_CASE("mul is associative") {
  const auto r3 = NormedSpace::euclidean(Field::Real, 3);
  const auto alg = ScalarAlgebra::create(AlgebraKind::DiagonalReal, r3);
  Stream rng(41);
  for (int k = 0; k < 100; ++k) {
    const Scalar a = alg.sample_unit(rng);
    const Scalar b = alg.sample_unit(rng);
    const Scalar c = alg.sample_unit(rng);
    const Scalar lhs = mul(mul(a, b), c);
    const Scalar rhs = mul(a, mul(b, c));
    CHECK((lhs.diag - rhs.diag).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("action is norm-contractive for unit scalars") {
  const auto spaces = {NormedSpace::euclidean(Field::Real, 3),
                       NormedSpace::p_space(Field::Real, 3, 3.0),
                       NormedSpace::weighted(Field::Real,
                                             Eigen::Vector3d(1.0, 2.0, 0.5))};
  Stream rng(59);
  for (const auto& space : spaces) {
    for (const auto kind : {AlgebraKind::RealSigns, AlgebraKind::DiagonalReal}) {
      const auto alg = ScalarAlgebra::create(kind, space);
      for (int k = 0; k < 200; ++k) {
        const Scalar a = alg.sample_unit(rng);
        const Vec x = gaussian_vec(space, rng);
        CHECK(norm_of(space, act(a, x)) <=
              a.norm() * norm_of(space, x) * (1.0 + 1e-12));
      }
    }
  }
}
