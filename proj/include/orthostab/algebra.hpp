#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "orthostab/errors.hpp"
#include "orthostab/rng.hpp"
#include "orthostab/spaces.hpp"

namespace orthostab {

enum class AlgebraKind { RealSigns, ComplexCircle, DiagonalReal };

/// Element of a concrete unital scalar algebra. Only the slot matching
/// `kind` is meaningful.
struct Scalar {
  AlgebraKind kind = AlgebraKind::RealSigns;
  double sign = 1.0;              // RealSigns: +1 or -1
  Cx z = Cx(1.0, 0.0);            // ComplexCircle: |z| = 1
  Eigen::VectorXd diag;           // DiagonalReal: entries in [-1, 1]

  double norm() const {
    switch (kind) {
      case AlgebraKind::RealSigns: return std::abs(sign);
      case AlgebraKind::ComplexCircle: return std::abs(z);
      case AlgebraKind::DiagonalReal: {
        double m = 0.0;
        for (Eigen::Index i = 0; i < diag.size(); ++i)
          m = std::max(m, std::abs(diag[i]));
        return m;
      }
    }
    return 0.0;
  }
};

/// Unital normed scalar algebra acting coordinatewise on a space. The
/// shipped algebras are commutative; nothing downstream assumes it.
struct ScalarAlgebra {
  AlgebraKind kind = AlgebraKind::RealSigns;
  NormedSpace action_space;

  static ScalarAlgebra create(AlgebraKind k, const NormedSpace& space) {
    if (k == AlgebraKind::ComplexCircle && space.field != Field::Complex)
      throw ConfigError("complex_circle algebra needs a complex space");
    return ScalarAlgebra{k, space};
  }

  Scalar one() const {
    Scalar a;
    a.kind = kind;
    if (kind == AlgebraKind::DiagonalReal)
      a.diag = Eigen::VectorXd::Ones(action_space.dim);
    return a;
  }

  /// Uniform-ish draw from the unit sphere of the algebra.
  Scalar sample_unit(Stream& rng) const {
    Scalar a;
    a.kind = kind;
    switch (kind) {
      case AlgebraKind::RealSigns:
        a.sign = rng.below(2) == 0 ? 1.0 : -1.0;
        break;
      case AlgebraKind::ComplexCircle: {
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        a.z = Cx(std::cos(t), std::sin(t));
        break;
      }
      case AlgebraKind::DiagonalReal: {
        const int d = action_space.dim;
        a.diag.resize(d);
        for (int i = 0; i < d; ++i) a.diag[i] = rng.uniform(-1.0, 1.0);
        // pin one entry to +-1 so the sup norm is exactly 1
        const int k = static_cast<int>(rng.below(d));
        a.diag[k] = rng.below(2) == 0 ? 1.0 : -1.0;
        break;
      }
    }
    return a;
  }

  /// Draw from the norm-one idempotents. For signs and the circle the only
  /// such element is the unit itself; diagonal algebras have 0/1 diagonals
  /// with at least one 1.
  Scalar sample_idempotent_unit(Stream& rng) const {
    Scalar a = one();
    if (kind == AlgebraKind::DiagonalReal) {
      const int d = action_space.dim;
      a.diag.setZero(d);
      for (int i = 0; i < d; ++i) a.diag[i] = rng.below(2) == 0 ? 0.0 : 1.0;
      a.diag[static_cast<int>(rng.below(d))] = 1.0;
    }
    return a;
  }
};

/// Module action of a on x.
inline Vec act(const Scalar& a, const Vec& x) {
  switch (a.kind) {
    case AlgebraKind::RealSigns:
      return a.sign == 1.0 ? x : Vec(-x);
    case AlgebraKind::ComplexCircle:
      return Vec(x * a.z);
    case AlgebraKind::DiagonalReal: {
      if (a.diag.size() != x.size())
        throw DimensionMismatch("diagonal scalar size " +
                                std::to_string(a.diag.size()) +
                                " does not match vector length " +
                                std::to_string(x.size()));
      Vec r(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) r[i] = a.diag[i] * x[i];
      return r;
    }
  }
  return x;
}

inline Scalar mul(const Scalar& a, const Scalar& b) {
  if (a.kind != b.kind) throw Error("scalars from different algebras");
  Scalar r = a;
  switch (a.kind) {
    case AlgebraKind::RealSigns: r.sign = a.sign * b.sign; break;
    case AlgebraKind::ComplexCircle: r.z = a.z * b.z; break;
    case AlgebraKind::DiagonalReal:
      if (a.diag.size() != b.diag.size())
        throw DimensionMismatch("diagonal scalars of different sizes");
      r.diag = a.diag.cwiseProduct(b.diag);
      break;
  }
  return r;
}

inline Scalar square(const Scalar& a) { return mul(a, a); }

inline bool is_idempotent(const Scalar& a) {
  switch (a.kind) {
    case AlgebraKind::RealSigns: return a.sign == 1.0;
    case AlgebraKind::ComplexCircle: return a.z == Cx(1.0, 0.0);
    case AlgebraKind::DiagonalReal:
      for (Eigen::Index i = 0; i < a.diag.size(); ++i)
        if (a.diag[i] != 0.0 && a.diag[i] != 1.0) return false;
      return true;
  }
  return false;
}

}  // namespace orthostab
