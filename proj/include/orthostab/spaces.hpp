#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <utility>

#include "orthostab/errors.hpp"
#include "orthostab/rng.hpp"

namespace orthostab {

using Cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 64;

/// Singular-value ratio below which two vectors count as dependent.
inline constexpr double kIndependenceTol = 1e-10;

enum class Field { Real, Complex };

enum class NormKind { Euclidean, PNorm, WeightedEuclidean };

/// Finite-dimensional coordinate space with a selectable norm. Domain and
/// codomain of every map in the toolkit. Immutable after construction.
struct NormedSpace {
  Field field = Field::Real;
  int dim = kMinDim;
  NormKind kind = NormKind::Euclidean;
  double p = 2.0;              // PNorm only
  Eigen::VectorXd weights;     // WeightedEuclidean only

  static NormedSpace euclidean(Field f, int dim) {
    NormedSpace s{f, dim, NormKind::Euclidean, 2.0, {}};
    s.validate();
    return s;
  }

  static NormedSpace p_space(Field f, int dim, double p) {
    NormedSpace s{f, dim, NormKind::PNorm, p, {}};
    s.validate();
    return s;
  }

  static NormedSpace weighted(Field f, Eigen::VectorXd w) {
    const int dim = static_cast<int>(w.size());
    NormedSpace s{f, dim, NormKind::WeightedEuclidean, 2.0, std::move(w)};
    s.validate();
    return s;
  }

  void validate() const {
    if (dim < kMinDim || dim > kMaxDim)
      throw ConfigError("space dim must be in [" + std::to_string(kMinDim) +
                        ", " + std::to_string(kMaxDim) + "], got " +
                        std::to_string(dim));
    if (kind == NormKind::PNorm && !(p >= 1.0))
      throw ConfigError("p-norm requires p >= 1");
    if (kind == NormKind::WeightedEuclidean) {
      if (weights.size() != dim)
        throw ConfigError("weight count must equal dim");
      for (int i = 0; i < dim; ++i)
        if (!(weights[i] > 0.0))
          throw ConfigError("weights must be strictly positive");
    }
  }

  /// True for norms induced by an inner product.
  bool has_inner_product() const { return kind != NormKind::PNorm; }

  bool operator==(const NormedSpace& o) const {
    return field == o.field && dim == o.dim && kind == o.kind && p == o.p &&
           weights.size() == o.weights.size() &&
           (weights.size() == 0 || weights == o.weights);
  }
};

inline void check_dim(const NormedSpace& space, const Vec& v,
                      const char* what = "vector") {
  if (v.size() != space.dim)
    throw DimensionMismatch(std::string(what) + " has length " +
                            std::to_string(v.size()) + ", space dim is " +
                            std::to_string(space.dim));
}

inline Vec zero_vec(const NormedSpace& space) {
  return Vec::Zero(space.dim);
}

inline Vec basis_vec(const NormedSpace& space, int k) {
  Vec v = Vec::Zero(space.dim);
  v[k] = Cx(1.0, 0.0);
  return v;
}

inline Vec real_vec(std::initializer_list<double> coords) {
  Vec v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = Cx(c, 0.0);
  return v;
}

inline bool is_zero_vec(const Vec& v) { return v.isZero(0.0); }

/// Sesquilinear coordinate dot product: sum_k x_k * conj(y_k).
inline Cx cdot(const Vec& x, const Vec& y) {
  return x.cwiseProduct(y.conjugate()).sum();
}

/// Selected norm of v in its space.
inline double norm_of(const NormedSpace& space, const Vec& v) {
  check_dim(space, v);
  switch (space.kind) {
    case NormKind::Euclidean:
      return v.norm();
    case NormKind::PNorm: {
      double s = 0.0;
      for (int i = 0; i < space.dim; ++i) s += std::pow(std::abs(v[i]), space.p);
      return std::pow(s, 1.0 / space.p);
    }
    case NormKind::WeightedEuclidean: {
      double s = 0.0;
      for (int i = 0; i < space.dim; ++i) s += space.weights[i] * std::norm(v[i]);
      return std::sqrt(s);
    }
  }
  return 0.0;
}

/// Norm-induced inner product (euclidean or weighted euclidean only).
inline Cx inner(const NormedSpace& space, const Vec& x, const Vec& y) {
  check_dim(space, x);
  check_dim(space, y);
  if (!space.has_inner_product())
    throw Error("inner product undefined for p-norm spaces");
  if (space.kind == NormKind::Euclidean) return cdot(x, y);
  Cx s(0.0, 0.0);
  for (int i = 0; i < space.dim; ++i)
    s += space.weights[i] * x[i] * std::conj(y[i]);
  return s;
}

namespace detail {

template <class Matrix>
double sv_ratio(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return sv[0] > 0.0 ? sv[1] / sv[0] : 0.0;
}

}  // namespace detail

/// Ratio of singular values of [x y] viewed over the real field (complex
/// coordinates embed as pairs of real ones). Independence test for the
/// trivial relation and axiom (O2).
inline double rank2_ratio_real(const Vec& x, const Vec& y) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd m(2 * n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = x[i].real();
    m(n + i, 0) = x[i].imag();
    m(i, 1) = y[i].real();
    m(n + i, 1) = y[i].imag();
  }
  return detail::sv_ratio(m);
}

/// Ratio of singular values of [x y] over the space's own field.
inline double rank2_ratio_field(const Vec& x, const Vec& y) {
  Mat m(x.size(), 2);
  m.col(0) = x;
  m.col(1) = y;
  return detail::sv_ratio(m);
}

inline bool independent_real(const Vec& x, const Vec& y) {
  return rank2_ratio_real(x, y) > kIndependenceTol;
}

/// Two-dimensional subspace with a coordinate-orthonormal basis.
struct Subspace2 {
  Vec b1;
  Vec b2;

  /// Coordinates of v in the basis (b1, b2).
  std::pair<Cx, Cx> coords(const Vec& v) const {
    return {cdot(v, b1), cdot(v, b2)};
  }

  /// Distance from v to the plane (coordinate euclidean).
  double distance(const Vec& v) const {
    const auto [c1, c2] = coords(v);
    return (v - c1 * b1 - c2 * b2).norm();
  }

  bool contains(const Vec& v, double tol = 1e-9) const {
    return distance(v) <= tol * (1.0 + v.norm());
  }
};

/// Plane through u and v (span over the space's field), with an
/// orthonormal-in-coordinates basis produced by Gram-Schmidt.
inline Subspace2 span2(const NormedSpace& space, const Vec& u, const Vec& v) {
  check_dim(space, u);
  check_dim(space, v);
  if (rank2_ratio_field(u, v) <= kIndependenceTol)
    throw DegenerateSubspace("span2 inputs are linearly dependent");
  Vec b1 = u / u.norm();
  Vec w = v - cdot(v, b1) * b1;
  w -= cdot(w, b1) * b1;  // second pass sharpens orthogonality
  Vec b2 = w / w.norm();
  return Subspace2{std::move(b1), std::move(b2)};
}

/// Componentwise standard Gaussian vector (complex components get
/// independent real and imaginary parts).
inline Vec gaussian_vec(const NormedSpace& space, Stream& rng) {
  Vec v(space.dim);
  for (int i = 0; i < space.dim; ++i) {
    const double re = rng.gaussian();
    const double im = space.field == Field::Complex ? rng.gaussian() : 0.0;
    v[i] = Cx(re, im);
  }
  return v;
}

/// Gaussian direction rescaled so the space norm is log-uniform in
/// [lo, hi]. The default range matches the sampling contract used across
/// the toolkit.
inline Vec sample_point(const NormedSpace& space, Stream& rng,
                        double lo = 1e-2, double hi = 1e2) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vec g = gaussian_vec(space, rng);
    const double n = norm_of(space, g);
    const double r = rng.log_uniform(lo, hi);
    if (n > 1e-300) return Vec(g * (r / n));
  }
  throw SamplerExhausted("gaussian direction degenerated repeatedly");
}

}  // namespace orthostab
