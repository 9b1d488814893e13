#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fekit {

/// Fixed upper bound on the spatial dimension of geometry data. Vectors and
/// tensors carry this capacity so that no dynamic allocation happens inside
/// integration loops; 2D (and 1D) runs inside the 3D capacity.
inline constexpr int max_space_dims = 3;

/// Small spatial vector with fixed capacity. The active dimension is implied
/// by the surrounding context; unused entries stay zero.
struct Vec {
  std::array<double, max_space_dims> v{0.0, 0.0, 0.0};

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < max_space_dims; ++i) v[i] += o.v[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < max_space_dims; ++i) v[i] -= o.v[i];
    return *this;
  }
  Vec& operator*=(double a) {
    for (auto& x : v) x *= a;
    return *this;
  }
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double a, Vec b) { return b *= a; }

inline double dot(const Vec& a, const Vec& b) {
  return a.v[0] * b.v[0] + a.v[1] * b.v[1] + a.v[2] * b.v[2];
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec cross(const Vec& a, const Vec& b) {
  Vec c;
  c[0] = a[1] * b[2] - a[2] * b[1];
  c[1] = a[2] * b[0] - a[0] * b[2];
  c[2] = a[0] * b[1] - a[1] * b[0];
  return c;
}

/// Square spatial matrix with fixed capacity (row major).
struct Mat {
  std::array<double, max_space_dims * max_space_dims> m{};

  double& operator()(int i, int j) { return m[static_cast<std::size_t>(i * max_space_dims + j)]; }
  double operator()(int i, int j) const { return m[static_cast<std::size_t>(i * max_space_dims + j)]; }

  static Mat identity(int dim) {
    Mat a;
    for (int i = 0; i < dim; ++i) a(i, i) = 1.0;
    return a;
  }
};

inline double det(const Mat& a, int dim) {
  switch (dim) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      throw std::invalid_argument("det: dimension out of range");
  }
}

/// Closed-form adjugate inverse for dim = 1, 2, 3.
inline Mat inverse(const Mat& a, int dim, double d) {
  Mat inv;
  const double id = 1.0 / d;
  switch (dim) {
    case 1:
      inv(0, 0) = id;
      break;
    case 2:
      inv(0, 0) = a(1, 1) * id;
      inv(0, 1) = -a(0, 1) * id;
      inv(1, 0) = -a(1, 0) * id;
      inv(1, 1) = a(0, 0) * id;
      break;
    case 3:
      inv(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) * id;
      inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) * id;
      inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * id;
      inv(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) * id;
      inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) * id;
      inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) * id;
      inv(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) * id;
      inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) * id;
      inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) * id;
      break;
    default:
      throw std::invalid_argument("inverse: dimension out of range");
  }
  return inv;
}

}  // namespace fekit
