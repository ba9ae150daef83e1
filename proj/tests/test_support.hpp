#pragma once

#include <cmath>
#include <random>

#include "anisotetra/geom.hpp"

namespace testing {

using anisotetra::Matrix3;
using anisotetra::Point3;
using anisotetra::Tetrahedron;

inline Matrix3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline Tetrahedron moved(const Tetrahedron& t, const Matrix3& R, const Point3& shift, double scale = 1.0) {
  Tetrahedron out;
  for (int i = 0; i < 4; ++i) out.v[i] = scale * (R * t.v[i]) + shift;
  return out;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Angle between two vectors, via atan2 for accuracy near 0 and pi.
inline double angle(const Point3& a, const Point3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace testing
