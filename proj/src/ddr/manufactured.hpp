// Closed-form test fields: the magnetostatics manufactured solution and
// seeded random trigonometric fields with exact derivatives.

#ifndef DDR_MANUFACTURED_HPP
#define DDR_MANUFACTURED_HPP

#include "ddr/common.hpp"

#include <cstdint>

namespace ddr {

/// w = sin^2(pi x) sin^2(pi y) sin(pi z), vanishing on the boundary of (0,1)^3
namespace manufactured {
double w(const Vec3& x);
Vec3 grad_w(const Vec3& x);
/// A = (d_y w, -d_x w, 0): divergence free, A x n = 0 and A . n = 0 on the boundary
Vec3 A(const Vec3& x);
/// H = curl A (mu = 1)
Vec3 H(const Vec3& x);
/// J = curl H
Vec3 J(const Vec3& x);
} // namespace manufactured

/// Scalar sum_j a_j sin(b_j . x + c_j)
class TrigScalar {
public:
  TrigScalar() = default;
  /// `terms` random modes with wave vectors of norm at most `frequency`
  TrigScalar(std::uint64_t seed, int terms, double frequency);

  double operator()(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  Eigen::Matrix3d hessian(const Vec3& x) const;

private:
  std::vector<double> m_a, m_c;
  std::vector<Vec3> m_b;
};

/// Vector field with independent TrigScalar components
class TrigVector {
public:
  TrigVector() = default;
  TrigVector(std::uint64_t seed, int terms, double frequency);

  Vec3 operator()(const Vec3& x) const;
  /// J(i, j) = d_j v_i
  Eigen::Matrix3d jacobian(const Vec3& x) const;
  Vec3 curl(const Vec3& x) const;
  double div(const Vec3& x) const;

private:
  TrigScalar m_c[3];
};

} // namespace ddr

#endif
