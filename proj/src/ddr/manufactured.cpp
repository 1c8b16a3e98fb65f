#include "ddr/manufactured.hpp"

#include <cmath>
#include <random>

namespace ddr {

namespace manufactured {
namespace {
#include "ddr/manufactured_generated.inc"
} // namespace

double w(const Vec3& x) { return generated_w(x); }
Vec3 grad_w(const Vec3& x) { return generated_grad_w(x); }
Vec3 A(const Vec3& x) { return generated_A(x); }
Vec3 H(const Vec3& x) { return generated_H(x); }
Vec3 J(const Vec3& x) { return generated_J(x); }
} // namespace manufactured

namespace {
/// Uniform double in [lo, hi) from raw engine output, identical on every platform
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}
} // namespace

TrigScalar::TrigScalar(std::uint64_t seed, int terms, double frequency) {
  std::mt19937_64 rng(seed);
  for (int j = 0; j < terms; ++j) {
    m_a.push_back(uniform(rng, 0.5, 1.5));
    Vec3 b(uniform(rng, -1., 1.), uniform(rng, -1., 1.), uniform(rng, -1., 1.));
    m_b.push_back(frequency * b / std::max(1., b.norm()));
    m_c.push_back(uniform(rng, 0., 6.283185307179586));
  }
}

double TrigScalar::operator()(const Vec3& x) const {
  double s = 0.;
  for (std::size_t j = 0; j < m_a.size(); ++j) s += m_a[j] * std::sin(m_b[j].dot(x) + m_c[j]);
  return s;
}

Vec3 TrigScalar::gradient(const Vec3& x) const {
  Vec3 g = Vec3::Zero();
  for (std::size_t j = 0; j < m_a.size(); ++j) g += m_a[j] * std::cos(m_b[j].dot(x) + m_c[j]) * m_b[j];
  return g;
}

Eigen::Matrix3d TrigScalar::hessian(const Vec3& x) const {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t j = 0; j < m_a.size(); ++j)
    h -= m_a[j] * std::sin(m_b[j].dot(x) + m_c[j]) * m_b[j] * m_b[j].transpose();
  return h;
}

TrigVector::TrigVector(std::uint64_t seed, int terms, double frequency) {
  for (int c = 0; c < 3; ++c) m_c[c] = TrigScalar(seed * 3 + c + 1, terms, frequency);
}

Vec3 TrigVector::operator()(const Vec3& x) const { return Vec3(m_c[0](x), m_c[1](x), m_c[2](x)); }

Eigen::Matrix3d TrigVector::jacobian(const Vec3& x) const {
  Eigen::Matrix3d J;
  for (int c = 0; c < 3; ++c) J.row(c) = m_c[c].gradient(x).transpose();
  return J;
}

Vec3 TrigVector::curl(const Vec3& x) const {
  const Eigen::Matrix3d J = jacobian(x);
  return Vec3(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
}

double TrigVector::div(const Vec3& x) const { return jacobian(x).trace(); }

} // namespace ddr
