// Quadrature rules on edges, polygonal faces and polyhedral cells.
//
// Simplex rules are collapsed Gauss-Jacobi products; faces and cells are
// split into fans of simplices around their star point.

#ifndef DDR_QUADRATURE_HPP
#define DDR_QUADRATURE_HPP

#include "ddr/common.hpp"
#include "ddr/mesh.hpp"

#include <functional>

namespace ddr {

struct QuadRule {
  Points points;
  Eigen::VectorXd weights;
  int degree = 0;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
};

/// Gauss-Jacobi nodes and weights on [-1,1] for the weight (1-x)^alpha (1+x)^beta
void gauss_jacobi(int n, double alpha, double beta, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Rule exact up to `degree` on the segment [a, b]
QuadRule segment_rule(const Vec3& a, const Vec3& b, int degree);
/// Rule exact up to `degree` on the triangle (a, b, c)
QuadRule triangle_rule(const Vec3& a, const Vec3& b, const Vec3& c, int degree);
/// Rule exact up to `degree` on the tetrahedron (a, b, c, d)
QuadRule tetrahedron_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, int degree);

/// Rule exact up to `degree` on a mesh entity of dimension 1, 2 or 3
QuadRule entity_rule(const Mesh& mesh, EntityRef entity, int degree);

/// Sum of w_i f(p_i)
double integrate(const QuadRule& rule, const std::function<double(const Vec3&)>& f);

} // namespace ddr

#endif
