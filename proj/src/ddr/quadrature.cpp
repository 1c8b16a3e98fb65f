#include "ddr/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

namespace ddr {

void gauss_jacobi(int n, double alpha, double beta, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw ArgumentError("Gauss-Jacobi rule needs at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int i = 0; i < n; ++i) {
    const double m = 2. * i + ab;
    J(i, i) = (i == 0) ? (beta - alpha) / (ab + 2.) : (beta * beta - alpha * alpha) / (m * (m + 2.));
    if (i + 1 < n) {
      const double k = i + 1;
      const double mk = 2. * k + ab;
      const double b = 4. * k * (k + alpha) * (k + beta) * (k + ab) / (mk * mk * (mk + 1.) * (mk - 1.));
      J(i, i + 1) = J(i + 1, i) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2., ab + 1.) * std::tgamma(alpha + 1.) * std::tgamma(beta + 1.) / std::tgamma(ab + 2.);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) weights(i) = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
}

namespace {

/// Reference 1D rule on [0,1] for weight (1-u)^alpha, cached by (n, alpha)
struct UnitRule {
  Eigen::VectorXd x, w;
};

const UnitRule& unit_rule(int n, int alpha) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, UnitRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(n, alpha);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  UnitRule r;
  Eigen::VectorXd t, w;
  gauss_jacobi(n, alpha, 0., t, w);
  r.x = 0.5 * (t.array() + 1.);
  r.w = w / std::pow(2., alpha + 1.);
  return cache.emplace(key, r).first->second;
}

int npoints(int degree) { return std::max(1, (degree + 2) / 2); }

void append(QuadRule& rule, const QuadRule& other) {
  const Eigen::Index n0 = rule.points.cols();
  rule.points.conservativeResize(3, n0 + other.points.cols());
  rule.points.rightCols(other.points.cols()) = other.points;
  rule.weights.conservativeResize(n0 + other.weights.size());
  rule.weights.tail(other.weights.size()) = other.weights;
}

} // namespace

QuadRule segment_rule(const Vec3& a, const Vec3& b, int degree) {
  const UnitRule& r = unit_rule(npoints(degree), 0);
  QuadRule q;
  q.degree = degree;
  const double len = (b - a).norm();
  q.points.resize(3, r.x.size());
  q.weights = r.w * len;
  for (Eigen::Index i = 0; i < r.x.size(); ++i) q.points.col(i) = a + r.x(i) * (b - a);
  return q;
}

QuadRule triangle_rule(const Vec3& a, const Vec3& b, const Vec3& c, int degree) {
  const int n = npoints(degree);
  const UnitRule& ru = unit_rule(n, 1);
  const UnitRule& rv = unit_rule(n, 0);
  const double jac = (b - a).cross(c - a).norm();
  QuadRule q;
  q.degree = degree;
  q.points.resize(3, n * n);
  q.weights.resize(n * n);
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++p) {
      const double x = ru.x(i), y = rv.x(j) * (1. - ru.x(i));
      q.points.col(p) = a + x * (b - a) + y * (c - a);
      q.weights(p) = ru.w(i) * rv.w(j) * jac;
    }
  return q;
}

QuadRule tetrahedron_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, int degree) {
  const int n = npoints(degree);
  const UnitRule& ru = unit_rule(n, 2);
  const UnitRule& rv = unit_rule(n, 1);
  const UnitRule& rw = unit_rule(n, 0);
  const double jac = std::abs((b - a).dot((c - a).cross(d - a)));
  QuadRule q;
  q.degree = degree;
  q.points.resize(3, n * n * n);
  q.weights.resize(n * n * n);
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++p) {
        const double u = ru.x(i), v = rv.x(j), w = rw.x(k);
        const double x = u, y = v * (1. - u), z = w * (1. - u) * (1. - v);
        q.points.col(p) = a + x * (b - a) + y * (c - a) + z * (d - a);
        q.weights(p) = ru.w(i) * rv.w(j) * rw.w(k) * jac;
      }
  return q;
}

QuadRule entity_rule(const Mesh& mesh, EntityRef entity, int degree) {
  if (degree < 0) throw ArgumentError("quadrature degree must be nonnegative");
  QuadRule rule;
  rule.degree = degree;
  rule.points.resize(3, 0);
  rule.weights.resize(0);
  switch (entity.dim) {
  case 1: {
    const Edge& e = mesh.edge(entity.index);
    return segment_rule(mesh.vertex(e.vertices[0]), mesh.vertex(e.vertices[1]), degree);
  }
  case 2: {
    const Face& f = mesh.face(entity.index);
    const auto& loop = f.vertices;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = mesh.vertex(loop[i]);
      const Vec3& b = mesh.vertex(loop[(i + 1) % loop.size()]);
      if ((a - f.center).cross(b - f.center).dot(f.normal) <= 0.)
        throw MeshError("face " + std::to_string(entity.index) + ": negative sub-triangle in quadrature fan");
      append(rule, triangle_rule(f.center, a, b, degree));
    }
    return rule;
  }
  case 3: {
    const Cell& t = mesh.cell(entity.index);
    for (std::size_t i = 0; i < t.faces.size(); ++i) {
      const Face& f = mesh.face(t.faces[i]);
      const auto& loop = f.vertices;
      for (std::size_t j = 0; j < loop.size(); ++j) {
        const Vec3& a = mesh.vertex(loop[j]);
        const Vec3& b = mesh.vertex(loop[(j + 1) % loop.size()]);
        const double det = (f.center - t.center).dot((a - t.center).cross(b - t.center));
        if (t.face_orientations[i] * det <= 0.)
          throw MeshError("cell " + std::to_string(entity.index) + ": negative sub-tetrahedron in quadrature fan");
        append(rule, tetrahedron_rule(t.center, f.center, a, b, degree));
      }
    }
    return rule;
  }
  default:
    throw ArgumentError("quadrature rules exist for edges, faces and cells only");
  }
}

double integrate(const QuadRule& rule, const std::function<double(const Vec3&)>& f) {
  double s = 0.;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights(i) * f(rule.points.col(i));
  return s;
}

} // namespace ddr
