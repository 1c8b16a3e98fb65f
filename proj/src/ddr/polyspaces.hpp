// Orthonormal bases of the local polynomial spaces attached to mesh entities.

#ifndef DDR_POLYSPACES_HPP
#define DDR_POLYSPACES_HPP

#include "ddr/mesh.hpp"
#include "ddr/polynomial.hpp"
#include "ddr/quadrature.hpp"

namespace ddr {

/// Per-component values at quadrature points: values[c] is (npts x nfunctions)
using Values = std::vector<Eigen::MatrixXd>;

/// Local coordinates xi = axes * (x - origin) / h of an entity
struct EntityFrame {
  int dim = 3;
  Vec3 origin = Vec3::Zero();
  double h = 1.;
  Eigen::MatrixXd axes; ///< dim x 3, orthonormal rows

  Eigen::MatrixXd local(const Points& x) const;
};

EntityFrame entity_frame(const Mesh& mesh, EntityRef entity);

/// A polynomial family living on an entity
struct FieldFamily {
  EntityFrame frame;
  PolyFamily family;

  int size() const { return family.size(); }
  int ncomp() const { return family.ncomp; }
  /// Values in the family's own components (frame components for face vectors)
  Values values(const Points& x) const { return family.values(frame.local(x)); }
  /// Values as Cartesian 3-vectors (face vector fields are lifted with the frame)
  Values values3(const Points& x) const;
};

/// Physical-coordinate differential operators on families
FieldFamily grad(const FieldFamily& f);
FieldFamily div(const FieldFamily& f);
FieldFamily curl(const FieldFamily& f);
FieldFamily rot_face(const FieldFamily& f);
FieldFamily vrot_face(const FieldFamily& f);
/// Linear combinations M * f
FieldFamily combine(const Eigen::MatrixXd& M, const FieldFamily& f);

enum class BasisKind { P, VP, G, CG, R, CR, NE, RT, P0 };

const char* basis_kind_name(BasisKind kind);

struct PolyBasis : FieldFamily {
  EntityRef entity{3, 0};
  BasisKind kind = BasisKind::P;
  int degree = 0;

  int dim() const { return size(); }
  int value_dim() const { return ncomp(); }
};

/// Analytic dimension of a space on an entity of intrinsic dimension nvars
int analytic_dim(BasisKind kind, int nvars, int degree);

/// sum_q w_q sum_c a[c](q, i) b[c](q, j)
Eigen::MatrixXd gram(const Values& a, const Values& b, const Eigen::VectorXd& w);

/// Quadrature-weighted modified Gram-Schmidt with re-orthogonalization.
/// Generators whose residual falls below droptol * (largest generator norm)
/// are dropped.
FieldFamily orthonormalize(const FieldFamily& generators, const QuadRule& rule, double droptol = 1e-8);

/// Orthonormal basis of the requested space. `rule` must integrate products of
/// two members exactly (degree >= 2 * degree + 2 is always enough). Throws
/// NumericalError when the rank differs from the analytic dimension.
PolyBasis make_basis(const Mesh& mesh, EntityRef entity, BasisKind kind, int degree, const QuadRule& rule);
PolyBasis make_basis(const Mesh& mesh, EntityRef entity, BasisKind kind, int degree);
inline PolyBasis scalar_basis(const Mesh& mesh, EntityRef entity, int degree) {
  return make_basis(mesh, entity, BasisKind::P, degree);
}

/// Projects 3-vectors onto the tangent frame of a face: returns 2 components
Values tangent_components(const Values& v3, const Face& face);
/// Dot product of 3-vector values with a fixed vector
Eigen::MatrixXd dot(const Values& v3, const Vec3& n);
/// Cross product of 3-vector values with a fixed vector
Values cross(const Values& v3, const Vec3& n);

/// L2 projection coefficients of sampled field values onto a basis
Eigen::MatrixXd l2_project(const PolyBasis& basis, const QuadRule& rule, const Values& field_values);

/// Unique a in vP^l with pi_S a = b and pi_Sc a = c (coefficients in vp)
Eigen::VectorXd recovery(const PolyBasis& S, const PolyBasis& Sc, const PolyBasis& vp, const QuadRule& rule,
                         const Eigen::VectorXd& b, const Eigen::VectorXd& c);

/// Spectral norm of pi_S restricted to Sc (= ||pi_S pi_Sc||)
double projection_coupling(const PolyBasis& S, const PolyBasis& Sc, const QuadRule& rule);

} // namespace ddr

#endif
