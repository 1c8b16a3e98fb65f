#include "ddr/polyspaces.hpp"

#include <Eigen/SVD>

namespace ddr {

Eigen::MatrixXd EntityFrame::local(const Points& x) const {
  return axes * (x.colwise() - origin) / h;
}

EntityFrame entity_frame(const Mesh& mesh, EntityRef entity) {
  EntityFrame fr;
  fr.dim = entity.dim;
  fr.origin = mesh.center(entity);
  fr.h = mesh.diameter(entity);
  switch (entity.dim) {
  case 1:
    fr.axes = mesh.edge(entity.index).tangent.transpose();
    break;
  case 2: {
    const Face& f = mesh.face(entity.index);
    fr.axes.resize(2, 3);
    fr.axes.row(0) = f.frame[0].transpose();
    fr.axes.row(1) = f.frame[1].transpose();
    break;
  }
  case 3:
    fr.axes = Eigen::MatrixXd::Identity(3, 3);
    break;
  default:
    throw ArgumentError("entity frames exist for edges, faces and cells only");
  }
  return fr;
}

Values FieldFamily::values3(const Points& x) const {
  Values v = values(x);
  if (frame.dim == 3 || ncomp() == 1) return v;
  if (frame.dim == 2 && ncomp() == 2) {
    Values out(3);
    for (int c = 0; c < 3; ++c) out[c] = frame.axes(0, c) * v[0] + frame.axes(1, c) * v[1];
    return out;
  }
  throw ArgumentError("values3: unsupported family shape");
}

namespace {
FieldFamily with_family(const FieldFamily& f, PolyFamily p) {
  FieldFamily g;
  g.frame = f.frame;
  g.family = std::move(p);
  return g;
}
} // namespace

FieldFamily grad(const FieldFamily& f) { return with_family(f, gradient(f.family, 1. / f.frame.h)); }
FieldFamily div(const FieldFamily& f) { return with_family(f, divergence(f.family, 1. / f.frame.h)); }
FieldFamily curl(const FieldFamily& f) { return with_family(f, curl(f.family, 1. / f.frame.h)); }
FieldFamily rot_face(const FieldFamily& f) { return with_family(f, rot2(f.family, 1. / f.frame.h)); }
FieldFamily vrot_face(const FieldFamily& f) { return with_family(f, vrot2(f.family, 1. / f.frame.h)); }
FieldFamily combine(const Eigen::MatrixXd& M, const FieldFamily& f) { return with_family(f, combine(M, f.family)); }

const char* basis_kind_name(BasisKind kind) {
  switch (kind) {
  case BasisKind::P: return "P";
  case BasisKind::VP: return "vP";
  case BasisKind::G: return "G";
  case BasisKind::CG: return "cG";
  case BasisKind::R: return "R";
  case BasisKind::CR: return "cR";
  case BasisKind::NE: return "NE";
  case BasisKind::RT: return "RT";
  case BasisKind::P0: return "P0";
  }
  return "?";
}

int analytic_dim(BasisKind kind, int n, int l) {
  auto P = [n](int d) { return poly_dim(n, d); };
  switch (kind) {
  case BasisKind::P: return P(l);
  case BasisKind::VP: return n * P(l);
  case BasisKind::P0: return std::max(0, P(l) - 1);
  case BasisKind::G:
  case BasisKind::R:
    if (n == 3 && kind == BasisKind::R) return l < 0 ? 0 : 3 * P(l) - P(l - 1);
    return std::max(0, P(l + 1) - 1);
  case BasisKind::CG:
    return n == 3 ? 3 * P(l - 1) - P(l - 2) : P(l - 1);
  case BasisKind::CR: return P(l - 1);
  case BasisKind::NE: return analytic_dim(BasisKind::G, n, l - 1) + analytic_dim(BasisKind::CG, n, l);
  case BasisKind::RT: return analytic_dim(BasisKind::R, n, l - 1) + analytic_dim(BasisKind::CR, n, l);
  }
  return 0;
}

Eigen::MatrixXd gram(const Values& a, const Values& b, const Eigen::VectorXd& w) {
  if (a.size() != b.size()) throw ArgumentError("gram: component count mismatch");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(a[0].cols(), b[0].cols());
  for (std::size_t c = 0; c < a.size(); ++c) g.noalias() += a[c].transpose() * w.asDiagonal() * b[c];
  return g;
}

FieldFamily orthonormalize(const FieldFamily& generators, const QuadRule& rule, double droptol) {
  const int ng = generators.size();
  FieldFamily out = generators;
  if (ng == 0) return out;
  Values v = generators.values(rule.points);
  const Eigen::Index np = static_cast<Eigen::Index>(rule.size());
  const int nc = generators.ncomp();
  Eigen::VectorXd sw = rule.weights.cwiseSqrt();
  Eigen::MatrixXd A(ng, np * nc);
  for (int c = 0; c < nc; ++c) A.middleCols(c * np, np) = (sw.asDiagonal() * v[c]).transpose();

  Eigen::VectorXd norms = A.rowwise().norm();
  const double maxnorm = norms.maxCoeff();
  Eigen::MatrixXd Q(ng, A.cols()), T = Eigen::MatrixXd::Zero(ng, ng);
  int k = 0;
  for (int i = 0; i < ng; ++i) {
    if (norms(i) <= 1e-14 * maxnorm) continue;
    Eigen::RowVectorXd q = A.row(i) / norms(i);
    Eigen::RowVectorXd t = Eigen::RowVectorXd::Zero(ng);
    t(i) = 1. / norms(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const double r = Q.row(j).dot(q);
        q -= r * Q.row(j);
        t -= r * T.row(j);
      }
    }
    const double nq = q.norm();
    if (nq <= droptol) continue;
    Q.row(k) = q / nq;
    T.row(k) = t / nq;
    ++k;
  }
  out.family.coeffs = T.topRows(k) * generators.family.coeffs;
  return out;
}

namespace {

PolyFamily generators_for(BasisKind kind, int n, int l) {
  const int nc = (n == 1) ? 1 : n;
  switch (kind) {
  case BasisKind::P:
    return scalar_monomials(n, l);
  case BasisKind::VP:
    return tensorize(scalar_monomials(n, l), nc);
  case BasisKind::G:
    if (l < 0) return empty_family(n, n, 0);
    return gradient(scalar_monomials_range(n, 1, l + 1));
  case BasisKind::CG:
    if (l < 1) return empty_family(n, n, 0);
    if (n == 3) return koszul_cross3(tensorize(scalar_monomials(3, l - 1), 3));
    return koszul_perp2(scalar_monomials(2, l - 1));
  case BasisKind::R:
    if (l < 0) return empty_family(n, n, 0);
    if (n == 3) return curl(tensorize(scalar_monomials_range(3, 1, l + 1), 3));
    return vrot2(scalar_monomials_range(2, 1, l + 1));
  case BasisKind::CR:
    if (l < 1) return empty_family(n, n, 0);
    return koszul_vector(scalar_monomials(n, l - 1));
  default:
    throw ArgumentError("no direct generating set for this kind");
  }
}

} // namespace

PolyBasis make_basis(const Mesh& mesh, EntityRef entity, BasisKind kind, int degree, const QuadRule& rule) {
  const int n = entity.dim;
  if (n < 1 || n > 3) throw ArgumentError("bases live on edges, faces and cells");
  if ((kind != BasisKind::P && kind != BasisKind::P0) && n == 1)
    throw ArgumentError("vector spaces are not defined on edges");
  if (kind == BasisKind::VP && n == 1) throw ArgumentError("vP on an edge");

  PolyBasis b;
  b.entity = entity;
  b.kind = kind;
  b.degree = degree;
  b.frame = entity_frame(mesh, entity);

  const std::string where = std::string(n == 1 ? "edge " : n == 2 ? "face " : "cell ") +
                            std::to_string(entity.index) + ", " + basis_kind_name(kind) + "^" +
                            std::to_string(degree);

  if (kind == BasisKind::NE || kind == BasisKind::RT) {
    const bool ne = kind == BasisKind::NE;
    PolyBasis a = make_basis(mesh, entity, ne ? BasisKind::G : BasisKind::R, degree - 1, rule);
    PolyBasis c = make_basis(mesh, entity, ne ? BasisKind::CG : BasisKind::CR, degree, rule);
    b.family = concat(a.family, c.family);
    return b;
  }
  if (kind == BasisKind::P0) {
    PolyBasis p = make_basis(mesh, entity, BasisKind::P, degree, rule);
    if (p.dim() <= 1) {
      b.family = empty_family(p.family.nvars, 1, std::max(degree, 0));
      return b;
    }
    Values pv = p.values(rule.points);
    const double meas = rule.weights.sum();
    Eigen::VectorXd means = (pv[0].transpose() * rule.weights) / meas;
    PolyFamily g = p.family;
    g.coeffs = p.family.coeffs.bottomRows(p.dim() - 1);
    g.coeffs.col(0) -= means.tail(p.dim() - 1);
    FieldFamily gen{b.frame, g};
    b.family = orthonormalize(gen, rule).family;
  } else {
    FieldFamily gen{b.frame, generators_for(kind, n, degree)};
    FieldFamily on = orthonormalize(gen, rule);
    b.family = on.family;
    if (kind == BasisKind::P && b.dim() > 0) {
      // Fix the sign so that the first member is the positive constant
      Values v = b.values(rule.points);
      if (v[0](0, 0) < 0.) b.family.coeffs.row(0) *= -1.;
    }
  }
  const int expected = analytic_dim(kind, n, degree);
  if (b.dim() != expected)
    throw NumericalError(where + ": rank " + std::to_string(b.dim()) + " differs from analytic dimension " +
                         std::to_string(expected));
  return b;
}

PolyBasis make_basis(const Mesh& mesh, EntityRef entity, BasisKind kind, int degree) {
  return make_basis(mesh, entity, kind, degree, entity_rule(mesh, entity, 2 * std::max(degree, 0) + 2));
}

Values tangent_components(const Values& v3, const Face& face) {
  Values out(2);
  for (int a = 0; a < 2; ++a)
    out[a] = face.frame[a](0) * v3[0] + face.frame[a](1) * v3[1] + face.frame[a](2) * v3[2];
  return out;
}

Eigen::MatrixXd dot(const Values& v3, const Vec3& n) { return n(0) * v3[0] + n(1) * v3[1] + n(2) * v3[2]; }

Values cross(const Values& v, const Vec3& n) {
  return {v[1] * n(2) - v[2] * n(1), v[2] * n(0) - v[0] * n(2), v[0] * n(1) - v[1] * n(0)};
}

Eigen::MatrixXd l2_project(const PolyBasis& basis, const QuadRule& rule, const Values& field_values) {
  Values bv = basis.values(rule.points);
  const Eigen::MatrixXd G = gram(bv, bv, rule.weights);
  return G.ldlt().solve(gram(bv, field_values, rule.weights));
}

Eigen::VectorXd recovery(const PolyBasis& S, const PolyBasis& Sc, const PolyBasis& vp, const QuadRule& rule,
                         const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  if (S.dim() + Sc.dim() != vp.dim()) throw NumericalError("recovery: dimensions do not add up");
  Values sv = S.values(rule.points), scv = Sc.values(rule.points), vv = vp.values(rule.points);
  Eigen::MatrixXd M(vp.dim(), vp.dim());
  M.topRows(S.dim()) = gram(sv, vv, rule.weights);
  M.bottomRows(Sc.dim()) = gram(scv, vv, rule.weights);
  Eigen::VectorXd rhs(vp.dim());
  rhs << b, c;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw NumericalError("recovery: singular stacked projection system");
  return lu.solve(rhs);
}

double projection_coupling(const PolyBasis& S, const PolyBasis& Sc, const QuadRule& rule) {
  if (S.dim() == 0 || Sc.dim() == 0) return 0.;
  Eigen::MatrixXd C = gram(S.values(rule.points), Sc.values(rule.points), rule.weights);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  return svd.singularValues()(0);
}

} // namespace ddr
