#include "ddr/interpolation.hpp"
#include "ddr/parallel.hpp"

#include <algorithm>

namespace ddr {

Sampler sample(const ScalarField& f) {
  return [f](const Points& x) {
    Values v(1, Eigen::MatrixXd(x.cols(), 1));
    for (Eigen::Index i = 0; i < x.cols(); ++i) v[0](i, 0) = f(x.col(i));
    return v;
  };
}

Sampler sample(const VectorField& f) {
  return [f](const Points& x) {
    Values v(3, Eigen::MatrixXd(x.cols(), 1));
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      const Vec3 y = f(x.col(i));
      for (int c = 0; c < 3; ++c) v[c](i, 0) = y(c);
    }
    return v;
  };
}

Sampler sample(const FieldFamily& family) {
  return [family](const Points& x) { return family.values3(x); };
}

namespace {

Eigen::MatrixXd moments(const PolyBasis& b, const QuadRule& r, const Values& f) {
  return gram(b.values(r.points), f, r.weights);
}

Eigen::MatrixXd stack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd s(a.rows() + b.rows(), std::max(a.cols(), b.cols()));
  s.topRows(a.rows()) = a;
  s.bottomRows(b.rows()) = b;
  return s;
}

} // namespace

Eigen::MatrixXd interpolate_entity(const DdrComplex& c, SpaceKind which, EntityRef e, const Sampler& f) {
  const Mesh& mesh = c.mesh();
  const int ideg = c.interp_degree();
  if (e.dim == 0) {
    if (which != SpaceKind::Grad) return Eigen::MatrixXd(0, f(Points::Zero(3, 1))[0].cols());
    Points x = mesh.vertex(e.index);
    return f(x)[0];
  }
  if (c.space(which).entity_dofs(e.dim) == 0) return Eigen::MatrixXd(0, f(Points::Zero(3, 1))[0].cols());
  const QuadRule r = entity_rule(mesh, e, ideg);
  const Values v = f(r.points);
  switch (e.dim) {
  case 1: {
    const EdgeData& ed = c.edge(e.index);
    if (which == SpaceKind::Grad) return moments(ed.Pkm1, r, v);
    return moments(ed.Pk, r, {dot(v, mesh.edge(e.index).tangent)});
  }
  case 2: {
    const FaceData& fd = c.face(e.index);
    const Face& face = mesh.face(e.index);
    if (which == SpaceKind::Grad) return moments(fd.Pkm1, r, v);
    if (which == SpaceKind::Curl) {
      const Values vt = tangent_components(v, face);
      return stack(moments(fd.Rkm1, r, vt), moments(fd.CRk, r, vt));
    }
    return moments(fd.Pk, r, {dot(v, face.normal)});
  }
  case 3: {
    const CellData& cd = c.cell(e.index);
    switch (which) {
    case SpaceKind::Grad: return moments(cd.Pkm1, r, v);
    case SpaceKind::Curl: return stack(moments(cd.Rkm1, r, v), moments(cd.CRk, r, v));
    case SpaceKind::Div: return stack(moments(cd.Gkm1, r, v), moments(cd.CGk, r, v));
    case SpaceKind::L2: return moments(cd.Pk, r, v);
    }
  }
  }
  throw ArgumentError("interpolate_entity: invalid entity");
}

Eigen::MatrixXd interpolate_cell(const DdrComplex& c, SpaceKind which, int t, const Sampler& f) {
  const Mesh& mesh = c.mesh();
  const Cell& cell = mesh.cell(t);
  const DofSpace& s = c.space(which);
  if (which == SpaceKind::L2) return interpolate_entity(c, which, {3, t}, f);
  const std::vector<int>& dofs = c.cell_dofs(which, t);
  Eigen::MatrixXd out;
  auto put = [&](EntityRef e) {
    if (s.entity_dofs(e.dim) == 0) return;
    Eigen::MatrixXd m = interpolate_entity(c, which, e, f);
    if (out.size() == 0) out = Eigen::MatrixXd::Zero(dofs.size(), m.cols());
    const std::size_t o = s.offset(e);
    const auto pos = std::lower_bound(dofs.begin(), dofs.end(), static_cast<int>(o)) - dofs.begin();
    out.middleRows(pos, m.rows()) = m;
  };
  for (int v : cell.vertices) put({0, v});
  for (int e : cell.edges) put({1, e});
  for (int fc : cell.faces) put({2, fc});
  put({3, t});
  return out;
}

Eigen::VectorXd interpolate(const DdrComplex& c, SpaceKind which, const Sampler& f) {
  const Mesh& mesh = c.mesh();
  const DofSpace& s = c.space(which);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.dimension());
  for (int d = 0; d < 4; ++d) {
    if (s.entity_dofs(d) == 0) continue;
    parallel_for(mesh.n_entities(d), c.options().threads, [&](std::size_t i) {
      const EntityRef e{d, static_cast<int>(i)};
      out.segment(s.offset(e), s.entity_dofs(d)) = interpolate_entity(c, which, e, f).col(0);
    });
  }
  return out;
}

Eigen::VectorXd restrict_to(const Eigen::VectorXd& global, const std::vector<int>& dofs) {
  Eigen::VectorXd v(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) v(i) = global(dofs[i]);
  return v;
}

} // namespace ddr
