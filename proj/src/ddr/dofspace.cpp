#include "ddr/dofspace.hpp"

#include <algorithm>

namespace ddr {

const char* space_name(SpaceKind which) {
  switch (which) {
  case SpaceKind::Grad: return "grad";
  case SpaceKind::Curl: return "curl";
  case SpaceKind::Div: return "div";
  case SpaceKind::L2: return "L2";
  }
  return "?";
}

DofSpace::DofSpace(const Mesh& mesh, SpaceKind which, int k) : m_which(which), m_k(k) {
  if (k < 0) throw ArgumentError("polynomial degree must be nonnegative");
  auto add = [&](int d, BasisKind kind, int degree) {
    const int dim = d == 0 ? 1 : analytic_dim(kind, d, degree);
    m_components[d].push_back({d, kind, degree, dim});
  };
  switch (which) {
  case SpaceKind::Grad:
    add(0, BasisKind::P, 0);
    add(1, BasisKind::P, k - 1);
    add(2, BasisKind::P, k - 1);
    add(3, BasisKind::P, k - 1);
    break;
  case SpaceKind::Curl:
    add(1, BasisKind::P, k);
    add(2, BasisKind::R, k - 1);
    add(2, BasisKind::CR, k);
    add(3, BasisKind::R, k - 1);
    add(3, BasisKind::CR, k);
    break;
  case SpaceKind::Div:
    add(2, BasisKind::P, k);
    add(3, BasisKind::G, k - 1);
    add(3, BasisKind::CG, k);
    break;
  case SpaceKind::L2:
    add(3, BasisKind::P, k);
    break;
  }
  std::size_t off = 0;
  for (int d = 0; d < 4; ++d) {
    m_per_entity[d] = 0;
    for (const auto& c : m_components[d]) m_per_entity[d] += c.dim;
    m_offset[d] = off;
    off += mesh.n_entities(d) * std::size_t(m_per_entity[d]);
  }
  m_total = off;
}

std::vector<int> DofSpace::local_dofs(const Mesh& mesh, EntityRef e) const {
  std::vector<int> out;
  auto push = [&](int d, int i) {
    const std::size_t o = offset({d, i});
    for (int j = 0; j < m_per_entity[d]; ++j) out.push_back(static_cast<int>(o + j));
  };
  switch (e.dim) {
  case 0:
    push(0, e.index);
    break;
  case 1: {
    const Edge& ed = mesh.edge(e.index);
    push(0, ed.vertices[0]);
    push(0, ed.vertices[1]);
    push(1, e.index);
    break;
  }
  case 2: {
    const Face& f = mesh.face(e.index);
    std::vector<int> vs = f.vertices;
    std::sort(vs.begin(), vs.end());
    for (int v : vs) push(0, v);
    for (int ed : f.edges) push(1, ed);
    push(2, e.index);
    break;
  }
  case 3: {
    const Cell& c = mesh.cell(e.index);
    for (int v : c.vertices) push(0, v);
    for (int ed : c.edges) push(1, ed);
    for (int f : c.faces) push(2, f);
    push(3, e.index);
    break;
  }
  default:
    throw ArgumentError("invalid entity dimension");
  }
  return out;
}

int DofSpace::cell_local_dim(const Mesh& mesh, int t) const {
  const Cell& c = mesh.cell(t);
  return int(c.vertices.size()) * m_per_entity[0] + int(c.edges.size()) * m_per_entity[1] +
         int(c.faces.size()) * m_per_entity[2] + m_per_entity[3];
}

std::vector<int> embed_indices(const std::vector<int>& sub, const std::vector<int>& super) {
  std::vector<int> pos(sub.size());
  for (std::size_t i = 0; i < sub.size(); ++i) {
    auto it = std::lower_bound(super.begin(), super.end(), sub[i]);
    if (it == super.end() || *it != sub[i]) throw ArgumentError("embed_indices: DOF not found");
    pos[i] = static_cast<int>(it - super.begin());
  }
  return pos;
}

} // namespace ddr
