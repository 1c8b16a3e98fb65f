#include "ddr/products.hpp"
#include "ddr/interpolation.hpp"
#include "ddr/parallel.hpp"

namespace ddr {

namespace {

std::vector<int> own_positions(const DofSpace& s, EntityRef e, const std::vector<int>& local) {
  std::vector<int> own(s.entity_dofs(e.dim));
  for (std::size_t i = 0; i < own.size(); ++i) own[i] = static_cast<int>(s.offset(e) + i);
  return embed_indices(own, local);
}

/// Weighted Gram of difference operators: h * D^T W D, summed per component
Eigen::MatrixXd weighted_square(const Values& d, const Eigen::VectorXd& w, double h) {
  return h * gram(d, d, w);
}

Eigen::MatrixXd scatter_to(const Eigen::MatrixXd& m, const std::vector<int>& pos, Eigen::Index ncols) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), ncols);
  scatter_cols(out, m, pos);
  return out;
}

void add_sym_block(Eigen::MatrixXd& target, const Eigen::MatrixXd& block, const std::vector<int>& pos) {
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < pos.size(); ++j) target(pos[i], pos[j]) += block(i, j);
}

} // namespace

const PolyBasis& potential_basis(const DdrComplex& c, SpaceKind which, int t) {
  const CellData& cd = c.cell(t);
  switch (which) {
  case SpaceKind::Grad: return cd.Pk1;
  case SpaceKind::Curl:
  case SpaceKind::Div: return cd.VPk;
  case SpaceKind::L2: return cd.Pk;
  }
  throw ArgumentError("unknown space");
}

const Eigen::MatrixXd& potential_matrix(const DdrComplex& c, SpaceKind which, int t) {
  const CellData& cd = c.cell(t);
  switch (which) {
  case SpaceKind::Grad: return cd.Pgrad;
  case SpaceKind::Curl: return cd.Pcurl;
  case SpaceKind::Div: return cd.Pdiv;
  default: throw ArgumentError("no potential for L2");
  }
}

Eigen::MatrixXd consistent_term(const DdrComplex& c, SpaceKind which, int t) {
  const CellData& cd = c.cell(t);
  if (which == SpaceKind::L2) return Eigen::MatrixXd::Identity(cd.Pk.dim(), cd.Pk.dim());
  const PolyBasis& b = potential_basis(c, which, t);
  const Eigen::MatrixXd& P = potential_matrix(c, which, t);
  const Values bv = b.values(cd.rule.points);
  return P.transpose() * gram(bv, bv, cd.rule.weights) * P;
}

Eigen::MatrixXd stabilization_primary(const DdrComplex& c, SpaceKind which, int t) {
  const Mesh& mesh = c.mesh();
  const Cell& cell = mesh.cell(t);
  const CellData& cd = c.cell(t);
  if (which == SpaceKind::L2) return Eigen::MatrixXd::Zero(cd.Pk.dim(), cd.Pk.dim());
  const std::vector<int>& dofs = c.cell_dofs(which, t);
  const Eigen::Index n = static_cast<Eigen::Index>(dofs.size());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd& P = potential_matrix(c, which, t);

  for (int f : cell.faces) {
    const Face& face = mesh.face(f);
    const FaceData& fd = c.face(f);
    const QuadRule& r = fd.rule;
    Values d;
    switch (which) {
    case SpaceKind::Grad: {
      Eigen::MatrixXd v = cd.Pk1.values(r.points)[0] * P;
      v -= scatter_to(fd.Pk1.values(r.points)[0] * fd.gammaF, embed_indices(fd.grad_dofs, dofs), n);
      d = {v};
      break;
    }
    case SpaceKind::Curl: {
      Values p3 = cd.VPk.values(r.points);
      for (auto& m : p3) m = m * P;
      d = tangent_components(p3, face);
      const Values g = fd.VPk.values(r.points);
      const std::vector<int> pos = embed_indices(fd.curl_dofs, dofs);
      for (int a = 0; a < 2; ++a) d[a] -= scatter_to(g[a] * fd.gammatF, pos, n);
      break;
    }
    case SpaceKind::Div: {
      Eigen::MatrixXd v = dot(cd.VPk.values(r.points), face.normal) * P;
      v -= scatter_to(fd.Pk.values(r.points)[0], embed_indices(fd.div_dofs, dofs), n);
      d = {v};
      break;
    }
    default: break;
    }
    S += weighted_square(d, r.weights, face.diameter);
  }
  if (which == SpaceKind::Div) return S;

  for (int e : cell.edges) {
    const Edge& edge = mesh.edge(e);
    const EdgeData& ed = c.edge(e);
    const QuadRule& r = ed.rule;
    Eigen::MatrixXd v;
    if (which == SpaceKind::Grad) {
      v = cd.Pk1.values(r.points)[0] * P;
      v -= scatter_to(ed.Pk1.values(r.points)[0] * ed.reconstruct, embed_indices(ed.grad_dofs, dofs), n);
    } else {
      v = dot(cd.VPk.values(r.points), edge.tangent) * P;
      v -= scatter_to(ed.Pk.values(r.points)[0], embed_indices(ed.curl_dofs, dofs), n);
    }
    S += weighted_square({v}, r.weights, edge.length * edge.length);
  }
  return S;
}

Eigen::MatrixXd stabilization_alternative(const DdrComplex& c, SpaceKind which, int t) {
  const CellData& cd = c.cell(t);
  if (which == SpaceKind::L2) return Eigen::MatrixXd::Zero(cd.Pk.dim(), cd.Pk.dim());
  const Eigen::MatrixXd& P = potential_matrix(c, which, t);
  const Eigen::MatrixXd IP = interpolate_cell(c, which, t, sample(potential_basis(c, which, t))) * P;
  const Eigen::MatrixXd E = Eigen::MatrixXd::Identity(IP.rows(), IP.cols()) - IP;
  return E.transpose() * component_norm_matrix(c, which, t) * E;
}

Eigen::MatrixXd stabilization(const DdrComplex& c, SpaceKind which, int t) {
  return c.options().alternative_stabilization ? stabilization_alternative(c, which, t)
                                               : stabilization_primary(c, which, t);
}

Eigen::MatrixXd l2_product(const DdrComplex& c, SpaceKind which, int t) {
  return consistent_term(c, which, t) + stabilization(c, which, t);
}

Eigen::MatrixXd component_norm_matrix(const DdrComplex& c, SpaceKind which, int t) {
  const Mesh& mesh = c.mesh();
  const Cell& cell = mesh.cell(t);
  const CellData& cd = c.cell(t);
  if (which == SpaceKind::L2) return Eigen::MatrixXd::Identity(cd.Pk.dim(), cd.Pk.dim());
  const DofSpace& s = c.space(which);
  const std::vector<int>& dofs = c.cell_dofs(which, t);
  const Eigen::Index n = static_cast<Eigen::Index>(dofs.size());
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
  for (int p : own_positions(s, {3, t}, dofs)) N(p, p) += 1.;
  for (int f : cell.faces) {
    const Face& face = mesh.face(f);
    const double hF = face.diameter;
    for (int p : own_positions(s, {2, f}, dofs)) N(p, p) += hF;
    if (which == SpaceKind::Div) continue;
    for (int e : face.edges) {
      const double hE = mesh.edge(e).length;
      const EdgeData& ed = c.edge(e);
      if (which == SpaceKind::Grad) {
        add_sym_block(N, hF * hE * ed.reconstruct.transpose() * ed.reconstruct, embed_indices(ed.grad_dofs, dofs));
      } else {
        for (int p : own_positions(s, {1, e}, dofs)) N(p, p) += hF * hE;
      }
    }
  }
  return N;
}

SparseMatrix assemble_cell_forms(const DdrComplex& c, SpaceKind which,
                                 const std::function<Eigen::MatrixXd(int)>& local,
                                 const std::vector<double>* weights) {
  const Mesh& mesh = c.mesh();
  const std::size_t nc = mesh.n_cells();
  std::vector<Eigen::MatrixXd> blocks(nc);
  parallel_for(nc, c.options().threads, [&](std::size_t t) { blocks[t] = local(static_cast<int>(t)); });
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t t = 0; t < nc; ++t) {
    std::vector<int> dofs;
    if (which == SpaceKind::L2) {
      const DofSpace& s = c.space(which);
      for (int i = 0; i < s.entity_dofs(3); ++i) dofs.push_back(static_cast<int>(s.offset({3, int(t)}) + i));
    } else {
      dofs = c.cell_dofs(which, static_cast<int>(t));
    }
    const double w = weights ? (*weights)[t] : 1.;
    for (std::size_t i = 0; i < dofs.size(); ++i)
      for (std::size_t j = 0; j < dofs.size(); ++j) trips.emplace_back(dofs[i], dofs[j], w * blocks[t](i, j));
  }
  const std::size_t n = c.space(which).dimension();
  SparseMatrix M(n, n);
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

SparseMatrix global_l2_product(const DdrComplex& c, SpaceKind which, const std::vector<double>* mu) {
  return assemble_cell_forms(c, which, [&](int t) { return l2_product(c, which, t); }, mu);
}

SparseMatrix global_component_norm(const DdrComplex& c, SpaceKind which) {
  return assemble_cell_forms(c, which, [&](int t) { return component_norm_matrix(c, which, t); });
}

double component_norm(const DdrComplex& c, SpaceKind which, const Eigen::VectorXd& dofs) {
  const SparseMatrix N = global_component_norm(c, which);
  return std::sqrt(std::max(0., dofs.dot(N * dofs)));
}

} // namespace ddr
