#include "ddr/complex.hpp"
#include "ddr/parallel.hpp"

#include <Eigen/SVD>

namespace ddr {

Eigen::MatrixXd solve_local(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const std::string& what,
                            double* cond) {
  if (A.rows() != A.cols()) throw NumericalError(what + ": local system is not square");
  if (A.rows() == 0) return Eigen::MatrixXd::Zero(0, B.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  const double c = s(s.size() - 1) > 0. ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  if (cond) *cond = c;
  if (!(c <= 1e12)) throw NumericalError(what + ": condition number " + std::to_string(c) + " exceeds 1e12");
  return A.partialPivLu().solve(B);
}

void scatter_cols(Eigen::MatrixXd& target, const Eigen::MatrixXd& src, const std::vector<int>& pos, double factor) {
  for (std::size_t j = 0; j < pos.size(); ++j) target.col(pos[j]) += factor * src.col(static_cast<Eigen::Index>(j));
}

namespace {

std::vector<int> own_dofs(const DofSpace& s, EntityRef e) {
  std::vector<int> out(s.entity_dofs(e.dim));
  const std::size_t o = s.offset(e);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(o + i);
  return out;
}

/// Positions of the entity's own DOFs in its local list (they come last)
std::vector<int> own_positions(const DofSpace& s, EntityRef e, const std::vector<int>& local) {
  return embed_indices(own_dofs(s, e), local);
}

std::vector<int> slice(const std::vector<int>& v, int begin, int count) {
  return std::vector<int>(v.begin() + begin, v.begin() + begin + count);
}

void scatter_block(Eigen::MatrixXd& target, const Eigen::MatrixXd& src, const std::vector<int>& rows,
                   const std::vector<int>& cols) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      target(rows[i], cols[j]) += src(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

void add_triplets(std::vector<Eigen::Triplet<double>>& trips, const Eigen::MatrixXd& block,
                  const std::vector<int>& rows, const std::vector<int>& cols) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      trips.emplace_back(rows[i], cols[j], block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
}

} // namespace

Eigen::MatrixXd DdrComplex::projection(const PolyBasis& target, const PolyBasis& source, const QuadRule& rule) {
  return gram(target.values(rule.points), source.values(rule.points), rule.weights);
}

DdrComplex::DdrComplex(const Mesh& mesh, DdrOptions options, SpaceMask mask)
    : m_mesh(mesh), m_options(options), m_mask(mask),
      m_qdeg(options.quad_degree >= 0 ? options.quad_degree : 2 * options.degree + 4),
      m_ideg(options.interp_degree >= 0 ? options.interp_degree : 2 * options.degree + 6),
      m_grad(mesh, SpaceKind::Grad, options.degree), m_curl(mesh, SpaceKind::Curl, options.degree),
      m_div(mesh, SpaceKind::Div, options.degree), m_l2(mesh, SpaceKind::L2, options.degree) {
  m_edges.resize(mesh.n_edges());
  m_faces.resize(mesh.n_faces());
  m_cells.resize(mesh.n_cells());
  const int th = options.threads;
  parallel_for(mesh.n_edges(), th, [this](std::size_t e) { build_edge(static_cast<int>(e)); });
  parallel_for(mesh.n_faces(), th, [this](std::size_t f) { build_face(static_cast<int>(f)); });
  parallel_for(mesh.n_cells(), th, [this](std::size_t t) { build_cell(static_cast<int>(t)); });
}

const DofSpace& DdrComplex::space(SpaceKind which) const {
  switch (which) {
  case SpaceKind::Grad: return m_grad;
  case SpaceKind::Curl: return m_curl;
  case SpaceKind::Div: return m_div;
  case SpaceKind::L2: return m_l2;
  }
  throw ArgumentError("unknown space");
}

const std::vector<int>& DdrComplex::cell_dofs(SpaceKind which, int t) const {
  switch (which) {
  case SpaceKind::Grad: return m_cells[t].grad_dofs;
  case SpaceKind::Curl: return m_cells[t].curl_dofs;
  case SpaceKind::Div: return m_cells[t].div_dofs;
  default: throw ArgumentError("cell_dofs: no local list for L2");
  }
}

//------------------------------------------------------------------------------
// Edges
//------------------------------------------------------------------------------

void DdrComplex::build_edge(int e) {
  const int k = degree();
  const EntityRef ref{1, e};
  EdgeData& ed = m_edges[e];
  ed.rule = entity_rule(m_mesh, ref, m_qdeg);
  ed.Pk1 = make_basis(m_mesh, ref, BasisKind::P, k + 1, ed.rule);
  ed.Pk = make_basis(m_mesh, ref, BasisKind::P, k, ed.rule);
  ed.Pkm1 = make_basis(m_mesh, ref, BasisKind::P, k - 1, ed.rule);
  ed.grad_dofs = m_grad.local_dofs(m_mesh, ref);
  ed.curl_dofs = m_curl.local_dofs(m_mesh, ref);
  if (!m_mask.grad) return;

  const Edge& edge = m_mesh.edge(e);
  Points ends(3, 2);
  ends.col(0) = m_mesh.vertex(edge.vertices[0]);
  ends.col(1) = m_mesh.vertex(edge.vertices[1]);
  const Eigen::MatrixXd pv = ed.Pk1.values(ends)[0];
  Eigen::MatrixXd M(k + 2, k + 2);
  M.topRows(2) = pv;
  M.bottomRows(k) = projection(ed.Pkm1, ed.Pk1, ed.rule);
  ed.reconstruct = solve_local(M, Eigen::MatrixXd::Identity(k + 2, k + 2), "edge " + std::to_string(e) + " reconstruction");
  const Values dq = grad(ed.Pk1).values(ed.rule.points);
  ed.GE = gram(ed.Pk.values(ed.rule.points), dq, ed.rule.weights) * ed.reconstruct;
}

//------------------------------------------------------------------------------
// Faces
//------------------------------------------------------------------------------

void DdrComplex::build_face(int f) {
  const int k = degree();
  const EntityRef ref{2, f};
  const Face& face = m_mesh.face(f);
  FaceData& fd = m_faces[f];
  fd.rule = entity_rule(m_mesh, ref, m_qdeg);
  const QuadRule& r = fd.rule;
  fd.Pk1 = make_basis(m_mesh, ref, BasisKind::P, k + 1, r);
  fd.Pk = make_basis(m_mesh, ref, BasisKind::P, k, r);
  fd.Pkm1 = make_basis(m_mesh, ref, BasisKind::P, k - 1, r);
  fd.P0k1 = make_basis(m_mesh, ref, BasisKind::P0, k + 1, r);
  fd.VPk = make_basis(m_mesh, ref, BasisKind::VP, k, r);
  fd.Rkm1 = make_basis(m_mesh, ref, BasisKind::R, k - 1, r);
  fd.CRk = make_basis(m_mesh, ref, BasisKind::CR, k, r);
  fd.CRk2 = make_basis(m_mesh, ref, BasisKind::CR, k + 2, r);
  fd.grad_dofs = m_grad.local_dofs(m_mesh, ref);
  fd.curl_dofs = m_curl.local_dofs(m_mesh, ref);
  fd.div_dofs = m_div.local_dofs(m_mesh, ref);
  const std::string name = "face " + std::to_string(f);
  const Values Wv = fd.VPk.values(r.points);
  const int nW = fd.VPk.dim();

  if (m_mask.grad) {
    const int nloc = static_cast<int>(fd.grad_dofs.size());
    // sum_E omega_FE int_E q_E (v . n_FE) for a 2-component test family
    auto edge_term = [&](const PolyBasis& test) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(test.dim(), nloc);
      for (std::size_t j = 0; j < face.edges.size(); ++j) {
        const int E = face.edges[j];
        const EdgeData& ed = m_edges[E];
        const Vec3 nfe = face.normal.cross(m_mesh.edge(E).tangent);
        const Values tv = test.values(ed.rule.points);
        const Eigen::MatrixXd tn = nfe.dot(face.frame[0]) * tv[0] + nfe.dot(face.frame[1]) * tv[1];
        const Eigen::MatrixXd q = ed.Pk1.values(ed.rule.points)[0] * ed.reconstruct;
        const Eigen::MatrixXd blk = tn.transpose() * ed.rule.weights.asDiagonal() * q;
        scatter_cols(B, blk, embed_indices(ed.grad_dofs, fd.grad_dofs), face.edge_orientations[j]);
      }
      return B;
    };
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nW, nloc);
    scatter_cols(B, gram(div(fd.VPk).values(r.points), fd.Pkm1.values(r.points), r.weights),
                 own_positions(m_grad, ref, fd.grad_dofs), -1.);
    B += edge_term(fd.VPk);
    fd.GF = B;

    const Eigen::MatrixXd A = gram(div(fd.CRk2).values(r.points), fd.Pk1.values(r.points), r.weights);
    const Eigen::MatrixXd rhs = -gram(fd.CRk2.values(r.points), Wv, r.weights) * fd.GF + edge_term(fd.CRk2);
    double c = 0.;
    fd.gammaF = solve_local(A, rhs, name + " scalar trace", &c);
    fd.condition = std::max(fd.condition, c);
  }

  if (m_mask.curl) {
    const int nloc = static_cast<int>(fd.curl_dofs.size());
    const std::vector<int> own = own_positions(m_curl, ref, fd.curl_dofs);
    const int nR = fd.Rkm1.dim();
    // sum_E omega_FE int_E v_E r for a scalar test family
    auto edge_term = [&](const PolyBasis& test) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(test.dim(), nloc);
      for (std::size_t j = 0; j < face.edges.size(); ++j) {
        const EdgeData& ed = m_edges[face.edges[j]];
        const Eigen::MatrixXd tv = test.values(ed.rule.points)[0];
        const Eigen::MatrixXd ve = ed.Pk.values(ed.rule.points)[0];
        const Eigen::MatrixXd blk = tv.transpose() * ed.rule.weights.asDiagonal() * ve;
        scatter_cols(B, blk, embed_indices(ed.curl_dofs, fd.curl_dofs), face.edge_orientations[j]);
      }
      return B;
    };
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(fd.Pk.dim(), nloc);
    scatter_cols(B, gram(vrot_face(fd.Pk).values(r.points), fd.Rkm1.values(r.points), r.weights), slice(own, 0, nR));
    B -= edge_term(fd.Pk);
    fd.CF = B;

    const int nZ = fd.P0k1.dim(), nY = fd.CRk.dim();
    Eigen::MatrixXd M(nZ + nY, nW);
    M.topRows(nZ) = gram(vrot_face(fd.P0k1).values(r.points), Wv, r.weights);
    M.bottomRows(nY) = gram(fd.CRk.values(r.points), Wv, r.weights);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nZ + nY, nloc);
    rhs.topRows(nZ) = gram(fd.P0k1.values(r.points), fd.Pk.values(r.points), r.weights) * fd.CF + edge_term(fd.P0k1);
    Eigen::MatrixXd bottom = Eigen::MatrixXd::Zero(nY, nloc);
    scatter_cols(bottom, gram(fd.CRk.values(r.points), fd.CRk.values(r.points), r.weights), slice(own, nR, nY));
    rhs.bottomRows(nY) = bottom;
    double c = 0.;
    fd.gammatF = solve_local(M, rhs, name + " tangential trace", &c);
    fd.condition = std::max(fd.condition, c);
  }
}

//------------------------------------------------------------------------------
// Cells
//------------------------------------------------------------------------------

void DdrComplex::build_cell(int t) {
  const int k = degree();
  const EntityRef ref{3, t};
  const Cell& cell = m_mesh.cell(t);
  CellData& cd = m_cells[t];
  cd.rule = entity_rule(m_mesh, ref, m_qdeg);
  const QuadRule& r = cd.rule;
  cd.Pk1 = make_basis(m_mesh, ref, BasisKind::P, k + 1, r);
  cd.Pk = make_basis(m_mesh, ref, BasisKind::P, k, r);
  cd.Pkm1 = make_basis(m_mesh, ref, BasisKind::P, k - 1, r);
  cd.P0k1 = make_basis(m_mesh, ref, BasisKind::P0, k + 1, r);
  cd.VPk = make_basis(m_mesh, ref, BasisKind::VP, k, r);
  cd.Rkm1 = make_basis(m_mesh, ref, BasisKind::R, k - 1, r);
  cd.CRk = make_basis(m_mesh, ref, BasisKind::CR, k, r);
  cd.Gkm1 = make_basis(m_mesh, ref, BasisKind::G, k - 1, r);
  cd.CGk = make_basis(m_mesh, ref, BasisKind::CG, k, r);
  cd.CGk1 = make_basis(m_mesh, ref, BasisKind::CG, k + 1, r);
  cd.CRk2 = make_basis(m_mesh, ref, BasisKind::CR, k + 2, r);
  cd.grad_dofs = m_grad.local_dofs(m_mesh, ref);
  cd.curl_dofs = m_curl.local_dofs(m_mesh, ref);
  cd.div_dofs = m_div.local_dofs(m_mesh, ref);
  const std::string name = "cell " + std::to_string(t);
  const Values Wv = cd.VPk.values(r.points);
  const int nW = cd.VPk.dim();

  if (m_mask.grad) {
    const int nloc = static_cast<int>(cd.grad_dofs.size());
    // sum_F omega_TF int_F gamma_F q (v . n_F)
    auto face_term = [&](const PolyBasis& test) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(test.dim(), nloc);
      for (std::size_t i = 0; i < cell.faces.size(); ++i) {
        const Face& face = m_mesh.face(cell.faces[i]);
        const FaceData& fd = m_faces[cell.faces[i]];
        const Eigen::MatrixXd tn = dot(test.values(fd.rule.points), face.normal);
        const Eigen::MatrixXd g = fd.Pk1.values(fd.rule.points)[0] * fd.gammaF;
        scatter_cols(B, tn.transpose() * fd.rule.weights.asDiagonal() * g, embed_indices(fd.grad_dofs, cd.grad_dofs),
                     cell.face_orientations[i]);
      }
      return B;
    };
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nW, nloc);
    scatter_cols(B, gram(div(cd.VPk).values(r.points), cd.Pkm1.values(r.points), r.weights),
                 own_positions(m_grad, ref, cd.grad_dofs), -1.);
    B += face_term(cd.VPk);
    cd.GT = B;

    const Eigen::MatrixXd A = gram(div(cd.CRk2).values(r.points), cd.Pk1.values(r.points), r.weights);
    const Eigen::MatrixXd rhs = -gram(cd.CRk2.values(r.points), Wv, r.weights) * cd.GT + face_term(cd.CRk2);
    double c = 0.;
    cd.Pgrad = solve_local(A, rhs, name + " scalar potential", &c);
    cd.condition = std::max(cd.condition, c);
  }

  if (m_mask.curl) {
    const int nloc = static_cast<int>(cd.curl_dofs.size());
    const std::vector<int> own = own_positions(m_curl, ref, cd.curl_dofs);
    const int nR = cd.Rkm1.dim();
    // sum_F omega_TF int_F gamma_tF v_F . (z x n_F)
    auto face_term = [&](const PolyBasis& test) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(test.dim(), nloc);
      for (std::size_t i = 0; i < cell.faces.size(); ++i) {
        const Face& face = m_mesh.face(cell.faces[i]);
        const FaceData& fd = m_faces[cell.faces[i]];
        const Values zt = tangent_components(cross(test.values(fd.rule.points), face.normal), face);
        Values gt = fd.VPk.values(fd.rule.points);
        for (auto& g : gt) g = g * fd.gammatF;
        scatter_cols(B, gram(zt, gt, fd.rule.weights), embed_indices(fd.curl_dofs, cd.curl_dofs),
                     cell.face_orientations[i]);
      }
      return B;
    };
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nW, nloc);
    scatter_cols(B, gram(curl(cd.VPk).values(r.points), cd.Rkm1.values(r.points), r.weights), slice(own, 0, nR));
    B += face_term(cd.VPk);
    cd.CT = B;

    const int nZ = cd.CGk1.dim(), nY = cd.CRk.dim();
    Eigen::MatrixXd M(nZ + nY, nW);
    M.topRows(nZ) = gram(curl(cd.CGk1).values(r.points), Wv, r.weights);
    M.bottomRows(nY) = gram(cd.CRk.values(r.points), Wv, r.weights);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nZ + nY, nloc);
    rhs.topRows(nZ) = gram(cd.CGk1.values(r.points), Wv, r.weights) * cd.CT - face_term(cd.CGk1);
    Eigen::MatrixXd bottom = Eigen::MatrixXd::Zero(nY, nloc);
    scatter_cols(bottom, gram(cd.CRk.values(r.points), cd.CRk.values(r.points), r.weights), slice(own, nR, nY));
    rhs.bottomRows(nY) = bottom;
    double c = 0.;
    cd.Pcurl = solve_local(M, rhs, name + " vector potential (curl)", &c);
    cd.condition = std::max(cd.condition, c);
  }

  if (m_mask.div) {
    const int nloc = static_cast<int>(cd.div_dofs.size());
    const std::vector<int> own = own_positions(m_div, ref, cd.div_dofs);
    const int nG = cd.Gkm1.dim();
    // sum_F omega_TF int_F w_F z for a scalar test family
    auto face_term = [&](const PolyBasis& test) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(test.dim(), nloc);
      for (std::size_t i = 0; i < cell.faces.size(); ++i) {
        const FaceData& fd = m_faces[cell.faces[i]];
        const Eigen::MatrixXd z = test.values(fd.rule.points)[0];
        const Eigen::MatrixXd wf = fd.Pk.values(fd.rule.points)[0];
        scatter_cols(B, z.transpose() * fd.rule.weights.asDiagonal() * wf, embed_indices(fd.div_dofs, cd.div_dofs),
                     cell.face_orientations[i]);
      }
      return B;
    };
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(cd.Pk.dim(), nloc);
    scatter_cols(B, gram(grad(cd.Pk).values(r.points), cd.Gkm1.values(r.points), r.weights), slice(own, 0, nG), -1.);
    B += face_term(cd.Pk);
    cd.DT = B;

    const int nZ = cd.P0k1.dim(), nY = cd.CGk.dim();
    Eigen::MatrixXd M(nZ + nY, nW);
    M.topRows(nZ) = gram(grad(cd.P0k1).values(r.points), Wv, r.weights);
    M.bottomRows(nY) = gram(cd.CGk.values(r.points), Wv, r.weights);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nZ + nY, nloc);
    rhs.topRows(nZ) = -gram(cd.P0k1.values(r.points), cd.Pk.values(r.points), r.weights) * cd.DT + face_term(cd.P0k1);
    Eigen::MatrixXd bottom = Eigen::MatrixXd::Zero(nY, nloc);
    scatter_cols(bottom, gram(cd.CGk.values(r.points), cd.CGk.values(r.points), r.weights), slice(own, nG, nY));
    rhs.bottomRows(nY) = bottom;
    double c = 0.;
    cd.Pdiv = solve_local(M, rhs, name + " vector potential (div)", &c);
    cd.condition = std::max(cd.condition, c);
  }
}

//------------------------------------------------------------------------------
// Global operators
//------------------------------------------------------------------------------

Eigen::MatrixXd DdrComplex::face_uG_block(int f) const {
  const FaceData& fd = m_faces[f];
  Eigen::MatrixXd B(fd.Rkm1.dim() + fd.CRk.dim(), fd.GF.cols());
  B.topRows(fd.Rkm1.dim()) = projection(fd.Rkm1, fd.VPk, fd.rule) * fd.GF;
  B.bottomRows(fd.CRk.dim()) = projection(fd.CRk, fd.VPk, fd.rule) * fd.GF;
  return B;
}

Eigen::MatrixXd DdrComplex::cell_uG_block(int t) const {
  const CellData& cd = m_cells[t];
  Eigen::MatrixXd B(cd.Rkm1.dim() + cd.CRk.dim(), cd.GT.cols());
  B.topRows(cd.Rkm1.dim()) = projection(cd.Rkm1, cd.VPk, cd.rule) * cd.GT;
  B.bottomRows(cd.CRk.dim()) = projection(cd.CRk, cd.VPk, cd.rule) * cd.GT;
  return B;
}

Eigen::MatrixXd DdrComplex::cell_uC_block(int t) const {
  const CellData& cd = m_cells[t];
  Eigen::MatrixXd B(cd.Gkm1.dim() + cd.CGk.dim(), cd.CT.cols());
  B.topRows(cd.Gkm1.dim()) = projection(cd.Gkm1, cd.VPk, cd.rule) * cd.CT;
  B.bottomRows(cd.CGk.dim()) = projection(cd.CGk, cd.VPk, cd.rule) * cd.CT;
  return B;
}

Eigen::MatrixXd DdrComplex::local_uG(int t) const {
  if (!m_mask.grad) throw ArgumentError("gradient operators were not built");
  const Cell& cell = m_mesh.cell(t);
  const CellData& cd = m_cells[t];
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(cd.curl_dofs.size(), cd.grad_dofs.size());
  for (int e : cell.edges) {
    const EdgeData& ed = m_edges[e];
    scatter_block(U, ed.GE, embed_indices(own_dofs(m_curl, {1, e}), cd.curl_dofs),
                  embed_indices(ed.grad_dofs, cd.grad_dofs));
  }
  for (int f : cell.faces) {
    const FaceData& fd = m_faces[f];
    scatter_block(U, face_uG_block(f), embed_indices(own_dofs(m_curl, {2, f}), cd.curl_dofs),
                  embed_indices(fd.grad_dofs, cd.grad_dofs));
  }
  std::vector<int> cols(cd.grad_dofs.size());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = static_cast<int>(j);
  scatter_block(U, cell_uG_block(t), embed_indices(own_dofs(m_curl, {3, t}), cd.curl_dofs), cols);
  return U;
}

Eigen::MatrixXd DdrComplex::local_uC(int t) const {
  if (!m_mask.curl) throw ArgumentError("curl operators were not built");
  const Cell& cell = m_mesh.cell(t);
  const CellData& cd = m_cells[t];
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(cd.div_dofs.size(), cd.curl_dofs.size());
  for (int f : cell.faces) {
    const FaceData& fd = m_faces[f];
    scatter_block(U, fd.CF, embed_indices(own_dofs(m_div, {2, f}), cd.div_dofs),
                  embed_indices(fd.curl_dofs, cd.curl_dofs));
  }
  std::vector<int> cols(cd.curl_dofs.size());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = static_cast<int>(j);
  scatter_block(U, cell_uC_block(t), embed_indices(own_dofs(m_div, {3, t}), cd.div_dofs), cols);
  return U;
}

SparseMatrix DdrComplex::uG() const {
  if (!m_mask.grad) throw ArgumentError("gradient operators were not built");
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t e = 0; e < m_mesh.n_edges(); ++e)
    add_triplets(trips, m_edges[e].GE, own_dofs(m_curl, {1, int(e)}), m_edges[e].grad_dofs);
  for (std::size_t f = 0; f < m_mesh.n_faces(); ++f)
    add_triplets(trips, face_uG_block(int(f)), own_dofs(m_curl, {2, int(f)}), m_faces[f].grad_dofs);
  for (std::size_t t = 0; t < m_mesh.n_cells(); ++t)
    add_triplets(trips, cell_uG_block(int(t)), own_dofs(m_curl, {3, int(t)}), m_cells[t].grad_dofs);
  SparseMatrix M(m_curl.dimension(), m_grad.dimension());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

SparseMatrix DdrComplex::uC() const {
  if (!m_mask.curl) throw ArgumentError("curl operators were not built");
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t f = 0; f < m_mesh.n_faces(); ++f)
    add_triplets(trips, m_faces[f].CF, own_dofs(m_div, {2, int(f)}), m_faces[f].curl_dofs);
  for (std::size_t t = 0; t < m_mesh.n_cells(); ++t)
    add_triplets(trips, cell_uC_block(int(t)), own_dofs(m_div, {3, int(t)}), m_cells[t].curl_dofs);
  SparseMatrix M(m_div.dimension(), m_curl.dimension());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

SparseMatrix DdrComplex::D() const {
  if (!m_mask.div) throw ArgumentError("divergence operators were not built");
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t t = 0; t < m_mesh.n_cells(); ++t)
    add_triplets(trips, m_cells[t].DT, own_dofs(m_l2, {3, int(t)}), m_cells[t].div_dofs);
  SparseMatrix M(m_l2.dimension(), m_div.dimension());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

} // namespace ddr
