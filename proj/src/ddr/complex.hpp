// The discrete de Rham complex: local bases, discrete operators, traces,
// potentials and global operator matrices.

#ifndef DDR_COMPLEX_HPP
#define DDR_COMPLEX_HPP

#include "ddr/dofspace.hpp"

#include <Eigen/Sparse>
#include <memory>

namespace ddr {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct DdrOptions {
  int degree = 0;
  int threads = 1;
  int quad_degree = -1;   ///< default 2k+4
  int interp_degree = -1; ///< default 2k+6
  bool alternative_stabilization = false;
};

struct EdgeData {
  QuadRule rule;
  PolyBasis Pk1, Pk, Pkm1;
  std::vector<int> grad_dofs, curl_dofs;
  Eigen::MatrixXd reconstruct; ///< grad DOFs -> P^{k+1}(E)
  Eigen::MatrixXd GE;          ///< grad DOFs -> P^k(E)
};

struct FaceData {
  QuadRule rule;
  PolyBasis Pk1, Pk, Pkm1, P0k1, VPk, Rkm1, CRk, CRk2;
  std::vector<int> grad_dofs, curl_dofs, div_dofs;
  Eigen::MatrixXd GF;      ///< grad DOFs -> vP^k(F)
  Eigen::MatrixXd gammaF;  ///< grad DOFs -> P^{k+1}(F)
  Eigen::MatrixXd CF;      ///< curl DOFs -> P^k(F)
  Eigen::MatrixXd gammatF; ///< curl DOFs -> vP^k(F)
  double condition = 0.;   ///< largest local-system condition number
};

struct CellData {
  QuadRule rule;
  PolyBasis Pk1, Pk, Pkm1, P0k1, VPk, Rkm1, CRk, Gkm1, CGk, CGk1, CRk2;
  std::vector<int> grad_dofs, curl_dofs, div_dofs;
  Eigen::MatrixXd GT, Pgrad; ///< grad DOFs -> vP^k(T), P^{k+1}(T)
  Eigen::MatrixXd CT, Pcurl; ///< curl DOFs -> vP^k(T), vP^k(T)
  Eigen::MatrixXd DT, Pdiv;  ///< div DOFs -> P^k(T), vP^k(T)
  double condition = 0.;
};

/// Which operator families to build
struct SpaceMask {
  bool grad = true, curl = true, div = true;
};

class DdrComplex {
public:
  DdrComplex(const Mesh& mesh, DdrOptions options, SpaceMask mask = {});

  const Mesh& mesh() const { return m_mesh; }
  const DdrOptions& options() const { return m_options; }
  int degree() const { return m_options.degree; }
  int quad_degree() const { return m_qdeg; }
  int interp_degree() const { return m_ideg; }
  const SpaceMask& mask() const { return m_mask; }

  const DofSpace& space(SpaceKind which) const;
  const DofSpace& grad_space() const { return m_grad; }
  const DofSpace& curl_space() const { return m_curl; }
  const DofSpace& div_space() const { return m_div; }
  const DofSpace& l2_space() const { return m_l2; }

  const EdgeData& edge(int e) const { return m_edges[e]; }
  const FaceData& face(int f) const { return m_faces[f]; }
  const CellData& cell(int t) const { return m_cells[t]; }

  /// Local dofs of a cell in the given space
  const std::vector<int>& cell_dofs(SpaceKind which, int t) const;

  /// Full local operators of a cell (rows: target space cell-local DOFs)
  Eigen::MatrixXd local_uG(int t) const;
  Eigen::MatrixXd local_uC(int t) const;

  /// Global operator matrices
  SparseMatrix uG() const;
  SparseMatrix uC() const;
  SparseMatrix D() const;

  /// Projection matrices between orthonormal bases (rows: target)
  static Eigen::MatrixXd projection(const PolyBasis& target, const PolyBasis& source, const QuadRule& rule);

private:
  void build_edge(int e);
  void build_face(int f);
  void build_cell(int t);

  /// Blocks of the global operators owned by one entity: rows are the entity's
  /// own target DOFs, columns its local source DOFs.
  Eigen::MatrixXd face_uG_block(int f) const;
  Eigen::MatrixXd cell_uG_block(int t) const;
  Eigen::MatrixXd cell_uC_block(int t) const;

  const Mesh& m_mesh;
  DdrOptions m_options;
  SpaceMask m_mask;
  int m_qdeg, m_ideg;
  DofSpace m_grad, m_curl, m_div, m_l2;
  std::vector<EdgeData> m_edges;
  std::vector<FaceData> m_faces;
  std::vector<CellData> m_cells;
};

/// Solves A X = B by LU with partial pivoting; throws NumericalError naming
/// `what` when the 2-norm condition number of A exceeds 1e12. Returns the
/// condition number through `cond` when non-null.
Eigen::MatrixXd solve_local(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const std::string& what,
                            double* cond = nullptr);

/// target.col(pos[j]) += factor * src.col(j)
void scatter_cols(Eigen::MatrixXd& target, const Eigen::MatrixXd& src, const std::vector<int>& pos,
                  double factor = 1.);

} // namespace ddr

#endif
