// DDR scheme for the magnetostatics problem
//   mu H - curl A = 0,  curl H = J,  div A = 0,  A x n = 0 on the boundary.

#ifndef DDR_MAGNETOSTATICS_HPP
#define DDR_MAGNETOSTATICS_HPP

#include "ddr/interpolation.hpp"

#include <cstdint>

namespace ddr {

struct MagnetostaticsProblem {
  std::vector<double> mu; ///< per-cell permeability; empty means mu = 1
  VectorField J;
  VectorField H_exact; ///< optional
  VectorField A_exact; ///< optional
};

/// Manufactured problem on (0,1)^3 with mu = 1
MagnetostaticsProblem manufactured_problem();

/// Blocks of [[a, -b^T], [b, c]] and the auxiliary matrices they come from
struct MagnetostaticsSystem {
  SparseMatrix a, b, c;
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  SparseMatrix curl_product; ///< mu-weighted (.,.)_{curl,h}
  SparseMatrix div_product;  ///< (.,.)_{div,h}
  SparseMatrix uC, D;
  std::size_t n_curl = 0, n_div = 0;
};

/// Sum_T int_T J . P_div v_T, with quadrature of degree 2k+6
Eigen::VectorXd load_vector(const DdrComplex& c, const VectorField& J);

MagnetostaticsSystem assemble_magnetostatics(const DdrComplex& c, const MagnetostaticsProblem& p);

struct MagnetostaticsSolution {
  Eigen::VectorXd H, A;
  double residual = 0.; ///< ||M x - r|| / ||r|| (0 for r = 0)
};

/// Sparse LU solve of the full system; throws NumericalError on failure
MagnetostaticsSolution solve_magnetostatics(const MagnetostaticsSystem& s);
MagnetostaticsSolution solve_magnetostatics(const MagnetostaticsSystem& s, const Eigen::VectorXd& rhs);

struct ErrorNorms {
  double e_curl = 0., e_div = 0., e_rel = 0.;
  double norm_IH = 0., norm_IA = 0.;
};

/// ||zeta||^2_{mu,curl,1,h} = a_h(zeta, zeta) + ||uC zeta||^2_{div,h}
double curl_graph_norm(const MagnetostaticsSystem& s, const Eigen::VectorXd& zeta);
/// ||v||^2_{div,1,h} = ||v||^2_{div,h} + ||D v||^2
double div_graph_norm(const MagnetostaticsSystem& s, const Eigen::VectorXd& v);

ErrorNorms error_norms(const DdrComplex& c, const MagnetostaticsSystem& s, const MagnetostaticsProblem& p,
                       const Eigen::VectorXd& H, const Eigen::VectorXd& A);

/// Mesh of a family at a refinement level ("cubic", "tet", "agglo")
Mesh family_mesh(const std::string& family, int level, std::uint64_t seed = 0);

struct ConvergenceRow {
  std::string family;
  int level = 0;
  int degree = 0;
  double h = 0.;
  std::size_t n_cells = 0, dim_curl = 0, dim_div = 0;
  double error = 0.;
  double rate = 0.;
  bool has_rate = false;
  double residual = 0.;
};

/// Solves the manufactured problem for every (degree, level) pair
std::vector<ConvergenceRow> convergence_study(const std::string& family, const std::vector<int>& degrees,
                                              const std::vector<int>& levels, int threads, std::uint64_t seed = 0);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

} // namespace ddr

#endif
