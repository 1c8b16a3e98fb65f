// Discrete L2-products, stabilizations and component norms.

#ifndef DDR_PRODUCTS_HPP
#define DDR_PRODUCTS_HPP

#include "ddr/complex.hpp"

#include <functional>

namespace ddr {

/// int_T P P on cell-local DOFs
Eigen::MatrixXd consistent_term(const DdrComplex& c, SpaceKind which, int t);
/// Stabilization s_{which,T}; the alternative form is used when the
/// complex was built with DdrOptions::alternative_stabilization
Eigen::MatrixXd stabilization(const DdrComplex& c, SpaceKind which, int t);
/// Primary stabilization (face and edge difference quadratures)
Eigen::MatrixXd stabilization_primary(const DdrComplex& c, SpaceKind which, int t);
/// [v - I_T P v, same] in the component inner product
Eigen::MatrixXd stabilization_alternative(const DdrComplex& c, SpaceKind which, int t);
/// (., .)_{which,T} = consistent term + stabilization
Eigen::MatrixXd l2_product(const DdrComplex& c, SpaceKind which, int t);
/// Matrix of the squared component norm |||.|||^2_{which,T}
Eigen::MatrixXd component_norm_matrix(const DdrComplex& c, SpaceKind which, int t);

/// Potential of a space on a cell, as a family (Cartesian components) and matrix
const PolyBasis& potential_basis(const DdrComplex& c, SpaceKind which, int t);
const Eigen::MatrixXd& potential_matrix(const DdrComplex& c, SpaceKind which, int t);

/// Sum over cells of local forms, optionally weighted per cell
SparseMatrix assemble_cell_forms(const DdrComplex& c, SpaceKind which,
                                 const std::function<Eigen::MatrixXd(int)>& local,
                                 const std::vector<double>* weights = nullptr);
SparseMatrix global_l2_product(const DdrComplex& c, SpaceKind which, const std::vector<double>* mu = nullptr);
SparseMatrix global_component_norm(const DdrComplex& c, SpaceKind which);

double component_norm(const DdrComplex& c, SpaceKind which, const Eigen::VectorXd& dofs);

} // namespace ddr

#endif
