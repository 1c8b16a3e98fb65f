// Interpolators onto the discrete spaces and the L2 projection on P^k(T_h).

#ifndef DDR_INTERPOLATION_HPP
#define DDR_INTERPOLATION_HPP

#include "ddr/complex.hpp"

#include <functional>

namespace ddr {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Samples one or several fields at points: one (npts x nfields) matrix per
/// Cartesian component (1 for scalar fields, 3 for vector fields)
using Sampler = std::function<Values(const Points&)>;

Sampler sample(const ScalarField& f);
Sampler sample(const VectorField& f);
/// Samples the members of a polynomial family (Cartesian components)
Sampler sample(const FieldFamily& family);

/// DOFs owned by one entity (rows) for each sampled field (columns)
Eigen::MatrixXd interpolate_entity(const DdrComplex& c, SpaceKind which, EntityRef e, const Sampler& f);
/// Cell-local DOF vectors (ordering of DdrComplex::cell_dofs) for each sampled field
Eigen::MatrixXd interpolate_cell(const DdrComplex& c, SpaceKind which, int t, const Sampler& f);

/// Global interpolates. For SpaceKind::L2 this is the L2 projection pi^k_h.
Eigen::VectorXd interpolate(const DdrComplex& c, SpaceKind which, const Sampler& f);
inline Eigen::VectorXd interpolate_grad(const DdrComplex& c, const ScalarField& f) {
  return interpolate(c, SpaceKind::Grad, sample(f));
}
inline Eigen::VectorXd interpolate_curl(const DdrComplex& c, const VectorField& f) {
  return interpolate(c, SpaceKind::Curl, sample(f));
}
inline Eigen::VectorXd interpolate_div(const DdrComplex& c, const VectorField& f) {
  return interpolate(c, SpaceKind::Div, sample(f));
}
inline Eigen::VectorXd project_l2(const DdrComplex& c, const ScalarField& f) {
  return interpolate(c, SpaceKind::L2, sample(f));
}

/// Restriction of a global vector to a cell-local list
Eigen::VectorXd restrict_to(const Eigen::VectorXd& global, const std::vector<int>& dofs);

} // namespace ddr

#endif
