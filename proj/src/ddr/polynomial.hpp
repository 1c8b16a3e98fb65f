// Polynomial families expressed in scaled monomials.
//
// A family is a set of (possibly vector-valued) polynomials in nvars local
// variables. Member i has coefficients coeffs.row(i); component c occupies the
// column block [c * nmono, (c + 1) * nmono) where nmono = poly_dim(nvars, degree).
// Monomials are in graded order, so the monomials of degree <= d are a prefix
// of those of degree <= d + 1.

#ifndef DDR_POLYNOMIAL_HPP
#define DDR_POLYNOMIAL_HPP

#include "ddr/common.hpp"

#include <array>

namespace ddr {

using Exponent = std::array<int, 3>;

/// Exponents of all monomials of total degree <= degree, graded order
const std::vector<Exponent>& monomial_exponents(int nvars, int degree);
/// Index of an exponent in the graded ordering
int monomial_index(int nvars, const Exponent& e);

/// Values of all monomials of degree <= degree at local points (nvars x npts);
/// returns npts x nmono
Eigen::MatrixXd monomial_values(int nvars, int degree, const Eigen::MatrixXd& xi);

struct PolyFamily {
  int nvars = 3;
  int ncomp = 1;
  int degree = 0;
  Eigen::MatrixXd coeffs;

  int size() const { return static_cast<int>(coeffs.rows()); }
  int nmono() const { return poly_dim(nvars, degree); }
  /// Values at local points: one (npts x size) matrix per component
  std::vector<Eigen::MatrixXd> values(const Eigen::MatrixXd& xi) const;
};

/// Empty family with the given shape
PolyFamily empty_family(int nvars, int ncomp, int degree);
/// All scalar monomials of degree <= degree
PolyFamily scalar_monomials(int nvars, int degree);
/// Scalar monomials of degree in [lo, hi]
PolyFamily scalar_monomials_range(int nvars, int lo, int hi);
/// Vector family {e_c * p_j}, component-major ordering (all p_j for c = 0 first)
PolyFamily tensorize(const PolyFamily& scalar, int ncomp);
/// Same polynomials, coefficients padded to a larger degree
PolyFamily raise_degree(const PolyFamily& f, int degree);
/// Row-stacked union of two families of the same shape
PolyFamily concat(const PolyFamily& a, const PolyFamily& b);
/// Linear combinations M * f
PolyFamily combine(const Eigen::MatrixXd& M, const PolyFamily& f);
/// Select a component of a vector family as a scalar family
PolyFamily component(const PolyFamily& f, int c);

/// d/dxi_var of every component
PolyFamily partial(const PolyFamily& f, int var);
/// xi_var times every component (degree increases by one)
PolyFamily times_coordinate(const PolyFamily& f, int var);

/// Gradient of a scalar family; components are the local variables
PolyFamily gradient(const PolyFamily& f, double scale = 1.);
/// Divergence of a vector family with ncomp == nvars
PolyFamily divergence(const PolyFamily& f, double scale = 1.);
/// Curl of a 3-component family in 3 variables
PolyFamily curl(const PolyFamily& f, double scale = 1.);
/// Scalar rot of a 2D vector field: d1 z2 - d2 z1
PolyFamily rot2(const PolyFamily& f, double scale = 1.);
/// Vector rot of a 2D scalar field: (d2 r, -d1 r)
PolyFamily vrot2(const PolyFamily& f, double scale = 1.);

/// xi * p for each scalar p (vector family with nvars components)
PolyFamily koszul_vector(const PolyFamily& scalar);
/// xi^perp * p in 2D, xi^perp = (xi2, -xi1)
PolyFamily koszul_perp2(const PolyFamily& scalar);
/// xi x v for a 3-component family v
PolyFamily koszul_cross3(const PolyFamily& vec);

} // namespace ddr

#endif
