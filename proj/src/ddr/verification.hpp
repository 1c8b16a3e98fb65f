// Property checks of the discrete complex: algebraic identities, polynomial
// consistency, commutation, convergence rates, adjoint consistency and
// Poincare constants. Every check returns a CheckReport and never throws on a
// failed property (exceptions are reserved for invalid input).

#ifndef DDR_VERIFICATION_HPP
#define DDR_VERIFICATION_HPP

#include "ddr/complex.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ddr {

struct Metric {
  std::string name;
  double value = 0.;
  double tolerance = 0.;
  std::string comparison; ///< "<", "<=", ">=", "==" or empty for informational values
  bool passed = true;
};

struct CheckReport {
  std::string name;
  std::string subject; ///< mesh or family/levels the check ran on
  bool passed = true;
  std::vector<Metric> metrics;
  std::vector<std::string> notes;

  /// Records a value; a comparison makes it part of the verdict
  void measure(const std::string& name, double value, const std::string& comparison = "", double tolerance = 0.);
  void info(const std::string& name, double value) { measure(name, value); }
  void fail(const std::string& note);
  void note(const std::string& note) { notes.push_back(note); }
  const Metric* find(const std::string& name) const;
};

std::string report_text(const CheckReport& r);
std::string reports_text(const std::vector<CheckReport>& rs);
std::string reports_json(const std::vector<CheckReport>& rs);

struct VerifyOptions {
  int degree = 0;
  int threads = 1;
  std::uint64_t seed = 0;
};

/// uC uG = 0, D uC = 0, and the exactness rank identities when the total
/// number of DOFs does not exceed dense_limit
CheckReport check_complex(const Mesh& mesh, const VerifyOptions& o, std::size_t dense_limit = 3000);

/// Links between element and face operators and between potentials and
/// operators, for random local DOFs and test polynomials on every cell
CheckReport check_links(const Mesh& mesh, const VerifyOptions& o);

/// uG I_grad q = I_curl grad q, uC I_curl v = I_div curl v, D I_div w = pi^k div w
/// for random trigonometric fields, cell by cell. interp_degree < 0 means 2k+12.
CheckReport check_commutation(const Mesh& mesh, const VerifyOptions& o, int interp_degree = -1,
                              double frequency = 3.);

/// Potentials, traces and stabilizations on polynomial interpolates
CheckReport check_polynomial_consistency(const Mesh& mesh, const VerifyOptions& o);

/// Tangential and normal traces of Nedelec / Raviart-Thomas functions on every
/// cell and face, degrees 1..max_degree
CheckReport check_traces(const Mesh& mesh, int max_degree = 3, int threads = 1);

/// Recovery identities for (G, cG) and (R, cR) on every face and cell
CheckReport check_recovery(const Mesh& mesh, int max_degree = 3, std::uint64_t seed = 0, int threads = 1);

/// Approximation rates of the potentials, operators and stabilizations on
/// smooth fields; slopes fitted on the finest pair of levels
CheckReport check_primal_consistency(const std::string& family, const std::vector<int>& levels,
                                     const VerifyOptions& o, double slope_tolerance = 0.3);

/// Adjoint consistency functionals evaluated at interpolates of the
/// manufactured fields, normalized and fitted for decay
CheckReport check_adjoint_decay(const std::string& family, const std::vector<int>& levels, const VerifyOptions& o,
                                double slope_tolerance = 0.3);

struct PoincareConstants {
  double grad = 0., curl = 0., div = 0.;
};

/// Constants of the discrete Poincare inequalities in the component norms
/// (dense generalized eigenproblems; throws ArgumentError above dense_limit DOFs)
PoincareConstants poincare_constants(const Mesh& mesh, const VerifyOptions& o, std::size_t dense_limit = 3000);

/// Constants on each mesh are finite and below `bound`; ratios between
/// consecutive meshes do not exceed `max_ratio`
CheckReport check_poincare(const std::vector<std::string>& labels, const std::vector<Mesh>& meshes,
                           const VerifyOptions& o, double bound = 50., double max_ratio = 1.5);

/// Singular values in decreasing order and the numerical rank
struct RankInfo {
  Eigen::VectorXd singular_values;
  int rank = 0;
  double gap = 0.; ///< smallest kept over largest dropped singular value
};
RankInfo numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

/// Slope of log(e) against log(h) between the last two entries
double fitted_slope(const std::vector<double>& h, const std::vector<double>& e);

} // namespace ddr

#endif
