#include "ddr/magnetostatics.hpp"
#include "ddr/manufactured.hpp"
#include "ddr/parallel.hpp"
#include "ddr/products.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ddr {

MagnetostaticsProblem manufactured_problem() {
  MagnetostaticsProblem p;
  p.J = manufactured::J;
  p.H_exact = manufactured::H;
  p.A_exact = manufactured::A;
  return p;
}

Eigen::VectorXd load_vector(const DdrComplex& c, const VectorField& J) {
  const Mesh& mesh = c.mesh();
  const std::size_t nc = mesh.n_cells();
  std::vector<Eigen::VectorXd> local(nc);
  const Sampler s = sample(J);
  parallel_for(nc, c.options().threads, [&](std::size_t t) {
    const CellData& cd = c.cell(static_cast<int>(t));
    const QuadRule r = entity_rule(mesh, {3, static_cast<int>(t)}, c.interp_degree());
    const Eigen::VectorXd m = gram(cd.VPk.values(r.points), s(r.points), r.weights).col(0);
    local[t] = cd.Pdiv.transpose() * m;
  });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c.div_space().dimension());
  for (std::size_t t = 0; t < nc; ++t) {
    const auto& dofs = c.cell(static_cast<int>(t)).div_dofs;
    for (std::size_t i = 0; i < dofs.size(); ++i) out(dofs[i]) += local[t](i);
  }
  return out;
}

MagnetostaticsSystem assemble_magnetostatics(const DdrComplex& c, const MagnetostaticsProblem& p) {
  MagnetostaticsSystem s;
  const std::vector<double>* mu = p.mu.empty() ? nullptr : &p.mu;
  s.curl_product = global_l2_product(c, SpaceKind::Curl, mu);
  s.div_product = global_l2_product(c, SpaceKind::Div);
  s.uC = c.uC();
  s.D = c.D();
  s.a = s.curl_product;
  s.b = s.div_product * s.uC;
  s.c = s.D.transpose() * s.D;
  s.n_curl = c.curl_space().dimension();
  s.n_div = c.div_space().dimension();

  std::vector<Eigen::Triplet<double>> trips;
  auto put = [&](const SparseMatrix& m, std::size_t r0, std::size_t c0, double f) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it)
        trips.emplace_back(static_cast<int>(r0 + it.row()), static_cast<int>(c0 + it.col()), f * it.value());
  };
  const SparseMatrix bt = s.b.transpose();
  put(s.a, 0, 0, 1.);
  put(bt, 0, s.n_curl, -1.);
  put(s.b, s.n_curl, 0, 1.);
  put(s.c, s.n_curl, s.n_curl, 1.);
  const std::size_t n = s.n_curl + s.n_div;
  s.matrix.resize(n, n);
  s.matrix.setFromTriplets(trips.begin(), trips.end());
  s.matrix.makeCompressed();

  s.rhs = Eigen::VectorXd::Zero(n);
  if (p.J) s.rhs.tail(s.n_div) = load_vector(c, p.J);
  return s;
}

MagnetostaticsSolution solve_magnetostatics(const MagnetostaticsSystem& s) { return solve_magnetostatics(s, s.rhs); }

MagnetostaticsSolution solve_magnetostatics(const MagnetostaticsSystem& s, const Eigen::VectorXd& rhs) {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(s.matrix);
  lu.factorize(s.matrix);
  if (lu.info() != Eigen::Success) throw NumericalError("sparse LU factorization failed: " + lu.lastErrorMessage());
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw NumericalError("sparse LU solve failed");
  MagnetostaticsSolution sol;
  sol.H = x.head(s.n_curl);
  sol.A = x.tail(s.n_div);
  const double nr = rhs.norm();
  sol.residual = nr > 0. ? (s.matrix * x - rhs).norm() / nr : (s.matrix * x).norm();
  return sol;
}

double curl_graph_norm(const MagnetostaticsSystem& s, const Eigen::VectorXd& z) {
  const Eigen::VectorXd cz = s.uC * z;
  return std::sqrt(std::max(0., z.dot(s.curl_product * z) + cz.dot(s.div_product * cz)));
}

double div_graph_norm(const MagnetostaticsSystem& s, const Eigen::VectorXd& v) {
  const Eigen::VectorXd dv = s.D * v;
  return std::sqrt(std::max(0., v.dot(s.div_product * v) + dv.squaredNorm()));
}

ErrorNorms error_norms(const DdrComplex& c, const MagnetostaticsSystem& s, const MagnetostaticsProblem& p,
                       const Eigen::VectorXd& H, const Eigen::VectorXd& A) {
  if (!p.H_exact || !p.A_exact) throw ArgumentError("error norms need the exact solution");
  const Eigen::VectorXd IH = interpolate_curl(c, p.H_exact);
  const Eigen::VectorXd IA = interpolate_div(c, p.A_exact);
  ErrorNorms e;
  e.e_curl = curl_graph_norm(s, H - IH);
  e.e_div = div_graph_norm(s, A - IA);
  e.norm_IH = curl_graph_norm(s, IH);
  e.norm_IA = div_graph_norm(s, IA);
  e.e_rel = std::hypot(e.e_curl, e.e_div) / std::hypot(e.norm_IH, e.norm_IA);
  return e;
}

Mesh family_mesh(const std::string& family, int level, std::uint64_t seed) {
  if (family == "cubic") return generate_cubic_mesh(level);
  if (family == "tet") return generate_tet_mesh(level);
  if (family == "agglo") return agglomerate_pairs(generate_cubic_mesh(level), seed);
  throw ArgumentError("unknown mesh family '" + family + "'");
}

std::vector<ConvergenceRow> convergence_study(const std::string& family, const std::vector<int>& degrees,
                                              const std::vector<int>& levels, int threads, std::uint64_t seed) {
  std::vector<ConvergenceRow> rows;
  const MagnetostaticsProblem p = manufactured_problem();
  for (int k : degrees) {
    const ConvergenceRow* prev = nullptr;
    std::size_t first = rows.size();
    for (std::size_t li = 0; li < levels.size(); ++li) {
      const Mesh mesh = family_mesh(family, levels[li], seed);
      DdrOptions opt;
      opt.degree = k;
      opt.threads = threads;
      const DdrComplex c(mesh, opt, SpaceMask{false, true, true});
      const MagnetostaticsSystem s = assemble_magnetostatics(c, p);
      MagnetostaticsSolution sol;
      try {
        sol = solve_magnetostatics(s);
      } catch (const NumericalError& e) {
        throw NumericalError(family + " level " + std::to_string(levels[li]) + ", degree " + std::to_string(k) +
                             ": " + e.what());
      }
      const ErrorNorms err = error_norms(c, s, p, sol.H, sol.A);
      ConvergenceRow row;
      row.family = family;
      row.level = levels[li];
      row.degree = k;
      row.h = mesh.h_max();
      row.n_cells = mesh.n_cells();
      row.dim_curl = c.curl_space().dimension();
      row.dim_div = c.div_space().dimension();
      row.error = err.e_rel;
      row.residual = sol.residual;
      if (prev) {
        row.rate = std::log(prev->error / row.error) / std::log(prev->h / row.h);
        row.has_rate = true;
      }
      rows.push_back(row);
      prev = &rows.back();
      (void)first;
    }
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "mesh_family,level,mesh_size_h,num_cells,dim_xcurl,dim_xdiv,err_hcurl_hdiv_rel,rate,degree\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.family << ',' << r.level << ',';
    std::snprintf(buf, sizeof buf, "%.10e", r.h);
    out << buf << ',' << r.n_cells << ',' << r.dim_curl << ',' << r.dim_div << ',';
    std::snprintf(buf, sizeof buf, "%.10e", r.error);
    out << buf << ',';
    if (r.has_rate) {
      std::snprintf(buf, sizeof buf, "%.6f", r.rate);
      out << buf;
    }
    out << ',' << r.degree << '\n';
  }
  return out.str();
}

} // namespace ddr
