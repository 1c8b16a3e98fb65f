#include "ddr/polynomial.hpp"

#include <map>
#include <mutex>

namespace ddr {

const std::vector<Exponent>& monomial_exponents(int nvars, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<Exponent>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(nvars, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Exponent> exps;
  for (int d = 0; d <= degree; ++d) {
    if (nvars == 1) {
      exps.push_back({d, 0, 0});
    } else if (nvars == 2) {
      for (int a = d; a >= 0; --a) exps.push_back({a, d - a, 0});
    } else {
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) exps.push_back({a, b, d - a - b});
    }
  }
  return cache.emplace(key, std::move(exps)).first->second;
}

int monomial_index(int nvars, const Exponent& e) {
  const int d = e[0] + e[1] + e[2];
  const int base = poly_dim(nvars, d - 1);
  if (nvars == 1) return base;
  if (nvars == 2) return base + (d - e[0]);
  const int s = d - e[0];
  return base + s * (s + 1) / 2 + (s - e[1]);
}

Eigen::MatrixXd monomial_values(int nvars, int degree, const Eigen::MatrixXd& xi) {
  const auto& exps = monomial_exponents(nvars, degree);
  const Eigen::Index np = xi.cols();
  Eigen::MatrixXd out(np, static_cast<Eigen::Index>(exps.size()));
  if (degree < 0) return out;
  std::vector<Eigen::MatrixXd> powers(nvars, Eigen::MatrixXd(np, degree + 1));
  for (int v = 0; v < nvars; ++v) {
    powers[v].col(0).setOnes();
    for (int p = 1; p <= degree; ++p) powers[v].col(p) = powers[v].col(p - 1).cwiseProduct(xi.row(v).transpose());
  }
  for (std::size_t m = 0; m < exps.size(); ++m) {
    Eigen::VectorXd col = powers[0].col(exps[m][0]);
    for (int v = 1; v < nvars; ++v) col = col.cwiseProduct(powers[v].col(exps[m][v]));
    out.col(static_cast<Eigen::Index>(m)) = col;
  }
  return out;
}

std::vector<Eigen::MatrixXd> PolyFamily::values(const Eigen::MatrixXd& xi) const {
  const int nm = nmono();
  Eigen::MatrixXd mv = monomial_values(nvars, degree, xi);
  std::vector<Eigen::MatrixXd> out(ncomp);
  for (int c = 0; c < ncomp; ++c) out[c] = mv * coeffs.middleCols(c * nm, nm).transpose();
  return out;
}

PolyFamily empty_family(int nvars, int ncomp, int degree) {
  PolyFamily f;
  f.nvars = nvars;
  f.ncomp = ncomp;
  f.degree = std::max(degree, 0);
  f.coeffs.resize(0, ncomp * f.nmono());
  return f;
}

PolyFamily scalar_monomials(int nvars, int degree) {
  PolyFamily f = empty_family(nvars, 1, degree);
  if (degree < 0) return f;
  f.coeffs = Eigen::MatrixXd::Identity(f.nmono(), f.nmono());
  return f;
}

PolyFamily scalar_monomials_range(int nvars, int lo, int hi) {
  PolyFamily f = empty_family(nvars, 1, hi);
  if (hi < 0 || lo > hi) return f;
  const int first = poly_dim(nvars, std::max(lo, 0) - 1);
  const int n = f.nmono() - first;
  f.coeffs = Eigen::MatrixXd::Zero(n, f.nmono());
  for (int i = 0; i < n; ++i) f.coeffs(i, first + i) = 1.;
  return f;
}

PolyFamily tensorize(const PolyFamily& scalar, int ncomp) {
  PolyFamily f = empty_family(scalar.nvars, ncomp, scalar.degree);
  const int nm = f.nmono(), n = scalar.size();
  f.coeffs = Eigen::MatrixXd::Zero(ncomp * n, ncomp * nm);
  for (int c = 0; c < ncomp; ++c) f.coeffs.block(c * n, c * nm, n, nm) = scalar.coeffs;
  return f;
}

PolyFamily raise_degree(const PolyFamily& f, int degree) {
  if (degree <= f.degree) return f;
  PolyFamily g = empty_family(f.nvars, f.ncomp, degree);
  const int nm0 = f.nmono(), nm = g.nmono();
  g.coeffs = Eigen::MatrixXd::Zero(f.size(), f.ncomp * nm);
  for (int c = 0; c < f.ncomp; ++c) g.coeffs.block(0, c * nm, f.size(), nm0) = f.coeffs.middleCols(c * nm0, nm0);
  return g;
}

PolyFamily concat(const PolyFamily& a, const PolyFamily& b) {
  if (a.nvars != b.nvars || a.ncomp != b.ncomp) throw ArgumentError("concat: incompatible families");
  const int d = std::max(a.degree, b.degree);
  PolyFamily ra = raise_degree(a, d), rb = raise_degree(b, d);
  PolyFamily f = empty_family(a.nvars, a.ncomp, d);
  f.coeffs.resize(a.size() + b.size(), ra.coeffs.cols());
  f.coeffs.topRows(a.size()) = ra.coeffs;
  f.coeffs.bottomRows(b.size()) = rb.coeffs;
  return f;
}

PolyFamily combine(const Eigen::MatrixXd& M, const PolyFamily& f) {
  PolyFamily g = f;
  g.coeffs = M * f.coeffs;
  return g;
}

PolyFamily component(const PolyFamily& f, int c) {
  PolyFamily g = empty_family(f.nvars, 1, f.degree);
  g.coeffs = f.coeffs.middleCols(c * f.nmono(), f.nmono());
  return g;
}

namespace {

/// Assembles a vector family from scalar component families of equal size
PolyFamily assemble_components(const std::vector<PolyFamily>& comps) {
  int d = 0;
  for (const auto& c : comps) d = std::max(d, c.degree);
  PolyFamily f = empty_family(comps[0].nvars, static_cast<int>(comps.size()), d);
  const int nm = f.nmono();
  f.coeffs = Eigen::MatrixXd::Zero(comps[0].size(), f.ncomp * nm);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    PolyFamily r = raise_degree(comps[c], d);
    f.coeffs.middleCols(static_cast<Eigen::Index>(c) * nm, nm) = r.coeffs;
  }
  return f;
}

/// Transfer matrix (nmono_in x nmono_out) acting on coefficient rows
Eigen::MatrixXd partial_matrix(int nvars, int degree, int var) {
  const auto& exps = monomial_exponents(nvars, degree);
  const int n = static_cast<int>(exps.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    Exponent e = exps[m];
    if (e[var] == 0) continue;
    const int p = e[var];
    e[var] -= 1;
    D(m, monomial_index(nvars, e)) = p;
  }
  return D;
}

Eigen::MatrixXd times_matrix(int nvars, int degree, int var) {
  const auto& exps = monomial_exponents(nvars, degree);
  const int n = static_cast<int>(exps.size());
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, poly_dim(nvars, degree + 1));
  for (int m = 0; m < n; ++m) {
    Exponent e = exps[m];
    e[var] += 1;
    X(m, monomial_index(nvars, e)) = 1.;
  }
  return X;
}

} // namespace

PolyFamily partial(const PolyFamily& f, int var) {
  const int nm = f.nmono();
  Eigen::MatrixXd D = partial_matrix(f.nvars, f.degree, var);
  PolyFamily g = f;
  for (int c = 0; c < f.ncomp; ++c) g.coeffs.middleCols(c * nm, nm) = f.coeffs.middleCols(c * nm, nm) * D;
  return g;
}

PolyFamily times_coordinate(const PolyFamily& f, int var) {
  const int nm = f.nmono();
  Eigen::MatrixXd X = times_matrix(f.nvars, f.degree, var);
  PolyFamily g = empty_family(f.nvars, f.ncomp, f.degree + 1);
  const int nm1 = g.nmono();
  g.coeffs.resize(f.size(), f.ncomp * nm1);
  for (int c = 0; c < f.ncomp; ++c) g.coeffs.middleCols(c * nm1, nm1) = f.coeffs.middleCols(c * nm, nm) * X;
  return g;
}

PolyFamily gradient(const PolyFamily& f, double scale) {
  if (f.ncomp != 1) throw ArgumentError("gradient of a non-scalar family");
  std::vector<PolyFamily> comps;
  for (int v = 0; v < f.nvars; ++v) {
    PolyFamily d = partial(f, v);
    d.coeffs *= scale;
    comps.push_back(d);
  }
  return assemble_components(comps);
}

PolyFamily divergence(const PolyFamily& f, double scale) {
  if (f.ncomp != f.nvars) throw ArgumentError("divergence needs ncomp == nvars");
  PolyFamily s = partial(component(f, 0), 0);
  for (int v = 1; v < f.nvars; ++v) s.coeffs += partial(component(f, v), v).coeffs;
  s.coeffs *= scale;
  return s;
}

PolyFamily curl(const PolyFamily& f, double scale) {
  if (f.ncomp != 3 || f.nvars != 3) throw ArgumentError("curl needs a 3D vector family");
  auto d = [&](int c, int v) { return partial(component(f, c), v); };
  PolyFamily c0 = d(2, 1), c1 = d(0, 2), c2 = d(1, 0);
  c0.coeffs -= d(1, 2).coeffs;
  c1.coeffs -= d(2, 0).coeffs;
  c2.coeffs -= d(0, 1).coeffs;
  PolyFamily g = assemble_components({c0, c1, c2});
  g.coeffs *= scale;
  return g;
}

PolyFamily rot2(const PolyFamily& f, double scale) {
  if (f.ncomp != 2 || f.nvars != 2) throw ArgumentError("rot2 needs a 2D vector family");
  PolyFamily r = partial(component(f, 1), 0);
  r.coeffs -= partial(component(f, 0), 1).coeffs;
  r.coeffs *= scale;
  return r;
}

PolyFamily vrot2(const PolyFamily& f, double scale) {
  if (f.ncomp != 1 || f.nvars != 2) throw ArgumentError("vrot2 needs a 2D scalar family");
  PolyFamily a = partial(f, 1), b = partial(f, 0);
  b.coeffs *= -1.;
  PolyFamily g = assemble_components({a, b});
  g.coeffs *= scale;
  return g;
}

PolyFamily koszul_vector(const PolyFamily& scalar) {
  std::vector<PolyFamily> comps;
  for (int v = 0; v < scalar.nvars; ++v) comps.push_back(times_coordinate(scalar, v));
  return assemble_components(comps);
}

PolyFamily koszul_perp2(const PolyFamily& scalar) {
  PolyFamily a = times_coordinate(scalar, 1), b = times_coordinate(scalar, 0);
  b.coeffs *= -1.;
  return assemble_components({a, b});
}

PolyFamily koszul_cross3(const PolyFamily& vec) {
  if (vec.ncomp != 3 || vec.nvars != 3) throw ArgumentError("koszul_cross3 needs a 3D vector family");
  auto t = [&](int c, int v) { return times_coordinate(component(vec, c), v); };
  // xi x v = (xi1 v2 - xi2 v1, xi2 v0 - xi0 v2, xi0 v1 - xi1 v0)
  PolyFamily c0 = t(2, 1), c1 = t(0, 2), c2 = t(1, 0);
  c0.coeffs -= t(1, 2).coeffs;
  c1.coeffs -= t(2, 0).coeffs;
  c2.coeffs -= t(0, 1).coeffs;
  return assemble_components({c0, c1, c2});
}

} // namespace ddr
