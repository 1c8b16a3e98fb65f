// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: ddr_acceptance [path-to-ddr-cli]

#include "ddr/ddr.h"
#include "ddr/magnetostatics.hpp"
#include "ddr/verification.hpp"

#include <Eigen/SVD>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace ddr;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

VerifyOptions opts(int k, int threads = 1) {
  VerifyOptions o;
  o.degree = k;
  o.threads = threads;
  return o;
}

DdrComplex make_complex(const Mesh& m, int k) {
  DdrOptions o;
  o.degree = k;
  return DdrComplex(m, o);
}

// Rank from a full SVD of the dense matrix with a relative threshold
int svd_rank(const SparseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  const Eigen::MatrixXd d(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const Eigen::VectorXd s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > 1e-9 * s(0);
  return r;
}

double max_abs(const SparseMatrix& m) {
  double v = 0.;
  for (int j = 0; j < m.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

std::string failing_metrics(const CheckReport& r) {
  std::string s;
  for (const Metric& m : r.metrics)
    if (!m.passed) s += (s.empty() ? "" : ", ") + m.name + " = " + std::to_string(m.value);
  for (const std::string& n : r.notes) s += (s.empty() ? "" : ", ") + n;
  return r.name + " [" + r.subject + "]: " + s;
}

void require_report(Outcome& out, const CheckReport& r) { out.require(r.passed, failing_metrics(r)); }

Outcome local_dimensions() {
  Outcome out;
  // k -> (grad, curl, div, L2) for tetrahedron and hexahedron
  const int tetra[3][4] = {{4, 6, 4, 1}, {15, 28, 18, 4}, {32, 65, 44, 10}};
  const int hexa[3][4] = {{8, 12, 6, 1}, {27, 46, 24, 4}, {54, 99, 56, 10}};
  for (const char* spec : {"tet:1", "cubic:1"}) {
    ddr_mesh* m = nullptr;
    if (ddr_mesh_builtin(spec, &m) != DDR_OK) {
      out.require(false, ddr_last_error());
      continue;
    }
    const bool tet = spec[0] == 't';
    for (int k = 0; k <= 2; ++k) {
      size_t d[4];
      ddr_cell_dims(m, k, 0, d);
      for (int i = 0; i < 4; ++i) {
        const int expected = tet ? tetra[k][i] : hexa[k][i];
        out.require(static_cast<int>(d[i]) == expected, std::string(spec) + " k=" + std::to_string(k) + " space " +
                                                            std::to_string(i) + ": " + std::to_string(d[i]) +
                                                            " != " + std::to_string(expected));
      }
    }
    ddr_mesh_destroy(m);
  }
  if (out.passed) out.detail = "tet:1 and cubic:1, k = 0, 1, 2";
  return out;
}

Outcome cubic16_dimensions() {
  Outcome out;
  const Mesh m = generate_cubic_mesh(16);
  out.require(m.n_cells() == 4096 && m.n_entities(2) == 13056 && m.n_entities(1) == 13872, "mesh counts");
  const std::size_t curl = DofSpace(m, SpaceKind::Curl, 1).dimension();
  const std::size_t div = DofSpace(m, SpaceKind::Div, 1).dimension();
  out.require(curl == 83296, "dim X_curl = " + std::to_string(curl));
  out.require(div == 63744, "dim X_div = " + std::to_string(div));
  out.detail = out.passed ? "edges 13872, faces 13056, X_curl 83296, X_div 63744" : out.detail;
  return out;
}

Outcome complex_property() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, Mesh>> meshes = {{"cubic:1", generate_cubic_mesh(1)},
                                                            {"cubic:2", generate_cubic_mesh(2)},
                                                            {"tet:1", generate_tet_mesh(1)},
                                                            {"agglo:2:0", agglomerate_pairs(generate_cubic_mesh(2), 0)}};
  double worst = 0.;
  for (const auto& [name, m] : meshes) {
    for (int k = 0; k <= 1; ++k) {
      const DdrComplex c = make_complex(m, k);
      const SparseMatrix uG = c.uG(), uC = c.uC(), D = c.D();
      const double scale = std::max({1., max_abs(uG), max_abs(uC), max_abs(D)});
      const double cg = max_abs(SparseMatrix(uC * uG)) / scale, dc = max_abs(SparseMatrix(D * uC)) / scale;
      worst = std::max({worst, cg, dc});
      out.require(cg < 1e-10 && dc < 1e-10, name + " k=" + std::to_string(k) + ": |uC uG| = " +
                                                std::to_string(cg) + ", |D uC| = " + std::to_string(dc));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.require(secs < 60., "took " + std::to_string(secs) + " s");
  if (out.passed) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "max relative residual %.2e in %.1f s", worst, secs);
    out.detail = buf;
  }
  return out;
}

Outcome exactness_ranks() {
  Outcome out;
  for (int n : {1, 2}) {
    const DdrComplex c = make_complex(generate_cubic_mesh(n), 0);
    const SparseMatrix uG = c.uG(), uC = c.uC(), D = c.D();
    const int ng = static_cast<int>(uG.cols()), nc = static_cast<int>(uC.cols()), nd = static_cast<int>(D.cols());
    const int nl = static_cast<int>(D.rows());
    const int rg = svd_rank(uG), rc = svd_rank(uC), rd = svd_rank(D);
    const std::string tag = "cubic:" + std::to_string(n) + " ";
    // contractible domain: constants are the kernel of uG and the sequence is exact
    out.require(ng - rg == 1, tag + "dim ker uG = " + std::to_string(ng - rg));
    out.require(nc - rc == rg, tag + "dim ker uC != rank uG");
    out.require(nd - rd == rc, tag + "dim ker D != rank uC");
    out.require(rd == nl, tag + "D not onto");
    out.detail += (out.detail.empty() ? "" : ", ") + tag + "ranks " + std::to_string(rg) + "/" + std::to_string(rc) +
                  "/" + std::to_string(rd);
  }
  return out;
}

Outcome polynomial_consistency() {
  Outcome out;
  const std::vector<Mesh> meshes = {generate_cubic_mesh(1), generate_tet_mesh(1),
                                    agglomerate_pairs(generate_cubic_mesh(2), 0)};
  for (const Mesh& m : meshes)
    for (int k = 0; k <= 2; ++k) require_report(out, check_polynomial_consistency(m, opts(k)));
  if (out.passed) out.detail = "cubic:1, tet:1, agglo:2:0 for k = 0, 1, 2 below 1e-9";
  return out;
}

Outcome commutation() {
  Outcome out;
  const Mesh m = generate_cubic_mesh(2);
  double worst = 0.;
  for (int k = 0; k <= 1; ++k) {
    const CheckReport r = check_commutation(m, opts(k));
    for (const Metric& x : r.metrics) {
      if (x.comparison.empty()) continue;
      worst = std::max(worst, x.value);
      out.require(x.value < 1e-8, "k=" + std::to_string(k) + " " + x.name + " = " + std::to_string(x.value));
    }
    require_report(out, r);
  }
  if (out.passed) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "max cell residual %.2e", worst);
    out.detail = buf;
  }
  return out;
}

Outcome convergence() {
  Outcome out;
  const std::vector<ConvergenceRow> rows = convergence_study("cubic", {0, 1}, {2, 4, 8}, 1);
  for (int k = 0; k <= 1; ++k) {
    std::vector<const ConvergenceRow*> rk;
    for (const auto& r : rows)
      if (r.degree == k) rk.push_back(&r);
    if (rk.size() != 3) {
      out.require(false, "missing rows");
      continue;
    }
    const double slope = std::log(rk[1]->error / rk[2]->error) / std::log(rk[1]->h / rk[2]->h);
    out.require(slope >= k + 0.7, "k=" + std::to_string(k) + " slope " + std::to_string(slope));
    for (const auto* r : rk) out.require(r->residual < 1e-10, "solver residual");
    char buf[96];
    std::snprintf(buf, sizeof buf, "k=%d slope %.3f (errors %.3e, %.3e, %.3e)", k, slope, rk[0]->error,
                  rk[1]->error, rk[2]->error);
    out.detail += (out.detail.empty() ? "" : "; ") + std::string(buf);
  }
  return out;
}

Outcome primal_consistency() {
  Outcome out;
  const CheckReport r = check_primal_consistency("cubic", {2, 4, 8}, opts(0), 0.3);
  require_report(out, r);
  if (out.passed) out.detail = std::to_string(r.metrics.size()) + " metrics within 0.3 of the expected slopes";
  return out;
}

Outcome adjoint_decay() {
  Outcome out;
  const CheckReport r = check_adjoint_decay("cubic", {2, 4, 8}, opts(0), 0.3);
  require_report(out, r);
  for (const Metric& m : r.metrics)
    if (m.name.rfind("slope ", 0) == 0) out.require(m.value >= 0.7, m.name + " = " + std::to_string(m.value));
  if (out.passed) {
    std::ostringstream s;
    for (const Metric& m : r.metrics)
      if (m.name.rfind("slope ", 0) == 0) s << (s.tellp() ? ", " : "") << m.name << " " << m.value;
    out.detail = s.str();
  }
  return out;
}

Outcome poincare() {
  Outcome out;
  const std::vector<Mesh> meshes = {generate_cubic_mesh(1), generate_cubic_mesh(2)};
  for (int k = 0; k <= 1; ++k) {
    const PoincareConstants a = poincare_constants(meshes[0], opts(k)), b = poincare_constants(meshes[1], opts(k));
    const std::array<double, 3> ca = {a.grad, a.curl, a.div}, cb = {b.grad, b.curl, b.div};
    for (int i = 0; i < 3; ++i) {
      out.require(std::isfinite(ca[i]) && std::isfinite(cb[i]) && ca[i] > 0., "non-finite constant");
      out.require(cb[i] / ca[i] <= 1.5, "k=" + std::to_string(k) + " ratio " + std::to_string(cb[i] / ca[i]));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "k=%d C(cubic:2) = %.3f/%.3f/%.3f", k, cb[0], cb[1], cb[2]);
    out.detail += (out.detail.empty() ? "" : "; ") + std::string(buf);
  }
  return out;
}

Outcome traces_recovery() {
  Outcome out;
  const Mesh m = agglomerate_pairs(generate_cubic_mesh(2), 0);
  require_report(out, check_traces(m, 3));
  require_report(out, check_recovery(m, 3));
  if (out.passed) out.detail = "agglo:2:0, degrees 1..3";
  return out;
}

std::string run_capture(const std::string& cmd, int& status) {
  std::string text;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return text;
  }
  std::array<char, 4096> buf;
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;) text.append(buf.data(), n);
  status = pclose(p);
  return text;
}

Outcome determinism(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.require(false, "no CLI path given");
    return out;
  }
  const std::vector<std::string> commands = {
      "converge --degrees 0,1 --levels 2,4", "verify --mesh agglo:2:0 --degree 1 --suite complex,links,commutation",
      "solve --mesh agglo:3:1 --degree 1"};
  for (const std::string& c : commands) {
    int s1 = 0, s2 = 0;
    const std::string a = run_capture("\"" + cli + "\" " + c + " --threads 1 2>/dev/null", s1);
    const std::string b = run_capture("\"" + cli + "\" " + c + " --threads 2 2>/dev/null", s2);
    out.require(s1 == 0 && s2 == 0, "'" + c + "' exited with an error");
    out.require(!a.empty() && a == b, "'" + c + "' output differs");
  }
  if (out.passed) out.detail = "converge, verify and solve byte-identical for --threads 1 and 2";
  return out;
}

} // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"local DOF counts on tetrahedra and hexahedra", local_dimensions},
      {"cubic 16 mesh and space dimensions", cubic16_dimensions},
      {"complex property", complex_property},
      {"exactness ranks by dense SVD", exactness_ranks},
      {"polynomial consistency", polynomial_consistency},
      {"commutation", commutation},
      {"convergence rates", convergence},
      {"primal consistency rates", primal_consistency},
      {"adjoint consistency decay", adjoint_decay},
      {"Poincare constants", poincare},
      {"traces and recovery on agglomerated cells", traces_recovery},
      {"determinism across thread counts", [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << o.detail << ")" << std::endl;
  }
  return failed ? 1 : 0;
}
