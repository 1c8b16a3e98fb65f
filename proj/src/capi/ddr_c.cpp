#include "ddr/ddr.h"

#include "ddr/magnetostatics.hpp"
#include "ddr/verification.hpp"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <sstream>

struct ddr_mesh {
  ddr::Mesh mesh;
};

struct ddr_report {
  std::vector<ddr::CheckReport> checks;
  std::string text, json;
};

struct ddr_solution {
  std::size_t dims[2] = {0, 0};
  double residual = 0.;
  double errors[3] = {0., 0., 0.};
  double seconds[3] = {0., 0., 0.};
  Eigen::VectorXd H, A;
};

namespace {

thread_local std::string g_last_error;

template <class F>
ddr_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return DDR_OK;
  } catch (const ddr::ArgumentError& e) {
    g_last_error = e.what();
    return DDR_ERR_ARGUMENT;
  } catch (const ddr::MeshError& e) {
    g_last_error = e.what();
    return DDR_ERR_MESH;
  } catch (const ddr::NumericalError& e) {
    g_last_error = e.what();
    return DDR_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DDR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DDR_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ddr::ArgumentError(what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* const k_suites[] = {"complex",  "links",    "commutation", "polynomial", "traces",
                                "recovery", "poincare", "consistency", "adjoint"};

} // namespace

extern "C" {

const char* ddr_version(void) { return "1.0.0"; }

const char* ddr_last_error(void) { return g_last_error.c_str(); }

void ddr_string_free(char* s) { std::free(s); }

ddr_status ddr_mesh_builtin(const char* spec, ddr_mesh** out) {
  return guard([&] {
    require(spec && out, "null argument");
    *out = new ddr_mesh{ddr::builtin_mesh(spec)};
  });
}

ddr_status ddr_mesh_load(const char* path, ddr_mesh** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new ddr_mesh{ddr::load_mesh(path)};
  });
}

ddr_status ddr_mesh_from_json(const char* text, ddr_mesh** out) {
  return guard([&] {
    require(text && out, "null argument");
    *out = new ddr_mesh{ddr::mesh_from_json_text(text)};
  });
}

void ddr_mesh_destroy(ddr_mesh* mesh) { delete mesh; }

ddr_status ddr_mesh_counts(const ddr_mesh* mesh, size_t counts[4]) {
  return guard([&] {
    require(mesh && counts, "null argument");
    for (int d = 0; d < 4; ++d) counts[d] = mesh->mesh.n_entities(d);
  });
}

ddr_status ddr_mesh_size(const ddr_mesh* mesh, double* h) {
  return guard([&] {
    require(mesh && h, "null argument");
    *h = mesh->mesh.h_max();
  });
}

ddr_status ddr_space_dims(const ddr_mesh* mesh, int degree, size_t dims[4]) {
  return guard([&] {
    require(mesh && dims, "null argument");
    require(degree >= 0, "degree must be >= 0");
    const ddr::SpaceKind kinds[4] = {ddr::SpaceKind::Grad, ddr::SpaceKind::Curl, ddr::SpaceKind::Div,
                                     ddr::SpaceKind::L2};
    for (int i = 0; i < 4; ++i) dims[i] = ddr::DofSpace(mesh->mesh, kinds[i], degree).dimension();
  });
}

ddr_status ddr_cell_dims(const ddr_mesh* mesh, int degree, int cell, size_t dims[4]) {
  return guard([&] {
    require(mesh && dims, "null argument");
    require(degree >= 0, "degree must be >= 0");
    require(cell >= 0 && static_cast<std::size_t>(cell) < mesh->mesh.n_cells(), "cell index out of range");
    const ddr::SpaceKind kinds[4] = {ddr::SpaceKind::Grad, ddr::SpaceKind::Curl, ddr::SpaceKind::Div,
                                     ddr::SpaceKind::L2};
    for (int i = 0; i < 4; ++i)
      dims[i] = static_cast<size_t>(ddr::DofSpace(mesh->mesh, kinds[i], degree).cell_local_dim(mesh->mesh, cell));
  });
}

void ddr_verify_config_init(ddr_verify_config* c) {
  if (!c) return;
  c->degree = 0;
  c->threads = 1;
  c->seed = 0;
  c->suites = "complex";
  c->family = nullptr;
  c->levels = nullptr;
  c->n_levels = 0;
}

ddr_status ddr_verify(const ddr_mesh* mesh, const ddr_verify_config* config, ddr_report** out) {
  return guard([&] {
    require(config && out, "null argument");
    require(config->degree >= 0, "degree must be >= 0");
    require(config->threads >= 1, "threads must be >= 1");
    std::vector<std::string> suites = split(config->suites ? config->suites : "", ',');
    require(!suites.empty(), "no suite selected");
    if (suites.size() == 1 && suites[0] == "all") suites.assign(std::begin(k_suites), std::end(k_suites));
    for (const auto& s : suites) {
      bool known = false;
      for (const char* k : k_suites) known = known || s == k;
      if (!known) throw ddr::ArgumentError("unknown suite '" + s + "'");
    }
    const std::string family = config->family ? config->family : "cubic";
    std::vector<int> levels(config->levels, config->levels + config->n_levels);
    for (std::size_t i = 1; i < levels.size(); ++i)
      require(levels[i] > levels[i - 1], "levels must be strictly increasing");
    for (int l : levels) require(l >= 1, "levels must be >= 1");
    const std::vector<int> rate_levels = levels.empty() ? std::vector<int>{2, 4, 8} : levels;

    ddr::VerifyOptions o;
    o.degree = config->degree;
    o.threads = config->threads;
    o.seed = config->seed;
    auto rep = std::make_unique<ddr_report>();
    for (const auto& s : suites) {
      const bool needs_mesh = s != "consistency" && s != "adjoint" && !(s == "poincare" && !levels.empty());
      if (needs_mesh) require(mesh != nullptr, ("suite '" + s + "' needs a mesh").c_str());
      // Numerical breakdowns inside a check are failures of that check
      try {
        if (s == "complex") rep->checks.push_back(ddr::check_complex(mesh->mesh, o));
        else if (s == "links") rep->checks.push_back(ddr::check_links(mesh->mesh, o));
        else if (s == "commutation") rep->checks.push_back(ddr::check_commutation(mesh->mesh, o));
        else if (s == "polynomial") rep->checks.push_back(ddr::check_polynomial_consistency(mesh->mesh, o));
        else if (s == "traces") rep->checks.push_back(ddr::check_traces(mesh->mesh, 3, o.threads));
        else if (s == "recovery") rep->checks.push_back(ddr::check_recovery(mesh->mesh, 3, o.seed, o.threads));
        else if (s == "consistency") rep->checks.push_back(ddr::check_primal_consistency(family, rate_levels, o));
        else if (s == "adjoint") rep->checks.push_back(ddr::check_adjoint_decay(family, rate_levels, o));
        else if (s == "poincare") {
          std::vector<std::string> labels;
          std::vector<ddr::Mesh> meshes;
          if (levels.empty()) {
            labels.push_back("mesh");
            meshes.push_back(mesh->mesh);
          } else {
            for (int l : levels) {
              labels.push_back(family + ":" + std::to_string(l));
              meshes.push_back(ddr::family_mesh(family, l, o.seed));
            }
          }
          rep->checks.push_back(ddr::check_poincare(labels, meshes, o));
        }
      } catch (const ddr::NumericalError& e) {
        ddr::CheckReport r;
        r.name = s;
        r.fail(e.what());
        rep->checks.push_back(r);
      }
    }
    rep->text = ddr::reports_text(rep->checks);
    rep->json = ddr::reports_json(rep->checks);
    *out = rep.release();
  });
}

void ddr_report_destroy(ddr_report* report) { delete report; }

int ddr_report_passed(const ddr_report* report) {
  if (!report) return 0;
  for (const auto& c : report->checks)
    if (!c.passed) return 0;
  return 1;
}

size_t ddr_report_count(const ddr_report* report) { return report ? report->checks.size() : 0; }

const char* ddr_report_name(const ddr_report* report, size_t i) {
  if (!report || i >= report->checks.size()) return nullptr;
  return report->checks[i].name.c_str();
}

int ddr_report_check_passed(const ddr_report* report, size_t i) {
  if (!report || i >= report->checks.size()) return 0;
  return report->checks[i].passed ? 1 : 0;
}

ddr_status ddr_report_metric(const ddr_report* report, size_t i, const char* name, double* value) {
  return guard([&] {
    require(report && name && value, "null argument");
    require(i < report->checks.size(), "check index out of range");
    const ddr::Metric* m = report->checks[i].find(name);
    if (!m) throw ddr::ArgumentError(std::string("no metric '") + name + "'");
    *value = m->value;
  });
}

const char* ddr_report_text(const ddr_report* report) { return report ? report->text.c_str() : ""; }

const char* ddr_report_json(const ddr_report* report) { return report ? report->json.c_str() : ""; }

ddr_status ddr_solve(const ddr_mesh* mesh, int degree, int threads, const double* mu, size_t n_mu,
                     ddr_solution** out) {
  return guard([&] {
    require(mesh && out, "null argument");
    require(degree >= 0, "degree must be >= 0");
    require(threads >= 1, "threads must be >= 1");
    ddr::MagnetostaticsProblem p = ddr::manufactured_problem();
    if (mu) {
      require(n_mu == mesh->mesh.n_cells(), "one permeability per cell is required");
      p.mu.assign(mu, mu + n_mu);
      for (double m : p.mu) require(m > 0., "permeability must be positive");
    }
    auto sol = std::make_unique<ddr_solution>();
    ddr::DdrOptions opt;
    opt.degree = degree;
    opt.threads = threads;
    auto t0 = std::chrono::steady_clock::now();
    const ddr::DdrComplex c(mesh->mesh, opt, ddr::SpaceMask{false, true, true});
    sol->seconds[0] = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const ddr::MagnetostaticsSystem s = ddr::assemble_magnetostatics(c, p);
    sol->seconds[1] = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const ddr::MagnetostaticsSolution x = ddr::solve_magnetostatics(s);
    sol->seconds[2] = seconds_since(t0);
    sol->dims[0] = s.n_curl;
    sol->dims[1] = s.n_div;
    sol->residual = x.residual;
    // The exact solution only holds for mu = 1
    if (p.mu.empty()) {
      const ddr::ErrorNorms e = ddr::error_norms(c, s, p, x.H, x.A);
      sol->errors[0] = e.e_curl;
      sol->errors[1] = e.e_div;
      sol->errors[2] = e.e_rel;
    } else {
      for (double& e : sol->errors) e = std::numeric_limits<double>::quiet_NaN();
    }
    sol->H = x.H;
    sol->A = x.A;
    *out = sol.release();
  });
}

void ddr_solution_destroy(ddr_solution* solution) { delete solution; }

void ddr_solution_dims(const ddr_solution* s, size_t dims[2]) {
  if (!s || !dims) return;
  dims[0] = s->dims[0];
  dims[1] = s->dims[1];
}

double ddr_solution_residual(const ddr_solution* s) { return s ? s->residual : 0.; }

void ddr_solution_errors(const ddr_solution* s, double errors[3]) {
  if (!s || !errors) return;
  for (int i = 0; i < 3; ++i) errors[i] = s->errors[i];
}

void ddr_solution_timings(const ddr_solution* s, double seconds[3]) {
  if (!s || !seconds) return;
  for (int i = 0; i < 3; ++i) seconds[i] = s->seconds[i];
}

size_t ddr_solution_H(const ddr_solution* s, double* buffer, size_t n) {
  if (!s) return 0;
  const size_t len = static_cast<size_t>(s->H.size());
  if (buffer) std::memcpy(buffer, s->H.data(), sizeof(double) * std::min(n, len));
  return len;
}

size_t ddr_solution_A(const ddr_solution* s, double* buffer, size_t n) {
  if (!s) return 0;
  const size_t len = static_cast<size_t>(s->A.size());
  if (buffer) std::memcpy(buffer, s->A.data(), sizeof(double) * std::min(n, len));
  return len;
}

ddr_status ddr_converge(const char* family, const int* degrees, size_t n_degrees, const int* levels,
                        size_t n_levels, int threads, uint64_t seed, char** csv) {
  return guard([&] {
    require(family && degrees && levels && csv, "null argument");
    require(n_degrees > 0 && n_levels > 0, "at least one degree and one level are required");
    require(threads >= 1, "threads must be >= 1");
    std::vector<int> ds(degrees, degrees + n_degrees), ls(levels, levels + n_levels);
    for (int d : ds) require(d >= 0, "degrees must be >= 0");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      require(ls[i] >= 1, "levels must be >= 1");
      if (i) require(ls[i] > ls[i - 1], "levels must be strictly increasing");
    }
    const std::string text = ddr::convergence_csv(ddr::convergence_study(family, ds, ls, threads, seed));
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *csv = buf;
  });
}

} // extern "C"
