// ddr: verification suites, convergence studies and single solves.
//
// Exit codes: 0 success, 1 failed check / mesh or solver error, 2 invalid
// configuration. Wall timings go to stderr so that stdout and --out files are
// identical across --threads.

#include "ddr/ddr.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kFail = 1;
constexpr int kConfig = 2;

struct Options {
  std::string mesh;
  int degree = 0;
  std::string degrees = "0";
  std::string levels;
  std::string family = "cubic";
  std::string suite = "complex";
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != item.size() || item.empty()) throw ConfigError(std::string("invalid ") + what + " list '" + s + "'");
    out.push_back(v);
  }
  return out;
}

bool is_builtin(const std::string& spec) {
  for (const char* p : {"builtin:", "cubic:", "tet:", "agglo:"})
    if (spec.rfind(p, 0) == 0) return true;
  return false;
}

int status_exit(ddr_status s) {
  std::cerr << "error: " << ddr_last_error() << "\n";
  return s == DDR_ERR_ARGUMENT ? kConfig : kFail;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

int open_mesh(const Options& o, ddr_mesh** mesh) {
  if (o.mesh.empty()) {
    std::cerr << "error: --mesh is required\n";
    return kConfig;
  }
  const ddr_status s = is_builtin(o.mesh) ? ddr_mesh_builtin(o.mesh.c_str(), mesh) : ddr_mesh_load(o.mesh.c_str(), mesh);
  return s == DDR_OK ? 0 : status_exit(s);
}

int cmd_verify(const Options& o) {
  const std::vector<int> levels = o.levels.empty() ? std::vector<int>{} : parse_list(o.levels, "level");
  // Only the refinement suites run without a mesh
  bool needs_mesh = false;
  for (const auto& s : {std::string("complex"), std::string("links"), std::string("commutation"), std::string("polynomial"),
                        std::string("traces"), std::string("recovery"), std::string("poincare"), std::string("all")}) {
    std::stringstream ss(o.suite);
    std::string item;
    while (std::getline(ss, item, ','))
      if (item == s && !(s == "poincare" && !levels.empty())) needs_mesh = true;
  }
  ddr_mesh* mesh = nullptr;
  if (needs_mesh)
    if (int rc = open_mesh(o, &mesh)) return rc;
  ddr_verify_config cfg;
  ddr_verify_config_init(&cfg);
  cfg.degree = o.degree;
  cfg.threads = o.threads;
  cfg.seed = o.seed;
  cfg.suites = o.suite.c_str();
  cfg.family = o.family.c_str();
  cfg.levels = levels.data();
  cfg.n_levels = levels.size();
  ddr_report* rep = nullptr;
  const ddr_status s = ddr_verify(mesh, &cfg, &rep);
  ddr_mesh_destroy(mesh);
  if (s != DDR_OK) return status_exit(s);
  std::cout << ddr_report_text(rep);
  const bool passed = ddr_report_passed(rep) == 1;
  std::cout << (passed ? "all checks passed\n" : "some checks FAILED\n");
  bool ok = true;
  if (!o.out.empty()) ok = write_file(o.out, ddr_report_json(rep));
  ddr_report_destroy(rep);
  return passed && ok ? 0 : kFail;
}

int cmd_converge(const Options& o) {
  const std::vector<int> degrees = parse_list(o.degrees, "degree");
  const std::vector<int> levels = parse_list(o.levels.empty() ? "2,4,8" : o.levels, "level");
  char* csv = nullptr;
  const ddr_status s = ddr_converge(o.family.c_str(), degrees.data(), degrees.size(), levels.data(), levels.size(),
                                    o.threads, o.seed, &csv);
  if (s != DDR_OK) return status_exit(s);
  const std::string table = csv;
  ddr_string_free(csv);
  std::cout << table;
  // Final-pair rates per degree (rate column of the last row of each degree)
  std::stringstream ss(table);
  std::string line;
  std::getline(ss, line);
  std::vector<std::string> last(degrees.size());
  std::size_t row = 0;
  while (std::getline(ss, line)) {
    last[row / levels.size()] = line;
    ++row;
  }
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    std::vector<std::string> cols;
    std::stringstream ls(last[i]);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (cols.size() >= 8 && !cols[7].empty())
      std::cout << "rate " << o.family << " k=" << degrees[i] << " levels " << levels[levels.size() - 2] << "->"
                << levels.back() << ": " << cols[7] << (o.family == "cubic" ? " (log2 ratio)" : "") << "\n";
  }
  if (!o.out.empty() && !write_file(o.out, table)) return kFail;
  return 0;
}

int cmd_solve(const Options& o) {
  ddr_mesh* mesh = nullptr;
  if (int rc = open_mesh(o, &mesh)) return rc;
  size_t counts[4];
  ddr_mesh_counts(mesh, counts);
  double h = 0.;
  ddr_mesh_size(mesh, &h);
  ddr_solution* sol = nullptr;
  const ddr_status s = ddr_solve(mesh, o.degree, o.threads, nullptr, 0, &sol);
  ddr_mesh_destroy(mesh);
  if (s != DDR_OK) return status_exit(s);
  size_t dims[2];
  ddr_solution_dims(sol, dims);
  double err[3], secs[3];
  ddr_solution_errors(sol, err);
  ddr_solution_timings(sol, secs);
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "mesh %s\ndegree %d\nvertices %zu\nedges %zu\nfaces %zu\ncells %zu\nmesh_size_h %.10e\n"
                "dim_xcurl %zu\ndim_xdiv %zu\nsystem_dim %zu\nresidual %.3e\n"
                "err_hcurl %.10e\nerr_hdiv %.10e\nerr_hcurl_hdiv_rel %.10e\n",
                o.mesh.c_str(), o.degree, counts[0], counts[1], counts[2], counts[3], h, dims[0], dims[1],
                dims[0] + dims[1], ddr_solution_residual(sol), err[0], err[1], err[2]);
  const std::string report = buf;
  std::cout << report;
  std::fprintf(stderr, "time bases %.3f s\ntime model %.3f s\ntime solve %.3f s\n", secs[0], secs[1], secs[2]);
  const bool residual_ok = ddr_solution_residual(sol) < 1e-10;
  ddr_solution_destroy(sol);
  if (!o.out.empty() && !write_file(o.out, report)) return kFail;
  if (!residual_ok) {
    std::cerr << "error: residual above 1e-10\n";
    return kFail;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete de Rham complex on polyhedral meshes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ddr_version()));
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Seed of random fields and agglomeration");
    c->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    c->add_option("--out", o.out, "Output file");
  };
  CLI::App* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--mesh", o.mesh, "Mesh file or builtin spec (cubic:N, tet:N, agglo:N:seed)");
  verify->add_option("--degree", o.degree, "Polynomial degree k")->check(CLI::NonNegativeNumber);
  verify->add_option("--suite", o.suite,
                     "Comma-separated suites: complex, links, commutation, polynomial, traces, recovery, poincare, "
                     "consistency, adjoint, or all");
  verify->add_option("--family", o.family, "Mesh family of refinement suites (cubic, tet, agglo)");
  verify->add_option("--levels", o.levels, "Comma-separated refinement levels");
  common(verify);

  CLI::App* converge = app.add_subcommand("converge", "Convergence study on the manufactured solution");
  converge->add_option("--family", o.family, "Mesh family (cubic, tet, agglo)");
  converge->add_option("--degrees,--degree", o.degrees, "Comma-separated degrees");
  converge->add_option("--levels", o.levels, "Comma-separated refinement levels (default 2,4,8)");
  common(converge);

  CLI::App* solve = app.add_subcommand("solve", "Single magnetostatics solve");
  solve->add_option("--mesh", o.mesh, "Mesh file or builtin spec")->required();
  solve->add_option("--degree", o.degree, "Polynomial degree k")->check(CLI::NonNegativeNumber);
  common(solve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (verify->parsed()) return cmd_verify(o);
    if (converge->parsed()) {
      for (int d : parse_list(o.degrees, "degree"))
        if (d < 0) throw ConfigError("degrees must be >= 0");
      return cmd_converge(o);
    }
    if (solve->parsed()) return cmd_solve(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kConfig;
  }
  return kConfig;
}
