#include "ddr/ddr.h"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

namespace {

std::string data_path(const char* name) {
  const char* dir = std::getenv("DDR_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

} // namespace

TEST_CASE("meshes") {
  CHECK(std::strlen(ddr_version()) > 0);
  ddr_mesh* m = nullptr;
  REQUIRE(ddr_mesh_builtin("builtin:cubic:2", &m) == DDR_OK);
  size_t counts[4];
  REQUIRE(ddr_mesh_counts(m, counts) == DDR_OK);
  CHECK(counts[0] == 27);
  CHECK(counts[1] == 54);
  CHECK(counts[2] == 36);
  CHECK(counts[3] == 8);
  double h = 0.;
  CHECK(ddr_mesh_size(m, &h) == DDR_OK);
  CHECK(h == doctest::Approx(std::sqrt(3.) / 2.));
  ddr_mesh_destroy(m);

  ddr_mesh* bad = nullptr;
  CHECK(ddr_mesh_builtin("sphere:2", &bad) == DDR_ERR_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::string(ddr_last_error()).find("sphere") != std::string::npos);
  CHECK(ddr_mesh_load("/nonexistent/mesh.json", &bad) == DDR_ERR_MESH);
  CHECK(ddr_mesh_load(data_path("corrupted.json").c_str(), &bad) == DDR_ERR_MESH);
  CHECK(std::string(ddr_last_error()).find("cell 1") != std::string::npos);
  CHECK(ddr_mesh_from_json("{", &bad) == DDR_ERR_MESH);
  CHECK(ddr_mesh_builtin(nullptr, &bad) == DDR_ERR_ARGUMENT);

  REQUIRE(ddr_mesh_load(data_path("unit_cube.json").c_str(), &m) == DDR_OK);
  CHECK(ddr_mesh_counts(m, counts) == DDR_OK);
  CHECK(counts[1] == 12);
  ddr_mesh_destroy(m);
  ddr_mesh_destroy(nullptr);
}

TEST_CASE("space dimensions") {
  ddr_mesh* m = nullptr;
  REQUIRE(ddr_mesh_builtin("cubic:16", &m) == DDR_OK);
  size_t dims[4];
  REQUIRE(ddr_space_dims(m, 1, dims) == DDR_OK);
  CHECK(dims[1] == 83296);
  CHECK(dims[2] == 63744);
  CHECK(dims[3] == 4096 * 4);
  REQUIRE(ddr_space_dims(m, 0, dims) == DDR_OK);
  CHECK(dims[1] == 13872);
  CHECK(dims[2] == 13056);
  CHECK(ddr_space_dims(m, -1, dims) == DDR_ERR_ARGUMENT);
  CHECK(ddr_cell_dims(m, 2, 0, dims) == DDR_OK);
  CHECK(dims[0] == 54);
  CHECK(dims[1] == 99);
  CHECK(dims[2] == 56);
  CHECK(dims[3] == 10);
  CHECK(ddr_cell_dims(m, 0, 5000, dims) == DDR_ERR_ARGUMENT);
  ddr_mesh_destroy(m);
}

TEST_CASE("verify") {
  ddr_mesh* m = nullptr;
  REQUIRE(ddr_mesh_builtin("cubic:2", &m) == DDR_OK);
  ddr_verify_config cfg;
  ddr_verify_config_init(&cfg);
  CHECK(cfg.degree == 0);
  CHECK(cfg.threads == 1);
  cfg.suites = "complex,links";
  ddr_report* r = nullptr;
  REQUIRE(ddr_verify(m, &cfg, &r) == DDR_OK);
  CHECK(ddr_report_passed(r) == 1);
  REQUIRE(ddr_report_count(r) == 2);
  CHECK(std::string(ddr_report_name(r, 0)) == "complex");
  CHECK(ddr_report_check_passed(r, 1) == 1);
  double v = -1.;
  CHECK(ddr_report_metric(r, 0, "rank(D)", &v) == DDR_OK);
  CHECK(v == 8.);
  CHECK(ddr_report_metric(r, 0, "no such metric", &v) == DDR_ERR_ARGUMENT);
  CHECK(std::string(ddr_report_text(r)).find("PASS complex") != std::string::npos);
  CHECK(std::string(ddr_report_json(r)).find("\"status\": \"pass\"") != std::string::npos);
  ddr_report_destroy(r);

  cfg.suites = "complex,bogus";
  CHECK(ddr_verify(m, &cfg, &r) == DDR_ERR_ARGUMENT);
  cfg.suites = "complex";
  cfg.degree = -1;
  CHECK(ddr_verify(m, &cfg, &r) == DDR_ERR_ARGUMENT);
  cfg.degree = 0;
  CHECK(ddr_verify(nullptr, &cfg, &r) == DDR_ERR_ARGUMENT);
  const int levels[] = {2, 1};
  cfg.suites = "consistency";
  cfg.levels = levels;
  cfg.n_levels = 2;
  CHECK(ddr_verify(nullptr, &cfg, &r) == DDR_ERR_ARGUMENT);
  ddr_mesh_destroy(m);
}

TEST_CASE("solve") {
  ddr_mesh* m = nullptr;
  REQUIRE(ddr_mesh_builtin("cubic:2", &m) == DDR_OK);
  ddr_solution* s = nullptr;
  REQUIRE(ddr_solve(m, 0, 1, nullptr, 0, &s) == DDR_OK);
  size_t dims[2];
  ddr_solution_dims(s, dims);
  CHECK(dims[0] == 54);
  CHECK(dims[1] == 36);
  CHECK(ddr_solution_residual(s) < 1e-10);
  double e[3];
  ddr_solution_errors(s, e);
  CHECK(e[2] > 0.);
  CHECK(e[2] < 1.);
  double t[3];
  ddr_solution_timings(s, t);
  CHECK(t[0] >= 0.);
  std::vector<double> H(ddr_solution_H(s, nullptr, 0));
  CHECK(H.size() == 54);
  CHECK(ddr_solution_H(s, H.data(), H.size()) == 54);
  CHECK(ddr_solution_A(s, nullptr, 0) == 36);

  // same problem with a per-cell permeability: errors are not defined
  ddr_solution* s2 = nullptr;
  const std::vector<double> mu(8, 1.);
  REQUIRE(ddr_solve(m, 0, 2, mu.data(), mu.size(), &s2) == DDR_OK);
  std::vector<double> H2(54);
  ddr_solution_H(s2, H2.data(), H2.size());
  CHECK(H2 == H);
  ddr_solution_errors(s2, e);
  CHECK(std::isnan(e[2]));
  ddr_solution_destroy(s2);
  CHECK(ddr_solve(m, 0, 1, mu.data(), 3, &s2) == DDR_ERR_ARGUMENT);
  const std::vector<double> neg(8, -1.);
  CHECK(ddr_solve(m, 0, 1, neg.data(), neg.size(), &s2) == DDR_ERR_ARGUMENT);
  ddr_solution_destroy(s);
  ddr_mesh_destroy(m);
}

TEST_CASE("converge") {
  const int degrees[] = {0, 1};
  const int levels[] = {1, 2};
  char* csv = nullptr;
  REQUIRE(ddr_converge("cubic", degrees, 2, levels, 2, 1, 0, &csv) == DDR_OK);
  const std::string text = csv;
  ddr_string_free(csv);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 5);
  char* csv2 = nullptr;
  REQUIRE(ddr_converge("cubic", degrees, 2, levels, 2, 2, 0, &csv2) == DDR_OK);
  CHECK(text == csv2);
  ddr_string_free(csv2);
  CHECK(ddr_converge("prism", degrees, 1, levels, 1, 1, 0, &csv) == DDR_ERR_ARGUMENT);
}
