#include "ddr/magnetostatics.hpp"
#include "ddr/verification.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace ddr;

namespace {

VerifyOptions opts(int k, int threads = 1, std::uint64_t seed = 0) {
  VerifyOptions o;
  o.degree = k;
  o.threads = threads;
  o.seed = seed;
  return o;
}

double metric(const CheckReport& r, const std::string& name) {
  const Metric* m = r.find(name);
  REQUIRE(m != nullptr);
  return m->value;
}

} // namespace

TEST_CASE("complex check") {
  const CheckReport r1 = check_complex(generate_cubic_mesh(1), opts(0));
  CHECK(r1.passed);
  CHECK(metric(r1, "nullity(uG)") == 1.);
  CHECK(metric(r1, "rank(D)") == 1.);

  const CheckReport r2 = check_complex(generate_cubic_mesh(2), opts(0));
  CHECK(r2.passed);
  CHECK(metric(r2, "rank(D)") == 8.);
  CHECK(metric(r2, "rank(uG)") == 26.);

  CHECK(check_complex(generate_tet_mesh(1), opts(1)).passed);
  CHECK(check_complex(agglomerate_pairs(generate_cubic_mesh(2), 0), opts(1)).passed);

  // above the dense limit the rank identities are skipped, not failed
  const CheckReport big = check_complex(generate_cubic_mesh(2), opts(1), 10);
  CHECK(big.passed);
  CHECK(big.find("nullity(uG)") == nullptr);
}

TEST_CASE("negative control: flipped face-edge orientation") {
  const Mesh bad = generate_cubic_mesh(1).with_flipped_face_edge_orientation(0, 0);
  const CheckReport c = check_complex(bad, opts(0));
  CHECK_FALSE(c.passed);
  CHECK(metric(c, "max|uC*uG|") > 1e-3);
  const CheckReport l = check_links(bad, opts(0, 1, 7));
  CHECK_FALSE(l.passed);
  CHECK(l.find("int G_T q . curl z + sum w_TF int G_F q . (z x n_F)")->passed == false);
}

TEST_CASE("link identities") {
  CHECK(check_links(generate_cubic_mesh(1), opts(0, 1, 7)).passed);
  CHECK(check_links(generate_tet_mesh(1), opts(1)).passed);
  CHECK(check_links(agglomerate_pairs(generate_cubic_mesh(2), 0), opts(1, 2)).passed);
}

TEST_CASE("commutation") {
  const Mesh m = generate_cubic_mesh(2);
  CHECK(check_commutation(m, opts(0)).passed);
  // negative control: interpolation quadrature too coarse
  const CheckReport bad = check_commutation(m, opts(0), 0);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("polynomial consistency, traces and recovery") {
  CHECK(check_polynomial_consistency(generate_tet_mesh(1), opts(1)).passed);
  // the grad stabilization of a tetrahedron is zero at k = 0
  CHECK(check_polynomial_consistency(generate_tet_mesh(1), opts(0)).passed);
  CHECK(check_polynomial_consistency(agglomerate_pairs(generate_cubic_mesh(2), 1), opts(2)).passed);
  const Mesh one = generate_cubic_mesh(1);
  CHECK(check_traces(one, 2).passed);
  const CheckReport rec = check_recovery(one, 2);
  CHECK(rec.passed);
  CHECK(metric(rec, "||pi_S pi_Sc||") < 1.);
}

TEST_CASE("rate checks on the cubic family") {
  const CheckReport p = check_primal_consistency("cubic", {2, 4, 8}, opts(0));
  CHECK(p.passed);
  CHECK_FALSE(check_primal_consistency("cubic", {2}, opts(0)).passed);
  const CheckReport a = check_adjoint_decay("cubic", {2, 4, 8}, opts(0));
  CHECK(a.passed);
}

TEST_CASE("poincare constants") {
  const PoincareConstants t = poincare_constants(generate_tet_mesh(1), opts(0));
  CHECK(std::isfinite(t.grad));
  CHECK(std::isfinite(t.curl));
  CHECK(std::isfinite(t.div));
  CHECK(t.grad > 0.);
  const CheckReport r =
      check_poincare({"cubic:1", "cubic:2"}, {generate_cubic_mesh(1), generate_cubic_mesh(2)}, opts(0));
  CHECK(r.passed);
  CHECK(metric(r, "ratio C_div cubic:2/cubic:1") <= 1.5);
  CHECK_THROWS_AS(poincare_constants(generate_cubic_mesh(2), opts(1), 100), ArgumentError);
}

TEST_CASE("numerical helpers") {
  CHECK(fitted_slope({1., 0.5, 0.25}, {3., 0.75, 0.1875}) == doctest::Approx(2.));
  CHECK(fitted_slope({0.5, 0.25}, {1., 0.5}) == doctest::Approx(1.));
  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  const RankInfo ri = numerical_rank(m);
  CHECK(ri.rank == 2);
  CHECK(ri.singular_values.size() == 3);
}

TEST_CASE("reports") {
  CheckReport r;
  r.name = "demo";
  r.subject = "k=0";
  r.measure("small", 1e-12, "<", 1e-10);
  r.info("count", 3.);
  CHECK(r.passed);
  r.measure("large", 2., "<", 1.);
  CHECK_FALSE(r.passed);
  r.note("context");

  const std::string text = report_text(r);
  CHECK(text.rfind("FAIL demo [k=0]", 0) == 0);
  CHECK(text.find("large = 2") != std::string::npos);
  CHECK(text.find("FAILED") != std::string::npos);
  CHECK(text.find("note: context") != std::string::npos);

  CheckReport nan;
  nan.name = "nan";
  nan.measure("x", std::nan(""), "<", 1.);
  CHECK_FALSE(nan.passed);

  const auto j = nlohmann::json::parse(reports_json({r, nan}));
  REQUIRE(j.is_array());
  CHECK(j[0]["name"] == "demo");
  CHECK(j[0]["status"] == "fail");
  CHECK(j[0]["metrics"][0]["name"] == "small");
  CHECK(j[0]["metrics"][0]["passed"] == true);
  CHECK(j[1]["metrics"][0]["value"].is_null());
  CHECK(reports_text({r}) == report_text(r));
}

TEST_CASE("checks are deterministic in the worker count") {
  const Mesh m = agglomerate_pairs(generate_cubic_mesh(2), 0);
  CHECK(reports_json({check_links(m, opts(1, 1, 3))}) == reports_json({check_links(m, opts(1, 3, 3))}));
  CHECK(reports_json({check_complex(m, opts(0, 1))}) == reports_json({check_complex(m, opts(0, 2))}));
}
