#include "ddr/mesh.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace ddr;
using ddr_test::area_vector;

namespace {

// Sum over the boundary of omega_TF |F| n_F, recomputed from the raw loops
Vec3 boundary_flux(const Mesh& m, int t) {
  Vec3 s = Vec3::Zero();
  const Cell& c = m.cell(t);
  for (std::size_t i = 0; i < c.faces.size(); ++i)
    s += c.face_orientations[i] * area_vector(m, m.face_loops()[c.faces[i]]);
  return s;
}

// Volume by the divergence theorem: (1/3) sum_F omega_TF int_F x . n_F
double divergence_volume(const Mesh& m, int t) {
  double v = 0.;
  const Cell& c = m.cell(t);
  for (std::size_t i = 0; i < c.faces.size(); ++i) {
    const auto& loop = m.face_loops()[c.faces[i]];
    const Vec3 a = area_vector(m, loop);
    v += c.face_orientations[i] * m.vertex(loop[0]).dot(a) / 3.;
  }
  return v;
}

void check_cells_closed(const Mesh& m) {
  for (std::size_t t = 0; t < m.n_cells(); ++t) {
    CHECK(boundary_flux(m, static_cast<int>(t)).norm() < 1e-12);
    CHECK(divergence_volume(m, static_cast<int>(t)) == doctest::Approx(m.cell(t).volume).epsilon(1e-12));
  }
}

double total_volume(const Mesh& m) {
  double v = 0.;
  for (std::size_t t = 0; t < m.n_cells(); ++t) v += m.cell(t).volume;
  return v;
}

} // namespace

TEST_CASE("cubic mesh counts") {
  for (int n = 1; n <= 4; ++n) {
    const Mesh m = generate_cubic_mesh(n);
    CHECK(m.n_cells() == std::size_t(n * n * n));
    CHECK(m.n_faces() == std::size_t(3 * n * n * (n + 1)));
    CHECK(m.n_edges() == std::size_t(3 * n * (n + 1) * (n + 1)));
    CHECK(m.n_vertices() == std::size_t((n + 1) * (n + 1) * (n + 1)));
    CHECK(total_volume(m) == doctest::Approx(1.).epsilon(1e-13));
  }
  const Mesh m2 = generate_cubic_mesh(2);
  CHECK(m2.n_cells() == 8);
  CHECK(m2.n_faces() == 36);
  CHECK(m2.n_edges() == 54);
  CHECK(m2.n_vertices() == 27);
}

TEST_CASE("cubic 16 mesh matches the published counts") {
  const Mesh m = generate_cubic_mesh(16);
  CHECK(m.n_cells() == 4096);
  CHECK(m.n_faces() == 13056);
  CHECK(m.n_edges() == 13872);
}

TEST_CASE("tet mesh") {
  const Mesh m1 = generate_tet_mesh(1);
  REQUIRE(m1.n_cells() == 6);
  // every tetrahedron contains both ends of the main diagonal
  int lo = -1, hi = -1;
  for (std::size_t i = 0; i < m1.n_vertices(); ++i) {
    if (m1.vertex(static_cast<int>(i)).norm() < 1e-14) lo = static_cast<int>(i);
    if ((m1.vertex(static_cast<int>(i)) - Vec3(1, 1, 1)).norm() < 1e-14) hi = static_cast<int>(i);
  }
  REQUIRE(lo >= 0);
  REQUIRE(hi >= 0);
  for (std::size_t t = 0; t < 6; ++t) {
    const auto& vs = m1.cell(t).vertices;
    CHECK(vs.size() == 4);
    CHECK(std::count(vs.begin(), vs.end(), lo) == 1);
    CHECK(std::count(vs.begin(), vs.end(), hi) == 1);
    CHECK(m1.cell(t).volume == doctest::Approx(1. / 6.).epsilon(1e-13));
  }
  check_cells_closed(m1);

  const Mesh m2 = generate_tet_mesh(2);
  CHECK(m2.n_cells() == 48);
  CHECK(total_volume(m2) == doctest::Approx(1.).epsilon(1e-13));
  check_cells_closed(m2);
}

TEST_CASE("agglomerated mesh") {
  const Mesh base = generate_cubic_mesh(2);
  const Mesh m = agglomerate_pairs(base, 0);
  CHECK(m.n_cells() >= 4);
  CHECK(m.n_cells() <= 8);
  CHECK(total_volume(m) == doctest::Approx(1.).epsilon(1e-13));
  check_cells_closed(m);
  bool merged = false;
  for (std::size_t t = 0; t < m.n_cells(); ++t) {
    const std::size_t nf = m.cell(t).faces.size();
    CHECK((nf == 6 || nf == 10));
    merged = merged || nf == 10;
  }
  CHECK(merged);
  CHECK(m.n_faces() == base.n_faces() - (base.n_cells() - m.n_cells()));

  const Mesh one = agglomerate_pairs(generate_cubic_mesh(1), 5);
  CHECK(one.n_cells() == 1);
  CHECK(one.n_faces() == 6);

  // same seed, same mesh
  CHECK(mesh_to_json_text(agglomerate_pairs(base, 3)) == mesh_to_json_text(agglomerate_pairs(base, 3)));
}

TEST_CASE("orientations follow the conventions") {
  for (const Mesh& m : {generate_cubic_mesh(2), generate_tet_mesh(1), agglomerate_pairs(generate_cubic_mesh(2), 1)}) {
    for (std::size_t e = 0; e < m.n_edges(); ++e) {
      const Edge& E = m.edge(e);
      CHECK(E.vertices[0] < E.vertices[1]);
      const Vec3 d = m.vertex(E.vertices[1]) - m.vertex(E.vertices[0]);
      CHECK((d.normalized() - E.tangent).norm() < 1e-14);
    }
    for (std::size_t f = 0; f < m.n_faces(); ++f) {
      const Face& F = m.face(f);
      const Vec3 a = area_vector(m, F.vertices);
      CHECK((a.normalized() - F.normal).norm() < 1e-13);
      CHECK(F.area == doctest::Approx(a.norm()).epsilon(1e-13));
      CHECK((F.frame[0].cross(F.frame[1]) - F.normal).norm() < 1e-13);
      for (std::size_t i = 0; i < F.edges.size(); ++i) {
        const Edge& E = m.edge(F.edges[i]);
        const Vec3 out = E.center - F.center;
        const int expected = out.dot(F.normal.cross(E.tangent)) > 0. ? 1 : -1;
        CHECK(F.edge_orientations[i] == expected);
      }
    }
    for (std::size_t t = 0; t < m.n_cells(); ++t) {
      const Cell& T = m.cell(t);
      for (std::size_t i = 0; i < T.faces.size(); ++i) {
        const Face& F = m.face(T.faces[i]);
        CHECK(T.face_orientations[i] == ((F.center - T.center).dot(F.normal) > 0. ? 1 : -1));
      }
      // each edge of T is shared by two faces of T whose signs cancel
      for (int e : T.edges) {
        int sum = 0, count = 0;
        for (std::size_t i = 0; i < T.faces.size(); ++i) {
          const int j = m.local_edge_index(T.faces[i], e);
          if (j < 0) continue;
          sum += T.face_orientations[i] * m.face(T.faces[i]).edge_orientations[j];
          ++count;
        }
        CHECK(count == 2);
        CHECK(sum == 0);
      }
    }
  }
}

TEST_CASE("mesh size halves under refinement") {
  for (int n : {1, 2, 4}) {
    const double h = generate_cubic_mesh(n).h_max();
    CHECK(h == doctest::Approx(std::sqrt(3.) / n).epsilon(1e-14));
    CHECK(generate_cubic_mesh(2 * n).h_max() == doctest::Approx(h / 2).epsilon(1e-14));
  }
  CHECK(generate_cubic_mesh(3).regularity_diagnostic() == doctest::Approx(0.5 / std::sqrt(3.)).epsilon(1e-12));
}

TEST_CASE("flipped edge orientation copy") {
  const Mesh m = generate_cubic_mesh(1);
  const Mesh bad = m.with_flipped_face_edge_orientation(0, 0);
  CHECK(bad.face(0).edge_orientations[0] == -m.face(0).edge_orientations[0]);
  CHECK(bad.face(0).edge_orientations[1] == m.face(0).edge_orientations[1]);
}

TEST_CASE("json meshes") {
  const Mesh cube = load_mesh(ddr_test::data_path("unit_cube.json"));
  CHECK(cube.n_vertices() == 8);
  CHECK(cube.n_faces() == 6);
  CHECK(cube.n_edges() == 12);
  CHECK(cube.n_cells() == 1);
  for (int o : cube.cell(0).face_orientations) CHECK(std::abs(o) == 1);
  CHECK(cube.cell(0).volume == doctest::Approx(1.).epsilon(1e-14));

  const Mesh again = mesh_from_json_text(mesh_to_json_text(cube));
  CHECK(mesh_to_json_text(again) == mesh_to_json_text(cube));
  const Mesh m2 = mesh_from_json_text(mesh_to_json_text(generate_tet_mesh(2)));
  CHECK(m2.n_cells() == 48);

  auto message = [](const std::string& name) {
    try {
      load_mesh(ddr_test::data_path(name));
    } catch (const MeshError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string np = message("nonplanar_face.json");
  CHECK(np.find("not coplanar") != std::string::npos);
  const std::string open = message("corrupted.json");
  CHECK(open.find("cell 1") != std::string::npos);
  CHECK(message("does_not_exist.json").find("cannot open") != std::string::npos);
  CHECK_THROWS_AS(mesh_from_json_text("{\"vertices\": [[0,0]]}"), MeshError);
  CHECK_THROWS_AS(mesh_from_json_text("not json"), MeshError);
}

TEST_CASE("builtin specs") {
  CHECK(builtin_mesh("cubic:2").n_cells() == 8);
  CHECK(builtin_mesh("builtin:tet:1").n_cells() == 6);
  CHECK(builtin_mesh("agglo:2:0").n_cells() == agglomerate_pairs(generate_cubic_mesh(2), 0).n_cells());
  CHECK_THROWS_AS(builtin_mesh("cubic:0"), ArgumentError);
  CHECK_THROWS_AS(builtin_mesh("sphere:3"), ArgumentError);
  CHECK_THROWS_AS(builtin_mesh("cubic:x"), ArgumentError);
}
