// Polyhedral mesh: incidence, orientation and geometry.
//
// Conventions:
//  - t_E points from the lower to the higher global vertex index;
//  - n_F follows the right-hand rule on the stored vertex loop;
//  - omega_FE = +1 when omega_FE * n_FE points out of F, n_FE = n_F x t_E;
//  - omega_TF = +1 when n_F points out of T;
//  - the star point x_Y of faces and cells is the vertex centroid.

#ifndef DDR_MESH_HPP
#define DDR_MESH_HPP

#include "ddr/common.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ddr {

struct Edge {
  std::array<int, 2> vertices; ///< lower index first
  Vec3 tangent;
  Vec3 center;
  double length = 0.;
  std::vector<int> faces;
};

struct Face {
  std::vector<int> vertices; ///< stored loop
  std::vector<int> edges;    ///< sorted by global index
  std::vector<int> edge_orientations; ///< omega_FE, aligned with `edges`
  Vec3 normal;
  Vec3 center;
  std::array<Vec3, 2> frame; ///< (e1, e2) with e1 x e2 = n_F
  double area = 0.;
  double diameter = 0.;
  std::vector<int> cells;
};

struct Cell {
  std::vector<int> faces; ///< sorted by global index
  std::vector<int> face_orientations; ///< omega_TF, aligned with `faces`
  std::vector<int> edges;    ///< sorted
  std::vector<int> vertices; ///< sorted
  Vec3 center;
  double volume = 0.;
  double diameter = 0.;
};

/// Reference to an entity by intrinsic dimension (0..3) and index
struct EntityRef {
  int dim;
  int index;
};

class Mesh {
public:
  /// Builds incidence and geometry, validating every invariant.
  /// Throws MeshError naming the offending entity on failure.
  Mesh(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces,
       std::vector<std::vector<int>> cells);

  std::size_t n_vertices() const { return m_vertices.size(); }
  std::size_t n_edges() const { return m_edges.size(); }
  std::size_t n_faces() const { return m_faces.size(); }
  std::size_t n_cells() const { return m_cells.size(); }
  std::size_t n_entities(int dim) const;

  const Vec3& vertex(int i) const { return m_vertices[i]; }
  const Edge& edge(int i) const { return m_edges[i]; }
  const Face& face(int i) const { return m_faces[i]; }
  const Cell& cell(int i) const { return m_cells[i]; }
  const std::vector<Vec3>& vertices() const { return m_vertices; }

  /// Diameter of an entity (0 for vertices)
  double diameter(EntityRef e) const;
  /// Measure of an entity (1 for vertices)
  double measure(EntityRef e) const;
  /// Star point of an entity
  Vec3 center(EntityRef e) const;

  /// Largest cell diameter
  double h_max() const;
  /// min over cells of (distance from x_T to the closest face plane) / h_T
  double regularity_diagnostic() const;

  /// Face-loop and cell-face lists as given at construction
  const std::vector<std::vector<int>>& face_loops() const { return m_face_loops; }
  const std::vector<std::vector<int>>& cell_faces() const { return m_cell_faces; }

  /// Position of face f inside cell t's face list (-1 if absent)
  int local_face_index(int t, int f) const;
  /// Position of edge e inside face f's edge list (-1 if absent)
  int local_edge_index(int f, int e) const;

  /// Copy in which one omega_FE sign is flipped. Only meant for negative
  /// controls of the verification harness.
  Mesh with_flipped_face_edge_orientation(int f, int local_edge) const;

private:
  Mesh() = default;
  void build_topology();
  void build_geometry();
  void validate() const;

  std::vector<Vec3> m_vertices;
  std::vector<std::vector<int>> m_face_loops;
  std::vector<std::vector<int>> m_cell_faces;
  std::vector<Edge> m_edges;
  std::vector<Face> m_faces;
  std::vector<Cell> m_cells;
};

/// Uniform hexahedral partition of (0,1)^3 with n cells per axis
Mesh generate_cubic_mesh(int n);
/// Kuhn subdivision (6 tetrahedra per cube) of (0,1)^3
Mesh generate_tet_mesh(int n);
/// Seeded greedy merge of face-adjacent cell pairs
Mesh agglomerate_pairs(const Mesh& mesh, std::uint64_t seed);

/// Reads the JSON mesh format {"vertices", "faces", "cells"}
Mesh load_mesh(const std::string& path);
Mesh mesh_from_json_text(const std::string& text);
std::string mesh_to_json_text(const Mesh& mesh);

/// Parses "cubic:N", "tet:N", "agglo:N:seed" (optionally prefixed by "builtin:")
Mesh builtin_mesh(const std::string& spec);

} // namespace ddr

#endif
