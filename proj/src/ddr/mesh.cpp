#include "ddr/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ddr {

namespace {

std::string entity_name(const char* kind, std::size_t i) {
  return std::string(kind) + " " + std::to_string(i);
}

/// Newell normal (area vector) of a closed loop
Vec3 loop_area_vector(const std::vector<Vec3>& x, const std::vector<int>& loop) {
  Vec3 n = Vec3::Zero();
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec3& a = x[loop[i]];
    const Vec3& b = x[loop[(i + 1) % loop.size()]];
    n += a.cross(b);
  }
  return 0.5 * n;
}

Vec3 loop_center(const std::vector<Vec3>& x, const std::vector<int>& loop) {
  Vec3 c = Vec3::Zero();
  for (int v : loop) c += x[v];
  return c / double(loop.size());
}

double point_set_diameter(const std::vector<Vec3>& x, const std::vector<int>& ids) {
  double d = 0.;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      d = std::max(d, (x[ids[i]] - x[ids[j]]).norm());
  return d;
}

/// True when every (x_T, x_F, a, b) sub-tetrahedron is positively oriented
/// w.r.t. the outward normal. Used by the agglomeration to reject merges.
bool cell_is_star_shaped(const std::vector<Vec3>& x, const std::vector<std::vector<int>>& loops,
                         const std::vector<int>& faces) {
  std::set<int> vset;
  for (int f : faces)
    for (int v : loops[f]) vset.insert(v);
  Vec3 xt = Vec3::Zero();
  for (int v : vset) xt += x[v];
  xt /= double(vset.size());
  std::vector<int> vlist(vset.begin(), vset.end());
  double h = point_set_diameter(x, vlist);
  for (int f : faces) {
    const auto& loop = loops[f];
    Vec3 xf = loop_center(x, loop);
    Vec3 n = loop_area_vector(x, loop).normalized();
    double omega = (xf - xt).dot(n) > 0 ? 1. : -1.;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = x[loop[i]];
      const Vec3& b = x[loop[(i + 1) % loop.size()]];
      double det = (xf - xt).dot((a - xt).cross(b - xt));
      if (omega * det <= 1e-12 * h * h * h) return false;
    }
  }
  return true;
}

} // namespace

Mesh::Mesh(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces,
           std::vector<std::vector<int>> cells)
    : m_vertices(std::move(vertices)), m_face_loops(std::move(faces)),
      m_cell_faces(std::move(cells)) {
  build_topology();
  build_geometry();
  validate();
}

std::size_t Mesh::n_entities(int dim) const {
  switch (dim) {
  case 0: return n_vertices();
  case 1: return n_edges();
  case 2: return n_faces();
  case 3: return n_cells();
  default: throw ArgumentError("invalid entity dimension");
  }
}

void Mesh::build_topology() {
  const int nv = static_cast<int>(m_vertices.size());
  if (nv == 0) throw MeshError("mesh has no vertices");
  if (m_cell_faces.empty()) throw MeshError("mesh has no cells");

  std::map<std::pair<int, int>, int> edge_ids;
  for (std::size_t f = 0; f < m_face_loops.size(); ++f) {
    const auto& loop = m_face_loops[f];
    if (loop.size() < 3) throw MeshError(entity_name("face", f) + ": fewer than 3 vertices");
    std::set<int> seen;
    for (int v : loop) {
      if (v < 0 || v >= nv) throw MeshError(entity_name("face", f) + ": vertex index out of range");
      if (!seen.insert(v).second) throw MeshError(entity_name("face", f) + ": repeated vertex");
    }
    for (std::size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i], b = loop[(i + 1) % loop.size()];
      edge_ids.emplace(std::minmax(a, b), 0);
    }
  }
  m_edges.clear();
  m_edges.reserve(edge_ids.size());
  for (auto& [key, id] : edge_ids) {
    id = static_cast<int>(m_edges.size());
    Edge e;
    e.vertices = {key.first, key.second};
    m_edges.push_back(e);
  }

  m_faces.assign(m_face_loops.size(), Face());
  for (std::size_t f = 0; f < m_face_loops.size(); ++f) {
    Face& face = m_faces[f];
    face.vertices = m_face_loops[f];
    const auto& loop = face.vertices;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i], b = loop[(i + 1) % loop.size()];
      face.edges.push_back(edge_ids.at(std::minmax(a, b)));
    }
    std::sort(face.edges.begin(), face.edges.end());
    for (int e : face.edges) m_edges[e].faces.push_back(static_cast<int>(f));
  }

  m_cells.assign(m_cell_faces.size(), Cell());
  for (std::size_t t = 0; t < m_cell_faces.size(); ++t) {
    Cell& cell = m_cells[t];
    cell.faces = m_cell_faces[t];
    std::sort(cell.faces.begin(), cell.faces.end());
    if (cell.faces.size() < 4) throw MeshError(entity_name("cell", t) + ": fewer than 4 faces");
    if (std::adjacent_find(cell.faces.begin(), cell.faces.end()) != cell.faces.end())
      throw MeshError(entity_name("cell", t) + ": repeated face");
    std::set<int> es, vs;
    for (int f : cell.faces) {
      if (f < 0 || f >= static_cast<int>(m_faces.size()))
        throw MeshError(entity_name("cell", t) + ": face index out of range");
      m_faces[f].cells.push_back(static_cast<int>(t));
      es.insert(m_faces[f].edges.begin(), m_faces[f].edges.end());
      vs.insert(m_faces[f].vertices.begin(), m_faces[f].vertices.end());
    }
    cell.edges.assign(es.begin(), es.end());
    cell.vertices.assign(vs.begin(), vs.end());
  }
}

void Mesh::build_geometry() {
  for (std::size_t i = 0; i < m_edges.size(); ++i) {
    Edge& e = m_edges[i];
    Vec3 d = m_vertices[e.vertices[1]] - m_vertices[e.vertices[0]];
    e.length = d.norm();
    if (e.length <= 0.) throw MeshError(entity_name("edge", i) + ": zero length");
    e.tangent = d / e.length;
    e.center = 0.5 * (m_vertices[e.vertices[0]] + m_vertices[e.vertices[1]]);
  }

  for (std::size_t f = 0; f < m_faces.size(); ++f) {
    Face& face = m_faces[f];
    Vec3 av = loop_area_vector(m_vertices, face.vertices);
    if (av.norm() <= 0.) throw MeshError(entity_name("face", f) + ": degenerate loop");
    face.normal = av.normalized();
    face.center = loop_center(m_vertices, face.vertices);
    face.diameter = point_set_diameter(m_vertices, face.vertices);
    Vec3 d = m_vertices[face.vertices[0]] - face.center;
    Vec3 e1 = d - d.dot(face.normal) * face.normal;
    face.frame[0] = e1.normalized();
    face.frame[1] = face.normal.cross(face.frame[0]);
    face.area = 0.;
    const auto& loop = face.vertices;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = m_vertices[loop[i]];
      const Vec3& b = m_vertices[loop[(i + 1) % loop.size()]];
      face.area += 0.5 * (a - face.center).cross(b - face.center).dot(face.normal);
    }
    face.edge_orientations.resize(face.edges.size());
    for (std::size_t j = 0; j < face.edges.size(); ++j) {
      const Edge& e = m_edges[face.edges[j]];
      Vec3 nfe = face.normal.cross(e.tangent);
      face.edge_orientations[j] = (e.center - face.center).dot(nfe) > 0. ? 1 : -1;
    }
  }

  for (std::size_t t = 0; t < m_cells.size(); ++t) {
    Cell& cell = m_cells[t];
    cell.center = Vec3::Zero();
    for (int v : cell.vertices) cell.center += m_vertices[v];
    cell.center /= double(cell.vertices.size());
    cell.diameter = point_set_diameter(m_vertices, cell.vertices);
    cell.volume = 0.;
    cell.face_orientations.resize(cell.faces.size());
    for (std::size_t i = 0; i < cell.faces.size(); ++i) {
      const Face& face = m_faces[cell.faces[i]];
      int omega = (face.center - cell.center).dot(face.normal) > 0. ? 1 : -1;
      cell.face_orientations[i] = omega;
      cell.volume += omega * face.area * (face.center - cell.center).dot(face.normal) / 3.;
    }
  }
}

void Mesh::validate() const {
  for (std::size_t f = 0; f < m_faces.size(); ++f) {
    const Face& face = m_faces[f];
    const double h = face.diameter;
    for (int v : face.vertices) {
      if (std::abs((m_vertices[v] - face.center).dot(face.normal)) > 1e-10 * h)
        throw MeshError(entity_name("face", f) + ": vertices are not coplanar");
    }
    const auto& loop = face.vertices;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = m_vertices[loop[i]];
      const Vec3& b = m_vertices[loop[(i + 1) % loop.size()]];
      if ((a - face.center).cross(b - face.center).dot(face.normal) <= 1e-12 * h * h)
        throw MeshError(entity_name("face", f) + ": not star-shaped w.r.t. its centroid");
    }
    // Geometric omega_FE must agree with the loop orientation: the counter-clockwise
    // boundary runs along t_E exactly when omega_FE = -1.
    for (std::size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i], b = loop[(i + 1) % loop.size()];
      int e = -1;
      for (std::size_t j = 0; j < face.edges.size(); ++j) {
        const Edge& ed = m_edges[face.edges[j]];
        if (ed.vertices[0] == std::min(a, b) && ed.vertices[1] == std::max(a, b)) e = static_cast<int>(j);
      }
      int expected = a < b ? -1 : 1;
      if (face.edge_orientations[e] != expected)
        throw MeshError(entity_name("face", f) + ": inconsistent edge orientation");
    }
    if (face.cells.empty()) throw MeshError(entity_name("face", f) + ": dangling face (no cell)");
    if (face.cells.size() > 2) throw MeshError(entity_name("face", f) + ": shared by more than two cells");
    if (face.cells.size() == 2) {
      int s = 0;
      for (int t : face.cells) s += m_cells[t].face_orientations[local_face_index(t, static_cast<int>(f))];
      if (s != 0) throw MeshError(entity_name("face", f) + ": orientations of its two cells do not cancel");
    }
  }

  for (std::size_t t = 0; t < m_cells.size(); ++t) {
    const Cell& cell = m_cells[t];
    const double h = cell.diameter;
    Vec3 flux = Vec3::Zero();
    std::map<int, int> edge_count, edge_sign;
    for (std::size_t i = 0; i < cell.faces.size(); ++i) {
      const Face& face = m_faces[cell.faces[i]];
      const int omega = cell.face_orientations[i];
      flux += omega * face.area * face.normal;
      const auto& loop = face.vertices;
      for (std::size_t j = 0; j < loop.size(); ++j) {
        const Vec3& a = m_vertices[loop[j]];
        const Vec3& b = m_vertices[loop[(j + 1) % loop.size()]];
        double det = (face.center - cell.center).dot((a - cell.center).cross(b - cell.center));
        if (omega * det <= 1e-12 * h * h * h)
          throw MeshError(entity_name("cell", t) + ": not star-shaped w.r.t. its centroid");
      }
      for (std::size_t j = 0; j < face.edges.size(); ++j) {
        edge_count[face.edges[j]] += 1;
        edge_sign[face.edges[j]] += omega * face.edge_orientations[j];
      }
    }
    for (auto& [e, c] : edge_count) {
      if (c != 2 || edge_sign[e] != 0)
        throw MeshError(entity_name("cell", t) + ": boundary is not closed at edge " + std::to_string(e));
    }
    if (flux.norm() > 1e-12 * h * h)
      throw MeshError(entity_name("cell", t) + ": boundary is not closed (nonzero normal flux)");
    if (cell.volume <= 0.) throw MeshError(entity_name("cell", t) + ": nonpositive volume");
  }
}

double Mesh::diameter(EntityRef e) const {
  switch (e.dim) {
  case 0: return 0.;
  case 1: return m_edges[e.index].length;
  case 2: return m_faces[e.index].diameter;
  case 3: return m_cells[e.index].diameter;
  default: throw ArgumentError("invalid entity dimension");
  }
}

double Mesh::measure(EntityRef e) const {
  switch (e.dim) {
  case 0: return 1.;
  case 1: return m_edges[e.index].length;
  case 2: return m_faces[e.index].area;
  case 3: return m_cells[e.index].volume;
  default: throw ArgumentError("invalid entity dimension");
  }
}

Vec3 Mesh::center(EntityRef e) const {
  switch (e.dim) {
  case 0: return m_vertices[e.index];
  case 1: return m_edges[e.index].center;
  case 2: return m_faces[e.index].center;
  case 3: return m_cells[e.index].center;
  default: throw ArgumentError("invalid entity dimension");
  }
}

double Mesh::h_max() const {
  double h = 0.;
  for (const auto& c : m_cells) h = std::max(h, c.diameter);
  return h;
}

double Mesh::regularity_diagnostic() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& c : m_cells) {
    for (int f : c.faces) {
      const Face& face = m_faces[f];
      r = std::min(r, std::abs((face.center - c.center).dot(face.normal)) / c.diameter);
    }
  }
  return r;
}

int Mesh::local_face_index(int t, int f) const {
  const auto& fs = m_cells[t].faces;
  auto it = std::lower_bound(fs.begin(), fs.end(), f);
  return (it != fs.end() && *it == f) ? static_cast<int>(it - fs.begin()) : -1;
}

int Mesh::local_edge_index(int f, int e) const {
  const auto& es = m_faces[f].edges;
  auto it = std::lower_bound(es.begin(), es.end(), e);
  return (it != es.end() && *it == e) ? static_cast<int>(it - es.begin()) : -1;
}

Mesh Mesh::with_flipped_face_edge_orientation(int f, int local_edge) const {
  Mesh m(*this);
  m.m_faces.at(f).edge_orientations.at(local_edge) *= -1;
  return m;
}

//------------------------------------------------------------------------------
// Generators
//------------------------------------------------------------------------------

Mesh generate_cubic_mesh(int n) {
  if (n < 1) throw ArgumentError("cubic mesh needs n >= 1");
  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };
  std::vector<Vec3> x;
  x.reserve(np * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) x.emplace_back(double(i) / n, double(j) / n, double(k) / n);

  std::vector<std::vector<int>> faces;
  // face index lookup per direction
  std::vector<int> fx(np * n * n), fy(n * np * n), fz(n * n * np);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < np; ++i) {
        fx[i + np * (j + n * k)] = static_cast<int>(faces.size());
        faces.push_back({vid(i, j, k), vid(i, j + 1, k), vid(i, j + 1, k + 1), vid(i, j, k + 1)});
      }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < n; ++i) {
        fy[i + n * (j + np * k)] = static_cast<int>(faces.size());
        faces.push_back({vid(i, j, k), vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i + 1, j, k)});
      }
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        fz[i + n * (j + n * k)] = static_cast<int>(faces.size());
        faces.push_back({vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k)});
      }

  std::vector<std::vector<int>> cells;
  cells.reserve(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        cells.push_back({fx[i + np * (j + n * k)], fx[i + 1 + np * (j + n * k)],
                         fy[i + n * (j + np * k)], fy[i + n * (j + 1 + np * k)],
                         fz[i + n * (j + n * k)], fz[i + n * (j + n * (k + 1))]});
      }
  return Mesh(std::move(x), std::move(faces), std::move(cells));
}

Mesh generate_tet_mesh(int n) {
  if (n < 1) throw ArgumentError("tetrahedral mesh needs n >= 1");
  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };
  std::vector<Vec3> x;
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) x.emplace_back(double(i) / n, double(j) / n, double(k) / n);

  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::map<std::array<int, 3>, int> face_ids;
  std::vector<std::vector<int>> faces, cells;
  auto face_of = [&](int a, int b, int c) {
    std::array<int, 3> key{a, b, c};
    std::sort(key.begin(), key.end());
    auto it = face_ids.find(key);
    if (it != face_ids.end()) return it->second;
    int id = static_cast<int>(faces.size());
    face_ids.emplace(key, id);
    faces.push_back({key[0], key[1], key[2]});
    return id;
  };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          int v[4];
          v[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            c[p[s]] += 1;
            v[s + 1] = vid(c[0], c[1], c[2]);
          }
          cells.push_back({face_of(v[1], v[2], v[3]), face_of(v[0], v[2], v[3]),
                           face_of(v[0], v[1], v[3]), face_of(v[0], v[1], v[2])});
        }
  return Mesh(std::move(x), std::move(faces), std::move(cells));
}

Mesh agglomerate_pairs(const Mesh& mesh, std::uint64_t seed) {
  std::vector<int> interior;
  for (std::size_t f = 0; f < mesh.n_faces(); ++f)
    if (mesh.face(f).cells.size() == 2) interior.push_back(static_cast<int>(f));
  // Fisher-Yates driven directly by the engine output, so the order is the
  // same on every standard library.
  std::mt19937_64 rng(seed);
  for (std::size_t i = interior.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(interior[i - 1], interior[j]);
  }

  const auto& loops = mesh.face_loops();
  std::vector<int> partner(mesh.n_cells(), -1);
  std::vector<char> removed(mesh.n_faces(), 0);
  for (int f : interior) {
    int a = mesh.face(f).cells[0], b = mesh.face(f).cells[1];
    if (partner[a] >= 0 || partner[b] >= 0) continue;
    std::vector<int> merged;
    for (int g : mesh.cell(a).faces)
      if (g != f) merged.push_back(g);
    for (int g : mesh.cell(b).faces)
      if (g != f) merged.push_back(g);
    if (!cell_is_star_shaped(mesh.vertices(), loops, merged)) continue;
    partner[a] = b;
    partner[b] = a;
    removed[f] = 1;
  }

  std::vector<int> new_face_id(mesh.n_faces(), -1);
  std::vector<std::vector<int>> faces;
  for (std::size_t f = 0; f < mesh.n_faces(); ++f) {
    if (removed[f]) continue;
    new_face_id[f] = static_cast<int>(faces.size());
    faces.push_back(loops[f]);
  }
  std::vector<std::vector<int>> cells;
  for (std::size_t t = 0; t < mesh.n_cells(); ++t) {
    int p = partner[t];
    if (p >= 0 && p < static_cast<int>(t)) continue;
    std::vector<int> cf;
    for (int g : mesh.cell(t).faces)
      if (!removed[g]) cf.push_back(new_face_id[g]);
    if (p >= 0)
      for (int g : mesh.cell(p).faces)
        if (!removed[g]) cf.push_back(new_face_id[g]);
    cells.push_back(std::move(cf));
  }
  return Mesh(mesh.vertices(), std::move(faces), std::move(cells));
}

//------------------------------------------------------------------------------
// JSON I/O
//------------------------------------------------------------------------------

Mesh mesh_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MeshError(std::string("mesh file parse error: ") + e.what());
  }
  std::vector<Vec3> x;
  std::vector<std::vector<int>> faces, cells;
  try {
    for (const auto& v : j.at("vertices")) {
      if (v.size() != 3) throw MeshError("vertex with other than 3 coordinates");
      x.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
    for (const auto& f : j.at("faces")) faces.push_back(f.get<std::vector<int>>());
    for (const auto& c : j.at("cells")) cells.push_back(c.get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw MeshError(std::string("mesh file parse error: ") + e.what());
  }
  return Mesh(std::move(x), std::move(faces), std::move(cells));
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return mesh_from_json_text(ss.str());
}

std::string mesh_to_json_text(const Mesh& mesh) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : mesh.vertices()) j["vertices"].push_back({v.x(), v.y(), v.z()});
  j["faces"] = mesh.face_loops();
  j["cells"] = mesh.cell_faces();
  return j.dump();
}

Mesh builtin_mesh(const std::string& spec) {
  std::string s = spec;
  if (s.rfind("builtin:", 0) == 0) s = s.substr(8);
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto as_int = [&](const std::string& t) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(t, &pos);
    } catch (...) {
      pos = std::string::npos;
    }
    if (pos != t.size() || v < 1 || v > 4096) throw ArgumentError("invalid mesh size in '" + spec + "'");
    return static_cast<int>(v);
  };
  if (parts.size() == 2 && parts[0] == "cubic") return generate_cubic_mesh(as_int(parts[1]));
  if (parts.size() == 2 && parts[0] == "tet") return generate_tet_mesh(as_int(parts[1]));
  if (parts.size() == 3 && parts[0] == "agglo") {
    std::uint64_t seed = 0;
    try {
      std::size_t pos = 0;
      seed = std::stoull(parts[2], &pos);
      if (pos != parts[2].size()) throw ArgumentError("");
    } catch (...) {
      throw ArgumentError("invalid seed in '" + spec + "'");
    }
    return agglomerate_pairs(generate_cubic_mesh(as_int(parts[1])), seed);
  }
  throw ArgumentError("unknown builtin mesh '" + spec + "'");
}

} // namespace ddr
