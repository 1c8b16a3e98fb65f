// Global degree-of-freedom layout of the discrete spaces.

#ifndef DDR_DOFSPACE_HPP
#define DDR_DOFSPACE_HPP

#include "ddr/mesh.hpp"
#include "ddr/polyspaces.hpp"

#include <array>

namespace ddr {

enum class SpaceKind { Grad, Curl, Div, L2 };

const char* space_name(SpaceKind which);

/// One polynomial component attached to each entity of a given dimension
struct DofComponent {
  int entity_dim;
  BasisKind kind;
  int degree;
  int dim;
};

class DofSpace {
public:
  DofSpace(const Mesh& mesh, SpaceKind which, int k);

  SpaceKind which() const { return m_which; }
  int degree() const { return m_k; }
  std::size_t dimension() const { return m_total; }

  /// DOFs per entity of dimension d (0..3)
  int entity_dofs(int d) const { return m_per_entity[d]; }
  /// Components of entities of dimension d, in layout order
  const std::vector<DofComponent>& components(int d) const { return m_components[d]; }
  /// First global DOF of an entity
  std::size_t offset(EntityRef e) const { return m_offset[e.dim] + std::size_t(e.index) * m_per_entity[e.dim]; }

  /// Sorted global DOFs of an entity and all its sub-entities
  std::vector<int> local_dofs(const Mesh& mesh, EntityRef e) const;
  /// Local dimension on one cell
  int cell_local_dim(const Mesh& mesh, int t) const;

private:
  SpaceKind m_which;
  int m_k;
  std::array<std::vector<DofComponent>, 4> m_components;
  std::array<int, 4> m_per_entity{};
  std::array<std::size_t, 4> m_offset{};
  std::size_t m_total = 0;
};

/// Map from a sorted list of global DOFs to positions inside another sorted list
std::vector<int> embed_indices(const std::vector<int>& sub, const std::vector<int>& super);

} // namespace ddr

#endif
