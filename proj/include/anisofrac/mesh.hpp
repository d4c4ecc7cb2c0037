// Uniform cell-centered meshes on a box domain and on the exterior collar
// B_R \ Omega used to truncate integrals over the complement.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "anisofrac/expr.hpp"

namespace anisofrac {

struct DomainMesh {
  int dimension = 0;
  Point box_min{0.0, 0.0};
  Point box_max{0.0, 0.0};
  std::array<int, 2> resolution{0, 0};
  std::array<double, 2> spacing{0.0, 0.0};
  std::vector<Point> nodes;   // cell centers, axis-0 fastest
  double cell_volume = 0.0;

  Point center() const;
  double diameter() const;      // box diagonal
  double circumradius() const;  // half the diagonal
};

// resolution >= 2 per axis; box_min < box_max per axis.
DomainMesh build_mesh(int dimension, const Point& box_min, const Point& box_max,
                      std::array<int, 2> resolution);

struct CollarMesh {
  double radius = 0.0;
  std::array<double, 2> spacing{0.0, 0.0};
  std::vector<Point> nodes;   // ambient-grid cell centers in B_R minus the box
  double cell_volume = 0.0;
};

// Ambient grid anchored at box_min with spacing side/collar_resolution per
// axis; nodes are the centers outside the open box and within distance R of
// the box center. Requires R > circumradius(mesh).
CollarMesh build_collar(const DomainMesh& mesh, double radius,
                        std::array<int, 2> collar_resolution);

// Nodal values on mesh.nodes; identically zero outside the domain.
using DiscreteFunction = std::vector<double>;

// Midpoint rule: sum g(node) * cell_volume in fixed node order.
double lebesgue_integral(const DomainMesh& mesh, std::span<const double> node_values);

template <class G>
double lebesgue_integral_of(const DomainMesh& mesh, G&& g) {
  std::vector<double> values(mesh.nodes.size());
  for (std::size_t k = 0; k < mesh.nodes.size(); ++k) values[k] = g(mesh.nodes[k]);
  return lebesgue_integral(mesh, values);
}

}  // namespace anisofrac
