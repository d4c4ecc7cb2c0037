#include "anisofrac/mesh.hpp"

#include <cmath>

#include "anisofrac/errors.hpp"
#include "anisofrac/reduction.hpp"

namespace anisofrac {

Point DomainMesh::center() const {
  return {0.5 * (box_min[0] + box_max[0]), 0.5 * (box_min[1] + box_max[1])};
}

double DomainMesh::diameter() const {
  double d0 = box_max[0] - box_min[0];
  double d1 = dimension > 1 ? box_max[1] - box_min[1] : 0.0;
  return std::sqrt(d0 * d0 + d1 * d1);
}

double DomainMesh::circumradius() const { return 0.5 * diameter(); }

DomainMesh build_mesh(int dimension, const Point& box_min, const Point& box_max,
                      std::array<int, 2> resolution) {
  if (dimension != 1 && dimension != 2)
    throw ConfigValidationError("dimension must be 1 or 2");
  DomainMesh m;
  m.dimension = dimension;
  m.box_min = box_min;
  m.box_max = box_max;
  m.resolution = resolution;
  if (dimension == 1) {
    m.resolution[1] = 1;
    m.box_min[1] = 0.0;
    m.box_max[1] = 0.0;
  }
  m.cell_volume = 1.0;
  for (int a = 0; a < dimension; ++a) {
    if (!(box_min[a] < box_max[a]))
      throw ConfigValidationError("box_min must be strictly below box_max on every axis");
    if (m.resolution[a] < 2)
      throw BadResolution("resolution must be at least 2 per axis");
    m.spacing[a] = (m.box_max[a] - m.box_min[a]) / m.resolution[a];
    m.cell_volume *= m.spacing[a];
  }
  const int n0 = m.resolution[0];
  const int n1 = dimension == 2 ? m.resolution[1] : 1;
  m.nodes.reserve(static_cast<std::size_t>(n0) * n1);
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n0; ++i) {
      Point p{m.box_min[0] + (i + 0.5) * m.spacing[0], 0.0};
      if (dimension == 2) p[1] = m.box_min[1] + (j + 0.5) * m.spacing[1];
      m.nodes.push_back(p);
    }
  }
  return m;
}

CollarMesh build_collar(const DomainMesh& mesh, double radius,
                        std::array<int, 2> collar_resolution) {
  if (!(radius > mesh.circumradius()))
    throw CollarTooSmall("collar radius must exceed the domain circumradius");
  CollarMesh c;
  c.radius = radius;
  c.cell_volume = 1.0;
  for (int a = 0; a < mesh.dimension; ++a) {
    if (collar_resolution[a] < 1)
      throw BadResolution("collar resolution must be at least 1 per axis");
    c.spacing[a] = (mesh.box_max[a] - mesh.box_min[a]) / collar_resolution[a];
    c.cell_volume *= c.spacing[a];
  }
  const Point ctr = mesh.center();
  const double r2 = radius * radius;

  // Ambient-grid index range covering B_R on each axis.
  std::array<long, 2> klo{0, 0}, khi{-1, -1};
  for (int a = 0; a < mesh.dimension; ++a) {
    klo[a] = static_cast<long>(std::floor((ctr[a] - radius - mesh.box_min[a]) / c.spacing[a])) - 1;
    khi[a] = static_cast<long>(std::ceil((ctr[a] + radius - mesh.box_min[a]) / c.spacing[a])) + 1;
  }
  if (mesh.dimension == 1) {
    klo[1] = 0;
    khi[1] = 0;
  }

  for (long j = klo[1]; j <= khi[1]; ++j) {
    for (long i = klo[0]; i <= khi[0]; ++i) {
      Point p{mesh.box_min[0] + (i + 0.5) * c.spacing[0], 0.0};
      if (mesh.dimension == 2) p[1] = mesh.box_min[1] + (j + 0.5) * c.spacing[1];
      bool inside_box = p[0] > mesh.box_min[0] && p[0] < mesh.box_max[0];
      if (mesh.dimension == 2)
        inside_box = inside_box && p[1] > mesh.box_min[1] && p[1] < mesh.box_max[1];
      if (inside_box) continue;
      double d0 = p[0] - ctr[0];
      double d1 = p[1] - ctr[1];
      if (d0 * d0 + d1 * d1 <= r2) c.nodes.push_back(p);
    }
  }
  return c;
}

double lebesgue_integral(const DomainMesh& mesh, std::span<const double> node_values) {
  if (node_values.size() != mesh.nodes.size())
    throw ConfigValidationError("node value count does not match the mesh");
  for (double v : node_values)
    if (!std::isfinite(v)) throw NonFiniteIntegrand("non-finite integrand value at a node");
  const double vol = mesh.cell_volume;
  return chunked_sum(node_values.size(),
                     [&](std::size_t k) { return node_values[k] * vol; });
}

}  // namespace anisofrac
