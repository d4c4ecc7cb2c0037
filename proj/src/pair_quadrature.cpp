#include "anisofrac/pair_quadrature.hpp"

#include <cmath>

#include "anisofrac/math_util.hpp"

namespace anisofrac {

PairTable build_pair_table(const DomainMesh& mesh, const CollarMesh* collar) {
  PairTable t;
  t.mesh = &mesh;
  t.collar = collar;
  const std::size_t m = mesh.nodes.size();
  const std::size_t c = collar ? collar->nodes.size() : 0;
  t.a.reserve(m * (m - 1) / 2 + m * c);
  t.b.reserve(t.a.capacity());
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = i + 1; j < m; ++j) {
      t.a.push_back(i);
      t.b.push_back(j);
    }
  }
  t.omega_pairs = t.a.size();
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < c; ++j) {
      t.a.push_back(i);
      t.b.push_back(j);
    }
  }
  t.weight_omega = 2.0 * mesh.cell_volume * mesh.cell_volume;
  t.weight_collar = collar ? 2.0 * mesh.cell_volume * collar->cell_volume : 0.0;
  return t;
}

double tail_estimate(const DomainMesh& mesh, double radius, double s,
                     double p_minus, double p_plus, double sup_w) {
  const double diam = mesh.diameter();
  if (!(radius > 2.0 * diam))
    throw CollarTooSmall("tail bound requires collar radius > 2 * diam(domain)");
  if (!(s > 0.0 && s < 1.0) || !(p_minus > 1.0) || !(p_plus >= p_minus))
    throw ConfigValidationError("tail bound requires 0 < s < 1 and 1 < p_minus <= p_plus");
  if (sup_w == 0.0) return 0.0;

  double vol = 1.0;
  for (int a = 0; a < mesh.dimension; ++a) vol *= mesh.box_max[a] - mesh.box_min[a];
  const double sigma = mesh.dimension == 1 ? 2.0 : 2.0 * M_PI;
  const double radial_majorant = mesh.dimension == 1 ? 1.0 : 2.0;  // 2^{N-1}
  const double a = s * p_minus;
  const double amp = std::pow(std::max(sup_w, 1.0), p_plus);
  return vol * amp * sigma * radial_majorant * std::pow(radius - diam, -a) / a;
}

}  // namespace anisofrac
