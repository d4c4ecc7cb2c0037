// Precomputed pair data shared by every modular, pairing and gradient loop:
// symmetrized exponents and the kernel distance powers |x-y|^{-(s p_i + N)}
// per canonical pair, plus the nodal exponent fields. Immutable after
// construction.
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "anisofrac/exponent_field.hpp"
#include "anisofrac/mesh.hpp"
#include "anisofrac/pair_quadrature.hpp"

namespace anisofrac {

class PairingCache {
public:
  // collar may be null; full_q operations then reject. bounds must come from
  // a sample of the same field (standard_sample + validate_bounds).
  PairingCache(const DomainMesh& mesh, const CollarMesh* collar,
               ExponentField field, ExponentBounds bounds);

  const DomainMesh& mesh() const { return *mesh_; }
  const CollarMesh* collar() const { return collar_; }
  const ExponentField& field() const { return field_; }
  const ExponentBounds& bounds() const { return bounds_; }
  const PairTable& table() const { return table_; }

  int components() const { return field_.component_count(); }
  std::size_t node_count() const { return mesh_->nodes.size(); }

  // Per canonical pair, length table().size().
  std::span<const double> exponent(int comp) const { return p_[comp]; }
  std::span<const double> kernel_scale(int comp) const { return scale_[comp]; }

  // Per domain node.
  std::span<const double> p_max_nodes() const { return p_max_; }
  std::span<const double> q_nodes() const { return q_; }
  std::span<const double> r_nodes() const { return r_; }

private:
  const DomainMesh* mesh_;
  const CollarMesh* collar_;
  ExponentField field_;
  ExponentBounds bounds_;
  PairTable table_;
  std::vector<std::vector<double>> p_, scale_;
  std::vector<double> p_max_, q_, r_;
};

}  // namespace anisofrac
