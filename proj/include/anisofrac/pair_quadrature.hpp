// Double integrals over node pairs.
//
// The pair region Q excludes complement-x-complement, so for functions that
// vanish outside the domain
//   integral over Q = integral over Omega x Omega + 2 * Omega x complement,
// and the complement is truncated to the collar B_R \ Omega. The canonical
// pair list is: unordered domain pairs (i < j, lexicographic), then
// domain-collar pairs (domain-major). Domain pairs carry weight 2 vol^2 (both
// orientations of the unordered pair), collar pairs 2 vol cvol (the Q split).
// Same-index pairs are excluded: the principal-value convention on this grid.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "anisofrac/errors.hpp"
#include "anisofrac/mesh.hpp"
#include "anisofrac/reduction.hpp"

namespace anisofrac {

enum class PairDomain { omega_omega, full_q };

struct PairTable {
  const DomainMesh* mesh = nullptr;
  const CollarMesh* collar = nullptr;
  std::vector<std::uint32_t> a;  // domain node index
  std::vector<std::uint32_t> b;  // domain node (k < omega_pairs) or collar node
  std::size_t omega_pairs = 0;
  double weight_omega = 0.0;   // 2 * vol^2
  double weight_collar = 0.0;  // 2 * vol * cvol

  std::size_t size() const { return a.size(); }
  std::size_t count(PairDomain mode) const {
    return mode == PairDomain::omega_omega ? omega_pairs : size();
  }
  const Point& x_of(std::size_t k) const { return mesh->nodes[a[k]]; }
  const Point& y_of(std::size_t k) const {
    return k < omega_pairs ? mesh->nodes[b[k]] : collar->nodes[b[k]];
  }
  double weight(std::size_t k) const {
    return k < omega_pairs ? weight_omega : weight_collar;
  }
};

// collar may be null (omega_omega integrals only).
PairTable build_pair_table(const DomainMesh& mesh, const CollarMesh* collar);

// Midpoint-rule pair integral of kernel(x, y). Domain pairs evaluate both
// orientations (their sum is invariant under swapping the kernel arguments,
// bitwise, by commutativity); collar pairs evaluate one orientation and rely
// on the factor-2 split, so full_q requires a symmetric kernel and a sampled
// spot check enforces it.
template <class K>
double pair_integral(const PairTable& table, PairDomain mode, K&& kernel) {
  if (mode == PairDomain::full_q) {
    if (!table.collar)
      throw ConfigValidationError("full_q integral requires a collar mesh");
    const std::size_t n = table.size();
    const std::size_t checks = std::min<std::size_t>(8, n - table.omega_pairs);
    for (std::size_t i = 0; i < checks; ++i) {
      std::size_t k = table.omega_pairs + i * (n - table.omega_pairs) / (checks ? checks : 1);
      double fwd = kernel(table.x_of(k), table.y_of(k));
      double bwd = kernel(table.y_of(k), table.x_of(k));
      double scale = std::max({1.0, std::fabs(fwd), std::fabs(bwd)});
      if (std::fabs(fwd - bwd) > 1e-12 * scale)
        throw AsymmetricKernel("kernel is not symmetric; the factor-2 complement split needs K(x,y) = K(y,x)");
    }
  }
  const double half_w_omega = 0.5 * table.weight_omega;
  double total = chunked_sum(table.count(mode), [&](std::size_t k) {
    const Point& x = table.x_of(k);
    const Point& y = table.y_of(k);
    double t;
    if (k < table.omega_pairs) {
      t = (kernel(x, y) + kernel(y, x)) * half_w_omega;
    } else {
      t = kernel(x, y) * table.weight_collar;
    }
    if (!std::isfinite(t)) throw NonFiniteIntegrand("non-finite pair integrand");
    return t;
  });
  return total;
}

// Upper bound for the neglected tail beyond the collar radius:
//   vol * max(sup_w, 1)^{p_plus} * sigma_N * 2^{N-1} * (R - diam)^{-s p_minus} / (s p_minus)
// with sigma_N the unit-sphere surface measure (2 and 2 pi). Requires
// R > 2 diam(Omega); the 2^{N-1} factor majorizes the radial Jacobian on that
// range. Returns 0 for sup_w = 0.
double tail_estimate(const DomainMesh& mesh, double radius, double s,
                     double p_minus, double p_plus, double sup_w);

}  // namespace anisofrac
