#include "anisofrac/operator_cache.hpp"

#include <cmath>
#include <string>

#include "anisofrac/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace anisofrac {

PairingCache::PairingCache(const DomainMesh& mesh, const CollarMesh* collar,
                           ExponentField field, ExponentBounds bounds)
    : mesh_(&mesh), collar_(collar), field_(std::move(field)), bounds_(std::move(bounds)),
      table_(build_pair_table(mesh, collar)) {
  const int nc = field_.component_count();
  const std::size_t np = table_.size();
  const double n_dim = mesh.dimension;
  const double s = field_.s;

  p_.assign(nc, std::vector<double>(np));
  scale_.assign(nc, std::vector<double>(np));
  for (int c = 0; c < nc; ++c) {
    const PairExponent& pe = field_.components[c];
    double* pv = p_[c].data();
    double* sv = scale_[c].data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(np); ++k) {
      const Point& x = table_.x_of(k);
      const Point& y = table_.y_of(k);
      double p = pe(x, y);
      double d0 = x[0] - y[0];
      double d1 = x[1] - y[1];
      double dist = std::sqrt(d0 * d0 + d1 * d1);
      pv[k] = p;
      sv[k] = std::pow(dist, -(s * p + n_dim));
    }
    for (std::size_t k = 0; k < np; ++k) {
      if (!(pv[k] > 1.0) || !std::isfinite(pv[k]))
        throw ExponentOutOfRange("cached exponent value outside (1, inf) for component " +
                                 std::to_string(c + 1));
      if (!(sv[k] > 0.0) || !std::isfinite(sv[k]))
        throw NonFiniteIntegrand("kernel distance power not positive and finite");
    }
  }

  const std::size_t m = mesh.nodes.size();
  p_max_.resize(m);
  q_.resize(m);
  r_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    p_max_[k] = p_max_at(field_, mesh.nodes[k]);
    q_[k] = field_.q(mesh.nodes[k]);
    r_[k] = field_.r(mesh.nodes[k]);
  }
}

}  // namespace anisofrac
