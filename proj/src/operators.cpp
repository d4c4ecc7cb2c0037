#include "anisofrac/operators.hpp"

#include <cmath>
#include <string>

#include "anisofrac/errors.hpp"
#include "anisofrac/math_util.hpp"
#include "anisofrac/reduction.hpp"

namespace anisofrac {

namespace {

void check_size(const PairingCache& cache, std::span<const double> w, const char* what) {
  if (w.size() != cache.node_count())
    throw ConfigValidationError(std::string(what) + " size does not match the mesh");
}

double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteIntegrand(std::string("non-finite ") + what);
  return v;
}

void require_collar(const PairingCache& cache, PairDomain mode) {
  if (mode == PairDomain::full_q && !cache.table().collar)
    throw ConfigValidationError("full_q evaluation requires a collar mesh");
}

// Gagliardo part with or without the 1/p factor. Division by the exponent
// happens after the weighted product so that for constant p = 2 every term
// is the exact half of the corresponding modular term.
double gagliardo_energy(const PairingCache& cache, std::span<const double> w,
                        PairDomain mode) {
  const PairTable& t = cache.table();
  const std::uint32_t* a = t.a.data();
  const std::uint32_t* b = t.b.data();
  const std::size_t omega_pairs = t.omega_pairs;
  const double w_omega = t.weight_omega;
  const double w_collar = t.weight_collar;
  double total = 0.0;
  for (int c = 0; c < cache.components(); ++c) {
    const double* p = cache.exponent(c).data();
    const double* D = cache.kernel_scale(c).data();
    total += chunked_sum(t.count(mode), [&](std::size_t k) {
      const double diff = k < omega_pairs ? w[a[k]] - w[b[k]] : w[a[k]];
      const double weight = k < omega_pairs ? w_omega : w_collar;
      return pow_fast(std::fabs(diff), p[k]) * D[k] * weight / p[k];
    });
  }
  return total;
}

double pairing_pairs(const PairingCache& cache, std::span<const double> w,
                     std::span<const double> v, PairDomain mode) {
  const PairTable& t = cache.table();
  const std::uint32_t* a = t.a.data();
  const std::uint32_t* b = t.b.data();
  const std::size_t omega_pairs = t.omega_pairs;
  const double w_omega = t.weight_omega;
  const double w_collar = t.weight_collar;
  double total = 0.0;
  for (int c = 0; c < cache.components(); ++c) {
    const double* p = cache.exponent(c).data();
    const double* D = cache.kernel_scale(c).data();
    total += chunked_sum(t.count(mode), [&](std::size_t k) {
      const bool interior = k < omega_pairs;
      const double dw = interior ? w[a[k]] - w[b[k]] : w[a[k]];
      const double dv = interior ? v[a[k]] - v[b[k]] : v[a[k]];
      const double weight = interior ? w_omega : w_collar;
      return odd_power(dw, p[k]) * dv * D[k] * weight;
    });
  }
  return total;
}

// Scatters signed pair terms odd_power(diff, p) * D * weight into grad, with
// the caller choosing the per-pair weights (variation weights for gradients,
// plain nodal volumes for the pointwise operator). The fill is parallel
// (disjoint slots); the accumulation is serial in table order, so the result
// is independent of the thread count.
void scatter_nonlocal(const PairingCache& cache, std::span<const double> w,
                      PairDomain mode, double w_omega, double w_collar,
                      std::vector<double>& grad, std::vector<double>& contrib) {
  const PairTable& t = cache.table();
  const std::uint32_t* a = t.a.data();
  const std::uint32_t* b = t.b.data();
  const std::size_t omega_pairs = t.omega_pairs;
  const std::size_t count = t.count(mode);
  contrib.resize(count);
  for (int c = 0; c < cache.components(); ++c) {
    const double* p = cache.exponent(c).data();
    const double* D = cache.kernel_scale(c).data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t sk = 0; sk < static_cast<std::ptrdiff_t>(count); ++sk) {
      const auto k = static_cast<std::size_t>(sk);
      const double diff = k < omega_pairs ? w[a[k]] - w[b[k]] : w[a[k]];
      const double weight = k < omega_pairs ? w_omega : w_collar;
      contrib[k] = odd_power(diff, p[k]) * D[k] * weight;
    }
    for (std::size_t k = 0; k < omega_pairs; ++k) {
      grad[a[k]] += contrib[k];
      grad[b[k]] -= contrib[k];
    }
    for (std::size_t k = omega_pairs; k < count; ++k) grad[a[k]] += contrib[k];
  }
}

}  // namespace

double energy_nonlocal(const PairingCache& cache, std::span<const double> w,
                       PairDomain mode) {
  check_size(cache, w, "nodal function");
  require_collar(cache, mode);
  return require_finite(gagliardo_energy(cache, w, mode), "nonlocal energy");
}

double energy_full(const PairingCache& cache, std::span<const double> w, PairDomain mode) {
  check_size(cache, w, "nodal function");
  require_collar(cache, mode);
  const double* p = cache.p_max_nodes().data();
  const double vol = cache.mesh().cell_volume;
  const double local = chunked_sum(w.size(), [&](std::size_t k) {
    return pow_fast(std::fabs(w[k]), p[k]) * vol / p[k];
  });
  return require_finite(gagliardo_energy(cache, w, mode) + local, "full energy");
}

double perturbation_integral(const PairingCache& cache, std::span<const double> w) {
  check_size(cache, w, "nodal function");
  const double* r = cache.r_nodes().data();
  const double vol = cache.mesh().cell_volume;
  return require_finite(chunked_sum(w.size(),
                                    [&](std::size_t k) {
                                      return pow_fast(std::fabs(w[k]), r[k]) * vol / r[k];
                                    }),
                        "perturbation integral");
}

double pairing_nonlocal(const PairingCache& cache, std::span<const double> w,
                        std::span<const double> v, PairDomain mode) {
  check_size(cache, w, "nodal function");
  check_size(cache, v, "test function");
  require_collar(cache, mode);
  return require_finite(pairing_pairs(cache, w, v, mode), "nonlocal pairing");
}

double pairing_full(const PairingCache& cache, std::span<const double> w,
                    std::span<const double> v, PairDomain mode) {
  check_size(cache, w, "nodal function");
  check_size(cache, v, "test function");
  require_collar(cache, mode);
  const double* p = cache.p_max_nodes().data();
  const double vol = cache.mesh().cell_volume;
  const double local = chunked_sum(w.size(), [&](std::size_t k) {
    return odd_power(w[k], p[k]) * v[k] * vol;
  });
  return require_finite(pairing_pairs(cache, w, v, mode) + local, "full pairing");
}

double monotonicity_gap(const PairingCache& cache, std::span<const double> w,
                        std::span<const double> v, PairDomain mode) {
  check_size(cache, w, "nodal function");
  check_size(cache, v, "nodal function");
  require_collar(cache, mode);
  std::vector<double> diff(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) diff[k] = w[k] - v[k];
  const double gap =
      pairing_pairs(cache, w, diff, mode) - pairing_pairs(cache, v, diff, mode);
  return require_finite(gap, "monotonicity gap");
}

double problem_energy(const PairingCache& cache, std::span<const double> w, double lambda,
                      PairDomain mode) {
  const ExponentBounds& bd = cache.bounds();
  if (bd.r_plus >= bd.P_mm)
    throw RExponentTooLarge("perturbation exponent sup " + std::to_string(bd.r_plus) +
                            " must stay below the component exponent floor " +
                            std::to_string(bd.P_mm));
  double value = energy_full(cache, w, mode);
  if (lambda != 0.0) value -= lambda * perturbation_integral(cache, w);
  return require_finite(value, "objective value");
}

void problem_gradient(const PairingCache& cache, std::span<const double> w, double lambda,
                      PairDomain mode, std::vector<double>& grad) {
  check_size(cache, w, "nodal function");
  require_collar(cache, mode);
  const ExponentBounds& bd = cache.bounds();
  if (bd.r_plus >= bd.P_mm)
    throw RExponentTooLarge("perturbation exponent sup " + std::to_string(bd.r_plus) +
                            " must stay below the component exponent floor " +
                            std::to_string(bd.P_mm));
  const std::size_t n = cache.node_count();
  grad.assign(n, 0.0);
  std::vector<double> contrib;
  const PairTable& t = cache.table();
  scatter_nonlocal(cache, w, mode, t.weight_omega, t.weight_collar, grad, contrib);
  const double* pM = cache.p_max_nodes().data();
  const double* r = cache.r_nodes().data();
  const double vol = cache.mesh().cell_volume;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t sk = 0; sk < static_cast<std::ptrdiff_t>(n); ++sk) {
    const auto k = static_cast<std::size_t>(sk);
    double g = grad[k] + odd_power(w[k], pM[k]) * vol;
    if (lambda != 0.0) g -= lambda * odd_power(w[k], r[k]) * vol;
    grad[k] = g;
  }
  for (double g : grad) require_finite(g, "gradient entry");
}

DiscreteFunction apply_operator(const PairingCache& cache, std::span<const double> w,
                                PairDomain mode) {
  check_size(cache, w, "nodal function");
  require_collar(cache, mode);
  DiscreteFunction op(cache.node_count(), 0.0);
  std::vector<double> contrib;
  // Each node integrates over the opposite node of its pairs, so the weights
  // are the plain cell volumes of the y side, one orientation each.
  const double vol = cache.mesh().cell_volume;
  const double cvol = cache.collar() ? cache.collar()->cell_volume : 0.0;
  scatter_nonlocal(cache, w, mode, vol, cvol, op, contrib);
  for (double& v : op) require_finite(v, "operator value");
  return op;
}

}  // namespace anisofrac
