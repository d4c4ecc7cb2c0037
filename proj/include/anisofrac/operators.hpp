#pragma once
// Discrete energies, duality pairings, and gradients for the anisotropic
// nonlocal operator sum plus its variable-exponent local term.
//
// Conventions shared by every kernel here:
//   * functions vanish outside the domain box, so a domain-collar pair
//     contributes the bare nodal value instead of a difference;
//   * pair sums run over the canonical table order and reduce with
//     chunked_sum, so totals do not depend on the OpenMP thread count;
//   * gradients scatter per-pair contributions serially in table order
//     after a parallel fill, which keeps them bitwise reproducible too.

#include <span>
#include <vector>

#include "anisofrac/mesh.hpp"
#include "anisofrac/operator_cache.hpp"
#include "anisofrac/pair_quadrature.hpp"

namespace anisofrac {

// sum_i (1/p_i) Gagliardo modular + (1/p_max) Lebesgue modular.
double energy_full(const PairingCache& cache, std::span<const double> w, PairDomain mode);

// Gagliardo part of energy_full only.
double energy_nonlocal(const PairingCache& cache, std::span<const double> w,
                       PairDomain mode);

// integral of (1/r(x)) |w(x)|^{r(x)} over the domain.
double perturbation_integral(const PairingCache& cache, std::span<const double> w);

// First variation of energy_nonlocal at w in direction v; the 1/p factors
// cancel against the differentiated powers, so none appear here.
double pairing_nonlocal(const PairingCache& cache, std::span<const double> w,
                        std::span<const double> v, PairDomain mode);

// pairing_nonlocal plus the local |w|^{p_max-2} w v term.
double pairing_full(const PairingCache& cache, std::span<const double> w,
                    std::span<const double> v, PairDomain mode);

// <A(w) - A(v), w - v> for the nonlocal part. Nonnegative: the integrand is
// a difference of odd monotone powers evaluated on the same increments.
double monotonicity_gap(const PairingCache& cache, std::span<const double> w,
                        std::span<const double> v, PairDomain mode);

// energy_full - lambda * perturbation_integral. The perturbation exponent must
// stay strictly below every principal exponent; violations raise
// RExponentTooLarge. problem_gradient enforces the same bound.
double problem_energy(const PairingCache& cache, std::span<const double> w, double lambda,
                      PairDomain mode);

// Exact nodal gradient of problem_energy. grad is resized to the node count.
void problem_gradient(const PairingCache& cache, std::span<const double> w, double lambda,
                      PairDomain mode, std::vector<double>& grad);

// Nodal values of the nonlocal operator applied to w: at node x, the sum over
// every other node y (domain, plus collar in full_q mode, where w vanishes) of
// odd_power(w(x) - w(y), p_i(x, y)) * |x - y|^{-(N + s p_i)} * vol(y) across
// components. Both orientations of a pair enter the variation, so
// pairing_nonlocal(w, phi) = 2 sum_k op[k] phi[k] cell_volume for nodal phi.
DiscreteFunction apply_operator(const PairingCache& cache, std::span<const double> w,
                                PairDomain mode);

}  // namespace anisofrac
