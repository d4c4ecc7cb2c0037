// Modulars and Luxemburg norms: nodal Lebesgue modulars with variable
// exponent, Gagliardo pair modulars per component, the combined modular, and
// the norms obtained by bisecting the scaling parameter to the unit-modular
// level. All pair sums run over the canonical pair table in chunk order.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "anisofrac/operator_cache.hpp"

namespace anisofrac {

enum class NodalExponent { p_max, q, r };

// sum |w(node)|^{expo(node)} * cell_volume; throws NonFiniteIntegrand if the
// result is not finite.
double lebesgue_modular(const PairingCache& cache, std::span<const double> w,
                        NodalExponent which);

// Luxemburg norm of the nodal Lebesgue modular.
double lebesgue_norm(const PairingCache& cache, std::span<const double> w,
                     NodalExponent which);

// sum over pairs of |w(x)-w(y)|^{p_i} |x-y|^{-(s p_i + N)} * weight.
double gagliardo_modular(const PairingCache& cache, std::span<const double> w,
                         int component, PairDomain mode);

// Luxemburg norm of one Gagliardo modular.
double gagliardo_seminorm(const PairingCache& cache, std::span<const double> w,
                          int component, PairDomain mode);

// Sum of the component seminorms.
double seminorm_total(const PairingCache& cache, std::span<const double> w,
                      PairDomain mode);

// rho0: sum of the component Gagliardo modulars.
double modular_total0(const PairingCache& cache, std::span<const double> w,
                      PairDomain mode);

// rho: modular_total0 plus the p_max Lebesgue modular.
double modular_total(const PairingCache& cache, std::span<const double> w,
                     PairDomain mode);

// seminorm_total plus the p_max Lebesgue norm.
double full_norm_value(const PairingCache& cache, std::span<const double> w,
                       PairDomain mode);

// Luxemburg norm of the combined modular.
double modular_norm(const PairingCache& cache, std::span<const double> w,
                    PairDomain mode);

// Core scaling root: phi must be continuous and strictly decreasing with
// phi(nu) -> 0 as nu -> inf; finds phi(nu*) = 1 by doubling/halving from
// nu = 1 and bisecting to relative width 1e-10. +inf values of phi count as
// "above 1" (overflow on the small-nu side); NaN raises BracketFailure.
double luxemburg_root(const std::function<double(double)>& phi);

struct NormReport {
  PairDomain mode = PairDomain::omega_omega;
  double tail_bound = 0.0;  // full_q only
  double lebesgue_p_max = 0.0;
  std::vector<double> seminorms;
  double seminorm_sum = 0.0;
  double modular_total = 0.0;
  double full_norm = 0.0;
  double modular_norm = 0.0;
};

NormReport compute_norm_report(const PairingCache& cache, std::span<const double> w,
                               PairDomain mode);

struct RelationRow {
  std::string relation;
  int function_id = 0;
  double lhs = 0.0;   // claim is lhs <= rhs
  double rhs = 0.0;
  double slack = 0.0; // (rhs - lhs) / max(1, |lhs|, |rhs|)
  bool pass = false;
};

struct RelationReport {
  std::vector<RelationRow> rows;
  bool all_pass = true;
};

// Norm/modular sandwich relations, the vector-modular upper bounds, the
// unit-modular certificate, and the two-function Holder rows, on each
// function of the set. Slack below -1e-9 fails.
RelationReport check_relations(const PairingCache& cache,
                               const std::vector<DiscreteFunction>& ws,
                               PairDomain mode);

}  // namespace anisofrac
