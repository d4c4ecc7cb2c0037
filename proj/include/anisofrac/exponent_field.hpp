// Variable exponent data for the anisotropic fractional problem: one
// symmetrized pair exponent per component, scalar target/reaction exponents,
// sampled bounds, and the critical embedding exponent.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "anisofrac/expr.hpp"
#include "anisofrac/mesh.hpp"

namespace anisofrac {

struct ExponentField {
  std::vector<PairExponent> components;  // symmetrized p_i(x,y)
  ScalarField q;                         // embedding target exponent on the domain
  ScalarField r;                         // reaction exponent on the domain
  double s = 0.5;                        // fractional order, 0 < s < 1
  int dimension = 0;

  int component_count() const { return static_cast<int>(components.size()); }
};

// Pointwise max over components of p_i(x,x).
double p_max_at(const ExponentField& field, const Point& x);

// Sampled exponent extrema. Naming: p_minus/p_plus are per component;
// P_pp = max_i p_plus[i], P_pm = min_i p_plus[i], P_mp = max_i p_minus[i],
// P_mm = min_i p_minus[i]. pM_* are extrema of p_max_at over the diagonal
// sample, q_*/r_* extrema of the scalar fields.
struct ExponentBounds {
  std::vector<double> p_minus, p_plus;
  double P_pp = 0, P_pm = 0, P_mp = 0, P_mm = 0;
  double pM_minus = 0, pM_plus = 0;
  double q_minus = 0, q_plus = 0;
  double r_minus = 0, r_plus = 0;
};

struct PairSample {
  std::vector<std::pair<Point, Point>> pairs;  // off-diagonal evaluation set
  std::vector<Point> points;                   // diagonal evaluation set
};

// All node pairs (domain plus collar nodes, both orders implied by symmetry)
// plus `random_pairs` uniform pairs in the collar ball (or the box when no
// collar is given). Diagonal set: domain nodes plus the random x points.
PairSample standard_sample(const DomainMesh& mesh, const CollarMesh* collar,
                           int random_pairs, std::uint64_t seed);

// Scans the sample; throws ExponentOutOfRange if any sampled component value
// is <= 1 + 1e-9 or non-finite, or a scalar field value is <= 1 + 1e-9.
ExponentBounds validate_bounds(const ExponentField& field, const PairSample& sample);

// p_i(x,x) / (1 - s p_i(x,x) / dimension); throws SupercriticalOrder when
// s * p_i(x,x) >= dimension.
double critical_exponent(const ExponentField& field, int component, const Point& x);

// True if q(x) < min_i critical_exponent_i(x) - margin at every sampled point.
bool target_exponent_admissible(const ExponentField& field,
                                const std::vector<Point>& points, double margin);

}  // namespace anisofrac
