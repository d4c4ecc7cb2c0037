#pragma once
// Nodal trial functions: smooth bumps, box indicators, seeded random noise,
// and a text mini-syntax for selecting them on the command line:
//   bump:c1[,c2],radius        smooth bump, value 1 at the center
//   block:lo1[,lo2],hi1[,hi2]  indicator of the closed sub-box
//   random:amplitude[,seed]    iid uniform in [-amplitude, amplitude]
//   scaled:factor:inner        factor times any of the above
// Coordinate counts follow the mesh dimension.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "anisofrac/mesh.hpp"

namespace anisofrac {

struct NamedFunction {
  std::string id;
  DiscreteFunction values;
};

// exp(1 - 1/(1 - rho^2)) with rho = |x - center| / radius, zero for rho >= 1.
DiscreteFunction make_bump(const DomainMesh& mesh, const Point& center, double radius);

// Indicator of the closed box [lo, hi] (componentwise, mesh dimension).
DiscreteFunction make_block(const DomainMesh& mesh, const Point& lo, const Point& hi);

// iid uniform nodal values in [-amplitude, amplitude].
DiscreteFunction make_random(const DomainMesh& mesh, double amplitude,
                             std::uint64_t seed);

// Parses the mini-syntax above; throws ConfigValidationError on bad input.
DiscreteFunction parse_function_spec(const DomainMesh& mesh, std::string_view spec);

// Deterministic mixed family: bumps of three widths, blocks of three sizes,
// then `random_count` seeded noise functions. Used for sampling norm
// inequalities and estimating embedding constants.
std::vector<NamedFunction> standard_family(const DomainMesh& mesh, int random_count,
                                           std::uint64_t seed);

}  // namespace anisofrac
