#include "anisofrac/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "anisofrac/errors.hpp"
#include "anisofrac/rng.hpp"

namespace anisofrac {

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

double parse_number(std::string_view token, const std::string& spec) {
  std::string buf(token);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || buf.empty() || !std::isfinite(v))
    throw ConfigValidationError("bad number '" + buf + "' in function spec '" + spec + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

DiscreteFunction make_bump(const DomainMesh& mesh, const Point& center, double radius) {
  if (!(radius > 0.0)) throw ConfigValidationError("bump radius must be positive");
  DiscreteFunction w(mesh.nodes.size(), 0.0);
  for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
    const double dx = mesh.nodes[k][0] - center[0];
    const double dy = mesh.nodes[k][1] - center[1];
    const double rho2 = (dx * dx + dy * dy) / (radius * radius);
    if (rho2 < 1.0) w[k] = std::exp(1.0 - 1.0 / (1.0 - rho2));
  }
  return w;
}

DiscreteFunction make_block(const DomainMesh& mesh, const Point& lo, const Point& hi) {
  for (int d = 0; d < mesh.dimension; ++d)
    if (!(lo[d] < hi[d])) throw ConfigValidationError("block bounds must be ordered");
  DiscreteFunction w(mesh.nodes.size(), 0.0);
  for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
    bool inside = true;
    for (int d = 0; d < mesh.dimension; ++d)
      inside = inside && mesh.nodes[k][d] >= lo[d] && mesh.nodes[k][d] <= hi[d];
    if (inside) w[k] = 1.0;
  }
  return w;
}

DiscreteFunction make_random(const DomainMesh& mesh, double amplitude,
                             std::uint64_t seed) {
  if (!(amplitude > 0.0)) throw ConfigValidationError("random amplitude must be positive");
  Lcg64 rng(seed);
  DiscreteFunction w(mesh.nodes.size());
  for (double& v : w) v = rng.next_in(-amplitude, amplitude);
  return w;
}

DiscreteFunction parse_function_spec(const DomainMesh& mesh, std::string_view spec) {
  const std::string full(spec);
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ConfigValidationError("function spec '" + full + "' has no ':'");
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);

  if (head == "scaled") {
    const std::size_t inner_colon = rest.find(':');
    if (inner_colon == std::string_view::npos)
      throw ConfigValidationError("scaled spec needs 'scaled:factor:inner'");
    const double factor = parse_number(rest.substr(0, inner_colon), full);
    DiscreteFunction w = parse_function_spec(mesh, rest.substr(inner_colon + 1));
    for (double& v : w) v *= factor;
    return w;
  }

  const std::vector<std::string_view> args = split(rest, ',');
  const auto d = static_cast<std::size_t>(mesh.dimension);
  if (head == "bump") {
    if (args.size() != d + 1)
      throw ConfigValidationError("bump spec needs " + std::to_string(d + 1) +
                                  " numbers in '" + full + "'");
    Point center{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) center[i] = parse_number(args[i], full);
    return make_bump(mesh, center, parse_number(args[d], full));
  }
  if (head == "block") {
    if (args.size() != 2 * d)
      throw ConfigValidationError("block spec needs " + std::to_string(2 * d) +
                                  " numbers in '" + full + "'");
    Point lo{0.0, 0.0}, hi{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) lo[i] = parse_number(args[i], full);
    for (std::size_t i = 0; i < d; ++i) hi[i] = parse_number(args[d + i], full);
    return make_block(mesh, lo, hi);
  }
  if (head == "random") {
    if (args.size() != 1 && args.size() != 2)
      throw ConfigValidationError("random spec needs 1 or 2 numbers in '" + full + "'");
    const double amplitude = parse_number(args[0], full);
    std::uint64_t seed = kDefaultSeed;
    if (args.size() == 2) {
      const double s = parse_number(args[1], full);
      if (s < 0.0 || s != std::floor(s))
        throw ConfigValidationError("random seed must be a nonnegative integer");
      seed = static_cast<std::uint64_t>(s);
    }
    return make_random(mesh, amplitude, seed);
  }
  throw ConfigValidationError("unknown function kind '" + std::string(head) + "'");
}

std::vector<NamedFunction> standard_family(const DomainMesh& mesh, int random_count,
                                           std::uint64_t seed) {
  std::vector<NamedFunction> family;
  const Point c = mesh.center();
  double half = 0.5 * (mesh.box_max[0] - mesh.box_min[0]);
  if (mesh.dimension == 2)
    half = std::min(half, 0.5 * (mesh.box_max[1] - mesh.box_min[1]));
  for (double f : {0.9, 0.5, 0.25}) {
    char id[32];
    std::snprintf(id, sizeof id, "bump_%03d", static_cast<int>(f * 100.0 + 0.5));
    family.push_back({id, make_bump(mesh, c, f * half)});
  }
  for (double f : {0.8, 0.5, 0.25}) {
    Point lo{0.0, 0.0}, hi{0.0, 0.0};
    for (int d = 0; d < mesh.dimension; ++d) {
      const double h = 0.5 * f * (mesh.box_max[d] - mesh.box_min[d]);
      lo[d] = c[d] - h;
      hi[d] = c[d] + h;
    }
    char id[32];
    std::snprintf(id, sizeof id, "block_%03d", static_cast<int>(f * 100.0 + 0.5));
    family.push_back({id, make_block(mesh, lo, hi)});
  }
  for (int i = 0; i < random_count; ++i) {
    family.push_back({"random_" + std::to_string(i + 1),
                      make_random(mesh, 1.0, seed + static_cast<std::uint64_t>(i))});
  }
  return family;
}

}  // namespace anisofrac
