#include "anisofrac/exponent_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "anisofrac/errors.hpp"
#include "anisofrac/rng.hpp"

namespace anisofrac {

namespace {
constexpr double kExponentGuard = 1e-9;  // values must exceed 1 + this
}

double p_max_at(const ExponentField& field, const Point& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (const PairExponent& p : field.components) m = std::max(m, p(x, x));
  return m;
}

PairSample standard_sample(const DomainMesh& mesh, const CollarMesh* collar,
                           int random_pairs, std::uint64_t seed) {
  // Pairs mirror the quadrature support: domain-domain (diagonal included)
  // and domain-collar. Complement-complement pairs lie outside the pair
  // region and are not sampled.
  PairSample sample;
  const std::size_t m = mesh.nodes.size();
  const std::size_t c = collar ? collar->nodes.size() : 0;
  sample.pairs.reserve(m * (m + 1) / 2 + m * c + random_pairs);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      sample.pairs.emplace_back(mesh.nodes[i], mesh.nodes[j]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < c; ++j)
      sample.pairs.emplace_back(mesh.nodes[i], collar->nodes[j]);

  // Random pairs (x in the box, y in the collar ball) catch extrema away
  // from the grid.
  Point lo = mesh.box_min, hi = mesh.box_max;
  if (collar) {
    const Point ctr = mesh.center();
    for (int a = 0; a < mesh.dimension; ++a) {
      lo[a] = ctr[a] - collar->radius;
      hi[a] = ctr[a] + collar->radius;
    }
  }
  Lcg64 rng(seed);
  auto draw_box = [&]() {
    Point p{rng.next_in(mesh.box_min[0], mesh.box_max[0]), 0.0};
    if (mesh.dimension == 2) p[1] = rng.next_in(mesh.box_min[1], mesh.box_max[1]);
    return p;
  };
  auto draw_ball = [&]() {
    Point p{rng.next_in(lo[0], hi[0]), 0.0};
    if (mesh.dimension == 2) p[1] = rng.next_in(lo[1], hi[1]);
    return p;
  };
  sample.points = mesh.nodes;
  for (int k = 0; k < random_pairs; ++k) {
    Point a = draw_box(), b = draw_ball();
    sample.pairs.emplace_back(a, b);
    sample.points.push_back(a);
  }
  return sample;
}

ExponentBounds validate_bounds(const ExponentField& field, const PairSample& sample) {
  if (field.components.empty()) throw ConfigValidationError("no exponent components");
  if (sample.pairs.empty() || sample.points.empty())
    throw ConfigValidationError("empty exponent sample set");

  const double inf = std::numeric_limits<double>::infinity();
  ExponentBounds b;
  b.p_minus.assign(field.components.size(), inf);
  b.p_plus.assign(field.components.size(), -inf);

  for (std::size_t i = 0; i < field.components.size(); ++i) {
    const PairExponent& p = field.components[i];
    for (const auto& [x, y] : sample.pairs) {
      double v = p(x, y);
      if (!std::isfinite(v) || v <= 1.0 + kExponentGuard)
        throw ExponentOutOfRange("component " + std::to_string(i + 1) +
                                 " exponent value " + std::to_string(v) +
                                 " outside (1, inf) at a sampled pair");
      b.p_minus[i] = std::min(b.p_minus[i], v);
      b.p_plus[i] = std::max(b.p_plus[i], v);
    }
  }
  b.P_pp = *std::max_element(b.p_plus.begin(), b.p_plus.end());
  b.P_pm = *std::min_element(b.p_plus.begin(), b.p_plus.end());
  b.P_mp = *std::max_element(b.p_minus.begin(), b.p_minus.end());
  b.P_mm = *std::min_element(b.p_minus.begin(), b.p_minus.end());

  b.pM_minus = inf;
  b.pM_plus = -inf;
  b.q_minus = b.r_minus = inf;
  b.q_plus = b.r_plus = -inf;
  for (const Point& x : sample.points) {
    double pm = p_max_at(field, x);
    b.pM_minus = std::min(b.pM_minus, pm);
    b.pM_plus = std::max(b.pM_plus, pm);
    double qv = field.q(x);
    double rv = field.r(x);
    if (!std::isfinite(qv) || qv <= 1.0 + kExponentGuard)
      throw ExponentOutOfRange("target exponent q outside (1, inf) at a sampled point");
    if (!std::isfinite(rv) || rv <= 1.0 + kExponentGuard)
      throw ExponentOutOfRange("reaction exponent r outside (1, inf) at a sampled point");
    b.q_minus = std::min(b.q_minus, qv);
    b.q_plus = std::max(b.q_plus, qv);
    b.r_minus = std::min(b.r_minus, rv);
    b.r_plus = std::max(b.r_plus, rv);
  }
  return b;
}

double critical_exponent(const ExponentField& field, int component, const Point& x) {
  const PairExponent& p = field.components.at(component);
  double pbar = p(x, x);
  double n = field.dimension;
  if (field.s * pbar >= n)
    throw SupercriticalOrder("s * p(x,x) = " + std::to_string(field.s * pbar) +
                             " >= dimension; critical exponent undefined");
  return pbar / (1.0 - field.s * pbar / n);
}

bool target_exponent_admissible(const ExponentField& field,
                                const std::vector<Point>& points, double margin) {
  for (const Point& x : points) {
    double qv = field.q(x);
    for (int i = 0; i < field.component_count(); ++i) {
      if (!(qv < critical_exponent(field, i, x) - margin)) return false;
    }
  }
  return true;
}

}  // namespace anisofrac
