#include <doctest.h>

#include <cmath>
#include <set>

#include "anisofrac/errors.hpp"
#include "anisofrac/exponent_field.hpp"
#include "anisofrac/expr.hpp"
#include "anisofrac/mesh.hpp"
#include "anisofrac/rng.hpp"
#include "anisofrac/test_functions.hpp"

using namespace anisofrac;

TEST_SUITE("mesh_expr") {

TEST_CASE("mesh nodes are cell centers, axis-0 fastest") {
  const DomainMesh mesh = build_mesh(2, {0.0, 0.0}, {1.0, 2.0}, {4, 8});
  CHECK(mesh.nodes.size() == 32);
  CHECK(mesh.cell_volume == doctest::Approx(0.25 * 0.25).epsilon(1e-15));
  CHECK(mesh.nodes[0][0] == doctest::Approx(0.125));
  CHECK(mesh.nodes[0][1] == doctest::Approx(0.125));
  CHECK(mesh.nodes[1][0] == doctest::Approx(0.375));  // axis 0 advances first
  CHECK(mesh.nodes[1][1] == doctest::Approx(0.125));
  CHECK(mesh.nodes[4][1] == doctest::Approx(0.375));
}

TEST_CASE("mesh rejects degenerate resolutions and boxes") {
  CHECK_THROWS_AS(build_mesh(2, {0.0, 0.0}, {1.0, 1.0}, {1, 4}), BadResolution);
  CHECK_THROWS_AS(build_mesh(2, {0.0, 0.0}, {0.0, 1.0}, {4, 4}), ConfigError);
  CHECK_THROWS_AS(build_mesh(3, {0.0, 0.0}, {1.0, 1.0}, {4, 4}), ConfigError);
}

TEST_CASE("midpoint rule is exact on linear integrands") {
  const DomainMesh mesh = build_mesh(1, {0.0, 0.0}, {1.0, 0.0}, {64, 1});
  const double lin = lebesgue_integral_of(mesh, [](const Point& x) { return x[0]; });
  CHECK(lin == doctest::Approx(0.5).epsilon(1e-14));
  // Quadratic integrand: composite midpoint error is exactly h^2/12 * (b-a) * f''/2.
  const double quad = lebesgue_integral_of(mesh, [](const Point& x) { return x[0] * x[0]; });
  const double h = 1.0 / 64.0;
  CHECK(quad == doctest::Approx(1.0 / 3.0 - h * h / 12.0).epsilon(1e-12));
}

TEST_CASE("collar covers the annulus and excludes the box") {
  const DomainMesh mesh = build_mesh(2, {0.0, 0.0}, {1.0, 1.0}, {4, 4});
  const CollarMesh collar = build_collar(mesh, 3.0, {4, 4});
  CHECK(!collar.nodes.empty());
  for (const Point& y : collar.nodes) {
    const bool inside = y[0] > 0.0 && y[0] < 1.0 && y[1] > 0.0 && y[1] < 1.0;
    CHECK(!inside);
    const double dx = std::max({0.0 - y[0], y[0] - 1.0, 0.0});
    const double dy = std::max({0.0 - y[1], y[1] - 1.0, 0.0});
    CHECK(std::hypot(dx, dy) <= 3.0 + 1e-12);
  }
  CHECK_THROWS_AS(build_collar(mesh, 0.5, {4, 4}), CollarTooSmall);
}

TEST_CASE("expression grammar round-trips and evaluates") {
  const ExprPtr e = parse_exponent("2 + 0.5/(1.0 + dist(x,y))");
  CHECK(e->eval({0.0, 0.0}, {0.0, 0.0}) == doctest::Approx(2.5));
  CHECK(e->eval({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(2.0 + 0.5 / 6.0));
  const ExprPtr round = parse_exponent(e->print());
  CHECK(round->equals(*e));

  const ExprPtr coords = parse_exponent("min(x1 + 2, max(2.5, y2))");
  CHECK(coords->eval({0.25, 0.0}, {0.0, 9.0}) == doctest::Approx(2.25));
  CHECK(coords->max_coord_index() == 2);
  CHECK(coords->depends_on_y());
  CHECK(!parse_exponent("2 + 0.1*x1")->depends_on_y());
}

TEST_CASE("expression errors carry positions and identifiers") {
  CHECK_THROWS_AS(parse_exponent("2 +"), SyntaxError);
  CHECK_THROWS_AS(parse_exponent("2 + frob(1)"), UnknownIdentifier);
  CHECK_THROWS_AS(parse_exponent("x3"), UnknownIdentifier);
  CHECK_THROWS_AS(parse_exponent("clamp(x1, 3, 2)")->eval({0.0, 0.0}, {0.0, 0.0}), EvalError);
  CHECK_THROWS_AS(parse_exponent("1/(x1 - x1)")->eval({1.0, 0.0}, {0.0, 0.0}), EvalError);
}

TEST_CASE("pair exponents are symmetric bitwise") {
  const PairExponent p(parse_exponent("2 + x1/3 + y2/7 + 0.25/(1 + dist(x,y))"));
  const Point a{0.3, 0.8};
  const Point b{0.9, 0.1};
  CHECK(p(a, b) == p(b, a));
}

TEST_CASE("exponent bounds reject non-admissible fields") {
  const DomainMesh mesh = build_mesh(2, {0.0, 0.0}, {1.0, 1.0}, {6, 6});
  ExponentField field;
  field.dimension = 2;
  field.s = 0.5;
  field.components = {PairExponent(parse_exponent("2.0")), PairExponent(parse_exponent("1.0"))};
  field.q = ScalarField(parse_exponent("2.0"));
  field.r = ScalarField(parse_exponent("1.5"));
  const PairSample sample = standard_sample(mesh, nullptr, 200, 7);
  CHECK_THROWS_AS(validate_bounds(field, sample), ExponentOutOfRange);

  field.components[1] = PairExponent(parse_exponent("2.5"));
  const ExponentBounds bounds = validate_bounds(field, sample);
  CHECK(bounds.P_mm == doctest::Approx(2.0));
  CHECK(bounds.P_pp == doctest::Approx(2.5));
  CHECK(bounds.r_plus == doctest::Approx(1.5));
}

TEST_CASE("critical exponent follows the fractional dimension formula") {
  ExponentField field;
  field.dimension = 2;
  field.s = 0.5;
  field.components = {PairExponent(parse_exponent("2.0"))};
  field.q = ScalarField(parse_exponent("2.0"));
  field.r = ScalarField(parse_exponent("1.5"));
  // p = 2, s p = 1 < N = 2: p* = N p / (N - s p) = 4.
  CHECK(critical_exponent(field, 0, {0.5, 0.5}) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(target_exponent_admissible(field, {{0.5, 0.5}}, 0.0));
  CHECK(!target_exponent_admissible(field, {{0.5, 0.5}}, 2.5));

  field.s = 0.9;
  field.components = {PairExponent(parse_exponent("2.5"))};
  CHECK_THROWS_AS(critical_exponent(field, 0, {0.5, 0.5}), SupercriticalOrder);
}

TEST_CASE("lcg matches the documented recurrence") {
  Lcg64 rng(1);
  CHECK(rng.next_u64() == 7806831264735756412ULL);
  CHECK(rng.next_u64() == 9396908728118811419ULL);
  Lcg64 rng2(1);
  CHECK(rng2.next_unit() == doctest::Approx(0.42320917087271326).epsilon(1e-15));
  CHECK(rng2.next_unit() == doctest::Approx(0.5094074428837206).epsilon(1e-15));
  Lcg64 rng42(42);
  CHECK(rng42.next_u64() == 10481999410520546993ULL);
  const double lo = Lcg64(9).next_in(2.0, 3.0);
  CHECK(lo >= 2.0);
  CHECK(lo < 3.0);
}

TEST_CASE("test function factories") {
  const DomainMesh mesh = build_mesh(2, {0.0, 0.0}, {1.0, 1.0}, {8, 8});

  const DiscreteFunction bump = make_bump(mesh, {0.5, 0.5}, 0.25);
  double peak = 0.0;
  for (std::size_t k = 0; k < bump.size(); ++k) {
    peak = std::max(peak, bump[k]);
    const double d = std::hypot(mesh.nodes[k][0] - 0.5, mesh.nodes[k][1] - 0.5);
    if (d >= 0.25) CHECK(bump[k] == 0.0);
    CHECK(bump[k] >= 0.0);
  }
  CHECK(peak > 0.5);

  const DiscreteFunction block = make_block(mesh, {0.25, 0.25}, {0.75, 0.75});
  for (std::size_t k = 0; k < block.size(); ++k)
    CHECK((block[k] == 0.0 || block[k] == 1.0));

  const DiscreteFunction noise = make_random(mesh, 0.5, 11);
  CHECK(noise == make_random(mesh, 0.5, 11));  // seed-deterministic
  for (const double v : noise) CHECK(std::fabs(v) <= 0.5);

  const DiscreteFunction spec = parse_function_spec(mesh, "scaled:2.0:bump:0.5,0.5,0.25");
  for (std::size_t k = 0; k < spec.size(); ++k)
    CHECK(spec[k] == doctest::Approx(2.0 * bump[k]).epsilon(1e-15));

  CHECK_THROWS_AS(parse_function_spec(mesh, "bump:0.5,0.5"), ConfigError);
  CHECK_THROWS_AS(parse_function_spec(mesh, "pyramid:1"), ConfigError);
  CHECK_THROWS_AS(parse_function_spec(mesh, "block:0.5,0.5,0.25,0.75"), ConfigError);

  const auto family = standard_family(mesh, 3, 5);
  CHECK(family.size() == 9);  // three bumps, three blocks, three noise draws
  std::set<std::string> ids;
  for (const auto& f : family) ids.insert(f.id);
  CHECK(ids.size() == family.size());
}

}  // TEST_SUITE
