#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "anisofrac/config.hpp"
#include "anisofrac/errors.hpp"
#include "anisofrac/modular.hpp"
#include "anisofrac/operators.hpp"
#include "anisofrac/solver.hpp"
#include "anisofrac/test_functions.hpp"

using namespace anisofrac;

namespace {

RunConfig pair_config(int resolution) {
  RunConfig cfg;
  cfg.p_exprs = {"2.0", "2.5"};
  cfg.resolution = {resolution, resolution};
  return cfg;
}

struct Chain {
  std::unique_ptr<Instance> inst;
  EmbeddingEstimate est;
  GeometryConstants consts;
};

Chain make_chain(int resolution, double delta = 0.5) {
  Chain c;
  c.inst = build_instance(pair_config(resolution), true);
  const auto family = standard_family(c.inst->mesh, 3, 42);
  c.est = estimate_embedding_constant(*c.inst->cache, family,
                                      EmbeddingTarget::lebesgue_r_vs_seminorm,
                                      PairDomain::full_q);
  c.consts = compute_lambda_star(*c.inst->cache, c.est, delta);
  return c;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("embedding estimate respects homogeneity") {
  const auto inst = build_instance(pair_config(8), true);
  const DiscreteFunction u = make_bump(inst->mesh, {0.5, 0.5}, 0.4);
  DiscreteFunction u2(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) u2[k] = 2.0 * u[k];
  const std::vector<NamedFunction> family = {{"u", u}, {"2u", u2}};
  for (const EmbeddingTarget target :
       {EmbeddingTarget::lebesgue_q_vs_full_norm, EmbeddingTarget::lebesgue_r_vs_seminorm}) {
    const EmbeddingEstimate est =
        estimate_embedding_constant(*inst->cache, family, target, PairDomain::full_q);
    REQUIRE(est.samples.size() == 2);
    CHECK(est.samples[0].ratio ==
          doctest::Approx(est.samples[1].ratio).epsilon(1e-8));
    CHECK(est.constant == doctest::Approx(1.1 * est.samples[0].ratio).epsilon(1e-8));
    for (const EmbeddingSample& s : est.samples) {
      CHECK(s.ratio > 0.0);
      CHECK(std::isfinite(s.ratio));
    }
  }
}

TEST_CASE("embedding estimate rejects empty families") {
  const auto inst = build_instance(pair_config(6), true);
  CHECK_THROWS_AS(estimate_embedding_constant(*inst->cache, {},
                                              EmbeddingTarget::lebesgue_q_vs_full_norm,
                                              PairDomain::full_q),
                  EmptyFamily);
  const DiscreteFunction zero(inst->mesh.nodes.size(), 0.0);
  CHECK_THROWS_AS(estimate_embedding_constant(*inst->cache, {{"zero", zero}},
                                              EmbeddingTarget::lebesgue_q_vs_full_norm,
                                              PairDomain::full_q),
                  EmptyFamily);
}

TEST_CASE("lambda_star reproduces the closed-form constants") {
  // All-2 instance: P- = p_M = 2 everywhere, two components, so
  //   C_tilde = min(1/2, 1/2) * 2^{1-2} * 2^{1-2} = 1/8  and  P_tilde = 2.
  RunConfig cfg;
  cfg.p_exprs = {"2.0", "2.0"};
  cfg.resolution = {6, 6};
  const auto inst = build_instance(cfg, true);

  EmbeddingEstimate fake;
  fake.target = EmbeddingTarget::lebesgue_r_vs_seminorm;
  fake.constant = 0.5;
  const GeometryConstants g = compute_lambda_star(*inst->cache, fake, 1.0);
  CHECK(g.C_tilde == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.P_tilde == doctest::Approx(2.0).epsilon(1e-15));
  // lambda_star = C_tilde * delta^{P_tilde - r+} * r- / (2 C^{r+}), r = 1.5.
  const double expected = 0.125 * 1.0 * 1.5 / (2.0 * std::pow(0.5, 1.5));
  CHECK(g.lambda_star == doctest::Approx(expected).epsilon(1e-14));

  const GeometryConstants g2 = compute_lambda_star(*inst->cache, fake, 2.0);
  CHECK(g2.lambda_star / g.lambda_star ==
        doctest::Approx(std::pow(2.0, g.P_tilde - 1.5)).epsilon(1e-12));

  CHECK(g.epsilon_r > 0.0);
  CHECK(1.5 + g.epsilon_r <= 2.0 + 1e-15);
}

TEST_CASE("lambda_star rejects a reaction exponent at the floor") {
  RunConfig cfg;
  cfg.p_exprs = {"2.0", "2.0"};
  cfg.resolution = {6, 6};
  cfg.r_expr = "2.0";
  const auto inst = build_instance(cfg, true);
  EmbeddingEstimate fake;
  fake.constant = 0.5;
  CHECK_THROWS_AS(compute_lambda_star(*inst->cache, fake, 1.0), InvalidExponentOrdering);
}

TEST_CASE("mountain geometry holds below lambda_star and rejects beyond") {
  Chain c = make_chain(8);
  const double ls = c.consts.lambda_star;

  const GeometryCheck mid = verify_mountain_geometry(*c.inst->cache, 0.5 * ls, c.consts,
                                                     12, 7, PairDomain::full_q);
  CHECK(mid.pass);
  CHECK(mid.slack > 0.0);
  CHECK(mid.theta_rim > 0.0);
  CHECK(mid.min_j >= mid.theta_rim);
  CHECK(mid.theta_rim_naive == doctest::Approx(c.consts.delta / 2.0));

  // The lambda -> 0 limit of the rim level is C_tilde * delta^{P_tilde}.
  const GeometryCheck low = verify_mountain_geometry(*c.inst->cache, 1e-9 * ls, c.consts,
                                                     8, 7, PairDomain::full_q);
  CHECK(low.pass);
  CHECK(low.theta_rim == doctest::Approx(c.consts.C_tilde *
                                         std::pow(c.consts.delta, c.consts.P_tilde))
                             .epsilon(1e-6));

  CHECK_THROWS_AS(verify_mountain_geometry(*c.inst->cache, 2.0 * ls, c.consts, 8, 7,
                                           PairDomain::full_q),
                  ConfigError);

  // An inflated minoration constant must be caught by the sampled rim.
  GeometryConstants bad = c.consts;
  bad.C_tilde *= 1e6;
  bad.lambda_star *= 1e6;
  CHECK_THROWS_AS(verify_mountain_geometry(*c.inst->cache, 0.5 * ls, bad, 8, 7,
                                           PairDomain::full_q),
                  GeometryViolated);
}

TEST_CASE("negative valley at the prescribed scale") {
  Chain c = make_chain(8);
  const double lambda = 0.5 * c.consts.lambda_star;
  const DiscreteFunction omega = valley_profile(*c.inst->cache, c.consts.epsilon_r);
  CHECK(modular_total0(*c.inst->cache, omega, PairDomain::full_q) > 0.0);

  const ValleyResult valley =
      verify_negative_valley(*c.inst->cache, lambda, omega, c.consts, PairDomain::full_q);
  CHECK(valley.j_value < 0.0);
  CHECK(valley.theta > 0.0);
  CHECK(valley.theta <= 1.0);
  CHECK(valley.t_used > 0.0);
  CHECK(c.consts.theta_valley == valley.theta);

  // With t frozen, J is affine decreasing in lambda.
  DiscreteFunction scaled(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) scaled[k] = valley.t_used * omega[k];
  const double j1 = problem_energy(*c.inst->cache, scaled, lambda, PairDomain::full_q);
  const double j2 = problem_energy(*c.inst->cache, scaled, 2.0 * lambda, PairDomain::full_q);
  CHECK(j2 < j1);

  DiscreteFunction negative = omega;
  negative[0] = -0.25;
  CHECK_THROWS_AS(
      verify_negative_valley(*c.inst->cache, lambda, negative, c.consts, PairDomain::full_q),
      ConfigError);
  const DiscreteFunction zero(omega.size(), 0.0);
  CHECK_THROWS_AS(
      verify_negative_valley(*c.inst->cache, lambda, zero, c.consts, PairDomain::full_q),
      ConfigError);
}

TEST_CASE("descent confirms the trivial minimizer at lambda 0") {
  const auto inst = build_instance(pair_config(6), true);
  const DiscreteFunction zero(inst->mesh.nodes.size(), 0.0);
  SolverConfig sc;
  const SolutionReport rep =
      minimize_in_ball(*inst->cache, 0.0, 1.0, zero, sc, nullptr, PairDomain::full_q);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.j_value == 0.0);
  CHECK(rep.grad_norm == 0.0);
  CHECK(rep.iterations == 0);
  CHECK(!rep.success);  // the zero minimizer is not a nontrivial solution
  for (const double v : rep.minimizer) CHECK(v == 0.0);
}

TEST_CASE("descent run from the valley start") {
  Chain c = make_chain(8);
  const double lambda = 0.5 * c.consts.lambda_star;
  const DiscreteFunction omega = valley_profile(*c.inst->cache, c.consts.epsilon_r);
  const ValleyResult valley =
      verify_negative_valley(*c.inst->cache, lambda, omega, c.consts, PairDomain::full_q);
  DiscreteFunction start(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) start[k] = valley.t_used * omega[k];

  SolverConfig sc;
  sc.max_iter = 4000;
  sc.log_norm_stride = 10;
  const SolutionReport rep = minimize_in_ball(*c.inst->cache, lambda, 10.0 * c.consts.delta,
                                              start, sc, &c.consts, PairDomain::full_q);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.success);
  CHECK(rep.j_value < 0.0);
  CHECK(rep.grad_norm < sc.grad_tol);
  CHECK(rep.inside_ball);
  CHECK(static_cast<int>(rep.trace.size()) == rep.iterations + 1);

  // Monotone energy along accepted iterates and a convergent tail.
  for (std::size_t i = 1; i < rep.trace.size(); ++i)
    CHECK(rep.trace[i].j_value <=
          rep.trace[i - 1].j_value + 1e-12 * std::max(1.0, std::fabs(rep.trace[i - 1].j_value)));
  if (rep.trace.size() >= 100) {
    double lo = rep.trace.back().j_value, hi = lo;
    for (std::size_t i = rep.trace.size() - 100; i < rep.trace.size(); ++i) {
      lo = std::min(lo, rep.trace[i].j_value);
      hi = std::max(hi, rep.trace[i].j_value);
    }
    CHECK(hi - lo <= 1e-12 * std::max(1.0, std::fabs(lo)));
  }

  // Critical-point property, direction by direction.
  std::vector<double> grad;
  problem_gradient(*c.inst->cache, rep.minimizer, lambda, PairDomain::full_q, grad);
  for (const double g : grad) CHECK(std::fabs(g) < sc.grad_tol);

  // Minoration slack stays nonnegative along the logged trajectory.
  const PsDiagnostic diag = ps_diagnostic(rep.trace, sc);
  CHECK(diag.grad_converged);
  CHECK(diag.j_bounded);
  CHECK(diag.monotone);
  CHECK(diag.min_slack >= -1e-9);

  // Sign symmetry: the functional is even, so the mirrored start lands on a
  // critical point at the same level.
  DiscreteFunction neg(start.size());
  for (std::size_t k = 0; k < start.size(); ++k) neg[k] = -start[k];
  const SolutionReport mirror = minimize_in_ball(*c.inst->cache, lambda, 10.0 * c.consts.delta,
                                                 neg, sc, &c.consts, PairDomain::full_q);
  CHECK(std::fabs(mirror.j_value - rep.j_value) <= 1e-8 * std::max(1.0, std::fabs(rep.j_value)));
}

TEST_CASE("nearby lambdas give nearby energies") {
  Chain c = make_chain(8);
  const double lambda = 0.5 * c.consts.lambda_star;
  const DiscreteFunction omega = valley_profile(*c.inst->cache, c.consts.epsilon_r);
  SolverConfig sc;
  double j[2];
  int idx = 0;
  for (const double l : {lambda, 1.01 * lambda}) {
    GeometryConstants consts = c.consts;
    const ValleyResult valley =
        verify_negative_valley(*c.inst->cache, l, omega, consts, PairDomain::full_q);
    DiscreteFunction start(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) start[k] = valley.t_used * omega[k];
    const SolutionReport rep = minimize_in_ball(*c.inst->cache, l, 10.0 * consts.delta, start,
                                                sc, &consts, PairDomain::full_q);
    j[idx++] = rep.j_value;
  }
  CHECK(std::fabs(j[1] - j[0]) <= 0.1 * std::fabs(j[0]));
}

TEST_CASE("a ball smaller than the minimizer traps the descent on its boundary") {
  Chain c = make_chain(6);
  const double lambda = 0.9 * c.consts.lambda_star;
  const DiscreteFunction omega = valley_profile(*c.inst->cache, c.consts.epsilon_r);
  DiscreteFunction start(omega.size());
  const double fn = full_norm_value(*c.inst->cache, omega, PairDomain::full_q);
  const double m = 1e-4;
  for (std::size_t k = 0; k < omega.size(); ++k) start[k] = (m / fn) * omega[k];

  SolverConfig sc;
  sc.max_iter = 200;
  const SolutionReport rep =
      minimize_in_ball(*c.inst->cache, lambda, m, start, sc, nullptr, PairDomain::full_q);
  CHECK(rep.status == SolveStatus::boundary_trap);
  CHECK(!rep.success);
  CHECK(rep.full_norm == doctest::Approx(m).epsilon(1e-9));
}

TEST_CASE("diagnostic flags descent through the energy floor") {
  Chain c = make_chain(6);
  const double lambda = 100.0 * c.consts.lambda_star;
  const DiscreteFunction omega = valley_profile(*c.inst->cache, c.consts.epsilon_r);
  DiscreteFunction start(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) start[k] = 0.01 * omega[k];

  SolverConfig sc;
  sc.max_iter = 60;
  sc.j_floor = -1e3;
  const SolutionReport rep =
      minimize_in_ball(*c.inst->cache, lambda, 50.0, start, sc, nullptr, PairDomain::full_q);
  const PsDiagnostic diag = ps_diagnostic(rep.trace, sc);
  CHECK(diag.diverging);
  CHECK(!diag.j_bounded);
  CHECK(diag.min_j < sc.j_floor);
  CHECK(!rep.success);
}

TEST_CASE("descent rejects malformed calls and stops at max_iter") {
  Chain c = make_chain(6);
  const DiscreteFunction start(c.inst->mesh.nodes.size(), 0.01);
  SolverConfig sc;
  CHECK_THROWS_AS(minimize_in_ball(*c.inst->cache, 0.5, 0.0, start, sc, nullptr,
                                   PairDomain::full_q),
                  ConfigError);
  CHECK_THROWS_AS(minimize_in_ball(*c.inst->cache, 0.5, 0.4 * c.consts.delta, start, sc,
                                   &c.consts, PairDomain::full_q),
                  ConfigError);
  const DiscreteFunction wrong(5, 0.0);
  CHECK_THROWS_AS(minimize_in_ball(*c.inst->cache, 0.5, 1.0, wrong, sc, nullptr,
                                   PairDomain::full_q),
                  ConfigError);

  SolverConfig tight;
  tight.grad_tol = 1e-14;
  tight.max_iter = 3;
  const SolutionReport rep = minimize_in_ball(*c.inst->cache, 0.5 * c.consts.lambda_star,
                                              5.0, start, tight, nullptr, PairDomain::full_q);
  CHECK(rep.status == SolveStatus::max_iter_exceeded);
  CHECK(rep.iterations == 3);
  CHECK(rep.trace.size() == 4);
  CHECK(!rep.success);
}

}  // TEST_SUITE
