#include <doctest.h>

#include <cmath>
#include <limits>

#include "anisofrac/config.hpp"
#include "anisofrac/errors.hpp"
#include "anisofrac/modular.hpp"
#include "anisofrac/pair_quadrature.hpp"
#include "anisofrac/test_functions.hpp"

using namespace anisofrac;

namespace {

RunConfig line_config(int resolution, const std::string& p, double s) {
  RunConfig cfg;
  cfg.dimension = 1;
  cfg.box_min = {0.0};
  cfg.box_max = {1.0};
  cfg.resolution = {resolution};
  cfg.collar_resolution = {resolution};
  cfg.p_exprs = {p};
  cfg.s = s;
  return cfg;
}

RunConfig square_config(const std::vector<std::string>& p) {
  RunConfig cfg;
  cfg.p_exprs = p;
  cfg.resolution = {8, 8};
  return cfg;
}

}  // namespace

TEST_SUITE("modular") {

TEST_CASE("lebesgue modular refines consistently") {
  // Smooth bump, constant exponent: midpoint quadrature error is O(h^2), so
  // resolutions 64 and 256 agree to well under 1e-3 relative.
  const RunConfig coarse_cfg = line_config(64, "2.0", 0.25);
  const RunConfig fine_cfg = line_config(256, "2.0", 0.25);
  const auto coarse = build_instance(coarse_cfg, false);
  const auto fine = build_instance(fine_cfg, false);
  const double mc = lebesgue_modular(*coarse->cache, make_bump(coarse->mesh, {0.5, 0.0}, 0.4),
                                     NodalExponent::p_max);
  const double mf = lebesgue_modular(*fine->cache, make_bump(fine->mesh, {0.5, 0.0}, 0.4),
                                     NodalExponent::p_max);
  CHECK(mc > 0.0);
  CHECK(std::fabs(mc - mf) / mf < 1e-3);
}

TEST_CASE("indicator collar energy matches the closed-form integral") {
  // w = 1 on (0,1), p = 2, s = 0.25, collar radius 3: pairs inside the domain
  // cancel, so the whole-space modular reduces to
  //   2 * Int_0^1 Int_{[-3,4] minus (0,1)} |x-y|^{-1.5} dy dx = 16 (sqrt 3 - 1).
  // Midpoint quadrature of the boundary singularity converges like sqrt(h);
  // at h = 1/64 the observed defect is a few percent.
  const RunConfig cfg = line_config(64, "2.0", 0.25);
  const auto inst = build_instance(cfg, true);
  const DiscreteFunction one(inst->mesh.nodes.size(), 1.0);
  const double omega_part = gagliardo_modular(*inst->cache, one, 0, PairDomain::omega_omega);
  CHECK(omega_part == 0.0);
  const double full = gagliardo_modular(*inst->cache, one, 0, PairDomain::full_q);
  const double exact = 16.0 * (std::sqrt(3.0) - 1.0);
  CHECK(std::fabs(full - exact) / exact < 0.10);
}

TEST_CASE("luxemburg root agrees with the closed form at constant exponent") {
  const auto inst = build_instance(square_config({"2.0", "2.0"}), true);
  const DiscreteFunction w = make_random(inst->mesh, 1.0, 3);

  double sum2 = 0.0;
  for (const double v : w) sum2 += v * v;
  const double exact_leb = std::sqrt(sum2 * inst->mesh.cell_volume);
  const double leb = lebesgue_norm(*inst->cache, w, NodalExponent::p_max);
  CHECK(std::fabs(leb - exact_leb) / exact_leb < 1e-10);

  const double mod = gagliardo_modular(*inst->cache, w, 0, PairDomain::full_q);
  const double semi = gagliardo_seminorm(*inst->cache, w, 0, PairDomain::full_q);
  CHECK(std::fabs(semi - std::sqrt(mod)) / std::sqrt(mod) < 1e-10);
}

TEST_CASE("luxemburg root via an independent decade scan") {
  // Cross-check the bisection against a slow logarithmic sweep + refinement
  // for a genuinely variable exponent.
  const auto inst = build_instance(square_config({"2.0", "2 + 0.5/(1.0 + dist(x,y))"}), true);
  const DiscreteFunction w = make_bump(inst->mesh, {0.4, 0.6}, 0.35);
  const auto phi = [&](double nu) {
    DiscreteFunction scaled(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) scaled[k] = w[k] / nu;
    return gagliardo_modular(*inst->cache, scaled, 1, PairDomain::full_q);
  };
  double lo = 1e-9, hi = 1e9;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = std::sqrt(lo * hi);
    (phi(mid) > 1.0 ? lo : hi) = mid;
  }
  const double scan_root = std::sqrt(lo * hi);
  const double lib_root = gagliardo_seminorm(*inst->cache, w, 1, PairDomain::full_q);
  CHECK(std::fabs(lib_root - scan_root) / scan_root < 1e-9);
}

TEST_CASE("luxemburg norm properties") {
  const auto inst = build_instance(square_config({"2.0", "2.5"}), true);
  const DiscreteFunction v = make_bump(inst->mesh, {0.5, 0.5}, 0.4);
  const DiscreteFunction u = make_random(inst->mesh, 0.7, 21);

  const double nv = modular_norm(*inst->cache, v, PairDomain::full_q);
  DiscreteFunction scaled(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) scaled[k] = -2.5 * v[k];
  // Homogeneity with |c| = 2.5 (bisection resolves roots to ~1e-10 relative).
  CHECK(modular_norm(*inst->cache, scaled, PairDomain::full_q) ==
        doctest::Approx(2.5 * nv).epsilon(1e-9));

  // Triangle inequality.
  DiscreteFunction sum(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) sum[k] = v[k] + u[k];
  const double nu = modular_norm(*inst->cache, u, PairDomain::full_q);
  CHECK(modular_norm(*inst->cache, sum, PairDomain::full_q) <= nv + nu + 1e-9 * (nv + nu));

  // Zero function has zero norm and zero report columns.
  const DiscreteFunction zero(v.size(), 0.0);
  CHECK(modular_norm(*inst->cache, zero, PairDomain::full_q) == 0.0);
  const NormReport rep = compute_norm_report(*inst->cache, zero, PairDomain::full_q);
  CHECK(rep.full_norm == 0.0);
  CHECK(rep.modular_norm == 0.0);

  DiscreteFunction bad = v;
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(modular_norm(*inst->cache, bad, PairDomain::full_q), NumericError);
}

TEST_CASE("norm report is internally consistent") {
  const auto inst = build_instance(square_config({"2.0", "2.5"}), true);
  const DiscreteFunction w = make_bump(inst->mesh, {0.5, 0.5}, 0.4);
  for (const PairDomain mode : {PairDomain::omega_omega, PairDomain::full_q}) {
    const NormReport rep = compute_norm_report(*inst->cache, w, mode);
    double sum = 0.0;
    for (const double s : rep.seminorms) sum += s;
    CHECK(rep.seminorm_sum == doctest::Approx(sum).epsilon(1e-15));
    CHECK(rep.full_norm == doctest::Approx(rep.seminorm_sum + rep.lebesgue_p_max).epsilon(1e-15));
    CHECK(rep.modular_norm <= rep.full_norm * (1.0 + 1e-12));
    CHECK(rep.modular_total == doctest::Approx(modular_total(*inst->cache, w, mode)));
  }
  const NormReport omega = compute_norm_report(*inst->cache, w, PairDomain::omega_omega);
  CHECK(omega.tail_bound == 0.0);
  const NormReport full = compute_norm_report(*inst->cache, w, PairDomain::full_q);
  CHECK(full.tail_bound > 0.0);
}

TEST_CASE("relation suite passes on a mixed family") {
  const auto inst = build_instance(square_config({"2.0", "2 + 0.5/(1.0 + dist(x,y))"}), true);
  std::vector<DiscreteFunction> ws;
  for (const auto& f : standard_family(inst->mesh, 3, 17)) ws.push_back(f.values);
  const RelationReport rep = check_relations(*inst->cache, ws, PairDomain::full_q);
  CHECK(rep.all_pass);
  CHECK(!rep.rows.empty());
  for (const RelationRow& row : rep.rows) {
    CHECK(row.pass);
    CHECK(row.slack >= -1e-9);
  }
}

TEST_CASE("tail bound shrinks with the truncation radius") {
  const DomainMesh mesh = build_mesh(2, {0.0, 0.0}, {1.0, 1.0}, {8, 8});
  const double near = tail_estimate(mesh, 4.0, 0.5, 2.0, 2.5, 1.0);
  const double far = tail_estimate(mesh, 16.0, 0.5, 2.0, 2.5, 1.0);
  CHECK(near > 0.0);
  CHECK(far < near);
  // Doubling the sup scales the p-th powers by at most 2^{p_plus}.
  const double big = tail_estimate(mesh, 4.0, 0.5, 2.0, 2.5, 2.0);
  CHECK(big <= std::pow(2.0, 2.5) * near * (1.0 + 1e-12));
  CHECK(big >= near);
}

}  // TEST_SUITE
