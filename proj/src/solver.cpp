#include "anisofrac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anisofrac/errors.hpp"
#include "anisofrac/modular.hpp"
#include "anisofrac/operators.hpp"
#include "anisofrac/rng.hpp"

namespace anisofrac {

namespace {

bool is_zero(std::span<const double> w) {
  for (double v : w) {
    if (v != 0.0) return false;
  }
  return true;
}

void check_size(const PairingCache& cache, std::span<const double> w, const char* what) {
  if (w.size() != cache.node_count())
    throw ConfigValidationError(std::string(what) + " has " + std::to_string(w.size()) +
                                " entries, mesh has " + std::to_string(cache.node_count()));
}

}  // namespace

EmbeddingEstimate estimate_embedding_constant(const PairingCache& cache,
                                              const std::vector<NamedFunction>& family,
                                              EmbeddingTarget target, PairDomain mode) {
  if (family.empty()) throw EmptyFamily("embedding family is empty");
  if (target == EmbeddingTarget::lebesgue_q_vs_full_norm &&
      !target_exponent_admissible(cache.field(), cache.mesh().nodes, 0.0))
    throw ConfigValidationError(
        "target exponent reaches the critical exponent family at a mesh node");

  EmbeddingEstimate est;
  est.target = target;
  double max_ratio = 0.0;
  for (const NamedFunction& f : family) {
    check_size(cache, f.values, ("family member " + f.id).c_str());
    if (is_zero(f.values)) continue;
    EmbeddingSample s;
    s.id = f.id;
    if (target == EmbeddingTarget::lebesgue_q_vs_full_norm) {
      s.numerator = lebesgue_norm(cache, f.values, NodalExponent::q);
      s.denominator = full_norm_value(cache, f.values, mode);
    } else {
      s.numerator = lebesgue_norm(cache, f.values, NodalExponent::r);
      s.denominator = seminorm_total(cache, f.values, mode);
    }
    s.ratio = s.numerator / s.denominator;
    max_ratio = std::max(max_ratio, s.ratio);
    est.samples.push_back(std::move(s));
  }
  if (est.samples.empty()) throw EmptyFamily("embedding family has no nonzero member");
  est.constant = 1.1 * max_ratio;
  return est;
}

GeometryConstants compute_lambda_star(const PairingCache& cache,
                                      const EmbeddingEstimate& embed, double delta) {
  if (!(delta > 0.0)) throw ConfigValidationError("rim radius delta must be positive");
  if (!(embed.constant > 0.0))
    throw ConfigValidationError("embedding constant must be positive");
  const ExponentBounds& b = cache.bounds();

  GeometryConstants g;
  g.C_embed = embed.constant;
  g.family = embed.samples;
  g.delta = delta;
  g.P_tilde = std::min(b.P_mm, b.pM_minus);
  if (b.r_plus >= g.P_tilde)
    throw InvalidExponentOrdering("perturbation exponent sup " + std::to_string(b.r_plus) +
                                  " must stay below " + std::to_string(g.P_tilde));
  const auto n = static_cast<double>(cache.components());
  g.C_tilde = std::min(1.0 / b.P_pp, 1.0 / b.pM_plus) * std::pow(n, 1.0 - b.P_mm) *
              std::pow(2.0, 1.0 - g.P_tilde);
  g.lambda_star = g.C_tilde * std::pow(delta, g.P_tilde - b.r_plus) * b.r_minus /
                  (2.0 * std::pow(g.C_embed, b.r_plus));

  // Window width: half the exponent gap, shrunk to the oscillation of r over
  // the candidate window when r actually varies there.
  const double half_gap = 0.5 * (b.P_mm - b.r_minus);
  auto r_nodes = cache.r_nodes();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double rv : r_nodes) {
    if (rv <= b.r_minus + half_gap) {
      lo = std::min(lo, rv);
      hi = std::max(hi, rv);
    }
  }
  const double osc = hi >= lo ? hi - lo : 0.0;
  g.epsilon_r = osc > 0.0 ? std::min(half_gap, osc) : half_gap;
  return g;
}

GeometryCheck verify_mountain_geometry(const PairingCache& cache, double lambda,
                                       const GeometryConstants& consts, int samples,
                                       std::uint64_t seed, PairDomain mode) {
  if (!(lambda > 0.0) || !(lambda < consts.lambda_star))
    throw ConfigValidationError("lambda " + std::to_string(lambda) +
                                " must lie strictly between 0 and the threshold " +
                                std::to_string(consts.lambda_star));
  if (samples <= 0) throw ConfigValidationError("direction sample count must be positive");
  const ExponentBounds& b = cache.bounds();

  GeometryCheck chk;
  chk.lambda = lambda;
  chk.samples = samples;
  chk.theta_rim = std::pow(consts.delta, b.r_plus) *
                  (consts.C_tilde * std::pow(consts.delta, consts.P_tilde - b.r_plus) -
                   lambda * std::pow(consts.C_embed, b.r_plus) / b.r_minus);
  chk.theta_rim_naive = consts.delta / 2.0;

  Lcg64 rng(seed);
  DiscreteFunction w(cache.node_count());
  double min_j = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    double fn = 0.0;
    do {
      for (double& v : w) v = rng.next_in(-1.0, 1.0);
      fn = full_norm_value(cache, w, mode);
    } while (!(fn > 0.0));
    const double scale = consts.delta / fn;
    for (double& v : w) v *= scale;
    min_j = std::min(min_j, problem_energy(cache, w, lambda, mode));
  }
  chk.min_j = min_j;
  chk.slack = min_j - chk.theta_rim;
  chk.pass = chk.slack >= 0.0;
  if (!chk.pass)
    throw GeometryViolated("sampled direction dips below the rim level: min J " +
                           std::to_string(min_j) + " against " +
                           std::to_string(chk.theta_rim));
  return chk;
}

DiscreteFunction valley_profile(const PairingCache& cache, double epsilon_r) {
  if (!(epsilon_r > 0.0)) throw ConfigValidationError("window width must be positive");
  const ExponentBounds& b = cache.bounds();
  auto r_nodes = cache.r_nodes();
  DiscreteFunction omega(cache.node_count(), 0.0);
  for (std::size_t k = 0; k < omega.size(); ++k)
    if (r_nodes[k] <= b.r_minus + epsilon_r) omega[k] = 1.0;
  return omega;
}

ValleyResult verify_negative_valley(const PairingCache& cache, double lambda,
                                    const DiscreteFunction& omega_profile,
                                    GeometryConstants& consts, PairDomain mode) {
  check_size(cache, omega_profile, "valley profile");
  if (!(lambda > 0.0)) throw ConfigValidationError("lambda must be positive");
  if (!(consts.epsilon_r > 0.0))
    throw ConfigValidationError("window width must be positive");
  const ExponentBounds& b = cache.bounds();
  auto r_nodes = cache.r_nodes();

  bool nonzero = false;
  for (std::size_t k = 0; k < omega_profile.size(); ++k) {
    const double v = omega_profile[k];
    if (!(v >= 0.0) || v > 1.0)
      throw ConfigValidationError("valley profile must take values in [0, 1]");
    if (r_nodes[k] <= b.r_minus + consts.epsilon_r && v != 1.0)
      throw ConfigValidationError("valley profile must equal 1 on the window");
    if (v != 0.0) nonzero = true;
  }
  if (!nonzero) throw ConfigValidationError("valley profile is identically zero");

  const double vol = cache.mesh().cell_volume;
  double window_integral = 0.0;
  for (std::size_t k = 0; k < omega_profile.size(); ++k)
    if (r_nodes[k] <= b.r_minus + consts.epsilon_r)
      window_integral += std::pow(omega_profile[k], r_nodes[k]) * vol;
  const double rho = modular_total(cache, omega_profile, mode);
  const double theta =
      std::min(1.0, lambda * b.P_mm * window_integral / (b.r_plus * rho)) * (1.0 - 1e-6);
  if (!(theta > 0.0)) throw ValleyNotFound("scale certificate degenerated to zero");

  const double expo = 1.0 / (b.P_mm - b.r_minus - consts.epsilon_r);
  double t = 0.5 * std::pow(theta, expo);
  DiscreteFunction scaled(omega_profile.size());
  ValleyResult res;
  res.theta = theta;
  for (int halvings = 0; halvings <= 40; ++halvings) {
    for (std::size_t k = 0; k < scaled.size(); ++k) scaled[k] = t * omega_profile[k];
    const double j = problem_energy(cache, scaled, lambda, mode);
    if (j < 0.0) {
      res.t_used = t;
      res.j_value = j;
      res.halvings = halvings;
      consts.theta_valley = theta;
      return res;
    }
    t *= 0.5;
  }
  throw ValleyNotFound("energy stayed nonnegative after 40 halvings of the scale");
}

namespace {

void fill_norm_columns(const PairingCache& cache, std::span<const double> w,
                       double lambda, double j, const GeometryConstants* consts,
                       PairDomain mode, IterationRow& row) {
  const double st = seminorm_total(cache, w, mode);
  row.has_norms = true;
  row.seminorm_total = st;
  row.full_norm = st + lebesgue_norm(cache, w, NodalExponent::p_max);
  if (consts != nullptr) {
    const ExponentBounds& b = cache.bounds();
    row.minoration_slack = j - consts->C_tilde * std::pow(st, consts->P_tilde) +
                           lambda * std::pow(consts->C_embed, b.r_plus) *
                               std::pow(st, b.r_plus) / b.r_minus;
  }
}

}  // namespace

SolutionReport minimize_in_ball(const PairingCache& cache, double lambda,
                                double ball_radius, const DiscreteFunction& start,
                                const SolverConfig& config,
                                const GeometryConstants* consts, PairDomain mode) {
  check_size(cache, start, "start iterate");
  if (!(ball_radius > 0.0)) throw ConfigValidationError("ball radius must be positive");
  if (consts != nullptr && !(ball_radius > consts->delta))
    throw ConfigValidationError("ball radius must exceed the rim radius delta");
  if (config.max_iter < 0 || !(config.grad_tol > 0.0) || !(config.armijo_c > 0.0) ||
      !(config.armijo_shrink > 0.0) || config.armijo_shrink >= 1.0 ||
      !(config.step_init > 0.0) || config.log_norm_stride <= 0)
    throw ConfigValidationError("solver parameters out of range");

  const double vol = cache.mesh().cell_volume;
  DiscreteFunction w = start;
  {
    const double fn = full_norm_value(cache, w, mode);
    if (fn > ball_radius) {
      const double beta = ball_radius / fn;
      for (double& v : w) v *= beta;
    }
  }
  double j = problem_energy(cache, w, lambda, mode);

  SolutionReport rep;
  rep.lambda = lambda;
  rep.ball_radius = ball_radius;
  std::vector<double> grad;
  DiscreteFunction cand(w.size());
  double last_step = 0.0;
  bool converged = false;
  bool stalled = false;
  int iter = 0;
  for (;; ++iter) {
    problem_gradient(cache, w, lambda, mode, grad);
    double g2 = 0.0;
    double gmax = 0.0;
    for (double g : grad) {
      g2 += g * g;
      gmax = std::max(gmax, std::fabs(g));
    }
    const double gnorm = std::sqrt(g2 * vol);

    IterationRow row;
    row.iter = iter;
    row.j_value = j;
    row.grad_norm = gnorm;
    row.step = last_step;
    if (iter % config.log_norm_stride == 0)
      fill_norm_columns(cache, w, lambda, j, consts, mode, row);
    rep.trace.push_back(row);

    if (gnorm < config.grad_tol && gmax < config.grad_tol) {
      converged = true;
      break;
    }
    if (iter >= config.max_iter) break;

    double step = config.step_init;
    bool accepted = false;
    while (step >= 1e-18) {
      for (std::size_t k = 0; k < w.size(); ++k) cand[k] = w[k] - step * grad[k];
      double jc = problem_energy(cache, cand, lambda, mode);
      if (jc <= j - config.armijo_c * step * g2) {
        const double fn = full_norm_value(cache, cand, mode);
        if (fn > ball_radius) {
          const double beta = ball_radius / fn;
          for (double& v : cand) v *= beta;
          jc = problem_energy(cache, cand, lambda, mode);
        }
        w.swap(cand);
        j = jc;
        last_step = step;
        accepted = true;
        break;
      }
      step *= config.armijo_shrink;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
  }

  if (!rep.trace.back().has_norms)
    fill_norm_columns(cache, w, lambda, j, consts, mode, rep.trace.back());
  const double fn = rep.trace.back().full_norm;
  rep.inside_ball = fn <= ball_radius * (1.0 + 1e-12);
  const bool interior = fn < ball_radius * (1.0 - 1e-9);
  // Ending on the boundary, converged or not, signals the ball is too small;
  // the caller's remedy is doubling the radius.
  if (!interior)
    rep.status = SolveStatus::boundary_trap;
  else if (converged && !stalled)
    rep.status = SolveStatus::converged;
  else
    rep.status = SolveStatus::max_iter_exceeded;
  rep.j_value = j;
  rep.grad_norm = rep.trace.back().grad_norm;
  rep.full_norm = fn;
  rep.iterations = iter;
  rep.success = rep.status == SolveStatus::converged && j < 0.0 && !is_zero(w);
  rep.minimizer = std::move(w);
  return rep;
}

PsDiagnostic ps_diagnostic(const std::vector<IterationRow>& trace,
                           const SolverConfig& config) {
  PsDiagnostic d;
  if (trace.empty()) return d;
  double min_j = std::numeric_limits<double>::infinity();
  double min_slack = std::numeric_limits<double>::infinity();
  bool any_slack = false;
  double prev_j = trace.front().j_value;
  for (const IterationRow& row : trace) {
    min_j = std::min(min_j, row.j_value);
    if (row.j_value > prev_j + 1e-12 * std::max(1.0, std::fabs(prev_j))) d.monotone = false;
    prev_j = row.j_value;
    if (row.has_norms) {
      min_slack = std::min(min_slack, row.minoration_slack);
      any_slack = true;
    }
  }
  d.min_j = min_j;
  d.min_slack = any_slack ? min_slack : 0.0;
  d.grad_converged = trace.back().grad_norm < config.grad_tol;
  d.diverging = min_j < config.j_floor;
  d.j_bounded = !d.diverging;
  return d;
}

}  // namespace anisofrac
