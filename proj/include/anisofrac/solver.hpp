// Mountain-pass side of the discrete problem: empirical embedding constants,
// the admissible-lambda threshold with its rim bound, the negative valley
// inside the ball, projected descent, and a trace diagnostic.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anisofrac/operator_cache.hpp"
#include "anisofrac/test_functions.hpp"

namespace anisofrac {

// Which norm ratio the empirical embedding constant bounds.
enum class EmbeddingTarget : std::uint8_t {
  // |u|_{L^{q(x)}} over the full norm (seminorm sum + Lebesgue p_max norm).
  lebesgue_q_vs_full_norm,
  // |u|_{L^{r(x)}} over the seminorm sum; feeds the lambda threshold.
  lebesgue_r_vs_seminorm,
};

struct EmbeddingSample {
  std::string id;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

struct EmbeddingEstimate {
  EmbeddingTarget target = EmbeddingTarget::lebesgue_q_vs_full_norm;
  double constant = 0.0;  // 1.1 * max sample ratio
  std::vector<EmbeddingSample> samples;
};

// Largest norm ratio over the family, inflated by 1.1. Zero members are
// skipped; a family with no nonzero member raises EmptyFamily. For the
// q target the field must be admissible (strictly below the critical
// exponents at every mesh node), checked here.
EmbeddingEstimate estimate_embedding_constant(const PairingCache& cache,
                                              const std::vector<NamedFunction>& family,
                                              EmbeddingTarget target, PairDomain mode);

// Constants of the minoration J(w) >= C_tilde [w]^{P_tilde} - (lambda C^{r+}/r-) [w]^{r+}
// and the derived threshold. theta_valley stays 0 until verify_negative_valley
// fills it.
struct GeometryConstants {
  double C_embed = 0.0;  // from the samples below
  std::vector<EmbeddingSample> family;
  double C_tilde = 0.0;
  double P_tilde = 0.0;
  double delta = 0.0;
  double lambda_star = 0.0;
  double epsilon_r = 0.0;    // perturbation-exponent window width, > 0
  double theta_valley = 0.0;
};

// C_tilde = min{1/P_+^+, 1/p_M^+} n^{1-P_-^-} 2^{1-P_tilde} with n components,
// P_tilde = min{P_-^-, p_M^-}, lambda_star = C_tilde delta^{P_tilde-r+} r- / (2 C^{r+}).
// Requires r+ < P_tilde (InvalidExponentOrdering otherwise) and a positive
// embedding constant. epsilon_r is half the gap P_-^- - r-, shrunk to the
// oscillation of r over the candidate window when r varies there.
GeometryConstants compute_lambda_star(const PairingCache& cache,
                                      const EmbeddingEstimate& embed, double delta);

struct GeometryCheck {
  double lambda = 0.0;
  double theta_rim = 0.0;        // delta^{r+} (C_tilde delta^{P_tilde-r+} - lambda C^{r+}/r-)
  double theta_rim_naive = 0.0;  // delta / 2, logged for comparison only
  double min_j = 0.0;            // over the sampled directions
  double slack = 0.0;            // min_j - theta_rim
  int samples = 0;
  bool pass = false;
};

// Draws `samples` random directions, rescales each to full norm delta, and
// requires J_lambda >= theta_rim on all of them. Needs 0 < lambda <
// lambda_star; a direction dipping below the rim raises GeometryViolated
// after the sweep completes.
GeometryCheck verify_mountain_geometry(const PairingCache& cache, double lambda,
                                       const GeometryConstants& consts, int samples,
                                       std::uint64_t seed, PairDomain mode);

// Nodal indicator of the window O = {x : r(x) <= r- + epsilon_r}.
DiscreteFunction valley_profile(const PairingCache& cache, double epsilon_r);

struct ValleyResult {
  double theta = 0.0;    // scale certificate in (0, 1)
  double t_used = 0.0;   // accepted multiple of the profile
  double j_value = 0.0;  // J_lambda(t omega), negative
  int halvings = 0;
};

// Certifies a point of negative energy inside the ball: theta =
// min{1, lambda P_-^- int_O |omega|^{r(x)} / (r+ rho(omega))} (1 - 1e-6) with
// rho the full modular, t = theta^{1/(P_-^- - r- - epsilon_r)} / 2, halving t
// until J_lambda(t omega) < 0 (at most 40 times, then ValleyNotFound).
// omega must be in [0, 1], nonzero, and equal to 1 on O. Writes theta into
// consts.theta_valley.
ValleyResult verify_negative_valley(const PairingCache& cache, double lambda,
                                    const DiscreteFunction& omega_profile,
                                    GeometryConstants& consts, PairDomain mode);

struct SolverConfig {
  int max_iter = 10000;
  double grad_tol = 1e-6;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double step_init = 1.0;
  double j_floor = -1e3;      // trace values below this flag divergence
  int log_norm_stride = 25;   // norm columns every this many iterations
};

struct IterationRow {
  int iter = 0;
  double j_value = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;  // last accepted step, 0 before the first
  bool has_norms = false;
  double full_norm = 0.0;
  double seminorm_total = 0.0;
  double minoration_slack = 0.0;  // J - C_tilde [w]^{P_tilde} + lambda C^{r+} [w]^{r+} / r-
};

enum class SolveStatus : std::uint8_t {
  converged,          // gradient below tolerance strictly inside the ball
  boundary_trap,      // gradient converged on the boundary: the ball was too small
  max_iter_exceeded,  // iteration budget or line-search shrink exhausted
};

struct SolutionReport {
  SolveStatus status = SolveStatus::max_iter_exceeded;
  bool success = false;  // converged strictly inside with J < 0 and w != 0
  double lambda = 0.0;
  double j_value = 0.0;
  double grad_norm = 0.0;
  double full_norm = 0.0;
  double ball_radius = 0.0;
  bool inside_ball = false;
  int iterations = 0;
  DiscreteFunction minimizer;
  std::vector<IterationRow> trace;
};

// Projected gradient descent for J_lambda over the closed ball of full-norm
// radius `ball_radius`: Armijo backtracking (sufficient decrease against the
// squared Euclidean gradient norm), then rescaling onto the boundary whenever
// the step leaves the ball. Terminates when both the L2 gradient norm and the
// max gradient entry drop below grad_tol, so the critical-point bound holds
// in every nodal direction. Failure to converge, or convergence on the
// boundary, comes back as the report status with the trace intact; callers
// react (the command line retries a trapped run with a doubled ball). consts
// may be null; it feeds the minoration_slack trace column and the
// ball-exceeds-delta guard.
SolutionReport minimize_in_ball(const PairingCache& cache, double lambda,
                                double ball_radius, const DiscreteFunction& start,
                                const SolverConfig& config,
                                const GeometryConstants* consts, PairDomain mode);

struct PsDiagnostic {
  bool j_bounded = true;      // no trace value below j_floor
  bool grad_converged = false;
  bool monotone = true;       // J non-increasing along the trace
  double min_j = 0.0;
  double min_slack = 0.0;     // over rows with norm columns
  bool diverging = false;     // min_j < j_floor
};

PsDiagnostic ps_diagnostic(const std::vector<IterationRow>& trace,
                           const SolverConfig& config);

}  // namespace anisofrac
