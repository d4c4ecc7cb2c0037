// Run configuration: INI-style sections with `key = value` lines, `#`
// comments, whitespace-separated lists. Unknown keys are rejected. Every
// field left at its default is echoed in `defaulted` so runs are auditable.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "anisofrac/operator_cache.hpp"

namespace anisofrac {

struct RunConfig {
  // [domain]
  int dimension = 2;
  std::vector<double> box_min{0.0, 0.0};
  std::vector<double> box_max{1.0, 1.0};
  std::vector<int> resolution{12, 12};
  double collar_radius = 3.0;
  std::vector<int> collar_resolution{6, 6};

  // [fractional]
  double s = 0.5;

  // [exponents] expression text, p1..pN plus the scalar fields
  std::vector<std::string> p_exprs;
  std::string q_expr = "2.0";
  std::string r_expr = "1.5";
  int bounds_random_pairs = 2000;
  std::uint64_t bounds_seed = 777;
  double critical_margin = 0.0;
  bool allow_component_mismatch = false;

  // [problem] exactly one of lambda / lambda_frac is active
  bool has_lambda = false;
  double lambda = 0.0;
  bool has_lambda_frac = false;
  double lambda_frac = 0.5;  // lambda = lambda_frac * lambda_star

  // [solver]
  int max_iter = 10000;
  double grad_tol = 1e-6;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double step_init = 1.0;
  double ball_radius = 0.0;  // 0 means 10 * delta
  double delta = 0.5;
  std::uint64_t seed = 42;
  int log_norm_stride = 25;
  double j_floor = -1e3;
  int geometry_samples = 16;
  int random_functions = 5;
  std::vector<int> embed_resolutions{8, 16, 32};

  // [output]
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "jsonl"};

  std::vector<std::string> defaulted;  // "section.key = value" echo lines
  std::uint64_t config_hash = 0;       // FNV-1a over the raw file bytes

  bool wants(std::string_view format) const;
};

// Parse + validate. ConfigParseError carries the line number; validation
// failures name the field, e.g. "fractional.s: must lie in (0,1)".
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(std::string_view text);

// A built instance: mesh, optional collar, exponent field with sampled
// bounds, and the pairing cache. The cache points into this object, so the
// instance lives on the heap and never moves.
struct Instance {
  DomainMesh mesh;
  CollarMesh collar;
  bool has_collar = false;
  ExponentField field;
  ExponentBounds bounds;
  std::unique_ptr<PairingCache> cache;
};

// resolution_override replaces config resolution on every axis when positive.
std::unique_ptr<Instance> build_instance(const RunConfig& cfg, bool with_collar,
                                         int resolution_override = 0);

}  // namespace anisofrac
