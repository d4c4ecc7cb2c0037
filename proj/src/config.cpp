#include "anisofrac/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "anisofrac/errors.hpp"
#include "anisofrac/report_io.hpp"

namespace anisofrac {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct RawEntry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

// (section, key) -> entry; duplicates rejected at parse time.
using RawMap = std::map<std::pair<std::string, std::string>, RawEntry>;

constexpr const char* kSections[] = {"domain", "fractional", "exponents",
                                     "problem", "solver", "output"};

RawMap parse_lines(std::string_view text) {
  RawMap raw;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigParseError("line " + std::to_string(line_no) + ": unterminated section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (std::find_if(std::begin(kSections), std::end(kSections),
                       [&](const char* s) { return name == s; }) == std::end(kSections))
        throw ConfigParseError("line " + std::to_string(line_no) + ": unknown section [" + name + "]");
      section = name;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigParseError("line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      throw ConfigParseError("line " + std::to_string(line_no) + ": key outside any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigParseError("line " + std::to_string(line_no) + ": empty key");
    if (value.empty())
      throw ConfigParseError("line " + std::to_string(line_no) + ": empty value for " + key);
    if (!raw.emplace(std::make_pair(section, key), RawEntry{value, line_no, false}).second)
      throw ConfigParseError("line " + std::to_string(line_no) + ": duplicate key " + section +
                             "." + key);
  }
  return raw;
}

[[noreturn]] void fail(const std::string& field, const std::string& reason) {
  throw ConfigValidationError(field + ": " + reason);
}

double to_double(const std::string& field, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || !trim(end).empty()) fail(field, "not a number: '" + text + "'");
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

long long to_int(const std::string& field, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || !trim(end).empty()) fail(field, "not an integer: '" + text + "'");
  return v;
}

std::uint64_t to_u64(const std::string& field, const std::string& text) {
  if (!text.empty() && text.front() == '-') fail(field, "must be nonnegative");
  const char* begin = text.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || !trim(end).empty()) fail(field, "not an integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(field, "not a boolean: '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (in >> part) parts.push_back(part);
  return parts;
}

// Pulls (section, key) if present; `seen` reports whether the file set it.
class Reader {
public:
  Reader(RawMap& raw, RunConfig& cfg) : raw_(raw), cfg_(cfg) {}

  bool fetch(const std::string& section, const std::string& key, std::string& out) {
    auto it = raw_.find({section, key});
    if (it == raw_.end()) return false;
    it->second.consumed = true;
    out = it->second.value;
    return true;
  }

  template <class Parse, class T>
  void field(const std::string& section, const std::string& key, T& slot, Parse parse,
             const std::string& default_text) {
    std::string text;
    if (fetch(section, key, text))
      slot = parse(section + "." + key, text);
    else
      cfg_.defaulted.push_back(section + "." + key + " = " + default_text);
  }

private:
  RawMap& raw_;
  RunConfig& cfg_;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  return out;
}

}  // namespace

bool RunConfig::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig parse_config_text(std::string_view text) {
  RawMap raw = parse_lines(text);
  RunConfig cfg;
  cfg.config_hash = fnv1a64(text);
  Reader rd(raw, cfg);

  auto as_double = [](const std::string& f, const std::string& t) { return to_double(f, t); };
  auto as_u64 = [](const std::string& f, const std::string& t) { return to_u64(f, t); };
  auto as_bool = [](const std::string& f, const std::string& t) { return to_bool(f, t); };
  auto as_int = [](const std::string& f, const std::string& t) {
    const long long v = to_int(f, t);
    if (v < -(1LL << 31) || v > (1LL << 31)) fail(f, "out of range");
    return static_cast<int>(v);
  };
  auto as_string = [](const std::string&, const std::string& t) { return t; };

  // dimension first: list broadcasting depends on it.
  rd.field("domain", "dimension", cfg.dimension, as_int, "2");
  if (cfg.dimension != 1 && cfg.dimension != 2) fail("domain.dimension", "must be 1 or 2");
  const auto dim = static_cast<std::size_t>(cfg.dimension);

  auto as_double_list = [&](const std::string& f, const std::string& t) {
    std::vector<double> out;
    for (const std::string& part : split_list(t)) out.push_back(to_double(f, part));
    if (out.size() == 1 && dim > 1) out.resize(dim, out[0]);
    if (out.size() != dim) fail(f, "needs one value per dimension");
    return out;
  };
  auto as_int_list = [&](const std::string& f, const std::string& t) {
    std::vector<int> out;
    for (const std::string& part : split_list(t)) {
      const long long v = to_int(f, part);
      if (v < -(1LL << 31) || v > (1LL << 31)) fail(f, "out of range");
      out.push_back(static_cast<int>(v));
    }
    if (out.size() == 1 && dim > 1) out.resize(dim, out[0]);
    if (out.size() != dim) fail(f, "needs one value per dimension");
    return out;
  };

  cfg.box_min.resize(dim, 0.0);
  cfg.box_max.resize(dim, 1.0);
  cfg.resolution.resize(dim, 12);
  cfg.collar_resolution.resize(dim, 6);
  rd.field("domain", "box_min", cfg.box_min, as_double_list, join(std::vector<std::string>(dim, "0")));
  rd.field("domain", "box_max", cfg.box_max, as_double_list, join(std::vector<std::string>(dim, "1")));
  rd.field("domain", "resolution", cfg.resolution, as_int_list, join(std::vector<std::string>(dim, "12")));
  rd.field("domain", "collar_radius", cfg.collar_radius, as_double, "3");
  rd.field("domain", "collar_resolution", cfg.collar_resolution, as_int_list,
           join(std::vector<std::string>(dim, "6")));
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(cfg.box_min[i] < cfg.box_max[i])) fail("domain.box_min", "must lie below box_max per axis");
    if (cfg.resolution[i] < 2) fail("domain.resolution", "each axis needs at least 2 cells");
    if (cfg.collar_resolution[i] < 1) fail("domain.collar_resolution", "each axis needs at least 1 cell");
  }
  if (!(cfg.collar_radius > 0.0)) fail("domain.collar_radius", "must be positive");

  rd.field("fractional", "s", cfg.s, as_double, "0.5");
  if (!(cfg.s > 0.0) || !(cfg.s < 1.0)) fail("fractional.s", "must lie in (0,1)");

  // Exponent components p1..pK, contiguous from p1.
  std::map<int, std::string> p_found;
  for (auto& [sk, entry] : raw) {
    if (sk.first != "exponents") continue;
    const std::string& key = sk.second;
    if (key.size() >= 2 && key[0] == 'p' &&
        std::all_of(key.begin() + 1, key.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
      entry.consumed = true;
      p_found[std::atoi(key.c_str() + 1)] = entry.value;
    }
  }
  if (p_found.empty()) {
    cfg.p_exprs.assign(dim, "2.0");
    for (std::size_t i = 0; i < dim; ++i)
      cfg.defaulted.push_back("exponents.p" + std::to_string(i + 1) + " = 2.0");
  } else {
    int expect = 1;
    for (const auto& [idx, expr] : p_found) {
      if (idx != expect)
        fail("exponents.p" + std::to_string(idx), "components must be contiguous from p1");
      cfg.p_exprs.push_back(expr);
      ++expect;
    }
  }
  rd.field("exponents", "q", cfg.q_expr, as_string, "2.0");
  rd.field("exponents", "r", cfg.r_expr, as_string, "1.5");
  rd.field("exponents", "bounds_random_pairs", cfg.bounds_random_pairs, as_int, "2000");
  rd.field("exponents", "bounds_seed", cfg.bounds_seed, as_u64, "777");
  rd.field("exponents", "critical_margin", cfg.critical_margin, as_double, "0");
  rd.field("exponents", "allow_component_mismatch", cfg.allow_component_mismatch, as_bool, "false");
  if (cfg.bounds_random_pairs < 0) fail("exponents.bounds_random_pairs", "must be nonnegative");
  if (cfg.critical_margin < 0.0) fail("exponents.critical_margin", "must be nonnegative");
  if (!cfg.allow_component_mismatch &&
      cfg.p_exprs.size() != static_cast<std::size_t>(cfg.dimension))
    fail("exponents.p" + std::to_string(cfg.p_exprs.size()),
         "expected exactly " + std::to_string(cfg.dimension) +
             " components for dimension " + std::to_string(cfg.dimension) +
             " (set allow_component_mismatch to override)");

  std::string lambda_text;
  cfg.has_lambda = rd.fetch("problem", "lambda", lambda_text);
  if (cfg.has_lambda) cfg.lambda = to_double("problem.lambda", lambda_text);
  std::string frac_text;
  cfg.has_lambda_frac = rd.fetch("problem", "lambda_frac", frac_text);
  if (cfg.has_lambda_frac) cfg.lambda_frac = to_double("problem.lambda_frac", frac_text);
  if (cfg.has_lambda && cfg.has_lambda_frac)
    fail("problem.lambda", "give lambda or lambda_frac, not both");
  if (!cfg.has_lambda && !cfg.has_lambda_frac) {
    cfg.has_lambda_frac = true;
    cfg.lambda_frac = 0.5;
    cfg.defaulted.push_back("problem.lambda_frac = 0.5");
  }
  if (cfg.has_lambda && !(cfg.lambda > 0.0)) fail("problem.lambda", "must be positive");
  if (cfg.has_lambda_frac && (!(cfg.lambda_frac > 0.0) || !(cfg.lambda_frac < 1.0)))
    fail("problem.lambda_frac", "must lie in (0,1)");

  rd.field("solver", "max_iter", cfg.max_iter, as_int, "10000");
  rd.field("solver", "grad_tol", cfg.grad_tol, as_double, "1e-06");
  rd.field("solver", "armijo_c", cfg.armijo_c, as_double, "0.0001");
  rd.field("solver", "armijo_shrink", cfg.armijo_shrink, as_double, "0.5");
  rd.field("solver", "step_init", cfg.step_init, as_double, "1");
  rd.field("solver", "ball_radius", cfg.ball_radius, as_double, "0");
  rd.field("solver", "delta", cfg.delta, as_double, "0.5");
  rd.field("solver", "seed", cfg.seed, as_u64, "42");
  rd.field("solver", "log_norm_stride", cfg.log_norm_stride, as_int, "25");
  rd.field("solver", "j_floor", cfg.j_floor, as_double, "-1000");
  rd.field("solver", "geometry_samples", cfg.geometry_samples, as_int, "16");
  rd.field("solver", "random_functions", cfg.random_functions, as_int, "5");
  {
    std::string text;
    if (rd.fetch("solver", "embed_resolutions", text)) {
      cfg.embed_resolutions.clear();
      for (const std::string& part : split_list(text)) {
        const long long v = to_int("solver.embed_resolutions", part);
        if (v < 2 || v > (1LL << 20)) fail("solver.embed_resolutions", "each entry needs at least 2 cells");
        cfg.embed_resolutions.push_back(static_cast<int>(v));
      }
      if (cfg.embed_resolutions.empty()) fail("solver.embed_resolutions", "needs at least one entry");
    } else {
      cfg.defaulted.push_back("solver.embed_resolutions = 8 16 32");
    }
  }
  if (cfg.max_iter < 0) fail("solver.max_iter", "must be nonnegative");
  if (!(cfg.grad_tol > 0.0)) fail("solver.grad_tol", "must be positive");
  if (!(cfg.armijo_c > 0.0) || !(cfg.armijo_c < 1.0)) fail("solver.armijo_c", "must lie in (0,1)");
  if (!(cfg.armijo_shrink > 0.0) || !(cfg.armijo_shrink < 1.0))
    fail("solver.armijo_shrink", "must lie in (0,1)");
  if (!(cfg.step_init > 0.0)) fail("solver.step_init", "must be positive");
  if (cfg.ball_radius < 0.0) fail("solver.ball_radius", "must be nonnegative (0 means 10 delta)");
  if (!(cfg.delta > 0.0)) fail("solver.delta", "must be positive");
  if (cfg.log_norm_stride < 1) fail("solver.log_norm_stride", "must be at least 1");
  if (cfg.geometry_samples < 1) fail("solver.geometry_samples", "must be at least 1");
  if (cfg.random_functions < 0) fail("solver.random_functions", "must be nonnegative");
  if (!std::isfinite(cfg.j_floor)) fail("solver.j_floor", "must be finite");

  rd.field("output", "directory", cfg.directory, as_string, "out");
  {
    std::string text;
    if (rd.fetch("output", "formats", text)) {
      cfg.formats = split_list(text);
      if (cfg.formats.empty()) fail("output.formats", "needs at least one entry");
      for (const std::string& f : cfg.formats)
        if (f != "csv" && f != "jsonl") fail("output.formats", "unknown format '" + f + "'");
    } else {
      cfg.defaulted.push_back("output.formats = csv jsonl");
    }
  }
  if (cfg.directory.empty()) fail("output.directory", "must be nonempty");

  for (const auto& [sk, entry] : raw)
    if (!entry.consumed)
      throw ConfigParseError("line " + std::to_string(entry.line) + ": unknown key " + sk.first +
                             "." + sk.second);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::unique_ptr<Instance> build_instance(const RunConfig& cfg, bool with_collar,
                                         int resolution_override) {
  auto inst = std::make_unique<Instance>();
  Point bmin{0.0, 0.0};
  Point bmax{0.0, 0.0};
  std::array<int, 2> res{1, 1};
  std::array<int, 2> cres{1, 1};
  for (int i = 0; i < cfg.dimension; ++i) {
    bmin[static_cast<std::size_t>(i)] = cfg.box_min[static_cast<std::size_t>(i)];
    bmax[static_cast<std::size_t>(i)] = cfg.box_max[static_cast<std::size_t>(i)];
    res[static_cast<std::size_t>(i)] =
        resolution_override > 0 ? resolution_override : cfg.resolution[static_cast<std::size_t>(i)];
    cres[static_cast<std::size_t>(i)] = cfg.collar_resolution[static_cast<std::size_t>(i)];
  }
  inst->mesh = build_mesh(cfg.dimension, bmin, bmax, res);
  if (with_collar) {
    inst->collar = build_collar(inst->mesh, cfg.collar_radius, cres);
    inst->has_collar = true;
  }

  ExponentField field;
  for (const std::string& expr : cfg.p_exprs)
    field.components.emplace_back(parse_exponent(expr));
  field.q = ScalarField(parse_exponent(cfg.q_expr));
  field.r = ScalarField(parse_exponent(cfg.r_expr));
  field.s = cfg.s;
  field.dimension = cfg.dimension;

  const PairSample sample =
      standard_sample(inst->mesh, inst->has_collar ? &inst->collar : nullptr,
                      cfg.bounds_random_pairs, cfg.bounds_seed);
  inst->bounds = validate_bounds(field, sample);
  if (!target_exponent_admissible(field, inst->mesh.nodes, cfg.critical_margin))
    throw ConfigValidationError(
        "exponents.q: reaches the critical exponent family on the mesh (margin " +
        std::to_string(cfg.critical_margin) + ")");
  inst->field = field;
  inst->cache = std::make_unique<PairingCache>(
      inst->mesh, inst->has_collar ? &inst->collar : nullptr, std::move(field), inst->bounds);
  return inst;
}

}  // namespace anisofrac
