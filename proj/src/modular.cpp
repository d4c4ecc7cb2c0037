#include "anisofrac/modular.hpp"

#include <algorithm>
#include <cmath>

#include "anisofrac/errors.hpp"
#include "anisofrac/math_util.hpp"
#include "anisofrac/reduction.hpp"

namespace anisofrac {

namespace {

constexpr double kSlackFloor = -1e-9;

std::span<const double> nodal_exponent(const PairingCache& cache, NodalExponent which) {
  switch (which) {
    case NodalExponent::p_max: return cache.p_max_nodes();
    case NodalExponent::q: return cache.q_nodes();
    case NodalExponent::r: return cache.r_nodes();
  }
  return cache.p_max_nodes();
}

// Raw sums: may overflow to +inf (meaningful inside the Luxemburg bracket).
double lebesgue_raw(const PairingCache& cache, std::span<const double> w,
                    std::span<const double> expo) {
  const double vol = cache.mesh().cell_volume;
  return chunked_sum(w.size(), [&](std::size_t k) {
    return pow_fast(std::fabs(w[k]), expo[k]) * vol;
  });
}

double gagliardo_raw(const PairingCache& cache, std::span<const double> w,
                     int component, PairDomain mode) {
  const PairTable& t = cache.table();
  if (mode == PairDomain::full_q && !t.collar)
    throw ConfigValidationError("full_q modular requires a collar mesh");
  const double* p = cache.exponent(component).data();
  const double* D = cache.kernel_scale(component).data();
  const std::uint32_t* a = t.a.data();
  const std::uint32_t* b = t.b.data();
  const std::size_t omega_pairs = t.omega_pairs;
  const double w_omega = t.weight_omega;
  const double w_collar = t.weight_collar;
  return chunked_sum(t.count(mode), [&](std::size_t k) {
    const double diff = k < omega_pairs ? w[a[k]] - w[b[k]] : w[a[k]];
    const double weight = k < omega_pairs ? w_omega : w_collar;
    return pow_fast(std::fabs(diff), p[k]) * D[k] * weight;
  });
}

bool is_zero(std::span<const double> w) {
  for (double v : w)
    if (v != 0.0) return false;
  return true;
}

void check_size(const PairingCache& cache, std::span<const double> w) {
  if (w.size() != cache.node_count())
    throw ConfigValidationError("nodal function size does not match the mesh");
}

double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteIntegrand(std::string("non-finite ") + what);
  return v;
}

// Luxemburg norm of a scaled-argument modular; handles w = 0.
double scaling_norm(std::span<const double> w,
                    const std::function<double(std::span<const double>)>& modular) {
  if (is_zero(w)) return 0.0;
  std::vector<double> scaled(w.size());
  auto phi = [&](double nu) {
    const double inv = 1.0 / nu;
    for (std::size_t k = 0; k < w.size(); ++k) scaled[k] = w[k] * inv;
    return modular(scaled);
  };
  return luxemburg_root(phi);
}

}  // namespace

double luxemburg_root(const std::function<double(double)>& phi) {
  auto probe = [&](double nu) {
    double v = phi(nu);
    if (std::isnan(v)) throw BracketFailure("modular evaluated to NaN while bracketing");
    return v;
  };
  double lo, hi;
  const double at1 = probe(1.0);
  if (at1 == 1.0) return 1.0;
  if (at1 > 1.0) {
    lo = 1.0;
    hi = 2.0;
    for (int guard = 0;; ++guard) {
      if (probe(hi) <= 1.0) break;
      lo = hi;
      hi *= 2.0;
      if (guard > 1100) throw BracketFailure("modular stayed above 1 at every tested scale");
    }
  } else {
    hi = 1.0;
    lo = 0.5;
    for (int guard = 0;; ++guard) {
      if (probe(lo) >= 1.0) break;
      hi = lo;
      lo *= 0.5;
      if (guard > 1100) throw BracketFailure("modular stayed below 1 at every tested scale");
    }
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double lebesgue_modular(const PairingCache& cache, std::span<const double> w,
                        NodalExponent which) {
  check_size(cache, w);
  return require_finite(lebesgue_raw(cache, w, nodal_exponent(cache, which)),
                        "Lebesgue modular");
}

double lebesgue_norm(const PairingCache& cache, std::span<const double> w,
                     NodalExponent which) {
  check_size(cache, w);
  auto expo = nodal_exponent(cache, which);
  return scaling_norm(w, [&](std::span<const double> v) {
    return lebesgue_raw(cache, v, expo);
  });
}

double gagliardo_modular(const PairingCache& cache, std::span<const double> w,
                         int component, PairDomain mode) {
  check_size(cache, w);
  return require_finite(gagliardo_raw(cache, w, component, mode), "Gagliardo modular");
}

double gagliardo_seminorm(const PairingCache& cache, std::span<const double> w,
                          int component, PairDomain mode) {
  check_size(cache, w);
  return scaling_norm(w, [&](std::span<const double> v) {
    return gagliardo_raw(cache, v, component, mode);
  });
}

double seminorm_total(const PairingCache& cache, std::span<const double> w,
                      PairDomain mode) {
  double total = 0.0;
  for (int c = 0; c < cache.components(); ++c)
    total += gagliardo_seminorm(cache, w, c, mode);
  return total;
}

double modular_total0(const PairingCache& cache, std::span<const double> w,
                      PairDomain mode) {
  check_size(cache, w);
  double total = 0.0;
  for (int c = 0; c < cache.components(); ++c)
    total += require_finite(gagliardo_raw(cache, w, c, mode), "Gagliardo modular");
  return total;
}

double modular_total(const PairingCache& cache, std::span<const double> w,
                     PairDomain mode) {
  return modular_total0(cache, w, mode) +
         require_finite(lebesgue_raw(cache, w, cache.p_max_nodes()), "Lebesgue modular");
}

double full_norm_value(const PairingCache& cache, std::span<const double> w,
                       PairDomain mode) {
  return seminorm_total(cache, w, mode) + lebesgue_norm(cache, w, NodalExponent::p_max);
}

double modular_norm(const PairingCache& cache, std::span<const double> w,
                    PairDomain mode) {
  check_size(cache, w);
  return scaling_norm(w, [&](std::span<const double> v) {
    double total = lebesgue_raw(cache, v, cache.p_max_nodes());
    for (int c = 0; c < cache.components(); ++c)
      total += gagliardo_raw(cache, v, c, mode);
    return total;
  });
}

NormReport compute_norm_report(const PairingCache& cache, std::span<const double> w,
                               PairDomain mode) {
  check_size(cache, w);
  NormReport rep;
  rep.mode = mode;
  rep.lebesgue_p_max = lebesgue_norm(cache, w, NodalExponent::p_max);
  for (int c = 0; c < cache.components(); ++c)
    rep.seminorms.push_back(gagliardo_seminorm(cache, w, c, mode));
  for (double s : rep.seminorms) rep.seminorm_sum += s;
  rep.modular_total = anisofrac::modular_total(cache, w, mode);
  rep.full_norm = rep.seminorm_sum + rep.lebesgue_p_max;
  rep.modular_norm = anisofrac::modular_norm(cache, w, mode);
  if (mode == PairDomain::full_q) {
    double sup = 0.0;
    for (double v : w) sup = std::max(sup, std::fabs(v));
    const ExponentBounds& b = cache.bounds();
    rep.tail_bound = tail_estimate(cache.mesh(), cache.collar()->radius, cache.field().s,
                                   b.P_mm, b.P_pp, sup);
  }
  return rep;
}

namespace {

double rel_slack(double lhs, double rhs) {
  return (rhs - lhs) / std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

void add_row(RelationReport& rep, const std::string& name, int id, double lhs, double rhs) {
  RelationRow row;
  row.relation = name;
  row.function_id = id;
  row.lhs = lhs;
  row.rhs = rhs;
  row.slack = rel_slack(lhs, rhs);
  row.pass = row.slack >= kSlackFloor;
  if (!row.pass) rep.all_pass = false;
  rep.rows.push_back(row);
}

// norm-vs-modular sandwich for a norm with exponent range [e_minus, e_plus]:
// above 1, norm^{e-} <= modular <= norm^{e+}; below 1, reversed.
void sandwich_rows(RelationReport& rep, const std::string& name, int id, double norm,
                   double modular, double e_minus, double e_plus) {
  if (norm > 1.0) {
    add_row(rep, name + "_lower", id, std::pow(norm, e_minus), modular);
    add_row(rep, name + "_upper", id, modular, std::pow(norm, e_plus));
  } else if (norm > 0.0) {
    add_row(rep, name + "_lower", id, std::pow(norm, e_plus), modular);
    add_row(rep, name + "_upper", id, modular, std::pow(norm, e_minus));
  }
}

}  // namespace

RelationReport check_relations(const PairingCache& cache,
                               const std::vector<DiscreteFunction>& ws,
                               PairDomain mode) {
  RelationReport rep;
  const ExponentBounds& b = cache.bounds();
  std::vector<double> scratch;

  for (std::size_t i = 0; i < ws.size(); ++i) {
    const DiscreteFunction& w = ws[i];
    const int id = static_cast<int>(i);
    check_size(cache, w);
    if (is_zero(w)) continue;

    // Lebesgue norm with the p_max exponent.
    const double ln = lebesgue_norm(cache, w, NodalExponent::p_max);
    const double lm = lebesgue_modular(cache, w, NodalExponent::p_max);
    sandwich_rows(rep, "lebesgue_p_max_sandwich", id, ln, lm, b.pM_minus, b.pM_plus);

    // Unit-modular certificate: modular at w / norm is 1 within 1e-8.
    scratch.assign(w.begin(), w.end());
    for (double& v : scratch) v /= ln;
    const double unit = lebesgue_modular(cache, scratch, NodalExponent::p_max);
    add_row(rep, "lebesgue_unit_modular_lower", id, 1.0 - 1e-8, unit);
    add_row(rep, "lebesgue_unit_modular_upper", id, unit, 1.0 + 1e-8);

    // Per-component Gagliardo sandwiches; the roots and modulars feed the
    // vector bound below, so compute each only once.
    double st = 0.0;
    double rho0 = 0.0;
    for (int c = 0; c < cache.components(); ++c) {
      const double sn = gagliardo_seminorm(cache, w, c, mode);
      const double gm = gagliardo_modular(cache, w, c, mode);
      sandwich_rows(rep, "gagliardo_sandwich_c" + std::to_string(c + 1), id, sn, gm,
                    b.p_minus[c], b.p_plus[c]);
      st += sn;
      rho0 += gm;
    }

    // Vector modular upper bounds against the summed seminorm.
    if (st >= 1.0)
      add_row(rep, "vector_modular_upper", id, rho0, std::pow(st, b.P_pp));
    else
      add_row(rep, "vector_modular_upper", id, rho0, st);
  }

  // Holder rows on consecutive function pairs, with the conjugate target field.
  std::vector<double> conj(cache.node_count());
  auto qn = cache.q_nodes();
  for (std::size_t k = 0; k < conj.size(); ++k) conj[k] = qn[k] / (qn[k] - 1.0);
  const double vol = cache.mesh().cell_volume;
  for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
    const DiscreteFunction& v = ws[i];
    const DiscreteFunction& w = ws[i + 1];
    if (is_zero(v) || is_zero(w)) continue;
    const double prod = chunked_sum(v.size(), [&](std::size_t k) { return v[k] * w[k] * vol; });
    const double nv = lebesgue_norm(cache, v, NodalExponent::q);
    std::vector<double> wc(w.begin(), w.end());
    const double nw = scaling_norm(wc, [&](std::span<const double> u) {
      return lebesgue_raw(cache, u, conj);
    });
    add_row(rep, "holder_pairing", static_cast<int>(i), std::fabs(prod), 2.0 * nv * nw);
  }
  return rep;
}

}  // namespace anisofrac
