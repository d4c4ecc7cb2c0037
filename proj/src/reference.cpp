#include "anisofrac/reference.hpp"

#include <cmath>

namespace anisofrac::ref {

namespace {

double dist(const Point& x, const Point& y) {
  return std::hypot(x[0] - y[0], x[1] - y[1]);
}

double kernel_factor(const ExponentField& field, double p, const Point& x,
                     const Point& y) {
  return std::pow(dist(x, y), -(field.s * p + field.dimension));
}

// |t|^{e} sign(t), continuous through 0 for every e > 0.
double spow(double t, double e) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::fabs(t), e), t);
}

}  // namespace

double lebesgue_modular(const DomainMesh& mesh, const ExponentField& field,
                        NodalExponent which, std::span<const double> w) {
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
    double p;
    switch (which) {
      case NodalExponent::p_max: p = p_max_at(field, mesh.nodes[k]); break;
      case NodalExponent::q: p = field.q(mesh.nodes[k]); break;
      default: p = field.r(mesh.nodes[k]); break;
    }
    total += std::pow(std::fabs(w[k]), p) * mesh.cell_volume;
  }
  return total;
}

double gagliardo_modular(const DomainMesh& mesh, const CollarMesh* collar,
                         const ExponentField& field, int component,
                         std::span<const double> w, PairDomain mode) {
  const PairExponent& pc = field.components[static_cast<std::size_t>(component)];
  const std::size_t n = mesh.nodes.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Point& x = mesh.nodes[i];
      const Point& y = mesh.nodes[j];
      const double p = pc(x, y);
      total += std::pow(std::fabs(w[i] - w[j]), p) * kernel_factor(field, p, x, y) *
               mesh.cell_volume * mesh.cell_volume;
    }
  }
  if (mode == PairDomain::full_q) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const Point& y : collar->nodes) {
        const Point& x = mesh.nodes[i];
        const double p_xy = pc(x, y);
        const double p_yx = pc(y, x);
        const double ww = mesh.cell_volume * collar->cell_volume;
        total += std::pow(std::fabs(w[i]), p_xy) * kernel_factor(field, p_xy, x, y) * ww;
        total += std::pow(std::fabs(0.0 - w[i]), p_yx) *
                 kernel_factor(field, p_yx, y, x) * ww;
      }
    }
  }
  return total;
}

double modular_total(const DomainMesh& mesh, const CollarMesh* collar,
                     const ExponentField& field, std::span<const double> w,
                     PairDomain mode) {
  double total = lebesgue_modular(mesh, field, NodalExponent::p_max, w);
  for (int c = 0; c < field.component_count(); ++c)
    total += gagliardo_modular(mesh, collar, field, c, w, mode);
  return total;
}

double energy_nonlocal(const DomainMesh& mesh, const CollarMesh* collar,
                       const ExponentField& field, std::span<const double> w,
                       PairDomain mode) {
  const std::size_t n = mesh.nodes.size();
  double total = 0.0;
  for (int c = 0; c < field.component_count(); ++c) {
    const PairExponent& pc = field.components[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Point& x = mesh.nodes[i];
        const Point& y = mesh.nodes[j];
        const double p = pc(x, y);
        total += std::pow(std::fabs(w[i] - w[j]), p) * kernel_factor(field, p, x, y) *
                 mesh.cell_volume * mesh.cell_volume / p;
      }
    }
    if (mode == PairDomain::full_q) {
      for (std::size_t i = 0; i < n; ++i) {
        for (const Point& y : collar->nodes) {
          const Point& x = mesh.nodes[i];
          const double p_xy = pc(x, y);
          const double p_yx = pc(y, x);
          const double ww = mesh.cell_volume * collar->cell_volume;
          total += std::pow(std::fabs(w[i]), p_xy) * kernel_factor(field, p_xy, x, y) *
                   ww / p_xy;
          total += std::pow(std::fabs(w[i]), p_yx) * kernel_factor(field, p_yx, y, x) *
                   ww / p_yx;
        }
      }
    }
  }
  return total;
}

double energy_full(const DomainMesh& mesh, const CollarMesh* collar,
                   const ExponentField& field, std::span<const double> w,
                   PairDomain mode) {
  double total = energy_nonlocal(mesh, collar, field, w, mode);
  for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
    const double p = p_max_at(field, mesh.nodes[k]);
    total += std::pow(std::fabs(w[k]), p) * mesh.cell_volume / p;
  }
  return total;
}

double perturbation_integral(const DomainMesh& mesh, const ExponentField& field,
                             std::span<const double> w) {
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
    const double r = field.r(mesh.nodes[k]);
    total += std::pow(std::fabs(w[k]), r) * mesh.cell_volume / r;
  }
  return total;
}

double pairing_nonlocal(const DomainMesh& mesh, const CollarMesh* collar,
                        const ExponentField& field, std::span<const double> w,
                        std::span<const double> v, PairDomain mode) {
  const std::size_t n = mesh.nodes.size();
  double total = 0.0;
  for (int c = 0; c < field.component_count(); ++c) {
    const PairExponent& pc = field.components[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Point& x = mesh.nodes[i];
        const Point& y = mesh.nodes[j];
        const double p = pc(x, y);
        total += spow(w[i] - w[j], p - 1.0) * (v[i] - v[j]) *
                 kernel_factor(field, p, x, y) * mesh.cell_volume * mesh.cell_volume;
      }
    }
    if (mode == PairDomain::full_q) {
      for (std::size_t i = 0; i < n; ++i) {
        for (const Point& y : collar->nodes) {
          const Point& x = mesh.nodes[i];
          const double p_xy = pc(x, y);
          const double p_yx = pc(y, x);
          const double ww = mesh.cell_volume * collar->cell_volume;
          total += spow(w[i], p_xy - 1.0) * v[i] * kernel_factor(field, p_xy, x, y) * ww;
          total += spow(-w[i], p_yx - 1.0) * (-v[i]) *
                   kernel_factor(field, p_yx, y, x) * ww;
        }
      }
    }
  }
  return total;
}

void problem_gradient(const DomainMesh& mesh, const CollarMesh* collar,
                      const ExponentField& field, std::span<const double> w,
                      double lambda, PairDomain mode, std::vector<double>& grad) {
  const std::size_t n = mesh.nodes.size();
  grad.assign(n, 0.0);
  for (int c = 0; c < field.component_count(); ++c) {
    const PairExponent& pc = field.components[static_cast<std::size_t>(c)];
    for (std::size_t k = 0; k < n; ++k) {
      double g = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        const Point& x = mesh.nodes[k];
        const Point& y = mesh.nodes[j];
        // Differentiates both orientations of the ordered pair sum.
        const double p_xy = pc(x, y);
        const double p_yx = pc(y, x);
        g += spow(w[k] - w[j], p_xy - 1.0) * kernel_factor(field, p_xy, x, y) *
             mesh.cell_volume * mesh.cell_volume;
        g += spow(w[k] - w[j], p_yx - 1.0) * kernel_factor(field, p_yx, y, x) *
             mesh.cell_volume * mesh.cell_volume;
      }
      if (mode == PairDomain::full_q) {
        for (const Point& y : collar->nodes) {
          const Point& x = mesh.nodes[k];
          const double p_xy = pc(x, y);
          const double p_yx = pc(y, x);
          const double ww = mesh.cell_volume * collar->cell_volume;
          g += spow(w[k], p_xy - 1.0) * kernel_factor(field, p_xy, x, y) * ww;
          g += spow(w[k], p_yx - 1.0) * kernel_factor(field, p_yx, y, x) * ww;
        }
      }
      grad[k] += g;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double p = p_max_at(field, mesh.nodes[k]);
    grad[k] += spow(w[k], p - 1.0) * mesh.cell_volume;
    if (lambda != 0.0) {
      const double r = field.r(mesh.nodes[k]);
      grad[k] -= lambda * spow(w[k], r - 1.0) * mesh.cell_volume;
    }
  }
}

}  // namespace anisofrac::ref
