#pragma once
// Plain serial re-derivations of the production kernels. Everything here
// walks ordered node pairs in natural loop order, re-evaluates exponents and
// kernel factors from the field on every term, and never touches the cached
// pair table. Tests compare the optimized paths against these within small
// tolerances; the benchmark target uses them as the serial baseline.

#include <span>
#include <vector>

#include "anisofrac/exponent_field.hpp"
#include "anisofrac/mesh.hpp"
#include "anisofrac/modular.hpp"
#include "anisofrac/pair_quadrature.hpp"

namespace anisofrac::ref {

double lebesgue_modular(const DomainMesh& mesh, const ExponentField& field,
                        NodalExponent which, std::span<const double> w);

double gagliardo_modular(const DomainMesh& mesh, const CollarMesh* collar,
                         const ExponentField& field, int component,
                         std::span<const double> w, PairDomain mode);

double modular_total(const DomainMesh& mesh, const CollarMesh* collar,
                     const ExponentField& field, std::span<const double> w,
                     PairDomain mode);

double energy_nonlocal(const DomainMesh& mesh, const CollarMesh* collar,
                       const ExponentField& field, std::span<const double> w,
                       PairDomain mode);

double energy_full(const DomainMesh& mesh, const CollarMesh* collar,
                   const ExponentField& field, std::span<const double> w,
                   PairDomain mode);

double perturbation_integral(const DomainMesh& mesh, const ExponentField& field,
                             std::span<const double> w);

double pairing_nonlocal(const DomainMesh& mesh, const CollarMesh* collar,
                        const ExponentField& field, std::span<const double> w,
                        std::span<const double> v, PairDomain mode);

void problem_gradient(const DomainMesh& mesh, const CollarMesh* collar,
                      const ExponentField& field, std::span<const double> w,
                      double lambda, PairDomain mode, std::vector<double>& grad);

}  // namespace anisofrac::ref
