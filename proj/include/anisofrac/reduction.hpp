// Deterministic parallel reduction.
//
// Floating-point addition is not associative, so a naive OpenMP reduction
// gives results that depend on the worker count and schedule. Here the index
// range is split into fixed-size chunks (the chunk size depends only on a
// compile-time constant, never on the number of workers). Each chunk is
// accumulated left-to-right by whichever thread owns it, partials land in a
// buffer indexed by chunk id, and the partials are then combined serially in
// chunk order. The summation tree is therefore a pure function of n, and the
// result is bitwise identical for any OMP_NUM_THREADS, including builds
// without OpenMP.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace anisofrac {

inline constexpr std::size_t kReduceChunk = 4096;

inline std::size_t chunk_count(std::size_t n) {
  return n == 0 ? 0 : (n - 1) / kReduceChunk + 1;
}

// term(k) -> double for k in [0, n); chunk-ordered deterministic sum.
template <class Term>
double chunked_sum(std::size_t n, Term&& term) {
  const std::int64_t chunks = static_cast<std::int64_t>(chunk_count(n));
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kReduceChunk;
    const std::size_t end = begin + kReduceChunk < n ? begin + kReduceChunk : n;
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k) acc += term(k);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Reference accumulation: one straight left-to-right pass, no chunking.
template <class Term>
double serial_sum(std::size_t n, Term&& term) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += term(k);
  return acc;
}

}  // namespace anisofrac
