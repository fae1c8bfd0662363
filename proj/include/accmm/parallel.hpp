#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace accmm::par {

// Reductions over fixed-size chunks. Each chunk's partial result is computed
// independently and the partials are combined serially in chunk order, so the
// result is identical for any thread count and for builds without OpenMP.
// Traces produced through these kernels are therefore byte-reproducible.
inline constexpr std::size_t kChunk = 2048;

inline std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

// body(begin, end) -> double partial sum over [begin, end)
template <typename Body>
double chunked_sum(std::size_t n, Body&& body) {
  if (n == 0) return 0.0;
  if (n <= kChunk) return body(std::size_t{0}, n);
  const std::size_t nchunks = chunk_count(n);
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long c = 0; c < static_cast<long>(nchunks); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = std::min(n, b + kChunk);
    partial[static_cast<std::size_t>(c)] = body(b, e);
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

// body(begin, end, acc) accumulates a dim-length partial into acc.
template <typename Body>
std::vector<double> chunked_vec_sum(std::size_t n, std::size_t dim, Body&& body) {
  std::vector<double> out(dim, 0.0);
  if (n == 0) return out;
  if (n <= kChunk) {
    body(std::size_t{0}, n, out.data());
    return out;
  }
  const std::size_t nchunks = chunk_count(n);
  std::vector<double> partial(nchunks * dim, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long c = 0; c < static_cast<long>(nchunks); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = std::min(n, b + kChunk);
    body(b, e, partial.data() + static_cast<std::size_t>(c) * dim);
  }
  for (std::size_t c = 0; c < nchunks; ++c) {
    const double* p = partial.data() + c * dim;
    for (std::size_t i = 0; i < dim; ++i) out[i] += p[i];
  }
  return out;
}

struct SumSq {
  double sum = 0.0;
  double sumsq = 0.0;
};

// body(begin, end, sum, sumsq): accumulates both moments over the chunk.
template <typename Body>
SumSq chunked_sum_sq(std::size_t n, Body&& body) {
  SumSq total;
  if (n == 0) return total;
  const std::size_t nchunks = chunk_count(n);
  std::vector<SumSq> partial(nchunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long c = 0; c < static_cast<long>(nchunks); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = std::min(n, b + kChunk);
    body(b, e, partial[static_cast<std::size_t>(c)].sum, partial[static_cast<std::size_t>(c)].sumsq);
  }
  for (const SumSq& p : partial) {
    total.sum += p.sum;
    total.sumsq += p.sumsq;
  }
  return total;
}

}  // namespace accmm::par
