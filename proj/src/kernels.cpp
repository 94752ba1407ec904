#include "thermolens/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thermolens::kernels {

namespace {

// Below this many nodes the fork/join cost dominates.
constexpr std::size_t kParallelMin = 8192;

inline double lap_node(const Grid& g, std::span<const double> u, int i, int j,
                       double ihx2, double ihy2) {
  const int nx = g.n[0];
  const int ny = g.n[1];
  const std::size_t c = g.index(i, j);
  const double uc = u[c];
  const double w = i > 0 ? u[c - ny] : 0.0;
  const double e = i + 1 < nx ? u[c + ny] : 0.0;
  double r = (w - 2.0 * uc + e) * ihx2;
  if (g.dims == 2) {
    const double s = j > 0 ? u[c - 1] : 0.0;
    const double nn = j + 1 < ny ? u[c + 1] : 0.0;
    r += (s - 2.0 * uc + nn) * ihy2;
  }
  return r;
}

inline double pow_abs(double v, double p) {
  const double a = std::abs(v);
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  if (p == 4.0) return (a * a) * (a * a);
  if (p == 1.0) return a;
  return std::pow(a, p);
}

template <class ChunkFn>
double chunked_sum(std::size_t n, ChunkFn&& fn) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  const auto nc = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    partial[c] = fn(lo, hi);
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

// Same association as chunked_sum, one chunk after the other.
template <class ChunkFn>
double chunked_sum_serial(std::size_t n, ChunkFn&& fn) {
  double s = 0.0;
  for (std::size_t lo = 0; lo < n; lo += kChunk) s += fn(lo, std::min(n, lo + kChunk));
  return s;
}

}  // namespace

void laplacian(const Grid& g, std::span<const double> in, std::span<double> out) {
  const double ihx2 = 1.0 / (g.h[0] * g.h[0]);
  const double ihy2 = g.dims == 2 ? 1.0 / (g.h[1] * g.h[1]) : 0.0;
  const int nx = g.n[0];
  const int ny = g.n[1];
#pragma omp parallel for schedule(static) if (g.size() >= kParallelMin)
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      out[g.index(i, j)] = lap_node(g, in, i, j, ihx2, ihy2);
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  return chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double sum_pow(std::span<const double> a, double p) {
  return chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += pow_abs(a[i], p);
    return s;
  });
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : m) schedule(static) if (a.size() >= kParallelMin)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelMin)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

void laplacian(const Grid& g, std::span<const double> in, std::span<double> out) {
  const double ihx2 = 1.0 / (g.h[0] * g.h[0]);
  const double ihy2 = g.dims == 2 ? 1.0 / (g.h[1] * g.h[1]) : 0.0;
  for (int i = 0; i < g.n[0]; ++i) {
    for (int j = 0; j < g.n[1]; ++j) {
      out[g.index(i, j)] = lap_node(g, in, i, j, ihx2, ihy2);
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  return chunked_sum_serial(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double sum_pow(std::span<const double> a, double p) {
  return chunked_sum_serial(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += pow_abs(a[i], p);
    return s;
  });
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i] + beta * y[i];
}

}  // namespace serial

}  // namespace thermolens::kernels
