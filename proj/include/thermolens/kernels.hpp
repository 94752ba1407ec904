#pragma once

// Data-parallel inner loops. Every kernel has a plain serial twin in
// `kernels::serial` that the tests use as the reference.
//
// Reductions are split into fixed-size chunks whose partial sums are
// combined in chunk order, so results do not depend on the thread count.

#include <cstddef>
#include <span>

#include "thermolens/grid.hpp"

namespace thermolens::kernels {

inline constexpr std::size_t kChunk = 2048;

// out = laplacian(in), zero ghosts.
void laplacian(const Grid& g, std::span<const double> in, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
// sum |a|^p
double sum_pow(std::span<const double> a, double p);
double max_abs(std::span<const double> a);
// y = alpha x + beta y
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y);

void set_threads(int threads);
int max_threads();

namespace serial {
void laplacian(const Grid& g, std::span<const double> in, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double sum_pow(std::span<const double> a, double p);
double max_abs(std::span<const double> a);
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y);
}  // namespace serial

}  // namespace thermolens::kernels
