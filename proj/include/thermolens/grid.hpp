#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace thermolens {

// Uniform grid of interior nodes on [0, Lx] (x [0, Ly]). Boundary nodes are
// not stored; every field vanishes there (homogeneous Dirichlet).
struct Grid {
  int dims = 1;
  std::array<int, 2> n{3, 1};
  std::array<double, 2> extent{1.0, 0.0};
  std::array<double, 2> h{0.25, 0.0};

  static Grid line(double length, int nodes);
  static Grid rect(double lx, double ly, int nx, int ny);

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]);
  }
  double cell_volume() const { return dims == 1 ? h[0] : h[0] * h[1]; }
  // Node coordinate along `axis` for interior index i (0-based).
  double coord(int axis, int i) const { return (i + 1) * h[axis]; }
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) * n[1] + j;
  }

  bool operator==(const Grid&) const = default;
};

struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}
  Field(const Grid& g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> span() const { return values; }
  std::span<double> span() { return values; }

  bool operator==(const Field&) const = default;
};

// Samples f(x) or f(x, y) at the interior nodes.
template <class Fn>
Field sample(const Grid& g, Fn&& fn) {
  Field out(g);
  for (int i = 0; i < g.n[0]; ++i) {
    for (int j = 0; j < g.n[1]; ++j) {
      const double x = g.coord(0, i);
      const double y = g.dims == 2 ? g.coord(1, j) : 0.0;
      out[g.index(i, j)] = fn(x, y);
    }
  }
  return out;
}

// Dirichlet sine eigenfunction sin(m pi x / Lx) [* sin(l pi y / Ly)].
Field sine_mode(const Grid& g, int mx, int my = 1);
// Eigenvalue of the discrete laplacian for sine_mode(mx, my); negative.
double discrete_eigenvalue(const Grid& g, int mx, int my = 1);
// Eigenvalue of the continuum laplacian for the same mode; negative.
double continuum_eigenvalue(const Grid& g, int mx, int my = 1);

// How difference operators treat the missing boundary nodes.
enum class Ghost {
  Zero,      // boundary value 0: fields in H^1_0, includes boundary edges
  Interior,  // coefficient fields: only edges between interior nodes
};

// Forward differences on cell edges, one array per axis.
struct EdgeField {
  int dims = 1;
  std::array<std::vector<double>, 2> comp;
};

Field laplacian(const Field& f);
EdgeField gradient(const Field& f, Ghost ghost = Ghost::Zero);

enum class NormKind { L2, Linf, L3, L4, H1semi, H2viaLap, H3viaGradLap };

NormKind parse_norm_kind(std::string_view name);
double norm(const Field& f, NormKind kind);
// Lp norm of a gradient: (sum over components and edges |g|^p dV)^(1/p).
double edge_norm(const EdgeField& g, const Grid& grid, double p);

// sqrt(sum w f^2 dV); throws ValidationError on a negative weight.
double weighted_l2(const Field& f, const Field& w);
// sqrt(sum w_e (grad f)_e^2 dV) with edge weights averaged from w.
double weighted_gradient_l2(const Field& f, const Field& w);

// L2 inner product (quadrature).
double inner(const Field& a, const Field& b);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
double max_abs(const Field& f);

}  // namespace thermolens
