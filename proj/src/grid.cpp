#include "thermolens/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "thermolens/errors.hpp"
#include "thermolens/kernels.hpp"

namespace thermolens {

Grid Grid::line(double length, int nodes) {
  if (nodes < 3) throw ValidationError("grid.n", "need at least 3 interior nodes");
  if (!(length > 0.0)) throw ValidationError("grid.length", "must be > 0");
  Grid g;
  g.dims = 1;
  g.n = {nodes, 1};
  g.extent = {length, 0.0};
  g.h = {length / (nodes + 1), 0.0};
  return g;
}

Grid Grid::rect(double lx, double ly, int nx, int ny) {
  if (nx < 3 || ny < 3) throw ValidationError("grid.n", "need at least 3 interior nodes per axis");
  if (!(lx > 0.0) || !(ly > 0.0)) throw ValidationError("grid.length", "must be > 0");
  Grid g;
  g.dims = 2;
  g.n = {nx, ny};
  g.extent = {lx, ly};
  g.h = {lx / (nx + 1), ly / (ny + 1)};
  return g;
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) {
    throw ValidationError("field", "value count " + std::to_string(values.size()) +
                                       " does not match grid size " + std::to_string(g.size()));
  }
}

Field sine_mode(const Grid& g, int mx, int my) {
  const double kx = mx * std::numbers::pi / g.extent[0];
  const double ky = g.dims == 2 ? my * std::numbers::pi / g.extent[1] : 0.0;
  return sample(g, [&](double x, double y) {
    return g.dims == 2 ? std::sin(kx * x) * std::sin(ky * y) : std::sin(kx * x);
  });
}

double discrete_eigenvalue(const Grid& g, int mx, int my) {
  auto axis = [&](int a, int m) {
    const double h = g.h[a];
    return -(2.0 / (h * h)) * (1.0 - std::cos(m * std::numbers::pi * h / g.extent[a]));
  };
  return g.dims == 2 ? axis(0, mx) + axis(1, my) : axis(0, mx);
}

double continuum_eigenvalue(const Grid& g, int mx, int my) {
  const double kx = mx * std::numbers::pi / g.extent[0];
  if (g.dims == 1) return -kx * kx;
  const double ky = my * std::numbers::pi / g.extent[1];
  return -(kx * kx + ky * ky);
}

Field laplacian(const Field& f) {
  Field out(f.grid);
  kernels::laplacian(f.grid, f.span(), out.span());
  return out;
}

EdgeField gradient(const Field& f, Ghost ghost) {
  const Grid& g = f.grid;
  EdgeField out;
  out.dims = g.dims;
  const int nx = g.n[0];
  const int ny = g.n[1];
  const bool zero = ghost == Ghost::Zero;

  // x-edges: between nodes i-1 and i, i = 0..nx (zero) or 1..nx-1 (interior)
  {
    const double ih = 1.0 / g.h[0];
    const int lo = zero ? 0 : 1;
    const int hi = zero ? nx : nx - 1;
    auto& c = out.comp[0];
    c.resize(static_cast<std::size_t>(hi - lo + 1) * ny);
    std::size_t k = 0;
    for (int i = lo; i <= hi; ++i) {
      for (int j = 0; j < ny; ++j) {
        const double right = i < nx ? f[g.index(i, j)] : 0.0;
        const double left = i > 0 ? f[g.index(i - 1, j)] : 0.0;
        c[k++] = (right - left) * ih;
      }
    }
  }
  if (g.dims == 2) {
    const double ih = 1.0 / g.h[1];
    const int lo = zero ? 0 : 1;
    const int hi = zero ? ny : ny - 1;
    auto& c = out.comp[1];
    c.resize(static_cast<std::size_t>(nx) * (hi - lo + 1));
    std::size_t k = 0;
    for (int i = 0; i < nx; ++i) {
      for (int j = lo; j <= hi; ++j) {
        const double up = j < ny ? f[g.index(i, j)] : 0.0;
        const double down = j > 0 ? f[g.index(i, j - 1)] : 0.0;
        c[k++] = (up - down) * ih;
      }
    }
  }
  return out;
}

NormKind parse_norm_kind(std::string_view name) {
  if (name == "L2") return NormKind::L2;
  if (name == "Linf") return NormKind::Linf;
  if (name == "L3") return NormKind::L3;
  if (name == "L4") return NormKind::L4;
  if (name == "H1semi") return NormKind::H1semi;
  if (name == "H2viaLap") return NormKind::H2viaLap;
  if (name == "H3viaGradLap") return NormKind::H3viaGradLap;
  throw ValidationError("norm", "unknown norm kind '" + std::string(name) + "'");
}

namespace {

double lp(const Field& f, double p) {
  return std::pow(kernels::sum_pow(f.span(), p) * f.grid.cell_volume(), 1.0 / p);
}

}  // namespace

double edge_norm(const EdgeField& g, const Grid& grid, double p) {
  double s = 0.0;
  for (int a = 0; a < g.dims; ++a) s += kernels::sum_pow(g.comp[a], p);
  return std::pow(s * grid.cell_volume(), 1.0 / p);
}

double norm(const Field& f, NormKind kind) {
  switch (kind) {
    case NormKind::L2:
      return lp(f, 2.0);
    case NormKind::Linf:
      return kernels::max_abs(f.span());
    case NormKind::L3:
      return lp(f, 3.0);
    case NormKind::L4:
      return lp(f, 4.0);
    case NormKind::H1semi:
      return edge_norm(gradient(f), f.grid, 2.0);
    case NormKind::H2viaLap:
      return lp(laplacian(f), 2.0);
    case NormKind::H3viaGradLap:
      return edge_norm(gradient(laplacian(f)), f.grid, 2.0);
  }
  throw ValidationError("norm", "unknown norm kind");
}

double weighted_l2(const Field& f, const Field& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (w[i] < 0.0) throw ValidationError("weight", "negative energy weight at node " + std::to_string(i));
    s += w[i] * f[i] * f[i];
  }
  return std::sqrt(s * f.grid.cell_volume());
}

double weighted_gradient_l2(const Field& f, const Field& w) {
  const Grid& g = f.grid;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) throw ValidationError("weight", "negative energy weight at node " + std::to_string(i));
  }
  const EdgeField grad = gradient(f, Ghost::Zero);
  const int nx = g.n[0];
  const int ny = g.n[1];
  double s = 0.0;
  // Boundary edges take the weight of their single interior neighbour.
  {
    std::size_t k = 0;
    for (int i = 0; i <= nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const double wl = i > 0 ? w[g.index(i - 1, j)] : w[g.index(i, j)];
        const double wr = i < nx ? w[g.index(i, j)] : w[g.index(i - 1, j)];
        const double d = grad.comp[0][k++];
        s += 0.5 * (wl + wr) * d * d;
      }
    }
  }
  if (g.dims == 2) {
    std::size_t k = 0;
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j <= ny; ++j) {
        const double wd = j > 0 ? w[g.index(i, j - 1)] : w[g.index(i, j)];
        const double wu = j < ny ? w[g.index(i, j)] : w[g.index(i, j - 1)];
        const double d = grad.comp[1][k++];
        s += 0.5 * (wd + wu) * d * d;
      }
    }
  }
  return std::sqrt(s * g.cell_volume());
}

double inner(const Field& a, const Field& b) {
  return kernels::dot(a.span(), b.span()) * a.grid.cell_volume();
}

Field operator+(const Field& a, const Field& b) {
  Field out = b;
  kernels::axpby(1.0, a.span(), 1.0, out.span());
  return out;
}

Field operator-(const Field& a, const Field& b) {
  Field out = b;
  kernels::axpby(1.0, a.span(), -1.0, out.span());
  return out;
}

Field operator*(double s, const Field& a) {
  Field out(a.grid);
  kernels::axpby(s, a.span(), 0.0, out.span());
  return out;
}

double max_abs(const Field& f) { return kernels::max_abs(f.span()); }

}  // namespace thermolens
