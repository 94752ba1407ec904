#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "thermolens/errors.hpp"
#include "thermolens/grid.hpp"
#include "thermolens/snapshot.hpp"

using namespace thermolens;
using std::numbers::pi;

namespace {

Field random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field f(g);
  for (double& v : f.values) v = u(rng);
  return f;
}

const NormKind kAllKinds[] = {NormKind::L2,     NormKind::Linf,     NormKind::L3,
                              NormKind::L4,     NormKind::H1semi,   NormKind::H2viaLap,
                              NormKind::H3viaGradLap};

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("grid spacing excludes the boundary nodes") {
  const Grid g = Grid::line(2.0, 7);
  CHECK(g.h[0] == 0.25);
  CHECK(g.size() == 7);
  CHECK(g.coord(0, 0) == 0.25);
  const Grid r = Grid::rect(1.0, 3.0, 3, 5);
  CHECK(r.size() == 15);
  CHECK(r.h[1] == 0.5);
  CHECK_THROWS_AS(Grid::line(1.0, 2), ValidationError);
  CHECK_THROWS_AS(Grid::line(0.0, 5), ValidationError);
}

TEST_CASE("laplacian of zero is zero") {
  const Grid g = Grid::rect(1.0, 1.0, 9, 11);
  const Field z = laplacian(Field(g));
  CHECK(max_abs(z) == 0.0);
}

TEST_CASE("sine mode is a stencil eigenfunction in 1D") {
  const Grid g = Grid::line(1.0, 63);
  const Field f = sine_mode(g, 1);
  const Field lf = laplacian(f);
  const double lam = discrete_eigenvalue(g, 1);
  CHECK(lam == doctest::Approx(-(2.0 / (g.h[0] * g.h[0])) * (1.0 - std::cos(pi * g.h[0]))));
  CHECK(max_abs(lf - lam * f) < 1e-10);
  // Against the continuum eigenvalue the error is O(h^2).
  const double e63 = max_abs(lf - (-pi * pi) * f);
  const Grid g2 = Grid::line(1.0, 127);
  const Field f2 = sine_mode(g2, 1);
  const double e127 = max_abs(laplacian(f2) - (-pi * pi) * f2);
  CHECK(e63 / e127 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("tensor-product sine is a stencil eigenfunction in 2D") {
  const Grid g = Grid::rect(1.0, 2.0, 15, 31);
  const Field f = sine_mode(g, 2, 3);
  const double lam = discrete_eigenvalue(g, 2, 3);
  CHECK(max_abs(laplacian(f) - lam * f) < 1e-12 * std::abs(lam));
}

TEST_CASE("norms of zero vanish for every kind") {
  const Grid g = Grid::rect(1.0, 1.0, 7, 7);
  for (NormKind k : kAllKinds) CHECK(norm(Field(g), k) == 0.0);
}

TEST_CASE("constant one has unit L2 norm up to the boundary cells") {
  const Grid g = Grid::line(1.0, 255);
  // Interior rectangle rule: n h = 1 - h.
  CHECK(norm(Field(g, 1.0), NormKind::L2) == doctest::Approx(std::sqrt(1.0 - g.h[0])).epsilon(1e-14));
  CHECK(norm(Field(g, 1.0), NormKind::L2) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("H1 seminorm of the first sine mode") {
  const Grid g = Grid::line(1.0, 255);
  CHECK(norm(sine_mode(g, 1), NormKind::H1semi) == doctest::Approx(pi / std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("norm kinds parse by name") {
  CHECK(parse_norm_kind("L2") == NormKind::L2);
  CHECK(parse_norm_kind("H3viaGradLap") == NormKind::H3viaGradLap);
  CHECK_THROWS_AS(parse_norm_kind("H4"), ValidationError);
}

TEST_CASE("weighted L2 norm") {
  const Grid g = Grid::line(1.0, 127);
  const Field f = sine_mode(g, 2);
  CHECK(weighted_l2(f, Field(g, 1.0)) == doctest::Approx(norm(f, NormKind::L2)).epsilon(1e-15));
  CHECK(weighted_l2(Field(g, 1.0), Field(g, 4.0)) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(weighted_l2(Field(g), Field(g, 4.0)) == 0.0);
  Field bad(g, 1.0);
  bad[3] = -1.0;
  CHECK_THROWS_AS(weighted_l2(f, bad), ValidationError);
}

TEST_CASE("weighted gradient norm with unit weight is the H1 seminorm") {
  const Grid g = Grid::rect(1.0, 1.0, 13, 9);
  const Field f = random_field(g, 3);
  CHECK(weighted_gradient_l2(f, Field(g, 1.0)) ==
        doctest::Approx(norm(f, NormKind::H1semi)).epsilon(1e-14));
}

TEST_CASE("laplacian is symmetric and negative definite") {
  for (const Grid& g : {Grid::line(1.0, 41), Grid::rect(1.0, 1.5, 17, 23)}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Field u = random_field(g, seed);
      const Field v = random_field(g, seed + 100);
      const double a = inner(laplacian(u), v);
      const double b = inner(u, laplacian(v));
      CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1.0));
      CHECK(inner(laplacian(u), u) < 0.0);
    }
  }
}

TEST_CASE("discrete Green identity holds") {
  for (const Grid& g : {Grid::line(2.0, 31), Grid::rect(1.0, 1.0, 19, 7)}) {
    for (std::uint64_t seed = 11; seed <= 15; ++seed) {
      const Field u = random_field(g, seed);
      const double lhs = inner(laplacian(u), u);
      const double rhs = -std::pow(norm(u, NormKind::H1semi), 2);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("every norm is absolutely homogeneous") {
  const Grid g = Grid::rect(1.0, 1.0, 11, 13);
  const Field f = random_field(g, 9);
  for (double c : {-3.0, 0.5, 2.0}) {
    for (NormKind k : kAllKinds) {
      CHECK(norm(c * f, k) == doctest::Approx(std::abs(c) * norm(f, k)).epsilon(1e-13));
    }
  }
}

TEST_CASE("higher norms are built from the laplacian") {
  const Grid g = Grid::line(1.0, 63);
  const Field f = sine_mode(g, 3);
  const double lam = discrete_eigenvalue(g, 3);
  CHECK(norm(f, NormKind::H2viaLap) == doctest::Approx(std::abs(lam) * norm(f, NormKind::L2)).epsilon(1e-12));
  CHECK(norm(f, NormKind::H3viaGradLap) ==
        doctest::Approx(std::abs(lam) * norm(f, NormKind::H1semi)).epsilon(1e-12));
}

TEST_CASE("snapshot round trip is bitwise") {
  for (const Grid& g : {Grid::line(1.0, 17), Grid::rect(2.0, 1.0, 5, 9)}) {
    const Field f = random_field(g, 42);
    const auto bytes = encode_snapshot(f);
    REQUIRE(bytes.size() == 16 + 8 * g.size());
    CHECK(bytes[0] == 'T');
    CHECK(bytes[3] == 'S');
    CHECK(bytes[4] == g.dims);
    CHECK(bytes[5] == kSnapshotDtypeF64);
    const Field back = to_field(decode_snapshot(bytes), g);
    CHECK(back == f);
  }
}

TEST_CASE("snapshot decoding rejects corrupt input") {
  const Grid g = Grid::line(1.0, 5);
  auto bytes = encode_snapshot(sine_mode(g, 1));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS(decode_snapshot(bad_magic));
  bytes.pop_back();
  CHECK_THROWS(decode_snapshot(bytes));
  CHECK_THROWS(to_field(decode_snapshot(encode_snapshot(sine_mode(g, 1))), Grid::line(1.0, 7)));
}

TEST_CASE("snapshot files carry the path in errors") {
  try {
    read_snapshot("/nonexistent/dir/p.tlns");
    FAIL("expected an IoError");
  } catch (const IoError& e) {
    CHECK(e.path == "/nonexistent/dir/p.tlns");
  }
}

}  // TEST_SUITE
