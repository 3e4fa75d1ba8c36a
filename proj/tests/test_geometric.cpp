#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "traversim/geometric.hpp"

using namespace traversim;

namespace {

MapGeometry small_geom(int n = 11) {
  MapGeometry g;
  g.origin = {0.0, 0.0};
  g.resolution = 0.05;
  g.length_cells = n;
  g.width_cells = n;
  return g;
}

// Fill a layer from an analytic height function over every cell.
template <typename F>
Layer make_elevation(const MapGeometry& g, F&& height) {
  Layer layer(g.length_cells, g.width_cells);
  for (int r = 0; r < g.width_cells; ++r) {
    for (int c = 0; c < g.length_cells; ++c) {
      const Vec2 p = index_to_world({c, r}, g);
      layer.at({c, r}) = CellEstimate::of(height(p.x, p.y), 0.01);
    }
  }
  return layer;
}

// Independent least-squares oracle: solve the 3x3 normal equations for
// z = a x + b y + c by Cramer's rule and return (a, b, residual population
// std). Used to cross-check the implementation's solver path.
struct OracleFit {
  double a, b, residual_std;
};
OracleFit oracle_fit(const std::vector<Vec3>& pts) {
  double sx = 0, sy = 0, sz = 0, sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    sx += p.x; sy += p.y; sz += p.z;
    sxx += p.x * p.x; sxy += p.x * p.y; syy += p.y * p.y;
    sxz += p.x * p.z; syz += p.y * p.z;
  }
  // | sxx sxy sx | a   | sxz |
  // | sxy syy sy | b = | syz |
  // | sx  sy  n  | c   | sz  |
  auto det3 = [](double a11, double a12, double a13, double a21, double a22,
                 double a23, double a31, double a32, double a33) {
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
           a13 * (a21 * a32 - a22 * a31);
  };
  const double d = det3(sxx, sxy, sx, sxy, syy, sy, sx, sy, n);
  const double a = det3(sxz, sxy, sx, syz, syy, sy, sz, sy, n) / d;
  const double b = det3(sxx, sxz, sx, sxy, syz, sy, sx, sz, n) / d;
  const double c = det3(sxx, sxy, sxz, sxy, syy, syz, sx, sy, sz) / d;
  double ss = 0;
  for (const auto& p : pts) {
    const double r = p.z - (a * p.x + b * p.y + c);
    ss += r * r;
  }
  return {a, b, std::sqrt(ss / n)};
}

}  // namespace

TEST_CASE("ray_variance model") {
  VarianceModel vm;  // a = 1e-4, b = 2.5e-4
  CHECK(ray_variance(0.0, vm) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(ray_variance(2.0, vm) == doctest::Approx(1.1e-3).epsilon(1e-12));
  CHECK_THROWS_AS(ray_variance(-0.1, vm), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    double r1 = u(rng), r2 = u(rng);
    if (r1 > r2) std::swap(r1, r2);
    CHECK(ray_variance(r1, vm) <= ray_variance(r2, vm));
    // continuity
    CHECK(std::abs(ray_variance(r1 + 1e-9, vm) - ray_variance(r1, vm)) < 1e-8);
  }
}

TEST_CASE("integrate_hits") {
  const auto g = small_geom();
  VarianceModel vm;
  Layer elevation(g.length_cells, g.width_cells);

  SUBCASE("first hit initializes the cell") {
    const DepthHit hit{{0.12, 0.07, 0.3}, 1.0};
    CHECK(integrate_hits(std::span(&hit, 1), elevation, g, vm) == 0);
    const auto& cell = elevation.at({2, 1});
    CHECK(cell.known);
    CHECK(cell.mean == 0.3);
    CHECK(cell.variance ==
          doctest::Approx(vm.base_var + vm.range_coeff).epsilon(1e-12));
  }

  SUBCASE("two equal-variance hits average") {
    const std::vector<DepthHit> hits = {{{0.12, 0.07, 0.2}, 1.0},
                                        {{0.13, 0.08, 0.4}, 1.0}};
    CHECK(integrate_hits(hits, elevation, g, vm) == 0);
    CHECK(elevation.at({2, 1}).mean == doctest::Approx(0.3).epsilon(1e-12));
  }

  SUBCASE("out-of-map hits are dropped and counted") {
    const std::vector<DepthHit> hits = {{{-1.0, 0.0, 0.2}, 1.0}};
    CHECK(integrate_hits(hits, elevation, g, vm) == 1);
    CHECK(elevation.known_count() == 0);
  }
}

TEST_CASE("fit_plane flat and ramp") {
  const auto g = small_geom();

  SUBCASE("constant height") {
    const auto elevation = make_elevation(g, [](double, double) { return 0.7; });
    const auto fit = fit_plane(elevation, g, {5, 5}, 2);
    REQUIRE(fit.has_value());
    CHECK(fit->sample_count == 25);
    CHECK(fit->unit_normal.z == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit->residual_std == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(slope_at(*fit) == doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("z = 0.5 x") {
    const auto elevation =
        make_elevation(g, [](double x, double) { return 0.5 * x; });
    const auto fit = fit_plane(elevation, g, {5, 5}, 2);
    REQUIRE(fit.has_value());
    const double norm = std::sqrt(0.25 + 1.0);
    CHECK(fit->unit_normal.x == doctest::Approx(-0.5 / norm).epsilon(1e-9));
    CHECK(std::abs(fit->unit_normal.y) < 1e-9);
    CHECK(fit->unit_normal.z == doctest::Approx(1.0 / norm).epsilon(1e-9));
    CHECK(fit->residual_std < 1e-9);
  }

  SUBCASE("insufficient data") {
    Layer elevation(g.length_cells, g.width_cells);
    elevation.at({5, 5}) = CellEstimate::of(0.1, 0.1);
    elevation.at({6, 5}) = CellEstimate::of(0.2, 0.1);
    CHECK_FALSE(fit_plane(elevation, g, {5, 5}, 2).has_value());

    // collinear triples are rank-deficient
    elevation.at({7, 5}) = CellEstimate::of(0.3, 0.1);
    CHECK_FALSE(fit_plane(elevation, g, {5, 5}, 2).has_value());

    elevation.at({6, 6}) = CellEstimate::of(0.1, 0.1);
    CHECK(fit_plane(elevation, g, {5, 5}, 2).has_value());
  }
}

TEST_CASE("slope matches arctan of the gradient") {
  const auto g = small_geom();
  for (double grad : {0.1, 0.2679, 0.5, 1.0}) {
    const auto elevation =
        make_elevation(g, [grad](double x, double) { return grad * x; });
    const auto fit = fit_plane(elevation, g, {5, 5}, 2);
    REQUIRE(fit.has_value());
    CHECK(std::abs(slope_at(*fit) - std::atan(grad)) < 1e-6);
    CHECK(roughness_at(*fit) < 1e-9);  // a ramp is not rough
  }
}

TEST_CASE("roughness of a checkerboard matches the residual-std oracle") {
  const auto g = small_geom();
  const double h = 0.02;
  const auto height = [&](double x, double y) {
    const int c = static_cast<int>(std::floor(x / g.resolution));
    const int r = static_cast<int>(std::floor(y / g.resolution));
    return 0.1 * x + ((c + r) % 2 == 0 ? h : -h);
  };
  const auto elevation = make_elevation(g, height);
  const auto fit = fit_plane(elevation, g, {5, 5}, 2);
  REQUIRE(fit.has_value());

  std::vector<Vec3> pts;
  for (int dr = -2; dr <= 2; ++dr) {
    for (int dc = -2; dc <= 2; ++dc) {
      const Vec2 p = index_to_world({5 + dc, 5 + dr}, g);
      pts.push_back({p.x, p.y, height(p.x, p.y)});
    }
  }
  const auto oracle = oracle_fit(pts);
  CHECK(roughness_at(*fit) == doctest::Approx(oracle.residual_std).epsilon(1e-9));
  CHECK(roughness_at(*fit) > h / 2);  // genuinely rough

  //gradient agrees with the oracle too
  const double gx = -fit->unit_normal.x / fit->unit_normal.z;
  CHECK(gx == doctest::Approx(oracle.a).epsilon(1e-9));
}

TEST_CASE("slope and roughness invariances") {
  const auto g = small_geom();

  SUBCASE("adding a constant changes nothing") {
    for (double offset : {0.0, 0.5, -2.0}) {
      const auto elevation = make_elevation(
          g, [offset](double x, double y) { return 0.3 * x - 0.2 * y + offset; });
      const auto fit = fit_plane(elevation, g, {5, 5}, 2);
      REQUIRE(fit.has_value());
      const double expected = std::atan(std::hypot(0.3, 0.2));
      CHECK(std::abs(slope_at(*fit) - expected) < 1e-9);
      CHECK(roughness_at(*fit) < 1e-9);
    }
  }

  SUBCASE("horizontal translation leaves slope unchanged") {
    const auto elevation =
        make_elevation(g, [](double x, double y) { return 0.4 * x + 0.1 * y; });
    const auto f1 = fit_plane(elevation, g, {4, 4}, 2);
    const auto f2 = fit_plane(elevation, g, {7, 6}, 2);
    REQUIRE(f1.has_value());
    REQUIRE(f2.has_value());
    CHECK(std::abs(slope_at(*f1) - slope_at(*f2)) < 1e-12);
  }

  SUBCASE("rotation about the vertical axis") {
    for (double phi : {0.0, 0.4, 1.1, 2.8}) {
      const double grad = 0.35;
      const auto elevation = make_elevation(g, [&](double x, double y) {
        return grad * (x * std::cos(phi) + y * std::sin(phi));
      });
      const auto fit = fit_plane(elevation, g, {5, 5}, 2);
      REQUIRE(fit.has_value());
      CHECK(std::abs(slope_at(*fit) - std::atan(grad)) < 1e-9);
      CHECK(roughness_at(*fit) < 1e-9);
    }
  }
}

TEST_CASE("analyze_geometry fills slope and roughness layers") {
  const auto g = small_geom();
  LayeredGridMap map(g);
  for (int r = 0; r < g.width_cells; ++r) {
    for (int c = 0; c < g.length_cells; ++c) {
      const Vec2 p = index_to_world({c, r}, g);
      map.layer(layer::elevation).at({c, r}) = CellEstimate::of(p.x, 0.01);
    }
  }
  analyze_geometry(map, 2);
  const auto& slope = map.layer(layer::slope).at({5, 5});
  CHECK(slope.known);
  CHECK(std::abs(slope.mean - M_PI / 4.0) < 1e-9);  // z = x ramp

  LayeredGridMap empty(g);
  analyze_geometry(empty, 2);
  CHECK(empty.layer(layer::slope).known_count() == 0);
}
