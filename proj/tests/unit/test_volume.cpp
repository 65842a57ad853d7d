#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypdir/domain.hpp"
#include "test_support.hpp"

using namespace hypdir;

namespace {

// Lobachevsky function by its Clausen series.
double lobachevsky(double theta) {
  double s = 0.0;
  for (int k = 1; k < 200000; ++k) s += std::sin(2.0 * k * theta) / (static_cast<double>(k) * k);
  return s / 2.0;
}

DirichletPolyhedron clip_all(const std::vector<HalfSpace>& hs) {
  auto poly = DirichletPolyhedron::initial_cube(MinkowskiPoint::origin());
  for (const auto& h : hs) poly = intersect_halfspace(poly, h).poly;
  for (auto& f : poly.faces) f.synthetic = false;
  return poly;
}

// Volume of {u : |u| <= tanh r} intersected with the half-space inside each
// plane, by Monte Carlo-free radial integration on a fine spherical grid.
double star_volume_grid(const DirichletPolyhedron& poly, int n) {
  double v = 0.0;
  const double pi = std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    const double ct = -1.0 + (i + 0.5) * 2.0 / n;
    const double st = std::sqrt(1 - ct * ct);
    for (int j = 0; j < 2 * n; ++j) {
      const double ph = (j + 0.5) * pi / n;
      const Vec3 d{st * std::cos(ph), st * std::sin(ph), ct};
      double t = 1.0;
      for (const auto& f : poly.faces) {
        const double nd = dot(f.halfspace.plane.normal, d);
        if (nd > 0) t = std::min(t, f.halfspace.plane.offset / nd);
      }
      // Hyperbolic radius r = atanh t; ball shell integral of sinh^2.
      const double r = std::atanh(t);
      v += (std::sinh(2 * r) - 2 * r) / 4.0;
    }
  }
  return v * (2.0 / n) * (pi / n);
}

}  // namespace

TEST_CASE("small cube is nearly Euclidean") {
  const double h = 1e-3;
  auto cube = DirichletPolyhedron::initial_cube(MinkowskiPoint::origin(), 1.0 - h);
  for (auto& f : cube.faces) f.synthetic = false;
  const auto v = volume(cube);
  CHECK(v.finite);
  CHECK(v.value == doctest::Approx(8 * h * h * h).epsilon(1e-2));
}

TEST_CASE("regular ideal tetrahedron") {
  // Vertices on the sphere at infinity; faces at offset 1/3.
  const double s = 1.0 / std::sqrt(3.0);
  const Vec3 v[4] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<HalfSpace> hs;
  for (int i = 0; i < 4; ++i) hs.push_back(HalfSpace::from_klein(normalized(-v[i]), 1.0 / 3.0));
  const auto poly = clip_all(hs);
  CHECK(poly.vertices.size() == 4);
  CHECK(poly.has_ideal_vertices());
  const auto r = volume(poly);
  CHECK(r.finite);
  CHECK(r.value == doctest::Approx(3.0 * lobachevsky(std::numbers::pi / 3.0)).epsilon(1e-8));
}

TEST_CASE("compact polyhedron against spherical grid integration") {
  std::vector<HalfSpace> hs;
  const double t = std::tanh(0.5);
  for (const Vec3& n : {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, -1, 0},
                        Vec3{0, 0, 1}, Vec3{0, 0, -1}, Vec3{1, 1, 1}, Vec3{-1, 1, -1}}) {
    hs.push_back(HalfSpace::from_klein(normalized(n), t));
  }
  const auto poly = clip_all(hs);
  const auto r = volume(poly);
  CHECK(r.finite);
  CHECK(r.value == doctest::Approx(star_volume_grid(poly, 400)).epsilon(1e-3));
}

TEST_CASE("circumscribed polyhedra approach the ball volume") {
  const double R = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {4, 8, 16}) {
    std::vector<HalfSpace> hs;
    const double pi = std::numbers::pi;
    for (int i = 0; i < n; ++i) {
      const double ct = -1.0 + (i + 0.5) * 2.0 / n;
      const double st = std::sqrt(1 - ct * ct);
      for (int j = 0; j < 2 * n; ++j) {
        const double ph = (j + 0.5) * pi / n;
        hs.push_back(HalfSpace::from_klein({st * std::cos(ph), st * std::sin(ph), ct},
                                           std::tanh(R)));
      }
    }
    hs.push_back(HalfSpace::from_klein({0, 0, 1}, std::tanh(R)));
    hs.push_back(HalfSpace::from_klein({0, 0, -1}, std::tanh(R)));
    const auto v = volume(clip_all(hs)).value;
    CHECK(v > ball_volume(R));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev == doctest::Approx(ball_volume(R)).epsilon(2e-2));
}

TEST_CASE("domains with synthetic faces have infinite volume") {
  const std::vector<MoebiusElement> gens{MoebiusElement::loxodromic({1.0, 0.0}, {1})};
  BuildOptions o;
  const auto b = build_domain(gens, MinkowskiPoint::origin(), o);
  const auto v = volume(b.poly);
  CHECK_FALSE(v.finite);
  CHECK(std::isinf(v.value));
}

TEST_CASE("fixture volumes match the reference") {
  for (const auto& name : hypdir::testing::fixture_names()) {
    CAPTURE(name);
    const auto f = hypdir::testing::load_fixture(name);
    const auto b = build_domain(f.generators, MinkowskiPoint::origin());
    CHECK(b.stats.volume == doctest::Approx(*f.file.reference_volume).epsilon(1e-9));
    CHECK(b.stats.volume_error <= 1e-10 * b.stats.volume);
  }
}

TEST_CASE("volume does not depend on the quadrature order") {
  const auto f = hypdir::testing::load_fixture("weeks");
  BuildOptions o;
  o.compute_volume = false;
  const auto b = build_domain(f.generators, MinkowskiPoint::origin(), o);
  CHECK(volume(b.poly, 4).value == doctest::Approx(volume(b.poly, 10).value).epsilon(1e-10));
}
