#include <doctest.h>

#include <cmath>
#include <limits>

#include "hypdir/domain.hpp"
#include "test_support.hpp"

using namespace hypdir;
using hypdir::testing::load_fixture;

namespace {

struct Built {
  hypdir::testing::Fixture fixture;
  DomainBuild build;
};

const Built& built(const std::string& name) {
  static std::map<std::string, Built> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    Built b{load_fixture(name), {}};
    b.build = build_domain(b.fixture.generators, MinkowskiPoint::origin());
    it = cache.emplace(name, std::move(b)).first;
  }
  return it->second;
}

// Distance from p to the Klein segment [a, b] by dense sampling followed by
// golden-section refinement around the best sample.
double sampled_segment_distance(const MinkowskiPoint& p, Vec3 a, Vec3 b) {
  auto at = [&](double t) {
    Vec3 u = a + t * (b - a);
    const double n = norm(u);
    if (n >= 1.0 - 1e-12) u = u * ((1.0 - 1e-12) / n);
    return dist(p, from_klein({u}));
  };
  const int n = 2000;
  int best = 0;
  double best_d = at(0.0);
  for (int i = 1; i <= n; ++i) {
    const double d = at(static_cast<double>(i) / n);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double lo = std::max(0.0, (best - 1.0) / n);
  double hi = std::min(1.0, (best + 1.0) / n);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double m1 = hi - phi * (hi - lo);
    const double m2 = lo + phi * (hi - lo);
    if (at(m1) < at(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::min(best_d, at(0.5 * (lo + hi)));
}

}  // namespace

TEST_CASE("a single translation gives an unbounded slab") {
  const std::vector<MoebiusElement> gens{MoebiusElement::loxodromic({1.0, 0.3}, {1})};
  const auto b = build_domain(gens, MinkowskiPoint::origin());
  CHECK(b.stats.injectivity_radius == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(b.stats.bounded);
  CHECK(b.poly.has_synthetic_faces());
  CHECK(std::isinf(b.stats.spine_radius));
  CHECK_THROWS_AS(spine_radius(b.poly), Error);
  CHECK(std::isinf(b.stats.volume));
}

TEST_CASE("fixture domains match the recorded combinatorics") {
  for (const auto& name : hypdir::testing::fixture_names()) {
    CAPTURE(name);
    const auto& b = built(name);
    const auto& ref = b.fixture.oracle["domain_at_origin"];
    const auto& poly = b.build.poly;
    CHECK(poly.vertices.size() == ref["vertices"].get<std::size_t>());
    CHECK(poly.edges.size() == ref["edges"].get<std::size_t>());
    CHECK(poly.faces.size() == ref["faces"].get<std::size_t>());
    CHECK(b.build.stats.ideal_vertices == ref["ideal_vertices"].get<std::size_t>());
    CHECK(b.build.stats.injectivity_radius ==
          doctest::Approx(ref["in_radius"].get<double>()).epsilon(1e-9));
    CHECK(b.build.stats.converged);
    CHECK(b.build.stats.bounded);
    CHECK(poly.euler_characteristic() == 2);
    CHECK(check_polyhedron(poly, 1e-7).empty());
    CHECK(b.build.missing_generators.empty());
    for (const auto& f : poly.faces) CHECK(f.paired >= 0);
  }
}

TEST_CASE("injectivity radius never increases during the build") {
  for (const auto& name : hypdir::testing::fixture_names()) {
    const auto& h = built(name).build.rho_history;
    REQUIRE_FALSE(h.empty());
    for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] <= h[i - 1] + 1e-15);
    CHECK(h.back() == doctest::Approx(built(name).build.stats.injectivity_radius));
  }
}

TEST_CASE("spine radius agrees with dense sampling of the edges") {
  for (const auto& name : hypdir::testing::fixture_names()) {
    CAPTURE(name);
    const auto& poly = built(name).build.poly;
    double sampled = 0.0;
    for (const auto& e : poly.edges) {
      if (poly.faces[e.face0].synthetic || poly.faces[e.face1].synthetic) continue;
      sampled = std::max(sampled,
                         sampled_segment_distance(poly.basepoint, poly.vertices[e.v0].position.u,
                                                  poly.vertices[e.v1].position.u));
    }
    CHECK(spine_radius(poly) == doctest::Approx(sampled).epsilon(1e-6));
  }
}

TEST_CASE("radii are ordered") {
  for (const auto& name : hypdir::testing::fixture_names()) {
    const auto& s = built(name).build.stats;
    CHECK(s.injectivity_radius <= s.spine_radius);
    CHECK(s.spine_radius <= s.max_vertex_distance + 1e-12);
  }
}

TEST_CASE("face offsets are tanh of half the translation distance") {
  const auto& poly = built("weeks").build.poly;
  for (const auto& f : poly.faces) {
    REQUIRE(f.has_element());
    const double d = dist(poly.basepoint, apply(f.element(), poly.basepoint));
    CHECK(f.halfspace.plane.offset == doctest::Approx(std::tanh(d / 2)).epsilon(1e-12));
  }
}

TEST_CASE("distance to a chord through ideal points") {
  const double c = 0.6;
  const KleinPoint a{{-std::sqrt(1 - c * c), 0.0, c}};
  const KleinPoint b{{std::sqrt(1 - c * c), 0.0, c}};
  CHECK(point_segment_distance(MinkowskiPoint::origin(), a, b) ==
        doctest::Approx(std::atanh(c)).epsilon(1e-12));
  const KleinPoint p{{0.2, 0.1, 0.3}};
  const KleinPoint q{{0.5, -0.2, 0.1}};
  CHECK(point_segment_distance(MinkowskiPoint::origin(), p, q) ==
        doctest::Approx(sampled_segment_distance(MinkowskiPoint::origin(), p.u, q.u))
            .epsilon(1e-9));
}

TEST_CASE("build argument errors") {
  CHECK_THROWS_AS(build_domain({}, MinkowskiPoint::origin()), Error);
  BuildOptions o;
  o.max_word_length = 1;
  CHECK_THROWS_AS(build_domain(load_fixture("weeks").generators, MinkowskiPoint::origin(), o),
                  Error);
}

TEST_CASE("a long-word generator is not a face and can be replaced") {
  auto gens = load_fixture("weeks").generators;
  auto extra = evaluate_word({1, 2, 1, 2, 1}, gens);
  extra.set_word({3});
  gens.push_back(extra);
  BuildOptions o;
  o.compute_volume = false;
  try {
    build_domain(gens, MinkowskiPoint::origin(), o);
    FAIL("expected GeneratorNotFaceError");
  } catch (const GeneratorNotFaceError& e) {
    CHECK(e.generator_index() == 2);
    CHECK(e.code() == ErrorCode::GeneratorNotFace);
  }
  o.require_generator_faces = false;
  const auto lenient = build_domain(gens, MinkowskiPoint::origin(), o);
  CHECK(lenient.missing_generators == std::vector<std::size_t>{2});

  const auto same = replace_generator(gens, std::nullopt, {});
  CHECK(same.verified);
  CHECK(same.generators.size() == 3);

  const auto r = replace_generator(gens, 2, {1});
  CHECK(r.verified);
  CHECK(equal_up_to_sign(evaluate_word(r.removed_as_word, r.generators), normalize(extra), 1e-9));
  CHECK_THROWS_AS(replace_generator(gens, 5, {1}), Error);
}

TEST_CASE("domain at a displaced basepoint has the same volume") {
  const auto& f = built("weeks").fixture;
  const MinkowskiPoint x = from_klein({{0.05, -0.02, 0.03}});
  const auto b = build_domain(f.generators, x);
  CHECK(b.stats.bounded);
  CHECK(b.poly.euler_characteristic() == 2);
  CHECK(b.stats.volume == doctest::Approx(*f.file.reference_volume).epsilon(1e-8));
}
