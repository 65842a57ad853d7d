#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypdir/tiling.hpp"
#include "test_support.hpp"

using namespace hypdir;

namespace {

struct Built {
  hypdir::testing::Fixture fixture;
  DomainBuild build;
};

const Built& weeks() {
  static const Built b = [] {
    Built out{hypdir::testing::load_fixture("weeks"), {}};
    out.build = build_domain(out.fixture.generators, MinkowskiPoint::origin());
    return out;
  }();
  return b;
}

}  // namespace

TEST_CASE("tiling radius") {
  // acosh(y) = log(y + sqrt(y^2 - 1)).
  for (double r : {0.0, 0.3, 0.7258}) {
    for (double l : {0.0, 1.0, 1.5}) {
      const double y = std::cosh(r) * std::cosh(l / 2);
      CHECK(tiling_radius(r, l) == doctest::Approx(2 * std::log(y + std::sqrt(y * y - 1))));
    }
  }
  CHECK(tiling_radius(0.0, 0.0) == 0.0);
  CHECK(tiling_radius(0.5, 0.0) == doctest::Approx(1.0));
  CHECK(tiling_radius(0.0, 2.0) == doctest::Approx(2.0));
  double prev = 0.0;
  for (int i = 1; i < 20; ++i) {
    const double t = tiling_radius(0.05 * i, 0.1 * i);
    CHECK(t > prev);
    prev = t;
  }
  CHECK_THROWS_AS(tiling_radius(-0.1, 1.0), Error);
  CHECK_THROWS_AS(tiling_radius(0.1, -1.0), Error);
}

TEST_CASE("word enumeration on a cyclic group") {
  const std::vector<MoebiusElement> gens{MoebiusElement::loxodromic({1.0, 0.3}, {1})};
  const auto x = MinkowskiPoint::origin();
  const auto none = enumerate_words(gens, x, 0, 10.0);
  REQUIRE(none.elements.size() == 1);
  CHECK(is_identity(none.elements[0], 1e-12));
  const auto ball = enumerate_words(gens, x, 6, 2.5);
  CHECK(ball.elements.size() == 5);
  CHECK(ball.frontier_closed);
  const auto closed = enumerate_words_closed(gens, x, 2.5);
  CHECK(closed.elements.size() == 5);
}

TEST_CASE("tiles of a small ball") {
  const auto& w = weeks();
  const auto t = tile_ball(w.build.poly, 0.1);
  CHECK(t.tiles.size() >= 1);
  CHECK(is_identity(t.tiles[0].element, 1e-12));
  CHECK(t.margin == doctest::Approx(2 * w.build.stats.max_vertex_distance));
  for (const auto& tile : t.tiles) CHECK(tile.distance <= 0.1 + t.margin + 1e-9);
}

TEST_CASE("tiling of the Weeks domain") {
  const auto& w = weeks();
  const double R = tiling_radius(w.build.stats.spine_radius, 1.0);
  const auto t = tile_ball(w.build.poly, R);
  CHECK(t.radius == R);
  REQUIRE(t.tiles.size() > 1);
  for (std::size_t i = 1; i < t.tiles.size(); ++i) {
    CHECK(t.tiles[i].distance >= t.tiles[i - 1].distance);
    // Parent chains reach the identity without cycles.
    std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
    int steps = 0;
    while (p > 0 && steps <= t.tiles[i].depth) {
      p = t.tiles[p].parent;
      ++steps;
    }
    CHECK(p == 0);
    CHECK(steps == t.tiles[i].depth);
    const auto& tile = t.tiles[i];
    const auto& parent = t.tiles[tile.parent];
    CHECK(equal_up_to_sign(tile.element,
                           compose(parent.element, w.build.poly.faces[tile.parent_face].element()),
                           1e-9 * (1 + std::abs(tile.element.a()) + std::abs(tile.element.b()))));
    CHECK(tile.depth == parent.depth + 1);
  }

  SUBCASE("enumeration oracle agrees") {
    const auto words = enumerate_words_closed(w.fixture.generators, t.basepoint, R + t.margin);
    CHECK(words.frontier_closed);
    const auto cmp = compare_with_enumeration(t, words);
    CHECK(cmp.missing.empty());
    CHECK(cmp.extra.empty());
  }

  SUBCASE("coverage by translates") {
    const auto c = verify_covering(t, w.build.poly, 2000, 3);
    CHECK(c.samples == 2000);
    CHECK(c.covered == 2000);
    CHECK(c.fraction == 1.0);
    CHECK(c.mean_multiplicity == doctest::Approx(1.0).epsilon(1e-2));
  }

  SUBCASE("diagnostics for an exact volume") {
    const auto d = covering_diagnostics(w.build.poly, w.build.stats.volume, t,
                                        w.build.stats.volume, std::nullopt);
    CHECK(d.delta_v == 0.0);
    const double s = std::sinh(w.build.stats.injectivity_radius / 2);
    CHECK(d.hidden_wall_area_lower == doctest::Approx(4 * std::numbers::pi * s * s));
    CHECK(d.extra_area_lower == doctest::Approx(d.hidden_wall_area_lower / d.ndd_upper));
    CHECK(d.ndd_upper == ndd_upper_bound(t.radius, w.build.stats.max_vertex_distance,
                                         w.build.stats.injectivity_radius));
  }
}

TEST_CASE("tiling is independent of face order") {
  const auto& w = weeks();
  auto shuffled = w.build.poly;
  std::reverse(shuffled.faces.begin(), shuffled.faces.end());
  const double R = 1.8;
  const auto a = tile_ball(w.build.poly, R);
  const auto b = tile_ball(shuffled, R);
  REQUIRE(a.tiles.size() == b.tiles.size());
  for (const auto& tile : b.tiles) CHECK(a.index.find(tile.element).has_value());
}

TEST_CASE("explosion guard") {
  TilingOptions o;
  o.tile_cap = 10;
  CHECK_THROWS_AS(tile_ball(weeks().build.poly, 3.0, o), Error);
}

TEST_CASE("coverage edge cases") {
  const auto& w = weeks();
  const auto t = tile_ball(w.build.poly, 0.2);
  const auto c0 = verify_covering(t, w.build.poly, 0);
  CHECK(c0.samples == 0);
  CHECK(c0.fraction == 1.0);
}

TEST_CASE("ndd bound") {
  auto ball = [](double t) { return std::numbers::pi * (std::sinh(2 * t) - 2 * t); };
  const double bound = std::floor(ball(3.3) / ball(0.3));
  CHECK(ndd_upper_bound(2.0, 1.0, 0.3) == static_cast<std::uint64_t>(bound));
  CHECK_THROWS_AS(ndd_upper_bound(2.0, 1.0, 0.0), Error);
}
