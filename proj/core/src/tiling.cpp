#include "hypdir/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace hypdir {

double tiling_radius(double r, double lambda_cutoff) {
  if (r < 0.0 || lambda_cutoff < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "tiling_radius: arguments must be non-negative");
  }
  return 2.0 * std::acosh(std::cosh(r) * std::cosh(0.5 * lambda_cutoff));
}

double admission_margin(const DirichletPolyhedron& poly, double R) {
  if (poly.has_ideal_vertices()) return std::max(R, 0.0);
  return 2.0 * max_vertex_distance(poly);
}

namespace {

double max_entry(const MoebiusElement& g) {
  double m = 0.0;
  for (const auto& e : g.entries()) m = std::max(m, std::abs(e));
  return m;
}

bool matrix_equal(const MoebiusElement& g, const MoebiusElement& h, double eps) {
  const double scale = 1.0 + std::max(max_entry(g), max_entry(h));
  return equal_up_to_sign(g, h, eps * scale);
}

ElementIndex matrix_index(const MinkowskiPoint& x, const Tolerance& tol) {
  const double eps = tol.eps_equal;
  return ElementIndex(x, tol.quantum, [eps](const MoebiusElement& g, const MoebiusElement& h) {
    return matrix_equal(g, h, eps);
  });
}

}  // namespace

TileSet tile_ball(const DirichletPolyhedron& poly, double R, const TilingOptions& options) {
  if (R < 0.0) throw Error(ErrorCode::InvalidArgument, "tile_ball: R must be non-negative");
  const MinkowskiPoint& x = poly.basepoint;
  TileSet set;
  set.basepoint = x;
  set.radius = R;
  set.margin = admission_margin(poly, R);
  set.rho = injectivity_radius(poly);
  const double limit = R + set.margin + options.tol.eps_geom;

  std::vector<std::pair<int, MoebiusElement>> pairings;
  for (std::size_t f = 0; f < poly.faces.size(); ++f) {
    if (poly.faces[f].has_element()) {
      pairings.emplace_back(static_cast<int>(f), poly.faces[f].element());
    }
  }

  ElementIndex index = ElementIndex::by_geometry(x, set.rho, options.tol);
  std::vector<Tile> tiles;
  index.insert(MoebiusElement::identity());
  tiles.push_back({MoebiusElement::identity(), x, 0.0, -1, -1, 0});

  for (std::size_t head = 0; head < tiles.size(); ++head) {
    const Tile parent = tiles[head];
    for (const auto& [face, h] : pairings) {
      MoebiusElement g = compose(parent.element, h);
      const MinkowskiPoint image = apply(g, x);
      const double d = dist(x, image);
      if (d > limit) continue;
      const auto [id, inserted] = index.find_or_insert(g);
      if (!inserted) continue;
      tiles.push_back({std::move(g), image, d, static_cast<std::ptrdiff_t>(head), face,
                       parent.depth + 1});
      if (tiles.size() > options.tile_cap) {
        throw Error(ErrorCode::ExplosionGuard,
                    "tile count exceeds the cap of " + std::to_string(options.tile_cap));
      }
    }
  }

  std::vector<std::size_t> order(tiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tiles[a].distance < tiles[b].distance;
  });
  std::vector<std::ptrdiff_t> new_id(tiles.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_id[order[i]] = static_cast<std::ptrdiff_t>(i);

  set.index = ElementIndex::by_geometry(x, set.rho, options.tol);
  set.tiles.reserve(tiles.size());
  for (std::size_t i : order) {
    Tile t = std::move(tiles[i]);
    if (t.parent >= 0) t.parent = new_id[t.parent];
    set.index.insert(t.element);
    set.tiles.push_back(std::move(t));
  }
  return set;
}

namespace {

WordEnumeration walk_words(const std::vector<MoebiusElement>& generators, const MinkowskiPoint& x,
                           int max_length, double radius, double expand_radius,
                           const Tolerance& tol, std::size_t cap) {
  std::vector<MoebiusElement> letters;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    MoebiusElement g = generators[i];
    g.set_word({k});
    MoebiusElement gi = inverse(g);
    gi.set_word({-k});
    letters.push_back(std::move(g));
    letters.push_back(std::move(gi));
  }

  WordEnumeration out;
  out.expand_radius = expand_radius;
  const double bound = radius + tol.eps_geom;
  ElementIndex visited = matrix_index(x, tol);
  visited.insert(MoebiusElement::identity());
  out.elements.push_back(MoebiusElement::identity());

  std::vector<std::size_t> frontier{0};
  bool added = false;
  int length = 0;
  while (length < max_length && !frontier.empty()) {
    ++length;
    std::vector<std::size_t> next;
    added = false;
    for (std::size_t id : frontier) {
      for (const auto& letter : letters) {
        MoebiusElement g = compose(visited[id], letter);
        const auto [gid, inserted] = visited.find_or_insert(g);
        if (!inserted) continue;
        const double d = dist(x, apply(g, x));
        if (d <= expand_radius) next.push_back(gid);
        if (d <= bound) {
          out.elements.push_back(std::move(g));
          added = true;
        }
        if (visited.size() > cap) {
          throw Error(ErrorCode::ExplosionGuard,
                      "word enumeration exceeds the cap of " + std::to_string(cap));
        }
      }
    }
    frontier = std::move(next);
  }
  out.max_length = length;
  out.visited = visited.size();
  out.frontier_closed = !added;
  return out;
}

}  // namespace

WordEnumeration enumerate_words(const std::vector<MoebiusElement>& generators,
                                const MinkowskiPoint& x, int max_length, double radius,
                                const Tolerance& tol, std::size_t cap, double expand_radius) {
  if (max_length < 0) throw Error(ErrorCode::InvalidArgument, "enumerate_words: negative length");
  return walk_words(generators, x, max_length, radius, expand_radius, tol, cap);
}

WordEnumeration enumerate_words_closed(const std::vector<MoebiusElement>& generators,
                                       const MinkowskiPoint& x, double radius,
                                       const Tolerance& tol, double slack, double slack_step,
                                       int max_rounds, std::size_t cap) {
  if (!(slack >= 0.0) || !(slack_step > 0.0) || max_rounds < 1) {
    throw Error(ErrorCode::InvalidArgument, "enumerate_words_closed: bad slack schedule");
  }
  const int unlimited = std::numeric_limits<int>::max();
  WordEnumeration out = walk_words(generators, x, unlimited, radius, radius + slack, tol, cap);
  out.frontier_closed = false;
  for (int round = 1; round < max_rounds; ++round) {
    slack += slack_step;
    WordEnumeration wider = walk_words(generators, x, unlimited, radius, radius + slack, tol, cap);
    const bool stable = wider.elements.size() == out.elements.size();
    out = std::move(wider);
    out.frontier_closed = stable;
    if (stable) break;
  }
  return out;
}

OracleComparison compare_with_enumeration(const TileSet& tiles, const WordEnumeration& words,
                                          const Tolerance& tol) {
  OracleComparison cmp;
  const MinkowskiPoint& x = tiles.basepoint;
  const double limit = tiles.radius + tiles.margin;
  const auto near_boundary = [&](const MoebiusElement& g) {
    return std::abs(dist(x, apply(g, x)) - limit) <= tol.eps_geom;
  };

  ElementIndex from_words = matrix_index(x, tol);
  for (const auto& g : words.elements) from_words.insert(g);
  ElementIndex from_tiles = matrix_index(x, tol);
  for (const auto& t : tiles.tiles) from_tiles.insert(t.element);

  for (const auto& g : words.elements) {
    if (from_tiles.find(g)) continue;
    if (near_boundary(g)) {
      ++cmp.boundary_skipped;
      continue;
    }
    cmp.missing.push_back(g);
  }
  for (const auto& t : tiles.tiles) {
    if (from_words.find(t.element)) continue;
    if (near_boundary(t.element)) {
      ++cmp.boundary_skipped;
      continue;
    }
    cmp.extra.push_back(t.element);
  }
  return cmp;
}

namespace {

// Radius with density proportional to sinh^2(r) on [0, Rmax]: inverts
// (sinh 2r - 2r) / (sinh 2Rmax - 2Rmax) by bisection.
double sample_radius(double u, double rmax) {
  const auto cdf = [](double r) { return ball_volume(r); };
  const double target = u * cdf(rmax);
  double lo = 0.0;
  double hi = rmax;
  for (int i = 0; i < 100 && hi - lo > 1e-15 * (1.0 + rmax); ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CoverageReport verify_covering(const TileSet& tiles, const DirichletPolyhedron& poly,
                               std::size_t n_samples, std::uint64_t seed, const Tolerance& tol) {
  CoverageReport report;
  report.samples = n_samples;
  if (n_samples == 0) return report;

  const MinkowskiPoint& x = tiles.basepoint;
  const double rmax = std::max(0.0, tiles.radius - tol.eps_geom);
  // A point of g D' lies within max_vertex_distance of g(x) when D' is compact.
  const double reach = poly.has_ideal_vertices() ? std::numeric_limits<double>::infinity()
                                                 : max_vertex_distance(poly) + tol.eps_geom;
  std::vector<MoebiusElement> inverses;
  inverses.reserve(tiles.tiles.size());
  for (const auto& t : tiles.tiles) inverses.push_back(inverse(t.element));
  const auto frame = tangent_frame(x);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::size_t total_multiplicity = 0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    Vec3 dir{normal(rng), normal(rng), normal(rng)};
    while (norm(dir) < 1e-12) dir = {normal(rng), normal(rng), normal(rng)};
    dir = normalized(dir);
    const Vec4 tangent = dir.x * frame[0] + dir.y * frame[1] + dir.z * frame[2];
    const MinkowskiPoint p = exp_map(x, tangent, sample_radius(uniform(rng), rmax));

    std::size_t multiplicity = 0;
    for (std::size_t i = 0; i < tiles.tiles.size(); ++i) {
      if (dist(p, tiles.tiles[i].image) > reach) continue;
      if (poly.contains(to_klein(apply(inverses[i], p)), tol.eps_geom)) ++multiplicity;
    }
    if (multiplicity > 0) ++report.covered;
    total_multiplicity += multiplicity;
    report.max_multiplicity = std::max(report.max_multiplicity, multiplicity);
  }
  report.fraction = static_cast<double>(report.covered) / static_cast<double>(n_samples);
  report.mean_multiplicity =
      static_cast<double>(total_multiplicity) / static_cast<double>(n_samples);
  return report;
}

std::uint64_t ndd_upper_bound(double R, double r_ub, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidRho, "ndd_upper_bound: rho must be positive");
  return static_cast<std::uint64_t>(std::floor(ball_volume(R + r_ub + rho) / ball_volume(rho)));
}

VerificationReport covering_diagnostics(const DirichletPolyhedron& poly, double volume,
                                        const TileSet& tiles, double reference_volume,
                                        const std::optional<WordEnumeration>& words,
                                        const Tolerance& tol) {
  if (!(reference_volume > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "covering_diagnostics: reference volume must be > 0");
  }
  VerificationReport report;
  report.volume = volume;
  report.reference_volume = reference_volume;
  report.delta_v = volume - reference_volume;
  const double rho = injectivity_radius(poly);
  const double s = std::sinh(0.5 * rho);
  report.hidden_wall_area_lower = 4.0 * std::numbers::pi * s * s;
  report.ndd_upper = ndd_upper_bound(tiles.radius, max_vertex_distance(poly), rho);
  report.extra_area_lower = report.ndd_upper > 0
                                ? report.hidden_wall_area_lower / static_cast<double>(report.ndd_upper)
                                : report.hidden_wall_area_lower;
  if (words) {
    OracleComparison cmp = compare_with_enumeration(tiles, *words, tol);
    report.oracle_missing = std::move(cmp.missing);
    report.oracle_extra = std::move(cmp.extra);
    report.oracle_frontier_closed = words->frontier_closed;
  }
  return report;
}

}  // namespace hypdir
