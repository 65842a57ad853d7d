#pragma once

// Covering a ball B(x, R) by translates of the domain, the word-enumeration
// cross-check, and diagnostic bounds.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hypdir/domain.hpp"
#include "hypdir/wordprob.hpp"

namespace hypdir {

/// 2 acosh(cosh(r) cosh(lambda / 2)).
double tiling_radius(double r, double lambda_cutoff);

struct Tile {
  MoebiusElement element;
  MinkowskiPoint image;
  double distance = 0.0;
  /// Tile id of the parent, -1 for the identity.
  std::ptrdiff_t parent = -1;
  /// Face of the domain whose pairing led from the parent to this tile.
  int parent_face = -1;
  int depth = 0;
};

struct TileSet {
  MinkowskiPoint basepoint;
  /// Sorted by translation distance; the identity comes first.
  std::vector<Tile> tiles;
  double radius = 0.0;
  /// Extra distance beyond `radius` within which centers were admitted.
  double margin = 0.0;
  /// Injectivity radius used for the same_element verdicts.
  double rho = 0.0;
  /// Elements in tile order, deduplicated by same_element.
  ElementIndex index{MinkowskiPoint{}, 1.0, nullptr};
};

struct TilingOptions {
  Tolerance tol;
  std::size_t tile_cap = 1'000'000;
};

/// Admission margin for tile centers: 2 * max_vertex_distance for a compact
/// domain. With ideal vertices the domain is unbounded and the margin is R,
/// since a point p of B(x, R) lying in g D satisfies d(p, g x) <= d(p, x).
double admission_margin(const DirichletPolyhedron& poly, double R);

/// Breadth-first expansion from the identity across face pairings; a
/// candidate g h is kept when new and within R + margin of the basepoint.
/// Throws ExplosionGuard when the tile count exceeds the cap.
TileSet tile_ball(const DirichletPolyhedron& poly, double R, const TilingOptions& options = {});

struct WordEnumeration {
  /// Distinct elements with d(x, g x) <= radius, in discovery order.
  std::vector<MoebiusElement> elements;
  /// Longest word length reached.
  int max_length = 0;
  /// Only elements within this distance were extended by further letters.
  double expand_radius = 0.0;
  /// No in-ball element appeared in the last layer (or, for the closed
  /// variant, the in-ball set stopped growing with the expansion radius).
  bool frontier_closed = true;
  /// Distinct elements visited at any distance.
  std::size_t visited = 0;
};

/// Breadth-first enumeration of words in the generators up to max_length,
/// deduplicated by +-matrix equality; independent of any domain. Elements
/// farther than expand_radius are recorded as visited but not extended
/// (infinite: exhaustive).
WordEnumeration enumerate_words(const std::vector<MoebiusElement>& generators,
                                const MinkowskiPoint& x, int max_length, double radius,
                                const Tolerance& tol = {}, std::size_t cap = 5'000'000,
                                double expand_radius = std::numeric_limits<double>::infinity());

/// Runs enumerate_words without a length limit and with expansion radius
/// radius + slack, raising slack by slack_step until the in-ball set stops
/// growing (frontier_closed) or max_rounds runs are done.
WordEnumeration enumerate_words_closed(const std::vector<MoebiusElement>& generators,
                                       const MinkowskiPoint& x, double radius,
                                       const Tolerance& tol = {}, double slack = 1.0,
                                       double slack_step = 1.0, int max_rounds = 4,
                                       std::size_t cap = 5'000'000);

struct OracleComparison {
  /// Found by enumeration but not by tiling.
  std::vector<MoebiusElement> missing;
  /// Found by tiling but not by enumeration.
  std::vector<MoebiusElement> extra;
  /// Elements within eps_geom of the admission radius, left out of the test.
  std::size_t boundary_skipped = 0;

  bool agree() const { return missing.empty() && extra.empty(); }
};

/// Set comparison by +-matrix equality within eps_equal (scaled by entry
/// size).
OracleComparison compare_with_enumeration(const TileSet& tiles, const WordEnumeration& words,
                                          const Tolerance& tol = {});

struct CoverageReport {
  std::size_t samples = 0;
  std::size_t covered = 0;
  double fraction = 1.0;
  double mean_multiplicity = 0.0;
  std::size_t max_multiplicity = 0;
};

/// Samples points uniformly with respect to hyperbolic volume in
/// B(x, R - eps_geom) and tests membership in the translates g D'.
CoverageReport verify_covering(const TileSet& tiles, const DirichletPolyhedron& poly,
                               std::size_t n_samples, std::uint64_t seed = 1,
                               const Tolerance& tol = {});

struct VerificationReport {
  double volume = 0.0;
  double reference_volume = 0.0;
  double delta_v = 0.0;
  double hidden_wall_area_lower = 0.0;
  std::uint64_t ndd_upper = 0;
  double extra_area_lower = 0.0;
  std::vector<MoebiusElement> oracle_missing;
  std::vector<MoebiusElement> oracle_extra;
  bool oracle_frontier_closed = true;
};

/// floor(vol_ball(R + r_ub + rho) / vol_ball(rho)).
std::uint64_t ndd_upper_bound(double R, double r_ub, double rho);

/// Volume excess over the reference, the wall-area and neighbor-count bounds
/// that limit how a tiling could be cut off, and the optional oracle diff.
VerificationReport covering_diagnostics(const DirichletPolyhedron& poly, double volume,
                                        const TileSet& tiles, double reference_volume,
                                        const std::optional<WordEnumeration>& words,
                                        const Tolerance& tol = {});

}  // namespace hypdir
