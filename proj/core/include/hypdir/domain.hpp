#pragma once

// Approximate Dirichlet domain: an intersection of bisector half-spaces kept
// as a convex polyhedron in the Klein model, plus its metric statistics.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hypdir/errors.hpp"
#include "hypdir/hypcore.hpp"

namespace hypdir {

/// {u : normal . u <= offset} in Klein coordinates, |normal| = 1.
struct KleinPlane {
  Vec3 normal;
  double offset = 0.0;

  double signed_distance(const Vec3& u) const { return dot(normal, u) - offset; }
};

/// Half-space {y : <y, v> >= 0} of H^3, stored both as the Minkowski normal v
/// and as the equivalent Klein plane. Bisector half-spaces remember the group
/// element that produced them.
struct HalfSpace {
  Vec4 normal{};
  KleinPlane plane;
  std::optional<MoebiusElement> element;

  static HalfSpace from_klein(const Vec3& normal, double offset);
  static HalfSpace from_minkowski(const Vec4& v);
};

/// Points at least as close to x as to g(x). Throws FixesBasepoint when
/// d(x, g x) <= eps_geom.
HalfSpace bisector_halfspace(const MinkowskiPoint& x, const MoebiusElement& g,
                             const Tolerance& tol = {});

/// Hyperbolic distance from p to the boundary plane of h.
double distance_to_plane(const MinkowskiPoint& p, const HalfSpace& h);

struct Vertex {
  KleinPoint position;
  /// |u| >= 1 - 1e-7: on (or numerically beyond) the sphere at infinity.
  bool ideal = false;
};

struct Edge {
  int v0 = -1;
  int v1 = -1;
  int face0 = -1;
  int face1 = -1;
};

struct Face {
  HalfSpace halfspace;
  /// Vertex indices, counter-clockwise seen from outside.
  std::vector<int> cycle;
  /// Index of the face carrying the inverse element, -1 if none.
  int paired = -1;
  /// Face of the initial truncation cube.
  bool synthetic = false;

  bool has_element() const { return halfspace.element.has_value(); }
  const MoebiusElement& element() const { return *halfspace.element; }
};

inline constexpr double kIdealNormThreshold = 1.0 - 1e-7;

struct DirichletPolyhedron {
  MinkowskiPoint basepoint;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  /// Per generator: does it (and its inverse) support a face.
  std::vector<bool> generators_present;

  /// Klein cube [-1 + delta, 1 - delta]^3 with synthetic faces.
  static DirichletPolyhedron initial_cube(const MinkowskiPoint& basepoint, double delta = 1e-6);

  bool has_synthetic_faces() const;
  bool has_ideal_vertices() const;
  int euler_characteristic() const;
  bool contains(const KleinPoint& p, double eps) const;
  /// Face whose element equals +-g within eps.
  std::optional<std::size_t> face_of(const MoebiusElement& g, double eps) const;
  /// Rebuilds `edges` from the face cycles.
  void rebuild_edges();
  /// Sets Face::paired by matching each element with its inverse.
  void assign_pairings(double eps);
};

/// Structural problems (Euler characteristic, edge incidence, pairing
/// involution, pairing products); empty when the polyhedron is consistent.
std::vector<std::string> check_polyhedron(const DirichletPolyhedron& poly, double eps);

enum class CutOutcome {
  Outside,   ///< no vertex strictly outside the half-space; nothing changes
  Touching,  ///< plane passes through vertices/edges only (degenerate cut)
  NearMiss,  ///< cut would create a face below the size threshold; not applied
  Cut,       ///< new face created
};

const char* to_string(CutOutcome outcome);

struct CutInfo {
  CutOutcome outcome = CutOutcome::Outside;
  /// Euclidean diameter (Klein coordinates) of the would-be new face.
  double face_diameter = 0.0;
  /// Indices (in the input polyhedron) of faces removed by the cut.
  std::vector<std::size_t> eliminated_faces;
  /// Elements of the eliminated faces (nullopt for faces without one).
  std::vector<std::optional<MoebiusElement>> eliminated_elements;
};

inline constexpr double kNewFaceDiameter = 1e-7;

/// Clips `poly` by `hs` in place.
CutInfo cut_polyhedron(DirichletPolyhedron& poly, const HalfSpace& hs, const Tolerance& tol);

struct CutResult {
  DirichletPolyhedron poly;
  bool new_face = false;
  CutInfo info;
};

CutResult intersect_halfspace(const DirichletPolyhedron& poly, const HalfSpace& hs,
                              const Tolerance& tol = {});

/// min over element faces of d(x, g x) / 2.
double injectivity_radius(const DirichletPolyhedron& poly);

/// Distance from p to the geodesic segment between two Klein points; endpoints
/// on or beyond the sphere at infinity are treated as ideal.
double point_segment_distance(const MinkowskiPoint& p, const KleinPoint& a, const KleinPoint& b);

/// max over edges between two non-synthetic faces of the distance from the
/// basepoint to the edge. Throws NoEdges when there is no such edge.
double spine_radius(const DirichletPolyhedron& poly);

/// max distance from the basepoint to a finite (non-ideal) vertex; 0 when
/// there is none.
double max_vertex_distance(const DirichletPolyhedron& poly);

struct VolumeResult {
  double value = 0.0;
  double error_estimate = 0.0;
  /// False when a vertex lies beyond the sphere at infinity.
  bool finite = true;
};

/// Hyperbolic volume by cones from the basepoint over fan triangles of each
/// face. The radial integral is done in closed form; the triangle integral by
/// adaptive tensor Gauss-Legendre in Duffy coordinates, collapsing onto ideal
/// vertices. Throws QuadratureNotConverged when the estimate exceeds
/// rel_tol * value after the refinement budget.
VolumeResult volume(const DirichletPolyhedron& poly, int quadrature_order = 6,
                    double rel_tol = 1e-10);

struct DomainStats {
  double injectivity_radius = 0.0;
  double spine_radius = 0.0;
  double volume = 0.0;
  double volume_error = 0.0;
  double max_vertex_distance = 0.0;
  int word_length_reached = 0;
  /// Stopping rule fired before max_word_length.
  bool converged = false;
  /// No synthetic faces remain and no vertex lies beyond infinity.
  bool bounded = false;
  std::size_t ideal_vertices = 0;
};

struct BuildOptions {
  int max_word_length = 12;
  Tolerance tol;
  bool require_generator_faces = true;
  bool compute_volume = true;
  int quadrature_order = 6;
  double volume_rel_tol = 1e-10;
  double cube_delta = 1e-6;
  /// Upper bound on distinct group elements enumerated.
  std::size_t element_cap = 1'000'000;
};

struct NearMiss {
  Word word;
  double face_diameter = 0.0;
};

struct DomainBuild {
  DirichletPolyhedron poly;
  DomainStats stats;
  std::vector<NearMiss> near_misses;
  std::vector<Word> degenerate_cuts;
  /// Injectivity radius after every accepted cut (bisector faces only).
  std::vector<double> rho_history;
  /// Faces accepted per word length; index 0 is length 1.
  std::vector<std::size_t> new_faces_per_length;
  /// Generators whose bisector (or its inverse's) is not a face.
  std::vector<std::size_t> missing_generators;
};

class GeneratorNotFaceError : public Error {
 public:
  GeneratorNotFaceError(std::size_t index, Word eliminated_by);

  std::size_t generator_index() const { return index_; }
  const Word& eliminated_by() const { return eliminated_by_; }

 private:
  std::size_t index_;
  Word eliminated_by_;
};

/// Cuts the Klein cube by bisectors of all group elements, breadth-first by
/// word length (ties by translation distance), until a word length produces no
/// new face or max_word_length is reached. Throws EmptyGenerators,
/// InvalidArgument (max_word_length < 2) and, when required,
/// GeneratorNotFaceError.
DomainBuild build_domain(const std::vector<MoebiusElement>& generators, const MinkowskiPoint& x,
                         const BuildOptions& options = {});

/// Everything except the combinatorics; spine radius is +inf when there are
/// no real edges.
DomainStats compute_stats(const DirichletPolyhedron& poly, bool with_volume, int quadrature_order,
                          double volume_rel_tol);

struct ReplacedPresentation {
  std::vector<MoebiusElement> generators;
  /// The removed generator as a word in the new generators.
  Word removed_as_word;
  bool verified = false;
};

/// Substitutes generator `removed_index` by the element of `by_word` (a word in
/// the current generators) and re-expresses the removed generator in the new
/// set by breadth-first search up to `max_search_length`. No index: input
/// returned unchanged. Throws InvalidArgument for a bad index and NotVerified
/// when the search fails.
ReplacedPresentation replace_generator(const std::vector<MoebiusElement>& generators,
                                       std::optional<std::size_t> removed_index,
                                       const Word& by_word, int max_search_length = 8,
                                       const Tolerance& tol = {});

}  // namespace hypdir
