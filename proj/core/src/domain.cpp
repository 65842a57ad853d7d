#include "hypdir/domain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "hypdir/wordprob.hpp"

namespace hypdir {

double injectivity_radius(const DirichletPolyhedron& poly) {
  double rho = std::numeric_limits<double>::infinity();
  for (const auto& f : poly.faces) {
    if (!f.has_element()) continue;
    rho = std::min(rho, 0.5 * dist(poly.basepoint, apply(f.element(), poly.basepoint)));
  }
  return rho;
}

namespace {

struct SegmentEnd {
  Vec4 vec;
  bool ideal = false;
};

SegmentEnd homogeneous(const Vec3& u) {
  const double r = norm(u);
  if (r >= 1.0 - 1e-12) {
    const Vec3 w = u / r;
    return {{1.0, w.x, w.y, w.z}, true};
  }
  const double x0 = 1.0 / std::sqrt(1.0 - r * r);
  return {{x0, x0 * u.x, x0 * u.y, x0 * u.z}, false};
}

}  // namespace

double point_segment_distance(const MinkowskiPoint& p, const KleinPoint& a, const KleinPoint& b) {
  // Clip the Euclidean segment to the closed unit ball.
  Vec3 ua = a.u;
  Vec3 ub = b.u;
  const Vec3 d = ub - ua;
  const double qa = dot(d, d);
  const double qb = 2.0 * dot(ua, d);
  const double qc = dot(ua, ua) - 1.0;
  if (qc > 0.0 || dot(ub, ub) > 1.0) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0 || qa == 0.0) return std::numeric_limits<double>::infinity();
    const double s = std::sqrt(disc);
    const double t0 = std::max(0.0, (-qb - s) / (2.0 * qa));
    const double t1 = std::min(1.0, (-qb + s) / (2.0 * qa));
    if (t0 >= t1) return std::numeric_limits<double>::infinity();
    const Vec3 start = a.u + t0 * d;
    const Vec3 end = a.u + t1 * d;
    ua = start;
    ub = end;
  }

  const SegmentEnd A = homogeneous(ua);
  const SegmentEnd B = homogeneous(ub);
  const Vec4& X = p.coords;
  const double aa = minkowski_dot(A.vec, A.vec);
  const double ab = minkowski_dot(A.vec, B.vec);
  const double bb = minkowski_dot(B.vec, B.vec);
  const double xa = minkowski_dot(X, A.vec);
  const double xb = minkowski_dot(X, B.vec);
  const double det = aa * bb - ab * ab;
  if (det != 0.0) {
    const double alpha = (xa * bb - xb * ab) / det;
    const double beta = (aa * xb - ab * xa) / det;
    if (alpha >= 0.0 && beta >= 0.0) {
      const Vec4 par = alpha * A.vec + beta * B.vec;
      const Vec4 perp = X - par;
      return std::asinh(std::sqrt(std::max(0.0, minkowski_dot(perp, perp))));
    }
  }
  double best = std::numeric_limits<double>::infinity();
  if (!A.ideal) best = std::min(best, dist(p, renormalize(A.vec)));
  if (!B.ideal) best = std::min(best, dist(p, renormalize(B.vec)));
  return best;
}

double spine_radius(const DirichletPolyhedron& poly) {
  double r = -1.0;
  for (const Edge& e : poly.edges) {
    if (e.face0 < 0 || e.face1 < 0) continue;
    if (poly.faces[e.face0].synthetic || poly.faces[e.face1].synthetic) continue;
    r = std::max(r, point_segment_distance(poly.basepoint, poly.vertices[e.v0].position,
                                           poly.vertices[e.v1].position));
  }
  if (r < 0.0) throw Error(ErrorCode::NoEdges, "polyhedron has no edge between bisector faces");
  return r;
}

double max_vertex_distance(const DirichletPolyhedron& poly) {
  double r = 0.0;
  for (const auto& v : poly.vertices) {
    if (v.ideal) continue;
    r = std::max(r, dist(poly.basepoint, from_klein(v.position)));
  }
  return r;
}

DomainStats compute_stats(const DirichletPolyhedron& poly, bool with_volume, int quadrature_order,
                          double volume_rel_tol) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  DomainStats s;
  s.injectivity_radius = injectivity_radius(poly);
  try {
    s.spine_radius = spine_radius(poly);
  } catch (const Error&) {
    s.spine_radius = inf;
  }
  s.max_vertex_distance = max_vertex_distance(poly);
  s.ideal_vertices = static_cast<std::size_t>(std::count_if(
      poly.vertices.begin(), poly.vertices.end(), [](const Vertex& v) { return v.ideal; }));
  const bool beyond = std::any_of(poly.vertices.begin(), poly.vertices.end(), [](const Vertex& v) {
    return norm(v.position.u) > 1.0 + 1e-9;
  });
  s.bounded = !poly.has_synthetic_faces() && !beyond;
  s.volume = inf;
  if (with_volume && s.bounded) {
    const VolumeResult v = volume(poly, quadrature_order, volume_rel_tol);
    s.volume = v.value;
    s.volume_error = v.error_estimate;
  }
  return s;
}

GeneratorNotFaceError::GeneratorNotFaceError(std::size_t index, Word eliminated_by)
    : Error(ErrorCode::GeneratorNotFace,
            "generator " + std::to_string(index + 1) + " does not support a face" +
                (eliminated_by.empty() ? std::string{}
                                       : " (eliminated by " + format_word(eliminated_by) + ")")),
      index_(index),
      eliminated_by_(std::move(eliminated_by)) {}

namespace {

// Distance beyond which a bisector cannot meet the polyhedron.
double pruning_bound(const DirichletPolyhedron& poly, const Tolerance& tol) {
  double r = 0.0;
  for (const auto& v : poly.vertices) {
    if (v.ideal) return std::numeric_limits<double>::infinity();
    r = std::max(r, dist(poly.basepoint, from_klein(v.position)));
  }
  return 2.0 * r + tol.eps_geom;
}

struct Candidate {
  std::size_t index;
  double distance;
};

}  // namespace

DomainBuild build_domain(const std::vector<MoebiusElement>& generators, const MinkowskiPoint& x,
                         const BuildOptions& options) {
  const Tolerance& tol = options.tol;
  tol.validate();
  if (generators.empty()) throw Error(ErrorCode::EmptyGenerators, "no generators given");
  if (options.max_word_length < 2) {
    throw Error(ErrorCode::InvalidArgument, "max_word_length must be at least 2");
  }

  std::vector<MoebiusElement> letters;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    MoebiusElement g = normalize(generators[i], tol);
    g.set_word({k});
    MoebiusElement gi = inverse(g);
    gi.set_word({-k});
    letters.push_back(g);
    letters.push_back(gi);
  }

  DomainBuild out;
  out.poly = DirichletPolyhedron::initial_cube(x, options.cube_delta);
  DirichletPolyhedron& poly = out.poly;

  ElementIndex seen = ElementIndex::by_matrix(x, tol.quantum, tol.eps_equal);
  seen.insert(MoebiusElement::identity());

  struct Elimination {
    MoebiusElement element;
    Word by;
  };
  std::vector<Elimination> eliminations;

  std::vector<std::size_t> frontier;
  for (const auto& g : letters) {
    auto [idx, inserted] = seen.find_or_insert(g);
    if (inserted) frontier.push_back(idx);
  }

  int length = 1;
  while (true) {
    if (length > 1) {
      std::vector<std::size_t> next;
      for (std::size_t f : frontier) {
        for (const auto& s : letters) {
          MoebiusElement e = compose(seen[f], s);
          if (e.word().size() != static_cast<std::size_t>(length)) continue;
          auto [idx, inserted] = seen.find_or_insert(e);
          if (inserted) next.push_back(idx);
          if (seen.size() > options.element_cap) {
            throw Error(ErrorCode::ExplosionGuard,
                        "domain enumeration exceeded " + std::to_string(options.element_cap) +
                            " elements");
          }
        }
      }
      frontier = std::move(next);
    }

    std::vector<Candidate> candidates;
    candidates.reserve(frontier.size());
    for (std::size_t idx : frontier) candidates.push_back({idx, dist(x, apply(seen[idx], x))});
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });

    std::size_t new_faces = 0;
    double bound = pruning_bound(poly, tol);
    for (const Candidate& c : candidates) {
      if (c.distance <= tol.eps_geom || c.distance > bound) continue;
      const MoebiusElement& g = seen[c.index];
      const HalfSpace hs = bisector_halfspace(x, g, tol);
      const CutInfo info = cut_polyhedron(poly, hs, tol);
      switch (info.outcome) {
        case CutOutcome::Cut:
          ++new_faces;
          for (const auto& e : info.eliminated_elements) {
            if (e) eliminations.push_back({*e, g.word()});
          }
          out.rho_history.push_back(injectivity_radius(poly));
          bound = pruning_bound(poly, tol);
          break;
        case CutOutcome::NearMiss:
          out.near_misses.push_back({g.word(), info.face_diameter});
          break;
        case CutOutcome::Touching:
          out.degenerate_cuts.push_back(g.word());
          break;
        case CutOutcome::Outside:
          break;
      }
    }
    out.new_faces_per_length.push_back(new_faces);

    if (length >= 2 && new_faces == 0) {
      out.stats.converged = true;
      break;
    }
    if (length >= options.max_word_length) break;
    ++length;
  }

  poly.assign_pairings(tol.eps_equal);
  poly.generators_present.assign(generators.size(), false);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const bool present = poly.face_of(letters[2 * i], tol.eps_equal).has_value() &&
                         poly.face_of(letters[2 * i + 1], tol.eps_equal).has_value();
    poly.generators_present[i] = present;
    if (!present) out.missing_generators.push_back(i);
  }
  if (options.require_generator_faces && !out.missing_generators.empty()) {
    const std::size_t i = out.missing_generators.front();
    Word by;
    for (const auto& e : eliminations) {
      if (equal_up_to_sign(e.element, letters[2 * i], tol.eps_equal) ||
          equal_up_to_sign(e.element, letters[2 * i + 1], tol.eps_equal)) {
        by = e.by;
      }
    }
    throw GeneratorNotFaceError(i, by);
  }

  const int reached = length;
  out.stats = [&] {
    DomainStats s = compute_stats(poly, options.compute_volume, options.quadrature_order,
                                  options.volume_rel_tol);
    s.converged = out.stats.converged;
    s.word_length_reached = reached;
    return s;
  }();
  return out;
}

ReplacedPresentation replace_generator(const std::vector<MoebiusElement>& generators,
                                       std::optional<std::size_t> removed_index,
                                       const Word& by_word, int max_search_length,
                                       const Tolerance& tol) {
  ReplacedPresentation out;
  if (!removed_index) {
    out.generators = generators;
    out.verified = true;
    return out;
  }
  const std::size_t r = *removed_index;
  if (r >= generators.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "generator index " + std::to_string(r + 1) + " out of range");
  }

  std::vector<MoebiusElement> normalized;
  for (const auto& g : generators) normalized.push_back(normalize(g, tol));
  out.generators = normalized;
  out.generators[r] = normalize(evaluate_word(by_word, normalized), tol);
  for (std::size_t i = 0; i < out.generators.size(); ++i) {
    out.generators[i].set_word({static_cast<int>(i) + 1});
  }

  const MoebiusElement& target = normalized[r];
  ElementIndex seen = ElementIndex::by_matrix(MinkowskiPoint::origin(), tol.quantum, tol.eps_equal);
  seen.insert(MoebiusElement::identity());
  std::vector<MoebiusElement> letters;
  for (std::size_t i = 0; i < out.generators.size(); ++i) {
    letters.push_back(out.generators[i]);
    letters.push_back(inverse(out.generators[i]));
  }
  std::vector<MoebiusElement> frontier{MoebiusElement::identity()};
  for (int len = 1; len <= max_search_length; ++len) {
    std::vector<MoebiusElement> next;
    for (const auto& f : frontier) {
      for (const auto& s : letters) {
        MoebiusElement e = compose(f, s);
        if (e.word().size() != static_cast<std::size_t>(len)) continue;
        if (equal_up_to_sign(e, target, tol.eps_equal)) {
          out.removed_as_word = e.word();
          out.verified = true;
          return out;
        }
        if (seen.find_or_insert(e).second) next.push_back(std::move(e));
      }
    }
    frontier = std::move(next);
  }
  throw Error(ErrorCode::NotVerified, "removed generator not found as a word of length <= " +
                                          std::to_string(max_search_length));
}

}  // namespace hypdir
