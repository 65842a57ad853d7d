#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "hypdir/domain.hpp"

namespace hypdir {

HalfSpace HalfSpace::from_klein(const Vec3& normal, double offset) {
  const double len = norm(normal);
  HalfSpace h;
  h.plane = {normal / len, offset / len};
  h.normal = {-h.plane.offset, -h.plane.normal.x, -h.plane.normal.y, -h.plane.normal.z};
  return h;
}

HalfSpace HalfSpace::from_minkowski(const Vec4& v) {
  const Vec3 spatial{v[1], v[2], v[3]};
  const double len = norm(spatial);
  HalfSpace h;
  h.normal = v;
  h.plane = {-spatial / len, -v[0] / len};
  return h;
}

HalfSpace bisector_halfspace(const MinkowskiPoint& x, const MoebiusElement& g,
                             const Tolerance& tol) {
  const MinkowskiPoint gx = apply(g, x);
  if (dist(x, gx) <= tol.eps_geom) {
    throw Error(ErrorCode::FixesBasepoint, "element moves the basepoint by at most eps_geom");
  }
  HalfSpace h = HalfSpace::from_minkowski(x.coords - gx.coords);
  h.element = g;
  return h;
}

double distance_to_plane(const MinkowskiPoint& p, const HalfSpace& h) {
  const double vv = minkowski_dot(h.normal, h.normal);
  return std::asinh(std::abs(minkowski_dot(p.coords, h.normal)) / std::sqrt(vv));
}

namespace {

std::vector<int> order_cycle(const std::vector<Vertex>& vertices, std::vector<int> ids,
                             const Vec3& normal) {
  Vec3 centroid;
  for (int id : ids) centroid += vertices[id].position.u;
  centroid = centroid / static_cast<double>(ids.size());
  // Reference direction: the vertex farthest from the centroid.
  Vec3 ref;
  double best = -1.0;
  for (int id : ids) {
    Vec3 d = vertices[id].position.u - centroid;
    d -= dot(d, normal) * normal;
    if (dot(d, d) > best) {
      best = dot(d, d);
      ref = d;
    }
  }
  const Vec3 e1 = normalized(ref);
  const Vec3 e2 = cross(normal, e1);
  std::vector<std::pair<double, int>> keyed;
  keyed.reserve(ids.size());
  for (int id : ids) {
    const Vec3 d = vertices[id].position.u - centroid;
    keyed.emplace_back(std::atan2(dot(d, e2), dot(d, e1)), id);
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = keyed[i].second;
  return ids;
}

bool is_ideal(const Vec3& u) { return norm(u) >= kIdealNormThreshold; }

}  // namespace

DirichletPolyhedron DirichletPolyhedron::initial_cube(const MinkowskiPoint& basepoint,
                                                      double delta) {
  DirichletPolyhedron poly;
  poly.basepoint = basepoint;
  const double s = 1.0 - delta;
  for (int i = 0; i < 8; ++i) {
    const Vec3 u{(i & 1) ? s : -s, (i & 2) ? s : -s, (i & 4) ? s : -s};
    poly.vertices.push_back({{u}, is_ideal(u)});
  }
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {1, -1}) {
      Vec3 n;
      if (axis == 0) n.x = sign;
      if (axis == 1) n.y = sign;
      if (axis == 2) n.z = sign;
      std::vector<int> ids;
      for (int i = 0; i < 8; ++i) {
        if (((i >> axis) & 1) == (sign > 0 ? 1 : 0)) ids.push_back(i);
      }
      Face f;
      f.halfspace = HalfSpace::from_klein(n, s);
      f.cycle = order_cycle(poly.vertices, ids, n);
      f.synthetic = true;
      poly.faces.push_back(std::move(f));
    }
  }
  poly.rebuild_edges();
  return poly;
}

bool DirichletPolyhedron::has_synthetic_faces() const {
  return std::any_of(faces.begin(), faces.end(), [](const Face& f) { return f.synthetic; });
}

bool DirichletPolyhedron::has_ideal_vertices() const {
  return std::any_of(vertices.begin(), vertices.end(), [](const Vertex& v) { return v.ideal; });
}

int DirichletPolyhedron::euler_characteristic() const {
  return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(faces.size());
}

bool DirichletPolyhedron::contains(const KleinPoint& p, double eps) const {
  return std::all_of(faces.begin(), faces.end(), [&](const Face& f) {
    return f.halfspace.plane.signed_distance(p.u) <= eps;
  });
}

std::optional<std::size_t> DirichletPolyhedron::face_of(const MoebiusElement& g,
                                                        double eps) const {
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (faces[i].has_element() && equal_up_to_sign(faces[i].element(), g, eps)) return i;
  }
  return std::nullopt;
}

void DirichletPolyhedron::rebuild_edges() {
  std::map<std::pair<int, int>, Edge> table;
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const auto& cyc = faces[fi].cycle;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const int a = cyc[i];
      const int b = cyc[(i + 1) % cyc.size()];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = table.try_emplace({key.first, key.second});
      Edge& e = it->second;
      if (inserted) {
        e.v0 = key.first;
        e.v1 = key.second;
        e.face0 = static_cast<int>(fi);
      } else {
        e.face1 = static_cast<int>(fi);
      }
    }
  }
  edges.clear();
  edges.reserve(table.size());
  for (auto& [key, e] : table) edges.push_back(e);
}

void DirichletPolyhedron::assign_pairings(double eps) {
  for (auto& f : faces) f.paired = -1;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (!faces[i].has_element()) continue;
    const MoebiusElement inv = inverse(faces[i].element());
    if (auto j = face_of(inv, eps)) faces[i].paired = static_cast<int>(*j);
  }
}

std::vector<std::string> check_polyhedron(const DirichletPolyhedron& poly, double eps) {
  std::vector<std::string> problems;
  if (poly.euler_characteristic() != 2) {
    problems.push_back("Euler characteristic " + std::to_string(poly.euler_characteristic()) +
                       " != 2");
  }
  for (std::size_t i = 0; i < poly.edges.size(); ++i) {
    if (poly.edges[i].face1 < 0) {
      problems.push_back("edge " + std::to_string(i) + " borders a single face");
    }
  }
  std::map<std::pair<int, int>, int> uses;
  for (const auto& f : poly.faces) {
    for (std::size_t i = 0; i < f.cycle.size(); ++i) {
      ++uses[{f.cycle[i], f.cycle[(i + 1) % f.cycle.size()]}];
    }
  }
  for (const auto& [key, count] : uses) {
    if (count != 1 || uses.count({key.second, key.first}) != 1) {
      problems.push_back("inconsistent orientation on edge " + std::to_string(key.first) + "-" +
                         std::to_string(key.second));
      break;
    }
  }
  for (std::size_t i = 0; i < poly.faces.size(); ++i) {
    const Face& f = poly.faces[i];
    if (!f.has_element()) continue;
    if (f.paired < 0) {
      problems.push_back("face " + std::to_string(i) + " has no paired face");
      continue;
    }
    const Face& g = poly.faces[static_cast<std::size_t>(f.paired)];
    if (g.paired != static_cast<int>(i)) {
      problems.push_back("pairing of face " + std::to_string(i) + " is not an involution");
    }
    if (!is_identity(compose(f.element(), g.element()), eps)) {
      problems.push_back("pairing product of face " + std::to_string(i) + " is not +-identity");
    }
  }
  return problems;
}

const char* to_string(CutOutcome outcome) {
  switch (outcome) {
    case CutOutcome::Outside: return "outside";
    case CutOutcome::Touching: return "touching";
    case CutOutcome::NearMiss: return "near-miss";
    case CutOutcome::Cut: return "cut";
  }
  return "unknown";
}

CutInfo cut_polyhedron(DirichletPolyhedron& poly, const HalfSpace& hs, const Tolerance& tol) {
  enum Side { In, On, Out };
  const double eps = tol.eps_equal;
  const std::size_t nv = poly.vertices.size();
  std::vector<double> sd(nv);
  std::vector<Side> side(nv);
  bool any_out = false;
  bool any_in = false;
  bool any_on = false;
  for (std::size_t i = 0; i < nv; ++i) {
    sd[i] = hs.plane.signed_distance(poly.vertices[i].position.u);
    side[i] = sd[i] > eps ? Out : (sd[i] < -eps ? In : On);
    any_out = any_out || side[i] == Out;
    any_in = any_in || side[i] == In;
    any_on = any_on || side[i] == On;
  }

  CutInfo info;
  if (!any_out) {
    info.outcome = any_on ? CutOutcome::Touching : CutOutcome::Outside;
    return info;
  }
  if (!any_in) {
    throw Error(ErrorCode::InvalidArgument, "half-space does not meet the polyhedron interior");
  }

  // Points of the new face: kept vertices on the plane and edge crossings.
  std::vector<Vec3> face_points;
  for (std::size_t i = 0; i < nv; ++i) {
    if (side[i] == On) face_points.push_back(poly.vertices[i].position.u);
  }
  std::map<std::pair<int, int>, Vec3> crossings;
  for (const Edge& e : poly.edges) {
    const Side a = side[e.v0];
    const Side b = side[e.v1];
    if ((a == In && b == Out) || (a == Out && b == In)) {
      const Vec3& ua = poly.vertices[e.v0].position.u;
      const Vec3& ub = poly.vertices[e.v1].position.u;
      const double t = sd[e.v0] / (sd[e.v0] - sd[e.v1]);
      const Vec3 p = ua + t * (ub - ua);
      crossings.emplace(std::make_pair(e.v0, e.v1), p);
      face_points.push_back(p);
    }
  }
  for (std::size_t i = 0; i < face_points.size(); ++i) {
    for (std::size_t j = i + 1; j < face_points.size(); ++j) {
      info.face_diameter = std::max(info.face_diameter, norm(face_points[i] - face_points[j]));
    }
  }
  if (face_points.size() < 3 || info.face_diameter <= kNewFaceDiameter) {
    info.outcome = CutOutcome::NearMiss;
    return info;
  }

  // Rebuild vertex list: survivors first (in order), then crossings.
  std::vector<Vertex> vertices;
  std::vector<int> remap(nv, -1);
  std::vector<bool> on_plane;
  for (std::size_t i = 0; i < nv; ++i) {
    if (side[i] == Out) continue;
    remap[i] = static_cast<int>(vertices.size());
    vertices.push_back(poly.vertices[i]);
    on_plane.push_back(side[i] == On);
  }
  std::map<std::pair<int, int>, int> crossing_ids;
  for (const auto& [key, p] : crossings) {
    crossing_ids[key] = static_cast<int>(vertices.size());
    vertices.push_back({{p}, is_ideal(p)});
    on_plane.push_back(true);
  }
  const auto crossing_id = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    return crossing_ids.at({key.first, key.second});
  };

  std::vector<Face> faces;
  std::vector<int> new_face_ids;
  for (std::size_t fi = 0; fi < poly.faces.size(); ++fi) {
    const Face& f = poly.faces[fi];
    std::vector<int> cycle;
    const std::size_t n = f.cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int a = f.cycle[i];
      const int b = f.cycle[(i + 1) % n];
      if (side[a] != Out) cycle.push_back(remap[a]);
      if ((side[a] == In && side[b] == Out) || (side[a] == Out && side[b] == In)) {
        cycle.push_back(crossing_id(a, b));
      }
    }
    const bool flat = std::all_of(cycle.begin(), cycle.end(), [&](int v) { return on_plane[v]; });
    if (cycle.size() < 3 || flat) {
      info.eliminated_faces.push_back(fi);
      info.eliminated_elements.push_back(f.halfspace.element);
      continue;
    }
    Face kept = f;
    kept.cycle = std::move(cycle);
    faces.push_back(std::move(kept));
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (on_plane[i]) new_face_ids.push_back(static_cast<int>(i));
  }
  Face added;
  added.halfspace = hs;
  added.cycle = order_cycle(vertices, new_face_ids, hs.plane.normal);
  faces.push_back(std::move(added));

  // Drop vertices no face uses any more.
  std::vector<int> used(vertices.size(), -1);
  for (const auto& f : faces) {
    for (int v : f.cycle) used[v] = 0;
  }
  std::vector<Vertex> compact;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (used[i] < 0) continue;
    used[i] = static_cast<int>(compact.size());
    compact.push_back(vertices[i]);
  }
  for (auto& f : faces) {
    for (int& v : f.cycle) v = used[v];
  }

  poly.vertices = std::move(compact);
  poly.faces = std::move(faces);
  poly.rebuild_edges();
  info.outcome = CutOutcome::Cut;
  return info;
}

CutResult intersect_halfspace(const DirichletPolyhedron& poly, const HalfSpace& hs,
                              const Tolerance& tol) {
  CutResult out{poly, false, {}};
  out.info = cut_polyhedron(out.poly, hs, tol);
  out.new_face = out.info.outcome == CutOutcome::Cut;
  return out;
}

}  // namespace hypdir
