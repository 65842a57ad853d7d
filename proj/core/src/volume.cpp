#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "hypdir/domain.hpp"

namespace hypdir {

namespace {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// Integral over s in [0,1] of s^2 / (1 - s^2 |q|^2)^2, given 1 - |q|^2.
double radial_integral(double one_minus_s) {
  const double s = 1.0 - one_minus_s;
  if (s < 0.01) {
    double sum = 0.0;
    double power = 1.0;
    for (int k = 0; k < 14; ++k) {
      sum += (k + 1.0) * power / (2.0 * k + 3.0);
      power *= s;
    }
    return sum;
  }
  const double r = std::sqrt(s);
  const double atanh_r = 0.5 * std::log((1.0 + r) * (1.0 + r) / one_minus_s);
  return (r / one_minus_s - atanh_r) / (2.0 * r * s);
}

// Triangle with a distinguished corner p0 (possibly ideal) and the cone over
// it from the origin, at Euclidean height h.
struct ConeTriangle {
  Vec3 p0, p1, p2;
  double height = 0.0;
};

class TriangleIntegrator {
 public:
  explicit TriangleIntegrator(int order) : rule_(gauss_legendre(order)) {}

  // Returns (value, error estimate).
  std::pair<double, double> integrate(const ConeTriangle& tri, double rel_tol) const {
    const Vec3 e1 = tri.p1 - tri.p0;
    const Vec3 e2 = tri.p2 - tri.p1;
    const double jac = norm(cross(e1, e2));  // twice the area
    const double base = 1.0 - dot(tri.p0, tri.p0);
    const auto f = [&](double t, double w) {
      const Vec3 d = e1 + w * e2;
      const double one_minus_s = base - t * (2.0 * dot(tri.p0, d) + t * dot(d, d));
      return radial_integral(one_minus_s) * jac * t;
    };

    struct Cell {
      double t0, t1, w0, w1;
      double value;
      double error;
      bool operator<(const Cell& o) const { return error < o.error; }
    };
    const auto rule_on = [&](double t0, double t1, double w0, double w1) {
      double sum = 0.0;
      const std::size_t n = rule_.nodes.size();
      for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * rule_.nodes[i];
        for (std::size_t j = 0; j < n; ++j) {
          const double w = w0 + (w1 - w0) * rule_.nodes[j];
          sum += rule_.weights[i] * rule_.weights[j] * f(t, w);
        }
      }
      return sum * (t1 - t0) * (w1 - w0);
    };
    const auto make = [&](double t0, double t1, double w0, double w1) {
      const double coarse = rule_on(t0, t1, w0, w1);
      const double tm = 0.5 * (t0 + t1);
      const double wm = 0.5 * (w0 + w1);
      const double fine = rule_on(t0, tm, w0, wm) + rule_on(tm, t1, w0, wm) +
                          rule_on(t0, tm, wm, w1) + rule_on(tm, t1, wm, w1);
      return Cell{t0, t1, w0, w1, fine, std::abs(fine - coarse)};
    };

    std::priority_queue<Cell> cells;
    cells.push(make(0.0, 1.0, 0.0, 1.0));
    double value = cells.top().value;
    double error = cells.top().error;
    int splits = 0;
    while (error > rel_tol * std::abs(value) && splits < kMaxSplits) {
      const Cell c = cells.top();
      cells.pop();
      value -= c.value;
      error -= c.error;
      const double tm = 0.5 * (c.t0 + c.t1);
      const double wm = 0.5 * (c.w0 + c.w1);
      for (const Cell& child : {make(c.t0, tm, c.w0, wm), make(tm, c.t1, c.w0, wm),
                                make(c.t0, tm, wm, c.w1), make(tm, c.t1, wm, c.w1)}) {
        value += child.value;
        error += child.error;
        cells.push(child);
      }
      ++splits;
    }
    return {value * tri.height, std::max(0.0, error) * tri.height};
  }

 private:
  static constexpr int kMaxSplits = 4000;
  GaussRule rule_;
};

Vec3 klein_image(const Mat4& m, const Vec3& u, bool ideal) {
  const Vec4 y = m * Vec4{1.0, u.x, u.y, u.z};
  Vec3 out{y[1] / y[0], y[2] / y[0], y[3] / y[0]};
  if (ideal) out = normalized(out);
  return out;
}

}  // namespace

VolumeResult volume(const DirichletPolyhedron& poly, int quadrature_order, double rel_tol) {
  VolumeResult result;
  bool unbounded = poly.has_synthetic_faces();
  for (const auto& v : poly.vertices) unbounded = unbounded || norm(v.position.u) > 1.0 + 1e-9;
  {
    if (unbounded) {
      result.finite = false;
      result.value = std::numeric_limits<double>::infinity();
      return result;
    }
  }

  // Work in the frame where the basepoint is the Klein origin.
  const Mat4 to_origin = boost_to_origin(poly.basepoint);
  std::vector<Vec3> verts;
  std::vector<bool> ideal;
  verts.reserve(poly.vertices.size());
  for (const auto& v : poly.vertices) {
    verts.push_back(klein_image(to_origin, v.position.u, v.ideal));
    ideal.push_back(v.ideal);
  }

  const TriangleIntegrator integrator(quadrature_order);
  for (const Face& face : poly.faces) {
    const HalfSpace moved = HalfSpace::from_minkowski(to_origin * face.halfspace.normal);
    const double height = moved.plane.offset;
    Vec3 centroid;
    for (int v : face.cycle) centroid += verts[v];
    centroid = centroid / static_cast<double>(face.cycle.size());

    const auto add = [&](const ConeTriangle& tri) {
      const auto [value, error] = integrator.integrate(tri, rel_tol);
      result.value += value;
      result.error_estimate += error;
    };
    const std::size_t n = face.cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int a = face.cycle[i];
      const int b = face.cycle[(i + 1) % n];
      if (ideal[a] && ideal[b]) {
        const Vec3 mid = 0.5 * (verts[a] + verts[b]);
        add({verts[a], mid, centroid, height});
        add({verts[b], centroid, mid, height});
      } else if (ideal[b]) {
        add({verts[b], centroid, verts[a], height});
      } else {
        add({verts[a], verts[b], centroid, height});
      }
    }
  }

  if (result.error_estimate > rel_tol * std::abs(result.value)) {
    throw Error(ErrorCode::QuadratureNotConverged,
                "volume quadrature error estimate " + std::to_string(result.error_estimate) +
                    " exceeds the requested bound");
  }
  return result;
}

}  // namespace hypdir
