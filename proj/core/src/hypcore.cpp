#include "hypdir/hypcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypdir/errors.hpp"

namespace hypdir {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::IdentityElement: return "IdentityElement";
    case ErrorCode::FixesBasepoint: return "FixesBasepoint";
    case ErrorCode::EmptyGenerators: return "EmptyGenerators";
    case ErrorCode::GeneratorNotFace: return "GeneratorNotFace";
    case ErrorCode::NotVerified: return "NotVerified";
    case ErrorCode::NoEdges: return "NoEdges";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::InvalidRho: return "InvalidRho";
    case ErrorCode::InsufficientRadius: return "InsufficientRadius";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  if (!(eps_equal > 0.0 && eps_equal < 1e-3)) {
    throw Error(ErrorCode::InvalidArgument, "eps_equal must lie in (0, 1e-3)");
  }
  if (!(eps_geom > 0.0 && eps_geom < 1e-3)) {
    throw Error(ErrorCode::InvalidArgument, "eps_geom must lie in (0, 1e-3)");
  }
  if (!(quantum >= 4.0 * eps_geom)) {
    throw Error(ErrorCode::InvalidArgument, "quantum must be at least 4 * eps_geom");
  }
}

MoebiusElement::MoebiusElement(Complex a, Complex b, Complex c, Complex d, Word word)
    : m_{a, b, c, d}, word_(std::move(word)) {}

MoebiusElement MoebiusElement::loxodromic(Complex length, Word word) {
  const Complex half = 0.5 * length;
  return {std::exp(half), 0.0, 0.0, std::exp(-half), std::move(word)};
}

MoebiusElement MoebiusElement::negated() const {
  MoebiusElement out = *this;
  for (auto& z : out.m_) z = -z;
  return out;
}

MoebiusElement normalize(const MoebiusElement& m, const Tolerance& tol) {
  const Complex det = m.det();
  if (std::abs(det) <= tol.eps_equal) {
    throw Error(ErrorCode::SingularMatrix, "matrix is singular (|det| <= eps_equal)");
  }
  const Complex scale = 1.0 / std::sqrt(det);
  MoebiusElement out = m;
  for (auto& z : out.m_) z *= scale;
  out.det_residual_ = std::abs(out.det() - 1.0);
  return out;
}

MoebiusElement compose(const MoebiusElement& g, const MoebiusElement& h) {
  const auto& x = g.entries();
  const auto& y = h.entries();
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3],
          concat_words(g.word(), h.word())};
}

MoebiusElement inverse(const MoebiusElement& g) {
  return {g.d(), -g.b(), -g.c(), g.a(), inverse_word(g.word())};
}

MoebiusElement canonical_sign(const MoebiusElement& g) {
  double scale = 0.0;
  for (const auto& z : g.entries()) scale = std::max(scale, std::abs(z));
  for (const auto& z : g.entries()) {
    if (std::abs(z) <= 1e-12 * scale) continue;
    const bool keep = z.real() > 0.0 || (z.real() == 0.0 && z.imag() > 0.0);
    return keep ? g : g.negated();
  }
  return g;
}

double entry_distance(const MoebiusElement& g, const MoebiusElement& h) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    worst = std::max(worst, std::abs(g.entries()[i] - h.entries()[i]));
  }
  return worst;
}

bool equal_up_to_sign(const MoebiusElement& g, const MoebiusElement& h, double eps) {
  double plus = 0.0;
  double minus = 0.0;
  for (int i = 0; i < 4; ++i) {
    plus = std::max(plus, std::abs(g.entries()[i] - h.entries()[i]));
    minus = std::max(minus, std::abs(g.entries()[i] + h.entries()[i]));
  }
  return std::min(plus, minus) <= eps;
}

bool is_identity(const MoebiusElement& g, double eps) {
  return equal_up_to_sign(g, MoebiusElement::identity(), eps);
}

MoebiusElement evaluate_word(const Word& w, const std::vector<MoebiusElement>& generators) {
  MoebiusElement out;
  for (int letter : w) {
    const auto k = static_cast<std::size_t>(std::abs(letter));
    if (letter == 0 || k > generators.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "word letter " + std::to_string(letter) + " is not a generator index");
    }
    const MoebiusElement& g = generators[k - 1];
    MoebiusElement step = letter > 0 ? g : inverse(g);
    step.set_word({letter});
    out = compose(out, step);
  }
  return out;
}

namespace {

// Linear action on the Hermitian matrix [[x0+x3, x1+i x2], [x1-i x2, x0-x3]].
Vec4 act_linear(const MoebiusElement& g, const Vec4& x) {
  const Complex p00 = x[0] + x[3];
  const Complex p01{x[1], x[2]};
  const Complex p10{x[1], -x[2]};
  const Complex p11 = x[0] - x[3];
  const auto& m = g.entries();
  // Q = g P g^*
  const Complex t00 = m[0] * p00 + m[1] * p10;
  const Complex t01 = m[0] * p01 + m[1] * p11;
  const Complex t10 = m[2] * p00 + m[3] * p10;
  const Complex t11 = m[2] * p01 + m[3] * p11;
  const Complex q00 = t00 * std::conj(m[0]) + t01 * std::conj(m[1]);
  const Complex q01 = t00 * std::conj(m[2]) + t01 * std::conj(m[3]);
  const Complex q11 = t10 * std::conj(m[2]) + t11 * std::conj(m[3]);
  return {0.5 * (q00.real() + q11.real()), q01.real(), q01.imag(),
          0.5 * (q00.real() - q11.real())};
}

}  // namespace

MinkowskiPoint renormalize(const Vec4& v) {
  const double s = v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
  return {{std::sqrt(1.0 + s), v[1], v[2], v[3]}};
}

MinkowskiPoint apply(const MoebiusElement& g, const MinkowskiPoint& p) {
  return renormalize(act_linear(g, p.coords));
}

Mat4 lorentz_matrix(const MoebiusElement& g) {
  Mat4 out{};
  for (int j = 0; j < 4; ++j) {
    Vec4 e{};
    e[j] = 1.0;
    const Vec4 col = act_linear(g, e);
    for (int i = 0; i < 4; ++i) out[i][j] = col[i];
  }
  return out;
}

double dist(const MinkowskiPoint& p, const MinkowskiPoint& q) {
  // 2 asinh(|p - q| / 2) equals arccosh(-<p,q>) on the hyperboloid and keeps
  // full relative precision for nearby points.
  const Vec4 diff = p.coords - q.coords;
  const double s = std::max(0.0, minkowski_dot(diff, diff));
  return 2.0 * std::asinh(0.5 * std::sqrt(s));
}

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t <= -std::numbers::pi) t += two_pi;
  if (t > std::numbers::pi) t -= two_pi;
  return t;
}

ComplexLength complex_length(const MoebiusElement& g, const Tolerance& tol) {
  if (is_identity(g, tol.eps_equal)) {
    throw Error(ErrorCode::IdentityElement, "complex length of the identity is undefined");
  }
  Complex l = 2.0 * std::acosh(0.5 * g.trace());
  if (l.real() < 0.0) l = -l;
  ComplexLength out{l.real(), wrap_angle(l.imag())};
  if (out.lambda <= tol.eps_equal) {
    // Parabolic or elliptic: the rotation sense is not determined by +-tr.
    out.lambda = std::max(0.0, out.lambda);
    out.theta = std::abs(out.theta);
  }
  return out;
}

KleinPoint to_klein(const MinkowskiPoint& p) {
  const auto& x = p.coords;
  return {{x[1] / x[0], x[2] / x[0], x[3] / x[0]}};
}

MinkowskiPoint from_klein(const KleinPoint& k) {
  const double s = dot(k.u, k.u);
  if (!(s < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Klein point outside the open unit ball");
  }
  const double x0 = 1.0 / std::sqrt(1.0 - s);
  return {{x0, x0 * k.u.x, x0 * k.u.y, x0 * k.u.z}};
}

namespace {

Mat4 boost(const Vec4& x) {
  Mat4 b{};
  b[0][0] = x[0];
  for (int i = 1; i < 4; ++i) {
    b[0][i] = x[i];
    b[i][0] = x[i];
    for (int j = 1; j < 4; ++j) {
      b[i][j] = (i == j ? 1.0 : 0.0) + x[i] * x[j] / (1.0 + x[0]);
    }
  }
  return b;
}

}  // namespace

Mat4 boost_from_origin(const MinkowskiPoint& p) { return boost(p.coords); }

Mat4 boost_to_origin(const MinkowskiPoint& p) {
  const auto& x = p.coords;
  return boost({x[0], -x[1], -x[2], -x[3]});
}

MinkowskiPoint exp_map(const MinkowskiPoint& p, const Vec4& tangent, double t) {
  return renormalize(std::cosh(t) * p.coords + std::sinh(t) * tangent);
}

std::array<Vec4, 3> tangent_frame(const MinkowskiPoint& p) {
  const Mat4 b = boost_from_origin(p);
  std::array<Vec4, 3> out{};
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 4; ++i) out[k][i] = b[i][k + 1];
  }
  return out;
}

double ball_volume(double t) {
  const double u = 2.0 * t;
  if (u < 1e-2) {
    // sinh(u) - u = u^3/6 + u^5/120 + u^7/5040 + ...
    const double u2 = u * u;
    return std::numbers::pi * u * u2 * (1.0 / 6.0 + u2 * (1.0 / 120.0 + u2 / 5040.0));
  }
  return std::numbers::pi * (std::sinh(u) - u);
}

}  // namespace hypdir
