#pragma once

// Kernel for hyperbolic 3-space: PSL(2,C) elements, the hyperboloid and
// Klein models, distances and complex translation lengths.

#include <array>
#include <complex>

#include "hypdir/linalg.hpp"
#include "hypdir/tolerance.hpp"
#include "hypdir/words.hpp"

namespace hypdir {

using Complex = std::complex<double>;

/// Point on the upper sheet of the hyperboloid <x,x> = -1.
struct MinkowskiPoint {
  Vec4 coords{1.0, 0.0, 0.0, 0.0};

  static MinkowskiPoint origin() { return {}; }
};

/// Point of the open unit ball in the projective (Klein) model.
struct KleinPoint {
  Vec3 u;
};

/// Complex length lambda + i theta; theta lies in (-pi, pi].
struct ComplexLength {
  double lambda = 0.0;
  double theta = 0.0;
};

/// A 2x2 complex matrix ((a, b), (c, d)) together with the word in the
/// generators it was built from.
class MoebiusElement {
 public:
  MoebiusElement() = default;
  MoebiusElement(Complex a, Complex b, Complex c, Complex d, Word word = {});

  static MoebiusElement identity() { return {}; }

  /// diag(exp(l/2), exp(-l/2)): translation by Re(l) along the vertical axis
  /// combined with rotation by Im(l).
  static MoebiusElement loxodromic(Complex length, Word word = {});

  const Complex& a() const { return m_[0]; }
  const Complex& b() const { return m_[1]; }
  const Complex& c() const { return m_[2]; }
  const Complex& d() const { return m_[3]; }
  const std::array<Complex, 4>& entries() const { return m_; }

  const Word& word() const { return word_; }
  void set_word(Word w) { word_ = std::move(w); }

  double det_residual() const { return det_residual_; }

  Complex det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  Complex trace() const { return m_[0] + m_[3]; }

  MoebiusElement negated() const;

 private:
  friend MoebiusElement normalize(const MoebiusElement&, const Tolerance&);

  std::array<Complex, 4> m_{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}};
  Word word_;
  double det_residual_ = 0.0;
};

/// Scales by 1/sqrt(det) so the determinant is 1. Throws SingularMatrix when
/// |det| <= eps_equal.
MoebiusElement normalize(const MoebiusElement& m, const Tolerance& tol = {});

/// Matrix product g*h with the reduced concatenated word.
MoebiusElement compose(const MoebiusElement& g, const MoebiusElement& h);

/// ((d, -b), (-c, a)) with the inverted word; assumes det = 1.
MoebiusElement inverse(const MoebiusElement& g);

/// Representative of the projective class +-g whose first entry of
/// non-negligible modulus has argument in (-pi/2, pi/2].
MoebiusElement canonical_sign(const MoebiusElement& g);

/// Largest entrywise modulus of the difference of two matrices.
double entry_distance(const MoebiusElement& g, const MoebiusElement& h);

/// True when g = +-h entrywise within eps.
bool equal_up_to_sign(const MoebiusElement& g, const MoebiusElement& h, double eps);

bool is_identity(const MoebiusElement& g, double eps);

/// Matrix product of the letters of `w`; generator k is generators[k-1].
MoebiusElement evaluate_word(const Word& w, const std::vector<MoebiusElement>& generators);

/// Action on H^3 through Hermitian matrices: P -> g P g^*.
MinkowskiPoint apply(const MoebiusElement& g, const MinkowskiPoint& p);

/// The Lorentz matrix of g acting on Minkowski vectors.
Mat4 lorentz_matrix(const MoebiusElement& g);

double dist(const MinkowskiPoint& p, const MinkowskiPoint& q);

/// Throws IdentityElement when g = +-identity.
ComplexLength complex_length(const MoebiusElement& g, const Tolerance& tol = {});

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

KleinPoint to_klein(const MinkowskiPoint& p);
MinkowskiPoint from_klein(const KleinPoint& k);

/// Re-projects onto the hyperboloid (fixes drift in x0).
MinkowskiPoint renormalize(const Vec4& v);

/// Pure boost taking the origin to p, and its inverse.
Mat4 boost_from_origin(const MinkowskiPoint& p);
Mat4 boost_to_origin(const MinkowskiPoint& p);

/// Geodesic from p with initial unit tangent `tangent` (orthogonal to p),
/// evaluated at arc length t.
MinkowskiPoint exp_map(const MinkowskiPoint& p, const Vec4& tangent, double t);

/// Orthonormal frame of the tangent space at p (images of e1, e2, e3 under
/// the boost from the origin).
std::array<Vec4, 3> tangent_frame(const MinkowskiPoint& p);

/// Volume of a hyperbolic ball of radius t: pi (sinh 2t - 2t).
double ball_volume(double t);

}  // namespace hypdir
