#pragma once

namespace hypdir {

/// Comparison slack shared by every module.
///
/// `eps_equal` is a dimensionless slack for matrix entries, determinants and
/// traces; `eps_geom` is a slack in units of hyperbolic length; `quantum` is
/// the cell size used when quantizing values into hash keys.
struct Tolerance {
  double eps_equal = 1e-9;
  double eps_geom = 1e-9;
  double quantum = 1e-6;

  /// Throws Error(InvalidArgument) unless 0 < eps_* < 1e-3 and
  /// quantum >= 4 * eps_geom.
  void validate() const;
};

}  // namespace hypdir
