#pragma once

// Reduction of the big list of tiles to the length spectrum below a cutoff.

#include <cstddef>
#include <string>
#include <vector>

#include "hypdir/tiling.hpp"

namespace hypdir {

struct SpectrumEntry {
  ComplexLength length;
  std::size_t multiplicity = 0;
  /// One word per counted geodesic.
  std::vector<Word> representatives;
};

enum class ExclusionReason { ZeroLength, OverCutoff, ConjugateOf, InverseOf, PowerOf };

const char* to_string(ExclusionReason reason);

struct Exclusion {
  Word word;
  ExclusionReason reason = ExclusionReason::ZeroLength;
  /// Counted representative this element was merged into or is a power of.
  Word reference;
  /// Exponent for PowerOf, otherwise 0.
  int power = 0;
};

struct SmallList {
  std::vector<SpectrumEntry> entries;
  /// One record per tile that is not a counted representative.
  std::vector<Exclusion> exclusions;
};

struct SpectrumOptions {
  Tolerance tol;
  /// Count g and g^-1 as distinct geodesics unless conjugate.
  bool oriented = false;
};

/// Complex lengths of the tiles with 0 < lambda <= cutoff, one per conjugacy
/// class (and per inverse pair unless oriented), proper powers removed.
/// Conjugators are the tile elements. Throws InsufficientRadius when the tiles
/// were built for a radius below tiling_radius(spine_radius, cutoff).
SmallList big_to_small(const TileSet& tiles, double cutoff, double spine_radius,
                       const SpectrumOptions& options = {});

struct SpectrumComparison {
  bool equal = true;
  std::vector<std::string> differences;
};

/// Pairwise comparison: lambda and theta (mod 2 pi) within tol, multiplicity
/// exactly.
SpectrumComparison spectrum_compare(const std::vector<SpectrumEntry>& s1,
                                    const std::vector<SpectrumEntry>& s2, double tol);

}  // namespace hypdir
