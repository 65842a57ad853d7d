#pragma once

// Equality of group elements from approximate geometric data, and a hash
// index that turns candidate collisions into verdicts.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hypdir/hypcore.hpp"

namespace hypdir {

/// Measurements behind a same_element verdict.
struct SameElementEvidence {
  bool equal = false;
  /// 1: traces differ, 2: basepoint translation distances differ by >= 2 rho,
  /// 3: decided by the distance between the two images of the basepoint.
  int stage = 0;
  double trace_gap = 0.0;
  double translation_gap = 0.0;
  double image_distance = 0.0;
  double two_rho = 0.0;
};

/// Decides whether g and h are the same element of a discrete torsion-free
/// group whose Dirichlet domain at x has injectivity radius rho. Traces are
/// compared by |Re tr| since elements are only defined up to sign.
/// Throws InvalidRho when rho <= eps_geom.
SameElementEvidence same_element_evidence(const MoebiusElement& g, const MoebiusElement& h,
                                          const MinkowskiPoint& x, double rho,
                                          const Tolerance& tol = {});

bool same_element(const MoebiusElement& g, const MoebiusElement& h, const MinkowskiPoint& x,
                  double rho, const Tolerance& tol = {});

/// Quantized hash key: the squared trace (invariant under g -> -g) and the
/// Klein coordinates of g(x), each in cells of size `quantum`.
struct CanonicalKey {
  std::array<std::int64_t, 5> cells{};

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept;
};

CanonicalKey canonical_key(const MoebiusElement& g, const MinkowskiPoint& x, double quantum);

/// The key itself and all 3^5 - 1 adjacent cells.
std::vector<CanonicalKey> neighbor_keys(const CanonicalKey& key);

/// Deduplicating store of group elements. Lookups probe the element's cell and
/// the adjacent cells across any boundary within a quarter cell of the key;
/// a hit only counts once `same` confirms it.
class ElementIndex {
 public:
  using Verdict = std::function<bool(const MoebiusElement&, const MoebiusElement&)>;

  ElementIndex(MinkowskiPoint x, double quantum, Verdict same);

  /// Index with verdict "equal up to sign within eps".
  static ElementIndex by_matrix(MinkowskiPoint x, double quantum, double eps);
  /// Index with the same_element verdict.
  static ElementIndex by_geometry(MinkowskiPoint x, double rho, const Tolerance& tol);

  std::optional<std::size_t> find(const MoebiusElement& g) const;
  std::size_t insert(MoebiusElement g);
  /// Returns (index, inserted).
  std::pair<std::size_t, bool> find_or_insert(const MoebiusElement& g);

  std::size_t size() const { return elements_.size(); }
  const MoebiusElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<MoebiusElement>& elements() const { return elements_; }

 private:
  std::optional<std::size_t> find_with_key(const MoebiusElement& g,
                                           const std::array<double, 5>& coords) const;

  MinkowskiPoint x_;
  double quantum_;
  Verdict same_;
  std::vector<MoebiusElement> elements_;
  std::unordered_map<CanonicalKey, std::vector<std::size_t>, CanonicalKeyHash> cells_;
};

/// Keeps the first occurrence of each group element; removals are decided by
/// same_element only.
std::vector<MoebiusElement> dedup(const std::vector<MoebiusElement>& list,
                                  const MinkowskiPoint& x, double rho,
                                  const Tolerance& tol = {});

}  // namespace hypdir
