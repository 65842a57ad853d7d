#include "hypdir/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

namespace hypdir {

const char* to_string(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::ZeroLength: return "zero-length";
    case ExclusionReason::OverCutoff: return "over-cutoff";
    case ExclusionReason::ConjugateOf: return "conjugate-of";
    case ExclusionReason::InverseOf: return "inverse-of";
    case ExclusionReason::PowerOf: return "power-of";
  }
  return "unknown";
}

namespace {

double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  // The smaller index stays the root, so roots are the earliest members.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Candidate {
  std::size_t tile = 0;
  ComplexLength length;
};

// Elements sharing one complex length.
struct LengthGroup {
  ComplexLength length;
  std::vector<std::size_t> members;  // indices into candidates, in tile order
  double max_distance = 0.0;
};

}  // namespace

SmallList big_to_small(const TileSet& tiles, double cutoff, double spine_radius,
                       const SpectrumOptions& options) {
  const Tolerance& tol = options.tol;
  if (cutoff < 0.0) throw Error(ErrorCode::InvalidArgument, "big_to_small: negative cutoff");
  if (!std::isfinite(spine_radius) ||
      tiles.radius + tol.eps_geom < tiling_radius(spine_radius, cutoff)) {
    std::ostringstream msg;
    msg << "tiles cover radius " << tiles.radius << " but the cutoff needs "
        << (std::isfinite(spine_radius) ? tiling_radius(spine_radius, cutoff) : spine_radius);
    throw Error(ErrorCode::InsufficientRadius, msg.str());
  }

  SmallList out;
  const MinkowskiPoint& x = tiles.basepoint;
  const double length_tol = 10.0 * tol.eps_equal;

  // (a), (b): complex lengths and the two cheap exclusions.
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < tiles.tiles.size(); ++i) {
    const MoebiusElement& g = tiles.tiles[i].element;
    std::optional<ComplexLength> len;
    try {
      len = complex_length(g, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IdentityElement) throw;
    }
    // acosh is ill-conditioned at trace +-2, so parabolics are recognised by
    // their trace rather than by the computed length.
    const bool parabolic = std::abs(g.trace() * g.trace() - 4.0) <= tol.eps_equal;
    if (!len || parabolic || len->lambda <= tol.eps_equal) {
      out.exclusions.push_back({g.word(), ExclusionReason::ZeroLength, {}, 0});
    } else if (len->lambda > cutoff + tol.eps_equal) {
      out.exclusions.push_back({g.word(), ExclusionReason::OverCutoff, {}, 0});
    } else {
      candidates.push_back({i, *len});
    }
  }

  // (c): group by complex length.
  std::vector<std::size_t> by_length(candidates.size());
  std::iota(by_length.begin(), by_length.end(), 0);
  std::stable_sort(by_length.begin(), by_length.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].length.lambda < candidates[b].length.lambda;
  });
  std::vector<LengthGroup> groups;
  std::vector<std::size_t> group_of(candidates.size());
  for (std::size_t c : by_length) {
    const ComplexLength& len = candidates[c].length;
    std::optional<std::size_t> found;
    for (std::size_t k = groups.size(); k-- > 0;) {
      if (len.lambda - groups[k].length.lambda > length_tol) break;
      if (angle_gap(groups[k].length.theta, len.theta) <= length_tol) {
        found = k;
        break;
      }
    }
    if (!found) {
      groups.push_back({len, {}, 0.0});
      found = groups.size() - 1;
    }
    groups[*found].members.push_back(c);
    group_of[c] = *found;
  }
  for (auto& grp : groups) {
    std::sort(grp.members.begin(), grp.members.end());
    for (std::size_t c : grp.members) {
      grp.max_distance = std::max(grp.max_distance, tiles.tiles[candidates[c].tile].distance);
    }
  }

  std::vector<MoebiusElement> conjugators;
  std::vector<MoebiusElement> conjugator_inverses;
  for (const auto& t : tiles.tiles) {
    conjugators.push_back(t.element);
    conjugator_inverses.push_back(inverse(t.element));
  }

  // (d): conjugacy classes, then inverse links between classes.
  UnionFind conj(candidates.size());
  std::vector<std::pair<std::size_t, std::size_t>> inverse_links;
  std::vector<ElementIndex> group_index;
  for (const auto& grp : groups) {
    ElementIndex index = ElementIndex::by_geometry(x, tiles.rho, tol);
    for (std::size_t c : grp.members) index.insert(tiles.tiles[candidates[c].tile].element);
    group_index.push_back(std::move(index));
  }
  // Finds members of `grp` equal to some conjugate q h q^-1.
  const auto conjugates_in = [&](std::size_t grp, const MoebiusElement& h, auto&& visit) {
    const double reach = groups[grp].max_distance + tol.eps_geom;
    for (std::size_t q = 0; q < conjugators.size(); ++q) {
      const MoebiusElement c = compose(compose(conjugators[q], h), conjugator_inverses[q]);
      if (dist(x, apply(c, x)) > reach) continue;
      if (const auto hit = group_index[grp].find(c)) visit(groups[grp].members[*hit]);
    }
  };
  for (std::size_t k = 0; k < groups.size(); ++k) {
    for (std::size_t c : groups[k].members) {
      const MoebiusElement& g = tiles.tiles[candidates[c].tile].element;
      conjugates_in(k, g, [&](std::size_t other) { conj.unite(c, other); });
      if (!options.oriented) {
        const MoebiusElement gi = inverse(g);
        conjugates_in(k, gi, [&](std::size_t other) { inverse_links.emplace_back(c, other); });
      }
    }
  }
  UnionFind geodesic(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) geodesic.unite(c, conj.find(c));
  for (const auto& [a, b] : inverse_links) geodesic.unite(a, b);

  // (e): proper powers of counted geodesics, shortest roots first.
  std::vector<std::optional<std::pair<std::size_t, int>>> power_of(candidates.size());
  for (std::size_t c : by_length) {
    if (geodesic.find(c) != c) continue;
    if (power_of[c]) continue;
    const MoebiusElement& root = tiles.tiles[candidates[c].tile].element;
    MoebiusElement p = root;
    for (int k = 2; k * candidates[c].length.lambda <= cutoff + tol.eps_equal; ++k) {
      p = compose(p, root);
      const ComplexLength plen = complex_length(p, tol);
      for (std::size_t grp = 0; grp < groups.size(); ++grp) {
        if (std::abs(groups[grp].length.lambda - plen.lambda) > length_tol) continue;
        if (angle_gap(groups[grp].length.theta, plen.theta) > length_tol) continue;
        conjugates_in(grp, p, [&](std::size_t other) {
          const std::size_t target = geodesic.find(other);
          if (target != c && !power_of[target]) power_of[target] = std::make_pair(c, k);
        });
      }
    }
  }

  // (f): entries and the remaining exclusion records.
  std::map<std::size_t, std::vector<std::size_t>> counted_per_group;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::size_t root = geodesic.find(c);
    const Word& word = tiles.tiles[candidates[c].tile].element.word();
    const Word& root_word = tiles.tiles[candidates[root].tile].element.word();
    if (power_of[root]) {
      const auto [base, k] = *power_of[root];
      out.exclusions.push_back(
          {word, ExclusionReason::PowerOf, tiles.tiles[candidates[base].tile].element.word(), k});
    } else if (root == c) {
      counted_per_group[group_of[c]].push_back(c);
    } else if (conj.find(c) == conj.find(root)) {
      out.exclusions.push_back({word, ExclusionReason::ConjugateOf, root_word, 0});
    } else {
      out.exclusions.push_back({word, ExclusionReason::InverseOf, root_word, 0});
    }
  }
  for (const auto& [grp, reps] : counted_per_group) {
    SpectrumEntry entry;
    entry.length = candidates[reps.front()].length;
    entry.multiplicity = reps.size();
    for (std::size_t c : reps) {
      entry.representatives.push_back(tiles.tiles[candidates[c].tile].element.word());
    }
    out.entries.push_back(std::move(entry));
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) {
              if (a.length.lambda != b.length.lambda) return a.length.lambda < b.length.lambda;
              if (std::abs(a.length.theta) != std::abs(b.length.theta)) {
                return std::abs(a.length.theta) < std::abs(b.length.theta);
              }
              return a.length.theta < b.length.theta;
            });
  return out;
}

SpectrumComparison spectrum_compare(const std::vector<SpectrumEntry>& s1,
                                    const std::vector<SpectrumEntry>& s2, double tol) {
  SpectrumComparison cmp;
  if (s1.size() != s2.size()) {
    cmp.equal = false;
    std::ostringstream msg;
    msg << "entry counts differ: " << s1.size() << " vs " << s2.size();
    cmp.differences.push_back(msg.str());
  }
  const std::size_t n = std::min(s1.size(), s2.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = s1[i];
    const auto& b = s2[i];
    const bool same_length = std::abs(a.length.lambda - b.length.lambda) <= tol &&
                             angle_gap(a.length.theta, b.length.theta) <= tol;
    if (!same_length || a.multiplicity != b.multiplicity) {
      cmp.equal = false;
      std::ostringstream msg;
      msg.precision(12);
      msg << "entry " << i << ": (" << a.length.lambda << ", " << a.length.theta << ") x"
          << a.multiplicity << " vs (" << b.length.lambda << ", " << b.length.theta << ") x"
          << b.multiplicity;
      cmp.differences.push_back(msg.str());
    }
  }
  return cmp;
}

}  // namespace hypdir
