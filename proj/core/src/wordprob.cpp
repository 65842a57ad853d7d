#include "hypdir/wordprob.hpp"

#include <cmath>

#include "hypdir/errors.hpp"

namespace hypdir {

SameElementEvidence same_element_evidence(const MoebiusElement& g, const MoebiusElement& h,
                                          const MinkowskiPoint& x, double rho,
                                          const Tolerance& tol) {
  if (!(rho > tol.eps_geom)) {
    throw Error(ErrorCode::InvalidRho, "injectivity radius must exceed eps_geom");
  }
  SameElementEvidence ev;
  ev.two_rho = 2.0 * rho;

  ev.trace_gap = std::abs(std::abs(g.trace().real()) - std::abs(h.trace().real()));
  if (ev.trace_gap > tol.eps_equal) {
    ev.stage = 1;
    return ev;
  }

  const MinkowskiPoint gx = apply(g, x);
  const MinkowskiPoint hx = apply(h, x);
  ev.translation_gap = std::abs(dist(x, gx) - dist(x, hx));
  if (ev.translation_gap >= ev.two_rho) {
    ev.stage = 2;
    return ev;
  }

  ev.stage = 3;
  ev.image_distance = dist(gx, hx);
  // The closest distinct image sits at exactly 2 rho (the shortest face
  // element), so the strict test needs slack on the safe side.
  ev.equal = ev.image_distance < ev.two_rho - tol.eps_geom;
  return ev;
}

bool same_element(const MoebiusElement& g, const MoebiusElement& h, const MinkowskiPoint& x,
                  double rho, const Tolerance& tol) {
  return same_element_evidence(g, h, x, rho, tol).equal;
}

std::size_t CanonicalKeyHash::operator()(const CanonicalKey& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::int64_t c : k.cells) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

namespace {

// Unquantized key coordinates in units of the quantum.
std::array<double, 5> key_coordinates(const MoebiusElement& g, const MinkowskiPoint& x,
                                      double quantum) {
  const Complex tr = g.trace();
  const Complex tr2 = tr * tr;
  const KleinPoint k = to_klein(apply(g, x));
  return {tr2.real() / quantum, tr2.imag() / quantum, k.u.x / quantum, k.u.y / quantum,
          k.u.z / quantum};
}

CanonicalKey quantize(const std::array<double, 5>& v) {
  CanonicalKey key;
  for (int i = 0; i < 5; ++i) key.cells[i] = static_cast<std::int64_t>(std::floor(v[i]));
  return key;
}

}  // namespace

CanonicalKey canonical_key(const MoebiusElement& g, const MinkowskiPoint& x, double quantum) {
  return quantize(key_coordinates(g, x, quantum));
}

std::vector<CanonicalKey> neighbor_keys(const CanonicalKey& key) {
  std::vector<CanonicalKey> out;
  out.reserve(243);
  out.push_back(key);
  for (int code = 0; code < 243; ++code) {
    CanonicalKey k = key;
    int rest = code;
    bool centre = true;
    for (int i = 0; i < 5; ++i) {
      const int offset = rest % 3 - 1;
      rest /= 3;
      k.cells[i] += offset;
      centre = centre && offset == 0;
    }
    if (!centre) out.push_back(k);
  }
  return out;
}

ElementIndex::ElementIndex(MinkowskiPoint x, double quantum, Verdict same)
    : x_(x), quantum_(quantum), same_(std::move(same)) {}

ElementIndex ElementIndex::by_matrix(MinkowskiPoint x, double quantum, double eps) {
  return ElementIndex(x, quantum, [eps](const MoebiusElement& g, const MoebiusElement& h) {
    return equal_up_to_sign(g, h, eps);
  });
}

ElementIndex ElementIndex::by_geometry(MinkowskiPoint x, double rho, const Tolerance& tol) {
  if (!(rho > tol.eps_geom)) {
    throw Error(ErrorCode::InvalidRho, "injectivity radius must exceed eps_geom");
  }
  return ElementIndex(x, tol.quantum,
                      [x, rho, tol](const MoebiusElement& g, const MoebiusElement& h) {
                        return same_element(g, h, x, rho, tol);
                      });
}

std::optional<std::size_t> ElementIndex::find_with_key(const MoebiusElement& g,
                                                       const std::array<double, 5>& coords) const {
  std::optional<std::size_t> best;
  if (cells_.empty()) return best;
  // Adjacent cells are probed only across boundaries closer than a quarter
  // cell; copies of one element differ by far less than that.
  const CanonicalKey key = quantize(coords);
  std::array<std::array<int, 3>, 5> offsets{};
  std::array<int, 5> counts{};
  for (int i = 0; i < 5; ++i) {
    const double frac = coords[i] - std::floor(coords[i]);
    offsets[i][counts[i]++] = 0;
    if (frac < 0.25) offsets[i][counts[i]++] = -1;
    if (frac > 0.75) offsets[i][counts[i]++] = 1;
  }
  std::array<int, 5> pick{};
  while (true) {
    CanonicalKey k = key;
    for (int i = 0; i < 5; ++i) k.cells[i] += offsets[i][pick[i]];
    const auto it = cells_.find(k);
    if (it != cells_.end()) {
      for (std::size_t idx : it->second) {
        if ((!best || idx < *best) && same_(elements_[idx], g)) best = idx;
      }
    }
    int i = 0;
    while (i < 5 && ++pick[i] == counts[i]) pick[i++] = 0;
    if (i == 5) break;
  }
  return best;
}

std::optional<std::size_t> ElementIndex::find(const MoebiusElement& g) const {
  return find_with_key(g, key_coordinates(g, x_, quantum_));
}

std::size_t ElementIndex::insert(MoebiusElement g) {
  const CanonicalKey key = canonical_key(g, x_, quantum_);
  const std::size_t idx = elements_.size();
  elements_.push_back(std::move(g));
  cells_[key].push_back(idx);
  return idx;
}

std::pair<std::size_t, bool> ElementIndex::find_or_insert(const MoebiusElement& g) {
  const auto coords = key_coordinates(g, x_, quantum_);
  if (auto hit = find_with_key(g, coords)) return {*hit, false};
  const std::size_t idx = elements_.size();
  elements_.push_back(g);
  cells_[quantize(coords)].push_back(idx);
  return {idx, true};
}

std::vector<MoebiusElement> dedup(const std::vector<MoebiusElement>& list,
                                  const MinkowskiPoint& x, double rho, const Tolerance& tol) {
  ElementIndex index = ElementIndex::by_geometry(x, rho, tol);
  std::vector<MoebiusElement> out;
  for (const auto& g : list) {
    if (index.find_or_insert(g).second) out.push_back(g);
  }
  return out;
}

}  // namespace hypdir
