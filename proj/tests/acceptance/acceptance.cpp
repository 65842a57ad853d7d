// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "hypdir/io.hpp"
#include "test_support.hpp"

using namespace hypdir;
using hypdir::testing::Fixture;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Relative comparison scaled by the size of the values.
bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

double angle_gap(double a, double b) { return std::abs(wrap_angle(a - b)); }

struct FixtureRun {
  Fixture fixture;
  DomainBuild build;
  double build_seconds = 0.0;
  TileSet tiles;  // Lambda = 1
};

std::vector<FixtureRun>& runs() {
  static std::vector<FixtureRun> r = [] {
    std::vector<FixtureRun> out;
    for (const auto& name : hypdir::testing::fixture_names()) {
      FixtureRun run;
      run.fixture = hypdir::testing::load_fixture(name);
      const auto t0 = Clock::now();
      run.build = build_domain(run.fixture.generators, MinkowskiPoint::origin());
      run.build_seconds = seconds_since(t0);
      out.push_back(std::move(run));
    }
    return out;
  }();
  return r;
}

Outcome kernel_checks() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const auto t0 = Clock::now();
  double worst_iso = 0.0, worst_act = 0.0, worst_conj = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto g = normalize(hypdir::testing::random_element(rng, 0.5));
    const auto h = normalize(hypdir::testing::random_element(rng, 0.5));
    const auto p = hypdir::testing::random_point(rng, 1.0);
    const auto q = hypdir::testing::random_point(rng, 1.0);
    const double d0 = dist(p, q);
    worst_iso = std::max(worst_iso, std::abs(dist(apply(g, p), apply(g, q)) - d0) / (1 + d0));

    const auto a = apply(compose(g, h), p);
    const auto b = apply(g, apply(h, p));
    double gap = 0.0;
    for (int k = 0; k < 4; ++k) {
      gap = std::max(gap, std::abs(a.coords[k] - b.coords[k]) / (1 + std::abs(a.coords[k])));
    }
    worst_act = std::max(worst_act, gap);

    if (std::abs(g.trace() * g.trace() - 4.0) > 1e-3) {
      const auto l0 = complex_length(g);
      const auto l1 = complex_length(compose(compose(h, g), inverse(h)));
      worst_conj = std::max({worst_conj, std::abs(l0.lambda - l1.lambda) / (1 + l0.lambda),
                             angle_gap(l0.theta, l1.theta)});
    }
  }
  const double t = seconds_since(t0);
  if (worst_iso > 1e-9) o.fail("isometry error " + fmt("%.2e", worst_iso));
  if (worst_act > 1e-9) o.fail("action error " + fmt("%.2e", worst_act));
  if (worst_conj > 1e-9) o.fail("conjugation error " + fmt("%.2e", worst_conj));
  if (t >= 5.0) o.fail("runtime " + fmt("%.2f s", t));
  o.note("3x1000 checks, max errors " + fmt("%.1e", worst_iso) + " / " + fmt("%.1e", worst_act) +
         " / " + fmt("%.1e", worst_conj) + ", " + fmt("%.2f s", t));
  return o;
}

Outcome cyclic_closed_forms() {
  Outcome o;
  double worst = 0.0;
  const auto x = MinkowskiPoint::origin();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double lambda = 0.2 + 0.6 * i;
      const double theta = -2.5 + 1.2 * j;
      const auto g = MoebiusElement::loxodromic({lambda, theta});
      const auto l = complex_length(g);
      worst = std::max({worst, std::abs(l.lambda - lambda), angle_gap(l.theta, theta)});
      MoebiusElement gk = MoebiusElement::identity();
      for (int k = 1; k <= 4; ++k) {
        gk = compose(gk, g);
        worst = std::max(worst, std::abs(dist(x, apply(gk, x)) - k * lambda));
      }
    }
  }
  if (worst > 1e-9) o.fail("max error " + fmt("%.2e", worst));
  o.note("5x5 grid, k <= 4, max error " + fmt("%.1e", worst));
  return o;
}

// Dirichlet membership by brute force: p lies in D_x iff d(p, x) <= d(p, g x)
// for every group element g. Elements come from word enumeration.
Outcome domain_validity() {
  Outcome o;
  for (auto& run : runs()) {
    const auto& b = run.build;
    const auto& poly = b.poly;
    const std::string n = run.fixture.name;
    if (!b.stats.converged) o.fail(n + ": stopping rule did not fire");
    if (poly.euler_characteristic() != 2) {
      o.fail(n + ": V-E+F = " + std::to_string(poly.euler_characteristic()));
    }
    for (std::size_t i = 0; i < poly.faces.size(); ++i) {
      const auto& f = poly.faces[i];
      if (f.paired < 0 || poly.faces[f.paired].paired != static_cast<int>(i)) {
        o.fail(n + ": pairing of face " + std::to_string(i) + " is not an involution");
        continue;
      }
      const auto prod = compose(f.element(), poly.faces[f.paired].element());
      if (!is_identity(prod, 1e-9)) o.fail(n + ": pairing product is not +-identity");
    }
    for (const auto& problem : check_polyhedron(poly, 1e-9)) o.fail(n + ": " + problem);

    // Sample points within T of x; elements with d(x, g x) <= 2T decide.
    const double T = 1.5;
    const auto words = enumerate_words_closed(run.fixture.generators, poly.basepoint, 2 * T);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-std::tanh(T), std::tanh(T));
    std::size_t inside = 0, disagree = 0, tested = 0;
    while (tested < 1000) {
      const Vec3 k{u(rng), u(rng), u(rng)};
      if (dot(k, k) >= 1.0) continue;
      const auto p = from_klein({k});
      const double dx = dist(p, poly.basepoint);
      if (dx > T) continue;
      ++tested;
      bool dirichlet = true;
      double worst = 0.0;
      for (const auto& g : words.elements) {
        const double gap = dx - dist(p, apply(g, poly.basepoint));
        worst = std::max(worst, gap);
        if (gap > 0.0) dirichlet = false;
      }
      const bool member = poly.contains({k}, 1e-12);
      if (member) ++inside;
      // Points within 1e-9 of a wall are not decisive either way.
      if (member != dirichlet && std::abs(worst) > 1e-9) ++disagree;
    }
    if (disagree) o.fail(n + ": " + std::to_string(disagree) + " membership disagreements");
    if (run.build_seconds >= 60.0) o.fail(n + ": build took " + fmt("%.1f s", run.build_seconds));
    o.note(n + " V-E+F=2, " + std::to_string(inside) + "/1000 samples inside, build " +
           fmt("%.2f s", run.build_seconds));
  }
  return o;
}

Outcome injectivity_history() {
  Outcome o;
  for (auto& run : runs()) {
    const auto& b = run.build;
    const std::string n = run.fixture.name;
    for (std::size_t i = 1; i < b.rho_history.size(); ++i) {
      if (b.rho_history[i] > b.rho_history[i - 1]) {
        o.fail(n + ": rho increased at cut " + std::to_string(i));
        break;
      }
    }
    double min_d = std::numeric_limits<double>::infinity();
    for (const auto& f : b.poly.faces) {
      if (f.has_element()) {
        min_d = std::min(min_d, dist(b.poly.basepoint, apply(f.element(), b.poly.basepoint)));
      }
    }
    const double gap = std::abs(b.stats.injectivity_radius - min_d / 2);
    if (gap > 1e-9) o.fail(n + ": rho' off by " + fmt("%.2e", gap));
    o.note(n + " rho'=" + fmt("%.10f", b.stats.injectivity_radius) + " over " +
           std::to_string(b.rho_history.size()) + " cuts");
  }
  return o;
}

Outcome volume_check() {
  Outcome o;
  for (auto& run : runs()) {
    const auto& s = run.build.stats;
    const std::string n = run.fixture.name;
    const double ref = *run.fixture.file.reference_volume;
    const double rel = std::abs(s.volume - ref) / ref;
    const double dv = s.volume - ref;
    if (!(rel <= 1e-3)) o.fail(n + ": relative error " + fmt("%.2e", rel));
    if (!(s.volume_error < 1e-3 * s.volume)) o.fail(n + ": quadrature error too large");
    if (dv < -1e-9) o.fail(n + ": delta V = " + fmt("%.2e", dv));
    o.note(n + " vol=" + fmt("%.12f", s.volume) + " ref=" + fmt("%.12f", ref) + " err est " +
           fmt("%.1e", s.volume_error) + " dV=" + fmt("%.1e", dv));
  }
  return o;
}

Outcome tiling_oracle() {
  Outcome o;
  for (auto& run : runs()) {
    const std::string n = run.fixture.name;
    const auto t0 = Clock::now();
    const double R = tiling_radius(run.build.stats.spine_radius, 1.0);
    run.tiles = tile_ball(run.build.poly, R);
    const auto words =
        enumerate_words_closed(run.fixture.generators, run.tiles.basepoint, R + run.tiles.margin);
    const auto cmp = compare_with_enumeration(run.tiles, words);
    const double t = seconds_since(t0);

    // Canonical keys of both sets; a key may shift by one cell between two
    // products of the same element, so adjacent cells count as the same key.
    std::map<std::array<std::int64_t, 5>, int> keys;
    const double q = Tolerance{}.quantum;
    for (const auto& tile : run.tiles.tiles) ++keys[canonical_key(tile.element, run.tiles.basepoint, q).cells];
    std::size_t unmatched = 0;
    for (const auto& g : words.elements) {
      bool hit = false;
      for (const auto& k : neighbor_keys(canonical_key(g, run.tiles.basepoint, q))) {
        if (keys.count(k.cells)) {
          hit = true;
          break;
        }
      }
      if (!hit) ++unmatched;
    }
    if (!words.frontier_closed) o.fail(n + ": enumeration frontier not closed");
    if (!cmp.agree() || unmatched || words.elements.size() != run.tiles.tiles.size()) {
      o.fail(n + ": tiles " + std::to_string(run.tiles.tiles.size()) + " words " +
             std::to_string(words.elements.size()) + " missing " +
             std::to_string(cmp.missing.size()) + " extra " + std::to_string(cmp.extra.size()));
    }
    if (t >= 120.0) o.fail(n + ": runtime " + fmt("%.1f s", t));
    o.note(n + " " + std::to_string(run.tiles.tiles.size()) + " elements agree, " +
           fmt("%.2f s", t));
  }
  return o;
}

Outcome covering() {
  Outcome o;
  for (auto& run : runs()) {
    const auto c = verify_covering(run.tiles, run.build.poly, 10000, 7);
    if (c.fraction != 1.0) o.fail(run.fixture.name + ": fraction " + fmt("%.6f", c.fraction));
    o.note(run.fixture.name + " fraction " + fmt("%.4f", c.fraction) + " mean multiplicity " +
           fmt("%.4f", c.mean_multiplicity));
  }
  return o;
}

Outcome pairwise_equality() {
  Outcome o;
  for (auto& run : runs()) {
    const std::string n = run.fixture.name;
    TileSet tiles = run.tiles;
    for (double cutoff : {1.5, 2.0}) {
      if (tiles.tiles.size() >= 1000) break;
      tiles = tile_ball(run.build.poly, tiling_radius(run.build.stats.spine_radius, cutoff));
    }
    const auto t0 = Clock::now();
    const double rho = run.build.stats.injectivity_radius;
    const auto& x = tiles.basepoint;
    std::size_t pairs = 0, disagree = 0, equal = 0;
    const auto& list = tiles.tiles;
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = 0; j < list.size(); ++j) {
        const auto& g = list[i].element;
        const auto& h = list[j].element;
        double scale = 1.0;
        for (const auto& e : g.entries()) scale = std::max(scale, std::abs(e));
        const bool by_matrix = equal_up_to_sign(g, h, 1e-9 * scale);
        const bool by_geometry = same_element(g, h, x, rho);
        if (by_matrix) ++equal;
        if (by_matrix != by_geometry) ++disagree;
        ++pairs;
      }
    }
    const double t = seconds_since(t0);
    if (list.size() < 1000) o.fail(n + ": only " + std::to_string(list.size()) + " elements");
    if (disagree) o.fail(n + ": " + std::to_string(disagree) + " disagreements");
    if (t >= 60.0) o.fail(n + ": runtime " + fmt("%.1f s", t));
    o.note(n + " " + std::to_string(list.size()) + " elements, " + std::to_string(pairs) +
           " ordered pairs (" + std::to_string(equal) + " equal), " + fmt("%.2f s", t));
  }
  return o;
}

SmallList spectrum_at(const std::vector<MoebiusElement>& gens, const DomainBuild& b,
                      double cutoff) {
  const auto tiles = tile_ball(b.poly, tiling_radius(b.stats.spine_radius, cutoff));
  return big_to_small(tiles, cutoff, b.stats.spine_radius);
}

Outcome spectrum_invariance() {
  Outcome o;
  const double cutoff = 1.5;
  for (auto& run : runs()) {
    const std::string n = run.fixture.name;
    const auto& gens = run.fixture.generators;
    const auto at_origin = spectrum_at(gens, run.build, cutoff);
    const MinkowskiPoint displaced = exp_map(MinkowskiPoint::origin(),
                                             {0.0, 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0),
                                              1.0 / std::sqrt(3.0)},
                                             0.05);
    const auto opt = minimize_spine_radius(gens, displaced);
    const auto moved = spectrum_at(gens, opt.build, cutoff);
    const auto cmp = spectrum_compare(at_origin.entries, moved.entries, 1e-6);
    if (!cmp.equal) {
      for (const auto& d : cmp.differences) o.fail(n + ": " + d);
    }
    if (at_origin.entries.empty()) o.fail(n + ": empty spectrum below " + fmt("%.1f", cutoff));
    o.note(n + " " + std::to_string(at_origin.entries.size()) + " entries match, x* at " +
           fmt("%.4f", dist(opt.x_star, MinkowskiPoint::origin())) + " from origin");
  }
  return o;
}

Outcome optimizer_descent() {
  Outcome o;
  const auto& run = runs().front();
  const MinkowskiPoint start = from_klein({{0.05, 0.0, 0.0}});
  BuildOptions b;
  b.compute_volume = false;
  const auto r = minimize_spine_radius(run.fixture.generators, start, {}, b);
  const double first = r.trace.front().spine_radius;
  const double last = r.build.stats.spine_radius;
  if (!(last <= first)) o.fail("final " + fmt("%.6f", last) + " > initial " + fmt("%.6f", first));
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    if (!(r.trace[i].spine_radius < r.trace[i - 1].spine_radius)) {
      o.fail("trace not strictly decreasing at step " + std::to_string(i));
      break;
    }
  }
  if (r.trace.size() < 2) o.fail("no accepted step");
  o.note(run.fixture.name + " spine " + fmt("%.6f", first) + " -> " + fmt("%.6f", last) + " in " +
         std::to_string(r.trace.size() - 1) + " accepted steps");
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::current_path() / "acceptance_runs";
  std::filesystem::create_directories(dir);
  for (const auto& name : hypdir::testing::fixture_names()) {
    std::string stdout_text[2];
    for (int k = 0; k < 2; ++k) {
      const std::string prefix = (dir / (name + "_" + std::to_string(k))).string();
      const std::vector<std::string> args{"hypdir", "spectrum",
                                          hypdir::testing::fixture_path(name + ".gens"),
                                          "--cutoff", "1", "--out", prefix};
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      if (code != 0) o.fail(name + ": run " + std::to_string(k) + " exited " + std::to_string(code));
      stdout_text[k] = out.str();
    }
    if (stdout_text[0] != stdout_text[1]) o.fail(name + ": standard output differs");
    for (const char* ext : {".biglist", ".spectrum", ".exclusions", ".report"}) {
      const auto a = slurp(dir / (name + "_0" + ext));
      const auto b = slurp(dir / (name + "_1" + ext));
      if (a.empty() || a != b) o.fail(name + ": " + ext + " differs");
    }
    o.note(name + " outputs identical");
  }
  return o;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  struct Criterion {
    const char* title;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"kernel correctness", kernel_checks},
      {"cyclic-group closed forms", cyclic_closed_forms},
      {"domain validity on fixtures", domain_validity},
      {"injectivity radius history", injectivity_history},
      {"volume", volume_check},
      {"tiling vs word enumeration", tiling_oracle},
      {"covering", covering},
      {"same_element vs matrix equality", pairwise_equality},
      {"spectrum invariance under basepoint change", spectrum_invariance},
      {"optimizer descent", optimizer_descent},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].title,
                o.detail.c_str(), seconds_since(t0));
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
