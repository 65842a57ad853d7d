#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>

#include "hypdir/io.hpp"
#include "hypdir/spectrum.hpp"
#include "hypdir/tiling.hpp"

using namespace hypdir;

namespace {

std::vector<MoebiusElement> generators(const std::string& name) {
  return prepared_generators(
      read_generator_file(std::string(HYPDIR_FIXTURE_DIR) + "/" + name + ".gens"));
}

const DomainBuild& domain(const std::string& name) {
  static std::map<std::string, DomainBuild> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache.emplace(name, build_domain(generators(name), MinkowskiPoint::origin())).first;
  }
  return it->second;
}

const char* fixture(int i) { return i == 0 ? "weeks" : "m004"; }

void BM_ComposeApply(benchmark::State& state) {
  const auto g = generators("weeks");
  const MinkowskiPoint x = MinkowskiPoint::origin();
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(compose(g[0], g[1])));
    benchmark::DoNotOptimize(apply(g[0], x));
  }
}
BENCHMARK(BM_ComposeApply);

void BM_ComplexLength(benchmark::State& state) {
  const auto g = evaluate_word({1, -2, 1}, generators("weeks"));
  for (auto _ : state) benchmark::DoNotOptimize(complex_length(g));
}
BENCHMARK(BM_ComplexLength);

void BM_BuildDomain(benchmark::State& state) {
  const auto g = generators(fixture(static_cast<int>(state.range(0))));
  BuildOptions o;
  o.compute_volume = false;
  for (auto _ : state) benchmark::DoNotOptimize(build_domain(g, MinkowskiPoint::origin(), o));
  state.SetLabel(fixture(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildDomain)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Volume(benchmark::State& state) {
  const auto& b = domain(fixture(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(volume(b.poly));
  state.SetLabel(fixture(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Volume)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TileBall(benchmark::State& state) {
  const auto& b = domain(fixture(static_cast<int>(state.range(0))));
  const double R = tiling_radius(b.stats.spine_radius, 1.0);
  std::size_t n = 0;
  for (auto _ : state) {
    const auto t = tile_ball(b.poly, R);
    n = t.tiles.size();
    benchmark::DoNotOptimize(n);
  }
  state.counters["tiles"] = static_cast<double>(n);
  state.SetLabel(fixture(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TileBall)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EnumerateWords(benchmark::State& state) {
  const auto g = generators("weeks");
  const auto& b = domain("weeks");
  const double R = tiling_radius(b.stats.spine_radius, 1.0);
  const double radius = R + admission_margin(b.poly, R);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_words_closed(g, b.poly.basepoint, radius));
}
BENCHMARK(BM_EnumerateWords)->Unit(benchmark::kMillisecond);

void BM_IndexLookup(benchmark::State& state) {
  const auto& b = domain("weeks");
  const auto t = tile_ball(b.poly, tiling_radius(b.stats.spine_radius, 1.0));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, t.tiles.size() - 1);
  for (auto _ : state) benchmark::DoNotOptimize(t.index.find(t.tiles[pick(rng)].element));
}
BENCHMARK(BM_IndexLookup);

void BM_BigToSmall(benchmark::State& state) {
  const auto& b = domain("weeks");
  const auto t = tile_ball(b.poly, tiling_radius(b.stats.spine_radius, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(big_to_small(t, 1.0, b.stats.spine_radius));
}
BENCHMARK(BM_BigToSmall)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
