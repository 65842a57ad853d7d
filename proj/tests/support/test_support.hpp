#pragma once

#include <complex>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypdir/io.hpp"

namespace hypdir::testing {

inline std::string fixture_path(const std::string& file) {
  return std::string(HYPDIR_FIXTURE_DIR) + "/" + file;
}

struct Fixture {
  std::string name;
  GeneratorFile file;
  std::vector<MoebiusElement> generators;
  /// Reference data recorded by the fixture generation script.
  nlohmann::json oracle;
};

inline Fixture load_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  f.file = read_generator_file(fixture_path(name + ".gens"));
  f.generators = prepared_generators(f.file);
  std::ifstream in(fixture_path(name + ".oracle.json"));
  f.oracle = nlohmann::json::parse(in);
  return f;
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"weeks", "m004"};
  return names;
}

/// Random element of SL(2, C) with entries of moderate size.
inline MoebiusElement random_element(std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> n(0.0, spread);
  while (true) {
    const Complex a{1.0 + n(rng), n(rng)};
    const Complex b{n(rng), n(rng)};
    const Complex c{n(rng), n(rng)};
    if (std::abs(a) < 0.2) continue;
    const Complex d = (1.0 + b * c) / a;
    return MoebiusElement(a, b, c, d);
  }
}

/// Random point within hyperbolic distance ~ `spread` of the origin.
inline MinkowskiPoint random_point(std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> n(0.0, spread);
  const Vec3 v{n(rng), n(rng), n(rng)};
  const double r = norm(v);
  const double s = std::sinh(r);
  if (r == 0.0) return MinkowskiPoint::origin();
  return {{std::cosh(r), s * v.x / r, s * v.y / r, s * v.z / r}};
}

}  // namespace hypdir::testing
