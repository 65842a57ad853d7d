#pragma once

// Text formats: generator files in, polyhedron / big list / spectrum /
// exclusion / report / trace exports out, and parsers for all of them.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypdir/domain.hpp"
#include "hypdir/optimizer.hpp"
#include "hypdir/spectrum.hpp"
#include "hypdir/tiling.hpp"

namespace hypdir {

/// Lines of the form "key: value"; '#' starts a comment. Keys: name,
/// reference_volume, generator (eight reals: a.re a.im b.re b.im c.re c.im
/// d.re d.im) and relator (a word).
struct GeneratorFile {
  std::string name;
  /// As written in the file; not normalized.
  std::vector<MoebiusElement> generators;
  std::optional<double> reference_volume;
  std::vector<Word> relators;
};

/// Throws ParseError naming the offending line.
GeneratorFile parse_generator_file(std::istream& in);
GeneratorFile read_generator_file(const std::string& path);
void write_generator_file(std::ostream& out, const GeneratorFile& file);

/// Normalized generators labelled with their one-letter words.
std::vector<MoebiusElement> prepared_generators(const GeneratorFile& file,
                                                const Tolerance& tol = {});

/// Shortest decimal that reads back to the same double.
std::string format_exact(double v);
/// 12 significant digits.
std::string format_short(double v);

void write_polyhedron(std::ostream& out, const DirichletPolyhedron& poly);
DirichletPolyhedron parse_polyhedron(std::istream& in);

struct BigListRecord {
  Word word;
  std::array<Complex, 4> entries{};
  double distance = 0.0;
  int depth = 0;
  std::ptrdiff_t parent = -1;
};

void write_biglist(std::ostream& out, const TileSet& tiles);
std::vector<BigListRecord> parse_biglist(std::istream& in);
void write_biglist_records(std::ostream& out, const std::vector<BigListRecord>& records);

void write_spectrum(std::ostream& out, const std::vector<SpectrumEntry>& entries);
std::vector<SpectrumEntry> parse_spectrum(std::istream& in);

void write_exclusions(std::ostream& out, const std::vector<Exclusion>& exclusions);
std::vector<Exclusion> parse_exclusions(std::istream& in);

/// Ordered "key: value" lines.
using Report = std::vector<std::pair<std::string, std::string>>;
void write_report(std::ostream& out, const Report& report);
Report parse_report(std::istream& in);

void write_trace(std::ostream& out, const std::vector<TracePoint>& trace);
std::vector<TracePoint> parse_trace(std::istream& in);

}  // namespace hypdir
