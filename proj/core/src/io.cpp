#include "hypdir/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace hypdir {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_real(std::string_view s, std::size_t line) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(line, "malformed number '" + std::string(s) + "'");
  }
  return v;
}

long long parse_integer(std::string_view s, std::size_t line) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "malformed integer '" + std::string(s) + "'");
  }
  return v;
}

Word parse_word_at(std::string_view s, std::size_t line) {
  try {
    return parse_word(s);
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

std::array<Complex, 4> parse_matrix(const std::vector<std::string_view>& t, std::size_t line) {
  if (t.size() != 8) {
    throw ParseError(line, "expected 8 reals for a matrix, found " + std::to_string(t.size()));
  }
  std::array<Complex, 4> m;
  for (int i = 0; i < 4; ++i) m[i] = {parse_real(t[2 * i], line), parse_real(t[2 * i + 1], line)};
  return m;
}

std::string format_matrix(const std::array<Complex, 4>& m, char sep) {
  std::string out;
  for (int i = 0; i < 4; ++i) {
    if (i > 0) out += sep;
    out += format_exact(m[i].real());
    out += sep;
    out += format_exact(m[i].imag());
  }
  return out;
}

// Reads non-empty, non-comment lines with their line numbers.
template <typename F>
void for_each_line(std::istream& in, F&& f) {
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) f(line, number);
  }
}

std::pair<std::string_view, std::string_view> key_value(std::string_view line, std::size_t number) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) throw ParseError(number, "expected 'key: value'");
  return {trim(line.substr(0, colon)), trim(line.substr(colon + 1))};
}

// CSV body rows after a fixed header line.
template <typename F>
void for_each_row(std::istream& in, std::string_view header, F&& f) {
  bool seen_header = false;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    if (!seen_header) {
      if (line != header) throw ParseError(number, "expected header '" + std::string(header) + "'");
      seen_header = true;
      return;
    }
    f(split(line, ','), number);
  });
  if (!seen_header) throw ParseError(0, "missing header '" + std::string(header) + "'");
}

void expect_columns(const std::vector<std::string_view>& cols, std::size_t n, std::size_t line) {
  if (cols.size() != n) {
    throw ParseError(line, "expected " + std::to_string(n) + " columns, found " +
                               std::to_string(cols.size()));
  }
}

}  // namespace

std::string format_exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

GeneratorFile parse_generator_file(std::istream& in) {
  GeneratorFile file;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    const auto [key, value] = key_value(line, number);
    if (key == "name") {
      file.name = std::string(value);
    } else if (key == "reference_volume") {
      const double v = parse_real(value, number);
      if (!(v > 0.0)) throw ParseError(number, "reference_volume must be positive");
      file.reference_volume = v;
    } else if (key == "generator") {
      const auto m = parse_matrix(tokens(value), number);
      MoebiusElement g(m[0], m[1], m[2], m[3]);
      if (std::abs(g.det()) <= Tolerance{}.eps_equal) {
        throw ParseError(number, "singular generator matrix");
      }
      file.generators.push_back(g);
    } else if (key == "relator") {
      file.relators.push_back(parse_word_at(value, number));
    } else {
      throw ParseError(number, "unknown key '" + std::string(key) + "'");
    }
  });
  for (const Word& r : file.relators) {
    for (int letter : r) {
      if (static_cast<std::size_t>(std::abs(letter)) > file.generators.size()) {
        throw ParseError(0, "relator " + format_word(r) + " uses a missing generator");
      }
    }
  }
  return file;
}

GeneratorFile read_generator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  return parse_generator_file(in);
}

void write_generator_file(std::ostream& out, const GeneratorFile& file) {
  if (!file.name.empty()) out << "name: " << file.name << '\n';
  if (file.reference_volume) out << "reference_volume: " << format_exact(*file.reference_volume) << '\n';
  for (const auto& g : file.generators) out << "generator: " << format_matrix(g.entries(), ' ') << '\n';
  for (const auto& r : file.relators) out << "relator: " << format_word(r) << '\n';
}

std::vector<MoebiusElement> prepared_generators(const GeneratorFile& file, const Tolerance& tol) {
  std::vector<MoebiusElement> gens;
  for (std::size_t i = 0; i < file.generators.size(); ++i) {
    MoebiusElement g = normalize(file.generators[i], tol);
    g.set_word({static_cast<int>(i) + 1});
    gens.push_back(std::move(g));
  }
  return gens;
}

void write_polyhedron(std::ostream& out, const DirichletPolyhedron& poly) {
  out << "# hypdir polyhedron\n";
  const Vec4& b = poly.basepoint.coords;
  out << "basepoint: " << format_exact(b[0]) << ' ' << format_exact(b[1]) << ' '
      << format_exact(b[2]) << ' ' << format_exact(b[3]) << '\n';
  for (const auto& v : poly.vertices) {
    out << "vertex: " << format_exact(v.position.u.x) << ' ' << format_exact(v.position.u.y) << ' '
        << format_exact(v.position.u.z) << ' ' << (v.ideal ? 1 : 0) << '\n';
  }
  for (const auto& f : poly.faces) {
    const Vec4& n = f.halfspace.normal;
    out << "face: synthetic=" << (f.synthetic ? 1 : 0) << "; paired=" << f.paired
        << "; normal=" << format_exact(n[0]) << ' ' << format_exact(n[1]) << ' '
        << format_exact(n[2]) << ' ' << format_exact(n[3]) << "; element=";
    if (f.has_element()) out << format_matrix(f.element().entries(), ' ');
    out << "; word=" << (f.has_element() ? format_word(f.element().word()) : "") << "; cycle=";
    for (std::size_t i = 0; i < f.cycle.size(); ++i) out << (i ? " " : "") << f.cycle[i];
    out << '\n';
  }
}

DirichletPolyhedron parse_polyhedron(std::istream& in) {
  DirichletPolyhedron poly;
  bool have_basepoint = false;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    const auto [key, value] = key_value(line, number);
    if (key == "basepoint") {
      const auto t = tokens(value);
      if (t.size() != 4) throw ParseError(number, "basepoint needs 4 reals");
      for (int i = 0; i < 4; ++i) poly.basepoint.coords[i] = parse_real(t[i], number);
      have_basepoint = true;
    } else if (key == "vertex") {
      const auto t = tokens(value);
      if (t.size() != 4) throw ParseError(number, "vertex needs 3 reals and a flag");
      Vertex v;
      v.position.u = {parse_real(t[0], number), parse_real(t[1], number), parse_real(t[2], number)};
      v.ideal = parse_integer(t[3], number) != 0;
      poly.vertices.push_back(v);
    } else if (key == "face") {
      std::map<std::string_view, std::string_view> fields;
      for (auto part : split(value, ';')) {
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) throw ParseError(number, "expected field=value");
        fields[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
      }
      for (const char* name : {"synthetic", "paired", "normal", "element", "word", "cycle"}) {
        if (!fields.count(name)) throw ParseError(number, std::string("missing face field ") + name);
      }
      const auto nt = tokens(fields["normal"]);
      if (nt.size() != 4) throw ParseError(number, "normal needs 4 reals");
      Vec4 n{};
      for (int i = 0; i < 4; ++i) n[i] = parse_real(nt[i], number);
      Face f;
      f.halfspace = HalfSpace::from_minkowski(n);
      f.synthetic = parse_integer(fields["synthetic"], number) != 0;
      f.paired = static_cast<int>(parse_integer(fields["paired"], number));
      const auto et = tokens(fields["element"]);
      if (!et.empty()) {
        const auto m = parse_matrix(et, number);
        f.halfspace.element = MoebiusElement(m[0], m[1], m[2], m[3],
                                             parse_word_at(fields["word"], number));
      }
      for (auto t : tokens(fields["cycle"])) {
        const long long v = parse_integer(t, number);
        if (v < 0 || static_cast<std::size_t>(v) >= poly.vertices.size()) {
          throw ParseError(number, "cycle refers to an unknown vertex");
        }
        f.cycle.push_back(static_cast<int>(v));
      }
      poly.faces.push_back(std::move(f));
    } else {
      throw ParseError(number, "unknown key '" + std::string(key) + "'");
    }
  });
  if (!have_basepoint) throw ParseError(0, "missing basepoint");
  poly.rebuild_edges();
  return poly;
}

namespace {
constexpr std::string_view kBigListHeader =
    "word,a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im,distance,depth,parent";
constexpr std::string_view kSpectrumHeader = "lambda,theta,multiplicity,representative";
constexpr std::string_view kExclusionHeader = "word,reason,reference,power";
constexpr std::string_view kTraceHeader = "x0,x1,x2,x3,spine_radius,step";
}  // namespace

void write_biglist_records(std::ostream& out, const std::vector<BigListRecord>& records) {
  out << kBigListHeader << '\n';
  for (const auto& r : records) {
    out << format_word(r.word) << ',' << format_matrix(r.entries, ',') << ','
        << format_exact(r.distance) << ',' << r.depth << ',' << r.parent << '\n';
  }
}

void write_biglist(std::ostream& out, const TileSet& tiles) {
  std::vector<BigListRecord> records;
  records.reserve(tiles.tiles.size());
  for (const auto& t : tiles.tiles) {
    records.push_back({t.element.word(), t.element.entries(), t.distance, t.depth, t.parent});
  }
  write_biglist_records(out, records);
}

std::vector<BigListRecord> parse_biglist(std::istream& in) {
  std::vector<BigListRecord> records;
  for_each_row(in, kBigListHeader, [&](const std::vector<std::string_view>& cols, std::size_t n) {
    expect_columns(cols, 12, n);
    BigListRecord r;
    r.word = parse_word_at(cols[0], n);
    r.entries = parse_matrix({cols.begin() + 1, cols.begin() + 9}, n);
    r.distance = parse_real(cols[9], n);
    r.depth = static_cast<int>(parse_integer(cols[10], n));
    r.parent = static_cast<std::ptrdiff_t>(parse_integer(cols[11], n));
    records.push_back(std::move(r));
  });
  return records;
}

void write_spectrum(std::ostream& out, const std::vector<SpectrumEntry>& entries) {
  out << kSpectrumHeader << '\n';
  for (const auto& e : entries) {
    out << format_short(e.length.lambda) << ',' << format_short(e.length.theta) << ','
        << e.multiplicity << ','
        << (e.representatives.empty() ? "" : format_word(e.representatives.front())) << '\n';
  }
}

std::vector<SpectrumEntry> parse_spectrum(std::istream& in) {
  std::vector<SpectrumEntry> entries;
  for_each_row(in, kSpectrumHeader, [&](const std::vector<std::string_view>& cols, std::size_t n) {
    expect_columns(cols, 4, n);
    SpectrumEntry e;
    e.length = {parse_real(cols[0], n), parse_real(cols[1], n)};
    const long long m = parse_integer(cols[2], n);
    if (m <= 0) throw ParseError(n, "multiplicity must be positive");
    e.multiplicity = static_cast<std::size_t>(m);
    if (!cols[3].empty()) e.representatives.push_back(parse_word_at(cols[3], n));
    entries.push_back(std::move(e));
  });
  return entries;
}

void write_exclusions(std::ostream& out, const std::vector<Exclusion>& exclusions) {
  out << kExclusionHeader << '\n';
  for (const auto& e : exclusions) {
    out << format_word(e.word) << ',' << to_string(e.reason) << ',';
    if (e.reason == ExclusionReason::ConjugateOf || e.reason == ExclusionReason::InverseOf ||
        e.reason == ExclusionReason::PowerOf) {
      out << format_word(e.reference);
    }
    out << ',' << e.power << '\n';
  }
}

std::vector<Exclusion> parse_exclusions(std::istream& in) {
  std::vector<Exclusion> out;
  for_each_row(in, kExclusionHeader, [&](const std::vector<std::string_view>& cols, std::size_t n) {
    expect_columns(cols, 4, n);
    Exclusion e;
    e.word = parse_word_at(cols[0], n);
    bool known = false;
    for (auto r : {ExclusionReason::ZeroLength, ExclusionReason::OverCutoff,
                   ExclusionReason::ConjugateOf, ExclusionReason::InverseOf,
                   ExclusionReason::PowerOf}) {
      if (cols[1] == to_string(r)) {
        e.reason = r;
        known = true;
      }
    }
    if (!known) throw ParseError(n, "unknown exclusion reason '" + std::string(cols[1]) + "'");
    if (!cols[2].empty()) e.reference = parse_word_at(cols[2], n);
    e.power = static_cast<int>(parse_integer(cols[3], n));
    out.push_back(std::move(e));
  });
  return out;
}

void write_report(std::ostream& out, const Report& report) {
  for (const auto& [key, value] : report) out << key << ": " << value << '\n';
}

Report parse_report(std::istream& in) {
  Report report;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    const auto [key, value] = key_value(line, number);
    if (key.empty()) throw ParseError(number, "empty key");
    report.emplace_back(std::string(key), std::string(value));
  });
  return report;
}

void write_trace(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << kTraceHeader << '\n';
  for (const auto& t : trace) {
    const Vec4& p = t.point.coords;
    out << format_exact(p[0]) << ',' << format_exact(p[1]) << ',' << format_exact(p[2]) << ','
        << format_exact(p[3]) << ',' << format_exact(t.spine_radius) << ','
        << format_exact(t.step) << '\n';
  }
}

std::vector<TracePoint> parse_trace(std::istream& in) {
  std::vector<TracePoint> trace;
  for_each_row(in, kTraceHeader, [&](const std::vector<std::string_view>& cols, std::size_t n) {
    expect_columns(cols, 6, n);
    TracePoint t;
    for (int i = 0; i < 4; ++i) t.point.coords[i] = parse_real(cols[i], n);
    t.spine_radius = parse_real(cols[4], n);
    t.step = parse_real(cols[5], n);
    trace.push_back(t);
  });
  return trace;
}

}  // namespace hypdir
