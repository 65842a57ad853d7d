#include "commands.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypdir/io.hpp"
#include "hypdir/optimizer.hpp"
#include "hypdir/spectrum.hpp"
#include "hypdir/tiling.hpp"
#include "hypdir/wordprob.hpp"

namespace hypdir::cli {

namespace {

struct RunConfig {
  std::string input;
  std::string out = "hypdir";
  std::vector<double> basepoint{0.0, 0.0, 0.0};
  double cutoff = 1.0;
  int max_word_length = 12;
  Tolerance tol;
  bool optimize = false;
  bool allow_approximate = false;
  std::size_t tile_cap = 1'000'000;
  bool oracle = true;
  double oracle_slack = 1.0;
  int oracle_rounds = 4;
  std::size_t samples = 10'000;
  std::uint64_t seed = 1;
  bool oriented = false;
  unsigned threads = 1;
};

class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure(kFailure, "cannot write " + path);
  f << content;
}

template <typename Writer>
void export_to(const std::string& path, Writer&& writer) {
  std::ostringstream s;
  writer(s);
  write_file(path, s.str());
}

std::string format_point(const MinkowskiPoint& p) {
  const KleinPoint k = to_klein(p);
  return format_exact(k.u.x) + " " + format_exact(k.u.y) + " " + format_exact(k.u.z);
}

MinkowskiPoint basepoint_of(const RunConfig& cfg) {
  const Vec3 u{cfg.basepoint[0], cfg.basepoint[1], cfg.basepoint[2]};
  if (!(norm(u) < 1.0)) throw Failure(kBadInput, "basepoint must lie inside the unit ball");
  return from_klein({u});
}

BuildOptions build_options(const RunConfig& cfg) {
  BuildOptions o;
  o.max_word_length = cfg.max_word_length;
  o.tol = cfg.tol;
  return o;
}

struct Domain {
  GeneratorFile file;
  std::vector<MoebiusElement> generators;
  DomainBuild build;
  std::optional<OptimizerResult> optimized;
};

// Parses the input, optionally moves the basepoint, and builds the domain.
Domain make_domain(const RunConfig& cfg, Report& report) {
  cfg.tol.validate();
  Domain d;
  d.file = read_generator_file(cfg.input);
  d.generators = prepared_generators(d.file, cfg.tol);
  const MinkowskiPoint x0 = basepoint_of(cfg);
  if (cfg.max_word_length < 2) {
    throw Failure(kNotConverged, "not converged: the stopping rule needs word length >= 2");
  }
  if (cfg.optimize) {
    OptimizerParams params;
    params.threads = cfg.threads;
    d.optimized = minimize_spine_radius(d.generators, x0, params, build_options(cfg));
    d.build = d.optimized->build;
  } else {
    d.build = build_domain(d.generators, x0, build_options(cfg));
  }

  const DomainStats& s = d.build.stats;
  const DirichletPolyhedron& p = d.build.poly;
  report.emplace_back("name", d.file.name);
  report.emplace_back("basepoint", format_point(p.basepoint));
  report.emplace_back("optimized", yes_no(cfg.optimize));
  if (d.optimized) {
    report.emplace_back("optimizer_steps", std::to_string(d.optimized->trace.size() - 1));
    report.emplace_back("optimizer_final_step", format_exact(d.optimized->final_step));
    report.emplace_back("optimizer_stencil_gap", format_exact(d.optimized->stencil_gap));
    report.emplace_back("optimizer_failed_probes",
                        std::to_string(d.optimized->failed_probes.size()));
  }
  report.emplace_back("converged", yes_no(s.converged));
  report.emplace_back("word_length_reached", std::to_string(s.word_length_reached));
  report.emplace_back("vertices", std::to_string(p.vertices.size()));
  report.emplace_back("ideal_vertices", std::to_string(s.ideal_vertices));
  report.emplace_back("edges", std::to_string(p.edges.size()));
  report.emplace_back("faces", std::to_string(p.faces.size()));
  report.emplace_back("euler_characteristic", std::to_string(p.euler_characteristic()));
  report.emplace_back("injectivity_radius", format_exact(s.injectivity_radius));
  report.emplace_back("spine_radius", format_exact(s.spine_radius));
  report.emplace_back("max_vertex_distance", format_exact(s.max_vertex_distance));
  report.emplace_back("volume", format_exact(s.volume));
  report.emplace_back("volume_error", format_exact(s.volume_error));
  if (d.file.reference_volume) {
    report.emplace_back("reference_volume", format_exact(*d.file.reference_volume));
    report.emplace_back("delta_v", format_exact(s.volume - *d.file.reference_volume));
  }
  report.emplace_back("near_misses", std::to_string(d.build.near_misses.size()));
  report.emplace_back("degenerate_cuts", std::to_string(d.build.degenerate_cuts.size()));
  const auto problems = check_polyhedron(p, cfg.tol.eps_equal);
  report.emplace_back("structure_problems", std::to_string(problems.size()));
  return d;
}

void write_domain_exports(const RunConfig& cfg, const Domain& d) {
  export_to(cfg.out + ".poly", [&](std::ostream& s) { write_polyhedron(s, d.build.poly); });
  if (d.optimized) {
    export_to(cfg.out + ".trace", [&](std::ostream& s) { write_trace(s, d.optimized->trace); });
  }
}

void print_report(std::ostream& out, const Report& report) { write_report(out, report); }

int finish_build(const RunConfig& cfg, const Domain& d, std::ostream& err) {
  if (!d.build.stats.converged && !cfg.allow_approximate) {
    err << "not converged: stopped at word length " << d.build.stats.word_length_reached
        << " (use --allow-approximate to continue)\n";
    return kNotConverged;
  }
  return kOk;
}

int cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report report;
  const Domain d = make_domain(cfg, report);
  write_domain_exports(cfg, d);
  export_to(cfg.out + ".report", [&](std::ostream& s) { write_report(s, report); });
  print_report(out, report);
  return finish_build(cfg, d, err);
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.cutoff >= 0.0)) throw Failure(kBadInput, "cutoff must be non-negative");
  Report report;
  const Domain d = make_domain(cfg, report);
  write_domain_exports(cfg, d);
  if (const int code = finish_build(cfg, d, err); code != kOk) {
    export_to(cfg.out + ".report", [&](std::ostream& s) { write_report(s, report); });
    return code;
  }

  const DirichletPolyhedron& poly = d.build.poly;
  const DomainStats& stats = d.build.stats;
  const double R = tiling_radius(stats.spine_radius, cfg.cutoff);
  TilingOptions topt;
  topt.tol = cfg.tol;
  topt.tile_cap = cfg.tile_cap;
  const TileSet tiles = tile_ball(poly, R, topt);
  report.emplace_back("cutoff", format_exact(cfg.cutoff));
  report.emplace_back("tiling_radius", format_exact(R));
  report.emplace_back("admission_margin", format_exact(tiles.margin));
  report.emplace_back("tiles", std::to_string(tiles.tiles.size()));

  std::optional<WordEnumeration> words;
  if (cfg.oracle) {
    words = enumerate_words_closed(d.generators, poly.basepoint, R + tiles.margin, cfg.tol,
                                   cfg.oracle_slack, 1.0, cfg.oracle_rounds);
  }
  const CoverageReport coverage = verify_covering(tiles, poly, cfg.samples, cfg.seed, cfg.tol);
  bool verified = coverage.fraction >= 1.0;

  if (words) {
    const OracleComparison cmp = compare_with_enumeration(tiles, *words, cfg.tol);
    report.emplace_back("oracle_elements", std::to_string(words->elements.size()));
    report.emplace_back("oracle_max_word_length", std::to_string(words->max_length));
    report.emplace_back("oracle_expand_radius", format_exact(words->expand_radius));
    report.emplace_back("oracle_frontier_closed", yes_no(words->frontier_closed));
    report.emplace_back("oracle_missing", std::to_string(cmp.missing.size()));
    report.emplace_back("oracle_extra", std::to_string(cmp.extra.size()));
    report.emplace_back("oracle_boundary_skipped", std::to_string(cmp.boundary_skipped));
    for (const auto& g : cmp.missing) report.emplace_back("missing_word", format_word(g.word()));
    for (const auto& g : cmp.extra) report.emplace_back("extra_word", format_word(g.word()));
    verified = verified && cmp.agree() && words->frontier_closed;
  }
  report.emplace_back("coverage_samples", std::to_string(coverage.samples));
  report.emplace_back("coverage_fraction", format_exact(coverage.fraction));
  report.emplace_back("coverage_mean_multiplicity", format_exact(coverage.mean_multiplicity));
  report.emplace_back("coverage_max_multiplicity", std::to_string(coverage.max_multiplicity));
  if (d.file.reference_volume && stats.bounded) {
    const VerificationReport v =
        covering_diagnostics(poly, stats.volume, tiles, *d.file.reference_volume, std::nullopt,
                             cfg.tol);
    report.emplace_back("ndd_upper", std::to_string(v.ndd_upper));
    report.emplace_back("hidden_wall_area_lower", format_exact(v.hidden_wall_area_lower));
    report.emplace_back("extra_area_lower", format_exact(v.extra_area_lower));
  }

  SpectrumOptions sopt;
  sopt.tol = cfg.tol;
  sopt.oriented = cfg.oriented;
  const SmallList small = big_to_small(tiles, cfg.cutoff, stats.spine_radius, sopt);
  report.emplace_back("orientation", cfg.oriented ? "oriented" : "unoriented");
  report.emplace_back("spectrum_entries", std::to_string(small.entries.size()));
  report.emplace_back("exclusions", std::to_string(small.exclusions.size()));
  report.emplace_back("verified", yes_no(verified));

  export_to(cfg.out + ".biglist", [&](std::ostream& s) { write_biglist(s, tiles); });
  export_to(cfg.out + ".spectrum", [&](std::ostream& s) { write_spectrum(s, small.entries); });
  export_to(cfg.out + ".exclusions",
            [&](std::ostream& s) { write_exclusions(s, small.exclusions); });
  export_to(cfg.out + ".report", [&](std::ostream& s) { write_report(s, report); });
  print_report(out, report);
  write_spectrum(out, small.entries);
  if (!verified) {
    err << "verification failed: tiling and word enumeration or coverage disagree\n";
    return kVerificationFailed;
  }
  return kOk;
}

int cmd_check_words(const RunConfig& cfg, const std::string& w1, const std::string& w2,
                    std::ostream& out) {
  Word a;
  Word b;
  try {
    a = parse_word(w1);
    b = parse_word(w2);
  } catch (const Error& e) {
    throw Failure(kBadInput, std::string("invalid word: ") + e.what());
  }
  cfg.tol.validate();
  const GeneratorFile file = read_generator_file(cfg.input);
  const auto gens = prepared_generators(file, cfg.tol);
  for (const Word* w : {&a, &b}) {
    for (int letter : *w) {
      if (static_cast<std::size_t>(std::abs(letter)) > gens.size()) {
        throw Failure(kBadInput, "word " + format_word(*w) + " uses a missing generator");
      }
    }
  }
  const DomainBuild build = build_domain(gens, basepoint_of(cfg), [&] {
    BuildOptions o = build_options(cfg);
    o.compute_volume = false;
    return o;
  }());
  const double rho = build.stats.injectivity_radius;
  const MoebiusElement g = evaluate_word(a, gens);
  const MoebiusElement h = evaluate_word(b, gens);
  const SameElementEvidence ev = same_element_evidence(g, h, build.poly.basepoint, rho, cfg.tol);
  Report report;
  report.emplace_back("word1", format_word(a));
  report.emplace_back("word2", format_word(b));
  report.emplace_back("injectivity_radius", format_exact(rho));
  report.emplace_back("converged", yes_no(build.stats.converged));
  report.emplace_back("stage", std::to_string(ev.stage));
  report.emplace_back("trace_gap", format_exact(ev.trace_gap));
  if (ev.stage >= 2) report.emplace_back("translation_gap", format_exact(ev.translation_gap));
  if (ev.stage >= 3) report.emplace_back("image_distance", format_exact(ev.image_distance));
  report.emplace_back("two_rho", format_exact(ev.two_rho));
  report.emplace_back("verdict", ev.equal ? "equal" : "distinct");
  write_report(out, report);
  return kOk;
}

std::string read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure(kBadInput, "cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string reserialize(const std::string& path, const std::string& text) {
  const auto ext = path.substr(path.find_last_of('.') == std::string::npos
                                   ? path.size()
                                   : path.find_last_of('.'));
  std::istringstream in(text);
  std::ostringstream s;
  if (ext == ".gens") {
    write_generator_file(s, parse_generator_file(in));
  } else if (ext == ".poly") {
    write_polyhedron(s, parse_polyhedron(in));
  } else if (ext == ".biglist") {
    write_biglist_records(s, parse_biglist(in));
  } else if (ext == ".spectrum") {
    write_spectrum(s, parse_spectrum(in));
  } else if (ext == ".exclusions") {
    write_exclusions(s, parse_exclusions(in));
  } else if (ext == ".report") {
    write_report(s, parse_report(in));
  } else if (ext == ".trace") {
    write_trace(s, parse_trace(in));
  } else {
    throw Failure(kBadInput, "unknown export type '" + ext + "'");
  }
  return s.str();
}

int cmd_roundtrip(const std::vector<std::string>& files, const std::string& out_path,
                  std::ostream& out) {
  int code = kOk;
  for (const auto& path : files) {
    const std::string text = read_all(path);
    const std::string again = reserialize(path, text);
    // Files written by hand (comments, other spacing) only need to keep their
    // values: the canonical form must then be a fixed point.
    const bool identical = again == text;
    const bool equivalent = identical || reserialize(path, again) == again;
    out << path << ": " << (identical ? "identical" : equivalent ? "equivalent" : "differs")
        << '\n';
    if (!equivalent) code = kFailure;
    if (!out_path.empty() && files.size() == 1) write_file(out_path, again);
  }
  return code;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("generators", cfg.input, "Generator file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--basepoint", cfg.basepoint, "Basepoint in Klein coordinates")
      ->expected(3)
      ->capture_default_str();
  cmd->add_option("--max-word-length", cfg.max_word_length, "Longest word used for cuts")
      ->capture_default_str();
  cmd->add_option("--eps-equal", cfg.tol.eps_equal, "Tolerance for matrix and trace comparisons")
      ->capture_default_str();
  cmd->add_option("--eps-geom", cfg.tol.eps_geom, "Tolerance for hyperbolic lengths")
      ->capture_default_str();
  cmd->add_option("--quantum", cfg.tol.quantum, "Hash cell size")->capture_default_str();
}

void add_domain_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--out", cfg.out, "Prefix for exported files")->capture_default_str();
  cmd->add_flag("--optimize", cfg.optimize, "Minimize the spine radius over the basepoint first");
  cmd->add_flag("--allow-approximate", cfg.allow_approximate,
                "Exit successfully even when the build stopped at max-word-length");
  cmd->add_option("--threads", cfg.threads, "Worker threads for optimizer probes (0: all cores)")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet domains and length spectra of hyperbolic 3-manifold groups"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* build = app.add_subcommand("build", "Build the Dirichlet domain and report its statistics");
  add_common(build, cfg);
  add_domain_flags(build, cfg);

  auto* spectrum = app.add_subcommand("spectrum", "Compute the length spectrum below a cutoff");
  add_common(spectrum, cfg);
  add_domain_flags(spectrum, cfg);
  spectrum->add_option("--cutoff", cfg.cutoff, "Real length cutoff")->capture_default_str();
  spectrum->add_option("--tile-cap", cfg.tile_cap, "Maximum number of tiles")
      ->capture_default_str();
  spectrum->add_flag("!--no-oracle", cfg.oracle, "Skip the word-enumeration cross-check");
  spectrum->add_option("--oracle-slack", cfg.oracle_slack,
                       "Initial expansion slack of the word enumeration")
      ->capture_default_str();
  spectrum->add_option("--oracle-rounds", cfg.oracle_rounds,
                       "Maximum enumeration runs with growing slack")
      ->capture_default_str();
  spectrum->add_option("--samples", cfg.samples, "Coverage samples")->capture_default_str();
  spectrum->add_option("--seed", cfg.seed, "Coverage sampling seed")->capture_default_str();
  spectrum->add_flag("--oriented", cfg.oriented, "Count g and its inverse separately");

  std::string word1;
  std::string word2;
  auto* check = app.add_subcommand("check-words", "Decide whether two words are the same element");
  add_common(check, cfg);
  check->add_option("word1", word1, "First word, e.g. \"[1 -2 1]\"")->required();
  check->add_option("word2", word2, "Second word")->required();

  std::vector<std::string> files;
  std::string roundtrip_out;
  auto* roundtrip = app.add_subcommand("roundtrip", "Re-parse exported files and compare");
  roundtrip->add_option("files", files, "Files to check")->required()->check(CLI::ExistingFile);
  roundtrip->add_option("--out", roundtrip_out, "Write the re-serialized file here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*build) return cmd_build(cfg, out, err);
    if (*spectrum) return cmd_spectrum(cfg, out, err);
    if (*check) return cmd_check_words(cfg, word1, word2, out);
    if (*roundtrip) return cmd_roundtrip(files, roundtrip_out, out);
  } catch (const Failure& e) {
    err << e.what() << '\n';
    return e.code();
  } catch (const ParseError& e) {
    err << cfg.input << ": " << e.what() << '\n';
    return kBadInput;
  } catch (const GeneratorNotFaceError& e) {
    err << e.what() << '\n';
    return kGeneratorNotFace;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::InvalidArgument:
      case ErrorCode::SingularMatrix:
        return kBadInput;
      case ErrorCode::QuadratureNotConverged:
        return kNotConverged;
      case ErrorCode::ExplosionGuard:
        return kExplosionGuard;
      case ErrorCode::InsufficientRadius:
        return kInsufficientRadius;
      case ErrorCode::NotVerified:
        return kVerificationFailed;
      default:
        return kFailure;
    }
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace hypdir::cli
