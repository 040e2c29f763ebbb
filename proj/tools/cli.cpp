#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "supertrace/builtins.hpp"
#include "supertrace/errors.hpp"
#include "supertrace/io.hpp"

namespace supertrace::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240611;

struct Flags {
  std::string mode = "exact";
  int grid_points = kDefaultGridPoints;
  std::vector<std::string> window;
  std::string epsilon = "1/1024";
  std::optional<double> tol;
  std::uint64_t seed = kDefaultSeed;
  std::string csv;
  std::string report;
  std::string out;
  std::string builtin;
  std::optional<long> scale;
  std::optional<long> p;
  std::optional<long> bound;
  std::string operator_path;
  std::vector<long> row;
  std::vector<long> col;
  int component = 1;
  std::string xi;
  std::string alpha = "0";
  long m_max = 30;
  long depth = 12;
  bool wavelet = false;
  std::vector<std::string> inputs;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

struct Loaded {
  Document doc;
  bool canonicalized = false;
};

Loaded load(const std::string& path, const Flags& flags) {
  constexpr std::string_view prefix = "builtin:";
  if (path.rfind(prefix, 0) == 0) {
    return {to_document(builtin_system(path.substr(prefix.size()), flags.scale.value_or(2))), false};
  }
  ParsedDocument parsed = parse_document(read_text(path));
  return {std::move(parsed.value), parsed.canonicalized};
}

SystemDocument load_system(const std::string& path, const Flags& flags) {
  Loaded l = load(path, flags);
  if (auto* s = std::get_if<SystemDocument>(&l.doc)) return std::move(*s);
  if (auto* f = std::get_if<VectorFunction>(&l.doc)) {
    if (f->size() != 1) fail(ErrorCode::InvalidArgument, "'" + path + "' is a function, not a system");
    return {AffineStructure::classical(flags.scale.value_or(2)), {std::move(*f)}, SystemTag::Candidate};
  }
  fail(ErrorCode::InvalidArgument, "'" + path + "' is not a system document");
}

std::vector<StepSpectrum> scalar_list(const SystemDocument& s, const std::string& path) {
  if (s.structure.n != 1) fail(ErrorCode::InvalidArgument, "'" + path + "' must have n = 1");
  std::vector<StepSpectrum> out;
  for (const auto& p : s.psis) out.push_back(p.components[0]);
  return out;
}

CheckOptions options_from(const Flags& flags) {
  CheckOptions o;
  o.mode = parse_mode(flags.mode);
  o.grid_points = flags.grid_points;
  o.tolerance = flags.tol;
  return o;
}

std::pair<RationalPi, RationalPi> window_of(const Flags& flags) {
  if (flags.window.empty()) return {RationalPi(-1, 1), RationalPi(1, 1)};
  RationalPi lo = RationalPi::parse(flags.window.at(0));
  RationalPi hi = RationalPi::parse(flags.window.at(1));
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "window needs a < b");
  return {lo, hi};
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_outputs(const Flags& flags, const std::vector<CsvRow>& rows,
                  const std::optional<std::string>& report_json_text) {
  if (!flags.csv.empty()) write_text(flags.csv, to_csv(rows));
  if (!flags.report.empty() && report_json_text) write_text(flags.report, *report_json_text);
}

int finish_check(const CheckReport& report, const std::string& command, const Flags& flags,
                 std::ostream& out) {
  out << report_text(report, command);
  emit_outputs(flags, csv_rows(report), report_json(report, command));
  return report.passed ? kSuccess : kCheckFailed;
}

std::vector<RationalPi> evaluation_points(const std::vector<VectorFunction>& gens,
                                          const AffineStructure& a, const Flags& flags) {
  const auto [lo, hi] = window_of(flags);
  if (parse_mode(flags.mode) == Mode::Grid) return grid_points(lo, hi, flags.grid_points);
  require_modulation_free(gens, "exact evaluation");
  std::vector<RationalPi> pts;
  for (const Cell& c : fiber_cells(gens, a, lo, hi)) pts.push_back(c.mid);
  return pts;
}

SISpace certified_space(const SystemDocument& s, std::ostream& out) {
  SISpace v(s.psis);
  const CheckReport r = certify_ntf_generator(v, s.structure);
  if (!r.passed) out << "warning: generators are not an NTF generator; values are unverified\n";
  return v;
}

// Subcommand bodies ---------------------------------------------------------

int cmd_validate(const Flags& flags, std::ostream& out) {
  const Loaded l = load(flags.inputs.at(0), flags);
  int code = kSuccess;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineStructure> || std::is_same_v<T, SystemDocument>) {
          const AffineStructure* a;
          if constexpr (std::is_same_v<T, AffineStructure>) {
            out << "kind structure\n";
            a = &v;
          } else {
            out << "kind system, " << v.psis.size() << " functions\n";
            a = &v.structure;
          }
          const auto violations = validate_structure(*a);
          for (const auto& viol : violations) {
            out << "violation";
            if (viol.index >= 0) out << " at k=" << viol.index + 1;
            out << ": " << viol.message << " (defect " << format_rational(viol.defect) << "·π)\n";
          }
          if (!violations.empty()) code = kCheckFailed;
          if (violations.empty()) {
            for (const auto& c : cycle_decomposition(*a)) {
              out << "cycle {";
              for (std::size_t m = 0; m < c.members.size(); ++m) {
                out << (m ? "," : "") << c.members[m] + 1;
              }
              out << "} theta orbit length " << c.theta_orbit_length
                  << (c.orbit_shorter() ? " (shorter than the cycle)" : "") << "\n";
            }
          }
        } else if constexpr (std::is_same_v<T, VectorFunction>) {
          out << "kind function, " << v.size() << " components\n";
        } else {
          out << "kind operator\n";
        }
      },
      l.doc);
  if (l.canonicalized) out << "note: input spectra were canonicalized\n";
  out << (code == kSuccess ? "valid\n" : "invalid\n");
  return code;
}

int cmd_check_ntf(const Flags& flags, std::ostream& out) {
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  const auto [lo, hi] = window_of(flags);
  return finish_check(check_ntf_translates(s.psis, s.structure, lo, hi, options_from(flags)),
                      "check-ntf", flags, out);
}

int cmd_check_wavelet(const Flags& flags, std::ostream& out) {
  SystemDocument s = load_system(flags.inputs.at(0), flags);
  WaveletSystem w(std::move(s.structure), std::move(s.psis));
  const CheckReport r = verify_wavelet_system(w, options_from(flags));
  const int code = finish_check(r, "check-wavelet", flags, out);
  out << "tag " << to_string(w.tag()) << "\n";
  return code;
}

int cmd_check_disjoint(const Flags& flags, std::ostream& out) {
  if (flags.inputs.size() != 2) fail(ErrorCode::InvalidArgument, "check-disjoint takes two inputs");
  const SystemDocument a = load_system(flags.inputs[0], flags);
  const SystemDocument b = load_system(flags.inputs[1], flags);
  const CheckReport r = check_strong_disjointness(scalar_list(a, flags.inputs[0]),
                                                  scalar_list(b, flags.inputs[1]),
                                                  a.structure.scale, options_from(flags));
  return finish_check(r, "check-disjoint", flags, out);
}

int cmd_oversample(const Flags& flags, std::ostream& out) {
  if (!flags.p) fail(ErrorCode::InvalidArgument, "oversample needs --p");
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  const long scale = flags.scale.value_or(s.structure.scale);
  std::vector<std::string> labels;
  for (const auto& f : s.psis) labels.push_back(f.label);
  const WaveletSystem w = oversample(scalar_list(s, flags.inputs[0]), scale, *flags.p, labels);
  const std::string doc = serialize(to_document(w));
  if (flags.out.empty()) {
    out << doc;
    return kSuccess;
  }
  write_text(flags.out, doc);
  out << "wrote " << flags.out << ": n=" << w.structure().n << ", N=" << scale << "\n";
  for (std::size_t l = 0; l < w.psis().size(); ++l) {
    Rational norm(0);
    for (const auto& c : w.psis()[l].components) norm += support_measure(c);
    out << w.psis()[l].label << " support measure " << format_rational(norm) << "·π, norm^2 "
        << format_value(l2_norm_sq(w.psis()[l])) << "\n";
  }
  return kSuccess;
}

int cmd_trace(const Flags& flags, std::ostream& out) {
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  FiberOperator t = FiberOperator::identity();
  if (!flags.operator_path.empty()) {
    Loaded op = load(flags.operator_path, flags);
    auto* parsed = std::get_if<FiberOperator>(&op.doc);
    if (!parsed) fail(ErrorCode::InvalidArgument, "--operator must be an operator document");
    t = *parsed;
  }
  const SISpace v = certified_space(s, out);
  std::vector<CsvRow> rows;
  for (const RationalPi& xi : evaluation_points(s.psis, s.structure, flags)) {
    const Complex value = local_trace_operator(v, s.structure, t, xi).value;
    out << "xi " << xi.str() << "·π trace " << format_value(value.real()) << " "
        << format_value(value.imag()) << "\n";
    rows.push_back({xi, value});
  }
  emit_outputs(flags, rows, std::nullopt);
  return kSuccess;
}

FiberIndex parse_pair(const std::vector<long>& v, const char* name, int n) {
  if (v.size() != 2) fail(ErrorCode::InvalidArgument, std::string(name) + " needs k and i");
  if (v[1] < 1 || v[1] > n) fail(ErrorCode::InvalidIndex, std::string(name) + " component out of range");
  return {v[0], static_cast<int>(v[1] - 1)};
}

int cmd_dual_gramian(const Flags& flags, std::ostream& out) {
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  const FiberIndex row = parse_pair(flags.row, "--row", s.structure.n);
  const FiberIndex col = parse_pair(flags.col, "--col", s.structure.n);
  const SISpace v(s.psis);
  std::vector<CsvRow> rows;
  for (const RationalPi& xi : evaluation_points(s.psis, s.structure, flags)) {
    const Complex value = dual_gramian_entry(v, s.structure, row, col, xi);
    out << "xi " << xi.str() << "·π entry " << format_value(value.real()) << " "
        << format_value(value.imag()) << "\n";
    rows.push_back({xi, value});
  }
  emit_outputs(flags, rows, std::nullopt);
  return kSuccess;
}

int component_index(const Flags& flags, const AffineStructure& a) {
  if (flags.component < 1 || flags.component > a.n) {
    fail(ErrorCode::InvalidIndex, "--component must be in 1.." + std::to_string(a.n));
  }
  return flags.component - 1;
}

void print_spectrum(const StepSpectrum& s, std::ostream& out, std::vector<CsvRow>& rows) {
  for (const auto& seg : s.segments()) {
    out << "[" << seg.left.str() << ", " << seg.right.str() << ")·π value "
        << format_value(seg.piece.value.real()) << " " << format_value(seg.piece.value.imag())
        << "\n";
  }
  if (s.is_zero()) {
    out << "zero\n";
    return;
  }
  for (const Cell& c : common_refinement({s}, s.support_begin(), s.support_end())) {
    rows.push_back({c.mid, s(c.mid)});
  }
}

int cmd_spectral(const Flags& flags, std::ostream& out) {
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  const int i = component_index(flags, s.structure);
  if (flags.wavelet) {
    const WaveletSystem w(s.structure, s.psis);
    const auto [lo, hi] = window_of(flags);
    const ScalingSpectral sc =
        scaling_spectral_function(w, i, lo, hi, RationalPi::parse(flags.epsilon));
    std::vector<CsvRow> rows;
    print_spectrum(sc.value, out, rows);
    out << "excluded measure " << format_rational(sc.excluded_measure) << "·π\n";
    if (sc.unverified) out << "flag: conditional on semi-orthogonality\n";
    emit_outputs(flags, rows, std::nullopt);
    return kSuccess;
  }
  const SISpace v = certified_space(s, out);
  std::vector<CsvRow> rows;
  print_spectrum(spectral_function(v, s.structure, i), out, rows);
  emit_outputs(flags, rows, std::nullopt);
  return kSuccess;
}

int cmd_dimension(const Flags& flags, std::ostream& out) {
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  std::vector<CsvRow> rows;
  if (flags.wavelet) {
    WaveletSystem w(s.structure, s.psis);
    const auto [lo, hi] = window_of(flags);
    int mismatches = 0;
    for (const auto& d : wavelet_dimension_function(w, seeded_points(lo, hi, flags.grid_points, flags.seed))) {
      const bool integral = std::abs(d.value - std::round(d.value)) <= kGridTolerance;
      const bool match = integral && std::lround(d.value) == d.rank;
      mismatches += match ? 0 : 1;
      out << "xi " << d.xi.str() << "·π D " << format_value(d.value) << " rank " << d.rank
          << (match ? "" : " MISMATCH") << "\n";
      rows.push_back({d.xi, {d.value, 0.0}});
    }
    out << "mismatches " << mismatches << "\n";
    emit_outputs(flags, rows, std::nullopt);
    return mismatches == 0 ? kSuccess : kCheckFailed;
  }
  const SISpace v = certified_space(s, out);
  const PeriodicStep dim = dimension_function(v, s.structure);
  print_spectrum(dim.window(), out, rows);
  emit_outputs(flags, rows, std::nullopt);
  return kSuccess;
}

int cmd_multiplicity(const Flags& flags, std::ostream& out) {
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  const SISpace v(s.psis);
  const double tol = flags.tol.value_or(kDefaultRankTolerance);
  std::vector<RationalPi> pts;
  if (!flags.xi.empty()) {
    pts.push_back(RationalPi::parse(flags.xi));
  } else {
    pts = evaluation_points(s.psis, s.structure, flags);
  }
  std::vector<CsvRow> rows;
  for (const auto& xi : pts) {
    const int m = multiplicity_at(v, s.structure, xi, tol);
    out << "xi " << xi.str() << "·π multiplicity " << m << "\n";
    rows.push_back({xi, {static_cast<double>(m), 0.0}});
  }
  emit_outputs(flags, rows, std::nullopt);
  return kSuccess;
}

int cmd_extract_qo(const Flags& flags, std::ostream& out) {
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  const auto outputs =
      extract_quasi_orthogonal(SISpace(s.psis), s.structure, flags.tol.value_or(kDefaultRankTolerance));
  SystemDocument doc{s.structure, outputs, SystemTag::Candidate};
  for (const auto& f : outputs) {
    Rational measure(0);
    for (const Cell& c : fiber_cells({f}, s.structure, RationalPi(-1, 1), RationalPi(1, 1))) {
      if (!fiber(f, s.structure, c.mid).empty()) measure += c.right.coeff() - c.left.coeff();
    }
    out << f.label << " support set measure " << format_rational(measure) << "·π\n";
  }
  if (flags.out.empty()) {
    out << serialize(doc);
  } else {
    write_text(flags.out, serialize(doc));
    out << "wrote " << flags.out << "\n";
  }
  return kSuccess;
}

int cmd_probe_limit(const Flags& flags, std::ostream& out) {
  const SystemDocument s = load_system(flags.inputs.at(0), flags);
  if (flags.xi.empty()) fail(ErrorCode::InvalidArgument, "probe-limit needs --xi");
  const int i = component_index(flags, s.structure);
  const RationalPi xi = RationalPi::parse(flags.xi);
  const LimitProbe p = scaling_limit_probe(SISpace(s.psis), s.structure, i, xi, flags.m_max,
                                           flags.tol.value_or(kExactTolerance));
  std::vector<CsvRow> rows;
  for (std::size_t m = 0; m < p.values.size(); ++m) {
    out << "m " << m << " value " << format_value(p.values[m]) << "\n";
    rows.push_back({xi * rational_pow(s.structure.scale, -static_cast<long>(m)), {p.values[m], 0.0}});
  }
  emit_outputs(flags, rows, std::nullopt);
  if (!p.settled_at) {
    out << "no convergence\n";
    return kCheckFailed;
  }
  out << "settled at m = " << *p.settled_at << "\n";
  return kSuccess;
}

bool radii_inner_zero(const WaveletSystem& w) {
  for (const auto& f : w.psis()) {
    if (!f.is_zero() && f.inner_radius().is_zero()) return true;
  }
  return false;
}

int cmd_probe_lower_bound(const Flags& flags, std::ostream& out) {
  SystemDocument s = load_system(flags.inputs.at(0), flags);
  if (flags.xi.empty()) fail(ErrorCode::InvalidArgument, "probe-lower-bound needs --xi");
  WaveletSystem w(std::move(s.structure), std::move(s.psis));
  CheckOptions o = options_from(flags);
  if (o.mode == Mode::Exact) {
    bool modulated = false;
    for (const auto& f : w.psis()) modulated = modulated || !f.is_modulation_free();
    if (modulated || radii_inner_zero(w)) o.mode = Mode::Grid;
  }
  verify_wavelet_system(w, o);
  const RationalPi alpha = RationalPi::parse(flags.alpha);
  const RationalPi xi = RationalPi::parse(flags.xi);
  const LowerBoundProbe p = lower_bound_probe(w, alpha, xi, flags.depth, flags.tol.value_or(kGridTolerance));
  std::vector<CsvRow> rows;
  for (std::size_t m = 0; m < p.values.size(); ++m) {
    const RationalPi x = alpha + xi * rational_pow(w.structure().scale, -static_cast<long>(m + 1));
    out << "m " << m + 1 << " D " << format_value(p.values[m]) << "\n";
    rows.push_back({x, {p.values[m], 0.0}});
  }
  out << "card " << p.cardinality << ", tail max " << format_value(p.tail_max) << ", verdict "
      << (p.passed ? "pass" : "fail") << "\n";
  if (p.hypothesis_unmet) out << "flag: hypothesis unmet (system not verified)\n";
  emit_outputs(flags, rows, std::nullopt);
  return p.passed ? kSuccess : kCheckFailed;
}

int cmd_offset_set(const Flags& flags, std::ostream& out) {
  if (!flags.scale || !flags.p) fail(ErrorCode::InvalidArgument, "offset-set needs --N and --p");
  return finish_check(offset_set_check(*flags.scale, *flags.p, flags.bound.value_or(50)),
                      "offset-set", flags, out);
}

int cmd_builtin(const Flags& flags, std::ostream& out) {
  const std::string doc = serialize(to_document(builtin_system(flags.builtin, flags.scale.value_or(2))));
  if (flags.out.empty()) {
    out << doc;
  } else {
    write_text(flags.out, doc);
  }
  return kSuccess;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::ModeUnsupported ? kModeUnsupported : kInputError;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact frequency-side checks for permutative affine wavelet structures", "supertrace"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  Flags flags;
  app.add_option("--builtin", flags.builtin, "Emit a built-in system document")
      ->check(CLI::IsMember(builtin_names()));
  app.add_option("--mode", flags.mode, "exact or grid")->check(CLI::IsMember({"exact", "grid"}));
  app.add_option("--grid-points", flags.grid_points, "Grid size per domain")->check(CLI::PositiveNumber);
  app.add_option("--window", flags.window, "Window a b (multiples of pi)")->expected(2);
  app.add_option("--epsilon", flags.epsilon, "Excluded radius around accumulation points");
  app.add_option("--tol", flags.tol, "Tolerance override");
  app.add_option("--seed", flags.seed, "Seed for probe offsets");
  app.add_option("--csv", flags.csv, "Write per-point values as CSV");
  app.add_option("--report", flags.report, "Write the check report as JSON");
  app.add_option("--out", flags.out, "Output document path");
  app.add_option("--N", flags.scale, "Scale N")->check(CLI::Range(2L, 1L << 20));
  app.add_option("--p", flags.p, "Oversampling factor p")->check(CLI::PositiveNumber);

  struct Sub {
    const char* name;
    const char* help;
    int inputs;
    int (*run)(const Flags&, std::ostream&);
  };
  const std::vector<Sub> subs = {
      {"validate", "Parse a document and validate structures", 1, cmd_validate},
      {"check-ntf", "Check the NTF translate equations on a window", 1, cmd_check_ntf},
      {"check-wavelet", "Check the super-wavelet equations", 1, cmd_check_wavelet},
      {"check-disjoint", "Check strong disjointness of two scalar wavelets", 2, cmd_check_disjoint},
      {"oversample", "Build the p-fold oversampled super-wavelet", 1, cmd_oversample},
      {"trace", "Local trace function of the generated space", 1, cmd_trace},
      {"dual-gramian", "One dual Gramian entry along the window", 1, cmd_dual_gramian},
      {"spectral", "Spectral function of one component", 1, cmd_spectral},
      {"dimension", "Dimension function (or D_Psi with --wavelet)", 1, cmd_dimension},
      {"multiplicity", "Fiber rank of the generators", 1, cmd_multiplicity},
      {"extract-qo", "Quasi-orthogonal generators by per-cell Gram-Schmidt", 1, cmd_extract_qo},
      {"probe-limit", "Scaling limit probe", 1, cmd_probe_limit},
      {"probe-lower-bound", "Lower bound probe of D_Psi near alpha", 1, cmd_probe_lower_bound},
      {"offset-set", "Integer offset-set identity of the oversampling proof", 0, cmd_offset_set},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> registered;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    if (s.inputs > 0) {
      sub->add_option("inputs", flags.inputs, "Input documents (path, '-' or builtin:NAME)")
          ->required()
          ->expected(s.inputs);
    }
    registered.emplace_back(sub, &s);
  }
  CLI::App* trace = registered[5].first;
  trace->add_option("--operator", flags.operator_path, "Operator document (default identity)");
  CLI::App* dg = registered[6].first;
  dg->add_option("--row", flags.row, "k i")->expected(2)->required();
  dg->add_option("--col", flags.col, "l j")->expected(2)->required();
  for (int idx : {7, 11}) {
    registered[static_cast<std::size_t>(idx)].first->add_option("--component", flags.component,
                                                               "1-based component");
  }
  registered[7].first->add_flag("--wavelet", flags.wavelet,
                                "Scaling spectral function of the wavelet system");
  registered[8].first->add_flag("--wavelet", flags.wavelet, "Evaluate D_Psi of the wavelet system");
  registered[9].first->add_option("--xi", flags.xi, "Single point (multiple of pi)");
  registered[11].first->add_option("--xi", flags.xi, "Point (multiple of pi)");
  registered[11].first->add_option("--m-max", flags.m_max, "Largest level")->check(CLI::NonNegativeNumber);
  registered[12].first->add_option("--alpha", flags.alpha, "Accumulation point alpha0");
  registered[12].first->add_option("--xi", flags.xi, "Offset xi0");
  registered[12].first->add_option("--depth", flags.depth, "Number of levels")->check(CLI::PositiveNumber);
  registered[13].first->add_option("--Q", flags.bound, "Range bound Q")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    for (const auto& [sub, spec] : registered) {
      if (sub->parsed()) return spec->run(flags, out);
    }
    if (!flags.builtin.empty()) return cmd_builtin(flags, out);
    out << app.help();
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace supertrace::cli
