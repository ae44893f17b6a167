#include "cli.hpp"

#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "numphase/criteria.hpp"
#include "numphase/errors.hpp"
#include "numphase/observables.hpp"
#include "numphase/phase_povm.hpp"
#include "numphase/serialization.hpp"
#include "numphase/state_spec.hpp"

namespace numphase::cli {

namespace {

using json = nlohmann::ordered_json;

/// Raised for flag values that pass CLI11 but fail our own validation.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string state;
  std::string out;
  std::string format = "csv";
  std::optional<double> tail_tol;
  int grid = 0;
  std::string asserts;
  // eval
  std::string density_out;
  // sweep
  std::string sweep;
  // sample
  std::size_t shots = 10000;
  std::uint64_t seed = 0;
  double z = 5.0;
  int resamples = 200;
  std::string report_out;
  // curves
  std::string curve_grid = "0.01:1:100";
};

struct Expectation {
  CriterionId id;
  bool violated;
};

double parse_number(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(x)) {
    throw UsageError("invalid number \"" + text + "\" in " + what);
  }
  return x;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<Expectation> parse_asserts(const std::string& text) {
  std::vector<Expectation> out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--assert expects ID=violated|satisfied, got \"" + item + "\"");
    const auto id = criterion_from_string(item.substr(0, eq));
    if (!id) throw UsageError("--assert: unknown criterion \"" + item.substr(0, eq) + "\"");
    const auto want = item.substr(eq + 1);
    if (want != "violated" && want != "satisfied") {
      throw UsageError("--assert: expected violated or satisfied, got \"" + want + "\"");
    }
    out.push_back({*id, want == "violated"});
  }
  return out;
}

StateSpec load_state(const Options& opt) {
  if (opt.state.empty()) throw UsageError("--state is required");
  std::string text = opt.state;
  std::error_code ec;
  if (std::filesystem::is_regular_file(opt.state, ec)) {
    std::ifstream in(opt.state);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto spec = parse_state_spec(text);
  if (opt.tail_tol) {
    if (!(*opt.tail_tol > 0.0 && *opt.tail_tol < 1.0)) throw UsageError("--tail-tol must lie in (0,1)");
    spec.tail_tol = *opt.tail_tol;
  }
  return spec;
}

/// Destination for the main output: a file named by --out or the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file \"" + path + "\"");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  bool is_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct Evaluation {
  ObservableReport report;
  std::vector<CriterionVerdict> verdicts;
  std::optional<PhaseDensity> density;
  int grid = 0;
};

Evaluation evaluate(const BuiltState& state, int grid) {
  return std::visit(
      [&](const auto& s) {
        Evaluation e;
        e.report = observe(s);
        e.grid = grid > 0 ? grid : default_grid_size(phase_degree(s));
        e.density = relative_phase_density(s, e.grid);
        e.verdicts = evaluate_all(e.report, &*e.density);
        return e;
      },
      state);
}

void print_summaries(std::ostream& os, bool color, const std::vector<CriterionVerdict>& verdicts) {
  for (const auto& v : verdicts) {
    const bool advisory = v.advisory.value_or(false);
    if (color) os << (v.violated ? (advisory ? "\x1b[33m" : "\x1b[31m") : "\x1b[32m");
    os << verdict_summary(v);
    if (color) os << "\x1b[0m";
    os << '\n';
  }
}

int check_asserts(const std::vector<Expectation>& expected, const std::vector<CriterionVerdict>& verdicts,
                  std::ostream& err) {
  int code = kOk;
  for (const auto& want : expected) {
    const CriterionVerdict* found = nullptr;
    for (const auto& v : verdicts) {
      if (v.id == want.id) found = &v;
    }
    const char* want_text = want.violated ? "violated" : "satisfied";
    if (found == nullptr) {
      err << "assert failed: " << to_string(want.id) << " expected " << want_text << ", not evaluated\n";
      code = kAssertFailed;
    } else if (found->violated != want.violated) {
      err << "assert failed: " << to_string(want.id) << " expected " << want_text << ", got "
          << (found->violated ? "violated" : "satisfied") << '\n';
      code = kAssertFailed;
    }
  }
  return code;
}

json parsed(const std::string& text) { return json::parse(text); }

void require_format(const Options& opt) {
  if (opt.format != "csv" && opt.format != "json") throw UsageError("--format must be csv or json");
}

int cmd_eval(const Options& opt, std::ostream& out, std::ostream& err, Terminal term) {
  require_format(opt);
  const auto expected = parse_asserts(opt.asserts);
  const auto spec = load_state(opt);
  const auto e = evaluate(build_state(spec), opt.grid);

  Sink sink(opt.out, out);
  auto& os = sink.get();
  if (opt.format == "json") {
    json j;
    j["state"] = parsed(to_json(spec));
    j["grid"] = e.grid;
    j["report"] = parsed(report_json(e.report));
    j["verdicts"] = parsed(verdicts_json(e.verdicts));
    os << j.dump(2) << '\n';
  } else {
    os << report_csv_header() << '\n' << report_csv_row(e.report) << "\n\n" << verdicts_csv(e.verdicts);
  }
  if (!opt.density_out.empty()) {
    Sink density(opt.density_out, out);
    write_density_csv(density.get(), *e.density);
  }
  if (sink.is_file()) {
    print_summaries(out, term.out_color, e.verdicts);
  } else {
    print_summaries(err, term.err_color, e.verdicts);
  }
  return check_asserts(expected, e.verdicts, err);
}

struct SweepRange {
  std::string variable;
  std::vector<double> values;
};

SweepRange parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw UsageError("--sweep expects var:lo:hi:step, got \"" + text + "\"");
  SweepRange r;
  r.variable = parts[0];
  bool known = false;
  for (auto v : sweep_variables()) known = known || v == r.variable;
  if (!known) throw UsageError("--sweep: unknown variable \"" + r.variable + "\"");
  const double lo = parse_number(parts[1], "--sweep");
  const double hi = parse_number(parts[2], "--sweep");
  const double step = parse_number(parts[3], "--sweep");
  if (!(step > 0.0) || hi < lo) throw UsageError("--sweep: empty range \"" + text + "\"");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 1000000) throw UsageError("--sweep: more than 10^6 points");
  for (long i = 0; i < count; ++i) r.values.push_back(lo + static_cast<double>(i) * step);
  return r;
}

constexpr std::array<CriterionId, 7> kSweepColumns{
    CriterionId::np_ent, CriterionId::np_steer, CriterionId::naive_ent, CriterionId::naive_steer,
    CriterionId::hz_ent, CriterionId::hz_steer_a_by_b, CriterionId::hz_steer_b_by_a};

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream&) {
  require_format(opt);
  if (opt.sweep.empty()) throw UsageError("--sweep is required");
  const auto range = parse_sweep(opt.sweep);
  const auto base = load_state(opt);

  // Every point is computed before anything is written, so a failure leaves no partial table.
  std::vector<Evaluation> rows;
  rows.reserve(range.values.size());
  for (double value : range.values) {
    rows.push_back(evaluate(build_state(with_parameter(base, range.variable, value)), opt.grid));
  }

  Sink sink(opt.out, out);
  auto& os = sink.get();
  if (opt.format == "json") {
    auto arr = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json row;
      row["param"] = range.variable;
      row["value"] = range.values[i];
      row["n_var"] = rows[i].report.n_var;
      row["d2_rel"] = rows[i].report.d2_rel;
      for (std::size_t c = 0; c < kSweepColumns.size(); ++c) {
        row["margin_" + std::string(to_string(kSweepColumns[c]))] = rows[i].verdicts[c].margin;
      }
      arr.push_back(row);
    }
    os << arr.dump(2) << '\n';
    return kOk;
  }
  os << "param,value,n_var,d2_rel";
  for (auto id : kSweepColumns) os << ",margin_" << to_string(id);
  os << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << range.variable << ',' << format_double(range.values[i]) << ',' << format_double(rows[i].report.n_var)
       << ',' << format_double(rows[i].report.d2_rel);
    for (std::size_t c = 0; c < kSweepColumns.size(); ++c) os << ',' << format_double(rows[i].verdicts[c].margin);
    os << '\n';
  }
  return kOk;
}

int cmd_sample(const Options& opt, std::ostream& out, std::ostream& err, Terminal term) {
  require_format(opt);
  const auto expected = parse_asserts(opt.asserts);
  if (opt.shots < 2) throw UsageError("--shots must be at least 2");
  if (opt.resamples < 2) throw UsageError("--resamples must be at least 2");
  if (!(opt.z >= 0.0)) throw UsageError("--z must be non-negative");
  const auto spec = load_state(opt);
  const auto state = build_state(spec);

  const auto [samples, grid, exact] = std::visit(
      [&](const auto& s) {
        const LocalPhaseSampler sampler(s, opt.grid);
        return std::tuple{sampler.sample(opt.shots, opt.seed), sampler.grid_size(), observe(s)};
      },
      state);
  const auto est = estimate_relative_dispersion(samples.phi1, samples.phi2, {opt.resamples, opt.seed});
  const std::vector<CriterionVerdict> verdicts{
      sampled_np_verdict(CriterionId::np_ent, exact.n_var, est.d2_hat, est.std_error, opt.z),
      sampled_np_verdict(CriterionId::np_steer, exact.n_var, est.d2_hat, est.std_error, opt.z)};

  if (!opt.out.empty()) {
    Sink samples_sink(opt.out, out);
    write_samples_csv(samples_sink.get(), samples);
  }

  Sink report(opt.report_out, out);
  auto& os = report.get();
  if (opt.format == "json") {
    json j;
    j["state"] = parsed(to_json(spec));
    j["shots"] = opt.shots;
    j["seed"] = opt.seed;
    j["grid"] = grid;
    j["resamples"] = opt.resamples;
    j["z"] = opt.z;
    j["d2_hat"] = est.d2_hat;
    j["std_error"] = est.std_error;
    j["bias_corrected"] = est.bias_corrected;
    j["mean_phasor_re"] = est.mean_phasor.real();
    j["mean_phasor_im"] = est.mean_phasor.imag();
    j["n_var"] = exact.n_var;
    j["d2_rel_exact"] = exact.d2_rel;
    j["verdicts"] = parsed(verdicts_json(verdicts));
    os << j.dump(2) << '\n';
  } else {
    os << "shots,seed,grid,resamples,z,d2_hat,std_error,bias_corrected,mean_phasor_re,mean_phasor_im,n_var,"
          "d2_rel_exact\n";
    os << opt.shots << ',' << opt.seed << ',' << grid << ',' << opt.resamples << ',' << format_double(opt.z) << ','
       << format_double(est.d2_hat) << ',' << format_double(est.std_error) << ','
       << format_double(est.bias_corrected) << ',' << format_double(est.mean_phasor.real()) << ','
       << format_double(est.mean_phasor.imag()) << ',' << format_double(exact.n_var) << ','
       << format_double(exact.d2_rel) << "\n\n"
       << verdicts_csv(verdicts);
  }
  if (report.is_file()) {
    print_summaries(out, term.out_color, verdicts);
  } else {
    print_summaries(err, term.err_color, verdicts);
  }
  return check_asserts(expected, verdicts, err);
}

int cmd_curves(const Options& opt, std::ostream& out) {
  require_format(opt);
  const auto parts = split(opt.curve_grid, ':');
  if (parts.size() != 3) throw UsageError("--grid expects lo:hi:points, got \"" + opt.curve_grid + "\"");
  const double lo = parse_number(parts[0], "--grid");
  const double hi = parse_number(parts[1], "--grid");
  const double points = parse_number(parts[2], "--grid");
  if (points != std::floor(points) || points < 1 || points > 1e7) {
    throw UsageError("--grid: point count must be a positive integer");
  }
  if (!(lo > 0.0) || hi > 1.0) throw UsageError("--grid: D^2 values must lie in (0,1]");
  const auto grid = linear_grid(lo, hi, static_cast<int>(points));
  const auto ent = boundary_curves(CurveId::ent_fig2, grid);
  const auto steer = boundary_curves(CurveId::steer_fig2, grid);
  const auto ur = boundary_curves(CurveId::ur_fig1, grid);
  constexpr double kUrFloor = 0.75;
  constexpr double kUrTightD2 = 0.5;

  Sink sink(opt.out, out);
  auto& os = sink.get();
  if (opt.format == "json") {
    json j;
    j["d2"] = grid;
    j["ENT_FIG2"] = ent.values;
    j["STEER_FIG2"] = steer.values;
    j["UR_FIG1"] = ur.values;
    j["UR_FLOOR"] = kUrFloor;
    j["UR_TIGHT_D2"] = kUrTightD2;
    os << j.dump(2) << '\n';
    return kOk;
  }
  os << "d2,ENT_FIG2,STEER_FIG2,UR_FIG1,UR_FLOOR,UR_TIGHT_D2\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << format_double(grid[i]) << ',' << format_double(ent.values[i]) << ',' << format_double(steer.values[i])
       << ',' << format_double(ur.values[i]) << ',' << format_double(kUrFloor) << ','
       << format_double(kUrTightD2) << '\n';
  }
  return kOk;
}

void add_state_options(CLI::App* sub, Options& opt) {
  sub->add_option("--state", opt.state, "State spec: JSON file, inline JSON or \"family key=value ...\"")
      ->required();
  sub->add_option("--out", opt.out, "Output path (default stdout)");
  sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--tail-tol", opt.tail_tol, "Override the spec's truncation tolerance");
  sub->add_option("--grid", opt.grid, "Phase grid size K (default auto)")->check(CLI::NonNegativeNumber);
}

}  // namespace

bool color_enabled(int fd) {
  const char* no_color = std::getenv("NO_COLOR");
  if (no_color != nullptr && no_color[0] != '\0') return false;
  return ::isatty(fd) == 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, Terminal terminal) {
  Options opt;
  CLI::App app{"Number-phase observables and entanglement/steering criteria for two-mode states", "numphase"};
  app.require_subcommand(1, 1);

  auto* eval = app.add_subcommand("eval", "Evaluate observables and every criterion on one state");
  add_state_options(eval, opt);
  eval->add_option("--density", opt.density_out, "Also write the relative-phase density CSV here");
  eval->add_option("--assert", opt.asserts, "Comma list ID=violated|satisfied; exit 1 on mismatch");

  auto* sweep = app.add_subcommand("sweep", "Evaluate criteria margins over a parameter range");
  add_state_options(sweep, opt);
  sweep->add_option("--sweep", opt.sweep, "var:lo:hi:step with var in N, r, mean, std, variance, transmissivity")
      ->required();

  auto* sample = app.add_subcommand("sample", "Monte-Carlo local phase measurements and sampled verdicts");
  add_state_options(sample, opt);
  sample->add_option("--shots", opt.shots, "Number of shots")->capture_default_str();
  sample->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  sample->add_option("--z", opt.z, "z-score for sampled verdicts")->capture_default_str();
  sample->add_option("--resamples", opt.resamples, "Bootstrap resamples")->capture_default_str();
  sample->add_option("--report", opt.report_out, "Report path (default stdout); --out receives the samples");
  sample->add_option("--assert", opt.asserts, "Comma list ID=violated|satisfied; exit 1 on mismatch");

  auto* curves = app.add_subcommand("curves", "Boundary curves for the dispersion criteria");
  curves->add_option("--grid", opt.curve_grid, "D^2 grid lo:hi:points")->capture_default_str();
  curves->add_option("--out", opt.out, "Output path (default stdout)");
  curves->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (eval->parsed()) return cmd_eval(opt, out, err, terminal);
    if (sweep->parsed()) return cmd_sweep(opt, out, err);
    if (sample->parsed()) return cmd_sample(opt, out, err, terminal);
    return cmd_curves(opt, out);
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << " (required cutoff " << e.required_cutoff() << ")\n";
    return kTruncation;
  } catch (const GridError& e) {
    err << "error: " << e.what() << " (minimum grid " << e.required_minimum() << ")\n";
    return kBadInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace numphase::cli
