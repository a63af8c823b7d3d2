#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fractarray/analysis.hpp"
#include "fractarray/baselines.hpp"
#include "fractarray/core.hpp"
#include "fractarray/coupling.hpp"
#include "fractarray/doa.hpp"
#include "fractarray/fractal.hpp"
#include "fractarray/io.hpp"
#include "fractarray/search.hpp"
#include "manifest.hpp"

#ifndef FRACTARRAY_VERSION
#define FRACTARRAY_VERSION "0.0.0"
#endif

namespace fractarray::cli {

namespace {

using nlohmann::json;

// Input problems that are the caller's fault; mapped to exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// Comma-separated list whose items may themselves be literals like "nested(4,4)".
std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not an integer: '" + s + "'");
  return v;
}

// "3/10" or a plain decimal such as "0.3", converted exactly.
Fraction parse_fraction(const std::string& s) {
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const auto num = parse_int(s.substr(0, slash));
    const auto den = parse_int(s.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in '" + s + "'");
    return Fraction(num, den);
  }
  const auto dot = s.find('.');
  const std::string whole = s.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (frac.size() > 15 || (whole.empty() && frac.empty())) throw UsageError("bad fraction '" + s + "'");
  for (char ch : whole + frac) {
    if (ch < '0' || ch > '9') throw UsageError("bad fraction '" + s + "'");
  }
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t num = (whole.empty() ? 0 : parse_int(whole)) * den + (frac.empty() ? 0 : parse_int(frac));
  return Fraction(num, den);
}

std::pair<double, double> parse_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw UsageError("expected lo:hi, got '" + s + "'");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  if (lo > hi) throw UsageError("range '" + s + "' is reversed");
  return {lo, hi};
}

// a:b:step, inclusive of b up to rounding; values are a + i * step.
std::vector<double> parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) return {parse_double(parts[0])};
  if (parts.size() != 3) throw UsageError("expected a:b:step, got '" + s + "'");
  const double a = parse_double(parts[0]);
  const double b = parse_double(parts[1]);
  const double step = parse_double(parts[2]);
  if (!(step > 0.0) || b < a) throw UsageError("grid '" + s + "' needs a <= b and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (n > 100000) throw UsageError("grid '" + s + "' has too many points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + static_cast<double>(i) * step;
  return out;
}

// "nested(4,4)" style; nullopt when the text is not of that form.
std::optional<BaselineSpec> parse_baseline_literal(const std::string& s) {
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') return std::nullopt;
  BaselineSpec spec;
  try {
    spec.kind = parse_baseline_kind(s.substr(0, open));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  for (const auto& p : split(s.substr(open + 1, s.size() - open - 2), ',')) spec.params.push_back(parse_int(p));
  return spec;
}

// A path to an array JSON file, or a baseline literal such as "coprime(3,4)".
NamedArray resolve_array(const std::string& token) {
  if (std::filesystem::exists(token)) {
    try {
      return load_array_file(token);
    } catch (const std::invalid_argument& e) {
      throw UsageError(token + ": " + e.what());
    }
  }
  if (auto spec = parse_baseline_literal(token)) {
    try {
      return {baseline_name(*spec), build_baseline(*spec)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("cannot open array file '" + token + "'");
}

unsigned default_threads() {
  if (const char* env = std::getenv("FRACTARRAY_THREADS")) {
    try {
      const auto v = parse_int(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const UsageError&) {
    }
    throw UsageError("FRACTARRAY_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct CouplingFlags {
  int q = 15;
  double c1_magnitude = 0.3;
  double c1_phase = std::numbers::pi / 3.0;
  std::string phases = "fixed";
  std::vector<CLI::Option*> options;

  void add(CLI::App* cmd) {
    options.push_back(cmd->add_option("--coupling-q", q, "coupling bandwidth q")->capture_default_str());
    options.push_back(
        cmd->add_option("--coupling-c1-mag", c1_magnitude, "|c1|")->capture_default_str());
    options.push_back(
        cmd->add_option("--coupling-c1-phase", c1_phase, "arg c1 in radians")->capture_default_str());
    options.push_back(cmd->add_option("--coupling-phases", phases, "phase rule")
                          ->check(CLI::IsMember({"fixed", "random"}))
                          ->capture_default_str());
  }

  bool given() const {
    for (auto* o : options) {
      if (o->count() > 0) return true;
    }
    return false;
  }

  CouplingModel model(std::uint64_t seed) const {
    CouplingModel m;
    m.q = q;
    m.c1_magnitude = c1_magnitude;
    m.c1_phase = c1_phase;
    m.phase_rule = phases == "random" ? PhaseRule::random_uniform : PhaseRule::fixed_progression;
    m.seed = seed;
    try {
      m.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return m;
  }
};

json coupling_json(const CouplingModel& m) {
  return {{"q", m.q},
          {"c1_magnitude", m.c1_magnitude},
          {"c1_phase", m.c1_phase},
          {"phases", m.phase_rule == PhaseRule::random_uniform ? "random" : "fixed"},
          {"seed", m.seed}};
}

// Collects written files so one manifest can cover them.
class Artifacts {
 public:
  void write(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot write '" + path + "'");
    os << content;
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
    paths_.push_back(path);
  }
  const std::vector<std::string>& paths() const { return paths_; }

 private:
  std::vector<std::string> paths_;
};

std::string summary_line(const SensorArray& a) {
  const CoarrayProfile p(a);
  std::ostringstream os;
  os << "N=" << a.size() << " aperture=" << a.aperture() << " |D|=" << p.dof()
     << " |U|=" << p.central_ula_size() << " hole-free=" << (p.hole_free() ? "true" : "false")
     << " symmetric=" << (is_symmetric(a) ? "true" : "false");
  return os.str();
}

// Array-producing commands: JSON goes to --output when given, else to stdout;
// the summary line always goes to stdout.
void emit_array(const std::string& name, const SensorArray& a, const std::string& output,
                Artifacts& artifacts, std::ostream& out) {
  const std::string body = array_to_json(name, a).dump() + "\n";
  if (output.empty()) {
    out << body;
  } else {
    artifacts.write(output, body);
  }
  out << summary_line(a) << '\n';
}

std::string fraction_text(const Fraction& f) {
  return format_fraction(f) + " (" +
         format_fixed(boost::rational_cast<double>(f)) + ")";
}

json analysis_json(const NamedArray& na, const CouplingModel& model) {
  const SensorArray& a = na.array;
  const CoarrayProfile p(a);
  const EconomyReport e = economy(a);
  return {{"name", na.name},
          {"elements", std::vector<Position>(a.begin(), a.end())},
          {"sensors", a.size()},
          {"aperture", a.aperture()},
          {"dof", p.dof()},
          {"central_ula", p.central_ula_size()},
          {"hole_free", p.hole_free()},
          {"symmetric", is_symmetric(a)},
          {"essential", e.essential},
          {"fragility", format_fraction(e.fragility)},
          {"fragility_value", format_fixed(boost::rational_cast<double>(e.fragility))},
          {"maximally_economic", e.maximally_economic},
          {"c1", e.satisfies_c1},
          {"leakage", format_fixed(coupling_leakage(a, model))},
          {"coupling", coupling_json(model)}};
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

struct Context {
  std::vector<std::string> command_line;
  std::ostream& out;
  std::ostream& err;
  Artifacts artifacts;
  json configuration = json::object();
  std::uint64_t seed = 0;
  std::string started_at;
};

// ---- subcommands ---------------------------------------------------------

struct CantorCmd {
  int order = 1;
  int max_order = kDefaultMaxOrder;
  std::string output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("cantor", "Cantor array of a given order");
    c->add_option("--order", order, "fractal order")->required();
    c->add_option("--max-order", max_order, "order cap")->capture_default_str();
    c->add_option("-o,--output", output, "write the array JSON here");
  }

  int run(Context& ctx) {
    ctx.configuration = {{"command", "cantor"}, {"order", order}, {"max_order", max_order}};
    const SensorArray a = cantor(order, max_order);
    emit_array("cantor(" + std::to_string(order) + ")", a, output, ctx.artifacts, ctx.out);
    return kExitOk;
  }
};

struct ExpandCmd {
  std::string array;
  std::string generators;
  int order = 1;
  int max_order = kDefaultMaxOrder;
  std::string name;
  std::string output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("expand", "Fractal expansion of a generator");
    auto* a = c->add_option("--array", array, "generator array file or baseline literal");
    auto* g = c->add_option("--generators", generators, "comma-separated generators, one per order");
    a->excludes(g);
    c->add_option("--order", order, "fractal order")->required();
    c->add_option("--max-order", max_order, "order cap")->capture_default_str();
    c->add_option("--name", name, "name stored in the output JSON");
    c->add_option("-o,--output", output, "write the array JSON here");
  }

  int run(Context& ctx) {
    SensorArray result{std::vector<Position>{0}};
    std::vector<std::string> sources;
    if (!generators.empty()) {
      std::vector<SensorArray> gens;
      for (const auto& token : split_list(generators)) {
        NamedArray na = resolve_array(token);
        sources.push_back(na.name);
        gens.push_back(std::move(na.array));
      }
      result = expand_multi(gens, order, max_order);
    } else if (!array.empty()) {
      const NamedArray na = resolve_array(array);
      sources.push_back(na.name);
      result = expand(na.array, order, max_order);
    } else {
      throw UsageError("expand needs --array or --generators");
    }
    if (name.empty()) {
      name = "expand(";
      for (std::size_t i = 0; i < sources.size(); ++i) name += (i ? "," : "") + sources[i];
      name += ";" + std::to_string(order) + ")";
    }
    ctx.configuration = {{"command", "expand"}, {"generators", sources}, {"order", order},
                         {"max_order", max_order}, {"name", name}};
    emit_array(name, result, output, ctx.artifacts, ctx.out);
    return kExitOk;
  }
};

struct BaselineCmd {
  std::string kind;
  std::optional<std::int64_t> n, n1, n2, m;
  std::string output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("baseline", "Reference array construction");
    c->add_option("--kind", kind, "ula, nested, coprime, mra or mha")
        ->required()
        ->check(CLI::IsMember({"ula", "nested", "coprime", "mra", "mha"}));
    c->add_option("--n", n, "sensor count (ula, mra, mha) or coprime N");
    c->add_option("--n1", n1, "nested dense part");
    c->add_option("--n2", n2, "nested sparse part");
    c->add_option("--m", m, "coprime M");
    c->add_option("-o,--output", output, "write the array JSON here");
  }

  static std::int64_t need(const std::optional<std::int64_t>& v, const char* flag, const std::string& kind) {
    if (!v) throw UsageError(kind + " needs " + flag);
    return *v;
  }

  int run(Context& ctx) {
    BaselineSpec spec;
    spec.kind = parse_baseline_kind(kind);
    switch (spec.kind) {
      case BaselineKind::nested:
        if (n || m) throw UsageError("nested takes --n1 and --n2 only");
        spec.params = {need(n1, "--n1", kind), need(n2, "--n2", kind)};
        break;
      case BaselineKind::coprime:
        if (n1 || n2) throw UsageError("coprime takes --m and --n only");
        spec.params = {need(m, "--m", kind), need(n, "--n", kind)};
        break;
      default:
        if (n1 || n2 || m) throw UsageError(kind + " takes --n only");
        spec.params = {need(n, "--n", kind)};
    }
    SensorArray a{std::vector<Position>{0}};
    try {
      a = build_baseline(spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ctx.configuration = {{"command", "baseline"}, {"kind", kind}, {"params", spec.params}};
    emit_array(baseline_name(spec), a, output, ctx.artifacts, ctx.out);
    return kExitOk;
  }
};

struct AnalyzeCmd {
  std::string array;
  std::string beampattern_path;
  std::size_t samples = 1024;
  bool normalize = false;
  bool as_json = false;
  std::string output;
  CouplingFlags coupling;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("analyze", "Coarray, robustness and coupling report");
    c->add_option("--array", array, "array file or baseline literal")->required();
    c->add_option("--beampattern", beampattern_path, "write beampattern CSV here");
    c->add_option("--samples", samples, "beampattern samples over [-pi, pi)")->capture_default_str();
    c->add_flag("--normalize", normalize, "divide the beampattern by B(0)");
    c->add_flag("--json", as_json, "print the JSON report instead of the table");
    c->add_option("-o,--output", output, "write the JSON report here");
    coupling.add(c);
  }

  int run(Context& ctx) {
    const NamedArray na = resolve_array(array);
    const CouplingModel model = coupling.model(0);
    const json report = analysis_json(na, model);
    ctx.configuration = {{"command", "analyze"}, {"array", na.name}, {"coupling", coupling_json(model)}};

    if (!output.empty()) ctx.artifacts.write(output, report.dump(2) + "\n");
    if (as_json) {
      ctx.out << report.dump(2) << '\n';
    } else {
      const auto& r = report;
      print_table(ctx.out, {{"array", na.name},
                            {"sensors", std::to_string(na.array.size())},
                            {"aperture", std::to_string(na.array.aperture())},
                            {"|D|", std::to_string(r["dof"].get<std::size_t>())},
                            {"|U|", std::to_string(r["central_ula"].get<std::size_t>())},
                            {"hole-free", yes_no(r["hole_free"])},
                            {"symmetric", yes_no(r["symmetric"])},
                            {"fragility", fraction_text(fragility(na.array))},
                            {"maximally-economic", yes_no(r["maximally_economic"])},
                            {"C1", yes_no(r["c1"])},
                            {"leakage", r["leakage"].get<std::string>()}});
    }

    if (!beampattern_path.empty()) {
      if (samples == 0) throw UsageError("--samples must be positive");
      const auto omegas = uniform_omegas(samples);
      const Beampattern bp = beampattern(na.array, omegas);
      const double n = static_cast<double>(na.array.size());
      std::ostringstream csv;
      write_beampattern_csv(csv, bp, normalize ? n * n : 1.0);
      ctx.artifacts.write(beampattern_path, csv.str());
      ctx.configuration["beampattern"] = {{"samples", samples}, {"normalize", normalize}};
    }
    return kExitOk;
  }
};

struct SearchCmd {
  bool symmetric = false;
  bool hole_free = false;
  bool large_coarray = false;
  std::string max_fragility;
  std::optional<double> max_leakage;
  std::int64_t max_aperture = 20;
  bool all_solutions = false;
  bool force = false;
  bool as_json = false;
  std::optional<unsigned> threads;
  std::string output;
  CouplingFlags coupling;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("search", "Smallest arrays meeting the design constraints");
    c->add_flag("--symmetric", symmetric, "require a symmetric array");
    c->add_flag("--hole-free", hole_free, "require a hole-free coarray");
    c->add_flag("--large-coarray", large_coarray, "require |D| >= 2 * max-aperture + 1");
    c->add_option("--max-fragility", max_fragility, "fragility bound, e.g. 3/10 or 0.3");
    c->add_option("--max-leakage", max_leakage, "coupling leakage bound");
    c->add_option("--max-aperture", max_aperture, "aperture bound")->capture_default_str();
    c->add_flag("--all-solutions", all_solutions, "list every optimal array");
    c->add_flag("--force", force, "lift the aperture guard");
    c->add_flag("--json", as_json, "print the JSON result instead of the summary");
    c->add_option("--threads", threads, "worker threads (default: FRACTARRAY_THREADS or all cores)");
    c->add_option("-o,--output", output, "write the JSON result here");
    coupling.add(c);
  }

  int run(Context& ctx) {
    DesignConstraints dc;
    dc.require_symmetric = symmetric;
    dc.require_hole_free = hole_free;
    dc.require_large_coarray = large_coarray;
    if (!max_fragility.empty()) dc.max_fragility = parse_fraction(max_fragility);
    dc.max_leakage = max_leakage;
    dc.max_aperture = max_aperture;
    dc.coupling = coupling.model(0);
    try {
      dc.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    SearchOptions opt;
    opt.threads = threads.value_or(default_threads());
    if (opt.threads == 0) throw UsageError("--threads must be positive");
    opt.force = force;
    opt.all_solutions = all_solutions;

    json constraints = {{"symmetric", symmetric},
                        {"hole_free", hole_free},
                        {"large_coarray", large_coarray},
                        {"max_fragility", dc.max_fragility ? json(format_fraction(*dc.max_fragility)) : json()},
                        {"max_leakage", max_leakage ? json(*max_leakage) : json()},
                        {"max_aperture", max_aperture},
                        {"coupling", coupling_json(dc.coupling)}};
    ctx.configuration = {{"command", "search"}, {"constraints", constraints},
                         {"all_solutions", all_solutions}, {"threads", opt.threads}};

    SearchResult r;
    try {
      r = solve_p1(dc, opt);
    } catch (const ApertureGuardError& e) {
      throw UsageError(std::string(e.what()) + " (--force)");
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    json solutions = json::array();
    for (const auto& a : r.optimum) {
      const FeasibilityReport f = check_constraints(a, dc);
      solutions.push_back({{"elements", std::vector<Position>(a.begin(), a.end())},
                           {"dof", f.dof},
                           {"fragility", format_fraction(f.fragility)},
                           {"leakage", format_fixed(f.leakage)}});
    }
    const json result = {{"constraints", constraints},
                         {"feasible", !r.optimum.empty()},
                         {"optimum_size", r.optimum_size},
                         {"solutions", solutions},
                         {"explored", r.explored},
                         {"pruned", r.pruned},
                         {"explanation", r.explanation}};
    if (!output.empty()) ctx.artifacts.write(output, result.dump(2) + "\n");
    if (as_json) {
      ctx.out << result.dump(2) << '\n';
    } else if (r.optimum.empty()) {
      ctx.out << "infeasible: " << r.explanation << '\n';
    } else {
      ctx.out << "optimum size " << r.optimum_size << ", " << r.optimum.size() << " solution"
              << (r.optimum.size() == 1 ? "" : "s") << '\n';
      for (const auto& s : solutions) {
        ctx.out << "  " << s["elements"].dump() << "  fragility " << s["fragility"].get<std::string>()
                << "  leakage " << s["leakage"].get<std::string>() << '\n';
      }
    }
    ctx.out << "explored " << r.explored << ", pruned " << r.pruned << ", "
            << format_fixed(r.wall_time.count(), 3) << " s\n";
    return r.optimum.empty() ? kExitNegative : kExitOk;
  }
};

struct SimulateCmd {
  std::string array;
  std::string baseline;
  std::size_t sources = 1;
  std::string range = "-0.45:0.45";
  std::size_t snapshots = 1000;
  std::size_t trials = 500;
  double snr = 0.0;
  double failure_prob = 0.0;
  std::size_t grid_size = kDefaultMusicGrid;
  std::string sweep;
  std::string grid;
  std::uint64_t seed = 0;
  std::optional<unsigned> threads;
  std::string trials_jsonl;
  std::string output;
  CouplingFlags coupling;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("simulate", "Coarray MUSIC Monte Carlo sweep");
    auto* a = c->add_option("--array", array, "array file or baseline literal");
    auto* b = c->add_option("--baseline", baseline, "baseline literal such as nested(4,4)");
    a->excludes(b);
    c->add_option("--sources", sources, "number of sources K")->capture_default_str();
    c->add_option("--range", range, "source directions lo:hi")->capture_default_str();
    c->add_option("--snapshots", snapshots)->capture_default_str();
    c->add_option("--trials", trials)->capture_default_str();
    c->add_option("--snr", snr, "SNR in dB")->capture_default_str();
    c->add_option("--failure-prob", failure_prob, "per-sensor failure probability")->capture_default_str();
    c->add_option("--grid-size", grid_size, "MUSIC search grid points")->capture_default_str();
    auto* s = c->add_option("--sweep", sweep, "coupling, failure or snr")
                  ->check(CLI::IsMember({"coupling", "failure", "snr"}));
    c->add_option("--grid", grid, "sweep values a:b:step")->needs(s);
    c->add_option("--seed", seed, "master seed")->capture_default_str();
    c->add_option("--threads", threads, "worker threads (default: FRACTARRAY_THREADS or all cores)");
    c->add_option("--trials-jsonl", trials_jsonl, "per-trial JSON lines dump");
    c->add_option("-o,--output", output, "write the sweep CSV here");
    coupling.add(c);
  }

  int run(Context& ctx) {
    if (array.empty() && baseline.empty()) throw UsageError("simulate needs --array or --baseline");
    NamedArray na{"", SensorArray{std::vector<Position>{0}}};
    if (!baseline.empty()) {
      const auto spec = parse_baseline_literal(baseline);
      if (!spec) throw UsageError("bad baseline literal '" + baseline + "'");
      try {
        na = {baseline_name(*spec), build_baseline(*spec)};
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else {
      na = resolve_array(array);
    }
    if (!sweep.empty() && grid.empty()) throw UsageError("--sweep needs --grid");

    const auto [lo, hi] = parse_range(range);
    Scenario sc;
    sc.array = na.array;
    sc.sources = equispaced_sources(sources, lo, hi);
    sc.snapshots = snapshots;
    sc.trials = trials;
    sc.snr_db = snr;
    sc.failure_probability = failure_prob;
    sc.seed = seed;
    sc.grid_size = grid_size;
    if (coupling.given()) sc.coupling = coupling.model(seed);
    try {
      sc.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    const SweepAxis axis = sweep.empty() ? SweepAxis::snr_db : parse_axis(sweep);
    const std::vector<double> values = sweep.empty() ? std::vector<double>{snr} : parse_grid(grid);

    SweepOptions opt;
    opt.threads = threads.value_or(default_threads());
    if (opt.threads == 0) throw UsageError("--threads must be positive");
    std::ostringstream jsonl;
    if (!trials_jsonl.empty()) {
      opt.on_trial = [&](double value, std::size_t trial, const TrialOutcome& t) {
        json line = {{"axis_value", value},
                     {"trial", trial},
                     {"success", t.success},
                     {"surviving_sensors", t.surviving_sensors},
                     {"estimates", t.estimates}};
        line["rmse"] = t.success ? json(t.rmse) : json();
        jsonl << line.dump() << '\n';
      };
    }

    ctx.seed = seed;
    ctx.configuration = {{"command", "simulate"},
                         {"array", array_to_json(na.name, na.array)},
                         {"sources", sources},
                         {"range", {lo, hi}},
                         {"snapshots", snapshots},
                         {"trials", trials},
                         {"snr_db", snr},
                         {"failure_probability", failure_prob},
                         {"grid_size", grid_size},
                         {"axis", axis_name(axis)},
                         {"grid", values},
                         {"seed", seed},
                         {"coupling", sc.coupling ? coupling_json(*sc.coupling) : json()}};

    SweepResult result;
    try {
      result = run_sweep(sc, axis, values, opt);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    std::ostringstream csv;
    write_sweep_csv(csv, result);
    if (output.empty()) {
      ctx.out << csv.str();
    } else {
      ctx.artifacts.write(output, csv.str());
    }
    if (!trials_jsonl.empty()) ctx.artifacts.write(trials_jsonl, jsonl.str());

    bool any = false;
    for (const auto& row : result.rows) any = any || row.success_count > 0;
    if (!any) ctx.err << "no trial succeeded at any grid point\n";
    return any ? kExitOk : kExitNegative;
  }
};

struct CompareCmd {
  std::string arrays;
  std::string metrics = "sensors,fragility,leakage";
  bool as_json = false;
  std::string output;
  CouplingFlags coupling;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("compare", "Side-by-side array properties");
    c->add_option("--arrays", arrays, "comma-separated array files or baseline literals")->required();
    c->add_option("--metrics", metrics,
                  "sensors, aperture, dof, hole_free, symmetric, essential, fragility, leakage, c1")
        ->capture_default_str();
    c->add_flag("--json", as_json, "print JSON instead of the table");
    c->add_option("-o,--output", output, "write the JSON comparison here");
    coupling.add(c);
  }

  int run(Context& ctx) {
    static const std::map<std::string, std::string> headers = {
        {"sensors", "#Sensors"}, {"aperture", "Aperture"},       {"dof", "|D|"},
        {"hole_free", "Hole-free"}, {"symmetric", "Symmetric"}, {"essential", "Essential"},
        {"fragility", "Fragility"}, {"leakage", "Coupling Leakage"}, {"c1", "C1"}};
    const auto wanted = split(metrics, ',');
    if (wanted.empty()) throw UsageError("--metrics is empty");
    for (const auto& m : wanted) {
      if (!headers.count(m)) throw UsageError("unknown metric '" + m + "'");
    }
    const CouplingModel model = coupling.model(0);

    std::vector<std::vector<std::string>> table;
    table.push_back({"Array"});
    for (const auto& m : wanted) table[0].push_back(headers.at(m));
    json rows = json::array();
    std::vector<std::string> names;
    for (const auto& token : split_list(arrays)) {
      const NamedArray na = resolve_array(token);
      names.push_back(na.name);
      const json full = analysis_json(na, model);
      json row = {{"name", na.name}};
      std::vector<std::string> cells = {na.name};
      for (const auto& m : wanted) {
        if (m == "fragility") {
          row["fragility"] = full["fragility"];
          row["fragility_value"] = full["fragility_value"];
          cells.push_back(fraction_text(fragility(na.array)));
        } else if (m == "essential") {
          row[m] = full["essential"];
          cells.push_back(std::to_string(full["essential"].get<std::size_t>()));
        } else {
          row[m] = full[m];
          const json& v = full[m];
          cells.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
      }
      rows.push_back(row);
      table.push_back(std::move(cells));
    }
    const json doc = {{"metrics", wanted}, {"coupling", coupling_json(model)}, {"arrays", rows}};
    ctx.configuration = {{"command", "compare"}, {"arrays", names}, {"metrics", wanted},
                         {"coupling", coupling_json(model)}};
    if (!output.empty()) ctx.artifacts.write(output, doc.dump(2) + "\n");
    if (as_json) {
      ctx.out << doc.dump(2) << '\n';
    } else {
      print_table(ctx.out, table);
    }
    return kExitOk;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractal sparse array design and analysis", "fractarray"};
  app.set_version_flag("--version", FRACTARRAY_VERSION);
  app.require_subcommand(1);

  CantorCmd cantor_cmd;
  ExpandCmd expand_cmd;
  BaselineCmd baseline_cmd;
  AnalyzeCmd analyze_cmd;
  SearchCmd search_cmd;
  SimulateCmd simulate_cmd;
  CompareCmd compare_cmd;
  cantor_cmd.add(app);
  expand_cmd.add(app);
  baseline_cmd.add(app);
  analyze_cmd.add(app);
  search_cmd.add(app);
  simulate_cmd.add(app);
  compare_cmd.add(app);

  Context ctx{{}, out, err, {}, json::object(), 0, utc_timestamp()};
  for (int i = 0; i < argc; ++i) ctx.command_line.emplace_back(argv[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    int code = kExitOk;
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "cantor") code = cantor_cmd.run(ctx);
    else if (name == "expand") code = expand_cmd.run(ctx);
    else if (name == "baseline") code = baseline_cmd.run(ctx);
    else if (name == "analyze") code = analyze_cmd.run(ctx);
    else if (name == "search") code = search_cmd.run(ctx);
    else if (name == "simulate") code = simulate_cmd.run(ctx);
    else if (name == "compare") code = compare_cmd.run(ctx);

    if (!ctx.artifacts.paths().empty()) {
      RunManifest m;
      m.command_line = ctx.command_line;
      m.configuration = ctx.configuration;
      m.seed = ctx.seed;
      m.version = FRACTARRAY_VERSION;
      m.started_at = ctx.started_at;
      m.finished_at = utc_timestamp();
      m.outputs = ctx.artifacts.paths();
      m.write();
    }
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNegative;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"fractarray"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace fractarray::cli
