#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include <capflow/analytic_flow.hpp>
#include <capflow/fluid.hpp>
#include <capflow/geometry.hpp>
#include <capflow/quadrature.hpp>

namespace capflow::cli {

namespace {

using nlohmann::ordered_json;

// Bad flags or flag combinations; reported with exit code 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

constexpr double conic_validation_threshold = 1e-8;
constexpr double analytic_validation_threshold = 1e-6;
constexpr double fallback_validation_threshold = 1e-8;

// ---------------------------------------------------------------------------
// formatting

std::string csv_field(std::string_view s)
{
  if (s.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(s);
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"')
      quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

class CsvWriter
{
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view s)
  {
    sep();
    out_ << csv_field(s);
    return *this;
  }
  CsvWriter& field(double v)
  {
    sep();
    out_ << format_number(v);
    return *this;
  }
  CsvWriter& field(int v)
  {
    sep();
    out_ << v;
    return *this;
  }
  void end_row()
  {
    out_ << '\n';
    first_ = true;
  }

private:
  void sep()
  {
    if (!first_)
      out_ << ',';
    first_ = false;
  }

  std::ostream& out_;
  bool first_ = true;
};

std::string branch_name(const std::optional<Branch>& branch)
{
  return branch ? std::string(special::to_string(*branch)) : std::string();
}

ordered_json branch_json(const std::optional<Branch>& branch)
{
  return branch ? ordered_json(std::string(special::to_string(*branch))) : ordered_json(nullptr);
}

// ---------------------------------------------------------------------------
// ordered parallel map

template <class Result>
std::vector<Result> parallel_map(std::size_t count, unsigned threads,
                                 const std::function<Result(std::size_t)>& task)
{
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<std::size_t>(threads == 0 ? hw : threads, std::max<std::size_t>(count, 1));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t)
      pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
  return results;
}

// ---------------------------------------------------------------------------
// config checks

void require_positive(double value, const char* flag)
{
  if (!(value > 0.0) || !std::isfinite(value))
    throw UsageError(std::string(flag) + " must be a positive finite number");
}

void require_non_negative(double value, const char* flag)
{
  if (!(value >= 0.0) || !std::isfinite(value))
    throw UsageError(std::string(flag) + " must be a non-negative finite number");
}

TubeShape shape_from(const std::string& name)
{
  if (auto s = parse_tube_shape(name))
    return *s;
  throw UsageError("--shape: unknown shape '" + name +
                   "' (expected conic, parabolic, hyperbolic, cosh, sinusoidal)");
}

void check_tube(const RunConfig& c)
{
  require_positive(c.r_min, "--rmin");
  require_positive(c.r_max, "--rmax");
  require_positive(c.length, "--length");
  if (c.r_max < c.r_min)
    throw UsageError("--rmax must not be smaller than --rmin");
  if (c.periods < 1)
    throw UsageError("--periods must be an integer >= 1");
}

void check_fluid(const RunConfig& c)
{
  require_positive(c.n, "--n");
  require_positive(c.consistency, "--consistency");
}

void check_rel_tol(const RunConfig& c)
{
  if (c.rel_tol && !(*c.rel_tol >= 1e-14 && *c.rel_tol <= 1e-2))
    throw UsageError("--rel-tol must lie in [1e-14, 1e-2]");
}

void warn_index(const RunConfig& c, std::ostream& err, bool color)
{
  if (c.n < PowerLawFluid::validated_index_min || c.n > PowerLawFluid::validated_index_max) {
    err << (color ? "\033[33mwarning:\033[0m " : "warning: ") << "--n " << format_number(c.n)
        << " is outside the validated range [0.2, 2]; results are computed but not "
           "accuracy-tested\n";
  }
}

SolveOptions solve_options(const RunConfig& c)
{
  SolveOptions o;
  if (c.rel_tol) {
    o.fallback_rel_tol = *c.rel_tol;
    o.validation_rel_tol = *c.rel_tol;
  }
  o.validate = c.validate;
  o.degenerate_policy =
    c.offset_degenerate ? DegeneratePolicy::epsilon_offset : DegeneratePolicy::quadrature;
  return o;
}

ordered_json tube_config_json(const RunConfig& c)
{
  ordered_json j;
  j["shape"] = std::string(to_string(c.shape));
  j["n"] = c.n;
  j["C"] = c.consistency;
  j["r_min"] = c.r_min;
  j["r_max"] = c.r_max;
  j["length"] = c.length;
  j["periods"] = c.periods;
  return j;
}

// ---------------------------------------------------------------------------
// solve / sweep

struct SolveRow
{
  double flow_rate = 0.0;
  double pressure_drop = 0.0;
  FlowResult result;
};

// Series of `periods` identical units: P adds up at equal Q.
SolveRow solve_point(const RunConfig& c, const PowerLawFluid& fluid, const TubeSpec& spec,
                     bool pressure_driven, double value)
{
  const SolveOptions options = solve_options(c);
  const double units = c.periods;
  SolveRow row;
  if (pressure_driven) {
    row.result = flow_rate(fluid, spec, value / units, options);
    row.flow_rate = row.result.flow_rate;
    row.pressure_drop = value;
  } else {
    row.result = pressure_drop(fluid, spec, value, options);
    row.flow_rate = value;
    row.pressure_drop = units * row.result.pressure_drop;
    if (row.result.validation) {
      row.result.validation->oracle *= units;
      row.result.validation->oracle_error_estimate *= units;
    }
  }
  return row;
}

const char* solve_csv_header =
  "shape,n,C,r_min,r_max,length,periods,Q,P,K,method,branch,note";

void write_solve_csv_row(CsvWriter& w, const RunConfig& c, const SolveRow& row)
{
  w.field(to_string(c.shape))
    .field(c.n)
    .field(c.consistency)
    .field(c.r_min)
    .field(c.r_max)
    .field(c.length)
    .field(c.periods)
    .field(row.flow_rate)
    .field(row.pressure_drop)
    .field(row.result.conductance)
    .field(to_string(row.result.method))
    .field(branch_name(row.result.branch_used))
    .field(row.result.diagnostics.note);
  w.end_row();
}

ordered_json solve_row_json(const SolveRow& row)
{
  ordered_json j;
  j["flow_rate"] = row.flow_rate;
  j["pressure_drop"] = row.pressure_drop;
  j["conductance"] = row.result.conductance;
  j["method"] = std::string(to_string(row.result.method));
  j["branch"] = branch_json(row.result.branch_used);
  j["note"] = row.result.diagnostics.note;
  if (row.result.validation) {
    const auto& v = *row.result.validation;
    j["validation"] = {{"oracle", v.oracle},
                       {"rel_err", v.relative_error},
                       {"oracle_error_estimate", v.oracle_error_estimate}};
  }
  return j;
}

void emit_document(std::ostream& out, const std::string& command, ordered_json config,
                   ordered_json results)
{
  ordered_json doc;
  doc["schema_version"] = json_schema_version;
  doc["command"] = command;
  doc["config"] = std::move(config);
  doc["results"] = std::move(results);
  out << doc.dump(2) << '\n';
}

int run_solve(const RunConfig& c, std::ostream& out)
{
  check_fluid(c);
  check_tube(c);
  check_rel_tol(c);
  if (c.flow_rate.has_value() == c.pressure.has_value())
    throw UsageError("solve needs exactly one of --flow-rate or --pressure");
  if (c.flow_rate)
    require_non_negative(*c.flow_rate, "--flow-rate");
  if (c.pressure)
    require_non_negative(*c.pressure, "--pressure");

  const PowerLawFluid fluid(c.consistency, c.n);
  const TubeSpec spec(c.shape, c.r_min, c.r_max, c.length);
  const bool pressure_driven = c.pressure.has_value();
  const SolveRow row =
    solve_point(c, fluid, spec, pressure_driven, pressure_driven ? *c.pressure : *c.flow_rate);

  if (c.format == OutputFormat::json) {
    ordered_json config = tube_config_json(c);
    config[pressure_driven ? "pressure" : "flow_rate"] =
      pressure_driven ? *c.pressure : *c.flow_rate;
    emit_document(out, "solve", std::move(config), ordered_json::array({solve_row_json(row)}));
  } else {
    out << solve_csv_header << '\n';
    CsvWriter w(out);
    write_solve_csv_row(w, c, row);
  }
  return exit_ok;
}

std::vector<double> sweep_points(const RunConfig& c)
{
  if (c.count < 2)
    throw UsageError("--count must be at least 2");
  if (!(c.start < c.stop))
    throw UsageError("--start must be smaller than --stop");
  require_non_negative(c.start, "--start");
  require_positive(c.stop, "--stop");
  if (c.spacing == Spacing::log && !(c.start > 0.0))
    throw UsageError("--start must be positive for --spacing log");

  std::vector<double> pts(static_cast<std::size_t>(c.count));
  for (int i = 0; i < c.count; ++i) {
    const double t = static_cast<double>(i) / (c.count - 1);
    if (c.spacing == Spacing::linear)
      pts[i] = c.start + t * (c.stop - c.start);
    else
      pts[i] = c.start * std::pow(c.stop / c.start, t);
  }
  pts.front() = c.start;
  pts.back() = c.stop;
  return pts;
}

int run_sweep(const RunConfig& c, std::ostream& out)
{
  check_fluid(c);
  check_tube(c);
  check_rel_tol(c);
  const bool pressure_driven = c.sweep_over == "pressure";
  const std::vector<double> pts = sweep_points(c);

  const PowerLawFluid fluid(c.consistency, c.n);
  const TubeSpec spec(c.shape, c.r_min, c.r_max, c.length);
  const auto rows = parallel_map<SolveRow>(pts.size(), c.threads, [&](std::size_t i) {
    return solve_point(c, fluid, spec, pressure_driven, pts[i]);
  });

  if (c.format == OutputFormat::json) {
    ordered_json config = tube_config_json(c);
    config["over"] = c.sweep_over;
    config["start"] = c.start;
    config["stop"] = c.stop;
    config["count"] = c.count;
    config["spacing"] = c.spacing == Spacing::linear ? "linear" : "log";
    ordered_json results = ordered_json::array();
    for (const auto& r : rows)
      results.push_back(solve_row_json(r));
    emit_document(out, "sweep", std::move(config), std::move(results));
  } else {
    out << solve_csv_header << '\n';
    CsvWriter w(out);
    for (const auto& r : rows)
      write_solve_csv_row(w, c, r);
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// validate

struct ValidationRow
{
  TubeShape shape{};
  double n = 0.0;
  double consistency = 1.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double length = 0.0;
  double flow_rate = 0.0;
  double p_analytic = 0.0;
  double p_numeric = 0.0;
  double rel_err = 0.0;
  Method method = Method::analytic;
  std::optional<Branch> branch;
  double threshold = 0.0;
};

struct GridPoint
{
  TubeShape shape;
  double n;
  double ratio;
  double length;
  double flow_rate;
};

std::vector<GridPoint> validation_grid(const RunConfig& c)
{
  if (c.grid != "default")
    throw UsageError("--grid: unknown grid '" + c.grid + "' (expected default)");

  std::vector<TubeShape> shapes(all_tube_shapes.begin(), all_tube_shapes.end());
  if (!c.grid_shapes.empty()) {
    shapes.clear();
    for (const auto& s : c.grid_shapes)
      shapes.push_back(shape_from(s));
  }
  auto pick = [](const std::vector<double>& given, std::vector<double> fallback) {
    return given.empty() ? fallback : given;
  };
  const auto ns = pick(c.grid_n, {0.4, 0.6, 0.8, 1.0, 1.2, 1.6});
  const auto ratios = pick(c.grid_ratios, {1.1, 2.0, 4.0, 10.0});
  const auto lengths = pick(c.grid_lengths, {1.0, 10.0});
  const auto flows = pick(c.grid_flow_rates, {1e-3, 1.0});
  for (double n : ns)
    require_positive(n, "--n-values");
  for (double r : ratios)
    if (!(r >= 1.0) || !std::isfinite(r))
      throw UsageError("--ratios entries must be >= 1");
  for (double l : lengths)
    require_positive(l, "--lengths");
  for (double q : flows)
    require_non_negative(q, "--flow-rates");

  std::vector<GridPoint> grid;
  for (auto shape : shapes)
    for (double n : ns)
      for (double ratio : ratios)
        for (double length : lengths)
          for (double q : flows)
            grid.push_back({shape, n, ratio, length, q});
  return grid;
}

ValidationRow validate_point(const RunConfig& c, const GridPoint& g)
{
  const PowerLawFluid fluid(c.consistency, g.n);
  const TubeSpec spec(g.shape, c.r_min, c.r_min * g.ratio, g.length);
  SolveOptions options;
  options.validate = true;
  if (c.rel_tol)
    options.validation_rel_tol = *c.rel_tol;
  const FlowResult r = pressure_drop(fluid, spec, g.flow_rate, options);

  ValidationRow row;
  row.shape = g.shape;
  row.n = g.n;
  row.consistency = c.consistency;
  row.r_min = spec.r_min();
  row.r_max = spec.r_max();
  row.length = g.length;
  row.flow_rate = g.flow_rate;
  row.p_analytic = r.pressure_drop;
  row.p_numeric = r.validation->oracle;
  row.rel_err = r.validation->relative_error;
  row.method = r.method;
  row.branch = r.branch_used;
  if (r.method == Method::quadrature_fallback)
    row.threshold = fallback_validation_threshold;
  else
    row.threshold =
      g.shape == TubeShape::conic ? conic_validation_threshold : analytic_validation_threshold;
  return row;
}

int run_validate(const RunConfig& c, std::ostream& out, std::ostream& err)
{
  require_positive(c.consistency, "--consistency");
  require_positive(c.r_min, "--rmin");
  check_rel_tol(c);
  const auto grid = validation_grid(c);
  const auto rows = parallel_map<ValidationRow>(grid.size(), c.threads,
                                                [&](std::size_t i) { return validate_point(c, grid[i]); });

  if (c.format == OutputFormat::json) {
    ordered_json config;
    config["grid"] = c.grid;
    config["C"] = c.consistency;
    config["r_min"] = c.r_min;
    config["rel_tol"] = c.rel_tol.value_or(validation_rel_tol);
    ordered_json results = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json j;
      j["shape"] = std::string(to_string(r.shape));
      j["n"] = r.n;
      j["C"] = r.consistency;
      j["r_min"] = r.r_min;
      j["r_max"] = r.r_max;
      j["length"] = r.length;
      j["Q"] = r.flow_rate;
      j["P_analytic"] = r.p_analytic;
      j["P_numeric"] = r.p_numeric;
      j["rel_err"] = r.rel_err;
      j["method"] = std::string(to_string(r.method));
      j["branch"] = branch_json(r.branch);
      results.push_back(std::move(j));
    }
    emit_document(out, "validate", std::move(config), std::move(results));
  } else {
    out << "shape,n,C,r_min,r_max,length,Q,P_analytic,P_numeric,rel_err,method,branch\n";
    CsvWriter w(out);
    for (const auto& r : rows) {
      w.field(to_string(r.shape))
        .field(r.n)
        .field(r.consistency)
        .field(r.r_min)
        .field(r.r_max)
        .field(r.length)
        .field(r.flow_rate)
        .field(r.p_analytic)
        .field(r.p_numeric)
        .field(r.rel_err)
        .field(to_string(r.method))
        .field(branch_name(r.branch));
      w.end_row();
    }
  }

  const auto failures =
    std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !(r.rel_err <= r.threshold); });
  if (failures > 0) {
    err << "error: validate: " << failures << " of " << rows.size()
        << " rows exceed their tolerance\n";
    return exit_numerical;
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// profile / rheology

int run_profile(const RunConfig& c, std::ostream& out)
{
  check_tube(c);
  if (c.samples < 2)
    throw UsageError("--samples must be at least 2");
  const TubeSpec spec(c.shape, c.r_min, c.r_max, c.length);

  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < c.samples; ++i) {
    // symmetric about the throat; endpoints land exactly on +-L/2
    const double x = c.length * (static_cast<double>(i) / (c.samples - 1) - 0.5);
    pts.emplace_back(x, radius_at(spec, x));
  }

  if (c.format == OutputFormat::json) {
    ordered_json config = tube_config_json(c);
    config.erase("n");
    config.erase("C");
    config.erase("periods");
    config["samples"] = c.samples;
    ordered_json results = ordered_json::array();
    for (auto [x, r] : pts)
      results.push_back({{"x", x}, {"r", r}});
    emit_document(out, "profile", std::move(config), std::move(results));
  } else {
    out << "x,r\n";
    CsvWriter w(out);
    for (auto [x, r] : pts) {
      w.field(x).field(r);
      w.end_row();
    }
  }
  return exit_ok;
}

int run_rheology(const RunConfig& c, std::ostream& out)
{
  check_fluid(c);
  if (c.samples < 2)
    throw UsageError("--samples must be at least 2");
  require_positive(c.strain_rate_min, "--gamma-min");
  require_positive(c.strain_rate_max, "--gamma-max");
  if (!(c.strain_rate_min < c.strain_rate_max))
    throw UsageError("--gamma-min must be smaller than --gamma-max");

  const PowerLawFluid fluid(c.consistency, c.n);
  struct Sample
  {
    double rate, viscosity, stress;
  };
  std::vector<Sample> pts;
  for (int i = 0; i < c.samples; ++i) {
    const double t = static_cast<double>(i) / (c.samples - 1);
    double rate = c.strain_rate_min * std::pow(c.strain_rate_max / c.strain_rate_min, t);
    if (i == 0)
      rate = c.strain_rate_min;
    if (i == c.samples - 1)
      rate = c.strain_rate_max;
    const double mu = apparent_viscosity(fluid, rate);
    pts.push_back({rate, mu, mu * rate});
  }

  if (c.format == OutputFormat::json) {
    ordered_json config;
    config["n"] = c.n;
    config["C"] = c.consistency;
    config["gamma_min"] = c.strain_rate_min;
    config["gamma_max"] = c.strain_rate_max;
    config["samples"] = c.samples;
    ordered_json results = ordered_json::array();
    for (const auto& p : pts)
      results.push_back({{"strain_rate", p.rate}, {"viscosity", p.viscosity}, {"stress", p.stress}});
    emit_document(out, "rheology", std::move(config), std::move(results));
  } else {
    out << "strain_rate,viscosity,stress\n";
    CsvWriter w(out);
    for (const auto& p : pts) {
      w.field(p.rate).field(p.viscosity).field(p.stress);
      w.end_row();
    }
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// argument wiring

void add_tube_options(CLI::App* sub, RunConfig& c, bool with_periods)
{
  sub->add_option("--shape", c.shape_name, "conic | parabolic | hyperbolic | cosh | sinusoidal")
    ->required();
  sub->add_option("--rmin", c.r_min, "throat radius R_min [m]")->required();
  sub->add_option("--rmax", c.r_max, "end radius R_max [m]")->required();
  sub->add_option("--length", c.length, "length of one corrugation unit L [m]")->required();
  if (with_periods)
    sub->add_option("--periods", c.periods, "identical units in series (default 1)");
}

void add_fluid_options(CLI::App* sub, RunConfig& c, bool index_required)
{
  auto* n = sub->add_option("--n", c.n, "flow behaviour index n");
  if (index_required)
    n->required();
  sub->add_option("--consistency", c.consistency, "consistency factor C [Pa s^n] (default 1)");
}

void add_output_options(CLI::App* sub, RunConfig& c)
{
  sub->add_option("--format", c.format, "csv | json")
    ->transform(CLI::CheckedTransformer(
      std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}}));
  sub->add_option("--output,-o", c.output_path, "write to this file instead of standard output");
}

int dispatch(RunConfig& c, std::ostream& out, std::ostream& err)
{
  if (c.subcommand == "solve")
    return run_solve(c, out);
  if (c.subcommand == "sweep")
    return run_sweep(c, out);
  if (c.subcommand == "validate")
    return run_validate(c, out, err);
  if (c.subcommand == "profile")
    return run_profile(c, out);
  if (c.subcommand == "rheology")
    return run_rheology(c, out);
  throw UsageError("a subcommand is required: solve, sweep, validate, profile, rheology");
}

} // namespace

std::string format_number(double value)
{
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc())
    return "nan";
  return std::string(buf, end);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color)
{
  const char* error_tag = color ? "\033[31merror:\033[0m " : "error: ";

  RunConfig c;
  CLI::App app{"Pressure drop / flow rate of power-law fluids in converging-diverging tubes",
               "capflow"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  auto* solve = app.add_subcommand("solve", "single pressure drop or flow rate");
  add_tube_options(solve, c, true);
  add_fluid_options(solve, c, true);
  solve->add_option("--flow-rate", c.flow_rate, "volumetric flow rate Q [m^3/s]");
  solve->add_option("--pressure", c.pressure, "pressure drop P [Pa]");
  solve->add_flag("--validate", c.validate, "co-evaluate the quadrature oracle");
  solve->add_flag("--offset-degenerate", c.offset_degenerate,
                  "evaluate degenerate indices at n +- 1e-5 before falling back to quadrature");
  solve->add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance");
  add_output_options(solve, c);

  auto* sweep = app.add_subcommand("sweep", "pressure drop or flow rate over a range");
  add_tube_options(sweep, c, true);
  add_fluid_options(sweep, c, true);
  sweep->add_option("--over", c.sweep_over, "flow-rate | pressure")
    ->check(CLI::IsMember({"flow-rate", "pressure"}));
  sweep->add_option("--start", c.start)->required();
  sweep->add_option("--stop", c.stop)->required();
  sweep->add_option("--count", c.count)->required();
  sweep->add_option("--spacing", c.spacing, "linear | log")
    ->transform(CLI::CheckedTransformer(
      std::map<std::string, Spacing>{{"linear", Spacing::linear}, {"log", Spacing::log}}));
  sweep->add_flag("--validate", c.validate, "co-evaluate the quadrature oracle");
  sweep->add_flag("--offset-degenerate", c.offset_degenerate);
  sweep->add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance");
  sweep->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  add_output_options(sweep, c);

  auto* validate = app.add_subcommand("validate", "closed forms against the quadrature oracle");
  validate->add_option("--grid", c.grid, "named grid (default)");
  validate->add_option("--shapes", c.grid_shapes)->delimiter(',');
  validate->add_option("--n-values", c.grid_n)->delimiter(',');
  validate->add_option("--ratios", c.grid_ratios, "r_max / r_min values")->delimiter(',');
  validate->add_option("--lengths", c.grid_lengths)->delimiter(',');
  validate->add_option("--flow-rates", c.grid_flow_rates)->delimiter(',');
  validate->add_option("--rmin", c.r_min, "throat radius (default 1)");
  validate->add_option("--consistency", c.consistency, "consistency factor (default 1)");
  validate->add_option("--rel-tol", c.rel_tol, "oracle relative tolerance (default 1e-10)");
  validate->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  add_output_options(validate, c);

  auto* profile = app.add_subcommand("profile", "sample r(x) over one unit");
  add_tube_options(profile, c, false);
  profile->add_option("--samples", c.samples)->required();
  add_output_options(profile, c);

  auto* rheology = app.add_subcommand("rheology", "sample the power-law viscosity curve");
  add_fluid_options(rheology, c, true);
  rheology->add_option("--gamma-min", c.strain_rate_min, "smallest strain rate [1/s]");
  rheology->add_option("--gamma-max", c.strain_rate_max, "largest strain rate [1/s]");
  rheology->add_option("--samples", c.samples)->required();
  add_output_options(rheology, c);

  std::vector<std::string> argv_storage{"capflow"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage)
    argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << error_tag << e.what() << '\n';
    return exit_usage;
  }

  for (auto* sub : app.get_subcommands())
    c.subcommand = sub->get_name();
  const bool default_json = c.subcommand == "solve";
  for (auto* sub : app.get_subcommands())
    if (sub->count("--format") == 0)
      c.format = default_json ? OutputFormat::json : OutputFormat::csv;

  try {
    if (!c.shape_name.empty())
      c.shape = shape_from(c.shape_name);
    if (c.subcommand == "solve" || c.subcommand == "sweep" || c.subcommand == "rheology")
      warn_index(c, err, color);
    if (c.subcommand == "validate" && c.r_min == 0.0)
      c.r_min = 1.0;

    if (c.output_path.empty())
      return dispatch(c, out, err);
    std::ostringstream buffer;
    const int code = dispatch(c, buffer, err);
    std::ofstream file(c.output_path, std::ios::binary);
    if (!file)
      throw UsageError("--output: cannot open '" + c.output_path + "' for writing");
    file << buffer.str();
    return code;
  } catch (const UsageError& e) {
    err << error_tag << e.what() << '\n';
    return exit_usage;
  } catch (const DomainError& e) {
    err << error_tag << e.what() << '\n';
    return exit_usage;
  } catch (const EvaluationError& e) {
    err << error_tag << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const SpecialFunctionError& e) {
    err << error_tag << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
}

} // namespace capflow::cli
