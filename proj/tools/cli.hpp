#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <capflow/geometry.hpp>

namespace capflow::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

inline constexpr int json_schema_version = 1;

enum class OutputFormat
{
  csv,
  json,
};

enum class Spacing
{
  linear,
  log,
};

struct RunConfig
{
  std::string subcommand;

  std::string shape_name;
  TubeShape shape = TubeShape::conic;
  double n = 1.0;
  double consistency = 1.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double length = 0.0;
  int periods = 1;

  std::optional<double> flow_rate;
  std::optional<double> pressure;

  std::string sweep_over = "flow-rate";
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  Spacing spacing = Spacing::linear;

  // validate grid
  std::string grid = "default";
  std::vector<std::string> grid_shapes;
  std::vector<double> grid_n;
  std::vector<double> grid_ratios;
  std::vector<double> grid_lengths;
  std::vector<double> grid_flow_rates;

  // profile / rheology sampling
  int samples = 0;
  double strain_rate_min = 1e-3;
  double strain_rate_max = 1e3;

  std::optional<double> rel_tol;
  bool validate = false;
  bool offset_degenerate = false;
  unsigned threads = 0;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;
};

// Runs one CLI invocation. `args` excludes the program name. Normal output
// goes to `out` (or --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        bool color = false);

// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

} // namespace capflow::cli
