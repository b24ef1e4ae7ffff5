#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semiscat/core.hpp"

namespace semiscat::cli {

enum class Command { exact, semiclassical, design_quadratic, design_pt, table1, fig1, sweep };
enum class Format { csv, json };

Command parse_command(const std::string& name);
std::string to_string(Command command);

/// Potential selection. Optical kinds (quadratic-index, design-quadratic,
/// design-pt) take their boundary data from RunConfig and use L in
/// micrometres; the others use `L` in whatever unit k is given in.
struct PotentialSpec {
  std::string kind = "free";  // free | barrier | gaussian | tabulated | quadratic-index | design-quadratic | design-pt
  double z_re = 0.0;
  double z_im = 0.0;
  double L = 1.0;
  double a_re = 0.0;
  double a_im = 0.0;
  double width = 1.0;
  std::vector<double> x;
  std::vector<double> v_re;
  std::vector<double> v_im;
};

struct RunConfig {
  Command command = Command::table1;
  PotentialSpec potential;
  std::optional<double> k;
  std::optional<double> k_min;
  std::optional<double> k_max;
  int samples = 11;
  std::optional<double> step;
  std::string out;  // empty or "-" means standard output
  Format format = Format::csv;
  int profile_samples = 101;

  double eta = 1.001;
  double kappa_minus = -0.002;
  double kappa_plus = 0.001;
  double L_um = 100.0;
  int m = 300;
  int n = 300;
  int m1 = 303;
  int m2 = 300;
};

/// Reads a JSON configuration file (schema in README).
RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);

/// Parses command-line flags; `--config` is read first and flags override it.
RunConfig parse_args(int argc, const char* const* argv);

/// Throws Error(invalid_argument) on the first bad input.
void validate(const RunConfig& config);

/// Runs one command, writing results to config.out (or `out` when no path is
/// set). Failures produce one JSON error line on `err` and a non-zero status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Entry point used by the semiscat executable.
int main(int argc, const char* const* argv);

/// Scientific notation with 9 significant digits.
std::string format_number(double value);

}  // namespace semiscat::cli
