#include "semiscat/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "semiscat/adiabatic.hpp"
#include "semiscat/design.hpp"
#include "semiscat/exact.hpp"
#include "semiscat/profiles.hpp"

namespace semiscat::cli {

namespace {

using json = nlohmann::json;
using Cell = std::variant<double, long long, std::string>;

constexpr double kPi = std::numbers::pi;
// Micrometres to nanometres.
constexpr double kNmPerUm = 1000.0;

const std::vector<int> kTable1Modes{100, 298, 299, 300, 301, 302, 2000};
const std::vector<int> kFig1Modes{275, 300, 325};

struct Table {
  std::string record;  // JSON "record" tag; empty for single-table outputs
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c, bool json_mode) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return json_mode ? "null" : "nan";
    return format_number(*d);
  }
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  return json_mode ? json(s).dump() : s;
}

void write_csv(std::ostream& os, const std::vector<Table>& tables) {
  for (std::size_t t = 0; t < tables.size(); ++t) {
    if (t > 0) os << '\n';
    const auto& table = tables[t];
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i], false);
      os << '\n';
    }
  }
}

void write_json(std::ostream& os, const std::vector<Table>& tables) {
  os << "[";
  bool first = true;
  for (const auto& table : tables) {
    for (const auto& row : table.rows) {
      os << (first ? "\n  {" : ",\n  {");
      first = false;
      bool first_field = true;
      if (!table.record.empty()) {
        os << "\"record\": " << json(table.record).dump();
        first_field = false;
      }
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (first_field ? "" : ", ") << json(table.columns[i]).dump() << ": " << cell_text(row[i], true);
        first_field = false;
      }
      os << "}";
    }
  }
  os << "\n]\n";
}

OpticalParams optical_params(const RunConfig& c) {
  return OpticalParams::make(c.eta, c.kappa_minus, c.kappa_plus, c.L_um);
}

PotentialProfile build_potential(const RunConfig& c) {
  const auto& p = c.potential;
  if (p.kind == "free") return free_profile(0.0, p.L);
  if (p.kind == "barrier") return barrier_profile({p.z_re, p.z_im}, p.L);
  if (p.kind == "gaussian") return gaussian_profile({p.z_re, p.z_im}, p.width);
  if (p.kind == "tabulated") {
    if (p.v_re.size() != p.x.size() || (!p.v_im.empty() && p.v_im.size() != p.x.size()))
      throw Error(ErrorCode::invalid_argument, "tabulated x, v_re and v_im must have equal length");
    std::vector<cdouble> v(p.x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = {p.v_re[i], p.v_im.empty() ? 0.0 : p.v_im[i]};
    return tabulated_profile(p.x, std::move(v));
  }
  if (p.kind == "quadratic-index") {
    const auto o = optical_params(c);
    return quadratic_profile(QuadraticIndex{o.n_minus(), o.n_plus(), {p.a_re, p.a_im}}, o.L);
  }
  if (p.kind == "design-quadratic") {
    const auto o = optical_params(c);
    return emit_quadratic_profile(quadratic_designer(o, c.m, c.n), o);
  }
  if (p.kind == "design-pt") {
    const auto sol = pt_designer(c.eta, c.kappa_plus, c.m1, c.m2, c.L_um);
    return quadratic_profile(QuadraticIndex{sol.n_minus, sol.n_plus, sol.shape_param}, c.L_um);
  }
  throw Error(ErrorCode::invalid_argument, "unknown potential kind '" + p.kind + "'");
}

std::vector<Cell> amplitude_cells(const ScatteringAmplitudesd& a) {
  return {a.T.real(), a.T.imag(), a.R_left.real(), a.R_left.imag(), a.R_right.real(), a.R_right.imag(),
          std::abs(a.T), std::abs(a.R_left), std::abs(a.R_right)};
}

const std::vector<std::string> kAmplitudeColumns{"T_re",  "T_im",  "Rl_re",  "Rl_im", "Rr_re",
                                                 "Rr_im", "abs_T", "abs_Rl", "abs_Rr"};

std::vector<Table> run_single_k(const RunConfig& c, bool exact) {
  const auto v = build_potential(c);
  const double k = *c.k;
  Table t;
  t.columns = {"engine", "k"};
  t.columns.insert(t.columns.end(), kAmplitudeColumns.begin(), kAmplitudeColumns.end());
  std::vector<Cell> row{std::string(exact ? "exact" : "semiclassical"), k};
  ScatteringAmplitudesd amps;
  TransferMatrixd m;
  if (exact) {
    m = exact_transfer_matrix(v, k, c.step);
    amps = amplitudes_from_transfer(m);
  } else {
    m = semiclassical_transfer(v, k);
    amps = semiclassical_amplitudes(v, k);
  }
  auto cells = amplitude_cells(amps);
  row.insert(row.end(), cells.begin(), cells.end());
  t.columns.push_back("det_error");
  row.emplace_back(std::abs(m.det() - 1.0));
  if (!exact) {
    t.columns.push_back("margin");
    row.emplace_back(v.infinite_range() ? std::nan("") : adiabaticity_margin(v, k));
  }
  t.rows.push_back(std::move(row));
  return {t};
}

Table solution_table(const DesignSolution& s) {
  Table t;
  t.record = "solution";
  t.columns = {"side",          "mode_m",         "mode_n",         "kL",
               "L_um",          "lambda_nm",      "shape_param_re", "shape_param_im",
               "predicted_Rr_re", "predicted_Rr_im", "predicted_Rr_abs", "predicted_T_re",
               "predicted_T_im", "semiclassical_T_re", "semiclassical_T_im", "residual_abs",
               "warnings"};
  std::string warnings;
  for (const auto& w : s.warnings) warnings += (warnings.empty() ? "" : "; ") + w;
  for (auto& ch : warnings)
    if (ch == ',') ch = ' ';
  t.rows.push_back({std::string(to_string(s.side)), (long long)s.mode_m, (long long)s.mode_n, s.kL, s.L,
                    s.lambda * kNmPerUm, s.shape_param.real(), s.shape_param.imag(), s.predicted_Rr.real(),
                    s.predicted_Rr.imag(), s.predicted_Rr_abs, s.predicted_T.real(), s.predicted_T.imag(),
                    s.semiclassical_T.real(), s.semiclassical_T.imag(), std::abs(s.residual), warnings});
  return t;
}

Table profile_table(const QuadraticIndex& index, int samples) {
  Table t;
  t.record = "profile";
  t.columns = {"x_hat", "re_n", "im_n"};
  for (int i = 0; i < samples; ++i) {
    const double x = (i == samples - 1) ? 1.0 : double(i) / double(samples - 1);
    const cdouble n = index(x);
    t.rows.push_back({x, n.real(), n.imag()});
  }
  return t;
}

std::vector<Table> run_design_quadratic(const RunConfig& c) {
  const auto o = optical_params(c);
  const auto sol = quadratic_designer(o, c.m, c.n);
  return {solution_table(sol), profile_table(quadratic_index(sol, o), c.profile_samples)};
}

std::vector<Table> run_design_pt(const RunConfig& c) {
  const auto sol = pt_designer(c.eta, c.kappa_plus, c.m1, c.m2, c.L_um);
  return {solution_table(sol),
          profile_table(QuadraticIndex{sol.n_minus, sol.n_plus, sol.shape_param}, c.profile_samples)};
}

std::vector<Table> run_table1(const RunConfig& c) {
  const auto o = optical_params(c);
  Table t;
  t.columns = {"m", "kL", "lambda_nm", "a_re", "a_im"};
  for (int m : kTable1Modes) {
    const auto s = quadratic_designer(o, m, m);
    t.rows.push_back({(long long)m, s.kL, s.lambda * kNmPerUm, s.shape_param.real(), s.shape_param.imag()});
  }
  return {t};
}

std::vector<Table> run_fig1(const RunConfig& c) {
  const auto o = optical_params(c);
  Table t;
  t.columns = {"m", "lambda_nm", "x_hat", "re_n", "im_n"};
  for (int m : kFig1Modes) {
    const auto s = quadratic_designer(o, m, m);
    const auto index = quadratic_index(s, o);
    for (const auto& row : profile_table(index, c.profile_samples).rows) {
      t.rows.push_back({(long long)m, s.lambda * kNmPerUm, row[0], row[1], row[2]});
    }
  }
  return {t};
}

std::vector<Table> run_sweep(const RunConfig& c) {
  const auto v = build_potential(c);
  std::vector<double> ks(c.samples);
  for (int i = 0; i < c.samples; ++i)
    ks[i] = (i == c.samples - 1) ? *c.k_max : *c.k_min + (*c.k_max - *c.k_min) * double(i) / double(c.samples - 1);
  // The exact engine needs a finite support; infinite-range sweeps report NaN there.
  std::vector<TransferMatrixd> exact;
  if (!v.infinite_range()) exact = exact_transfer_matrices(v, ks, c.step);
  const double nan = std::nan("");
  Table t;
  t.columns = {"k",         "exact_abs_Rl", "exact_abs_Rr", "exact_abs_T", "sc_abs_Rl",
               "sc_abs_Rr", "sc_abs_T",     "margin"};
  for (std::size_t i = 0; i < ks.size(); ++i) {
    std::vector<Cell> row{ks[i]};
    if (exact.empty()) {
      row.insert(row.end(), {nan, nan, nan});
    } else {
      const auto ea = amplitudes_from_transfer(exact[i]);
      row.insert(row.end(), {std::abs(ea.R_left), std::abs(ea.R_right), std::abs(ea.T)});
    }
    try {
      const auto sa = semiclassical_amplitudes(v, ks[i]);
      row.insert(row.end(), {std::abs(sa.R_left), std::abs(sa.R_right), std::abs(sa.T)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::spectral_singularity) throw;
      row.insert(row.end(), {nan, nan, nan});
    }
    row.emplace_back(v.infinite_range() ? nan : adiabaticity_margin(v, ks[i]));
    t.rows.push_back(std::move(row));
  }
  return {t};
}

template <typename T>
void read_if(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

template <typename T>
void read_if(const json& j, const char* key, std::optional<T>& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw Error(ErrorCode::invalid_argument, "unknown key '" + key + "' in " + where);
  }
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw Error(ErrorCode::invalid_argument, "unknown format '" + s + "'");
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "configuration must be a JSON object");
  reject_unknown(j, {"command", "potential", "wavenumber", "integrator", "optical", "modes", "output"}, "config");
  if (j.contains("command")) c.command = parse_command(j.at("command").get<std::string>());
  if (j.contains("potential")) {
    const auto& p = j.at("potential");
    reject_unknown(p, {"kind", "z_re", "z_im", "L", "a_re", "a_im", "width", "x", "v_re", "v_im"}, "potential");
    read_if(p, "kind", c.potential.kind);
    read_if(p, "z_re", c.potential.z_re);
    read_if(p, "z_im", c.potential.z_im);
    read_if(p, "L", c.potential.L);
    read_if(p, "a_re", c.potential.a_re);
    read_if(p, "a_im", c.potential.a_im);
    read_if(p, "width", c.potential.width);
    read_if(p, "x", c.potential.x);
    read_if(p, "v_re", c.potential.v_re);
    read_if(p, "v_im", c.potential.v_im);
  }
  if (j.contains("wavenumber")) {
    const auto& w = j.at("wavenumber");
    reject_unknown(w, {"k", "k_min", "k_max", "samples"}, "wavenumber");
    read_if(w, "k", c.k);
    read_if(w, "k_min", c.k_min);
    read_if(w, "k_max", c.k_max);
    read_if(w, "samples", c.samples);
  }
  if (j.contains("integrator")) {
    reject_unknown(j.at("integrator"), {"step"}, "integrator");
    read_if(j.at("integrator"), "step", c.step);
  }
  if (j.contains("optical")) {
    const auto& o = j.at("optical");
    reject_unknown(o, {"eta", "kappa_minus", "kappa_plus", "L_um"}, "optical");
    read_if(o, "eta", c.eta);
    read_if(o, "kappa_minus", c.kappa_minus);
    read_if(o, "kappa_plus", c.kappa_plus);
    read_if(o, "L_um", c.L_um);
  }
  if (j.contains("modes")) {
    const auto& m = j.at("modes");
    reject_unknown(m, {"m", "n", "m1", "m2"}, "modes");
    read_if(m, "m", c.m);
    read_if(m, "n", c.n);
    read_if(m, "m1", c.m1);
    read_if(m, "m2", c.m2);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, {"path", "format", "profile_samples"}, "output");
    read_if(o, "path", c.out);
    if (o.contains("format")) c.format = parse_format(o.at("format").get<std::string>());
    read_if(o, "profile_samples", c.profile_samples);
  }
  return c;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::invalid_argument, message);
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8e", value);
  return buf;
}

Command parse_command(const std::string& name) {
  if (name == "exact") return Command::exact;
  if (name == "semiclassical") return Command::semiclassical;
  if (name == "design-quadratic") return Command::design_quadratic;
  if (name == "design-pt") return Command::design_pt;
  if (name == "table1") return Command::table1;
  if (name == "fig1") return Command::fig1;
  if (name == "sweep") return Command::sweep;
  throw Error(ErrorCode::invalid_argument, "unknown command '" + name + "'");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::exact: return "exact";
    case Command::semiclassical: return "semiclassical";
    case Command::design_quadratic: return "design-quadratic";
    case Command::design_pt: return "design-pt";
    case Command::table1: return "table1";
    case Command::fig1: return "fig1";
    case Command::sweep: return "sweep";
  }
  return "unknown";
}

RunConfig config_from_json_text(const std::string& text) {
  try {
    return config_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("bad configuration: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Exact and semiclassical transfer matrices; unidirectional invisibility design"};
  std::string config_path, command, format, potential;
  std::optional<double> eta, kappa_minus, kappa_plus, L_um, k, k_min, k_max, step, z_re, z_im, L, a_re, a_im,
      width;
  std::optional<int> m, n, m1, m2, samples, profile_samples;
  std::optional<std::string> out;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--command", command, "exact|semiclassical|design-quadratic|design-pt|table1|fig1|sweep");
  app.add_option("--potential", potential, "free|barrier|gaussian|tabulated|quadratic-index|design-quadratic|design-pt");
  app.add_option("--eta", eta);
  app.add_option("--kappa-minus", kappa_minus);
  app.add_option("--kappa-plus", kappa_plus);
  app.add_option("--L-um", L_um, "optical sample length in micrometres");
  app.add_option("--m", m);
  app.add_option("--n", n);
  app.add_option("--m1", m1);
  app.add_option("--m2", m2);
  app.add_option("--k", k);
  app.add_option("--k-min", k_min);
  app.add_option("--k-max", k_max);
  app.add_option("--samples", samples);
  app.add_option("--step", step, "integrator step in tau = k x");
  app.add_option("--format", format, "csv|json");
  app.add_option("--out", out, "output path (default: standard output)");
  app.add_option("--z-re", z_re, "barrier/gaussian amplitude, real part");
  app.add_option("--z-im", z_im, "barrier/gaussian amplitude, imaginary part");
  app.add_option("--L", L, "barrier/free support length");
  app.add_option("--a-re", a_re, "quadratic-index shape parameter, real part");
  app.add_option("--a-im", a_im, "quadratic-index shape parameter, imaginary part");
  app.add_option("--width", width, "gaussian width");
  app.add_option("--profile-samples", profile_samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    throw;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::invalid_argument, e.what());
  }

  RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
  if (!command.empty()) c.command = parse_command(command);
  if (!potential.empty()) c.potential.kind = potential;
  if (!format.empty()) c.format = parse_format(format);
  auto set = [](auto& target, const auto& opt) {
    if (opt) target = *opt;
  };
  set(c.eta, eta);
  set(c.kappa_minus, kappa_minus);
  set(c.kappa_plus, kappa_plus);
  set(c.L_um, L_um);
  set(c.m, m);
  set(c.n, n);
  set(c.m1, m1);
  set(c.m2, m2);
  set(c.samples, samples);
  set(c.profile_samples, profile_samples);
  set(c.out, out);
  set(c.potential.z_re, z_re);
  set(c.potential.z_im, z_im);
  set(c.potential.L, L);
  set(c.potential.a_re, a_re);
  set(c.potential.a_im, a_im);
  set(c.potential.width, width);
  if (k) c.k = k;
  if (k_min) c.k_min = k_min;
  if (k_max) c.k_max = k_max;
  if (step) c.step = step;
  return c;
}

void validate(const RunConfig& c) {
  require(c.potential.L > 0, "L must be positive");
  require(c.L_um > 0, "L-um must be positive");
  require(c.profile_samples >= 2, "profile-samples must be >= 2");
  if (c.step) require(*c.step > 0, "step must be positive");
  switch (c.command) {
    case Command::exact:
    case Command::semiclassical:
      require(c.k.has_value(), "command needs --k");
      require(*c.k > 0 && std::isfinite(*c.k), "k must be positive");
      break;
    case Command::sweep:
      require(c.k_min.has_value() && c.k_max.has_value(), "sweep needs --k-min and --k-max");
      require(*c.k_min > 0, "k-min must be positive");
      require(*c.k_max > *c.k_min, "k-max must exceed k-min");
      require(c.samples >= 2, "samples must be >= 2");
      break;
    default:
      break;
  }
  if (c.potential.kind == "gaussian") require(c.potential.width > 0, "width must be positive");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    std::vector<Table> tables;
    switch (config.command) {
      case Command::exact: tables = run_single_k(config, true); break;
      case Command::semiclassical: tables = run_single_k(config, false); break;
      case Command::design_quadratic: tables = run_design_quadratic(config); break;
      case Command::design_pt: tables = run_design_pt(config); break;
      case Command::table1: tables = run_table1(config); break;
      case Command::fig1: tables = run_fig1(config); break;
      case Command::sweep: tables = run_sweep(config); break;
    }
    std::ostringstream buffer;
    if (config.format == Format::csv) write_csv(buffer, tables);
    else write_json(buffer, tables);

    if (config.out.empty() || config.out == "-") {
      out << buffer.str();
    } else {
      std::ofstream file(config.out, std::ios::binary);
      if (!file) throw Error(ErrorCode::invalid_argument, "cannot write output file '" + config.out + "'");
      file << buffer.str();
    }
    return 0;
  } catch (const Error& e) {
    err << json{{"error", std::string(semiscat::to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
  } catch (const std::exception& e) {
    err << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
  }
  return 1;
}

int main(int argc, const char* const* argv) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const CLI::CallForHelp&) {
    return 0;
  } catch (const Error& e) {
    std::cerr << json{{"error", std::string(semiscat::to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace semiscat::cli
