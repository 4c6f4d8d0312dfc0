#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sinkplan/certify.hpp"
#include "sinkplan/config.hpp"
#include "sinkplan/econ.hpp"
#include "sinkplan/error.hpp"
#include "sinkplan/metrics.hpp"
#include "sinkplan/mps.hpp"
#include "sinkplan/sweep.hpp"

namespace fs = std::filesystem;
using namespace sinkplan;

namespace {

constexpr int kFailed = 1;
constexpr int kNotCertified = 2;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error("cannot write " + p.string());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

MpsFormat parse_format(const std::string& s) { return s == "free" ? MpsFormat::free : MpsFormat::fixed; }

void print_report(const MetricsReport& r) {
  const auto cols = metrics_columns();
  const auto vals = metrics_fields(r);
  for (std::size_t k = 0; k < cols.size(); ++k)
    if (!vals[k].empty()) std::cout << cols[k] << " = " << vals[k] << "\n";
}

int cmd_validate(const std::string& dir) {
  const Config cfg = load_config(dir);
  const Scenario& s = cfg.scenario;
  std::cout << "scenario " << s.name << ": valid\n"
            << "zones = " << s.zones.size() << "\n"
            << "hours = " << s.time.total_hours() << "\n"
            << "hour_weight = " << format_number(s.time.hour_weight) << "\n"
            << "clusters = " << s.clusters.size() << "\n"
            << "lines = " << s.lines.size() << "\n"
            << "policies = " << s.policies.size() << "\n"
            << "peak_load_mw = " << format_number(peak_load(s)) << "\n"
            << "annual_load_mwh = " << format_number(annual_load(s)) << "\n"
            << "sink = " << (s.sink ? "enabled" : "disabled") << "\n"
            << "segments = " << s.segments.size() << "\n";
  return 0;
}

struct SolveArgs {
  std::string config;
  bool no_sink = false;
  std::string mps_out;
  std::string format = "fixed";
  std::string solver = "internal";
  std::string sol_in;
  std::string sol_out;
  std::string report_out;
};

int cmd_solve(const SolveArgs& a) {
  const Config cfg = load_config(a.config);
  const Scenario scenario = a.no_sink ? cfg.scenario.without_sink() : cfg.scenario;
  const MpsFormat format = parse_format(a.format);
  Formulation f = assemble(scenario);
  const NameTable names = mps_names(f.lp, format);

  if (!a.mps_out.empty()) {
    fs::create_directories(a.mps_out);
    const fs::path base = fs::path(a.mps_out) / scenario.name;
    write_text(base.string() + ".mps", write_mps(f.lp, format));
    if (!names.identity) write_text(base.string() + ".names", write_name_table(f.lp, names));
    std::cerr << "wrote " << base.string() << ".mps\n";
  }

  Solution sol;
  if (a.solver == "external") {
    if (a.sol_in.empty()) {
      if (!a.mps_out.empty()) return 0;  // MPS handed off, nothing to read back yet
      throw Error("--solver external needs --sol-in (or --mps-out to export the model)");
    }
    sol = read_external_solution(f.lp, read_text(a.sol_in), &names, 1e-6, a.sol_in);
  } else {
    sol = solve(f.lp);
  }
  if (!a.sol_out.empty()) write_text(a.sol_out, write_solution(f.lp, sol, &names));

  std::cout << "status = " << to_string(sol.status) << "\n";
  if (sol.status != SolveStatus::optimal) return kNotCertified;
  const ResidualReport rep = certify(f.lp, sol);
  std::cout << "certificate = " << rep.summary() << "\n";
  if (!rep.passes()) return kNotCertified;
  const MetricsReport m = report(scenario, f, sol);
  print_report(m);
  if (!a.report_out.empty()) {
    std::string csv;
    const auto cols = metrics_columns();
    const auto vals = metrics_fields(m);
    for (std::size_t k = 0; k < cols.size(); ++k) csv += (k ? "," : "") + cols[k];
    csv += "\n";
    for (std::size_t k = 0; k < vals.size(); ++k) csv += (k ? "," : "") + vals[k];
    csv += "\n";
    write_text(a.report_out, csv);
  }
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string grid;
  std::size_t threads = 1;
  std::string out = "sweep_out";
  bool mps = false;
  bool mps_only = false;
  std::string format = "fixed";
};

int cmd_sweep(const SweepArgs& a) {
  const Config cfg = load_config(a.config);
  SweepGrid grid;
  std::vector<fs::path> extra;
  if (!a.grid.empty()) {
    grid = load_grid(a.grid, default_grid(cfg));
    extra.push_back(a.grid);
  } else if (cfg.grid) {
    grid = *cfg.grid;
  } else {
    throw Error("no --grid given and " + a.config + " has no sweep.txt");
  }
  SweepOptions opt;
  opt.threads = a.threads;
  opt.write_mps = a.mps;
  opt.mps_only = a.mps_only;
  opt.mps_format = parse_format(a.format);
  const SweepResult result = run_sweep(cfg.scenario, cfg.sink, grid, opt);
  emit(result, a.out, {hash_inputs(a.config, extra), utc_timestamp()});
  std::size_t failed = 0;
  for (const auto& c : result.cells)
    if (!a.mps_only && !c.ok()) {
      ++failed;
      std::cerr << "cell " << c.id << " failed: " << c.error << "\n";
    }
  std::cout << result.cells.size() << " cells, " << failed << " failed, output in " << a.out << "\n";
  return failed ? kNotCertified : 0;
}

int cmd_certify(const std::string& mps_path, const std::string& sol_path, double tolerance) {
  const LinearProgram lp = parse_mps(read_text(mps_path), mps_path);
  const Solution sol = read_external_solution(lp, read_text(sol_path), nullptr, INFINITY, sol_path);
  std::cout << "status = " << to_string(sol.status) << "\n";
  if (sol.status != SolveStatus::optimal) return kNotCertified;
  const ResidualReport rep = certify(lp, sol);
  std::cout << "objective = " << format_number(sol.objective) << "\n"
            << "max_row_residual = " << format_number(rep.max_row_residual) << "\n"
            << "worst_row = " << rep.worst_row_name << "\n"
            << "max_bound_violation = " << format_number(rep.max_bound_violation) << "\n"
            << "duality_gap = " << format_number(rep.duality_gap) << "\n"
            << "max_complementarity = " << format_number(rep.max_complementarity) << "\n"
            << "max_dual_infeasibility = " << format_number(rep.max_dual_infeasibility) << "\n"
            << "certified = " << (rep.passes(tolerance) ? "yes" : "no") << "\n";
  return rep.passes(tolerance) ? 0 : kNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity expansion with demand sinks"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string validate_dir;
  auto* validate = app.add_subcommand("validate", "Load and validate a scenario directory");
  validate->add_option("config", validate_dir, "Scenario directory")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve one scenario and print its metrics");
  solve->add_option("config", solve_args.config, "Scenario directory")->required();
  solve->add_flag("--no-sink", solve_args.no_sink, "Drop the demand sink");
  solve->add_option("--mps-out", solve_args.mps_out, "Write the model as MPS into this directory");
  solve->add_option("--mps-format", solve_args.format, "MPS format")->check(CLI::IsMember({"fixed", "free"}));
  solve->add_option("--solver", solve_args.solver, "internal or external")
      ->check(CLI::IsMember({"internal", "external"}));
  solve->add_option("--sol-in", solve_args.sol_in, "Solution file from an external solver");
  solve->add_option("--sol-out", solve_args.sol_out, "Write the solution in exchange format");
  solve->add_option("--report", solve_args.report_out, "Write the metrics row as CSV");

  SweepArgs sweep_args;
  sweep_args.threads = default_threads();
  auto* sweep = app.add_subcommand("sweep", "Run a capex x base-price sweep");
  sweep->add_option("config", sweep_args.config, "Scenario directory")->required();
  sweep->add_option("--grid", sweep_args.grid, "Grid file (defaults to the config's sweep.txt)");
  sweep->add_option("--threads", sweep_args.threads, "Worker threads (default: SINKPLAN_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_args.out, "Output directory");
  sweep->add_flag("--mps", sweep_args.mps, "Also write mps/<cell>.mps");
  sweep->add_flag("--mps-only", sweep_args.mps_only, "Write MPS files without solving");
  sweep->add_option("--mps-format", sweep_args.format, "MPS format")->check(CLI::IsMember({"fixed", "free"}));

  double price = NAN, value = NAN, capex = NAN;
  TechSpec tech;
  FinanceSpec fin;
  auto* convert = app.add_subcommand("convert", "Convert between product price and electricity value");
  auto* price_opt = convert->add_option("--price", price, "Product price ($/unit)");
  auto* value_opt = convert->add_option("--value", value, "Value of input electricity ($/MWh)");
  auto* capex_opt = convert->add_option("--capex", capex, "Capital cost ($/kW) to annualize");
  price_opt->excludes(value_opt);
  convert->add_option("--efficiency", tech.efficiency, "Product units per MWh");
  convert->add_option("--vom", tech.vom, "Variable cost ($/MWh-input)");
  convert->add_option("--transport-storage", tech.transport_storage, "Transport and storage cost ($/unit)");
  convert->add_option("--wacc", fin.wacc, "Cost of capital");
  convert->add_option("--life", fin.life, "Asset life (years)");
  convert->add_option("--fom", fin.fom_fraction, "Fixed O&M as a fraction of capex");

  DemandCurveSpec curve;
  double curve_load = NAN;
  std::string curve_config;
  auto* curve_cmd = app.add_subcommand("curve", "Print the stepwise product demand curve");
  auto* load_opt = curve_cmd->add_option("--annual-load", curve_load, "Annual system load (MWh)");
  auto* cfg_opt = curve_cmd->add_option("--config", curve_config, "Take the annual load from a scenario");
  load_opt->excludes(cfg_opt);
  curve_cmd->add_option("--anchor-price", curve.anchor_price, "Price at the anchor quantity ($/MWh)");
  curve_cmd->add_option("--anchor-fraction", curve.anchor_quantity_fraction, "Anchor quantity / annual load");
  curve_cmd->add_option("--elasticity", curve.elasticity, "Price elasticity at the anchor");
  curve_cmd->add_option("--segment-fraction", curve.segment_fraction, "Segment width / annual load");
  curve_cmd->add_option("--base-price", curve.base_price, "Value of the segment ending at the anchor");

  std::string mps_path, sol_path;
  double tolerance = 1e-6;
  auto* cert = app.add_subcommand("certify", "Check a solution file against an MPS model");
  cert->add_option("mps", mps_path, "MPS file")->required();
  cert->add_option("sol", sol_path, "Solution file")->required();
  cert->add_option("--tolerance", tolerance, "Certification tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(validate_dir);
    if (*solve) return cmd_solve(solve_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*convert) {
      bool any = false;
      if (*price_opt) {
        std::cout << "value_usd_per_mwh = " << format_number(output_value(price, tech)) << "\n";
        any = true;
      }
      if (*value_opt) {
        std::cout << "price_usd_per_unit = " << format_number(product_price(value, tech)) << "\n";
        any = true;
      }
      if (*capex_opt) {
        std::cout << "crf = " << format_number(crf(fin.wacc, fin.life)) << "\n"
                  << "annuity_usd_per_mw_yr = " << format_number(annualized_capex(capex, fin)) << "\n";
        any = true;
      }
      if (!any) throw Error("convert needs --price, --value or --capex");
      return 0;
    }
    if (*curve_cmd) {
      if (!curve_config.empty()) curve_load = annual_load(load_config(curve_config).scenario);
      if (std::isnan(curve_load)) throw Error("curve needs --annual-load or --config");
      std::cout << "# step_usd_per_mwh = " << format_number(demand_curve_step(curve, curve_load)) << "\n";
      std::cout << "segment,max_supply_mwh,value_usd_per_mwh\n";
      for (const auto& s : build_demand_curve(curve, curve_load))
        std::cout << s.index << "," << format_number(s.max_supply) << "," << format_number(s.value) << "\n";
      return 0;
    }
    if (*cert) return cmd_certify(mps_path, sol_path, tolerance);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
