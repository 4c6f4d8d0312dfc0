#include "sinkplan/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "sinkplan/error.hpp"
#include "sinkplan/mps.hpp"

#ifndef SINKPLAN_VERSION
#define SINKPLAN_VERSION "0.0.0"
#endif

namespace sinkplan {

namespace fs = std::filesystem;

std::string_view version() { return SINKPLAN_VERSION; }

Run solve_scenario(const Scenario& scenario, const SolveOptions& options) {
  Run run;
  run.formulation = assemble(scenario);
  run.solution = solve(run.formulation.lp, options);
  if (run.solution.status == SolveStatus::optimal) run.residuals = certify(run.formulation.lp, run.solution);
  return run;
}

bool certified(const Run& run, double tolerance) {
  return run.solution.status == SolveStatus::optimal && run.residuals.passes(tolerance);
}

MetricsReport run_reference(const Scenario& scenario, const SolveOptions& options) {
  const Scenario ref = scenario.without_sink();
  const Run run = solve_scenario(ref, options);
  if (run.solution.status != SolveStatus::optimal)
    throw Error("reference run of '" + scenario.name + "' is " + std::string(to_string(run.solution.status)));
  if (!certified(run)) throw Error("reference run of '" + scenario.name + "' fails certification: " + run.residuals.summary());
  MetricsReport rep = report(ref, run.formulation, run.solution);
  rep.deltas = compare(rep, rep);
  return rep;
}

std::string cell_id(double capex, double base_price) {
  return "capex" + format_number(capex) + "_price" + format_number(base_price);
}

Scenario cell_scenario(const Scenario& scenario, const DemandSinkSpec& sink, const SweepGrid& grid, double capex,
                       double base_price) {
  Scenario s = scenario.without_sink();
  DemandSinkSpec spec = sink;
  spec.capex = capex;
  spec.finance = grid.finance;
  spec.annuity = annualized_capex(capex, grid.finance);
  DemandCurveSpec curve = grid.curve;
  curve.base_price = base_price;
  s.segments = build_demand_curve(curve, annual_load(s));
  s.sink = std::move(spec);
  s.name = scenario.name + "_" + cell_id(capex, base_price);
  return s;
}

namespace {

std::vector<std::vector<double>> sorted_zone_prices(const Scenario& s, const Run& run) {
  auto prices = hourly_prices(s, run.formulation, run.solution);
  for (auto& p : prices) std::sort(p.begin(), p.end(), std::greater<>());
  return prices;
}

// Solves one scenario into `cell`, recording failures instead of throwing.
void run_cell(const Scenario& s, const MetricsReport* reference, const SweepOptions& opt, CellResult& cell) {
  try {
    Formulation f = assemble(s);
    if (opt.write_mps || opt.mps_only) cell.mps = write_mps(f.lp, opt.mps_format);
    if (opt.mps_only) return;
    Run run;
    run.formulation = std::move(f);
    run.solution = solve(run.formulation.lp, opt.solve);
    cell.status = run.solution.status;
    cell.iterations = run.solution.iterations;
    if (run.solution.status != SolveStatus::optimal) {
      cell.error = "solver status " + std::string(to_string(run.solution.status));
      return;
    }
    run.residuals = certify(run.formulation.lp, run.solution);
    cell.residuals = run.residuals;
    if (!run.residuals.passes(opt.certify_tolerance)) {
      cell.error = "certification failed: " + run.residuals.summary();
      return;
    }
    cell.metrics = report(s, run.formulation, run.solution, reference);
    cell.zone_price_curves = sorted_zone_prices(s, run);
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = c == ',' ? ';' : ' ';
  return s;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ',';
    out += fields[k];
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view data) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string read_binary(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SweepResult run_sweep(const Scenario& scenario, const DemandSinkSpec& sink, const SweepGrid& grid,
                      const SweepOptions& opt) {
  if (grid.capex_values.empty() || grid.base_prices.empty()) throw Error("sweep grid is empty");
  SweepResult result;
  for (const auto& z : scenario.zones) result.zones.push_back(z.id);

  const Scenario ref_scenario = scenario.without_sink();
  result.reference.id = "reference";
  {
    SweepOptions ref_opt = opt;
    run_cell(ref_scenario, nullptr, ref_opt, result.reference);
    if (!opt.mps_only) {
      if (!result.reference.ok()) throw Error("reference run failed: " + result.reference.error);
      result.reference.metrics->deltas = compare(*result.reference.metrics, *result.reference.metrics);
    }
  }
  const MetricsReport* ref = result.reference.metrics ? &*result.reference.metrics : nullptr;

  std::vector<Scenario> scenarios;
  for (double capex : grid.capex_values)
    for (double price : grid.base_prices) {
      CellResult cell;
      cell.id = cell_id(capex, price);
      cell.capex = capex;
      cell.base_price = price;
      cell.sink_annuity = annualized_capex(capex, grid.finance);
      try {
        scenarios.push_back(cell_scenario(scenario, sink, grid, capex, price));
      } catch (const std::exception& e) {
        cell.error = e.what();
        scenarios.push_back(Scenario{});
      }
      result.cells.push_back(std::move(cell));
    }

  // Cells are claimed in index order and written to their own slot, so the
  // result does not depend on the number of workers.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < result.cells.size(); k = next++)
      if (result.cells[k].error.empty()) run_cell(scenarios[k], ref, opt, result.cells[k]);
  };
  const std::size_t workers = std::clamp<std::size_t>(opt.threads, 1, result.cells.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

std::vector<std::string> results_columns() {
  std::vector<std::string> cols = {"cell",
                                   "capex_usd_per_kw",
                                   "base_price_usd_per_mwh",
                                   "sink_annuity_usd_per_mw_yr",
                                   "status",
                                   "error",
                                   "simplex_iterations",
                                   "max_row_residual",
                                   "duality_gap",
                                   "max_complementarity"};
  for (auto& c : metrics_columns()) cols.push_back(std::move(c));
  return cols;
}

std::string results_csv(const SweepResult& result) {
  std::string out = join(results_columns()) + "\n";
  auto row = [&](const CellResult& c) {
    std::vector<std::string> f = {c.id,
                                  c.capex ? format_number(*c.capex) : "",
                                  c.base_price ? format_number(*c.base_price) : "",
                                  format_number(c.sink_annuity),
                                  c.status ? std::string(to_string(*c.status)) : "not_solved",
                                  csv_safe(c.error),
                                  std::to_string(c.iterations),
                                  c.residuals ? format_number(c.residuals->max_row_residual) : "",
                                  c.residuals ? format_number(c.residuals->duality_gap) : "",
                                  c.residuals ? format_number(c.residuals->max_complementarity) : ""};
    auto m = c.metrics ? metrics_fields(*c.metrics) : std::vector<std::string>(metrics_columns().size());
    for (auto& v : m) f.push_back(std::move(v));
    out += join(f) + "\n";
  };
  row(result.reference);
  for (const auto& c : result.cells) row(c);
  return out;
}

std::string price_duration_csv(const SweepResult& result, const CellResult& cell) {
  std::vector<std::string> header = {"rank", "system_usd_per_mwh"};
  for (const auto& z : result.zones) header.push_back(z + "_usd_per_mwh");
  std::string out = join(header) + "\n";
  if (!cell.metrics) return out;
  const auto& sys = cell.metrics->price_duration_curve;
  for (std::size_t t = 0; t < sys.size(); ++t) {
    std::vector<std::string> f = {std::to_string(t + 1), format_number(sys[t])};
    for (const auto& zone : cell.zone_price_curves) f.push_back(format_number(zone[t]));
    out += join(f) + "\n";
  }
  return out;
}

void emit(const SweepResult& result, const fs::path& out_dir, const EmitInfo& info) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw Error("cannot create output directory " + out_dir.string());

  const bool solved = result.reference.status.has_value();
  if (solved) {
    write_text(out_dir / "results.csv", results_csv(result));
    fs::create_directories(out_dir / "price_duration", ec);
    if (ec) throw Error("cannot create " + (out_dir / "price_duration").string());
    write_text(out_dir / "price_duration" / (result.reference.id + ".csv"), price_duration_csv(result, result.reference));
    for (const auto& c : result.cells)
      if (c.metrics) write_text(out_dir / "price_duration" / (c.id + ".csv"), price_duration_csv(result, c));
  }
  bool any_mps = !result.reference.mps.empty();
  for (const auto& c : result.cells) any_mps = any_mps || !c.mps.empty();
  if (any_mps) {
    fs::create_directories(out_dir / "mps", ec);
    if (ec) throw Error("cannot create " + (out_dir / "mps").string());
    if (!result.reference.mps.empty()) write_text(out_dir / "mps" / "reference.mps", result.reference.mps);
    for (const auto& c : result.cells)
      if (!c.mps.empty()) write_text(out_dir / "mps" / (c.id + ".mps"), c.mps);
  }

  std::size_t failed = 0;
  for (const auto& c : result.cells)
    if (solved && !c.ok()) ++failed;
  std::string manifest;
  manifest += "tool = sinkplan\n";
  manifest += "version = " + std::string(version()) + "\n";
  manifest += "config_hash = " + info.config_hash + "\n";
  manifest += "cells = " + std::to_string(result.cells.size()) + "\n";
  manifest += "failed_cells = " + std::to_string(failed) + "\n";
  manifest += std::string("solved = ") + (solved ? "true" : "false") + "\n";
  manifest += "created = " + info.timestamp + "\n";
  write_text(out_dir / "manifest.txt", manifest);
}

std::string hash_inputs(const fs::path& dir, const std::vector<fs::path>& extra) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::uint64_t h = 14695981039346656037ULL;
  auto add = [&](const fs::path& p) {
    h = fnv1a(h, p.filename().string());
    h = fnv1a(h, std::string_view("\0", 1));
    h = fnv1a(h, read_binary(p));
    h = fnv1a(h, std::string_view("\0", 1));
  };
  for (const auto& f : files) add(f);
  for (const auto& f : extra) add(f);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t default_threads() {
  const char* env = std::getenv("SINKPLAN_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v <= 0) return 1;
  return static_cast<std::size_t>(v);
}

}  // namespace sinkplan
