#pragma once

// Capex x base-price sweeps over a scenario, and the single-scenario run
// they are built from.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sinkplan/certify.hpp"
#include "sinkplan/config.hpp"
#include "sinkplan/formulation.hpp"
#include "sinkplan/metrics.hpp"
#include "sinkplan/simplex.hpp"

namespace sinkplan {

std::string_view version();

/// Assembled, solved and certified scenario.
struct Run {
  Formulation formulation;
  Solution solution;
  ResidualReport residuals;
};

/// Assemble and solve with the internal solver, then certify. Does not throw
/// on a non-optimal status; check run.solution.status.
Run solve_scenario(const Scenario& scenario, const SolveOptions& options = {});

/// True when the run is optimal and its certificate is within `tolerance`.
bool certified(const Run& run, double tolerance = 1e-6);

/// Solves the scenario without its sink. Throws Error (with the LP status)
/// unless the result is optimal and certified.
MetricsReport run_reference(const Scenario& scenario, const SolveOptions& options = {});

/// The scenario for one grid cell: sink annuity from `capex`, market from
/// the grid curve at `base_price`. `sink` supplies the allowed zones.
Scenario cell_scenario(const Scenario& scenario, const DemandSinkSpec& sink, const SweepGrid& grid, double capex,
                       double base_price);

/// "capex<capex>_price<base price>".
std::string cell_id(double capex, double base_price);

struct CellResult {
  std::string id;  // "reference" for the no-sink row
  std::optional<double> capex;
  std::optional<double> base_price;
  double sink_annuity = 0.0;
  std::optional<SolveStatus> status;  // empty when the cell was never solved
  std::string error;                  // empty on success
  std::size_t iterations = 0;
  std::optional<ResidualReport> residuals;
  std::optional<MetricsReport> metrics;
  std::vector<std::vector<double>> zone_price_curves;  // per zone, descending
  std::string mps;                                     // when requested

  bool ok() const { return error.empty() && metrics.has_value(); }
};

struct SweepResult {
  std::vector<std::string> zones;
  CellResult reference;
  std::vector<CellResult> cells;  // capex-major, then base price, in grid order
};

struct SweepOptions {
  std::size_t threads = 1;
  bool write_mps = false;
  bool mps_only = false;  // build and write MPS only, no solves
  SolveOptions solve;
  double certify_tolerance = 1e-6;
  MpsFormat mps_format = MpsFormat::fixed;
};

/// Runs every grid cell. Per-cell failures are recorded in the cell; the
/// reference run failing throws Error.
SweepResult run_sweep(const Scenario& scenario, const DemandSinkSpec& sink, const SweepGrid& grid,
                      const SweepOptions& options = {});

struct EmitInfo {
  std::string config_hash;
  std::string timestamp;  // written to the manifest only
};

/// Writes results.csv, price_duration/<cell>.csv, mps/<cell>.mps (when the
/// cells carry MPS text) and manifest.txt under `out_dir`.
void emit(const SweepResult& result, const std::filesystem::path& out_dir, const EmitInfo& info);

/// results.csv text.
std::string results_csv(const SweepResult& result);
std::vector<std::string> results_columns();

/// Price-duration table for one cell.
std::string price_duration_csv(const SweepResult& result, const CellResult& cell);

/// FNV-1a 64-bit hash of every regular file in `dir` (sorted by name) plus
/// the extra files given, as 16 hex digits.
std::string hash_inputs(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& extra = {});

/// Default worker count: SINKPLAN_THREADS when set to a positive integer, else 1.
std::size_t default_threads();

}  // namespace sinkplan
