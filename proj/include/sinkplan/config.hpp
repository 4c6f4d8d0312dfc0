#pragma once

// Scenario directories on disk.
//
//   scenario.txt            key = value manifest (time structure, VOLL, sink, demand curve)
//   resources.csv           one row per cluster, unit-bearing column names
//   fuels.csv               fuel prices and CO2 content
//   load.csv                hour, zone, load_mw
//   capacity_factors.csv    hour, resource, cap_factor   (optional)
//   lines.csv               transmission lines            (optional)
//   policies.csv            CO2 caps and energy standards (optional)
//   nse.csv                 curtailment segments          (optional)
//   deferrable.csv          deferrable loads              (optional)
//   deferrable_profile.csv  hour, load, base_mw           (with deferrable.csv)
//   sweep.txt               default sweep grid            (optional)
//
// The formats are described in docs/formats.md.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sinkplan/econ.hpp"
#include "sinkplan/model.hpp"

namespace sinkplan {

struct SweepGrid {
  std::vector<double> capex_values;  // $/kW-input
  std::vector<double> base_prices;   // $/MWh-input
  FinanceSpec finance;
  DemandCurveSpec curve;  // base_price is replaced per cell

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct Config {
  Scenario scenario;       // validated; carries the sink when the manifest enables it
  DemandSinkSpec sink;     // sink settings from the manifest, even when disabled
  DemandCurveSpec curve;   // curve settings from the manifest
  std::optional<SweepGrid> grid;  // from sweep.txt when present
};

/// Reads and validates a scenario directory. Throws ParseError for malformed
/// rows (file, line and column in the message) and Error for missing files
/// or failed validation.
Config load_config(const std::filesystem::path& dir);

/// Reads a sweep grid file; settings not given fall back to `defaults`.
SweepGrid load_grid(const std::filesystem::path& file, const SweepGrid& defaults);

/// Grid defaults taken from a loaded config (its sink finance and curve).
SweepGrid default_grid(const Config& config);

/// Fuel cost per MWh from a heat rate (mmBTU/MWh) and a price ($/mmBTU).
double fuel_cost_per_mwh(double heat_rate, double price);

/// tCO2/MWh from a heat rate (mmBTU/MWh) and a fuel's kg CO2 per mmBTU.
double emissions_per_mwh(double heat_rate, double kg_per_mmbtu);

/// Start cost including start-up fuel.
double start_cost_with_fuel(double start_cost, double start_fuel_mmbtu, double price);

}  // namespace sinkplan
