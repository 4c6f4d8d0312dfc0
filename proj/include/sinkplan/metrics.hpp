#pragma once

// Reported quantities computed from a solved formulation. Prices are the
// demand-balance duals divided by the hour weight ($/MWh). Values that are
// undefined for a run (no sink output, no VRE capacity, fewer than two days)
// are left empty.

#include <optional>
#include <string>
#include <vector>

#include "sinkplan/formulation.hpp"
#include "sinkplan/model.hpp"
#include "sinkplan/simplex.hpp"

namespace sinkplan {

struct CapacityByGroup {
  double solar = 0.0;  // MW
  double wind = 0.0;
  double firm = 0.0;
  double battery = 0.0;
  double other = 0.0;

  friend bool operator==(const CapacityByGroup&, const CapacityByGroup&) = default;
};

struct MetricsDeltas {
  CapacityByGroup capacity;  // MW, run minus reference
  double system_cost = 0.0;  // $
  std::optional<double> system_cost_change_fraction;
  std::optional<double> average_price_change_fraction;
  std::optional<double> start_cost_change_fraction;

  friend bool operator==(const MetricsDeltas&, const MetricsDeltas&) = default;
};

struct MetricsReport {
  double objective = 0.0;
  double total_system_cost = 0.0;  // objective - sink capex + sink revenue
  double average_price = 0.0;      // load-weighted, $/MWh
  double peak_load = 0.0;          // MW
  double annual_load = 0.0;        // MWh
  double sink_capacity_mw = 0.0;
  double sink_capacity_fraction_of_peak = 0.0;
  std::optional<double> sink_capacity_factor;
  std::optional<double> sink_weighted_price;
  double sink_annual_production = 0.0;  // MWh of input electricity
  double sink_capex = 0.0;              // $/yr, annuity times capacity
  double sink_revenue = 0.0;            // $/yr, sum of segment value times supply
  std::optional<double> average_output_value;  // supply-weighted segment value
  CapacityByGroup capacity;
  std::optional<double> curtailment_fraction;
  double total_start_costs = 0.0;
  double unserved_energy = 0.0;  // MWh
  std::optional<double> daily_net_load_correlation;
  std::vector<double> price_duration_curve;  // system price per hour, descending
  std::optional<MetricsDeltas> deltas;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Prices per zone and flattened hour.
std::vector<std::vector<double>> hourly_prices(const Scenario& scenario, const Formulation& f, const Solution& sol);

/// Load-weighted mean of zonal prices in each hour (plain mean when the hour has no load).
std::vector<double> system_prices(const Scenario& scenario, const std::vector<std::vector<double>>& prices);

double average_price(const Scenario& scenario, const Formulation& f, const Solution& sol);
std::optional<double> sink_weighted_price(const Scenario& scenario, const Formulation& f, const Solution& sol);
std::optional<double> sink_capacity_factor(const Scenario& scenario, const Formulation& f, const Solution& sol);
std::optional<double> curtailment_fraction(const Scenario& scenario, const Formulation& f, const Solution& sol);
double start_costs(const Scenario& scenario, const Formulation& f, const Solution& sol);
std::optional<double> daily_net_load_correlation(const Scenario& scenario, const Formulation& f, const Solution& sol);

/// Installed capacity summed by reporting group. Clusters labelled
/// firm_if_emitting count as firm unless every CO2 cap in the scenario is zero.
CapacityByGroup capacity_by_group(const Scenario& scenario, const Formulation& f, const Solution& sol);

/// Pearson correlation; empty when either series has zero variance or fewer than two points.
std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Largest absolute error of the per-zone, per-hour energy balance
/// (injections + unserved + imports = load + withdrawals + sink + exports).
double energy_balance_error(const Scenario& scenario, const Formulation& f, const Solution& sol);

/// Full report; `reference` (usually the no-sink run) fills the deltas.
/// Throws Error unless the solution is optimal with duals.
MetricsReport report(const Scenario& scenario, const Formulation& f, const Solution& sol,
                     const MetricsReport* reference = nullptr);

MetricsDeltas compare(const MetricsReport& run, const MetricsReport& reference);

/// Flat CSV columns for a report; empty fields for absent values.
std::vector<std::string> metrics_columns();
std::vector<std::string> metrics_fields(const MetricsReport& r);

}  // namespace sinkplan
