#pragma once

// Scenario description for the capacity-expansion model. Everything here is a
// plain value type; a Scenario is immutable once built and can be shared
// read-only across concurrent solves.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sinkplan/econ.hpp"

namespace sinkplan {

struct TimeStructure {
  int sub_periods = 1;           // W
  int hours_per_sub_period = 24; // H
  double hour_weight = 1.0;      // hours represented by one modeled hour

  int total_hours() const { return sub_periods * hours_per_sub_period; }
};

/// Curtailable slice of hourly demand, priced at a fraction of VOLL.
struct NseSegment {
  double slope_fraction = 1.0;
  double size_fraction = 1.0;
};

struct Zone {
  std::string id;
  std::vector<double> load;  // MW per flattened hour t = w*H + h
  std::vector<NseSegment> nse_segments;
};

enum class ResourceKind { thermal_uc, dispatchable, vre, storage };

struct ResourceCluster {
  std::string id;
  std::string zone;
  ResourceKind kind = ResourceKind::dispatchable;
  // Reporting group label (solar, wind, battery, firm, firm_if_emitting, ...).
  std::string group;

  double unit_size = 1.0;      // MW per unit
  double existing_cap = 0.0;   // MW
  double max_new_cap = -1.0;   // MW, negative means unlimited
  double inv_cost = 0.0;       // $/MW-yr
  double fom_cost = 0.0;       // $/MW-yr
  double vom_cost = 0.0;       // $/MWh
  double fuel_cost = 0.0;      // $/MWh
  double start_cost = 0.0;     // $/start, includes start-up fuel
  double emissions_rate = 0.0; // t CO2/MWh

  double min_stable = 0.0;
  std::vector<double> cap_factor;  // empty means 1.0 in every hour
  double ramp_up = 1.0;            // fraction of capacity per hour
  double ramp_down = 1.0;
  int min_up = 0;                  // hours
  int min_down = 0;

  double charge_eff = 1.0;
  double discharge_eff = 1.0;
  double self_discharge = 0.0;  // fraction per hour
  double duration = 0.0;        // hours of energy per MW (fixed_ratio sizing)
  double energy_inv_cost = 0.0; // $/MWh-yr (independent_energy sizing)
  double energy_fom_cost = 0.0; // $/MWh-yr
  double existing_energy_cap = 0.0;

  std::set<std::string> qualifies_for;

  double cap_factor_at(int t) const { return cap_factor.empty() ? 1.0 : cap_factor[t]; }
  double effective_unit_size() const;
  bool is_storage() const { return kind == ResourceKind::storage; }
  bool is_uc() const { return kind == ResourceKind::thermal_uc; }
};

struct TransmissionLine {
  std::string id;
  std::string from_zone;
  std::string to_zone;
  double existing_cap = 0.0;
  double max_new_cap = 0.0;  // negative means unlimited
  double inv_cost = 0.0;     // $/MW-yr
};

enum class PolicyKind { co2_cap_zonal, co2_cap_system, energy_standard_zonal, energy_standard_system };

struct PolicySpec {
  std::string id;  // standard id for energy-standard kinds
  PolicyKind kind = PolicyKind::co2_cap_system;
  // t/MWh per zone for CO2 kinds, required fraction per zone for standards.
  std::map<std::string, double> zone_values;

  bool is_co2() const { return kind == PolicyKind::co2_cap_zonal || kind == PolicyKind::co2_cap_system; }
  bool is_zonal() const { return kind == PolicyKind::co2_cap_zonal || kind == PolicyKind::energy_standard_zonal; }
};

/// Portion of a zone's load that may be served up to max_delay hours late.
struct DeferrableLoad {
  std::string id;
  std::string zone;
  std::vector<double> base_profile;  // MW, included in the zone load
  double defer_fraction = 0.0;
  int max_delay = 1;
};

struct DemandSinkSpec {
  double capex = 0.0;  // $/kW-input
  FinanceSpec finance;
  double annuity = 0.0;  // $/MW-yr, annualized_capex(capex, finance)
  std::vector<std::string> allowed_zones;
};

enum class StorageSizing { fixed_ratio, independent_energy };

struct Scenario {
  std::string name = "scenario";
  TimeStructure time;
  double voll = 50000.0;  // $/MWh
  std::vector<Zone> zones;
  std::vector<TransmissionLine> lines;
  std::vector<ResourceCluster> clusters;
  std::vector<PolicySpec> policies;
  std::vector<DeferrableLoad> deferrable_loads;
  std::optional<DemandSinkSpec> sink;
  std::vector<MarketSegment> segments;
  StorageSizing storage_sizing = StorageSizing::fixed_ratio;

  /// Index of the zone with this id, or -1.
  int zone_index(std::string_view id) const;
  /// Scenario with the demand sink and its market removed.
  Scenario without_sink() const;
};

struct Violation {
  std::string entity;  // e.g. "cluster ocgt"
  std::string field;
  std::string rule;

  std::string to_string() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every broken invariant; empty iff the scenario is well formed.
std::vector<Violation> validate(const Scenario& scenario);

/// Throws Error listing the violations, if any.
void require_valid(const Scenario& scenario);

/// Largest hourly sum of zonal loads (MW).
double peak_load(const Scenario& scenario);

/// hour_weight times the total load over all zones and hours (MWh).
double annual_load(const Scenario& scenario);

std::string_view to_string(ResourceKind kind);
std::string_view to_string(PolicyKind kind);
std::string_view to_string(StorageSizing mode);
std::optional<ResourceKind> parse_resource_kind(std::string_view text);
std::optional<PolicyKind> parse_policy_kind(std::string_view text);
std::optional<StorageSizing> parse_storage_sizing(std::string_view text);

/// Model parameter symbol and the Scenario field that carries it.
struct ParameterSymbol {
  std::string_view symbol;
  std::string_view field;
};

/// Mapping of every formulation parameter onto the scenario fields.
const std::vector<ParameterSymbol>& parameter_symbols();

}  // namespace sinkplan
