#pragma once

// Scenario builders and checks shared by the unit suites and the acceptance
// runner.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sinkplan/certify.hpp"
#include "sinkplan/formulation.hpp"
#include "sinkplan/model.hpp"
#include "sinkplan/simplex.hpp"
#include "sinkplan/sweep.hpp"

namespace sinkplan::test {

/// configs/<name> in the source tree.
std::filesystem::path config_dir(const std::string& name);
/// tests/golden/<name> in the source tree.
std::filesystem::path golden_path(const std::string& name);
std::string read_file(const std::filesystem::path& path);

/// |a - b| / max(1, |a|, |b|).
double rel_diff(double a, double b);

/// One zone "Z1" with a single full-size curtailment segment.
Scenario single_zone(std::vector<double> load, double hour_weight = 1.0);

ResourceCluster dispatchable(const std::string& id, const std::string& zone, double inv_cost, double marginal_cost);
ResourceCluster vre(const std::string& id, const std::string& zone, double inv_cost, std::vector<double> cap_factor);
ResourceCluster battery(const std::string& id, const std::string& zone, double inv_cost, double duration = 4.0);
ResourceCluster thermal_uc(const std::string& id, const std::string& zone, double unit_size, double inv_cost,
                           double marginal_cost, double start_cost);

/// Adds a sink in every listed zone (all zones when empty) with a market
/// from build_demand_curve at `base_price`.
Scenario with_sink(Scenario s, double capex, double base_price, double segment_fraction = 0.05,
                   std::vector<std::string> zones = {});

struct RandomOptions {
  int max_zones = 2;
  int max_hours = 24;
  int max_clusters = 4;
  bool allow_sink = true;
  bool force_sink = false;
  bool force_storage = false;
  std::size_t max_cols = 200;
};

/// Small random but always feasible scenario; deterministic in `seed`.
Scenario random_scenario(std::uint64_t seed, const RandomOptions& options = {});

/// Cyclic shift of every hourly series by k hours (series[t] moves to t + k).
Scenario rotate(const Scenario& s, int k);

/// Scenario with every market segment value increased by `shift`.
Scenario shift_values(Scenario s, double shift);

/// Solve outcome plus the checks every solve in the suites must pass.
struct Checked {
  Run run;
  bool certified = false;
  std::string detail;
};
Checked solve_checked(const Scenario& s, const SolveOptions& options = {});

/// Sum of supply columns (MWh sold into the market).
double sold(const Formulation& f, const Solution& sol);
/// Sum of sink capacity columns (MW).
double sink_capacity(const Formulation& f, const Solution& sol);

/// Result of an invariant check on one instance.
struct CheckResult {
  bool ok = true;
  std::string detail;
};

/// Optimal objective unchanged under a cyclic shift of the series by k hours.
CheckResult check_rotation(const Scenario& s, int k, double tolerance = 1e-6);
/// Storage levels close the cycle: per storage cluster, the net energy taken
/// in over the horizon equals the losses, and every soc row holds at the seam.
CheckResult check_storage_wrap(const Scenario& s, const Run& run, double tolerance = 1e-6);
/// All-zero segment values give zero sink capacity and the no-sink objective.
CheckResult check_zero_value_sink(const Scenario& s);
/// Used segments form a prefix of the descending-value order.
CheckResult check_prefix(const Scenario& s, const Run& run, double tolerance = 1e-6);
/// Uniform value shift up never lowers sold quantity.
CheckResult check_value_monotonicity(const Scenario& s, double shift);
/// Higher sink annuity never raises installed sink capacity.
CheckResult check_capex_monotonicity(const Scenario& s, double capex_low, double capex_high);

/// Every LP the suites build round-trips through free MPS exactly.
bool mps_round_trips(const LinearProgram& lp);

}  // namespace sinkplan::test
