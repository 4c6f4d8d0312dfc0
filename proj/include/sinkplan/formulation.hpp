#pragma once

// Scenario -> LinearProgram translation. Columns are laid out in contiguous
// blocks (see VariableMap); every per-hour block is ordered by entity, then by
// flattened hour t = w*H + h, and the chronological predecessor of t is
// (t - 1) mod T, so the first hour of the horizon follows the last one.

#include <cstddef>
#include <string>
#include <vector>

#include "sinkplan/lp.hpp"
#include "sinkplan/model.hpp"

namespace sinkplan {

struct ColumnRange {
  std::size_t begin = 0;
  std::size_t count = 0;

  std::size_t end() const { return begin + count; }
  bool contains(std::size_t col) const { return col >= begin && col < end(); }
  friend bool operator==(const ColumnRange&, const ColumnRange&) = default;
};

struct VariableMap {
  std::size_t hours = 0;

  ColumnRange cap_new;       // y^P+ per cluster (units)
  ColumnRange cap_retired;   // y^P- per cluster (units)
  ColumnRange cap_total;     // y^P-sum per cluster (MW)
  ColumnRange energy_new;    // per storage cluster, independent_energy sizing only (MWh)
  ColumnRange energy_total;
  ColumnRange line_new;      // y^F+ per line
  ColumnRange line_total;    // y^F-sum per line
  ColumnRange inj;           // cluster x hour
  ColumnRange wdw;           // storage x hour
  ColumnRange lvl;           // storage x hour
  ColumnRange nse;           // zone x segment x hour
  ColumnRange flow;          // line x hour
  ColumnRange commit;        // uc cluster x hour
  ColumnRange start;
  ColumnRange shut;
  ColumnRange sink_cap;      // y^DS per allowed zone
  ColumnRange prod;          // allowed zone x hour
  ColumnRange supply;        // per market segment
  ColumnRange defer_out;     // deferrable load x hour
  ColumnRange defer_in;
  ColumnRange defer_lvl;

  std::vector<int> storage_slot;  // per cluster, -1 when not storage
  std::vector<int> uc_slot;       // per cluster, -1 when not thermal_uc
  std::vector<int> sink_slot;     // per zone, -1 when no sink allowed there
  std::vector<std::size_t> nse_offset;  // per zone, offset into nse block
  bool independent_energy = false;
  std::size_t n_cols = 0;

  std::size_t col_inj(std::size_t g, std::size_t t) const { return inj.begin + g * hours + t; }
  std::size_t col_wdw(std::size_t g, std::size_t t) const { return wdw.begin + slot(storage_slot, g) * hours + t; }
  std::size_t col_lvl(std::size_t g, std::size_t t) const { return lvl.begin + slot(storage_slot, g) * hours + t; }
  std::size_t col_nse(std::size_t z, std::size_t s, std::size_t t) const {
    return nse.begin + nse_offset[z] + s * hours + t;
  }
  std::size_t col_flow(std::size_t l, std::size_t t) const { return flow.begin + l * hours + t; }
  std::size_t col_commit(std::size_t g, std::size_t t) const { return commit.begin + slot(uc_slot, g) * hours + t; }
  std::size_t col_start(std::size_t g, std::size_t t) const { return start.begin + slot(uc_slot, g) * hours + t; }
  std::size_t col_shut(std::size_t g, std::size_t t) const { return shut.begin + slot(uc_slot, g) * hours + t; }
  std::size_t col_energy_new(std::size_t g) const { return energy_new.begin + slot(storage_slot, g); }
  std::size_t col_energy_total(std::size_t g) const { return energy_total.begin + slot(storage_slot, g); }
  std::size_t col_sink_cap(std::size_t z) const { return sink_cap.begin + slot(sink_slot, z); }
  std::size_t col_prod(std::size_t z, std::size_t t) const { return prod.begin + slot(sink_slot, z) * hours + t; }
  std::size_t col_defer_out(std::size_t d, std::size_t t) const { return defer_out.begin + d * hours + t; }
  std::size_t col_defer_in(std::size_t d, std::size_t t) const { return defer_in.begin + d * hours + t; }
  std::size_t col_defer_lvl(std::size_t d, std::size_t t) const { return defer_lvl.begin + d * hours + t; }

  /// All blocks in column order.
  std::vector<std::pair<std::string, ColumnRange>> blocks() const;

  friend bool operator==(const VariableMap&, const VariableMap&) = default;

 private:
  static std::size_t slot(const std::vector<int>& table, std::size_t i);
};

/// Row indices of the constraint groups that later stages read back.
struct RowMap {
  std::vector<std::size_t> balance;  // zone x hour, demand balance rows
  std::size_t sink_total = LinearProgram::npos;
};

struct Formulation {
  VariableMap vars;
  RowMap rows;
  LinearProgram lp;
};

VariableMap index_variables(const Scenario& scenario);

/// Column names and bounds for every variable in `vars`; objective left at zero.
void add_columns(const Scenario& scenario, const VariableMap& vars, LinearProgram& lp);

std::vector<double> build_objective(const Scenario& scenario, const VariableMap& vars);

/// Each builder appends its rows and returns their indices in creation order.
std::vector<std::size_t> add_demand_balance(const Scenario&, const VariableMap&, LinearProgram&);
std::vector<std::size_t> add_policy_constraints(const Scenario&, const VariableMap&, LinearProgram&);
std::vector<std::size_t> add_investment_constraints(const Scenario&, const VariableMap&, LinearProgram&);
std::vector<std::size_t> add_dispatch_constraints(const Scenario&, const VariableMap&, LinearProgram&);
std::vector<std::size_t> add_storage_constraints(const Scenario&, const VariableMap&, LinearProgram&);
std::vector<std::size_t> add_transmission_constraints(const Scenario&, const VariableMap&, LinearProgram&);
std::vector<std::size_t> add_uc_constraints(const Scenario&, const VariableMap&, LinearProgram&);
std::vector<std::size_t> add_demand_sink_constraints(const Scenario&, const VariableMap&, LinearProgram&);
std::vector<std::size_t> add_deferrable_load_constraints(const Scenario&, const VariableMap&, LinearProgram&);

/// Validates, indexes and builds the full program.
Formulation assemble(const Scenario& scenario);

/// min(cap_factor, max(min_stable, ramp)): output change allowed for a unit
/// that starts (ramp = ramp_up) or shuts down (ramp = ramp_down) in one hour.
double uc_transition_factor(double cap_factor, double min_stable, double ramp);

/// Chronological predecessor of flattened hour t with wrap-around.
inline std::size_t prev_hour(std::size_t t, std::size_t hours) { return (t + hours - 1) % hours; }

/// "h<h>,w<w>" label for flattened hour t (1-based h and w).
std::string hour_label(const TimeStructure& time, std::size_t t);

}  // namespace sinkplan
