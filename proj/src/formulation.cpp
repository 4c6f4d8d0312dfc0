#include "sinkplan/formulation.hpp"

#include <algorithm>
#include <cmath>

#include "sinkplan/error.hpp"

namespace sinkplan {

namespace {

using Entries = std::vector<std::pair<std::size_t, double>>;

std::size_t as_size(int v) { return static_cast<std::size_t>(v); }

ColumnRange take(std::size_t& cursor, std::size_t count) {
  ColumnRange r{cursor, count};
  cursor += count;
  return r;
}

void push_row(std::vector<std::size_t>& rows, LinearProgram& lp, std::string name, RowSense sense, double rhs,
              Entries entries) {
  const std::size_t r = lp.add_row(std::move(name), sense, rhs, std::move(entries));
  if (r != LinearProgram::npos) rows.push_back(r);
}

std::size_t zone_of(const Scenario& s, const std::string& id, const std::string& who) {
  const int z = s.zone_index(id);
  if (z < 0) throw Error(who + " references unknown zone '" + id + "'");
  return as_size(z);
}

}  // namespace

std::size_t VariableMap::slot(const std::vector<int>& table, std::size_t i) {
  if (i >= table.size() || table[i] < 0) throw Error("variable map: entity has no such variable block");
  return as_size(table[i]);
}

std::vector<std::pair<std::string, ColumnRange>> VariableMap::blocks() const {
  return {{"yP+", cap_new},     {"yP-", cap_retired}, {"yPsum", cap_total},   {"yE+", energy_new},
          {"yEsum", energy_total}, {"yF+", line_new},  {"yFsum", line_total},  {"xinj", inj},
          {"xwdw", wdw},        {"xlvl", lvl},        {"xnse", nse},          {"xflow", flow},
          {"xcommit", commit},  {"xstart", start},    {"xshut", shut},        {"yDS", sink_cap},
          {"xprod", prod},      {"xsupply", supply},  {"xdefout", defer_out}, {"xdefin", defer_in},
          {"xdeflvl", defer_lvl}};
}

std::string hour_label(const TimeStructure& time, std::size_t t) {
  const auto H = as_size(time.hours_per_sub_period);
  return "h" + std::to_string(t % H + 1) + ",w" + std::to_string(t / H + 1);
}

double uc_transition_factor(double cap_factor, double min_stable, double ramp) {
  return std::min(cap_factor, std::max(min_stable, ramp));
}

VariableMap index_variables(const Scenario& s) {
  VariableMap v;
  const std::size_t T = as_size(s.time.total_hours());
  const std::size_t G = s.clusters.size();
  v.hours = T;
  v.independent_energy = s.storage_sizing == StorageSizing::independent_energy;

  v.storage_slot.assign(G, -1);
  v.uc_slot.assign(G, -1);
  int n_storage = 0, n_uc = 0;
  for (std::size_t g = 0; g < G; ++g) {
    if (s.clusters[g].is_storage()) v.storage_slot[g] = n_storage++;
    if (s.clusters[g].is_uc()) v.uc_slot[g] = n_uc++;
  }
  v.sink_slot.assign(s.zones.size(), -1);
  int n_sink = 0;
  if (s.sink)
    for (const auto& id : s.sink->allowed_zones) {
      const int z = s.zone_index(id);
      if (z >= 0 && v.sink_slot[as_size(z)] < 0) v.sink_slot[as_size(z)] = n_sink++;
    }
  std::size_t nse_count = 0;
  v.nse_offset.resize(s.zones.size());
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    v.nse_offset[z] = nse_count;
    nse_count += s.zones[z].nse_segments.size() * T;
  }

  const auto S = as_size(n_storage), U = as_size(n_uc), L = s.lines.size(), D = s.deferrable_loads.size();
  std::size_t c = 0;
  v.cap_new = take(c, G);
  v.cap_retired = take(c, G);
  v.cap_total = take(c, G);
  v.energy_new = take(c, v.independent_energy ? S : 0);
  v.energy_total = take(c, v.independent_energy ? S : 0);
  v.line_new = take(c, L);
  v.line_total = take(c, L);
  v.inj = take(c, G * T);
  v.wdw = take(c, S * T);
  v.lvl = take(c, S * T);
  v.nse = take(c, nse_count);
  v.flow = take(c, L * T);
  v.commit = take(c, U * T);
  v.start = take(c, U * T);
  v.shut = take(c, U * T);
  v.sink_cap = take(c, as_size(n_sink));
  v.prod = take(c, as_size(n_sink) * T);
  v.supply = take(c, s.sink ? s.segments.size() : 0);
  v.defer_out = take(c, D * T);
  v.defer_in = take(c, D * T);
  v.defer_lvl = take(c, D * T);
  v.n_cols = c;
  return v;
}

void add_columns(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  const std::size_t T = v.hours;
  lp.objective.assign(v.n_cols, 0.0);
  lp.col_lower.assign(v.n_cols, 0.0);
  lp.col_upper.assign(v.n_cols, kInf);
  lp.col_names.assign(v.n_cols, std::string());
  auto name = [&](std::size_t col, std::string text) { lp.col_names[col] = std::move(text); };
  auto hl = [&](std::size_t t) { return hour_label(s.time, t); };

  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& c = s.clusters[g];
    const double unit = c.effective_unit_size();
    name(v.cap_new.begin + g, "yP+[" + c.id + "]");
    name(v.cap_retired.begin + g, "yP-[" + c.id + "]");
    name(v.cap_total.begin + g, "yPsum[" + c.id + "]");
    lp.col_upper[v.cap_new.begin + g] = c.max_new_cap < 0 ? kInf : c.max_new_cap / unit;
    lp.col_upper[v.cap_retired.begin + g] = c.existing_cap / unit;
    for (std::size_t t = 0; t < T; ++t) name(v.col_inj(g, t), "xinj[" + c.id + "," + hl(t) + "]");
    if (c.is_storage()) {
      if (v.independent_energy) {
        name(v.col_energy_new(g), "yE+[" + c.id + "]");
        name(v.col_energy_total(g), "yEsum[" + c.id + "]");
      }
      for (std::size_t t = 0; t < T; ++t) {
        name(v.col_wdw(g, t), "xwdw[" + c.id + "," + hl(t) + "]");
        name(v.col_lvl(g, t), "xlvl[" + c.id + "," + hl(t) + "]");
      }
    }
    if (c.is_uc())
      for (std::size_t t = 0; t < T; ++t) {
        name(v.col_commit(g, t), "xcommit[" + c.id + "," + hl(t) + "]");
        name(v.col_start(g, t), "xstart[" + c.id + "," + hl(t) + "]");
        name(v.col_shut(g, t), "xshut[" + c.id + "," + hl(t) + "]");
      }
  }
  for (std::size_t l = 0; l < s.lines.size(); ++l) {
    const auto& line = s.lines[l];
    name(v.line_new.begin + l, "yF+[" + line.id + "]");
    name(v.line_total.begin + l, "yFsum[" + line.id + "]");
    lp.col_upper[v.line_new.begin + l] = line.max_new_cap < 0 ? kInf : line.max_new_cap;
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t col = v.col_flow(l, t);
      name(col, "xflow[" + line.id + "," + hl(t) + "]");
      lp.col_lower[col] = -kInf;
    }
  }
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    const auto& zone = s.zones[z];
    for (std::size_t k = 0; k < zone.nse_segments.size(); ++k)
      for (std::size_t t = 0; t < T; ++t) {
        const std::size_t col = v.col_nse(z, k, t);
        name(col, "xnse[" + zone.id + ",s" + std::to_string(k + 1) + "," + hl(t) + "]");
        lp.col_upper[col] = zone.nse_segments[k].size_fraction * zone.load[t];
      }
    if (v.sink_slot[z] >= 0) {
      name(v.col_sink_cap(z), "yDS[" + zone.id + "]");
      for (std::size_t t = 0; t < T; ++t) name(v.col_prod(z, t), "xprod[" + zone.id + "," + hl(t) + "]");
    }
  }
  for (std::size_t q = 0; q < v.supply.count; ++q) {
    name(v.supply.begin + q, "xsupply[q" + std::to_string(q + 1) + "]");
    lp.col_upper[v.supply.begin + q] = s.segments[q].max_supply;
  }
  for (std::size_t d = 0; d < s.deferrable_loads.size(); ++d) {
    const auto& dl = s.deferrable_loads[d];
    const bool frozen = dl.defer_fraction == 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      name(v.col_defer_out(d, t), "xdefout[" + dl.id + "," + hl(t) + "]");
      name(v.col_defer_in(d, t), "xdefin[" + dl.id + "," + hl(t) + "]");
      name(v.col_defer_lvl(d, t), "xdeflvl[" + dl.id + "," + hl(t) + "]");
      lp.col_upper[v.col_defer_out(d, t)] = dl.defer_fraction * dl.base_profile[t];
      if (frozen) {
        lp.col_upper[v.col_defer_in(d, t)] = 0.0;
        lp.col_upper[v.col_defer_lvl(d, t)] = 0.0;
      }
    }
  }
}

std::vector<double> build_objective(const Scenario& s, const VariableMap& v) {
  std::vector<double> c(v.n_cols, 0.0);
  const double hw = s.time.hour_weight;
  const std::size_t T = v.hours;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& r = s.clusters[g];
    c[v.cap_new.begin + g] = r.inv_cost * r.effective_unit_size();
    c[v.cap_total.begin + g] = r.fom_cost;
    for (std::size_t t = 0; t < T; ++t) c[v.col_inj(g, t)] = (r.vom_cost + r.fuel_cost) * hw;
    if (r.is_storage()) {
      for (std::size_t t = 0; t < T; ++t) c[v.col_wdw(g, t)] = r.vom_cost * hw;
      if (v.independent_energy) {
        c[v.col_energy_new(g)] = r.energy_inv_cost;
        c[v.col_energy_total(g)] = r.energy_fom_cost;
      }
    }
    if (r.is_uc())
      for (std::size_t t = 0; t < T; ++t) c[v.col_start(g, t)] = r.start_cost * hw;
  }
  for (std::size_t l = 0; l < s.lines.size(); ++l) c[v.line_new.begin + l] = s.lines[l].inv_cost;
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    const auto& zone = s.zones[z];
    for (std::size_t k = 0; k < zone.nse_segments.size(); ++k)
      for (std::size_t t = 0; t < T; ++t)
        c[v.col_nse(z, k, t)] = zone.nse_segments[k].slope_fraction * s.voll * hw;
    if (v.sink_slot[z] >= 0) c[v.col_sink_cap(z)] = s.sink->annuity;
  }
  for (std::size_t q = 0; q < v.supply.count; ++q) c[v.supply.begin + q] = -s.segments[q].value;
  return c;
}

std::vector<std::size_t> add_demand_balance(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  const std::size_t T = v.hours;
  std::vector<std::vector<std::size_t>> zone_clusters(s.zones.size());
  for (std::size_t g = 0; g < s.clusters.size(); ++g)
    zone_clusters[zone_of(s, s.clusters[g].zone, "cluster " + s.clusters[g].id)].push_back(g);
  std::vector<std::size_t> rows;
  rows.reserve(s.zones.size() * T);
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    const auto& zone = s.zones[z];
    for (std::size_t t = 0; t < T; ++t) {
      Entries e;
      for (std::size_t g : zone_clusters[z]) {
        e.emplace_back(v.col_inj(g, t), 1.0);
        if (s.clusters[g].is_storage()) e.emplace_back(v.col_wdw(g, t), -1.0);
      }
      for (std::size_t k = 0; k < zone.nse_segments.size(); ++k) e.emplace_back(v.col_nse(z, k, t), 1.0);
      for (std::size_t l = 0; l < s.lines.size(); ++l) {
        // -phi * flow with phi = +1 leaving, -1 arriving
        if (s.lines[l].from_zone == zone.id) e.emplace_back(v.col_flow(l, t), -1.0);
        if (s.lines[l].to_zone == zone.id) e.emplace_back(v.col_flow(l, t), 1.0);
      }
      for (std::size_t d = 0; d < s.deferrable_loads.size(); ++d) {
        if (s.deferrable_loads[d].zone != zone.id) continue;
        e.emplace_back(v.col_defer_out(d, t), 1.0);
        e.emplace_back(v.col_defer_in(d, t), -1.0);
      }
      if (v.sink_slot[z] >= 0) e.emplace_back(v.col_prod(z, t), -1.0);
      const std::size_t r =
          lp.add_row("bal[" + zone.id + "," + hour_label(s.time, t) + "]", RowSense::eq, zone.load[t], std::move(e));
      if (r == LinearProgram::npos) throw Error("zone " + zone.id + " has no way to meet its load");
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<std::size_t> add_policy_constraints(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  const std::size_t T = v.hours;
  const double hw = s.time.hour_weight;
  std::vector<std::size_t> rows;

  // Appends zone z's share: lhs activity minus value * (demand + storage losses).
  auto add_zone_terms = [&](const PolicySpec& p, std::size_t z, double value, Entries& e, double& rhs) {
    const auto& zone = s.zones[z];
    for (std::size_t g = 0; g < s.clusters.size(); ++g) {
      const auto& c = s.clusters[g];
      if (c.zone != zone.id) continue;
      const double weight = p.is_co2() ? c.emissions_rate : (c.qualifies_for.count(p.id) ? 1.0 : 0.0);
      for (std::size_t t = 0; t < T; ++t) {
        if (weight != 0.0) e.emplace_back(v.col_inj(g, t), hw * weight);
        if (c.is_storage() && value != 0.0) {
          e.emplace_back(v.col_wdw(g, t), -value * hw);
          e.emplace_back(v.col_inj(g, t), value * hw);
        }
      }
    }
    double demand = 0;
    for (std::size_t t = 0; t < T; ++t) demand += zone.load[t];
    rhs += value * hw * demand;
  };

  for (std::size_t k = 0; k < s.policies.size(); ++k) {
    const auto& p = s.policies[k];
    const std::string tag = p.id.empty() ? std::to_string(k + 1) : p.id;
    for (const auto& [zone, value] : p.zone_values) {
      (void)value;
      zone_of(s, zone, "policy " + tag);
    }
    const RowSense sense = p.is_co2() ? RowSense::le : RowSense::ge;
    const std::string prefix = p.is_co2() ? "co2" : "std";
    if (p.is_zonal()) {
      for (const auto& [zone, value] : p.zone_values) {
        Entries e;
        double rhs = 0;
        add_zone_terms(p, zone_of(s, zone, "policy " + tag), value, e, rhs);
        push_row(rows, lp, prefix + "[" + tag + "," + zone + "]", sense, rhs, std::move(e));
      }
    } else {
      Entries e;
      double rhs = 0;
      for (std::size_t z = 0; z < s.zones.size(); ++z) {
        const auto it = p.zone_values.find(s.zones[z].id);
        add_zone_terms(p, z, it == p.zone_values.end() ? 0.0 : it->second, e, rhs);
      }
      push_row(rows, lp, prefix + "[" + tag + "]", sense, rhs, std::move(e));
    }
  }
  return rows;
}

std::vector<std::size_t> add_investment_constraints(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  std::vector<std::size_t> rows;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& c = s.clusters[g];
    const double unit = c.effective_unit_size();
    push_row(rows, lp, "captot[" + c.id + "]", RowSense::eq, c.existing_cap,
             {{v.cap_total.begin + g, 1.0}, {v.cap_new.begin + g, -unit}, {v.cap_retired.begin + g, unit}});
    if (c.is_storage() && v.independent_energy)
      push_row(rows, lp, "energytot[" + c.id + "]", RowSense::eq, c.existing_energy_cap,
               {{v.col_energy_total(g), 1.0}, {v.col_energy_new(g), -1.0}});
  }
  for (std::size_t l = 0; l < s.lines.size(); ++l)
    push_row(rows, lp, "linetot[" + s.lines[l].id + "]", RowSense::eq, s.lines[l].existing_cap,
             {{v.line_total.begin + l, 1.0}, {v.line_new.begin + l, -1.0}});
  return rows;
}

std::vector<std::size_t> add_dispatch_constraints(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  const std::size_t T = v.hours;
  std::vector<std::size_t> rows;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& c = s.clusters[g];
    if (c.is_uc()) continue;
    const std::size_t cap = v.cap_total.begin + g;
    for (std::size_t t = 0; t < T; ++t) {
      const std::string at = "[" + c.id + "," + hour_label(s.time, t) + "]";
      const std::size_t x = v.col_inj(g, t), xp = v.col_inj(g, prev_hour(t, T));
      if (c.ramp_down < 1.0)
        push_row(rows, lp, "rampdn" + at, RowSense::le, 0.0, {{xp, 1.0}, {x, -1.0}, {cap, -c.ramp_down}});
      if (c.ramp_up < 1.0)
        push_row(rows, lp, "rampup" + at, RowSense::le, 0.0, {{x, 1.0}, {xp, -1.0}, {cap, -c.ramp_up}});
      if (c.min_stable > 0.0) push_row(rows, lp, "minout" + at, RowSense::ge, 0.0, {{x, 1.0}, {cap, -c.min_stable}});
      push_row(rows, lp, "maxout" + at, RowSense::le, 0.0, {{x, 1.0}, {cap, -c.cap_factor_at(static_cast<int>(t))}});
      if (c.is_storage()) push_row(rows, lp, "maxwdw" + at, RowSense::le, 0.0, {{v.col_wdw(g, t), 1.0}, {cap, -1.0}});
    }
  }
  return rows;
}

std::vector<std::size_t> add_storage_constraints(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  const std::size_t T = v.hours;
  std::vector<std::size_t> rows;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& c = s.clusters[g];
    if (!c.is_storage()) continue;
    const std::size_t cap = v.cap_total.begin + g;
    // Energy capacity as (column, coefficient): delta * y^P-sum or y^E-sum.
    const std::pair<std::size_t, double> energy =
        v.independent_energy ? std::pair{v.col_energy_total(g), 1.0} : std::pair{cap, c.duration};
    for (std::size_t t = 0; t < T; ++t) {
      const std::string at = "[" + c.id + "," + hour_label(s.time, t) + "]";
      const std::size_t inj = v.col_inj(g, t), wdw = v.col_wdw(g, t), lvl = v.col_lvl(g, t);
      const std::size_t lvl_next = v.col_lvl(g, (t + 1) % T);
      // eta+ wdw - inj / eta- - eta0 lvl - (lvl_next - lvl) = 0
      push_row(rows, lp, "soc" + at, RowSense::eq, 0.0,
               {{wdw, c.charge_eff},
                {inj, -1.0 / c.discharge_eff},
                {lvl, 1.0 - c.self_discharge},
                {lvl_next, -1.0}});
      push_row(rows, lp, "maxlvl" + at, RowSense::le, 0.0, {{lvl, 1.0}, {energy.first, -energy.second}});
      push_row(rows, lp, "dislim" + at, RowSense::le, 0.0, {{inj, 1.0}, {lvl, -c.discharge_eff}});
      push_row(rows, lp, "chglim" + at, RowSense::le, 0.0, {{wdw, 1.0}, {lvl, 1.0}, {energy.first, -energy.second}});
      push_row(rows, lp, "simult" + at, RowSense::le, 0.0, {{inj, 1.0}, {wdw, 1.0}, {cap, -1.0}});
    }
  }
  return rows;
}

std::vector<std::size_t> add_transmission_constraints(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  const std::size_t T = v.hours;
  std::vector<std::size_t> rows;
  for (std::size_t l = 0; l < s.lines.size(); ++l) {
    const std::size_t cap = v.line_total.begin + l;
    for (std::size_t t = 0; t < T; ++t) {
      const std::string at = "[" + s.lines[l].id + "," + hour_label(s.time, t) + "]";
      push_row(rows, lp, "flowfwd" + at, RowSense::le, 0.0, {{v.col_flow(l, t), 1.0}, {cap, -1.0}});
      push_row(rows, lp, "flowrev" + at, RowSense::le, 0.0, {{v.col_flow(l, t), -1.0}, {cap, -1.0}});
    }
  }
  return rows;
}

std::vector<std::size_t> add_uc_constraints(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  const std::size_t T = v.hours;
  std::vector<std::size_t> rows;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& c = s.clusters[g];
    if (!c.is_uc()) continue;
    if (as_size(c.min_up) >= T || as_size(c.min_down) >= T)
      throw Error("cluster " + c.id + ": minimum up/down time must be shorter than the " + std::to_string(T) +
                  "-hour horizon");
    const double unit = c.unit_size;
    const double units_per_mw = 1.0 / unit;
    const std::size_t cap = v.cap_total.begin + g;
    for (std::size_t t = 0; t < T; ++t) {
      const std::string at = "[" + c.id + "," + hour_label(s.time, t) + "]";
      const std::size_t tp = prev_hour(t, T);
      const std::size_t x = v.col_inj(g, t), xp = v.col_inj(g, tp);
      const std::size_t on = v.col_commit(g, t), up = v.col_start(g, t), dn = v.col_shut(g, t);
      const double cf = c.cap_factor_at(static_cast<int>(t));

      push_row(rows, lp, "maxcommit" + at, RowSense::le, 0.0, {{on, 1.0}, {cap, -units_per_mw}});
      push_row(rows, lp, "maxstart" + at, RowSense::le, 0.0, {{up, 1.0}, {cap, -units_per_mw}});
      push_row(rows, lp, "maxshut" + at, RowSense::le, 0.0, {{dn, 1.0}, {cap, -units_per_mw}});

      const double dn_factor = uc_transition_factor(cf, c.min_stable, c.ramp_down);
      push_row(rows, lp, "ucrampdn" + at, RowSense::le, 0.0,
               {{xp, 1.0},
                {x, -1.0},
                {on, -c.ramp_down * unit},
                {up, c.ramp_down * unit + unit * c.min_stable},
                {dn, -unit * dn_factor}});
      const double up_factor = uc_transition_factor(cf, c.min_stable, c.ramp_up);
      push_row(rows, lp, "ucrampup" + at, RowSense::le, 0.0,
               {{x, 1.0},
                {xp, -1.0},
                {on, -c.ramp_up * unit},
                {up, c.ramp_up * unit - unit * up_factor},
                {dn, unit * c.min_stable}});
      if (c.min_stable > 0.0)
        push_row(rows, lp, "ucminout" + at, RowSense::ge, 0.0, {{x, 1.0}, {on, -unit * c.min_stable}});
      push_row(rows, lp, "ucmaxout" + at, RowSense::le, 0.0, {{x, 1.0}, {on, -unit * cf}});
      push_row(rows, lp, "ucstate" + at, RowSense::eq, 0.0,
               {{on, 1.0}, {v.col_commit(g, tp), -1.0}, {up, -1.0}, {dn, 1.0}});
      if (c.min_down > 0) {
        Entries e{{cap, units_per_mw}, {on, -1.0}};
        for (int k = 0; k < c.min_down; ++k) e.emplace_back(v.col_shut(g, (t + T - as_size(k)) % T), -1.0);
        push_row(rows, lp, "mindown" + at, RowSense::ge, 0.0, std::move(e));
      }
      if (c.min_up > 0) {
        Entries e{{on, 1.0}};
        for (int k = 0; k < c.min_up; ++k) e.emplace_back(v.col_start(g, (t + T - as_size(k)) % T), -1.0);
        push_row(rows, lp, "minup" + at, RowSense::ge, 0.0, std::move(e));
      }
    }
  }
  return rows;
}

std::vector<std::size_t> add_demand_sink_constraints(const Scenario& s, const VariableMap& v, LinearProgram& lp) {
  std::vector<std::size_t> rows;
  if (!s.sink) return rows;
  const std::size_t T = v.hours;
  Entries total;
  for (std::size_t q = 0; q < v.supply.count; ++q) total.emplace_back(v.supply.begin + q, 1.0);
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    if (v.sink_slot[z] < 0) continue;
    for (std::size_t t = 0; t < T; ++t) total.emplace_back(v.col_prod(z, t), -s.time.hour_weight);
  }
  push_row(rows, lp, "sinksupply", RowSense::le, 0.0, std::move(total));
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    if (v.sink_slot[z] < 0) continue;
    for (std::size_t t = 0; t < T; ++t)
      push_row(rows, lp, "sinkcap[" + s.zones[z].id + "," + hour_label(s.time, t) + "]", RowSense::le, 0.0,
               {{v.col_prod(z, t), 1.0}, {v.col_sink_cap(z), -1.0}});
  }
  return rows;
}

std::vector<std::size_t> add_deferrable_load_constraints(const Scenario& s, const VariableMap& v,
                                                         LinearProgram& lp) {
  const std::size_t T = v.hours;
  std::vector<std::size_t> rows;
  for (std::size_t d = 0; d < s.deferrable_loads.size(); ++d) {
    const auto& dl = s.deferrable_loads[d];
    for (std::size_t t = 0; t < T; ++t) {
      const std::string at = "[" + dl.id + "," + hour_label(s.time, t) + "]";
      // Backlog of deferred energy: lvl_t = lvl_{t-1} + out_t - in_t.
      push_row(rows, lp, "defbal" + at, RowSense::eq, 0.0,
               {{v.col_defer_lvl(d, t), 1.0},
                {v.col_defer_lvl(d, prev_hour(t, T)), -1.0},
                {v.col_defer_out(d, t), -1.0},
                {v.col_defer_in(d, t), 1.0}});
      // Backlog at the end of hour t is served within the next max_delay hours.
      Entries e{{v.col_defer_lvl(d, t), -1.0}};
      for (int k = 1; k <= dl.max_delay; ++k) e.emplace_back(v.col_defer_in(d, (t + as_size(k)) % T), 1.0);
      push_row(rows, lp, "defdelay" + at, RowSense::ge, 0.0, std::move(e));
    }
  }
  return rows;
}

Formulation assemble(const Scenario& s) {
  require_valid(s);
  Formulation f;
  f.vars = index_variables(s);
  f.lp.name = s.name;
  add_columns(s, f.vars, f.lp);
  f.lp.objective = build_objective(s, f.vars);
  f.rows.balance = add_demand_balance(s, f.vars, f.lp);
  add_policy_constraints(s, f.vars, f.lp);
  add_investment_constraints(s, f.vars, f.lp);
  add_dispatch_constraints(s, f.vars, f.lp);
  add_storage_constraints(s, f.vars, f.lp);
  add_transmission_constraints(s, f.vars, f.lp);
  add_uc_constraints(s, f.vars, f.lp);
  const auto sink_rows = add_demand_sink_constraints(s, f.vars, f.lp);
  if (!sink_rows.empty() && f.lp.row_names[sink_rows.front()] == "sinksupply") f.rows.sink_total = sink_rows.front();
  add_deferrable_load_constraints(s, f.vars, f.lp);
  f.lp.check();
  return f;
}

}  // namespace sinkplan
