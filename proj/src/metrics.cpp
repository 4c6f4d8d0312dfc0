#include "sinkplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sinkplan/error.hpp"
#include "sinkplan/mps.hpp"

namespace sinkplan {

namespace {

constexpr double kTiny = 1e-9;

void require_solution(const Formulation& f, const Solution& sol) {
  if (sol.status != SolveStatus::optimal) throw Error("metrics: solution is " + std::string(to_string(sol.status)));
  if (sol.primal.size() != f.lp.n_cols()) throw Error("metrics: primal vector does not match the formulation");
  if (sol.duals.size() != f.lp.n_rows()) throw Error("metrics: missing duals");
}

double sum_range(const Solution& sol, const ColumnRange& r) {
  double s = 0.0;
  for (std::size_t j = r.begin; j < r.end(); ++j) s += sol.primal[j];
  return s;
}

double total_sink_capacity(const Formulation& f, const Solution& sol) { return sum_range(sol, f.vars.sink_cap); }

bool every_co2_cap_zero(const Scenario& s) {
  bool any = false;
  for (const auto& p : s.policies) {
    if (!p.is_co2()) continue;
    any = true;
    for (const auto& [zone, value] : p.zone_values)
      if (value > 0.0) return false;
  }
  return any;
}

std::optional<double> fraction_change(double run, double ref) {
  if (std::fabs(ref) <= kTiny) return std::nullopt;
  return (run - ref) / std::fabs(ref);
}

std::string field(double v) { return format_number(v); }
std::string field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::vector<std::vector<double>> hourly_prices(const Scenario& s, const Formulation& f, const Solution& sol) {
  require_solution(f, sol);
  const std::size_t T = f.vars.hours;
  const double hw = s.time.hour_weight;
  std::vector<std::vector<double>> out(s.zones.size(), std::vector<double>(T));
  for (std::size_t z = 0; z < s.zones.size(); ++z)
    for (std::size_t t = 0; t < T; ++t) out[z][t] = sol.duals[f.rows.balance[z * T + t]] / hw;
  return out;
}

std::vector<double> system_prices(const Scenario& s, const std::vector<std::vector<double>>& prices) {
  const std::size_t T = prices.empty() ? 0 : prices.front().size();
  std::vector<double> out(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double load = 0.0, weighted = 0.0, plain = 0.0;
    for (std::size_t z = 0; z < prices.size(); ++z) {
      load += s.zones[z].load[t];
      weighted += prices[z][t] * s.zones[z].load[t];
      plain += prices[z][t];
    }
    out[t] = load > 0.0 ? weighted / load : plain / static_cast<double>(prices.size());
  }
  return out;
}

double average_price(const Scenario& s, const Formulation& f, const Solution& sol) {
  const auto prices = hourly_prices(s, f, sol);
  double weighted = 0.0, load = 0.0;
  for (std::size_t z = 0; z < s.zones.size(); ++z)
    for (std::size_t t = 0; t < f.vars.hours; ++t) {
      weighted += prices[z][t] * s.zones[z].load[t];
      load += s.zones[z].load[t];
    }
  if (load <= 0.0) throw Error("metrics: scenario has no load");
  return weighted / load;
}

std::optional<double> sink_weighted_price(const Scenario& s, const Formulation& f, const Solution& sol) {
  const auto prices = hourly_prices(s, f, sol);
  double weighted = 0.0, prod = 0.0;
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    if (f.vars.sink_slot[z] < 0) continue;
    for (std::size_t t = 0; t < f.vars.hours; ++t) {
      const double x = sol.primal[f.vars.col_prod(z, t)];
      weighted += prices[z][t] * x;
      prod += x;
    }
  }
  if (prod <= kTiny) return std::nullopt;
  return weighted / prod;
}

std::optional<double> sink_capacity_factor(const Scenario&, const Formulation& f, const Solution& sol) {
  require_solution(f, sol);
  const double cap = total_sink_capacity(f, sol);
  if (cap <= kTiny) return std::nullopt;
  const double cf = sum_range(sol, f.vars.prod) / (cap * static_cast<double>(f.vars.hours));
  return std::clamp(cf, 0.0, 1.0);
}

std::optional<double> curtailment_fraction(const Scenario& s, const Formulation& f, const Solution& sol) {
  require_solution(f, sol);
  double potential = 0.0, used = 0.0;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& c = s.clusters[g];
    if (c.kind != ResourceKind::vre) continue;
    const double cap = sol.primal[f.vars.cap_total.begin + g];
    for (std::size_t t = 0; t < f.vars.hours; ++t) {
      potential += c.cap_factor_at(static_cast<int>(t)) * cap;
      used += sol.primal[f.vars.col_inj(g, t)];
    }
  }
  if (potential <= kTiny) return std::nullopt;
  return std::clamp((potential - used) / potential, 0.0, 1.0);
}

double start_costs(const Scenario& s, const Formulation& f, const Solution& sol) {
  require_solution(f, sol);
  double total = 0.0;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& c = s.clusters[g];
    if (!c.is_uc()) continue;
    double starts = 0.0;
    for (std::size_t t = 0; t < f.vars.hours; ++t) starts += sol.primal[f.vars.col_start(g, t)];
    total += s.time.hour_weight * c.start_cost * starts;
  }
  return total;
}

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n < 2) return std::nullopt;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  // Variance below rounding noise of the data counts as constant.
  auto scale = [n](const std::vector<double>& v, double mean) {
    double s = std::fabs(mean);
    for (std::size_t i = 0; i < n; ++i) s = std::max(s, std::fabs(v[i]));
    return s;
  };
  const double ta = 1e-12 * scale(a, ma), tb = 1e-12 * scale(b, mb);
  if (saa <= ta * ta * static_cast<double>(n) || sbb <= tb * tb * static_cast<double>(n)) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<double> daily_net_load_correlation(const Scenario& s, const Formulation& f, const Solution& sol) {
  require_solution(f, sol);
  const std::size_t T = f.vars.hours;
  const std::size_t days = T / 24;
  if (days < 2 || f.vars.prod.count == 0) return std::nullopt;
  std::vector<double> net(days, 0.0), prod(days, 0.0);
  for (std::size_t t = 0; t < days * 24; ++t) {
    const std::size_t d = t / 24;
    for (const auto& z : s.zones) net[d] += z.load[t];
    for (std::size_t g = 0; g < s.clusters.size(); ++g)
      if (s.clusters[g].kind == ResourceKind::vre) net[d] -= sol.primal[f.vars.col_inj(g, t)];
    for (std::size_t z = 0; z < s.zones.size(); ++z)
      if (f.vars.sink_slot[z] >= 0) prod[d] += sol.primal[f.vars.col_prod(z, t)];
  }
  return pearson(net, prod);
}

CapacityByGroup capacity_by_group(const Scenario& s, const Formulation& f, const Solution& sol) {
  require_solution(f, sol);
  const bool emitting = !every_co2_cap_zero(s);
  CapacityByGroup out;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const double mw = sol.primal[f.vars.cap_total.begin + g];
    const std::string& grp = s.clusters[g].group;
    if (grp == "solar")
      out.solar += mw;
    else if (grp == "wind")
      out.wind += mw;
    else if (grp == "battery")
      out.battery += mw;
    else if (grp == "firm" || (grp == "firm_if_emitting" && emitting))
      out.firm += mw;
    else
      out.other += mw;
  }
  return out;
}

double energy_balance_error(const Scenario& s, const Formulation& f, const Solution& sol) {
  require_solution(f, sol);
  const auto& v = f.vars;
  const std::size_t T = v.hours;
  const auto& x = sol.primal;
  double worst = 0.0;
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    const auto& zone = s.zones[z];
    for (std::size_t t = 0; t < T; ++t) {
      double supply = 0.0, use = zone.load[t];
      for (std::size_t g = 0; g < s.clusters.size(); ++g) {
        if (s.clusters[g].zone != zone.id) continue;
        supply += x[v.col_inj(g, t)];
        if (s.clusters[g].is_storage()) use += x[v.col_wdw(g, t)];
      }
      for (std::size_t k = 0; k < zone.nse_segments.size(); ++k) supply += x[v.col_nse(z, k, t)];
      for (std::size_t l = 0; l < s.lines.size(); ++l) {
        if (s.lines[l].to_zone == zone.id) supply += x[v.col_flow(l, t)];
        if (s.lines[l].from_zone == zone.id) use += x[v.col_flow(l, t)];
      }
      for (std::size_t d = 0; d < s.deferrable_loads.size(); ++d) {
        if (s.deferrable_loads[d].zone != zone.id) continue;
        supply += x[v.col_defer_out(d, t)];
        use += x[v.col_defer_in(d, t)];
      }
      if (v.sink_slot[z] >= 0) use += x[v.col_prod(z, t)];
      worst = std::max(worst, std::fabs(supply - use));
    }
  }
  return worst;
}

MetricsDeltas compare(const MetricsReport& run, const MetricsReport& ref) {
  MetricsDeltas d;
  d.capacity.solar = run.capacity.solar - ref.capacity.solar;
  d.capacity.wind = run.capacity.wind - ref.capacity.wind;
  d.capacity.firm = run.capacity.firm - ref.capacity.firm;
  d.capacity.battery = run.capacity.battery - ref.capacity.battery;
  d.capacity.other = run.capacity.other - ref.capacity.other;
  d.system_cost = run.total_system_cost - ref.total_system_cost;
  d.system_cost_change_fraction = fraction_change(run.total_system_cost, ref.total_system_cost);
  d.average_price_change_fraction = fraction_change(run.average_price, ref.average_price);
  d.start_cost_change_fraction = fraction_change(run.total_start_costs, ref.total_start_costs);
  return d;
}

MetricsReport report(const Scenario& s, const Formulation& f, const Solution& sol, const MetricsReport* reference) {
  require_solution(f, sol);
  MetricsReport r;
  r.objective = sol.objective;
  r.peak_load = peak_load(s);
  r.annual_load = annual_load(s);

  const double hw = s.time.hour_weight;
  r.sink_capacity_mw = total_sink_capacity(f, sol);
  r.sink_capacity_fraction_of_peak = r.peak_load > 0.0 ? r.sink_capacity_mw / r.peak_load : 0.0;
  r.sink_annual_production = hw * sum_range(sol, f.vars.prod);
  if (s.sink) r.sink_capex = s.sink->annuity * r.sink_capacity_mw;
  double supplied = 0.0;
  for (std::size_t k = 0; k < f.vars.supply.count; ++k) {
    const double q = sol.primal[f.vars.supply.begin + k];
    r.sink_revenue += s.segments[k].value * q;
    supplied += q;
  }
  if (supplied > kTiny) r.average_output_value = r.sink_revenue / supplied;
  r.total_system_cost = sol.objective - r.sink_capex + r.sink_revenue;

  r.average_price = average_price(s, f, sol);
  r.sink_capacity_factor = sink_capacity_factor(s, f, sol);
  r.sink_weighted_price = sink_weighted_price(s, f, sol);
  r.capacity = capacity_by_group(s, f, sol);
  r.curtailment_fraction = curtailment_fraction(s, f, sol);
  r.total_start_costs = start_costs(s, f, sol);
  r.unserved_energy = hw * sum_range(sol, f.vars.nse);
  r.daily_net_load_correlation = daily_net_load_correlation(s, f, sol);

  r.price_duration_curve = system_prices(s, hourly_prices(s, f, sol));
  std::sort(r.price_duration_curve.begin(), r.price_duration_curve.end(), std::greater<>());
  if (reference) r.deltas = compare(r, *reference);
  return r;
}

std::vector<std::string> metrics_columns() {
  return {"objective_usd",
          "total_system_cost_usd",
          "average_price_usd_per_mwh",
          "peak_load_mw",
          "annual_load_mwh",
          "sink_capacity_mw",
          "sink_capacity_fraction_of_peak",
          "sink_capacity_factor",
          "sink_weighted_price_usd_per_mwh",
          "sink_annual_production_mwh",
          "sink_capex_usd",
          "sink_revenue_usd",
          "average_output_value_usd_per_mwh",
          "solar_mw",
          "wind_mw",
          "firm_mw",
          "battery_mw",
          "other_mw",
          "curtailment_fraction",
          "start_costs_usd",
          "unserved_energy_mwh",
          "daily_net_load_correlation",
          "delta_solar_mw",
          "delta_wind_mw",
          "delta_firm_mw",
          "delta_battery_mw",
          "delta_other_mw",
          "delta_system_cost_usd",
          "system_cost_change_fraction",
          "average_price_change_fraction",
          "start_cost_change_fraction"};
}

std::vector<std::string> metrics_fields(const MetricsReport& r) {
  std::vector<std::string> out = {field(r.objective),
                                  field(r.total_system_cost),
                                  field(r.average_price),
                                  field(r.peak_load),
                                  field(r.annual_load),
                                  field(r.sink_capacity_mw),
                                  field(r.sink_capacity_fraction_of_peak),
                                  field(r.sink_capacity_factor),
                                  field(r.sink_weighted_price),
                                  field(r.sink_annual_production),
                                  field(r.sink_capex),
                                  field(r.sink_revenue),
                                  field(r.average_output_value),
                                  field(r.capacity.solar),
                                  field(r.capacity.wind),
                                  field(r.capacity.firm),
                                  field(r.capacity.battery),
                                  field(r.capacity.other),
                                  field(r.curtailment_fraction),
                                  field(r.total_start_costs),
                                  field(r.unserved_energy),
                                  field(r.daily_net_load_correlation)};
  if (r.deltas) {
    const auto& d = *r.deltas;
    for (double v : {d.capacity.solar, d.capacity.wind, d.capacity.firm, d.capacity.battery, d.capacity.other,
                     d.system_cost})
      out.push_back(field(v));
    out.push_back(field(d.system_cost_change_fraction));
    out.push_back(field(d.average_price_change_fraction));
    out.push_back(field(d.start_cost_change_fraction));
  } else {
    out.resize(metrics_columns().size());
  }
  return out;
}

}  // namespace sinkplan
