#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sinkplan/error.hpp"
#include "sinkplan/mps.hpp"

#ifndef SINKPLAN_SOURCE_DIR
#error "SINKPLAN_SOURCE_DIR must point at the source tree"
#endif

namespace sinkplan::test {

namespace fs = std::filesystem;

fs::path config_dir(const std::string& name) { return fs::path(SINKPLAN_SOURCE_DIR) / "configs" / name; }
fs::path golden_path(const std::string& name) { return fs::path(SINKPLAN_SOURCE_DIR) / "tests" / "golden" / name; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double rel_diff(double a, double b) { return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)}); }

Scenario single_zone(std::vector<double> load, double hour_weight) {
  Scenario s;
  s.name = "toy";
  s.time.sub_periods = 1;
  s.time.hours_per_sub_period = static_cast<int>(load.size());
  s.time.hour_weight = hour_weight;
  Zone z;
  z.id = "Z1";
  z.load = std::move(load);
  z.nse_segments = {{1.0, 1.0}};
  s.zones.push_back(std::move(z));
  return s;
}

ResourceCluster dispatchable(const std::string& id, const std::string& zone, double inv_cost, double marginal_cost) {
  ResourceCluster c;
  c.id = id;
  c.zone = zone;
  c.kind = ResourceKind::dispatchable;
  c.group = "firm";
  c.inv_cost = inv_cost;
  c.vom_cost = marginal_cost;
  return c;
}

ResourceCluster vre(const std::string& id, const std::string& zone, double inv_cost, std::vector<double> cap_factor) {
  ResourceCluster c;
  c.id = id;
  c.zone = zone;
  c.kind = ResourceKind::vre;
  c.group = "solar";
  c.inv_cost = inv_cost;
  c.cap_factor = std::move(cap_factor);
  return c;
}

ResourceCluster battery(const std::string& id, const std::string& zone, double inv_cost, double duration) {
  ResourceCluster c;
  c.id = id;
  c.zone = zone;
  c.kind = ResourceKind::storage;
  c.group = "battery";
  c.inv_cost = inv_cost;
  c.vom_cost = 0.15;
  c.charge_eff = 0.92;
  c.discharge_eff = 0.92;
  c.duration = duration;
  return c;
}

ResourceCluster thermal_uc(const std::string& id, const std::string& zone, double unit_size, double inv_cost,
                           double marginal_cost, double start_cost) {
  ResourceCluster c;
  c.id = id;
  c.zone = zone;
  c.kind = ResourceKind::thermal_uc;
  c.group = "firm";
  c.unit_size = unit_size;
  c.inv_cost = inv_cost;
  c.fuel_cost = marginal_cost;
  c.start_cost = start_cost;
  c.min_stable = 0.3;
  c.min_up = 2;
  c.min_down = 2;
  return c;
}

Scenario with_sink(Scenario s, double capex, double base_price, double segment_fraction,
                   std::vector<std::string> zones) {
  DemandSinkSpec sink;
  sink.capex = capex;
  sink.annuity = annualized_capex(capex, sink.finance);
  if (zones.empty())
    for (const auto& z : s.zones) zones.push_back(z.id);
  sink.allowed_zones = std::move(zones);
  DemandCurveSpec curve;
  curve.segment_fraction = segment_fraction;
  curve.base_price = base_price;
  s.segments = build_demand_curve(curve, annual_load(s));
  s.sink = std::move(sink);
  return s;
}

Scenario random_scenario(std::uint64_t seed, const RandomOptions& opt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  constexpr double kPi = 3.14159265358979323846;

  for (int attempt = 0;; ++attempt) {
    Scenario s;
    s.name = "random" + std::to_string(seed);
    const int n_zones = 1 + pick(std::max(1, opt.max_zones));
    static const int kHours[] = {4, 6, 8, 12};
    int H = kHours[pick(4)];
    int W = U(rng) < 0.3 ? 2 : 1;
    while (W * H > opt.max_hours || (attempt > 4 && W * H > 6)) {
      if (W > 1)
        W = 1;
      else
        H = std::max(2, H / 2);
    }
    s.time.sub_periods = W;
    s.time.hours_per_sub_period = H;
    const int T = W * H;
    s.time.hour_weight = U(rng) < 0.5 ? 1.0 : 8760.0 / T;
    s.voll = 5000.0 + 5000.0 * pick(10);

    for (int z = 0; z < n_zones; ++z) {
      Zone zone;
      zone.id = "Z" + std::to_string(z + 1);
      const double base = 50.0 + 100.0 * U(rng);
      const double phase = 2 * kPi * U(rng);
      for (int t = 0; t < T; ++t)
        zone.load.push_back(std::round(base * (1.0 + 0.4 * std::sin(2 * kPi * t / H + phase) + 0.1 * U(rng))));
      if (U(rng) < 0.3)
        zone.nse_segments = {{0.3, 0.2}, {1.0, 1.0}};
      else
        zone.nse_segments = {{1.0, 1.0}};
      s.zones.push_back(std::move(zone));
    }

    int n_clusters = 1 + pick(std::max(1, opt.max_clusters));
    bool has_storage = false;
    for (int k = 0; k < n_clusters; ++k) {
      const std::string zone = s.zones[static_cast<std::size_t>(pick(n_zones))].id;
      const std::string id = "g" + std::to_string(k + 1);
      int kind = pick(4);
      if (opt.force_storage && k == n_clusters - 1 && !has_storage) kind = 2;
      ResourceCluster c;
      switch (kind) {
        case 0: {
          c = dispatchable(id, zone, 40000.0 + 60000.0 * U(rng), 10.0 + 50.0 * U(rng));
          if (U(rng) < 0.4) c.min_stable = 0.2 * U(rng);
          if (U(rng) < 0.4) c.ramp_up = c.ramp_down = 0.3 + 0.5 * U(rng);
          if (U(rng) < 0.3) c.existing_cap = std::round(50.0 * U(rng));
          if (U(rng) < 0.3) c.max_new_cap = std::round(100.0 + 100.0 * U(rng));
          c.emissions_rate = 0.3 + 0.3 * U(rng);
          break;
        }
        case 1: {
          std::vector<double> cf;
          const bool solar = U(rng) < 0.5;
          for (int t = 0; t < T; ++t) {
            const double h = t % H;
            const double v = solar ? std::max(0.0, std::sin(kPi * (h - 0.25 * H) / (0.5 * H))) : 0.2 + 0.6 * U(rng);
            cf.push_back(std::round(std::min(1.0, v) * 1e4) / 1e4);
          }
          c = vre(id, zone, 30000.0 + 100000.0 * U(rng), std::move(cf));
          c.group = solar ? "solar" : "wind";
          c.fom_cost = 5000.0 * U(rng);
          break;
        }
        case 2: {
          c = battery(id, zone, 30000.0 + 60000.0 * U(rng), 1.0 + pick(4));
          c.charge_eff = c.discharge_eff = 0.85 + 0.15 * U(rng);
          if (U(rng) < 0.3) c.self_discharge = 0.01 * U(rng);
          has_storage = true;
          break;
        }
        default: {
          c = thermal_uc(id, zone, 10.0 + 10.0 * pick(5), 50000.0 + 50000.0 * U(rng), 15.0 + 30.0 * U(rng),
                         100.0 + 2000.0 * U(rng));
          c.min_stable = 0.5 * U(rng);
          c.ramp_up = c.ramp_down = U(rng) < 0.5 ? 1.0 : 0.3 + 0.6 * U(rng);
          c.min_up = 1 + pick(std::max(1, std::min(4, T - 1)));
          c.min_down = 1 + pick(std::max(1, std::min(4, T - 1)));
          c.emissions_rate = 0.4;
          break;
        }
      }
      s.clusters.push_back(std::move(c));
    }

    if (n_zones == 2) {
      TransmissionLine line;
      line.id = "L1";
      line.from_zone = "Z1";
      line.to_zone = "Z2";
      line.existing_cap = std::round(30.0 * U(rng));
      line.max_new_cap = U(rng) < 0.5 ? -1.0 : std::round(50.0 * U(rng));
      line.inv_cost = 5000.0 + 20000.0 * U(rng);
      s.lines.push_back(std::move(line));
    }

    if (U(rng) < 0.2) {
      PolicySpec p;
      p.id = "cap";
      p.kind = PolicyKind::co2_cap_system;
      for (const auto& z : s.zones) p.zone_values[z.id] = 0.2 * U(rng);
      s.policies.push_back(std::move(p));
    }

    if (opt.force_sink || (opt.allow_sink && U(rng) < 0.5)) {
      std::vector<std::string> zones;
      for (const auto& z : s.zones)
        if (zones.empty() || U(rng) < 0.5) zones.push_back(z.id);
      s = with_sink(std::move(s), 200.0 + 200.0 * pick(7), 10.0 + 10.0 * pick(10), 0.05, zones);
    }

    if (!validate(s).empty()) continue;
    if (index_variables(s).n_cols > opt.max_cols) continue;
    return s;
  }
}

Scenario rotate(const Scenario& s, int k) {
  Scenario r = s;
  auto shift = [&](std::vector<double>& v) {
    if (v.empty()) return;
    const auto n = static_cast<long>(v.size());
    const long m = ((k % n) + n) % n;
    std::rotate(v.begin(), v.end() - m, v.end());
  };
  for (auto& z : r.zones) shift(z.load);
  for (auto& c : r.clusters) shift(c.cap_factor);
  for (auto& d : r.deferrable_loads) shift(d.base_profile);
  r.name = s.name + "_rot" + std::to_string(k);
  return r;
}

Scenario shift_values(Scenario s, double shift) {
  for (auto& seg : s.segments) seg.value += shift;
  return s;
}

Checked solve_checked(const Scenario& s, const SolveOptions& options) {
  Checked c;
  c.run = solve_scenario(s, options);
  if (c.run.solution.status != SolveStatus::optimal) {
    c.detail = "status " + std::string(to_string(c.run.solution.status));
    return c;
  }
  c.certified = c.run.residuals.passes(1e-6);
  c.detail = c.run.residuals.summary();
  return c;
}

double sold(const Formulation& f, const Solution& sol) {
  double total = 0;
  for (std::size_t j = f.vars.supply.begin; j < f.vars.supply.end(); ++j) total += sol.primal[j];
  return total;
}

double sink_capacity(const Formulation& f, const Solution& sol) {
  double total = 0;
  for (std::size_t j = f.vars.sink_cap.begin; j < f.vars.sink_cap.end(); ++j) total += sol.primal[j];
  return total;
}

namespace {

CheckResult fail(std::string detail) { return {false, std::move(detail)}; }

bool solve_into(const Scenario& s, Checked& out, CheckResult& why) {
  out = solve_checked(s);
  if (!out.certified) {
    why = fail(s.name + ": " + out.detail);
    return false;
  }
  return true;
}

}  // namespace

CheckResult check_rotation(const Scenario& s, int k, double tolerance) {
  Checked a, b;
  CheckResult why;
  if (!solve_into(s, a, why) || !solve_into(rotate(s, k), b, why)) return why;
  const double d = rel_diff(a.run.solution.objective, b.run.solution.objective);
  if (d > tolerance)
    return fail(s.name + ": objective " + format_number(a.run.solution.objective) + " vs rotated " +
                format_number(b.run.solution.objective));
  return {true, s.name + ": rel diff " + format_number(d)};
}

CheckResult check_storage_wrap(const Scenario& s, const Run& run, double tolerance) {
  const auto& v = run.formulation.vars;
  const auto& x = run.solution.primal;
  const std::size_t T = v.hours;
  for (std::size_t g = 0; g < s.clusters.size(); ++g) {
    const auto& c = s.clusters[g];
    if (!c.is_storage()) continue;
    double net = 0, scale = 1;
    for (std::size_t t = 0; t < T; ++t) {
      const double in = c.charge_eff * x[v.col_wdw(g, t)];
      const double out = x[v.col_inj(g, t)] / c.discharge_eff + c.self_discharge * x[v.col_lvl(g, t)];
      net += in - out;
      scale = std::max({scale, in, out});
      const double lvl_next = x[v.col_lvl(g, (t + 1) % T)];
      const double step = x[v.col_lvl(g, t)] + in - out - lvl_next;
      if (std::fabs(step) > tolerance * std::max(1.0, scale))
        return fail(s.name + ": storage " + c.id + " level step at t=" + std::to_string(t) + " off by " +
                    format_number(step));
    }
    if (std::fabs(net) > tolerance * scale * static_cast<double>(T))
      return fail(s.name + ": storage " + c.id + " net energy over the cycle " + format_number(net));
  }
  return {true, s.name};
}

CheckResult check_zero_value_sink(const Scenario& s) {
  if (!s.sink) return fail(s.name + ": no sink");
  Scenario zero = s;
  for (auto& seg : zero.segments) seg.value = 0.0;
  Checked a, b;
  CheckResult why;
  if (!solve_into(zero, a, why) || !solve_into(s.without_sink(), b, why)) return why;
  const double cap = sink_capacity(a.run.formulation, a.run.solution);
  const double total = sold(a.run.formulation, a.run.solution);
  if (zero.sink->annuity > 0 && (cap > 1e-6 || total > 1e-6))
    return fail(s.name + ": zero-value sink built " + format_number(cap) + " MW, sold " + format_number(total));
  const double d = rel_diff(a.run.solution.objective, b.run.solution.objective);
  if (d > 1e-8)
    return fail(s.name + ": objective " + format_number(a.run.solution.objective) + " vs no-sink " +
                format_number(b.run.solution.objective));
  return {true, s.name};
}

CheckResult check_prefix(const Scenario& s, const Run& run, double tolerance) {
  const auto& v = run.formulation.vars;
  const auto& x = run.solution.primal;
  for (std::size_t q = 0; q < v.supply.count; ++q) {
    const auto& seg = s.segments[q];
    if (x[v.supply.begin + q] <= tolerance * std::max(1.0, seg.max_supply)) continue;
    for (std::size_t p = 0; p < q; ++p) {
      const auto& hi = s.segments[p];
      if (hi.value <= seg.value) continue;
      const double used = x[v.supply.begin + p];
      if (used < hi.max_supply - tolerance * std::max(1.0, hi.max_supply))
        return fail(s.name + ": segment " + std::to_string(q) + " used while higher-value segment " +
                    std::to_string(p) + " is at " + format_number(used) + " of " + format_number(hi.max_supply));
    }
  }
  return {true, s.name};
}

CheckResult check_value_monotonicity(const Scenario& s, double shift) {
  Checked lo, hi;
  CheckResult why;
  if (!solve_into(s, lo, why) || !solve_into(shift_values(s, shift), hi, why)) return why;
  const double a = sold(lo.run.formulation, lo.run.solution);
  const double b = sold(hi.run.formulation, hi.run.solution);
  if (b < a - 1e-6 * std::max(1.0, a))
    return fail(s.name + ": sold " + format_number(a) + " at base values, " + format_number(b) + " after +" +
                format_number(shift));
  return {true, s.name + ": " + format_number(a) + " -> " + format_number(b)};
}

CheckResult check_capex_monotonicity(const Scenario& s, double capex_low, double capex_high) {
  if (!s.sink) return fail(s.name + ": no sink");
  auto at = [&](double capex) {
    Scenario c = s;
    c.sink->capex = capex;
    c.sink->annuity = annualized_capex(capex, c.sink->finance);
    return c;
  };
  Checked lo, hi;
  CheckResult why;
  if (!solve_into(at(capex_low), lo, why) || !solve_into(at(capex_high), hi, why)) return why;
  const double a = sink_capacity(lo.run.formulation, lo.run.solution);
  const double b = sink_capacity(hi.run.formulation, hi.run.solution);
  if (b > a + 1e-6 * std::max(1.0, a))
    return fail(s.name + ": sink capacity " + format_number(a) + " MW at capex " + format_number(capex_low) + ", " +
                format_number(b) + " MW at " + format_number(capex_high));
  return {true, s.name + ": " + format_number(a) + " -> " + format_number(b)};
}

bool mps_round_trips(const LinearProgram& lp) {
  const std::string text = write_mps(lp, MpsFormat::free);
  const LinearProgram back = parse_mps(text);
  return back == lp && write_mps(back, MpsFormat::free) == text;
}

}  // namespace sinkplan::test
