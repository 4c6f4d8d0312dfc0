#include "sinkplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sinkplan/error.hpp"

namespace sinkplan {

double ResourceCluster::effective_unit_size() const {
  return kind == ResourceKind::thermal_uc ? unit_size : 1.0;
}

int Scenario::zone_index(std::string_view id) const {
  for (std::size_t i = 0; i < zones.size(); ++i)
    if (zones[i].id == id) return static_cast<int>(i);
  return -1;
}

Scenario Scenario::without_sink() const {
  Scenario copy = *this;
  copy.sink.reset();
  copy.segments.clear();
  return copy;
}

std::string Violation::to_string() const { return entity + ": " + field + " " + rule; }

namespace {

bool valid_label(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

class Checker {
 public:
  explicit Checker(std::vector<Violation>& out) : out_(out) {}

  void fail(const std::string& entity, const std::string& field, const std::string& rule) {
    out_.push_back({entity, field, rule});
  }
  void check(bool ok, const std::string& entity, const std::string& field, const std::string& rule) {
    if (!ok) fail(entity, field, rule);
  }
  void in_range(double v, double lo, double hi, const std::string& entity, const std::string& field,
                const std::string& rule) {
    check(std::isfinite(v) && v >= lo && v <= hi, entity, field, rule);
  }

  void series(const std::vector<double>& s, std::size_t expected, double lo, double hi,
              const std::string& entity, const std::string& field) {
    if (s.size() != expected) {
      fail(entity, field, "length " + std::to_string(s.size()) + " != " + std::to_string(expected));
      return;
    }
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (!std::isfinite(s[t]) || s[t] < lo || s[t] > hi) {
        fail(entity, field, "value at hour " + std::to_string(t + 1) + " outside [" + fmt(lo) + ", " +
                                fmt(hi) + "]");
        return;
      }
    }
  }

  static std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

 private:
  std::vector<Violation>& out_;
};

template <class Range, class Fn>
void unique_ids(Checker& ck, const Range& items, const std::string& kind, Fn id_of) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    const std::string& id = id_of(item);
    ck.check(valid_label(id), kind + " " + id, "id", "must be a non-empty label of [A-Za-z0-9_.-]");
    ck.check(seen.insert(id).second, kind + " " + id, "id", "is duplicated");
  }
}

}  // namespace

std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;
  Checker ck(out);
  const double inf = std::numeric_limits<double>::infinity();

  const auto& time = s.time;
  ck.check(time.sub_periods >= 1, "time", "sub_periods", "must be >= 1");
  ck.check(time.hours_per_sub_period >= 2, "time", "hours_per_sub_period", "must be >= 2");
  ck.check(time.sub_periods >= 1 && time.hours_per_sub_period >= 2 && time.total_hours() <= 8784, "time",
           "total_hours", "must be <= 8784");
  ck.check(std::isfinite(time.hour_weight) && time.hour_weight > 0, "time", "hour_weight", "must be positive");
  ck.check(std::isfinite(s.voll) && s.voll > 0, "scenario", "voll", "must be positive");
  const auto hours = static_cast<std::size_t>(std::max(0, time.total_hours()));

  ck.check(!s.zones.empty(), "scenario", "zones", "must not be empty");
  unique_ids(ck, s.zones, "zone", [](const Zone& z) -> const std::string& { return z.id; });
  for (const auto& z : s.zones) {
    const std::string e = "zone " + z.id;
    ck.series(z.load, hours, 0.0, inf, e, "load");
    double size_sum = 0;
    for (std::size_t k = 0; k < z.nse_segments.size(); ++k) {
      const auto& seg = z.nse_segments[k];
      const std::string f = "nse_segments[" + std::to_string(k) + "]";
      ck.check(seg.slope_fraction > 0 && seg.slope_fraction <= 1, e, f + ".slope_fraction", "must lie in (0, 1]");
      ck.check(seg.size_fraction > 0 && seg.size_fraction <= 1, e, f + ".size_fraction", "must lie in (0, 1]");
      size_sum += seg.size_fraction;
    }
    ck.check(size_sum >= 1.0 - 1e-12, e, "nse_segments", "size fractions must sum to >= 1");
  }

  unique_ids(ck, s.clusters, "cluster", [](const ResourceCluster& c) -> const std::string& { return c.id; });
  for (const auto& c : s.clusters) {
    const std::string e = "cluster " + c.id;
    ck.check(s.zone_index(c.zone) >= 0, e, "zone", "references unknown zone '" + c.zone + "'");
    ck.in_range(c.min_stable, 0, 1, e, "min_stable", "must lie in [0, 1]");
    if (!c.cap_factor.empty()) ck.series(c.cap_factor, hours, 0.0, 1.0, e, "cap_factor");
    ck.in_range(c.ramp_up, 0, 1, e, "ramp_up", "must lie in [0, 1]");
    ck.in_range(c.ramp_down, 0, 1, e, "ramp_down", "must lie in [0, 1]");
    ck.check(c.charge_eff > 0 && c.charge_eff <= 1, e, "charge_eff", "must lie in (0, 1]");
    ck.check(c.discharge_eff > 0 && c.discharge_eff <= 1, e, "discharge_eff", "must lie in (0, 1]");
    ck.check(c.self_discharge >= 0 && c.self_discharge < 1, e, "self_discharge", "must lie in [0, 1)");
    ck.in_range(c.existing_cap, 0, inf, e, "existing_cap", "must be >= 0");
    ck.check(std::isfinite(c.max_new_cap), e, "max_new_cap", "must be finite (negative = unlimited)");
    for (auto [v, name] : {std::pair{c.inv_cost, "inv_cost"}, {c.fom_cost, "fom_cost"}, {c.vom_cost, "vom_cost"},
                           {c.fuel_cost, "fuel_cost"}, {c.start_cost, "start_cost"},
                           {c.emissions_rate, "emissions_rate"}, {c.energy_inv_cost, "energy_inv_cost"},
                           {c.energy_fom_cost, "energy_fom_cost"}})
      ck.in_range(v, 0, inf, e, name, "must be >= 0");

    if (c.is_uc()) {
      ck.check(c.unit_size > 0, e, "unit_size", "must be positive for thermal_uc");
      ck.check(c.min_up >= 0 && c.min_up < time.total_hours(), e, "min_up", "must lie in [0, total hours)");
      ck.check(c.min_down >= 0 && c.min_down < time.total_hours(), e, "min_down", "must lie in [0, total hours)");
    } else {
      ck.check(c.start_cost == 0, e, "start_cost", "is only used by thermal_uc and must be 0");
      ck.check(c.min_up == 0, e, "min_up", "is only used by thermal_uc and must be 0");
      ck.check(c.min_down == 0, e, "min_down", "is only used by thermal_uc and must be 0");
    }
    if (c.is_storage()) {
      if (s.storage_sizing == StorageSizing::fixed_ratio)
        ck.check(c.duration > 0, e, "duration", "must be positive for fixed_ratio storage");
      ck.in_range(c.existing_energy_cap, 0, inf, e, "existing_energy_cap", "must be >= 0");
    } else {
      const bool unused = c.duration == 0 && c.self_discharge == 0 && c.charge_eff == 1 && c.discharge_eff == 1 &&
                          c.energy_inv_cost == 0 && c.energy_fom_cost == 0 && c.existing_energy_cap == 0;
      ck.check(unused, e, "storage fields", "are only used by storage and must keep their defaults");
    }
  }

  unique_ids(ck, s.lines, "line", [](const TransmissionLine& l) -> const std::string& { return l.id; });
  for (const auto& l : s.lines) {
    const std::string e = "line " + l.id;
    ck.check(s.zone_index(l.from_zone) >= 0, e, "from_zone", "references unknown zone '" + l.from_zone + "'");
    ck.check(s.zone_index(l.to_zone) >= 0, e, "to_zone", "references unknown zone '" + l.to_zone + "'");
    ck.check(l.from_zone != l.to_zone, e, "to_zone", "must differ from from_zone");
    ck.in_range(l.existing_cap, 0, inf, e, "existing_cap", "must be >= 0");
    ck.check(std::isfinite(l.max_new_cap), e, "max_new_cap", "must be finite (negative = unlimited)");
    ck.in_range(l.inv_cost, 0, inf, e, "inv_cost", "must be >= 0");
  }

  for (std::size_t k = 0; k < s.policies.size(); ++k) {
    const auto& p = s.policies[k];
    const std::string e = "policy " + (p.id.empty() ? std::to_string(k) : p.id);
    if (!p.is_co2()) ck.check(valid_label(p.id), e, "id", "energy standards need a label id");
    for (const auto& [zone, v] : p.zone_values) {
      ck.check(s.zone_index(zone) >= 0, e, "zone_values", "references unknown zone '" + zone + "'");
      if (p.is_co2())
        ck.in_range(v, 0, inf, e, "co2_rate[" + zone + "]", "must be >= 0");
      else
        ck.in_range(v, 0, 1, e, "std_fraction[" + zone + "]", "must lie in [0, 1]");
    }
  }

  unique_ids(ck, s.deferrable_loads, "deferrable",
             [](const DeferrableLoad& d) -> const std::string& { return d.id; });
  std::vector<std::vector<double>> deferred_sum(s.zones.size(), std::vector<double>(hours, 0.0));
  for (const auto& d : s.deferrable_loads) {
    const std::string e = "deferrable " + d.id;
    const int zi = s.zone_index(d.zone);
    ck.check(zi >= 0, e, "zone", "references unknown zone '" + d.zone + "'");
    ck.in_range(d.defer_fraction, 0, 1, e, "defer_fraction", "must lie in [0, 1]");
    ck.check(d.max_delay >= 1 && d.max_delay < time.total_hours(), e, "max_delay", "must lie in [1, total hours)");
    ck.series(d.base_profile, hours, 0.0, inf, e, "base_profile");
    if (zi >= 0 && d.base_profile.size() == hours)
      for (std::size_t t = 0; t < hours; ++t) deferred_sum[zi][t] += d.base_profile[t];
  }
  for (std::size_t z = 0; z < s.zones.size(); ++z) {
    if (s.zones[z].load.size() != hours) continue;
    for (std::size_t t = 0; t < hours; ++t) {
      if (deferred_sum[z][t] > s.zones[z].load[t] * (1 + 1e-12) + 1e-9) {
        ck.fail("zone " + s.zones[z].id, "load", "is below its deferrable base profiles at hour " +
                                                     std::to_string(t + 1));
        break;
      }
    }
  }

  if (s.sink) {
    const auto& k = *s.sink;
    ck.in_range(k.capex, 0, inf, "sink", "capex", "must be >= 0");
    ck.check(k.finance.wacc >= 0, "sink", "wacc", "must be >= 0");
    ck.check(k.finance.life >= 1, "sink", "life", "must be >= 1");
    ck.check(k.finance.fom_fraction >= 0, "sink", "fom_fraction", "must be >= 0");
    if (k.finance.life >= 1 && k.capex >= 0) {
      const double expected = annualized_capex(k.capex, k.finance);
      ck.check(std::abs(k.annuity - expected) <= 1e-9 * std::max(1.0, std::abs(expected)), "sink", "annuity",
               "must equal annualized_capex(capex, finance)");
    }
    ck.check(!k.allowed_zones.empty(), "sink", "allowed_zones", "must not be empty");
    std::set<std::string> seen;
    for (const auto& z : k.allowed_zones) {
      ck.check(s.zone_index(z) >= 0, "sink", "allowed_zones", "references unknown zone '" + z + "'");
      ck.check(seen.insert(z).second, "sink", "allowed_zones", "lists '" + z + "' twice");
    }
  } else {
    ck.check(s.segments.empty(), "scenario", "segments", "require a demand sink");
  }
  for (std::size_t q = 0; q < s.segments.size(); ++q) {
    const auto& seg = s.segments[q];
    const std::string e = "segment " + std::to_string(q);
    ck.check(std::isfinite(seg.max_supply) && seg.max_supply > 0, e, "max_supply", "must be positive");
    ck.check(std::isfinite(seg.value), e, "value", "must be finite");
    if (q > 0) ck.check(seg.value <= s.segments[q - 1].value, e, "value", "segments must be sorted by descending value");
  }
  return out;
}

void require_valid(const Scenario& scenario) {
  const auto violations = validate(scenario);
  if (violations.empty()) return;
  std::string msg = "scenario '" + scenario.name + "' is invalid:";
  for (const auto& v : violations) msg += "\n  " + v.to_string();
  throw Error(msg);
}

double peak_load(const Scenario& s) {
  std::size_t hours = 0;
  for (const auto& z : s.zones) hours = std::max(hours, z.load.size());
  if (s.zones.empty() || hours == 0) throw Error("peak_load: empty load series");
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < hours; ++t) {
    double sum = 0;
    for (const auto& z : s.zones)
      if (t < z.load.size()) sum += z.load[t];
    peak = std::max(peak, sum);
  }
  return peak;
}

double annual_load(const Scenario& s) {
  double total = 0;
  for (const auto& z : s.zones) total += std::accumulate(z.load.begin(), z.load.end(), 0.0);
  return s.time.hour_weight * total;
}

std::string_view to_string(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::thermal_uc: return "thermal_uc";
    case ResourceKind::dispatchable: return "dispatchable";
    case ResourceKind::vre: return "vre";
    case ResourceKind::storage: return "storage";
  }
  return "?";
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::co2_cap_zonal: return "co2_cap_zonal";
    case PolicyKind::co2_cap_system: return "co2_cap_system";
    case PolicyKind::energy_standard_zonal: return "energy_standard_zonal";
    case PolicyKind::energy_standard_system: return "energy_standard_system";
  }
  return "?";
}

std::string_view to_string(StorageSizing mode) {
  return mode == StorageSizing::fixed_ratio ? "fixed_ratio" : "independent_energy";
}

std::optional<ResourceKind> parse_resource_kind(std::string_view text) {
  for (auto k : {ResourceKind::thermal_uc, ResourceKind::dispatchable, ResourceKind::vre, ResourceKind::storage})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::optional<PolicyKind> parse_policy_kind(std::string_view text) {
  for (auto k : {PolicyKind::co2_cap_zonal, PolicyKind::co2_cap_system, PolicyKind::energy_standard_zonal,
                 PolicyKind::energy_standard_system})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::optional<StorageSizing> parse_storage_sizing(std::string_view text) {
  for (auto k : {StorageSizing::fixed_ratio, StorageSizing::independent_energy})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

const std::vector<ParameterSymbol>& parameter_symbols() {
  static const std::vector<ParameterSymbol> table = {
      {"voll", "Scenario::voll"},
      {"d_{h,w,z}", "Zone::load"},
      {"n^{slope}_s", "NseSegment::slope_fraction"},
      {"n^{size}_s", "NseSegment::size_fraction"},
      {"y^{P^}_g", "ResourceCluster::max_new_cap"},
      {"y^{Pv}_g", "ResourceCluster::existing_cap"},
      {"y^{PD}_g", "ResourceCluster::unit_size"},
      {"y^{F^}_l", "TransmissionLine::max_new_cap"},
      {"y^{Fv}_l", "TransmissionLine::existing_cap"},
      {"c^{Pi}_g", "ResourceCluster::inv_cost"},
      {"c^{Fi}_l", "TransmissionLine::inv_cost"},
      {"c^{Pom}_g", "ResourceCluster::fom_cost"},
      {"c^{o}_g", "ResourceCluster::vom_cost"},
      {"c^{f}_g", "ResourceCluster::fuel_cost"},
      {"c^{st}_g", "ResourceCluster::start_cost"},
      {"eps^{CO2}_g", "ResourceCluster::emissions_rate"},
      {"rho^{^}_{g,h}", "ResourceCluster::cap_factor"},
      {"rho^{v}_g", "ResourceCluster::min_stable"},
      {"eta^{0}_g", "ResourceCluster::self_discharge"},
      {"eta^{+}_g", "ResourceCluster::charge_eff"},
      {"eta^{-}_g", "ResourceCluster::discharge_eff"},
      {"delta_g", "ResourceCluster::duration"},
      {"kappa^{+}_g", "ResourceCluster::ramp_up"},
      {"kappa^{-}_g", "ResourceCluster::ramp_down"},
      {"tau^{+}_g", "ResourceCluster::min_up"},
      {"tau^{-}_g", "ResourceCluster::min_down"},
      {"mu^{f}_g", "DeferrableLoad::defer_fraction"},
      {"tau^{f}_g", "DeferrableLoad::max_delay"},
      {"phi^{map}_{l,z}", "TransmissionLine::from_zone/to_zone"},
      {"eps^{max}_z", "PolicySpec::zone_values (co2 kinds)"},
      {"eps^{STD}_{i,z}", "PolicySpec::zone_values (standard kinds)"},
      {"c^{DS}", "DemandSinkSpec::annuity"},
      {"x^{C^}_q", "MarketSegment::max_supply"},
      {"x^{value}_q", "MarketSegment::value"},
  };
  return table;
}

}  // namespace sinkplan
