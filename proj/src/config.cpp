#include "sinkplan/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sinkplan/error.hpp"

namespace sinkplan {

namespace fs = std::filesystem;

double fuel_cost_per_mwh(double heat_rate, double price) { return heat_rate * price; }

double emissions_per_mwh(double heat_rate, double kg_per_mmbtu) { return heat_rate * kg_per_mmbtu / 1000.0; }

double start_cost_with_fuel(double start_cost, double start_fuel_mmbtu, double price) {
  return start_cost + start_fuel_mmbtu * price;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// A named quantity and its unit, e.g. inv_cost + usd_per_mw_yr.
struct Field {
  std::string stem;
  std::string unit;
  bool required = false;

  std::string name() const { return unit.empty() ? stem : stem + "_" + unit; }
};

// Throws when `key` is not one of `fields`; a key that carries a known stem
// with a different unit is reported as a unit mismatch.
std::size_t match_field(const std::vector<Field>& fields, const std::string& key, const std::string& source,
                        std::size_t line, const std::string& where) {
  for (std::size_t k = 0; k < fields.size(); ++k)
    if (fields[k].name() == key) return k;
  const Field* best = nullptr;
  for (const auto& f : fields)
    if (!f.unit.empty() && key.rfind(f.stem + "_", 0) == 0 && (!best || f.stem.size() > best->stem.size())) best = &f;
  if (best)
    throw ParseError(source, line,
                     where + "unit mismatch: '" + key + "' where '" + best->name() + "' (unit " + best->unit +
                         ") is expected");
  throw ParseError(source, line, where + "unknown field '" + key + "'");
}

struct Row {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

class Table {
 public:
  Table(const fs::path& path, std::vector<Field> fields) : source_(path.string()), fields_(std::move(fields)) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      if (t.find('"') != std::string::npos) throw ParseError(source_, line_no, "quoted fields are not supported");
      auto cells = split(t, ',');
      if (!have_header) {
        have_header = true;
        header_line_ = line_no;
        column_of_.assign(fields_.size(), -1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
          const std::size_t k =
              match_field(fields_, cells[c], source_, line_no, "column " + std::to_string(c + 1) + ": ");
          if (column_of_[k] >= 0) throw ParseError(source_, line_no, "duplicate column '" + cells[c] + "'");
          column_of_[k] = static_cast<int>(c);
        }
        for (std::size_t k = 0; k < fields_.size(); ++k)
          if (fields_[k].required && column_of_[k] < 0)
            throw ParseError(source_, line_no, "missing required column '" + fields_[k].name() + "'");
        width_ = cells.size();
        continue;
      }
      if (cells.size() != width_)
        throw ParseError(source_, line_no,
                         "expected " + std::to_string(width_) + " fields, found " + std::to_string(cells.size()));
      rows_.push_back({line_no, std::move(cells)});
    }
    if (!have_header) throw ParseError(source_, line_no, "missing header row");
  }

  const std::vector<Row>& rows() const { return rows_; }
  const std::string& source() const { return source_; }

  bool has(const std::string& name) const { return column_of_[index(name)] >= 0; }

  // Raw cell text, empty when the column is absent.
  std::string text(const Row& r, const std::string& name) const {
    const int c = column_of_[index(name)];
    return c < 0 ? std::string() : r.cells[static_cast<std::size_t>(c)];
  }

  std::string required_text(const Row& r, const std::string& name) const {
    std::string t = text(r, name);
    if (t.empty()) throw fail(r, name, "empty value");
    return t;
  }

  double number(const Row& r, const std::string& name, double fallback) const {
    const std::string t = text(r, name);
    if (t.empty()) {
      if (fields_[index(name)].required) throw fail(r, name, "empty value");
      return fallback;
    }
    const auto v = parse_double(t);
    if (!v) throw fail(r, name, "malformed number '" + t + "'");
    return *v;
  }

  int integer(const Row& r, const std::string& name, int fallback) const {
    const double v = number(r, name, fallback);
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw fail(r, name, "expected an integer");
    return static_cast<int>(v);
  }

  ParseError fail(const Row& r, const std::string& name, const std::string& what) const {
    const int c = column_of_[index(name)];
    return ParseError(source_, r.line, "column " + std::to_string(c + 1) + " (" + name + "): " + what);
  }

 private:
  std::size_t index(const std::string& name) const {
    for (std::size_t k = 0; k < fields_.size(); ++k)
      if (fields_[k].name() == name) return k;
    throw Error("internal: unknown field " + name);
  }

  std::string source_;
  std::vector<Field> fields_;
  std::vector<int> column_of_;
  std::size_t width_ = 0;
  std::size_t header_line_ = 0;
  std::vector<Row> rows_;
};

// key = value files.
class Manifest {
 public:
  Manifest(const fs::path& path, std::vector<Field> fields) : source_(path.string()), fields_(std::move(fields)) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ParseError(source_, line_no, "expected 'key = value'");
      const std::string key = trim(std::string_view(t).substr(0, eq));
      const std::string value = trim(std::string_view(t).substr(eq + 1));
      const std::size_t k = match_field(fields_, key, source_, line_no, "");
      if (values_.count(fields_[k].name())) throw ParseError(source_, line_no, "duplicate key '" + key + "'");
      values_[fields_[k].name()] = {line_no, value};
    }
    for (const auto& f : fields_)
      if (f.required && !values_.count(f.name()))
        throw ParseError(source_, line_no, "missing required key '" + f.name() + "'");
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.second;
  }

  double number(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const auto v = parse_double(it->second.second);
    if (!v) throw ParseError(source_, it->second.first, key + ": malformed number '" + it->second.second + "'");
    return *v;
  }

  int integer(const std::string& key, int fallback) const {
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw ParseError(source_, line(key), key + ": expected an integer");
    return static_cast<int>(v);
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (const auto& part : split(it->second.second, ',')) {
      const auto v = parse_double(part);
      if (!v) throw ParseError(source_, it->second.first, key + ": malformed number '" + part + "'");
      out.push_back(*v);
    }
    return out;
  }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    const auto it = values_.find(key);
    if (it == values_.end() || it->second.second.empty()) return out;
    for (auto& part : split(it->second.second, ','))
      if (!part.empty()) out.push_back(std::move(part));
    return out;
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second.second;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ParseError(source_, it->second.first, key + ": expected true or false");
  }

  std::size_t line(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? 0 : it->second.first;
  }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<Field> fields_;
  std::map<std::string, std::pair<std::size_t, std::string>> values_;
};

std::vector<Field> curve_fields() {
  return {{"curve_anchor_price", "usd_per_mwh"},
          {"curve_anchor_quantity", "fraction"},
          {"curve_elasticity", ""},
          {"curve_segment", "fraction"},
          {"curve_base_price", "usd_per_mwh"}};
}

DemandCurveSpec read_curve(const Manifest& m, DemandCurveSpec c) {
  c.anchor_price = m.number("curve_anchor_price_usd_per_mwh", c.anchor_price);
  c.anchor_quantity_fraction = m.number("curve_anchor_quantity_fraction", c.anchor_quantity_fraction);
  c.elasticity = m.number("curve_elasticity", c.elasticity);
  c.segment_fraction = m.number("curve_segment_fraction", c.segment_fraction);
  c.base_price = m.number("curve_base_price_usd_per_mwh", c.base_price);
  return c;
}

// Hourly long-format table: every (hour, key) pair exactly once, hours 1..T.
template <typename Keys>
std::map<std::string, std::vector<double>> read_series(const Table& tab, const std::string& key_col,
                                                       const std::string& value_col, const Keys& keys, int hours,
                                                       bool allow_negative) {
  std::map<std::string, std::vector<double>> out;
  std::map<std::string, std::vector<bool>> seen;
  for (const auto& row : tab.rows()) {
    const int h = tab.integer(row, "hour", 0);
    if (h < 1 || h > hours)
      throw tab.fail(row, "hour", "hour " + std::to_string(h) + " outside 1.." + std::to_string(hours));
    const std::string key = tab.required_text(row, key_col);
    if (!keys.count(key)) throw tab.fail(row, key_col, "unknown " + key_col + " '" + key + "'");
    const double v = tab.number(row, value_col, 0.0);
    if (!allow_negative && v < 0.0) throw tab.fail(row, value_col, "negative value " + trim(tab.text(row, value_col)));
    auto& series = out[key];
    auto& mark = seen[key];
    if (series.empty()) {
      series.assign(static_cast<std::size_t>(hours), 0.0);
      mark.assign(static_cast<std::size_t>(hours), false);
    }
    const auto t = static_cast<std::size_t>(h - 1);
    if (mark[t]) throw tab.fail(row, "hour", "duplicate hour " + std::to_string(h) + " for '" + key + "'");
    mark[t] = true;
    series[t] = v;
  }
  for (const auto& [key, mark] : seen) {
    const auto missing = std::find(mark.begin(), mark.end(), false);
    if (missing != mark.end())
      throw Error(tab.source() + ": '" + key + "' has no value for hour " +
                  std::to_string(missing - mark.begin() + 1));
  }
  return out;
}

}  // namespace

Config load_config(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("config directory not found: " + dir.string());
  Config cfg;
  Scenario& s = cfg.scenario;

  std::vector<Field> keys = {{"name", ""},
                             {"zones", "", true},
                             {"sub_periods", ""},
                             {"hours_per_sub_period", ""},
                             {"hour_weight", "hours"},
                             {"voll", "usd_per_mwh"},
                             {"storage_sizing", ""},
                             {"sink_enabled", ""},
                             {"sink_capex", "usd_per_kw"},
                             {"sink_wacc", "fraction"},
                             {"sink_life", "years"},
                             {"sink_fom", "fraction"},
                             {"sink_zones", ""}};
  for (auto& f : curve_fields()) keys.push_back(f);
  const Manifest man(dir / "scenario.txt", keys);
  s.name = man.text("name", dir.filename().string());
  s.time.sub_periods = man.integer("sub_periods", 1);
  s.time.hours_per_sub_period = man.integer("hours_per_sub_period", 24);
  s.time.hour_weight = man.number("hour_weight_hours", 1.0);
  s.voll = man.number("voll_usd_per_mwh", s.voll);
  if (man.has("storage_sizing")) {
    const auto mode = parse_storage_sizing(man.text("storage_sizing", ""));
    if (!mode) throw ParseError(man.source(), man.line("storage_sizing"), "unknown storage_sizing");
    s.storage_sizing = *mode;
  }
  const int T = s.time.total_hours();
  if (T <= 0 || T > 8784) throw ParseError(man.source(), 0, "time structure gives " + std::to_string(T) + " hours");

  std::set<std::string> zone_ids;
  for (const auto& id : man.list("zones")) {
    if (!zone_ids.insert(id).second) throw ParseError(man.source(), man.line("zones"), "duplicate zone '" + id + "'");
    s.zones.push_back({id, {}, {}});
  }
  if (s.zones.empty()) throw ParseError(man.source(), man.line("zones"), "no zones listed");

  // Load.
  {
    const Table tab(dir / "load.csv", {{"hour", "", true}, {"zone", "", true}, {"load", "mw", true}});
    auto series = read_series(tab, "zone", "load_mw", zone_ids, T, false);
    for (auto& z : s.zones) {
      const auto it = series.find(z.id);
      if (it == series.end()) throw Error(tab.source() + ": no load for zone '" + z.id + "'");
      z.load = std::move(it->second);
    }
  }

  // Curtailment segments.
  if (fs::exists(dir / "nse.csv")) {
    const Table tab(dir / "nse.csv", {{"zone", "", true}, {"slope", "fraction", true}, {"size", "fraction", true}});
    for (const auto& row : tab.rows()) {
      const std::string z = tab.required_text(row, "zone");
      const int zi = s.zone_index(z);
      if (zi < 0) throw tab.fail(row, "zone", "unknown zone '" + z + "'");
      s.zones[static_cast<std::size_t>(zi)].nse_segments.push_back(
          {tab.number(row, "slope_fraction", 0.0), tab.number(row, "size_fraction", 0.0)});
    }
  }
  for (auto& z : s.zones)
    if (z.nse_segments.empty()) z.nse_segments.push_back({1.0, 1.0});

  // Fuels.
  struct Fuel {
    double price = 0.0;
    double co2 = 0.0;
  };
  std::map<std::string, Fuel> fuels;
  if (fs::exists(dir / "fuels.csv")) {
    const Table tab(dir / "fuels.csv",
                    {{"fuel", "", true}, {"price", "usd_per_mmbtu", true}, {"co2", "kg_per_mmbtu", true}});
    for (const auto& row : tab.rows()) {
      const std::string id = tab.required_text(row, "fuel");
      if (fuels.count(id)) throw tab.fail(row, "fuel", "duplicate fuel '" + id + "'");
      fuels[id] = {tab.number(row, "price_usd_per_mmbtu", 0.0), tab.number(row, "co2_kg_per_mmbtu", 0.0)};
    }
  }

  // Resources.
  std::set<std::string> cluster_ids;
  {
    const Table tab(dir / "resources.csv", {{"id", "", true},
                                            {"zone", "", true},
                                            {"kind", "", true},
                                            {"group", ""},
                                            {"unit_size", "mw"},
                                            {"existing_cap", "mw"},
                                            {"max_new_cap", "mw"},
                                            {"inv_cost", "usd_per_mw_yr"},
                                            {"fom_cost", "usd_per_mw_yr"},
                                            {"vom_cost", "usd_per_mwh"},
                                            {"heat_rate", "mmbtu_per_mwh"},
                                            {"fuel", ""},
                                            {"start_cost", "usd_per_start"},
                                            {"start_fuel", "mmbtu_per_start"},
                                            {"min_stable", "fraction"},
                                            {"ramp_up", "fraction_per_hour"},
                                            {"ramp_down", "fraction_per_hour"},
                                            {"min_up", "hours"},
                                            {"min_down", "hours"},
                                            {"charge_eff", "fraction"},
                                            {"discharge_eff", "fraction"},
                                            {"self_discharge", "fraction_per_hour"},
                                            {"duration", "hours"},
                                            {"energy_inv_cost", "usd_per_mwh_yr"},
                                            {"energy_fom_cost", "usd_per_mwh_yr"},
                                            {"existing_energy", "mwh"},
                                            {"qualifies_for", ""}});
    for (const auto& row : tab.rows()) {
      ResourceCluster c;
      c.id = tab.required_text(row, "id");
      if (!cluster_ids.insert(c.id).second) throw tab.fail(row, "id", "duplicate resource '" + c.id + "'");
      c.zone = tab.required_text(row, "zone");
      if (!zone_ids.count(c.zone)) throw tab.fail(row, "zone", "unknown zone '" + c.zone + "'");
      const auto kind = parse_resource_kind(tab.required_text(row, "kind"));
      if (!kind) throw tab.fail(row, "kind", "unknown kind '" + tab.text(row, "kind") + "'");
      c.kind = *kind;
      c.group = tab.text(row, "group");
      c.unit_size = tab.number(row, "unit_size_mw", 1.0);
      c.existing_cap = tab.number(row, "existing_cap_mw", 0.0);
      c.max_new_cap = tab.number(row, "max_new_cap_mw", -1.0);
      c.inv_cost = tab.number(row, "inv_cost_usd_per_mw_yr", 0.0);
      c.fom_cost = tab.number(row, "fom_cost_usd_per_mw_yr", 0.0);
      c.vom_cost = tab.number(row, "vom_cost_usd_per_mwh", 0.0);
      const double heat_rate = tab.number(row, "heat_rate_mmbtu_per_mwh", 0.0);
      const double start_fuel = tab.number(row, "start_fuel_mmbtu_per_start", 0.0);
      const std::string fuel = tab.text(row, "fuel");
      Fuel f;
      if (!fuel.empty()) {
        const auto it = fuels.find(fuel);
        if (it == fuels.end()) throw tab.fail(row, "fuel", "unknown fuel '" + fuel + "'");
        f = it->second;
      } else if (heat_rate != 0.0 || start_fuel != 0.0) {
        throw tab.fail(row, "fuel", "a heat rate or start fuel needs a fuel");
      }
      c.fuel_cost = fuel_cost_per_mwh(heat_rate, f.price);
      c.emissions_rate = emissions_per_mwh(heat_rate, f.co2);
      c.start_cost = start_cost_with_fuel(tab.number(row, "start_cost_usd_per_start", 0.0), start_fuel, f.price);
      c.min_stable = tab.number(row, "min_stable_fraction", 0.0);
      c.ramp_up = tab.number(row, "ramp_up_fraction_per_hour", 1.0);
      c.ramp_down = tab.number(row, "ramp_down_fraction_per_hour", 1.0);
      c.min_up = tab.integer(row, "min_up_hours", 0);
      c.min_down = tab.integer(row, "min_down_hours", 0);
      c.charge_eff = tab.number(row, "charge_eff_fraction", 1.0);
      c.discharge_eff = tab.number(row, "discharge_eff_fraction", 1.0);
      c.self_discharge = tab.number(row, "self_discharge_fraction_per_hour", 0.0);
      c.duration = tab.number(row, "duration_hours", 0.0);
      c.energy_inv_cost = tab.number(row, "energy_inv_cost_usd_per_mwh_yr", 0.0);
      c.energy_fom_cost = tab.number(row, "energy_fom_cost_usd_per_mwh_yr", 0.0);
      c.existing_energy_cap = tab.number(row, "existing_energy_mwh", 0.0);
      for (auto& id : split(tab.text(row, "qualifies_for"), ';'))
        if (!id.empty()) c.qualifies_for.insert(std::move(id));
      s.clusters.push_back(std::move(c));
    }
  }

  if (fs::exists(dir / "capacity_factors.csv")) {
    const Table tab(dir / "capacity_factors.csv",
                    {{"hour", "", true}, {"resource", "", true}, {"cap_factor", "", true}});
    auto series = read_series(tab, "resource", "cap_factor", cluster_ids, T, false);
    for (auto& c : s.clusters) {
      const auto it = series.find(c.id);
      if (it != series.end()) c.cap_factor = std::move(it->second);
    }
  }

  if (fs::exists(dir / "lines.csv")) {
    const Table tab(dir / "lines.csv", {{"id", "", true},
                                        {"from_zone", "", true},
                                        {"to_zone", "", true},
                                        {"existing_cap", "mw"},
                                        {"max_new_cap", "mw"},
                                        {"inv_cost", "usd_per_mw_yr"}});
    std::set<std::string> ids;
    for (const auto& row : tab.rows()) {
      TransmissionLine l;
      l.id = tab.required_text(row, "id");
      if (!ids.insert(l.id).second) throw tab.fail(row, "id", "duplicate line '" + l.id + "'");
      l.from_zone = tab.required_text(row, "from_zone");
      l.to_zone = tab.required_text(row, "to_zone");
      l.existing_cap = tab.number(row, "existing_cap_mw", 0.0);
      l.max_new_cap = tab.number(row, "max_new_cap_mw", -1.0);
      l.inv_cost = tab.number(row, "inv_cost_usd_per_mw_yr", 0.0);
      s.lines.push_back(std::move(l));
    }
  }

  if (fs::exists(dir / "policies.csv")) {
    const Table tab(dir / "policies.csv", {{"id", "", true},
                                           {"kind", "", true},
                                           {"zone", "", true},
                                           {"co2_rate", "t_per_mwh"},
                                           {"std", "fraction"}});
    std::map<std::string, std::size_t> index;
    for (const auto& row : tab.rows()) {
      const std::string id = tab.required_text(row, "id");
      const auto kind = parse_policy_kind(tab.required_text(row, "kind"));
      if (!kind) throw tab.fail(row, "kind", "unknown policy kind '" + tab.text(row, "kind") + "'");
      auto it = index.find(id);
      if (it == index.end()) {
        it = index.emplace(id, s.policies.size()).first;
        PolicySpec p;
        p.id = id;
        p.kind = *kind;
        s.policies.push_back(std::move(p));
      }
      auto& p = s.policies[it->second];
      if (p.kind != *kind) throw tab.fail(row, "kind", "policy '" + id + "' changes kind");
      const std::string zone = tab.required_text(row, "zone");
      if (!zone_ids.count(zone)) throw tab.fail(row, "zone", "unknown zone '" + zone + "'");
      const std::string col = p.is_co2() ? "co2_rate_t_per_mwh" : "std_fraction";
      if (!tab.has(col) || tab.text(row, col).empty()) throw tab.fail(row, "kind", "needs a value in " + col);
      if (!p.zone_values.emplace(zone, tab.number(row, col, 0.0)).second)
        throw tab.fail(row, "zone", "duplicate zone '" + zone + "' for policy '" + id + "'");
    }
  }

  if (fs::exists(dir / "deferrable.csv")) {
    const Table tab(dir / "deferrable.csv",
                    {{"id", "", true}, {"zone", "", true}, {"defer", "fraction", true}, {"max_delay", "hours", true}});
    std::set<std::string> ids;
    for (const auto& row : tab.rows()) {
      DeferrableLoad d;
      d.id = tab.required_text(row, "id");
      if (!ids.insert(d.id).second) throw tab.fail(row, "id", "duplicate deferrable load '" + d.id + "'");
      d.zone = tab.required_text(row, "zone");
      if (!zone_ids.count(d.zone)) throw tab.fail(row, "zone", "unknown zone '" + d.zone + "'");
      d.defer_fraction = tab.number(row, "defer_fraction", 0.0);
      d.max_delay = tab.integer(row, "max_delay_hours", 1);
      s.deferrable_loads.push_back(std::move(d));
    }
    const Table prof(dir / "deferrable_profile.csv", {{"hour", "", true}, {"load", "", true}, {"base", "mw", true}});
    auto series = read_series(prof, "load", "base_mw", ids, T, false);
    for (auto& d : s.deferrable_loads) {
      const auto it = series.find(d.id);
      if (it == series.end()) throw Error(prof.source() + ": no profile for deferrable load '" + d.id + "'");
      d.base_profile = std::move(it->second);
    }
  }

  // Sink and product market.
  cfg.sink.capex = man.number("sink_capex_usd_per_kw", 0.0);
  cfg.sink.finance.wacc = man.number("sink_wacc_fraction", cfg.sink.finance.wacc);
  cfg.sink.finance.life = man.number("sink_life_years", cfg.sink.finance.life);
  cfg.sink.finance.fom_fraction = man.number("sink_fom_fraction", cfg.sink.finance.fom_fraction);
  cfg.sink.allowed_zones = man.list("sink_zones");
  if (cfg.sink.allowed_zones.empty())
    for (const auto& z : s.zones) cfg.sink.allowed_zones.push_back(z.id);
  for (const auto& z : cfg.sink.allowed_zones)
    if (!zone_ids.count(z)) throw ParseError(man.source(), man.line("sink_zones"), "unknown zone '" + z + "'");
  cfg.sink.annuity = annualized_capex(cfg.sink.capex, cfg.sink.finance);
  cfg.curve = read_curve(man, DemandCurveSpec{});
  if (man.flag("sink_enabled", false)) {
    s.sink = cfg.sink;
    s.segments = build_demand_curve(cfg.curve, annual_load(s));
  }

  require_valid(s);

  if (fs::exists(dir / "sweep.txt")) cfg.grid = load_grid(dir / "sweep.txt", default_grid(cfg));
  return cfg;
}

SweepGrid default_grid(const Config& config) {
  SweepGrid g;
  g.finance = config.sink.finance;
  g.curve = config.curve;
  return g;
}

SweepGrid load_grid(const fs::path& file, const SweepGrid& defaults) {
  std::vector<Field> keys = {{"capex", "usd_per_kw", true},
                             {"base_price", "usd_per_mwh", true},
                             {"wacc", "fraction"},
                             {"life", "years"},
                             {"fom", "fraction"}};
  for (auto& f : curve_fields()) {
    if (f.stem == "curve_base_price") continue;
    keys.push_back(f);
  }
  const Manifest m(file, keys);
  SweepGrid g = defaults;
  g.capex_values = m.numbers("capex_usd_per_kw");
  g.base_prices = m.numbers("base_price_usd_per_mwh");
  g.finance.wacc = m.number("wacc_fraction", g.finance.wacc);
  g.finance.life = m.number("life_years", g.finance.life);
  g.finance.fom_fraction = m.number("fom_fraction", g.finance.fom_fraction);
  g.curve = read_curve(m, g.curve);
  auto check = [&](const std::vector<double>& v, const std::string& key) {
    if (v.empty()) throw ParseError(m.source(), m.line(key), key + ": empty list");
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParseError(m.source(), m.line(key), key + ": duplicate values");
  };
  check(g.capex_values, "capex_usd_per_kw");
  check(g.base_prices, "base_price_usd_per_mwh");
  for (double c : g.capex_values)
    if (c < 0.0) throw ParseError(m.source(), m.line("capex_usd_per_kw"), "capex_usd_per_kw: negative capex");
  return g;
}

}  // namespace sinkplan
