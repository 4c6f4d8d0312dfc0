#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "sinkplan/config.hpp"
#include "sinkplan/error.hpp"
#include "sinkplan/model.hpp"
#include "support.hpp"

using namespace sinkplan;
using sinkplan::test::single_zone;

namespace {

Scenario well_formed() {
  Scenario s = single_zone({100, 120, 90, 80});
  s.clusters.push_back(test::dispatchable("gas", "Z1", 60000, 30));
  s.clusters.push_back(test::vre("pv", "Z1", 50000, {0.0, 0.5, 0.8, 0.1}));
  s.clusters.push_back(test::battery("bat", "Z1", 40000));
  return s;
}

bool names_field(const std::vector<Violation>& v, const std::string& field) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.field == field; });
}

}  // namespace

TEST(Validate, WellFormedScenario) { EXPECT_TRUE(validate(well_formed()).empty()); }

TEST(Validate, MinStableOutOfRange) {
  Scenario s = well_formed();
  s.clusters[0].min_stable = 1.2;
  const auto v = validate(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "min_stable");
  EXPECT_NE(v[0].entity.find("gas"), std::string::npos);
}

TEST(Validate, DanglingLineZone) {
  Scenario s = well_formed();
  s.lines.push_back({"l1", "Z9", "Z1", 0, 10, 1000});
  const auto v = validate(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "from_zone");
}

TEST(Validate, CollectsEveryViolation) {
  Scenario s = well_formed();
  s.zones[0].load[2] = -1;
  s.clusters[1].cap_factor[0] = 1.5;
  s.clusters[2].charge_eff = 0.0;
  s.clusters[0].start_cost = 100;  // UC field on a non-UC cluster
  const auto v = validate(s);
  EXPECT_TRUE(names_field(v, "load"));
  EXPECT_TRUE(names_field(v, "cap_factor"));
  EXPECT_TRUE(names_field(v, "charge_eff"));
  EXPECT_TRUE(names_field(v, "start_cost"));
  EXPECT_THROW(require_valid(s), Error);
}

TEST(Validate, NseSegmentsMustCoverDemand) {
  Scenario s = well_formed();
  s.zones[0].nse_segments = {{0.5, 0.4}, {1.0, 0.4}};
  EXPECT_TRUE(names_field(validate(s), "nse_segments"));
}

TEST(Validate, TimeStructure) {
  Scenario s = well_formed();
  s.time.hours_per_sub_period = 1;
  EXPECT_FALSE(validate(s).empty());
  s = well_formed();
  s.time.sub_periods = 0;
  EXPECT_FALSE(validate(s).empty());
}

TEST(Validate, SinkAnnuityMustMatch) {
  Scenario s = test::with_sink(well_formed(), 400, 40);
  EXPECT_TRUE(validate(s).empty());
  s.sink->annuity *= 1.01;
  EXPECT_FALSE(validate(s).empty());
}

TEST(Validate, IsIdempotent) {
  Scenario s = well_formed();
  s.clusters[0].min_stable = 2;
  s.lines.push_back({"l1", "Z1", "Z7", 0, 10, 1000});
  const Scenario copy = s;
  const auto a = validate(s);
  const auto b = validate(s);
  EXPECT_EQ(a, b);
  EXPECT_EQ(s.clusters[0].min_stable, copy.clusters[0].min_stable);
}

TEST(PeakLoad, Examples) {
  Scenario s = single_zone({1, 2});
  Zone z2;
  z2.id = "Z2";
  z2.load = {3, 4};
  z2.nse_segments = {{1.0, 1.0}};
  s.zones.push_back(z2);
  EXPECT_DOUBLE_EQ(peak_load(s), 6.0);
  EXPECT_DOUBLE_EQ(peak_load(single_zone(std::vector<double>(24, 100.0))), 100.0);
}

TEST(PeakLoad, EmptySeriesThrows) {
  Scenario s;
  EXPECT_THROW(peak_load(s), Error);
}

TEST(AnnualLoad, Examples) {
  Scenario flat = single_zone(std::vector<double>(8760, 100.0));
  EXPECT_DOUBLE_EQ(annual_load(flat), 876000.0);
  EXPECT_DOUBLE_EQ(annual_load(single_zone({1, 3})), 4.0);
  EXPECT_DOUBLE_EQ(annual_load(single_zone({1, 3}, 365.0)), 1460.0);
}

TEST(NorthernSystem, PeakAndAnnualLoad) {
  const Config cfg = load_config(test::config_dir("northern"));
  EXPECT_NEAR(peak_load(cfg.scenario), 54256.0, 1e-6);
  EXPECT_NEAR(annual_load(cfg.scenario), 234e6, 0.01 * 234e6);
}

TEST(Loads, InvariantUnderZoneOrderAndChunking) {
  Scenario s = single_zone({5, 9, 2, 7, 3, 8});
  Zone z2;
  z2.id = "Z2";
  z2.load = {1, 1, 6, 0, 4, 2};
  z2.nse_segments = {{1.0, 1.0}};
  s.zones.push_back(z2);
  const double peak = peak_load(s), annual = annual_load(s);

  Scenario reordered = s;
  std::swap(reordered.zones[0], reordered.zones[1]);
  EXPECT_DOUBLE_EQ(peak_load(reordered), peak);
  EXPECT_DOUBLE_EQ(annual_load(reordered), annual);

  Scenario chunked = s;
  chunked.time.sub_periods = 3;
  chunked.time.hours_per_sub_period = 2;
  EXPECT_DOUBLE_EQ(peak_load(chunked), peak);
  EXPECT_DOUBLE_EQ(annual_load(chunked), annual);
}

TEST(WithoutSink, DropsSinkAndMarket) {
  Scenario s = test::with_sink(well_formed(), 400, 40);
  ASSERT_TRUE(s.sink.has_value());
  ASSERT_FALSE(s.segments.empty());
  const Scenario r = s.without_sink();
  EXPECT_FALSE(r.sink.has_value());
  EXPECT_TRUE(r.segments.empty());
  EXPECT_EQ(r.clusters.size(), s.clusters.size());
}

// Every parameter of the formulation appears exactly once in the symbol
// table and maps to a distinct scenario field.
TEST(SymbolAudit, EveryParameterMapped) {
  const std::set<std::string> expected = {
      "voll",          "d_{h,w,z}",       "n^{slope}_s",   "n^{size}_s",      "y^{P^}_g",     "y^{Pv}_g",
      "y^{PD}_g",      "y^{F^}_l",        "y^{Fv}_l",      "c^{Pi}_g",        "c^{Fi}_l",     "c^{Pom}_g",
      "c^{o}_g",       "c^{f}_g",         "c^{st}_g",      "eps^{CO2}_g",     "rho^{^}_{g,h}", "rho^{v}_g",
      "eta^{0}_g",     "eta^{+}_g",       "eta^{-}_g",     "delta_g",         "kappa^{+}_g",  "kappa^{-}_g",
      "tau^{+}_g",     "tau^{-}_g",       "mu^{f}_g",      "tau^{f}_g",       "phi^{map}_{l,z}", "eps^{max}_z",
      "eps^{STD}_{i,z}", "c^{DS}",        "x^{C^}_q",      "x^{value}_q"};
  std::set<std::string> symbols, fields;
  for (const auto& p : parameter_symbols()) {
    EXPECT_TRUE(symbols.insert(std::string(p.symbol)).second) << "duplicate symbol " << p.symbol;
    EXPECT_TRUE(fields.insert(std::string(p.field)).second) << "field mapped twice " << p.field;
    EXPECT_FALSE(p.field.empty());
  }
  EXPECT_EQ(symbols, expected);
}

TEST(Labels, RoundTrip) {
  for (auto k : {ResourceKind::thermal_uc, ResourceKind::dispatchable, ResourceKind::vre, ResourceKind::storage})
    EXPECT_EQ(parse_resource_kind(to_string(k)), k);
  for (auto k : {PolicyKind::co2_cap_zonal, PolicyKind::co2_cap_system, PolicyKind::energy_standard_zonal,
                 PolicyKind::energy_standard_system})
    EXPECT_EQ(parse_policy_kind(to_string(k)), k);
  for (auto m : {StorageSizing::fixed_ratio, StorageSizing::independent_energy})
    EXPECT_EQ(parse_storage_sizing(to_string(m)), m);
  EXPECT_FALSE(parse_resource_kind("nuclear").has_value());
}
