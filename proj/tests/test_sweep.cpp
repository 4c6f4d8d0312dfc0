#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sinkplan/config.hpp"
#include "sinkplan/error.hpp"
#include "sinkplan/mps.hpp"
#include "sinkplan/sweep.hpp"
#include "support.hpp"

using namespace sinkplan;
namespace fs = std::filesystem;

namespace {

const Config& tiny() {
  static const Config cfg = load_config(test::config_dir("tiny"));
  return cfg;
}

SweepGrid grid(std::vector<double> capex, std::vector<double> prices) {
  SweepGrid g = *tiny().grid;
  g.capex_values = std::move(capex);
  g.base_prices = std::move(prices);
  return g;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sinkplan_sweep_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

double frozen_reference_objective() {
  std::istringstream in(test::read_file(test::golden_path("tiny_reference_objective.txt")));
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') return std::stod(line);
  throw Error("no value in tiny_reference_objective.txt");
}

}  // namespace

TEST(Sweep, TwoByTwoGridCounts) {
  const SweepResult r = run_sweep(tiny().scenario, tiny().sink, grid({200, 1400}, {40, 100}));
  EXPECT_EQ(r.reference.id, "reference");
  ASSERT_EQ(r.cells.size(), 4u);
  EXPECT_EQ(r.cells[0].id, cell_id(200, 40));
  EXPECT_EQ(r.cells[1].id, cell_id(200, 100));
  EXPECT_EQ(r.cells[2].id, cell_id(1400, 40));
  EXPECT_EQ(r.cells[3].id, cell_id(1400, 100));
  for (const auto& c : r.cells) {
    ASSERT_TRUE(c.ok()) << c.id << ": " << c.error;
    EXPECT_TRUE(c.residuals->passes(1e-6)) << c.id;
  }
  const auto lines = lines_of(results_csv(r));
  EXPECT_EQ(lines.size(), 6u);
}

TEST(Sweep, IndependentOfWorkerCount) {
  const SweepGrid g = grid({200, 1400}, {40, 100});
  SweepOptions one, four;
  four.threads = 4;
  EXPECT_EQ(results_csv(run_sweep(tiny().scenario, tiny().sink, g, one)),
            results_csv(run_sweep(tiny().scenario, tiny().sink, g, four)));
}

TEST(Sweep, UnprofitableCornerBuildsNoSink) {
  const SweepResult r = run_sweep(tiny().scenario, tiny().sink, grid({1400}, {-15}));
  const CellResult& c = r.cells.at(0);
  ASSERT_TRUE(c.ok()) << c.error;
  EXPECT_LE(c.metrics->sink_capacity_mw, 1e-6);
}

TEST(Sweep, ReferenceMatchesFrozenObjective) {
  const MetricsReport ref = run_reference(tiny().scenario);
  const double want = frozen_reference_objective();
  EXPECT_LE(std::fabs(ref.objective - want) / std::fabs(want), 1e-6) << ref.objective << " vs " << want;
}

TEST(Sweep, ReferenceWithoutSinkIsPlainSolve) {
  const Scenario plain = tiny().scenario.without_sink();
  const MetricsReport ref = run_reference(plain);
  const sinkplan::Run run = solve_scenario(plain);
  ASSERT_TRUE(certified(run));
  EXPECT_EQ(ref.objective, run.solution.objective);
}

TEST(Sweep, ReferenceDeltasVanish) {
  const SweepResult r = run_sweep(tiny().scenario, tiny().sink, grid({800}, {40}));
  ASSERT_TRUE(r.reference.ok());
  const auto& d = r.reference.metrics->deltas;
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->system_cost, 0.0);
  EXPECT_EQ(d->capacity, CapacityByGroup{});
}

TEST(Sweep, ReferenceDeltaConsistency) {
  const SweepResult r = run_sweep(tiny().scenario, tiny().sink, grid({200, 800}, {40, 100}));
  const double ref = r.reference.metrics->objective;
  for (const auto& c : r.cells) {
    ASSERT_TRUE(c.ok()) << c.error;
    const auto& m = *c.metrics;
    const double want = (m.objective + m.sink_revenue - m.sink_capex) - ref;
    EXPECT_LE(std::fabs(m.deltas->system_cost - want), 1e-6 * std::max(1.0, std::fabs(ref))) << c.id;
    if (m.sink_capacity_mw > 1e-6) {
      EXPECT_TRUE(m.average_output_value.has_value()) << c.id;
    }
  }
}

TEST(Sweep, ReferenceFailureIsFatal) {
  Scenario s = test::single_zone({10, 10});
  s.clusters.push_back(test::dispatchable("g", "Z1", 100, 20));
  s.policies.push_back({"res", PolicyKind::energy_standard_system, {{"Z1", 1.0}}});
  try {
    run_reference(s);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("infeasible"), std::string::npos) << e.what();
  }
}

TEST(Sweep, CellFailureIsIsolated) {
  // A negative capex fails validation; the other cell still runs.
  const SweepResult r = run_sweep(tiny().scenario, tiny().sink, grid({-5, 800}, {40}));
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_FALSE(r.cells[0].error.empty());
  EXPECT_TRUE(r.cells[1].ok()) << r.cells[1].error;
}

TEST(Sweep, MpsOnlySkipsSolves) {
  SweepOptions opt;
  opt.mps_only = true;
  const SweepResult r = run_sweep(tiny().scenario, tiny().sink, grid({200, 1400}, {40}), opt);
  for (const auto& c : r.cells) {
    EXPECT_FALSE(c.status.has_value()) << c.id;
    EXPECT_FALSE(c.metrics.has_value());
    EXPECT_FALSE(c.mps.empty());
    EXPECT_NO_THROW(parse_mps(c.mps));
  }
  const fs::path out = scratch("mps_only");
  emit(r, out, {"0", "t"});
  EXPECT_TRUE(fs::exists(out / "mps" / (cell_id(200, 40) + ".mps")));
  EXPECT_TRUE(fs::exists(out / "mps" / "reference.mps"));
  fs::remove_all(out);
}

TEST(Emit, FilesAndSchema) {
  SweepOptions opt;
  opt.write_mps = true;
  const SweepResult r = run_sweep(tiny().scenario, tiny().sink, grid({800}, {40, 100}), opt);
  const fs::path a = scratch("emit_a"), b = scratch("emit_b");
  emit(r, a, {"abc", "2026-01-01T00:00:00Z"});
  emit(r, b, {"abc", "2026-01-02T00:00:00Z"});

  const std::string csv = test::read_file(a / "results.csv");
  std::string header;
  for (const auto& c : results_columns()) header += (header.empty() ? "" : ",") + c;
  EXPECT_EQ(lines_of(csv).at(0), header);
  EXPECT_EQ(lines_of(csv).size(), 4u);
  // Header documented in docs/formats.md.
  EXPECT_NE(test::read_file(fs::path(SINKPLAN_SOURCE_DIR) / "docs" / "formats.md").find(header), std::string::npos);

  for (const auto& id : {std::string("reference"), cell_id(800, 40), cell_id(800, 100)}) {
    const std::string pd = test::read_file(a / "price_duration" / (id + ".csv"));
    EXPECT_EQ(lines_of(pd).size(), 25u) << id;
    EXPECT_EQ(lines_of(pd).at(0), "rank,system_usd_per_mwh,Z1_usd_per_mwh");
    EXPECT_TRUE(fs::exists(a / "mps" / (id + ".mps")));
  }
  const std::string manifest = test::read_file(a / "manifest.txt");
  EXPECT_NE(manifest.find("config_hash = abc"), std::string::npos) << manifest;
  EXPECT_NE(manifest.find(std::string(version())), std::string::npos);

  // Identical apart from the manifest timestamp.
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    if (rel == "manifest.txt") continue;
    EXPECT_EQ(test::read_file(entry.path()), test::read_file(b / rel)) << rel;
  }
  auto strip = [](const std::string& text) {
    std::string out;
    for (const auto& l : lines_of(text))
      if (l.rfind("created", 0) != 0) out += l + "\n";
    return out;
  };
  EXPECT_EQ(strip(manifest), strip(test::read_file(b / "manifest.txt")));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Emit, UnwritableDirectory) {
  const fs::path file = scratch("not_a_dir");
  std::ofstream(file) << "x";
  const SweepResult r = run_sweep(tiny().scenario, tiny().sink, grid({800}, {40}), [] {
    SweepOptions o;
    o.mps_only = true;
    return o;
  }());
  EXPECT_THROW(emit(r, file / "out", {"0", "t"}), std::exception);
  fs::remove_all(file);
}

TEST(Sweep, CellIds) {
  EXPECT_EQ(cell_id(200, 40), "capex200_price40");
  EXPECT_EQ(cell_id(1400, -15), "capex1400_price-15");
  EXPECT_EQ(cell_id(200, 12.5), "capex200_price12.5");
}

TEST(Sweep, CellScenarioUsesGridCurve) {
  const SweepGrid g = grid({400}, {70});
  const Scenario s = cell_scenario(tiny().scenario, tiny().sink, g, 400, 70);
  ASSERT_TRUE(s.sink.has_value());
  EXPECT_DOUBLE_EQ(s.sink->annuity, annualized_capex(400, g.finance));
  DemandCurveSpec curve = g.curve;
  curve.base_price = 70;
  const auto want = build_demand_curve(curve, annual_load(s));
  ASSERT_EQ(s.segments.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_DOUBLE_EQ(s.segments[k].value, want[k].value);
  EXPECT_TRUE(validate(s).empty());
}

TEST(Sweep, InputHash) {
  const fs::path dir = scratch("hash");
  fs::copy(test::config_dir("tiny"), dir);
  const std::string h = hash_inputs(dir);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h, hash_inputs(dir));
  std::ofstream(dir / "load.csv", std::ios::app) << "\n";
  EXPECT_NE(h, hash_inputs(dir));
  fs::remove_all(dir);
}

TEST(Sweep, DefaultThreadsFromEnvironment) {
  const char* saved = std::getenv("SINKPLAN_THREADS");
  const std::string keep = saved ? saved : "";
  ::setenv("SINKPLAN_THREADS", "6", 1);
  EXPECT_EQ(default_threads(), 6u);
  ::setenv("SINKPLAN_THREADS", "zero", 1);
  EXPECT_EQ(default_threads(), 1u);
  ::setenv("SINKPLAN_THREADS", "0", 1);
  EXPECT_EQ(default_threads(), 1u);
  ::unsetenv("SINKPLAN_THREADS");
  EXPECT_EQ(default_threads(), 1u);
  if (saved) ::setenv("SINKPLAN_THREADS", keep.c_str(), 1);
}
