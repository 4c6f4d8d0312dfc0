#include <gtest/gtest.h>

#include <cmath>

#include "sinkplan/certify.hpp"
#include "sinkplan/config.hpp"
#include "sinkplan/error.hpp"
#include "sinkplan/formulation.hpp"
#include "sinkplan/simplex.hpp"
#include "support.hpp"

using namespace sinkplan;

namespace {

// Two generators at 10 and 30 $/MWh, 10 MW each, 15 MW of load, plus a
// spare row that is slack at the optimum.
LinearProgram dispatch() {
  LinearProgram lp;
  lp.add_col("g1", 10.0, 0.0, 10.0);
  lp.add_col("g2", 30.0, 0.0, 10.0);
  lp.add_row("demand", RowSense::eq, 15.0, {{0, 1.0}, {1, 1.0}});
  lp.add_row("spare", RowSense::le, 100.0, {{0, 2.0}, {1, 3.0}});
  return lp;
}

std::string error_of(const LinearProgram& lp, const std::string& text, const NameTable* names = nullptr) {
  try {
    read_external_solution(lp, text, names);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Certify, InternalSolvePasses) {
  const LinearProgram lp = dispatch();
  const ResidualReport r = certify(lp, solve(lp));
  EXPECT_TRUE(r.passes(1e-6)) << r.summary();
  EXPECT_LE(r.max_row_residual, 1e-9);
  EXPECT_LE(r.duality_gap, 1e-9);
}

TEST(Certify, PerturbedPrimalNamesTightRow) {
  const LinearProgram lp = dispatch();
  Solution s = solve(lp);
  s.primal[1] += 1e-3;
  const ResidualReport r = certify(lp, s);
  EXPECT_NEAR(r.max_row_residual, 1e-3, 1e-9);
  EXPECT_EQ(r.worst_row_name, "demand");
  EXPECT_FALSE(r.passes(1e-6));
}

TEST(Certify, BoundViolationNamesColumn) {
  const LinearProgram lp = dispatch();
  Solution s = solve(lp);
  s.primal[0] = 10.5;
  s.primal[1] = 4.5;
  const ResidualReport r = certify(lp, s);
  EXPECT_NEAR(r.max_bound_violation, 0.5, 1e-12);
  EXPECT_EQ(r.worst_column_name, "g1");
}

TEST(Certify, ZeroProgram) {
  LinearProgram lp;
  lp.add_col("x", 0.0, 0.0, 1.0);
  const ResidualReport r = certify(lp, solve(lp));
  EXPECT_EQ(r.max_row_residual, 0.0);
  EXPECT_EQ(r.max_bound_violation, 0.0);
  EXPECT_EQ(r.duality_gap, 0.0);
  EXPECT_EQ(r.max_complementarity, 0.0);
  const ResidualReport empty = certify(LinearProgram{}, solve(LinearProgram{}));
  EXPECT_TRUE(empty.passes(0.0));
}

TEST(Certify, WrongLengthsThrow) {
  const LinearProgram lp = dispatch();
  Solution s = solve(lp);
  s.duals.pop_back();
  EXPECT_THROW(certify(lp, s), Error);
}

TEST(Certify, ScaledDualsReportGap) {
  const LinearProgram lp = dispatch();
  Solution s = solve(lp);
  for (auto& y : s.duals) y *= 2;
  const ResidualReport r = certify(lp, s);
  EXPECT_GT(r.duality_gap, 1e-3);
  const std::string err = error_of(lp, write_solution(lp, s));
  EXPECT_NE(err.find("fails certification"), std::string::npos) << err;
  EXPECT_NE(err.find("duality gap"), std::string::npos) << err;
}

TEST(ExternalSolution, RoundTripIsIdentical) {
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    const Formulation f = assemble(test::random_scenario(seed));
    const Solution s = solve(f.lp);
    ASSERT_EQ(s.status, SolveStatus::optimal);
    const Solution back = read_external_solution(f.lp, write_solution(f.lp, s));
    EXPECT_EQ(back.status, s.status);
    EXPECT_EQ(back.objective, s.objective);
    EXPECT_EQ(back.primal, s.primal);
    EXPECT_EQ(back.duals, s.duals);
    ASSERT_EQ(back.reduced_costs.size(), s.reduced_costs.size());
    for (std::size_t j = 0; j < s.reduced_costs.size(); ++j)
      EXPECT_NEAR(back.reduced_costs[j], s.reduced_costs[j], 1e-9 * std::max(1.0, std::fabs(f.lp.objective[j])));
  }
}

TEST(ExternalSolution, MangledNames) {
  const Config cfg = load_config(test::config_dir("tiny"));
  const Formulation f = assemble(cfg.scenario.without_sink());
  const NameTable names = mps_names(f.lp, MpsFormat::fixed);
  ASSERT_FALSE(names.identity);
  const Solution s = solve(f.lp);
  const std::string text = write_solution(f.lp, s, &names);
  EXPECT_NE(text.find("COL C0000000 "), std::string::npos);
  EXPECT_EQ(read_external_solution(f.lp, text, &names).primal, s.primal);
  // Keyed by mangled names, the original names are unknown.
  EXPECT_NE(error_of(f.lp, text).find("unknown column 'C0000000'"), std::string::npos);
}

TEST(ExternalSolution, MissingColumnNamed) {
  const LinearProgram lp = dispatch();
  std::string text = write_solution(lp, solve(lp));
  const auto at = text.find("COL g2");
  text.erase(at, text.find('\n', at) - at + 1);
  const std::string err = error_of(lp, text);
  EXPECT_NE(err.find("column g2"), std::string::npos) << err;
}

TEST(ExternalSolution, MalformedInput) {
  const LinearProgram lp = dispatch();
  EXPECT_THROW(read_external_solution(lp, "COL g1 1\n"), ParseError);
  EXPECT_THROW(read_external_solution(lp, "STATUS done OBJ 1\n"), ParseError);
  EXPECT_THROW(read_external_solution(lp, "STATUS optimal OBJ 250\nCOL g1 abc\n"), ParseError);
  EXPECT_THROW(read_external_solution(lp, "STATUS optimal OBJ 250\nCOL g1 1\nCOL g1 2\n"), ParseError);
  EXPECT_THROW(read_external_solution(lp, ""), ParseError);
}

TEST(ExternalSolution, NonOptimalStatusSkipsChecks) {
  const LinearProgram lp = dispatch();
  const Solution s = read_external_solution(lp, "STATUS infeasible OBJ 0\n");
  EXPECT_EQ(s.status, SolveStatus::infeasible);
}

TEST(ExternalSolution, HandSolvedVertex) {
  // min x + 2y with x + y >= 2, x - 0.5y <= 1.25: vertex x = 1.5, y = 0.5,
  // duals 5/3 and -2/3 written with 17 digits.
  LinearProgram lp;
  lp.add_col("x", 1.0, 0.0, 4.0);
  lp.add_col("y", 2.0, -kInf, kInf);
  lp.add_row("c1", RowSense::ge, 2.0, {{0, 1.0}, {1, 1.0}});
  lp.add_row("c2", RowSense::le, 1.25, {{0, 1.0}, {1, -0.5}});
  const std::string text =
      "STATUS optimal OBJ 2.5\nCOL x 1.5\nCOL y 0.5\nROW c1 1.6666666666666667\nROW c2 -0.66666666666666663\n";
  const Solution s = read_external_solution(lp, text);
  EXPECT_TRUE(certify(lp, s).passes(1e-12));
  const Solution internal = solve(lp);
  EXPECT_NEAR(internal.objective, 2.5, 1e-12);
  EXPECT_NEAR(internal.duals[0], 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(internal.duals[1], -2.0 / 3.0, 1e-12);
}
