#include "sinkplan/certify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "sinkplan/error.hpp"

namespace sinkplan {

bool ResidualReport::passes(double tolerance) const {
  return max_row_residual <= tolerance && max_bound_violation <= tolerance && duality_gap <= tolerance &&
         max_complementarity <= tolerance;
}

std::string ResidualReport::summary() const {
  std::ostringstream os;
  os << "row residual " << max_row_residual;
  if (!worst_row_name.empty()) os << " (" << worst_row_name << ")";
  os << ", bound violation " << max_bound_violation;
  if (!worst_column_name.empty()) os << " (" << worst_column_name << ")";
  os << ", duality gap " << duality_gap << ", complementarity " << max_complementarity << ", dual infeasibility "
     << max_dual_infeasibility;
  return os.str();
}

ResidualReport certify(const LinearProgram& lp, const Solution& solution) {
  const std::size_t m = lp.n_rows();
  const std::size_t n = lp.n_cols();
  if (solution.primal.size() != n) throw Error("certify: primal vector has the wrong length");
  if (solution.duals.size() != m) throw Error("certify: dual vector has the wrong length");
  const auto& x = solution.primal;
  const auto& y = solution.duals;

  ResidualReport rep;
  double primal_obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) primal_obj += lp.objective[j] * x[j];
  const double obj_scale = std::max(1.0, std::fabs(primal_obj));

  std::vector<double> act(m, 0.0), row_max(m, 0.0), d = lp.objective, d_size(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) d_size[j] = std::fabs(lp.objective[j]);
  for (const auto& t : lp.matrix) {
    act[t.row] += t.value * x[t.col];
    row_max[t.row] = std::max(row_max[t.row], std::fabs(t.value));
    d[t.col] -= t.value * y[t.row];
    d_size[t.col] += std::fabs(t.value * y[t.row]);
  }
  double cost_max = 1.0;
  for (double c : lp.objective) cost_max = std::max(cost_max, std::fabs(c));

  double dual_obj = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double slack = act[i] - lp.rhs[i];
    double viol = 0.0;
    double wrong = 0.0;
    switch (lp.senses[i]) {
      case RowSense::le:
        viol = std::max(0.0, slack);
        wrong = std::max(0.0, y[i]);
        break;
      case RowSense::ge:
        viol = std::max(0.0, -slack);
        wrong = std::max(0.0, -y[i]);
        break;
      case RowSense::eq:
        viol = std::fabs(slack);
        break;
    }
    const double scaled = viol / std::max(1.0, row_max[i]);
    if (scaled > rep.max_row_residual) {
      rep.max_row_residual = scaled;
      rep.worst_row_name = lp.row_names[i];
    }
    rep.max_dual_infeasibility = std::max(rep.max_dual_infeasibility, wrong / cost_max);
    rep.max_complementarity = std::max(rep.max_complementarity, std::fabs(y[i] * slack) / obj_scale);
    dual_obj += lp.rhs[i] * y[i];
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.col_lower[j];
    const double up = lp.col_upper[j];
    const double viol = std::max({0.0, lo - x[j], x[j] - up});
    if (viol > rep.max_bound_violation) {
      rep.max_bound_violation = viol;
      rep.worst_column_name = lp.col_names[j];
    }
    // A positive reduced cost is priced against the lower bound, a negative
    // one against the upper bound. Against an infinite bound it is dual
    // infeasible; x stands in for the bound so the gap stays finite.
    const double bound = d[j] > 0.0 ? lo : up;
    if (d[j] == 0.0) continue;
    if (std::isfinite(bound)) {
      dual_obj += d[j] * bound;
      rep.max_complementarity = std::max(rep.max_complementarity, std::fabs(d[j] * (x[j] - bound)) / obj_scale);
    } else {
      dual_obj += d[j] * x[j];
      rep.max_dual_infeasibility = std::max(rep.max_dual_infeasibility, std::fabs(d[j]) / std::max(1.0, d_size[j]));
    }
  }
  rep.duality_gap = std::fabs(primal_obj - dual_obj) / obj_scale;
  return rep;
}

std::string write_solution(const LinearProgram& lp, const Solution& solution, const NameTable* names) {
  const auto& cols = names ? names->cols : lp.col_names;
  const auto& rows = names ? names->rows : lp.row_names;
  std::string out = "STATUS " + std::string(to_string(solution.status)) + " OBJ " + format_number(solution.objective) + "\n";
  for (std::size_t j = 0; j < solution.primal.size(); ++j)
    out += "COL " + cols[j] + " " + format_number(solution.primal[j]) + "\n";
  for (std::size_t i = 0; i < solution.duals.size(); ++i)
    out += "ROW " + rows[i] + " " + format_number(solution.duals[i]) + "\n";
  return out;
}

namespace {

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

std::string list_names(const std::vector<std::string>& names) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(names.size(), 10);
  for (std::size_t k = 0; k < shown; ++k) out += (k ? ", " : "") + names[k];
  if (names.size() > shown) out += " and " + std::to_string(names.size() - shown) + " more";
  return out;
}

}  // namespace

Solution read_external_solution(const LinearProgram& lp, std::string_view text, const NameTable* names,
                                double tolerance, const std::string& source) {
  const auto& col_names = names ? names->cols : lp.col_names;
  const auto& row_names = names ? names->rows : lp.row_names;
  std::unordered_map<std::string_view, std::size_t> col_of, row_of;
  for (std::size_t j = 0; j < col_names.size(); ++j) col_of.emplace(col_names[j], j);
  for (std::size_t i = 0; i < row_names.size(); ++i) row_of.emplace(row_names[i], i);

  Solution sol;
  sol.primal.assign(lp.n_cols(), 0.0);
  sol.duals.assign(lp.n_rows(), 0.0);
  std::vector<bool> have_col(lp.n_cols(), false), have_row(lp.n_rows(), false);
  bool have_header = false;

  auto number = [&](std::string_view tok, std::size_t line_no) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
      throw ParseError(source, line_no, "malformed number '" + std::string(tok) + "'");
    return v;
  };

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const auto tok = words(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (tok.empty() || tok[0].front() == '#') continue;
    if (!have_header) {
      if (tok.size() != 4 || tok[0] != "STATUS" || tok[2] != "OBJ")
        throw ParseError(source, line_no, "expected 'STATUS <status> OBJ <value>'");
      const auto status = parse_solve_status(tok[1]);
      if (!status) throw ParseError(source, line_no, "unknown status '" + std::string(tok[1]) + "'");
      sol.status = *status;
      sol.objective = number(tok[3], line_no);
      have_header = true;
      continue;
    }
    if (tok.size() != 3 || (tok[0] != "COL" && tok[0] != "ROW"))
      throw ParseError(source, line_no, "expected 'COL <name> <value>' or 'ROW <name> <dual>'");
    const bool is_col = tok[0] == "COL";
    auto& index = is_col ? col_of : row_of;
    const auto it = index.find(tok[1]);
    if (it == index.end())
      throw ParseError(source, line_no, std::string(is_col ? "unknown column '" : "unknown row '") + std::string(tok[1]) + "'");
    auto& seen = is_col ? have_col : have_row;
    if (seen[it->second]) throw ParseError(source, line_no, "duplicate entry for '" + std::string(tok[1]) + "'");
    seen[it->second] = true;
    (is_col ? sol.primal : sol.duals)[it->second] = number(tok[2], line_no);
  }
  if (!have_header) throw ParseError(source, line_no, "missing STATUS header");

  if (sol.status == SolveStatus::optimal) {
    std::vector<std::string> missing;
    for (std::size_t j = 0; j < have_col.size(); ++j)
      if (!have_col[j]) missing.push_back("column " + col_names[j]);
    for (std::size_t i = 0; i < have_row.size(); ++i)
      if (!have_row[i]) missing.push_back("row " + row_names[i]);
    if (!missing.empty()) throw Error(source + ": solution is missing " + list_names(missing));
  }

  sol.reduced_costs = lp.objective;
  for (const auto& t : lp.matrix) sol.reduced_costs[t.col] -= t.value * sol.duals[t.row];

  if (sol.status == SolveStatus::optimal) {
    const ResidualReport rep = certify(lp, sol);
    if (!rep.passes(tolerance)) throw Error(source + ": solution fails certification: " + rep.summary());
  }
  return sol;
}

}  // namespace sinkplan
