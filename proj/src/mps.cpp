#include "sinkplan/mps.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "sinkplan/error.hpp"

namespace sinkplan {

namespace {

constexpr std::size_t kFixedName = 8;
constexpr std::size_t kFixedNumber = 12;

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

void check_names(const std::vector<std::string>& names, const char* what) {
  std::set<std::string_view> seen;
  for (const auto& n : names) {
    if (n.empty()) throw Error(std::string("mps: empty ") + what + " name");
    if (has_space(n)) throw Error(std::string("mps: ") + what + " name '" + n + "' contains whitespace");
    if (!seen.insert(n).second) throw Error(std::string("mps: duplicate ") + what + " name '" + n + "'");
  }
}

std::string numbered(char prefix, std::size_t i) {
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "%c%07zu", prefix, i);
  return buf.data();
}

std::string to_chars_text(double value, int precision) {
  std::array<char, 64> buf{};
  auto res = precision < 0 ? std::to_chars(buf.data(), buf.data() + buf.size(), value)
                           : std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general,
                                           precision);
  std::string s(buf.data(), res.ptr);
  // Compact exponent: e+05 -> e5, e-05 -> e-5.
  const auto e = s.find('e');
  if (e != std::string::npos) {
    std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    bool neg = false;
    if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
      neg = exp[0] == '-';
      exp.erase(0, 1);
    }
    while (exp.size() > 1 && exp[0] == '0') exp.erase(0, 1);
    s = mant + "e" + (neg ? "-" : "") + exp;
  }
  return s;
}

std::string fixed_number(double value) {
  std::string s = to_chars_text(value, -1);
  if (s.size() <= kFixedNumber) return s;
  for (int p = 17; p >= 1; --p) {
    s = to_chars_text(value, p);
    if (s.size() <= kFixedNumber) return s;
  }
  throw Error("mps: cannot render " + to_chars_text(value, -1) + " in a fixed-format field");
}

std::string objective_name(const std::vector<std::string>& rows) {
  const std::set<std::string_view> taken(rows.begin(), rows.end());
  std::string name = "OBJ";
  for (int k = 0; taken.count(name); ++k) name = "OBJ" + std::to_string(k);
  return name;
}

class Writer {
 public:
  explicit Writer(MpsFormat format) : fixed_(format == MpsFormat::fixed) {}

  void section(std::string_view header) {
    out_ += header;
    out_ += '\n';
  }

  // One data line: optional type code, up to two names, optional number.
  void line(std::string_view type, std::string_view a, std::string_view b, const std::string* number) {
    std::string l;
    if (fixed_) {
      l = " ";
      l += type;
      l.resize(4, ' ');
      l += a;
      if (!b.empty() || number) {
        l.resize(14, ' ');
        l += b;
      }
      if (number) {
        l.resize(24, ' ');
        l += *number;
      }
    } else {
      l = type.empty() ? "   " : " " + std::string(type);
      l += ' ';
      l += a;
      if (!b.empty()) {
        l += ' ';
        l += b;
      }
      if (number) {
        l += ' ';
        l += *number;
      }
    }
    out_ += l;
    out_ += '\n';
  }

  std::string number(double v) const { return fixed_ ? fixed_number(v) : format_number(v); }
  std::string take() { return std::move(out_); }

 private:
  bool fixed_;
  std::string out_;
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t b = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > b) tokens.push_back(line.substr(b, i - b));
  }
  return tokens;
}

}  // namespace

std::string format_number(double value) { return to_chars_text(value, -1); }

NameTable mps_names(const LinearProgram& lp, MpsFormat format) {
  check_names(lp.row_names, "row");
  check_names(lp.col_names, "column");
  NameTable t;
  t.rows = lp.row_names;
  t.cols = lp.col_names;
  if (format == MpsFormat::free) return t;
  auto fits = [](const std::vector<std::string>& v) {
    return std::all_of(v.begin(), v.end(), [](const std::string& s) { return s.size() <= kFixedName; });
  };
  if (fits(t.rows) && fits(t.cols)) return t;
  if (lp.n_rows() > 9'999'999 || lp.n_cols() > 9'999'999) throw Error("mps: too many names to mangle to 8 characters");
  for (std::size_t i = 0; i < t.rows.size(); ++i) t.rows[i] = numbered('R', i);
  for (std::size_t j = 0; j < t.cols.size(); ++j) t.cols[j] = numbered('C', j);
  t.identity = false;
  return t;
}

std::string write_mps(const LinearProgram& lp, MpsFormat format) {
  lp.check();
  const NameTable names = mps_names(lp, format);
  const std::string obj = objective_name(names.rows);
  const bool fixed = format == MpsFormat::fixed;
  if (has_space(lp.name)) throw Error("mps: problem name '" + lp.name + "' contains whitespace");

  Writer w(format);
  w.section(lp.name.empty() ? "NAME" : fixed ? "NAME          " + lp.name : "NAME " + lp.name);
  w.section("ROWS");
  w.line("N", obj, "", nullptr);
  for (std::size_t i = 0; i < lp.n_rows(); ++i) {
    const char* code = lp.senses[i] == RowSense::le ? "L" : lp.senses[i] == RowSense::ge ? "G" : "E";
    w.line(code, names.rows[i], "", nullptr);
  }

  w.section("COLUMNS");
  const CscMatrix a = CscMatrix::from(lp);
  for (std::size_t j = 0; j < lp.n_cols(); ++j) {
    const bool empty = a.start[j] == a.start[j + 1];
    if (lp.objective[j] != 0.0 || empty) {
      const std::string v = w.number(lp.objective[j]);
      w.line("", names.cols[j], obj, &v);
    }
    for (std::size_t p = a.start[j]; p < a.start[j + 1]; ++p) {
      const std::string v = w.number(a.value[p]);
      w.line("", names.cols[j], names.rows[a.index[p]], &v);
    }
  }

  w.section("RHS");
  for (std::size_t i = 0; i < lp.n_rows(); ++i) {
    if (lp.rhs[i] == 0.0) continue;
    const std::string v = w.number(lp.rhs[i]);
    w.line("", "RHS", names.rows[i], &v);
  }
  w.section("RANGES");

  w.section("BOUNDS");
  for (std::size_t j = 0; j < lp.n_cols(); ++j) {
    const double lo = lp.col_lower[j];
    const double up = lp.col_upper[j];
    const std::string& c = names.cols[j];
    if (lo == up) {
      const std::string v = w.number(lo);
      w.line("FX", "BND", c, &v);
      continue;
    }
    if (lo == -kInf) {
      if (up == kInf) {
        w.line("FR", "BND", c, nullptr);
        continue;
      }
      w.line("MI", "BND", c, nullptr);
    } else if (lo != 0.0 || up < 0.0) {
      // An explicit zero lower bound stops readers from treating a negative
      // upper bound as implying a free lower bound.
      const std::string v = w.number(lo);
      w.line("LO", "BND", c, &v);
    }
    if (up != kInf) {
      const std::string v = w.number(up);
      w.line("UP", "BND", c, &v);
    }
  }
  w.section("ENDATA");
  return w.take();
}

LinearProgram parse_mps(std::string_view text, const std::string& source) {
  enum class Section { none, name, rows, columns, rhs, ranges, bounds, done };
  Section section = Section::none;

  LinearProgram lp;
  lp.name.clear();
  std::string objective;
  std::set<std::string, std::less<>> free_rows;
  std::unordered_map<std::string, std::size_t> row_index;
  std::unordered_map<std::string, std::size_t> col_index;
  std::vector<bool> lower_set;
  std::vector<Triplet> entries;
  std::set<std::pair<std::size_t, std::size_t>> seen_entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  auto fail = [&](const std::string& what) -> ParseError { return ParseError(source, line_no, what); };
  auto number = [&](std::string_view tok) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    if (!tok.empty() && *b == '+') ++b;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) throw fail("malformed number '" + std::string(tok) + "'");
    if (!std::isfinite(v)) throw fail("non-finite number '" + std::string(tok) + "'");
    return v;
  };
  auto find_row = [&](std::string_view name) -> std::size_t {
    const auto it = row_index.find(std::string(name));
    if (it == row_index.end()) throw fail("unknown row '" + std::string(name) + "'");
    return it->second;
  };
  auto find_col = [&](std::string_view name) -> std::size_t {
    const auto it = col_index.find(std::string(name));
    if (it == col_index.end()) throw fail("unknown column '" + std::string(name) + "'");
    return it->second;
  };

  while (pos <= text.size() && section != Section::done) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '*') {
      if (eol == text.size()) break;
      continue;
    }
    const auto tok = split(line);
    if (tok.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      const std::string_view head = tok[0];
      if (head == "NAME") {
        if (section != Section::none) throw fail("NAME section out of place");
        section = Section::name;
        if (tok.size() > 2) throw fail("problem name contains whitespace");
        lp.name = tok.size() == 2 ? std::string(tok[1]) : std::string();
      } else if (head == "ROWS") {
        section = Section::rows;
      } else if (head == "COLUMNS") {
        section = Section::columns;
      } else if (head == "RHS") {
        section = Section::rhs;
      } else if (head == "RANGES") {
        section = Section::ranges;
      } else if (head == "BOUNDS") {
        section = Section::bounds;
      } else if (head == "ENDATA") {
        section = Section::done;
      } else {
        throw fail("unknown section '" + std::string(head) + "'");
      }
      if (section != Section::name && section != Section::done && tok.size() > 1)
        throw fail("unexpected text after section header");
      continue;
    }

    switch (section) {
      case Section::none:
      case Section::name:
        throw fail("data line outside a section");
      case Section::rows: {
        if (tok.size() != 2) throw fail("ROWS line needs a type and a name");
        const std::string name(tok[1]);
        if (row_index.count(name) || free_rows.count(name) || name == objective)
          throw fail("duplicate row name '" + name + "'");
        const std::string_view type = tok[0];
        if (type == "N") {
          if (objective.empty())
            objective = name;
          else
            free_rows.insert(name);
          break;
        }
        RowSense sense;
        if (type == "E")
          sense = RowSense::eq;
        else if (type == "L")
          sense = RowSense::le;
        else if (type == "G")
          sense = RowSense::ge;
        else
          throw fail("unknown row type '" + std::string(type) + "'");
        row_index.emplace(name, lp.n_rows());
        lp.row_names.push_back(name);
        lp.senses.push_back(sense);
        lp.rhs.push_back(0.0);
        break;
      }
      case Section::columns: {
        if (tok.size() >= 2 && tok[1] == "'MARKER'") throw fail("integer markers are not supported");
        if (tok.size() != 3 && tok.size() != 5) throw fail("COLUMNS line needs a column and one or two entries");
        const std::string name(tok[0]);
        std::size_t col;
        if (!lp.col_names.empty() && lp.col_names.back() == name) {
          col = lp.n_cols() - 1;
        } else {
          if (col_index.count(name)) throw fail("column '" + name + "' is not contiguous");
          col = lp.add_col(name, 0.0, 0.0, kInf);
          col_index.emplace(name, col);
          lower_set.push_back(false);
        }
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const double v = number(tok[k + 1]);
          if (tok[k] == objective) {
            lp.objective[col] = v;
            continue;
          }
          if (free_rows.count(tok[k])) continue;
          const std::size_t row = find_row(tok[k]);
          if (!seen_entries.insert({row, col}).second)
            throw fail("duplicate entry for column '" + name + "' in row '" + std::string(tok[k]) + "'");
          if (v != 0.0) entries.push_back({row, col, v});
        }
        break;
      }
      case Section::rhs: {
        // The set name is optional.
        const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
        if (tok.size() < 2 || tok.size() > 5) throw fail("malformed RHS line");
        for (std::size_t k = first; k + 1 < tok.size(); k += 2) {
          if (tok[k] == objective) throw fail("objective constants are not supported");
          if (free_rows.count(tok[k])) continue;
          lp.rhs[find_row(tok[k])] = number(tok[k + 1]);
        }
        break;
      }
      case Section::ranges:
        throw fail("ranged rows are not supported");
      case Section::bounds: {
        const std::string_view type = tok[0];
        const bool valueless = type == "FR" || type == "MI" || type == "PL";
        const std::size_t want = valueless ? 3 : 4;
        if (type == "BV" || type == "LI" || type == "UI" || type == "SC")
          throw fail("integer bound type '" + std::string(type) + "' is not supported");
        if (tok.size() != want && tok.size() != want - 1) throw fail("malformed BOUNDS line");
        const std::size_t ci = tok.size() == want ? 2 : 1;
        const std::size_t col = find_col(tok[ci]);
        const double v = valueless ? 0.0 : number(tok[ci + 1]);
        if (type == "UP") {
          lp.col_upper[col] = v;
          if (v < 0.0 && !lower_set[col] && lp.col_lower[col] == 0.0) lp.col_lower[col] = -kInf;
        } else if (type == "LO") {
          lp.col_lower[col] = v;
          lower_set[col] = true;
        } else if (type == "FX") {
          lp.col_lower[col] = v;
          lp.col_upper[col] = v;
          lower_set[col] = true;
        } else if (type == "FR") {
          lp.col_lower[col] = -kInf;
          lp.col_upper[col] = kInf;
          lower_set[col] = true;
        } else if (type == "MI") {
          lp.col_lower[col] = -kInf;
          lower_set[col] = true;
        } else if (type == "PL") {
          lp.col_upper[col] = kInf;
        } else {
          throw fail("unknown bound type '" + std::string(type) + "'");
        }
        break;
      }
      case Section::done:
        break;
    }
    if (eol == text.size()) break;
  }
  if (section != Section::done) throw fail("missing ENDATA");

  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  lp.matrix = std::move(entries);
  try {
    lp.check();
  } catch (const Error& e) {
    throw fail(e.what());
  }
  return lp;
}

std::string write_name_table(const LinearProgram& lp, const NameTable& names) {
  std::string out;
  for (std::size_t i = 0; i < lp.n_rows(); ++i) out += "ROW " + names.rows[i] + " " + lp.row_names[i] + "\n";
  for (std::size_t j = 0; j < lp.n_cols(); ++j) out += "COL " + names.cols[j] + " " + lp.col_names[j] + "\n";
  return out;
}

void apply_name_table(LinearProgram& lp, std::string_view table_text, const std::string& source) {
  std::map<std::string, std::string, std::less<>> rows, cols;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < table_text.size()) {
    const std::size_t eol = std::min(table_text.find('\n', pos), table_text.size());
    const auto tok = split(table_text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (tok.empty()) continue;
    if (tok.size() != 3 || (tok[0] != "ROW" && tok[0] != "COL"))
      throw ParseError(source, line_no, "expected 'ROW|COL <file name> <name>'");
    auto& table = tok[0] == "ROW" ? rows : cols;
    if (!table.emplace(std::string(tok[1]), std::string(tok[2])).second)
      throw ParseError(source, line_no, "duplicate entry for '" + std::string(tok[1]) + "'");
  }
  auto rename = [&](std::vector<std::string>& names, const auto& table, const char* what) {
    for (auto& n : names) {
      const auto it = table.find(n);
      if (it == table.end()) throw Error(source + ": no original name for " + what + " '" + n + "'");
      n = it->second;
    }
  };
  rename(lp.row_names, rows, "row");
  rename(lp.col_names, cols, "column");
}

}  // namespace sinkplan
