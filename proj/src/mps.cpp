#include "mindef/mps.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "mindef/error.hpp"

namespace mindef {

namespace {

constexpr const char* kObjectiveRow = "obj";

std::string number(const Rational& value) {
  std::string exact = format_rational(value);
  if (exact.find('/') == std::string::npos) return exact;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value.get_d());
  return buf;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

class FieldWriter {
 public:
  explicit FieldWriter(std::size_t name_width) : name_(name_width) {}

  // Columns: code at 2, names and values in fields of the computed widths.
  std::string line(const std::string& code, const std::string& a, const std::string& b = {},
                   const std::string& value = {}) const {
    std::string out = " " + pad(code, 2) + " " + pad(a, name_);
    if (!b.empty() || !value.empty()) out += "  " + pad(b, name_);
    if (!value.empty()) out += "  " + value;
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  }

 private:
  std::size_t name_;
};

}  // namespace

std::string write_mps(const LpProblem& problem) {
  problem.validate();
  std::size_t width = 8;
  for (const auto& c : problem.columns) width = std::max(width, c.name.size());
  for (const auto& r : problem.rows) width = std::max(width, r.name.size());
  width = std::max(width, std::string("MARKER").size());
  const FieldWriter w(width);

  std::ostringstream out;
  out << "NAME          " << problem.name << "\n";
  if (problem.sense == ObjectiveSense::Maximize) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n";
  out << w.line("N", kObjectiveRow);
  for (const auto& row : problem.rows) {
    const char* code = row.sense == RowSense::Equal       ? "E"
                       : row.sense == RowSense::LessEqual ? "L"
                                                          : "G";
    out << w.line(code, row.name);
  }

  // Column-major view of the rows.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> by_column(problem.column_count());
  for (std::size_t i = 0; i < problem.row_count(); ++i)
    for (const auto& t : problem.rows[i].terms)
      if (!is_zero(t.coefficient)) by_column[t.column].push_back({i, t.coefficient});
  for (auto& entries : by_column)
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

  out << "COLUMNS\n";
  bool in_integer_block = false;
  std::size_t marker = 0;
  auto marker_line = [&](const char* kind) {
    out << w.line("", "MARKER" + std::to_string(marker++), "'MARKER'", std::string("'") + kind + "'");
  };
  for (std::size_t j = 0; j < problem.column_count(); ++j) {
    const LpColumn& col = problem.columns[j];
    if (col.integral != in_integer_block) {
      marker_line(col.integral ? "INTORG" : "INTEND");
      in_integer_block = col.integral;
    }
    bool wrote = false;
    if (!is_zero(col.objective)) {
      out << w.line("", col.name, kObjectiveRow, number(col.objective));
      wrote = true;
    }
    for (const auto& [row, a] : by_column[j]) {
      out << w.line("", col.name, problem.rows[row].name, number(a));
      wrote = true;
    }
    if (!wrote) out << w.line("", col.name, kObjectiveRow, "0");
  }
  if (in_integer_block) marker_line("INTEND");

  out << "RHS\n";
  for (const auto& row : problem.rows)
    if (!is_zero(row.rhs)) out << w.line("", "RHS", row.name, number(row.rhs));

  out << "BOUNDS\n";
  for (const auto& col : problem.columns) {
    const bool binary = col.integral && col.lower && is_zero(*col.lower) && col.upper &&
                        *col.upper == 1;
    if (binary) {
      out << w.line("BV", "BND", col.name);
      continue;
    }
    if (!col.lower && !col.upper) {
      out << w.line("FR", "BND", col.name);
      continue;
    }
    if (!col.lower)
      out << w.line("MI", "BND", col.name);
    else if (!is_zero(*col.lower))
      out << w.line("LO", "BND", col.name, number(*col.lower));
    if (col.upper) out << w.line("UP", "BND", col.name, number(*col.upper));
  }
  out << "ENDATA\n";
  return out.str();
}

LpProblem read_mps(std::string_view text) {
  LpProblem p;
  std::map<std::string, std::size_t> row_index, col_index;
  std::string objective_row;
  std::string section;
  bool integer_block = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;

  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(msg, line_no, 1);
  };
  auto value = [&](const std::string& token) {
    try {
      return parse_rational(token);
    } catch (const ParseError&) {
      throw fail("bad number '" + token + "'");
    }
  };
  auto column = [&](const std::string& name) -> std::size_t {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw fail("unknown column '" + name + "'");
    return it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string tok; fields >> tok;) f.push_back(tok);
    if (f.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      section = f[0];
      if (section == "NAME") p.name = f.size() > 1 ? f[1] : "";
      else if (section != "ROWS" && section != "COLUMNS" && section != "RHS" &&
               section != "BOUNDS" && section != "RANGES" && section != "OBJSENSE" &&
               section != "ENDATA")
        throw fail("unknown section '" + section + "'");
      if (section == "RANGES") throw fail("RANGES section is not supported");
      if (section == "OBJSENSE" && f.size() > 1)
        p.sense = f[1] == "MAX" ? ObjectiveSense::Maximize : ObjectiveSense::Minimize;
      if (section == "ENDATA") break;
      continue;
    }
    if (section == "OBJSENSE") {
      p.sense = f[0] == "MAX" || f[0] == "MAXIMIZE" ? ObjectiveSense::Maximize
                                                    : ObjectiveSense::Minimize;
    } else if (section == "ROWS") {
      if (f.size() != 2) throw fail("ROWS entry needs a type and a name");
      if (f[0] == "N") {
        if (objective_row.empty()) objective_row = f[1];
        continue;
      }
      LpRow row;
      row.name = f[1];
      if (f[0] == "E") row.sense = RowSense::Equal;
      else if (f[0] == "L") row.sense = RowSense::LessEqual;
      else if (f[0] == "G") row.sense = RowSense::GreaterEqual;
      else throw fail("unknown row type '" + f[0] + "'");
      if (row_index.count(row.name)) throw fail("row '" + row.name + "' repeats");
      const std::string name = row.name;
      row_index[name] = p.add_row(std::move(row));
    } else if (section == "COLUMNS") {
      if (f.size() >= 3 && f[1] == "'MARKER'") {
        if (f[2] == "'INTORG'") integer_block = true;
        else if (f[2] == "'INTEND'") integer_block = false;
        else throw fail("unknown marker " + f[2]);
        continue;
      }
      if (f.size() != 3 && f.size() != 5) throw fail("COLUMNS entry has the wrong field count");
      std::size_t j;
      auto it = col_index.find(f[0]);
      if (it == col_index.end()) {
        LpColumn col;
        col.name = f[0];
        col.integral = integer_block;
        j = p.add_column(std::move(col));
        col_index[f[0]] = j;
      } else {
        j = it->second;
      }
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
        Rational a = value(f[k + 1]);
        if (f[k] == objective_row) {
          p.columns[j].objective = a;
          continue;
        }
        auto r = row_index.find(f[k]);
        if (r == row_index.end()) throw fail("unknown row '" + f[k] + "'");
        if (!is_zero(a)) p.rows[r->second].terms.push_back({j, a});
      }
    } else if (section == "RHS") {
      if (f.size() != 3 && f.size() != 5) throw fail("RHS entry has the wrong field count");
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
        if (f[k] == objective_row) continue;
        auto r = row_index.find(f[k]);
        if (r == row_index.end()) throw fail("unknown row '" + f[k] + "'");
        p.rows[r->second].rhs = value(f[k + 1]);
      }
    } else if (section == "BOUNDS") {
      if (f.size() < 3) throw fail("BOUNDS entry is too short");
      LpColumn& col = p.columns[column(f[2])];
      const std::string& type = f[0];
      auto need_value = [&]() {
        if (f.size() < 4) throw fail(type + " bound needs a value");
        return value(f[3]);
      };
      if (type == "LO") col.lower = need_value();
      else if (type == "UP") col.upper = need_value();
      else if (type == "FX") col.lower = col.upper = need_value();
      else if (type == "FR") col.lower = col.upper = std::nullopt;
      else if (type == "MI") col.lower = std::nullopt;
      else if (type == "PL") col.upper = std::nullopt;
      else if (type == "BV") {
        col.lower = Rational(0);
        col.upper = Rational(1);
        col.integral = true;
      } else throw fail("unknown bound type '" + type + "'");
    } else {
      throw fail("data line outside a section");
    }
  }
  // Integral columns read without explicit bounds default to binary, as most
  // readers do.
  for (auto& col : p.columns)
    if (col.integral && !col.upper) col.upper = Rational(1);
  p.validate();
  return p;
}

std::string write_algebraic(const LpProblem& problem) {
  problem.validate();
  std::ostringstream out;
  auto linear = [&](const std::vector<LpTerm>& terms) {
    std::string s;
    for (const auto& t : terms) {
      if (is_zero(t.coefficient)) continue;
      const bool negative = sgn(t.coefficient) < 0;
      Rational mag = negative ? Rational(-t.coefficient) : t.coefficient;
      s += s.empty() ? (negative ? "- " : "") : (negative ? " - " : " + ");
      if (mag != 1) s += format_rational(mag) + " ";
      s += problem.columns[t.column].name;
    }
    return s.empty() ? std::string("0") : s;
  };
  auto sense = [](RowSense r) {
    return r == RowSense::Equal ? " = " : r == RowSense::LessEqual ? " <= " : " >= ";
  };

  out << "\\ " << problem.name << "\n";
  out << (problem.sense == ObjectiveSense::Maximize ? "maximize\n" : "minimize\n");
  std::vector<LpTerm> objective;
  for (std::size_t j = 0; j < problem.column_count(); ++j)
    if (!is_zero(problem.columns[j].objective))
      objective.push_back({j, problem.columns[j].objective});
  out << " obj: " << linear(objective) << "\n";
  out << "subject to\n";
  for (const auto& row : problem.rows)
    if (!row.lazy)
      out << " " << row.name << ": " << linear(row.terms) << sense(row.sense)
          << format_rational(row.rhs) << "\n";
  if (std::any_of(problem.rows.begin(), problem.rows.end(), [](const LpRow& r) { return r.lazy; })) {
    out << "lazy constraints\n";
    for (const auto& row : problem.rows)
      if (row.lazy)
        out << " " << row.name << ": " << linear(row.terms) << sense(row.sense)
            << format_rational(row.rhs) << "\n";
  }
  out << "bounds\n";
  auto is_binary = [](const LpColumn& col) {
    return col.integral && col.lower && is_zero(*col.lower) && col.upper && *col.upper == 1;
  };
  for (const auto& col : problem.columns) {
    if (is_binary(col)) continue;
    std::string lo = col.lower ? format_rational(*col.lower) : "-inf";
    std::string hi = col.upper ? format_rational(*col.upper) : "+inf";
    if (!col.lower && !col.upper)
      out << " " << col.name << " free\n";
    else if (!col.upper)
      out << " " << col.name << " >= " << lo << "\n";
    else
      out << " " << lo << " <= " << col.name << " <= " << hi << "\n";
  }
  std::vector<std::string> general;
  std::vector<std::string> binary;
  for (const auto& col : problem.columns) {
    if (!col.integral) continue;
    (is_binary(col) ? binary : general).push_back(col.name);
  }
  if (!general.empty()) {
    out << "general\n";
    for (const auto& name : general) out << " " << name << "\n";
  }
  if (!binary.empty()) {
    out << "binary\n";
    for (const auto& name : binary) out << " " << name << "\n";
  }
  out << "end\n";
  return out.str();
}

}  // namespace mindef
