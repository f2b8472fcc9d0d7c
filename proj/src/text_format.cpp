#include "mindef/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "mindef/error.hpp"

namespace mindef {

namespace {

constexpr const char* kNetworkHeader = "# mindef network v1";
constexpr const char* kOdeHeader = "# mindef ode v1";

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Cursor over one line; columns are 1-based in messages.
class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line, std::size_t offset = 0)
      : text_(text), line_(line), offset_(offset) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool accept(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }
  std::size_t column() const { return offset_ + pos_ + 1; }
  std::size_t line() const { return line_; }

  ParseError error(const std::string& message) const {
    return ParseError(message, line_, column());
  }

  std::optional<std::string> name() {
    skip_space();
    if (pos_ >= text_.size() || !name_start(text_[pos_])) return std::nullopt;
    std::size_t start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Unsigned number: digits with optional fraction, exponent, or "/q".
  std::optional<Rational> number() {
    skip_space();
    std::size_t start = pos_;
    auto digits = [&]() {
      std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ > s;
    };
    bool any = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) {
      pos_ = start;
      return std::nullopt;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (!digits()) pos_ = save;
    }
    if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      digits();
    }
    std::string_view token = text_.substr(start, pos_ - start);
    try {
      return parse_rational(token);
    } catch (const ParseError&) {
      pos_ = start;
      throw error("malformed number '" + std::string(token) + "'");
    }
  }

  std::optional<long> integer() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) return std::nullopt;
    if (pos_ - start > 9) throw error("integer too large");
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

// Species registry that either is fixed by a declaration or grows on use.
class SpeciesTable {
 public:
  void declare(std::vector<std::string> names, const Cursor& at) {
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (names[i] == names[j]) throw at.error("species '" + names[i] + "' declared twice");
    names_ = std::move(names);
    fixed_ = true;
  }
  std::size_t lookup(const std::string& name, const Cursor& at) {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it != names_.end()) return static_cast<std::size_t>(it - names_.begin());
    if (fixed_) throw at.error("unknown species '" + name + "'");
    names_.push_back(name);
    return names_.size() - 1;
  }
  bool fixed() const { return fixed_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  bool fixed_ = false;
};

// Complex as (species index, coefficient) pairs in written order.
using SparseComplex = std::vector<std::pair<std::size_t, int>>;

SparseComplex read_complex(Cursor& cur, SpeciesTable& species) {
  SparseComplex out;
  if (cur.peek() == '0') {
    Cursor probe = cur;
    probe.accept('0');
    char next = probe.peek();
    if (next == '\0' || next == '-' || next == '<') {
      cur = probe;
      return out;
    }
  }
  while (true) {
    std::size_t coef = 1;
    if (auto k = cur.integer()) {
      if (*k <= 0) throw cur.error("stoichiometric coefficient must be positive");
      coef = static_cast<std::size_t>(*k);
    }
    cur.accept('*');
    auto name = cur.name();
    if (!name) throw cur.error("expected a species name");
    std::size_t idx = species.lookup(*name, cur);
    for (const auto& [s, c] : out)
      if (s == idx) throw cur.error("species '" + *name + "' repeats within a complex");
    out.push_back({idx, static_cast<int>(coef)});
    if (!cur.accept('+')) break;
  }
  return out;
}

Complex densify(const SparseComplex& sparse, std::size_t n) {
  Complex c(n, 0);
  for (const auto& [s, k] : sparse) c[s] = k;
  return c;
}

}  // namespace

Network parse_network(std::string_view text) {
  SpeciesTable species;
  std::vector<SparseComplex> complexes;
  struct RawReaction {
    std::size_t source, target;
    Rational rate;
    std::size_t line;
  };
  std::vector<RawReaction> reactions;
  bool seen_content = false;

  auto same = [](SparseComplex a, SparseComplex b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  };
  auto index_of = [&](const SparseComplex& c) -> std::optional<std::size_t> {
    for (std::size_t j = 0; j < complexes.size(); ++j)
      if (same(complexes[j], c)) return j;
    return std::nullopt;
  };
  auto intern = [&](const SparseComplex& c) {
    if (auto j = index_of(c)) return *j;
    complexes.push_back(c);
    return complexes.size() - 1;
  };

  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view body = strip_comment(lines[ln]);
    if (blank(body)) continue;
    Cursor cur(body, ln + 1);
    if (cur.accept("species:")) {
      if (seen_content) throw cur.error("species line must precede complexes and reactions");
      if (species.fixed()) throw cur.error("second species line");
      std::vector<std::string> names;
      while (!cur.done()) {
        auto name = cur.name();
        if (!name) throw cur.error("expected a species name");
        names.push_back(*name);
        cur.accept(',');
      }
      species.declare(std::move(names), cur);
      continue;
    }
    seen_content = true;
    if (cur.accept("complex:")) {
      const std::size_t column = cur.column();
      SparseComplex c = read_complex(cur, species);
      if (!cur.done()) throw cur.error("unexpected text after complex");
      if (index_of(c))
        throw ParseError(ErrorKind::DuplicateComplex, "complex declared twice", ln + 1, column);
      complexes.push_back(std::move(c));
      continue;
    }
    auto rate = cur.number();
    if (!rate) throw cur.error("expected a rate constant, 'complex:' or 'species:'");
    if (sgn(*rate) <= 0) throw cur.error("rate constant must be positive");
    if (!cur.accept(':')) throw cur.error("expected ':' after the rate constant");
    SparseComplex lhs = read_complex(cur, species);
    if (!cur.accept("->")) throw cur.error("expected '->'");
    SparseComplex rhs = read_complex(cur, species);
    if (!cur.done()) throw cur.error("unexpected text after reaction");
    std::size_t s = intern(lhs);
    std::size_t t = intern(rhs);
    if (s == t) throw cur.error("reaction has identical source and target");
    for (const auto& r : reactions)
      if (r.source == s && r.target == t)
        throw ParseError(ErrorKind::DuplicateReaction,
                         "reaction repeats the one on line " + std::to_string(r.line), ln + 1, 1);
    reactions.push_back({s, t, *rate, ln + 1});
  }

  const std::size_t n = species.names().size();
  std::vector<Complex> dense;
  for (const auto& c : complexes) dense.push_back(densify(c, n));
  std::vector<Reaction> out;
  for (const auto& r : reactions) out.push_back({r.source, r.target, r.rate});
  return Network(species.names(), std::move(dense), std::move(out));
}

std::string print_network(const Network& net) {
  std::ostringstream out;
  out << kNetworkHeader << "\n";
  out << "species:";
  for (const auto& s : net.species()) out << " " << s;
  out << "\n";
  for (const auto& c : net.complexes()) out << "complex: " << format_complex(c, net.species()) << "\n";
  for (const auto& r : net.reactions())
    out << format_rational(r.rate) << " : " << format_complex(net.complexes()[r.source], net.species())
        << " -> " << format_complex(net.complexes()[r.target], net.species()) << "\n";
  return out.str();
}

Complex parse_complex(std::string_view text, const std::vector<std::string>& species) {
  SpeciesTable table;
  Cursor at(text, 0);
  table.declare(species, at);
  Cursor cur(text, 0);
  SparseComplex c = read_complex(cur, table);
  if (!cur.done()) throw cur.error("unexpected text after complex");
  return densify(c, species.size());
}

namespace {

struct RawTerm {
  std::vector<std::pair<std::string, long>> factors;
  Rational coefficient;
  std::size_t column;
};

struct RawEquation {
  std::string species;
  std::vector<RawTerm> terms;
  std::size_t line;
};

// A term: optional numbers and species powers joined by '*' or blanks.
RawTerm read_term(Cursor& cur, int sign) {
  RawTerm term{{}, Rational(sign), cur.column()};
  bool any = false;
  while (true) {
    char c = cur.peek();
    if (c == '\0' || c == '+' || c == '-') break;
    if (auto k = cur.number()) {
      term.coefficient *= *k;
    } else if (auto name = cur.name()) {
      long exponent = 1;
      if (cur.accept('^')) {
        auto e = cur.integer();
        if (!e) throw cur.error("expected an exponent after '^'");
        exponent = *e;
      }
      term.factors.push_back({*name, exponent});
    } else {
      throw cur.error(std::string("unexpected character '") + c + "'");
    }
    any = true;
    if (cur.accept('*') && (cur.peek() == '\0' || cur.peek() == '+' || cur.peek() == '-'))
      throw cur.error("dangling '*'");
  }
  if (!any) throw cur.error("empty term");
  return term;
}

}  // namespace

bool looks_like_ode(std::string_view text) {
  for (std::string_view line : split_lines(text)) {
    std::string_view body = strip_comment(line);
    if (blank(body)) continue;
    const std::size_t first = body.find_first_not_of(" \t");
    if (body[first] != 'd' || first + 1 >= body.size() ||
        !std::isspace(static_cast<unsigned char>(body[first + 1])))
      return false;
    Cursor cur(body.substr(first + 1), 0);
    return cur.name().has_value() && cur.accept('=');
  }
  return false;
}

PolySystem parse_ode(std::string_view text) {
  std::vector<RawEquation> equations;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view body = strip_comment(lines[ln]);
    if (blank(body)) continue;
    Cursor cur(body, ln + 1);
    if (!cur.accept('d')) throw cur.error("expected 'd NAME = ...'");
    auto name = cur.name();
    if (!name) throw cur.error("expected a species name after 'd'");
    for (const auto& e : equations)
      if (e.species == *name) throw cur.error("second equation for '" + *name + "'");
    if (!cur.accept('=')) throw cur.error("expected '='");
    RawEquation eq{*name, {}, ln + 1};
    int sign = 1;
    if (cur.accept('-'))
      sign = -1;
    else
      cur.accept('+');
    while (true) {
      eq.terms.push_back(read_term(cur, sign));
      if (cur.done()) break;
      if (cur.accept('+'))
        sign = 1;
      else if (cur.accept('-'))
        sign = -1;
      else
        throw cur.error("expected '+' or '-'");
    }
    // A lone "0" right-hand side means no terms.
    if (eq.terms.size() == 1 && eq.terms[0].factors.empty() && is_zero(eq.terms[0].coefficient))
      eq.terms.clear();
    equations.push_back(std::move(eq));
  }

  PolySystem system;
  for (const auto& e : equations) system.species.push_back(e.species);
  const std::size_t n = system.species.size();
  for (const auto& e : equations) {
    std::vector<Term> terms;
    for (const auto& raw : e.terms) {
      Complex exponents(n, 0);
      for (const auto& [name, power] : raw.factors) {
        auto it = std::find(system.species.begin(), system.species.end(), name);
        if (it == system.species.end())
          throw ParseError("species '" + name + "' has no equation", e.line, raw.column);
        exponents[static_cast<std::size_t>(it - system.species.begin())] += static_cast<int>(power);
      }
      if (is_zero(raw.coefficient))
        throw ParseError("term has a zero coefficient", e.line, raw.column);
      for (const auto& t : terms)
        if (t.exponents == exponents)
          throw ParseError("monomial appears twice in one equation", e.line, raw.column);
      terms.push_back({std::move(exponents), raw.coefficient});
    }
    system.equations.push_back(std::move(terms));
  }
  system.validate();
  return system;
}

std::string print_ode(const PolySystem& system) {
  std::ostringstream out;
  out << kOdeHeader << "\n";
  for (std::size_t i = 0; i < system.species.size(); ++i) {
    out << "d " << system.species[i] << " =";
    if (system.equations[i].empty()) out << " 0";
    bool first = true;
    for (const auto& term : system.equations[i]) {
      const bool negative = sgn(term.coefficient) < 0;
      const Rational mag = negative ? Rational(-term.coefficient) : term.coefficient;
      out << (first ? (negative ? " -" : "") : (negative ? " -" : " +"));
      out << " ";
      std::string monomial;
      for (std::size_t r = 0; r < term.exponents.size(); ++r) {
        if (term.exponents[r] == 0) continue;
        if (!monomial.empty()) monomial += "*";
        monomial += system.species[r];
        if (term.exponents[r] > 1) monomial += "^" + std::to_string(term.exponents[r]);
      }
      if (monomial.empty())
        out << format_rational(mag);
      else if (mag == 1)
        out << monomial;
      else
        out << format_rational(mag) << "*" << monomial;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mindef
