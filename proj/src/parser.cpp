#include "crnbatch/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <vector>

#include "crnbatch/errors.hpp"

namespace crnbatch {
namespace {

bool ident_start(char ch) { return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_'; }
bool ident_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
}

class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool consume(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok, const char* what) {
    if (!consume(tok)) fail(std::string("expected ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line_, pos_ + 1); }

  [[noreturn]] void unknown() const {
    throw UnknownToken("line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) +
                       ": unexpected character '" + std::string(1, s_[pos_]) + "'");
  }

  std::string identifier() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected species name");
    if (!ident_start(s_[pos_])) {
      if (std::isdigit(static_cast<unsigned char>(s_[pos_])) || std::ispunct(static_cast<unsigned char>(s_[pos_])))
        fail("expected species name");
      unknown();
    }
    std::size_t b = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  std::vector<Term> side(Crn& crn) {
    std::vector<Term> terms;
    char ch = peek();
    if (ch == '-' || ch == '<' || ch == ':' || ch == '\0') return terms;
    for (;;) {
      skip_ws();
      Count coeff = 1;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        auto [p, ec] = std::from_chars(s_.data() + b, s_.data() + pos_, coeff);
        if (ec != std::errc() || coeff == 0) {
          pos_ = b;
          fail("invalid stoichiometric coefficient");
        }
      }
      std::string name = identifier();
      terms.push_back({crn.intern(name), coeff});
      if (!consume("+")) break;
    }
    return terms;
  }

  double rate() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected rate constant");
    double value = 0.0;
    std::size_t b = pos_;
    if (s_[pos_] == '-' || s_[pos_] == '+') {
      // let from_chars reject '+' and accept '-' so the sign error is reported precisely
      if (s_[pos_] == '+') ++pos_;
    }
    auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
    if (ec != std::errc()) {
      pos_ = b;
      fail("expected rate constant");
    }
    pos_ = static_cast<std::size_t>(p - s_.data());
    if (!std::isfinite(value)) {
      pos_ = b;
      fail("rate constant must be finite");
    }
    if (!(value > 0.0)) {
      throw NonPositiveRate("line " + std::to_string(line_) + ", column " + std::to_string(b + 1) +
                            ": rate constant must be positive");
    }
    return value;
  }

  std::string_view rest() const { return s_.substr(pos_); }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

bool is_species_decl(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  if (line.substr(i, 7) != "species") return false;
  i += 7;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  return i < line.size() && line[i] == ':';
}

void append_side(std::string& out, const Crn& crn, const Multiset& m) {
  bool first = true;
  for (const Term& t : m) {
    if (!first) out += " + ";
    first = false;
    if (t.coeff != 1) out += std::to_string(t.coeff);
    out += crn.name(t.species);
  }
}

// Species order a parser would produce from the reaction lines alone.
std::vector<std::string> first_use_order(const Crn& crn) {
  std::vector<std::string> names;
  std::set<SpeciesId> seen;
  for (const Reaction& a : crn.reactions()) {
    for (const Multiset* m : {&a.reactants, &a.products})
      for (const Term& t : *m)
        if (seen.insert(t.species).second) names.push_back(crn.name(t.species));
  }
  return names;
}

}  // namespace

Crn parse_crn(std::string_view text) {
  Crn crn;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    std::string_view line = strip_comment(raw);
    LineScanner sc(line, line_no);
    if (sc.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    if (is_species_decl(line)) {
      sc.consume("species");
      sc.expect(":", "':'");
      while (!sc.at_end()) {
        crn.intern(sc.identifier());
        if (!sc.consume(",") && !sc.at_end() && !ident_start(sc.peek())) sc.unknown();
      }
    } else {
      std::vector<Term> lhs = sc.side(crn);
      bool reversible = false;
      if (sc.consume("<->")) {
        reversible = true;
      } else if (!sc.consume("->")) {
        char ch = sc.peek();
        if (ch != '\0' && !std::ispunct(static_cast<unsigned char>(ch)) && !ident_char(ch)) sc.unknown();
        sc.fail("expected '->' or '<->'");
      }
      std::vector<Term> rhs = sc.side(crn);
      sc.expect(":", "':' before rate");
      double k1 = sc.rate();
      double k2 = 0.0;
      if (reversible) {
        sc.expect(",", "',' and reverse rate");
        k2 = sc.rate();
      }
      if (!sc.at_end()) {
        char ch = sc.peek();
        if (!std::ispunct(static_cast<unsigned char>(ch)) && !ident_char(ch)) sc.unknown();
        sc.fail("unexpected trailing input");
      }
      crn.add_reaction(Reaction(lhs, rhs, k1));
      if (reversible) crn.add_reaction(Reaction(rhs, lhs, k2));
    }
    if (end == text.size()) break;
  }
  return crn;
}

Configuration parse_config(std::string_view text, const Crn& crn) {
  Configuration c(crn.num_species());
  std::set<SpeciesId> assigned;
  std::size_t i = 0;
  auto is_sep = [](char ch) {
    return ch == ',' || ch == ';' || std::isspace(static_cast<unsigned char>(ch));
  };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t b = i;
    while (i < text.size() && ident_char(text[i])) ++i;
    std::string name(text.substr(b, i - b));
    if (name.empty() || !ident_start(name[0]))
      throw MalformedAssignment("expected NAME=COUNT at offset " + std::to_string(b));
    while (i < text.size() && text[i] == ' ') ++i;
    if (i >= text.size() || text[i] != '=')
      throw MalformedAssignment("expected '=' after " + name);
    ++i;
    while (i < text.size() && text[i] == ' ') ++i;
    if (i < text.size() && text[i] == '-') throw NegativeCount("negative count for " + name);
    std::size_t nb = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    Count value = 0;
    auto [p, ec] = std::from_chars(text.data() + nb, text.data() + i, value);
    if (nb == i || ec != std::errc() || (i < text.size() && !is_sep(text[i])))
      throw MalformedAssignment("expected a nonnegative integer count for " + name);
    auto id = crn.find(name);
    if (!id) throw UnknownSpecies("unknown species " + name);
    if (!assigned.insert(*id).second) throw MalformedAssignment("species assigned twice: " + name);
    c[*id] = value;
  }
  return c;
}

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string serialize_reaction(const Crn& crn, const Reaction& a) {
  std::string out;
  append_side(out, crn, a.reactants);
  out += a.reactants.empty() ? "->" : " ->";
  if (!a.products.empty()) out += ' ';
  append_side(out, crn, a.products);
  out += " : ";
  out += format_double(a.rate);
  return out;
}

std::string serialize_crn(const Crn& crn) {
  std::string out;
  std::vector<std::string> table;
  for (const Species& s : crn.species()) table.push_back(s.name);
  if (table != first_use_order(crn)) {
    out += "species: ";
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (i) out += ", ";
      out += table[i];
    }
    out += '\n';
  }
  for (const Reaction& a : crn.reactions()) {
    out += serialize_reaction(crn, a);
    out += '\n';
  }
  return out;
}

std::string serialize_config(const Configuration& c, const Crn& crn) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += crn.name(static_cast<SpeciesId>(i)) + "=" + std::to_string(c[i]);
  }
  return out;
}

}  // namespace crnbatch
