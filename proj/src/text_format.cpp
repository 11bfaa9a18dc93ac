//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/text_format.hpp"

#include <cctype>

namespace stellar {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line), column_(column) {}

namespace {

bool ident_start(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '?';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  bool at_end() {
    skip(false);
    return pos_ >= src_.size();
  }

  // Skips blanks and comments; newlines too unless `stop_at_newline`.
  // Returns true if a newline was crossed.
  bool skip(bool stop_at_newline) {
    bool newline = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '\n') {
        if (stop_at_newline) return true;
        newline = true;
        advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
    return newline;
  }

  char peek() {
    skip(false);
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  std::string ident() {
    skip(false);
    if (pos_ >= src_.size() || !ident_start(src_[pos_])) fail("expected identifier");
    std::size_t b = pos_;
    advance();
    while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
    return std::string(src_.substr(b, pos_ - b));
  }

  Term term() {
    std::string name = ident();
    if (name[0] == '?' || std::isupper(static_cast<unsigned char>(name[0]))) {
      if (name == "?") fail("empty variable name");
      return Term::variable(name);
    }
    if (peek() != '(') return Term::constant(name);
    advance();
    std::vector<Term> args;
    args.push_back(term());
    while (peek() == ',') {
      advance();
      args.push_back(term());
    }
    expect(')');
    return Term::apply(name, std::move(args));
  }

  Ray ray() {
    char c = peek();
    if (c != '+' && c != '-') return Ray::plain(term());
    advance();
    Polarity pol = c == '+' ? Polarity::positive : Polarity::negative;
    int l = line_, k = col_;
    std::string colour = ident();
    if (colour[0] == '?' || std::isupper(static_cast<unsigned char>(colour[0])))
      throw ParseError("colour must be a function symbol", l, k);
    std::vector<Term> args;
    if (peek() == '.') {
      advance();
      args.push_back(term());
    } else if (peek() == '(') {
      advance();
      args.push_back(term());
      while (peek() == ',') {
        advance();
        args.push_back(term());
      }
      expect(')');
    }
    return Ray{pol, Term::apply(colour, std::move(args))};
  }

  Star star() {
    expect('[');
    std::vector<Ray> rays;
    if (peek() == ']') fail("a star has at least one ray");
    rays.push_back(ray());
    while (peek() == ',') {
      advance();
      rays.push_back(ray());
    }
    expect(']');
    return Star(std::move(rays));
  }

  void separator() {
    // after a star: ';', a newline, or the end of input
    bool newline = skip(true);
    if (pos_ >= src_.size()) return;
    if (src_[pos_] == '\n') return;
    if (src_[pos_] == ';') {
      advance();
      return;
    }
    if (!newline) fail("expected ';' or newline between stars");
  }

  int line() const { return line_; }
  int col() const { return col_; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

template <class F>
auto parse_whole(std::string_view src, F f) {
  Parser p(src);
  auto v = f(p);
  if (!p.at_end()) p.fail("trailing input");
  return v;
}

}  // namespace

Term parse_term(std::string_view src) {
  return parse_whole(src, [](Parser& p) { return p.term(); });
}

Ray parse_ray(std::string_view src) {
  return parse_whole(src, [](Parser& p) { return p.ray(); });
}

Star parse_star(std::string_view src) {
  return parse_whole(src, [](Parser& p) { return p.star(); });
}

Constellation parse_constellation(std::string_view src) {
  Parser p(src);
  Constellation c;
  while (!p.at_end()) {
    c.add(p.star());
    p.separator();
  }
  (void)c.signature();
  return c;
}

std::string serialize(const Constellation& c) { return c.to_string(); }

// --- JSON ----------------------------------------------------------------

nlohmann::json term_to_json(const Term& t) {
  if (t.is_variable()) return {{"var", var_name(t.var())}};
  nlohmann::json args = nlohmann::json::array();
  for (const auto& a : t.args()) args.push_back(term_to_json(a));
  return {{"fn", t.symbol_name()}, {"args", args}};
}

Term term_from_json(const nlohmann::json& j) {
  if (j.contains("var")) return Term::variable(j.at("var").get<std::string>());
  std::vector<Term> args;
  if (j.contains("args"))
    for (const auto& a : j.at("args")) args.push_back(term_from_json(a));
  return Term::apply(j.at("fn").get<std::string>(), std::move(args));
}

nlohmann::json star_to_json(const Star& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : s) {
    const char* pol = r.polarity == Polarity::positive   ? "+"
                      : r.polarity == Polarity::negative ? "-"
                                                         : "none";
    out.push_back({{"polarity", pol}, {"term", term_to_json(r.term)}});
  }
  return out;
}

nlohmann::json constellation_to_json(const Constellation& c) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : c) out.push_back(star_to_json(s));
  return out;
}

Constellation constellation_from_json(const nlohmann::json& j) {
  Constellation c;
  for (const auto& js : j) {
    std::vector<Ray> rays;
    for (const auto& jr : js) {
      auto pol = jr.at("polarity").get<std::string>();
      Term t = term_from_json(jr.at("term"));
      Polarity p = pol == "+" ? Polarity::positive : pol == "-" ? Polarity::negative : Polarity::none;
      if (p != Polarity::none && t.is_variable())
        throw std::invalid_argument("polarised ray needs a colour head");
      rays.push_back(Ray{p, t});
    }
    c.add(Star(std::move(rays)));
  }
  (void)c.signature();
  return c;
}

}  // namespace stellar
