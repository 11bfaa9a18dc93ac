//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/encodings.hpp"

#include "stellar/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace stellar::enc {

namespace {

Term var(const char* name) { return Term::variable(name); }
Term app(const std::string& f, std::vector<Term> args) { return Term::apply(f, std::move(args)); }
Term succ(const Term& t) { return Term::apply("s", {t}); }

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string strip_comment(const std::string& line) {
  auto p = line.find('#');
  return p == std::string::npos ? line : line.substr(0, p);
}

template <class F>
void for_each_line(std::string_view src, F f) {
  std::istringstream in{std::string(src)};
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    auto ws = words(strip_comment(line));
    if (!ws.empty()) f(ws, n);
  }
}

bool alnum_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) != 0; });
}

}  // namespace

// --- hypergraphs --------------------------------------------------------------

Constellation encode_hypergraph(const Hypergraph& g) {
  std::set<std::string> vs(g.vertices.begin(), g.vertices.end());
  std::set<std::string> es;
  for (const auto& e : g.edges) {
    if (vs.count(e.name)) throw EncodingError("edge " + e.name + " has the name of a vertex");
    if (!es.insert(e.name).second) throw EncodingError("edge " + e.name + " declared twice");
    if (e.sources.empty() || e.targets.empty()) throw EncodingError("edge " + e.name + " needs sources and targets");
    for (const auto* side : {&e.sources, &e.targets})
      for (const auto& v : *side)
        if (!vs.count(v)) throw EncodingError("edge " + e.name + " uses unknown vertex " + v);
  }
  Constellation out;
  Term x = var("X");
  for (const auto& e : g.edges) {
    std::vector<Ray> rays;
    for (const auto& v : e.sources) rays.push_back(Ray::neg(v, {x}));
    for (const auto& w : e.targets) rays.push_back(Ray::pos(w, {app(e.name, {x})}));
    out.add(Star(std::move(rays)));
  }
  return out;
}

ColourSet hypergraph_colours(const Hypergraph& g) { return {g.vertices.begin(), g.vertices.end()}; }

Hypergraph parse_hypergraph(std::string_view src) {
  Hypergraph g;
  std::set<std::string> seen;
  auto vertex = [&](const std::string& v) {
    if (seen.insert(v).second) g.vertices.push_back(v);
  };
  for_each_line(src, [&](const std::vector<std::string>& ws, int line) {
    if (ws[0] == "vertices") {
      for (std::size_t i = 1; i < ws.size(); ++i) vertex(ws[i]);
      return;
    }
    std::string name = ws[0];
    if (name.empty() || name.back() != ':' || name.size() < 2) throw ParseError("expected `name:`", line, 1);
    name.pop_back();
    HyperEdge e{name, {}, {}};
    bool arrow = false;
    for (std::size_t i = 1; i < ws.size(); ++i) {
      if (ws[i] == "->") {
        if (arrow) throw ParseError("second `->`", line, 1);
        arrow = true;
        continue;
      }
      vertex(ws[i]);
      (arrow ? e.targets : e.sources).push_back(ws[i]);
    }
    if (!arrow) throw ParseError("expected `->`", line, 1);
    g.edges.push_back(std::move(e));
  });
  return g;
}

// --- clauses -------------------------------------------------------------------

std::map<std::string, std::size_t> predicates(const ClauseSet& cs) {
  std::map<std::string, std::size_t> out;
  for (const auto& c : cs.clauses)
    for (const auto& l : c) {
      if (l.atom.is_variable()) throw EncodingError("a literal needs a predicate symbol");
      auto [it, fresh] = out.emplace(l.atom.symbol_name(), l.atom.arity());
      if (!fresh && it->second != l.atom.arity())
        throw EncodingError("predicate " + it->first + " used with arities " + std::to_string(it->second) + " and " +
                            std::to_string(l.atom.arity()));
    }
  return out;
}

Constellation encode_clauses(const ClauseSet& cs, const std::optional<Star>& query) {
  predicates(cs);
  Constellation out;
  for (const auto& c : cs.clauses) {
    if (c.empty()) throw EncodingError("empty clause");
    std::vector<Ray> rays;
    for (const auto& l : c) rays.push_back(Ray{l.negated ? Polarity::negative : Polarity::positive, l.atom});
    out.add(Star(std::move(rays)));
  }
  if (query) out.add(*query);
  return out;
}

Star query_star(const std::vector<Term>& goals) {
  std::vector<Ray> rays;
  std::vector<Var> vs;
  for (const auto& g : goals) {
    rays.push_back(Ray{Polarity::negative, g});
    g.collect_vars(vs);
  }
  std::vector<Term> args;
  std::set<Var> once;
  for (Var v : vs)
    if (once.insert(v).second) args.push_back(Term::variable(v));
  rays.push_back(Ray::plain(args.empty() ? Term::constant("ans") : app("ans", std::move(args))));
  return Star(std::move(rays));
}

namespace {

// Splits at `sep` outside parentheses.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ClauseProgram parse_clauses(std::string_view src) {
  ClauseProgram prog;
  std::string text;
  {
    std::istringstream in{std::string(src)};
    for (std::string line; std::getline(in, line);) {
      auto p = line.find_first_of("%#");
      text += (p == std::string::npos ? line : line.substr(0, p)) + "\n";
    }
  }
  int line = 1;
  std::string stmt;
  int stmt_line = 1;
  auto atom = [&](const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty()) throw ParseError("empty literal", stmt_line, 1);
    Term t;
    try {
      t = parse_term(s);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), stmt_line + e.line() - 1, e.column());
    }
    if (t.is_variable()) throw ParseError("literal `" + s + "` has no predicate", stmt_line, 1);
    return t;
  };
  auto finish = [&] {
    std::string s = trim(stmt);
    stmt.clear();
    if (s.empty()) throw ParseError("empty statement", stmt_line, 1);
    if (s.rfind("?-", 0) == 0) {
      if (prog.query) throw ParseError("second query", stmt_line, 1);
      for (const auto& g : split_top(s.substr(2), ',')) prog.goals.push_back(atom(g));
      prog.query = query_star(prog.goals);
      return;
    }
    Clause c;
    auto p = s.find(":-");
    std::string head = p == std::string::npos ? s : s.substr(0, p);
    if (!trim(head).empty())
      for (const auto& h : split_top(head, ';')) {
        std::string a = trim(h);
        bool neg = !a.empty() && a[0] == '~';
        c.push_back({neg, atom(neg ? a.substr(1) : a)});
      }
    if (p != std::string::npos)
      for (const auto& b : split_top(s.substr(p + 2), ',')) c.push_back({true, atom(b)});
    prog.clauses.clauses.push_back(std::move(c));
  };
  for (char ch : text) {
    if (trim(stmt).empty()) stmt_line = line;
    if (ch == '.') {
      finish();
    } else {
      stmt += ch;
    }
    if (ch == '\n') ++line;
  }
  if (!trim(stmt).empty()) throw ParseError("statement without final '.'", stmt_line, 1);
  try {
    predicates(prog.clauses);
  } catch (const EncodingError& e) {
    throw ParseError(e.what(), 1, 1);
  }
  return prog;
}

std::vector<std::string> answers(const Constellation& output) {
  std::vector<std::string> out;
  for (const auto& s : output) {
    if (s.size() != 1 || s[0].polarised()) continue;
    const Term& t = s[0].term;
    if (t.is_variable() || t.symbol_name() != "ans") continue;
    std::string c = canonical_string(s);
    out.push_back(c.substr(1, c.size() - 2));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- flows ---------------------------------------------------------------------

Constellation encode_wiring(const Wiring& w) {
  Constellation out;
  for (const auto& f : w) {
    if (f.t.is_variable() || f.u.is_variable()) throw EncodingError("a flow side needs a head symbol");
    auto a = f.t.vars(), b = f.u.vars();
    if (std::set<Var>(a.begin(), a.end()) != std::set<Var>(b.begin(), b.end()))
      throw EncodingError("flow " + f.t.to_string() + " <- " + f.u.to_string() + " changes its variables");
    out.add(Star{Ray{Polarity::positive, f.t}, Ray{Polarity::negative, f.u}});
  }
  return out;
}

ColourSet wiring_colours(const Wiring& w) {
  ColourSet out;
  for (const auto& f : w)
    for (const auto* t : {&f.t, &f.u})
      if (!t->is_variable()) out.insert(t->symbol_name());
  return out;
}

// --- Wang tiles ----------------------------------------------------------------

Constellation encode_wang(const WangTileSet& ts, bool verbatim) {
  Term x = var("X"), y = var("Y");
  Constellation out;
  for (const auto& t : ts.tiles) {
    out.add(Star{Ray::neg("h", {app(t.w, {x}), x, y}), Ray::neg("v", {app(t.s, {y}), x, y}),
                 Ray::pos("h", {app(t.e, {succ(x)}), verbatim ? x : succ(x), y}),
                 Ray::pos("v", {app(t.n, {succ(y)}), x, verbatim ? y : succ(y)})});
  }
  return out;
}

TileFile parse_tiles(std::string_view src) {
  TileFile f;
  for_each_line(src, [&](const std::vector<std::string>& ws, int line) {
    if (ws[0] == "temperature") {
      if (ws.size() != 2 || f.temperature) throw ParseError("expected one `temperature t`", line, 1);
      try {
        f.temperature = std::stoi(ws[1]);
      } catch (const std::exception&) {
        throw ParseError("bad temperature", line, 1);
      }
      return;
    }
    if (ws.size() != 4 && ws.size() != 8) throw ParseError("expected `W E S N [sw se ss sn]`", line, 1);
    f.tiles.tiles.push_back({ws[0], ws[1], ws[2], ws[3]});
    if (ws.size() == 8)
      for (int i = 0; i < 4; ++i) {
        int k;
        try {
          k = std::stoi(ws[4 + i]);
        } catch (const std::exception&) {
          throw ParseError("bad strength", line, 1);
        }
        if (k < 0) throw ParseError("negative strength", line, 1);
        auto [it, fresh] = f.strength.emplace(ws[i], k);
        if (!fresh && it->second != k) throw ParseError("glue " + ws[i] + " given two strengths", line, 1);
      }
  });
  return f;
}

std::vector<Tiling> tile_rectangle(const WangTileSet& ts, const RectangleSpec& spec, bool verbatim) {
  Constellation sigma = encode_wang(ts, verbatim);
  IncrementalUnifier u(sigma);
  const int w = spec.width, h = spec.height;
  std::vector<int> cell(static_cast<std::size_t>(w * h), -1);
  std::vector<int> frame(cell.size(), -1);
  std::vector<Tiling> out;
  std::function<void(int)> go = [&](int k) {
    if (out.size() >= spec.limit) return;
    if (k == w * h) {
      Tiling t(static_cast<std::size_t>(h));
      for (int r = 0; r < h; ++r) t[r].assign(cell.begin() + r * w, cell.begin() + (r + 1) * w);
      out.push_back(std::move(t));
      return;
    }
    int x = k % w, y = k / w;
    for (std::size_t i = 0; i < ts.tiles.size(); ++i) {
      const auto& t = ts.tiles[i];
      if (x == 0 && spec.west_border && t.w != *spec.west_border) continue;
      if (y == 0 && spec.south_border && t.s != *spec.south_border) continue;
      if (x == w - 1 && spec.east_border && t.e != *spec.east_border) continue;
      auto m = u.mark();
      int f = u.add(static_cast<int>(i));
      bool ok = (x == 0 || u.connect(f, west, frame[k - 1], east)) && (y == 0 || u.connect(f, south, frame[k - w], north));
      if (ok) {
        cell[k] = static_cast<int>(i);
        frame[k] = f;
        go(k + 1);
      }
      u.undo(m);
    }
  };
  if (w > 0 && h > 0) go(0);
  return out;
}

std::vector<Placement> wang_positions(const DiagramView& d) {
  const Diagram& dg = d.diagram();
  // the west ray is −h(c(x), x, y): arguments 1 and 2 are the coordinates
  auto depth = [](Term t, std::optional<Var>& base) {
    int k = 0;
    while (!t.is_variable()) {
      if (t.symbol_name() != "s" || t.arity() != 1) throw EncodingError("coordinate is not s^k(x)");
      t = t.args()[0];
      ++k;
    }
    if (base && *base != t.var()) throw EncodingError("coordinates over two bases");
    base = t.var();
    return k;
  };
  std::optional<Var> bx, by;
  std::vector<Placement> out;
  for (std::size_t v = 0; v < dg.size(); ++v) {
    Term r = d.ray_term(static_cast<int>(v), west);
    out.push_back({depth(r.args()[1], bx), depth(r.args()[2], by), dg.vertex_star[v]});
  }
  int mx = 0, my = 0;
  if (!out.empty()) {
    mx = std::min_element(out.begin(), out.end(), [](auto& a, auto& b) { return a.x < b.x; })->x;
    my = std::min_element(out.begin(), out.end(), [](auto& a, auto& b) { return a.y < b.y; })->y;
  }
  for (auto& p : out) p.x -= mx, p.y -= my;
  std::sort(out.begin(), out.end());
  return out;
}

Diagram tiling_diagram(const Tiling& t) {
  Diagram d;
  if (t.empty()) return d;
  const int w = static_cast<int>(t[0].size());
  for (const auto& row : t) d.vertex_star.insert(d.vertex_star.end(), row.begin(), row.end());
  for (int k = 0; k < static_cast<int>(d.vertex_star.size()); ++k) {
    if (k % w) d.edges.push_back({k - 1, east, k, west});
    if (k >= w) d.edges.push_back({k - w, north, k, south});
  }
  return d;
}

// --- Turing machines -----------------------------------------------------------

TuringFile parse_turing(std::string_view src) {
  TuringFile f;
  auto name = [](const std::string& s, int line) {
    if (!alnum_name(s)) throw ParseError("name `" + s + "` is not alphanumeric", line, 1);
    return s;
  };
  for_each_line(src, [&](const std::vector<std::string>& ws, int line) {
    if (ws[0] == "start" && ws.size() == 2) {
      f.machine.start = name(ws[1], line);
    } else if (ws[0] == "blank" && ws.size() == 2) {
      f.machine.blank = name(ws[1], line);
    } else if (ws[0] == "input") {
      for (std::size_t i = 1; i < ws.size(); ++i) f.input.push_back(name(ws[i], line));
    } else if (ws.size() == 6 && ws[2] == "->") {
      Transition t{name(ws[3], line), name(ws[4], line), Move::right};
      if (ws[5] == "L") t.move = Move::left;
      else if (ws[5] != "R") throw ParseError("move must be L or R", line, 1);
      auto key = std::make_pair(name(ws[0], line), name(ws[1], line));
      if (!f.machine.delta.emplace(key, t).second) throw ParseError("second transition for one state and symbol", line, 1);
    } else {
      throw ParseError("expected `start q`, `blank b`, `input ...` or `q a -> q' b L|R`", line, 1);
    }
  });
  return f;
}

std::vector<Configuration> run_turing(const TuringMachine& tm, const std::vector<std::string>& input, int steps) {
  Configuration c{tm.start, 0, input, false};
  if (c.tape.empty()) c.tape.push_back(tm.blank);
  std::vector<Configuration> out;
  for (int i = 0;; ++i) {
    auto it = tm.delta.find({c.state, c.tape[c.head]});
    c.halted = it == tm.delta.end();
    out.push_back(c);
    if (c.halted || i == steps) break;
    c.tape[c.head] = it->second.write;
    c.state = it->second.next;
    if (it->second.move == Move::right) {
      if (++c.head == c.tape.size()) c.tape.push_back(tm.blank);
    } else if (c.head > 0) {
      --c.head;
    }
  }
  return out;
}

std::string tm_cell_colour(const std::optional<std::string>& state, const std::string& symbol) {
  return state ? "h_" + *state + "_" + symbol : "c_" + symbol;
}

std::optional<TapeCell> decode_tm_colour(const std::string& colour) {
  if (colour.rfind("c_", 0) == 0 && alnum_name(colour.substr(2))) return TapeCell{std::nullopt, colour.substr(2)};
  if (colour.rfind("h_", 0) == 0) {
    auto p = colour.find('_', 2);
    if (p == std::string::npos) return std::nullopt;
    std::string q = colour.substr(2, p - 2), a = colour.substr(p + 1);
    if (alnum_name(q) && alnum_name(a)) return TapeCell{q, a};
  }
  return std::nullopt;
}

WangTileSet compile_turing(const TuringMachine& tm, const std::vector<std::string>& input) {
  std::set<std::string> symbols{tm.blank};
  symbols.insert(input.begin(), input.end());
  std::set<std::string> right_targets, left_targets;
  for (const auto& [k, t] : tm.delta) {
    symbols.insert(k.second);
    symbols.insert(t.write);
    (t.move == Move::right ? right_targets : left_targets).insert(t.next);
  }
  const std::string edge = tm_edge_colour(), none = "n0";
  auto cell = [](const std::string& a) { return tm_cell_colour(std::nullopt, a); };
  auto head = [](const std::string& q, const std::string& a) { return tm_cell_colour(q, a); };
  auto in = [](std::size_t k) { return "in" + std::to_string(k); };
  auto mr = [](const std::string& q) { return "mr_" + q; };
  auto ml = [](const std::string& q) { return "ml_" + q; };

  std::vector<WangTile> tiles;
  auto add = [&](WangTile t) {
    if (std::find(tiles.begin(), tiles.end(), t) == tiles.end()) tiles.push_back(std::move(t));
  };
  // bottom row
  const std::size_t n = std::max<std::size_t>(1, input.size());
  auto content = [&](std::size_t k) { return k < input.size() ? input[k] : tm.blank; };
  std::string bot = tm_bottom_colour();
  auto link = [&](std::size_t k) { return k == n ? none : in(k); };  // east of cell k - 1
  add({edge, link(1), bot, head(tm.start, content(0))});
  for (std::size_t k = 1; k < n; ++k) add({in(k), link(k + 1), bot, cell(content(k))});
  add({none, none, bot, cell(tm.blank)});
  // copies
  for (const auto& a : symbols) {
    add({none, none, cell(a), cell(a)});
    add({edge, none, cell(a), cell(a)});
  }
  // the head cell
  for (const auto& [k, t] : tm.delta) {
    const auto& [q, a] = k;
    if (t.move == Move::right) {
      add({none, mr(t.next), head(q, a), cell(t.write)});
      add({edge, mr(t.next), head(q, a), cell(t.write)});
    } else {
      add({ml(t.next), none, head(q, a), cell(t.write)});
      add({edge, none, head(q, a), head(t.next, t.write)});
    }
  }
  // the cell receiving the head
  for (const auto& q : right_targets)
    for (const auto& c : symbols) add({mr(q), none, cell(c), head(q, c)});
  for (const auto& q : left_targets)
    for (const auto& c : symbols) {
      add({none, ml(q), cell(c), head(q, c)});
      add({edge, ml(q), cell(c), head(q, c)});
    }
  return WangTileSet{tiles};
}

std::vector<std::vector<TapeCell>> simulate_by_tiling(const TuringMachine& tm, const std::vector<std::string>& input,
                                                      int steps, int width, bool verbatim) {
  WangTileSet ts = compile_turing(tm, input);
  std::vector<std::vector<TapeCell>> rows;
  for (int h = 1; h <= steps + 1; ++h) {
    RectangleSpec spec;
    spec.width = width;
    spec.height = h;
    spec.west_border = tm_edge_colour();
    spec.south_border = tm_bottom_colour();
    spec.east_border = "n0";
    spec.limit = 2;
    auto tilings = tile_rectangle(ts, spec, verbatim);
    if (tilings.empty()) break;
    if (tilings.size() > 1) throw EncodingError("height " + std::to_string(h) + " admits several tilings");
    const auto& top = tilings[0].back();
    std::vector<TapeCell> row;
    for (int k : top) row.push_back(*decode_tm_colour(ts.tiles[k].n));
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- aTAM ----------------------------------------------------------------------

Term glue(const std::string& g, int strength, const Term& x) {
  return app("gl", {app(g, {x}), numeral(static_cast<std::uint64_t>(strength))});
}

namespace {

int strength_of(const ATAMSystem& sys, const std::string& g) {
  auto it = sys.strength.find(g);
  if (it == sys.strength.end()) throw EncodingError("glue " + g + " has no strength");
  if (it->second < 0) throw EncodingError("glue " + g + " has a negative strength");
  return it->second;
}

}  // namespace

Star atam_tile_star(const ATAMSystem& sys, const WangTile& t) {
  Term x = var("X"), y = var("Y");
  auto gl = [&](const std::string& g, const Term& at) { return glue(g, strength_of(sys, g), at); };
  return Star{Ray::neg(hp(), {gl(t.w, x), x, y}), Ray::neg(vp(), {gl(t.s, y), x, y}),
              Ray::pos(hm(), {gl(t.e, succ(x)), x, y}), Ray::pos(vm(), {gl(t.n, succ(y)), x, y})};
}

Star ambiance_star(int a, int b, int c, int d) {
  auto g = [](const std::string& side, int k) {
    return app("gl", {Term::variable("X" + side), numeral_over(static_cast<std::uint64_t>(k), Term::variable("Y" + side))});
  };
  Term z = var("Z"), w = var("W");
  auto zi = [](int i) { return Term::variable("Z" + std::to_string(i)); };
  auto wi = [](int i) { return Term::variable("W" + std::to_string(i)); };
  return Star{Ray::neg(vm(), {g("a", a), z, w}),       Ray::pos(vp(), {g("b", b), z, w}),
              Ray::neg(hm(), {g("c", c), z, w}),       Ray::pos(hp(), {g("d", d), z, w}),
              Ray::pos(vp(), {g("a", a), zi(1), wi(1)}), Ray::neg(vm(), {g("b", b), zi(2), wi(2)}),
              Ray::pos(hp(), {g("c", c), zi(3), wi(3)}), Ray::neg(hm(), {g("d", d), zi(4), wi(4)})};
}

std::vector<Star> plug_stars(bool verbatim) {
  Term x = var("X"), y = var("Y"), z = var("Z");
  if (verbatim) return {Star{Ray::neg(vp(), {x})}, Star{Ray::pos(vm(), {x})}, Star{Ray::neg(hp(), {x})}, Star{Ray::pos(vm(), {x})}};
  return {Star{Ray::neg(vp(), {x, y, z})}, Star{Ray::pos(vm(), {x, y, z})}, Star{Ray::neg(hp(), {x, y, z})},
          Star{Ray::pos(hm(), {x, y, z})}};
}

ATAMEncoding encode_atam(const ATAMSystem& sys, bool verbatim) {
  if (sys.temperature < 1) throw EncodingError("temperature must be at least 1");
  for (const auto& [g, k] : sys.strength)
    if (k < 0) throw EncodingError("glue " + g + " has a negative strength");
  ATAMEncoding enc;
  const int t = sys.temperature;
  enc.first_ambiance = 0;
  for (int a = 0; a <= t; ++a)
    for (int b = 0; a + b <= t; ++b)
      for (int c = 0; a + b + c <= t; ++c) {
        int d = t - a - b - c;
        enc.constellation.add(ambiance_star(a, b, c, d));
        enc.ambiances.push_back({a, b, c, d});
      }
  enc.first_tile = enc.constellation.size();
  for (const auto& tile : sys.tiles.tiles) enc.constellation.add(atam_tile_star(sys, tile));
  enc.first_plug = enc.constellation.size();
  for (const auto& p : plug_stars(verbatim)) enc.constellation.add(p);
  return enc;
}

namespace {

struct Side {
  int dx, dy;
  int tile_slot;       // side of the new tile
  int intake;          // ambiance slot holding it
  int handover;        // ambiance slot reaching the neighbour
  int neighbour_slot;  // facing side of the neighbour
};

// north, south, east, west in the order of (a, b, c, d)
constexpr Side kSides[4] = {{0, 1, north, 0, 4, south}, {0, -1, south, 1, 5, north},
                            {1, 0, east, 2, 6, west},   {-1, 0, west, 3, 7, east}};

void add_edge(Diagram& d, int u, int su, int v, int sv) {
  if (u > v || (u == v && su > sv)) std::swap(u, v), std::swap(su, sv);
  d.edges.push_back({u, su, v, sv});
}

bool slot_used(const Diagram& d, int v, int s) {
  return std::any_of(d.edges.begin(), d.edges.end(),
                     [&](const GraphEdge& e) { return (e.u == v && e.su == s) || (e.v == v && e.sv == s); });
}

const std::string& side_glue(const WangTile& t, int slot) {
  switch (slot) {
    case west: return t.w;
    case south: return t.s;
    case east: return t.e;
    default: return t.n;
  }
}

}  // namespace

Assembly::Assembly(const ATAMSystem& sys, const ATAMEncoding& enc, Placement seed)
    : sys_(&sys), enc_(&enc), unifier_(enc.constellation) {
  int star = static_cast<int>(enc.first_tile) + seed.tile;
  unifier_.add(star);
  diagram_.vertex_star.push_back(star);
  placed_.push_back(seed);
  vertex_of_.push_back(0);
}

std::optional<Assembly::Attachment> Assembly::attach(Placement p) const {
  auto at = [&](int x, int y) -> int {
    for (std::size_t i = 0; i < placed_.size(); ++i)
      if (placed_[i].x == x && placed_[i].y == y) return static_cast<int>(i);
    return -1;
  };
  if (at(p.x, p.y) >= 0) return std::nullopt;
  const int tile_star = static_cast<int>(enc_->first_tile) + p.tile;
  for (std::size_t k = 0; k < enc_->ambiances.size(); ++k) {
    const auto& req = enc_->ambiances[k];
    Attachment a{diagram_, unifier_};
    int tv = a.unifier.add(tile_star);
    int av = a.unifier.add(static_cast<int>(enc_->first_ambiance + k));
    a.diagram.vertex_star.push_back(tile_star);
    a.diagram.vertex_star.push_back(static_cast<int>(enc_->first_ambiance + k));
    bool ok = true;
    for (int s = 0; s < 4 && ok; ++s) {
      if (req[s] == 0) continue;
      const Side& side = kSides[s];
      int nb = at(p.x + side.dx, p.y + side.dy);
      if (nb < 0) {
        ok = false;
        break;
      }
      int nv = vertex_of_[nb];
      ok = !slot_used(a.diagram, nv, side.neighbour_slot) && a.unifier.connect(av, side.intake, tv, side.tile_slot) &&
           a.unifier.connect(av, side.handover, nv, side.neighbour_slot);
      if (ok) {
        add_edge(a.diagram, av, side.intake, tv, side.tile_slot);
        add_edge(a.diagram, av, side.handover, nv, side.neighbour_slot);
      }
    }
    if (ok) return a;
  }
  return std::nullopt;
}

bool Assembly::can_attach(Placement p) const { return attach(p).has_value(); }

bool Assembly::try_attach(Placement p) {
  auto a = attach(p);
  if (!a) return false;
  vertex_of_.push_back(static_cast<int>(diagram_.size()));
  diagram_ = std::move(a->diagram);
  unifier_ = std::move(a->unifier);
  placed_.push_back(p);
  return true;
}

bool atam_rule(const ATAMSystem& sys, const std::vector<Placement>& assembly, Placement p) {
  int total = 0;
  for (const auto& q : assembly) {
    if (q.x == p.x && q.y == p.y) return false;
  }
  const WangTile& t = sys.tiles.tiles.at(static_cast<std::size_t>(p.tile));
  for (const auto& side : kSides)
    for (const auto& q : assembly)
      if (q.x == p.x + side.dx && q.y == p.y + side.dy) {
        const auto& g = side_glue(t, side.tile_slot);
        if (g == side_glue(sys.tiles.tiles.at(static_cast<std::size_t>(q.tile)), side.neighbour_slot))
          total += sys.strength.at(g);
      }
  return total >= sys.temperature;
}

}  // namespace stellar::enc
