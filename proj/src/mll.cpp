//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/mll.hpp"

#include "stellar/realisability.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace stellar::mll {

// --- formulas ----------------------------------------------------------------

Formula Formula::atom(int index) {
  Formula f;
  f.kind_ = Kind::atom;
  f.index_ = index;
  return f;
}

Formula Formula::dual_atom(int index) {
  Formula f;
  f.kind_ = Kind::dual_atom;
  f.index_ = index;
  return f;
}

Formula Formula::tensor(const Formula& a, const Formula& b) {
  Formula f;
  f.kind_ = Kind::tensor;
  f.left_ = std::make_shared<const Formula>(a);
  f.right_ = std::make_shared<const Formula>(b);
  return f;
}

Formula Formula::par(const Formula& a, const Formula& b) {
  Formula f = tensor(a, b);
  f.kind_ = Kind::par;
  return f;
}

std::size_t Formula::connectives() const {
  return is_atomic() ? 0 : 1 + left_->connectives() + right_->connectives();
}

Formula Formula::dual() const {
  switch (kind_) {
    case Kind::atom: return dual_atom(index_);
    case Kind::dual_atom: return atom(index_);
    case Kind::tensor: return par(left_->dual(), right_->dual());
    case Kind::par: break;
  }
  return tensor(left_->dual(), right_->dual());
}

std::string Formula::to_string() const {
  switch (kind_) {
    case Kind::atom: return "X" + std::to_string(index_);
    case Kind::dual_atom: return "~X" + std::to_string(index_);
    case Kind::tensor: return "(" + left_->to_string() + " * " + right_->to_string() + ")";
    case Kind::par: break;
  }
  return "(" + left_->to_string() + " | " + right_->to_string() + ")";
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.is_atomic()) return a.index_ == b.index_;
  return *a.left_ == *b.left_ && *a.right_ == *b.right_;
}

namespace {

struct FormulaParser {
  std::string_view src;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw StructureError("formula: " + what + " at offset " + std::to_string(pos));
  }
  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  int number() {
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (start == pos) fail("expected atom index");
    return std::stoi(std::string(src.substr(start, pos - start)));
  }
  Formula formula() {
    skip();
    if (pos >= src.size()) fail("unexpected end");
    char ch = src[pos];
    if (ch == '~') {
      ++pos;
      if (pos >= src.size() || src[pos] != 'X') fail("expected X after ~");
      ++pos;
      return Formula::dual_atom(number());
    }
    if (ch == 'X') {
      ++pos;
      return Formula::atom(number());
    }
    if (ch != '(') fail("unexpected character");
    ++pos;
    Formula a = formula();
    skip();
    if (pos >= src.size()) fail("unexpected end");
    char op = src[pos++];
    if (op != '*' && op != '|') fail("expected * or |");
    Formula b = formula();
    skip();
    if (pos >= src.size() || src[pos] != ')') fail("expected )");
    ++pos;
    return op == '*' ? Formula::tensor(a, b) : Formula::par(a, b);
  }
};

}  // namespace

Formula parse_formula(std::string_view src) {
  FormulaParser p{src};
  Formula f = p.formula();
  p.skip();
  if (p.pos != src.size()) p.fail("trailing input");
  return f;
}

const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::ax: return "ax";
    case LinkKind::cut: return "cut";
    case LinkKind::tensor: return "tensor";
    case LinkKind::par: return "par";
  }
  return "?";
}

// --- structures ----------------------------------------------------------------

int ProofStructure::add_vertex(const Formula& f) {
  labels.push_back(f);
  return static_cast<int>(labels.size()) - 1;
}

std::pair<int, int> ProofStructure::add_axiom(const Formula& a) {
  if (!a.is_atomic()) throw StructureError("axioms are atomic: " + a.to_string());
  int u = add_vertex(a);
  int v = add_vertex(a.dual());
  links.push_back(Link{LinkKind::ax, {}, {u, v}});
  return {u, v};
}

int ProofStructure::add_tensor(int l, int r) {
  int v = add_vertex(Formula::tensor(labels.at(l), labels.at(r)));
  links.push_back(Link{LinkKind::tensor, {l, r}, {v}});
  return v;
}

int ProofStructure::add_par(int l, int r) {
  int v = add_vertex(Formula::par(labels.at(l), labels.at(r)));
  links.push_back(Link{LinkKind::par, {l, r}, {v}});
  return v;
}

void ProofStructure::add_cut(int a, int b) {
  links.push_back(Link{LinkKind::cut, {a, b}, {}});
}

void ProofStructure::close() {
  std::vector<bool> used(labels.size(), false);
  for (const auto& e : links)
    for (int v : e.sources) used.at(v) = true;
  conclusions.clear();
  for (std::size_t v = 0; v < labels.size(); ++v)
    if (!used[v]) conclusions.push_back(static_cast<int>(v));
}

void ProofStructure::validate(bool forest) const {
  const int n = static_cast<int>(labels.size());
  std::vector<int> targeted(n, 0), sourced(n, 0);
  auto in_range = [&](int v) {
    if (v < 0 || v >= n) throw StructureError("vertex " + std::to_string(v) + " out of range");
  };
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& e = links[i];
    std::size_t ns = e.kind == LinkKind::ax ? 0 : 2;
    std::size_t nt = e.kind == LinkKind::ax ? 2 : e.kind == LinkKind::cut ? 0 : 1;
    if (e.sources.size() != ns || e.targets.size() != nt)
      throw StructureError(std::string("malformed ") + to_string(e.kind) + " link " + std::to_string(i));
    for (int v : e.sources) in_range(v), ++sourced[v];
    for (int v : e.targets) in_range(v), ++targeted[v];
    switch (e.kind) {
      case LinkKind::ax:
        if (!labels[e.targets[0]].is_atomic() || !(labels[e.targets[1]] == labels[e.targets[0]].dual()))
          throw StructureError("axiom " + std::to_string(i) + " does not join dual atoms");
        break;
      case LinkKind::cut:
        if (!(labels[e.sources[1]] == labels[e.sources[0]].dual()))
          throw StructureError("cut " + std::to_string(i) + " does not join dual formulas");
        break;
      case LinkKind::tensor:
      case LinkKind::par: {
        Formula want = e.kind == LinkKind::tensor ? Formula::tensor(labels[e.sources[0]], labels[e.sources[1]])
                                                  : Formula::par(labels[e.sources[0]], labels[e.sources[1]]);
        if (!(labels[e.targets[0]] == want))
          throw StructureError("link " + std::to_string(i) + " target label mismatch");
        break;
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (targeted[v] > 1 || (!forest && targeted[v] == 0))
      throw StructureError("vertex " + std::to_string(v) + " must be the target of exactly one link");
    if (sourced[v] > 1) throw StructureError("vertex " + std::to_string(v) + " is a source twice");
  }
  std::vector<int> free_vs;
  for (int v = 0; v < n; ++v)
    if (sourced[v] == 0) free_vs.push_back(v);
  std::vector<int> concl = conclusions;
  std::sort(concl.begin(), concl.end());
  if (concl != free_vs) throw StructureError("conclusions do not list the free vertices exactly");
}

std::size_t ProofStructure::count(LinkKind k) const {
  return static_cast<std::size_t>(
      std::count_if(links.begin(), links.end(), [k](const Link& e) { return e.kind == k; }));
}

static std::vector<int> links_of(const ProofStructure& s, LinkKind k) {
  std::vector<int> out;
  for (std::size_t i = 0; i < s.links.size(); ++i)
    if (s.links[i].kind == k) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> ProofStructure::par_links() const { return links_of(*this, LinkKind::par); }
std::vector<int> ProofStructure::cut_links() const { return links_of(*this, LinkKind::cut); }

int ProofStructure::producer(int v) const {
  for (std::size_t i = 0; i < links.size(); ++i)
    for (int t : links[i].targets)
      if (t == v) return static_cast<int>(i);
  return -1;
}

int ProofStructure::consumer(int v) const {
  for (std::size_t i = 0; i < links.size(); ++i)
    for (int t : links[i].sources)
      if (t == v) return static_cast<int>(i);
  return -1;
}

ProofStructure syntax_forest(const std::vector<Formula>& conclusions) {
  ProofStructure s;
  std::function<int(const Formula&)> build = [&](const Formula& f) {
    if (f.is_atomic()) return s.add_vertex(f);
    int l = build(f.left());
    int r = build(f.right());
    return f.kind() == Formula::Kind::tensor ? s.add_tensor(l, r) : s.add_par(l, r);
  };
  for (const auto& f : conclusions) s.conclusions.push_back(build(f));
  return s;
}

// --- text formats ----------------------------------------------------------------

namespace {

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

ProofStructure parse_structure(std::string_view src) {
  ProofStructure s;
  std::map<std::string, int> names;
  bool have_conclusions = false;
  std::istringstream in{std::string(src)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> void {
    throw StructureError("line " + std::to_string(lineno) + ": " + what);
  };
  auto fresh = [&](const std::string& name, const Formula& f) {
    if (names.count(name)) fail("vertex '" + name + "' defined twice");
    int v = s.add_vertex(f);
    names[name] = v;
    return v;
  };
  auto known = [&](const std::string& name) {
    auto it = names.find(name);
    if (it == names.end()) fail("unknown vertex '" + name + "'");
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "ax") {
      if (w.size() != 4) fail("expected: ax a b FORMULA");
      Formula f = Formula::atom(0);
      try {
        f = parse_formula(w[3]);
      } catch (const StructureError& e) {
        fail(e.what());
      }
      if (!f.is_atomic()) fail("axioms are atomic");
      int a = fresh(w[1], f);
      int b = fresh(w[2], f.dual());
      s.links.push_back(Link{LinkKind::ax, {}, {a, b}});
    } else if (w[0] == "tensor" || w[0] == "par") {
      if (w.size() != 5 || w[3] != "->") fail("expected: " + w[0] + " a b -> c");
      int a = known(w[1]), b = known(w[2]);
      Formula f = w[0] == "tensor" ? Formula::tensor(s.labels[a], s.labels[b]) : Formula::par(s.labels[a], s.labels[b]);
      int c = fresh(w[4], f);
      s.links.push_back(Link{w[0] == "tensor" ? LinkKind::tensor : LinkKind::par, {a, b}, {c}});
    } else if (w[0] == "cut") {
      if (w.size() != 3) fail("expected: cut a b");
      s.add_cut(known(w[1]), known(w[2]));
    } else if (w[0] == "conclusions") {
      have_conclusions = true;
      s.conclusions.clear();
      for (std::size_t i = 1; i < w.size(); ++i) s.conclusions.push_back(known(w[i]));
    } else {
      fail("unknown directive '" + w[0] + "'");
    }
  }
  if (!have_conclusions) s.close();
  s.validate();
  return s;
}

// Assumes every link comes after the producers of its sources, which all
// builders here maintain.
std::string to_text(const ProofStructure& s) {
  auto name = [](int v) { return "v" + std::to_string(v); };
  std::string out;
  for (const auto& e : s.links) {
    switch (e.kind) {
      case LinkKind::ax:
        out += "ax " + name(e.targets[0]) + " " + name(e.targets[1]) + " " + s.labels[e.targets[0]].to_string() + "\n";
        break;
      case LinkKind::cut:
        out += "cut " + name(e.sources[0]) + " " + name(e.sources[1]) + "\n";
        break;
      default:
        out += std::string(to_string(e.kind)) + " " + name(e.sources[0]) + " " + name(e.sources[1]) + " -> " +
               name(e.targets[0]) + "\n";
    }
  }
  out += "conclusions";
  for (int v : s.conclusions) out += " " + name(v);
  return out + "\n";
}

std::size_t Derivation::rules() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.rules();
  return n;
}

namespace {

template <class T>
std::vector<T> without(const std::vector<T>& xs, std::size_t i, std::size_t j = static_cast<std::size_t>(-1)) {
  std::vector<T> out;
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (k != i && k != j) out.push_back(xs[k]);
  return out;
}

void check_index(std::size_t size, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= size)
    throw StructureError("derivation index " + std::to_string(i) + " out of range");
}

// Builds into s and returns conclusion vertices in sequent order.
std::vector<int> build_into(ProofStructure& s, const Derivation& d) {
  using Rule = Derivation::Rule;
  std::size_t want = d.rule == Rule::ax ? 0 : d.rule == Rule::par ? 1 : 2;
  if (d.premises.size() != want) throw StructureError("derivation: wrong number of premises");
  switch (d.rule) {
    case Rule::ax: {
      auto [u, v] = s.add_axiom(d.atom);
      return {u, v};
    }
    case Rule::par: {
      auto c = build_into(s, d.premises[0]);
      check_index(c.size(), d.i);
      check_index(c.size(), d.j);
      if (d.i == d.j) throw StructureError("derivation: par on a single formula");
      int v = s.add_par(c[d.i], c[d.j]);
      auto out = without(c, d.i, d.j);
      out.push_back(v);
      return out;
    }
    case Rule::tensor:
    case Rule::cut: {
      auto c1 = build_into(s, d.premises[0]);
      auto c2 = build_into(s, d.premises[1]);
      check_index(c1.size(), d.i);
      check_index(c2.size(), d.j);
      auto out = without(c1, d.i);
      auto rest = without(c2, d.j);
      out.insert(out.end(), rest.begin(), rest.end());
      if (d.rule == Rule::tensor) {
        out.push_back(s.add_tensor(c1[d.i], c2[d.j]));
      } else {
        if (!(s.labels[c1[d.i]] == s.labels[c2[d.j]].dual()))
          throw StructureError("derivation: cut on non-dual formulas");
        s.add_cut(c1[d.i], c2[d.j]);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

std::vector<Formula> Derivation::conclusions() const {
  ProofStructure s = build_structure(*this);
  std::vector<Formula> out;
  for (int v : s.conclusions) out.push_back(s.labels[v]);
  return out;
}

std::string Derivation::to_string() const {
  switch (rule) {
    case Rule::ax: return "(ax " + atom.to_string() + ")";
    case Rule::par: return "(par " + std::to_string(i) + " " + std::to_string(j) + " " + premises.at(0).to_string() + ")";
    case Rule::tensor:
    case Rule::cut: break;
  }
  return std::string(rule == Rule::tensor ? "(tensor " : "(cut ") + std::to_string(i) + " " +
         premises.at(0).to_string() + " " + std::to_string(j) + " " + premises.at(1).to_string() + ")";
}

namespace {

struct SexpParser {
  std::string_view src;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw StructureError("derivation: " + what + " at offset " + std::to_string(pos));
  }
  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  std::string token() {
    skip();
    std::size_t start = pos;
    while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) && src[pos] != '(' &&
           src[pos] != ')')
      ++pos;
    if (start == pos) fail("expected a token");
    return std::string(src.substr(start, pos - start));
  }
  int index() {
    std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail("expected an index, got '" + t + "'");
    return std::stoi(t);
  }
  void expect(char c) {
    skip();
    if (pos >= src.size() || src[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  Derivation derivation() {
    expect('(');
    Derivation d;
    std::string rule = token();
    if (rule == "ax") {
      d.rule = Derivation::Rule::ax;
      try {
        d.atom = parse_formula(token());
      } catch (const StructureError& e) {
        fail(e.what());
      }
      if (!d.atom.is_atomic()) fail("axioms are atomic");
    } else if (rule == "par") {
      d.rule = Derivation::Rule::par;
      d.i = index();
      d.j = index();
      d.premises.push_back(derivation());
    } else if (rule == "tensor" || rule == "cut") {
      d.rule = rule == "tensor" ? Derivation::Rule::tensor : Derivation::Rule::cut;
      d.i = index();
      d.premises.push_back(derivation());
      d.j = index();
      d.premises.push_back(derivation());
    } else {
      fail("unknown rule '" + rule + "'");
    }
    expect(')');
    return d;
  }
};

}  // namespace

Derivation parse_derivation(std::string_view src) {
  SexpParser p{src};
  Derivation d = p.derivation();
  p.skip();
  if (p.pos != src.size()) p.fail("trailing input");
  return d;
}

ProofStructure build_structure(const Derivation& d) {
  ProofStructure s;
  s.conclusions = build_into(s, d);
  s.validate();
  return s;
}

// --- addresses ----------------------------------------------------------------

namespace {

struct Layout {
  std::vector<int> producer, consumer, root;
  std::vector<std::string> path;  // steps from the vertex down, nearest first
  std::vector<std::string> name;  // valid on roots

  explicit Layout(const ProofStructure& s) {
    const std::size_t n = s.labels.size();
    producer.assign(n, -1);
    consumer.assign(n, -1);
    root.assign(n, -1);
    path.assign(n, "");
    name.assign(n, "");
    for (std::size_t i = 0; i < s.links.size(); ++i) {
      for (int v : s.links[i].targets) producer.at(v) = static_cast<int>(i);
      for (int v : s.links[i].sources) consumer.at(v) = static_cast<int>(i);
    }
    for (std::size_t k = 0; k < s.conclusions.size(); ++k) name.at(s.conclusions[k]) = "p" + std::to_string(k);
    int k = 0;
    for (const auto& e : s.links)
      if (e.kind == LinkKind::cut) {
        name.at(e.sources[0]) = "cut" + std::to_string(k) + "l";
        name.at(e.sources[1]) = "cut" + std::to_string(k) + "r";
        ++k;
      }
    for (std::size_t v = 0; v < n; ++v) {
      int u = static_cast<int>(v);
      std::string steps;
      std::size_t guard = 0;
      while (consumer[u] != -1 && s.links[consumer[u]].kind != LinkKind::cut) {
        const Link& e = s.links[consumer[u]];
        steps += e.sources[0] == u ? 'l' : 'r';
        u = e.targets[0];
        if (++guard > n) throw StructureError("connective links form a cycle");
      }
      root[v] = u;
      path[v] = steps;
    }
  }

  bool cut_source(int v) const { return consumer[v] != -1; }  // on roots only

  Term over(int v, Term base) const {
    for (char c : path[v]) base = Term::apply(c == 'l' ? "l" : "r", {base});
    return base;
  }
  Term address(int v) const { return Term::apply(name[root[v]], {over(v, Term::variable("X"))}); }
  // What v hands down to the star of its consumer in an ordeal.
  Term handover(int v) const {
    const std::string& c = name[root[v]];
    if (v == root[v] && cut_source(v)) return Term::apply(c, {Term::variable("X")});
    return Term::apply("q" + c, {over(v, Term::constant("e")), Term::variable("X")});
  }
};

void check_vertex(const ProofStructure& s, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= s.labels.size())
    throw StructureError("vertex " + std::to_string(v) + " not in structure");
}

}  // namespace

int root_of(const ProofStructure& s, int v) {
  check_vertex(s, v);
  return Layout(s).root[v];
}

std::string root_name(const ProofStructure& s, int v) {
  check_vertex(s, v);
  Layout l(s);
  return l.name[l.root[v]];
}

Term address_of(const ProofStructure& s, int v) {
  check_vertex(s, v);
  return Layout(s).address(v);
}

std::vector<Term> conclusion_addresses(const ProofStructure& s) {
  Layout l(s);
  std::vector<Term> out;
  for (std::size_t v = 0; v < s.labels.size(); ++v) {
    int p = l.producer[v];
    bool atom = p == -1 || s.links[p].kind == LinkKind::ax;
    if (atom && !l.cut_source(l.root[v])) out.push_back(l.address(static_cast<int>(v)));
  }
  return out;
}

Constellation vehicle(const ProofStructure& s) {
  Layout l(s);
  Constellation out;
  for (const auto& e : s.links)
    if (e.kind == LinkKind::ax) out.add(Star{Ray::plain(l.address(e.targets[0])), Ray::plain(l.address(e.targets[1]))});
  return out;
}

Constellation cut_constellation(const ProofStructure& s) {
  Layout l(s);
  Constellation out;
  Term x = Term::variable("X");
  for (const auto& e : s.links)
    if (e.kind == LinkKind::cut)
      out.add(Star{Ray::plain(Term::apply(l.name[e.sources[0]], {x})), Ray::plain(Term::apply(l.name[e.sources[1]], {x}))});
  return out;
}

ExecutionResult exec_structure(const ProofStructure& s, int fuel) {
  Constellation sigma = constellation_union(colourize("c", Polarity::positive, vehicle(s)),
                                            colourize("c", Polarity::negative, cut_constellation(s)));
  ExecutionResult r = execute(sigma, ColourSet{"c"}, fuel, true);
  r.output = decolourize("c", r.output);
  return r;
}

// --- cut elimination ----------------------------------------------------------------

namespace {

// Drops dead vertices/links, renumbering the rest in order.
ProofStructure compact(const ProofStructure& s, const std::vector<bool>& dead_v, const std::vector<bool>& dead_l) {
  std::vector<int> remap(s.labels.size(), -1);
  ProofStructure out;
  for (std::size_t v = 0; v < s.labels.size(); ++v)
    if (!dead_v[v]) remap[v] = out.add_vertex(s.labels[v]);
  auto m = [&](std::vector<int> vs) {
    for (int& v : vs) v = remap[v];
    return vs;
  };
  for (std::size_t i = 0; i < s.links.size(); ++i)
    if (!dead_l[i]) out.links.push_back(Link{s.links[i].kind, m(s.links[i].sources), m(s.links[i].targets)});
  out.conclusions = m(s.conclusions);
  return out;
}

// Link order may no longer put producers before consumers; restore that so
// the text form stays re-parseable.
void sort_links(ProofStructure& s) {
  std::vector<Link> done;
  std::vector<bool> ready(s.labels.size(), false), placed(s.links.size(), false);
  while (done.size() < s.links.size()) {
    bool progress = false;
    for (std::size_t i = 0; i < s.links.size(); ++i) {
      if (placed[i]) continue;
      const Link& e = s.links[i];
      if (std::all_of(e.sources.begin(), e.sources.end(), [&](int v) { return ready[v]; })) {
        for (int v : e.targets) ready[v] = true;
        done.push_back(e);
        placed[i] = true;
        progress = true;
      }
    }
    if (!progress) throw StructureError("connective links form a cycle");
  }
  s.links = std::move(done);
}

}  // namespace

ProofStructure reduce_cut(const ProofStructure& s) {
  auto cuts = s.cut_links();
  if (cuts.empty()) throw NoRedex();
  const int k = cuts.front();
  ProofStructure w = s;
  std::vector<bool> dead_v(w.labels.size(), false), dead_l(w.links.size(), false);
  int x = w.links[k].sources[0], y = w.links[k].sources[1];
  int px = w.producer(x), py = w.producer(y);
  if (px == -1 || py == -1) throw StructureError("cut source without producer");
  if (w.links[px].kind == LinkKind::ax && w.links[py].kind != LinkKind::ax) {
    std::swap(x, y);
    std::swap(px, py);
  }
  dead_l[k] = true;
  if (w.links[py].kind == LinkKind::ax) {
    const auto& t = w.links[py].targets;
    int b = t[0] == y ? t[1] : t[0];
    dead_l[py] = true;
    dead_v[y] = true;
    if (b == x) {
      dead_v[x] = true;  // the axiom closes on its own cut
    } else {
      dead_v[b] = true;
      for (auto& e : w.links)
        for (int& v : e.sources)
          if (v == b) v = x;
      for (int& v : w.conclusions)
        if (v == b) v = x;
    }
  } else {
    const Link ex = w.links[px];
    const Link ey = w.links[py];
    dead_l[px] = dead_l[py] = true;
    dead_v[x] = dead_v[y] = true;
    // The cut is rewritten in place: the first new cut keeps its position.
    w.links[k] = Link{LinkKind::cut, {ex.sources[0], ey.sources[0]}, {}};
    dead_l[k] = false;
    w.links.push_back(Link{LinkKind::cut, {ex.sources[1], ey.sources[1]}, {}});
    dead_l.push_back(false);
  }
  ProofStructure out = compact(w, dead_v, dead_l);
  sort_links(out);
  out.validate();
  return out;
}

ProofStructure normal_form(const ProofStructure& s) {
  ProofStructure cur = s;
  while (cur.count(LinkKind::cut) > 0) cur = reduce_cut(cur);
  return cur;
}

bool dynamics_check(const ProofStructure& s, int fuel) {
  ExecutionResult r = exec_structure(s, fuel);
  return r.status == ExecStatus::complete && alpha_equivalent(r.output, vehicle(normal_form(s)));
}

// --- correctness ----------------------------------------------------------------

std::vector<Switching> all_switchings(const ProofStructure& s) {
  const std::size_t n = s.count(LinkKind::par);
  if (n > 20) throw StructureError("too many par links to enumerate switchings");
  std::vector<Switching> out;
  for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
    Switching sw(n);
    for (std::size_t i = 0; i < n; ++i) sw[i] = (m >> i) & 1;
    out.push_back(std::move(sw));
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

bool CorrectionGraph::acyclic() const {
  UnionFind uf(nodes);
  for (auto [a, b] : edges)
    if (!uf.unite(a, b)) return false;
  return true;
}

bool CorrectionGraph::connected() const {
  UnionFind uf(nodes);
  std::size_t comps = nodes;
  for (auto [a, b] : edges)
    if (uf.unite(a, b)) --comps;
  return comps <= 1;
}

CorrectionGraph correction_graph(const ProofStructure& s, const Switching& sw) {
  if (sw.size() != s.count(LinkKind::par)) throw std::invalid_argument("switching must cover every par link");
  const int nv = static_cast<int>(s.labels.size());
  CorrectionGraph g;
  g.nodes = s.labels.size() + s.links.size();
  std::size_t p = 0;
  for (std::size_t i = 0; i < s.links.size(); ++i) {
    const Link& e = s.links[i];
    int node = nv + static_cast<int>(i);
    for (int t : e.targets) g.edges.emplace_back(t, node);
    if (e.kind == LinkKind::par) {
      g.edges.emplace_back(e.sources[sw[p++] ? 1 : 0], node);
    } else {
      for (int v : e.sources) g.edges.emplace_back(v, node);
    }
  }
  return g;
}

bool dr_correct(const ProofStructure& s) {
  for (const auto& sw : all_switchings(s))
    if (!correction_graph(s, sw).is_tree()) return false;
  return true;
}

bool mix_correct(const ProofStructure& s) {
  for (const auto& sw : all_switchings(s))
    if (!correction_graph(s, sw).acyclic()) return false;
  return true;
}

Constellation ordeal(const ProofStructure& s, const Switching& sw) {
  if (sw.size() != s.count(LinkKind::par)) throw std::invalid_argument("switching must cover every par link");
  Layout l(s);
  auto neg_c = [](const Term& t) { return Ray::neg("c", {t}); };
  auto pos_c = [](const Term& t) { return Ray::pos("c", {t}); };
  Constellation out;
  for (std::size_t v = 0; v < s.labels.size(); ++v) {
    int p = l.producer[v];
    if (p != -1 && s.links[p].kind != LinkKind::ax) continue;
    int u = static_cast<int>(v);
    out.add(Star{Ray::neg("t", {l.address(u)}), pos_c(l.handover(u))});
  }
  std::size_t k = 0;
  for (const auto& e : s.links) {
    if (e.kind == LinkKind::tensor) {
      out.add(Star{neg_c(l.handover(e.sources[0])), neg_c(l.handover(e.sources[1])), pos_c(l.handover(e.targets[0]))});
    } else if (e.kind == LinkKind::par) {
      bool right = sw[k++];
      int kept = e.sources[right ? 1 : 0], dropped = e.sources[right ? 0 : 1];
      out.add(Star{neg_c(l.handover(kept)), pos_c(l.handover(e.targets[0]))});
      // The dropped premise ends in a marker so that a component cut off
      // from every conclusion still leaves a star behind.
      out.add(Star{neg_c(l.handover(dropped)), Ray::plain(Term::apply("sw" + std::to_string(k - 1), {Term::variable("X")}))});
    }
  }
  for (std::size_t i = 0; i < s.conclusions.size(); ++i) {
    int v = s.conclusions[i];
    out.add(Star{Ray::plain(Term::apply(l.name[v], {Term::variable("X")})), neg_c(l.handover(v))});
  }
  return out;
}

Constellation stellar_test(const ProofStructure& s, const Switching& sw) {
  Constellation sigma = colourize("t", Polarity::positive, vehicle(s));
  sigma = constellation_union(sigma, colourize("c", Polarity::negative, cut_constellation(s)));
  return constellation_union(sigma, ordeal(s, sw));
}

Star expected_conclusion_star(const ProofStructure& s) {
  std::vector<Ray> rays;
  for (std::size_t i = 0; i < s.conclusions.size(); ++i)
    rays.push_back(Ray::plain(Term::apply("p" + std::to_string(i), {Term::variable("X")})));
  for (std::size_t k = 0; k < s.count(LinkKind::par); ++k)
    rays.push_back(Ray::plain(Term::apply("sw" + std::to_string(k), {Term::variable("X")})));
  if (rays.empty()) throw std::invalid_argument("structure has no conclusions");
  return Star(std::move(rays));
}

const char* to_string(NetVerdict v) {
  switch (v) {
    case NetVerdict::proof_net: return "proof_net";
    case NetVerdict::not_proof_net: return "not_proof_net";
    case NetVerdict::unknown: return "unknown";
  }
  return "?";
}

CorrectnessReport stellar_correct(const ProofStructure& s, int fuel) {
  CorrectnessReport rep;
  std::optional<Constellation> expected;
  if (!s.conclusions.empty()) expected = Constellation{expected_conclusion_star(s)};
  const ColourSet colours{"t", "c"};
  bool failed = false, unknown = false, sn_no = false, sn_unknown = false;
  for (const auto& sw : all_switchings(s)) {
    SwitchingReport r;
    r.switching = sw;
    Constellation test = stellar_test(s, sw);
    r.tree_exec = execute(test, colours, fuel, true);
    switch (r.tree_exec.status) {
      case ExecStatus::complete:
        if (!expected || !alpha_equivalent(r.tree_exec.output, *expected)) failed = true;
        break;
      case ExecStatus::divergent: failed = true; break;
      case ExecStatus::fuel_exhausted: unknown = true; break;
    }
    ExecutionResult general = execute(test, colours, fuel, false);
    r.normalising = general.status == ExecStatus::complete     ? Verdict::yes
                    : general.status == ExecStatus::divergent ? Verdict::no
                                                              : Verdict::unknown;
    r.certificate = general.certificate;
    if (r.normalising == Verdict::no) sn_no = true;
    if (r.normalising == Verdict::unknown) sn_unknown = true;
    rep.switchings.push_back(std::move(r));
  }
  rep.verdict = failed ? NetVerdict::not_proof_net : unknown ? NetVerdict::unknown : NetVerdict::proof_net;
  rep.strongly_normalising = sn_no ? Verdict::no : sn_unknown ? Verdict::unknown : Verdict::yes;
  return rep;
}

TestType ordeal_type(const std::vector<Formula>& gamma) {
  ProofStructure forest = syntax_forest(gamma);
  TestType t;
  t.colours = {"t", "c"};
  for (const auto& sw : all_switchings(forest)) {
    std::string id = "sigma";
    for (bool b : sw) id += b ? 'r' : 'l';
    t.tests.push_back(ordeal(forest, sw));
    t.ids.push_back(id);
  }
  return t;
}

// --- proof-like constellations ----------------------------------------------------------------

bool is_proof_like(const Constellation& sig, const std::vector<Term>& addresses) {
  for (const auto& star : sig)
    if (star.size() != 2) return false;
  std::vector<Ray> want;
  for (const auto& t : addresses) want.push_back(Ray::plain(t));
  return same_location(location(sig), prefix_reduce(want));
}

const char* to_string(ReconstructFailure f) {
  switch (f) {
    case ReconstructFailure::none: return "none";
    case ReconstructFailure::not_proof_like: return "NotProofLike";
    case ReconstructFailure::address_mismatch: return "AddressMismatch";
    case ReconstructFailure::cyclic: return "Cyclic";
  }
  return "?";
}

ReconstructResult reconstruct_proof_net(const Constellation& sig, const std::vector<Formula>& conclusions) {
  ReconstructResult res;
  auto fail = [&](ReconstructFailure f, std::string why) {
    res.failure = f;
    res.detail = std::move(why);
    return res;
  };
  ProofStructure s = syntax_forest(conclusions);
  Layout l(s);
  std::map<std::string, int> leaf_at;
  for (std::size_t v = 0; v < s.labels.size(); ++v)
    if (l.producer[v] == -1) leaf_at[canonical_string(Star{Ray::plain(l.address(static_cast<int>(v)))})] = static_cast<int>(v);
  std::vector<bool> used(s.labels.size(), false);
  for (const auto& star : sig) {
    if (star.size() != 2) return fail(ReconstructFailure::not_proof_like, "star is not binary: " + canonical_string(star));
    int ends[2];
    for (int i = 0; i < 2; ++i) {
      const Ray& r = star[i];
      if (r.polarised()) return fail(ReconstructFailure::not_proof_like, "polarised ray " + r.to_string());
      auto it = leaf_at.find(canonical_string(Star{r}));
      if (it == leaf_at.end()) return fail(ReconstructFailure::address_mismatch, "no atom at " + r.to_string());
      if (used[it->second]) return fail(ReconstructFailure::not_proof_like, "address used twice: " + r.to_string());
      used[it->second] = true;
      ends[i] = it->second;
    }
    if (!(s.labels[ends[1]] == s.labels[ends[0]].dual()))
      return fail(ReconstructFailure::address_mismatch,
                  "non-dual atoms " + s.labels[ends[0]].to_string() + ", " + s.labels[ends[1]].to_string());
    s.links.insert(s.links.begin(), Link{LinkKind::ax, {}, {ends[0], ends[1]}});
  }
  for (const auto& [key, v] : leaf_at)
    if (!used[v]) return fail(ReconstructFailure::not_proof_like, "atom without axiom at " + key);
  std::reverse(s.links.begin(), s.links.begin() + static_cast<std::ptrdiff_t>(sig.size()));
  s.validate();
  if (!mix_correct(s)) return fail(ReconstructFailure::cyclic, "some correction graph has a cycle");
  res.structure = std::move(s);
  return res;
}

// --- isomorphism ----------------------------------------------------------------

namespace {

// Root i of a relabelled structure gets key "c<i>" for conclusions and a
// caller-chosen key for cut sources; atoms are then named by root key and
// path. Two structures are isomorphic iff, for some matching of cuts, the
// forests agree and the axiom pairs coincide.
std::string fingerprint(const ProofStructure& s, const Layout& l, const std::map<int, std::string>& root_key) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < s.conclusions.size(); ++i) parts.push_back("C" + s.labels[s.conclusions[i]].to_string());
  std::set<std::string> cuts;
  for (const auto& e : s.links)
    if (e.kind == LinkKind::cut) {
      std::string a = root_key.at(e.sources[0]) + s.labels[e.sources[0]].to_string();
      std::string b = root_key.at(e.sources[1]) + s.labels[e.sources[1]].to_string();
      cuts.insert(std::min(a, b) + "=" + std::max(a, b));
    }
  std::set<std::string> axioms;
  for (const auto& e : s.links)
    if (e.kind == LinkKind::ax) {
      std::string a = root_key.at(l.root[e.targets[0]]) + ":" + l.path[e.targets[0]];
      std::string b = root_key.at(l.root[e.targets[1]]) + ":" + l.path[e.targets[1]];
      axioms.insert(std::min(a, b) + "~" + std::max(a, b));
    }
  for (const auto& c : cuts) parts.push_back(c);
  for (const auto& a : axioms) parts.push_back(a);
  std::string out;
  for (const auto& p : parts) out += p + "\n";
  return out;
}

}  // namespace

bool isomorphic(const ProofStructure& a, const ProofStructure& b) {
  if (a.labels.size() != b.labels.size() || a.links.size() != b.links.size() ||
      a.conclusions.size() != b.conclusions.size())
    return false;
  for (LinkKind k : {LinkKind::ax, LinkKind::cut, LinkKind::tensor, LinkKind::par})
    if (a.count(k) != b.count(k)) return false;
  Layout la(a), lb(b);
  auto keys = [](const ProofStructure& s, const std::vector<int>& order, const std::vector<bool>& flip) {
    std::map<int, std::string> key;
    for (std::size_t i = 0; i < s.conclusions.size(); ++i) key[s.conclusions[i]] = "c" + std::to_string(i);
    auto cuts = s.cut_links();
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const Link& e = s.links[cuts[order[i]]];
      bool f = flip[i];
      key[e.sources[f ? 1 : 0]] = "k" + std::to_string(i) + "l";
      key[e.sources[f ? 0 : 1]] = "k" + std::to_string(i) + "r";
    }
    return key;
  };
  const std::size_t nc = a.count(LinkKind::cut);
  if (nc > 6) throw std::invalid_argument("isomorphism test limited to six cuts");
  std::vector<int> id(nc);
  std::iota(id.begin(), id.end(), 0);
  const std::string fa = fingerprint(a, la, keys(a, id, std::vector<bool>(nc, false)));
  std::vector<int> order = id;
  do {
    for (std::size_t m = 0; m < (std::size_t{1} << nc); ++m) {
      std::vector<bool> flip(nc);
      for (std::size_t i = 0; i < nc; ++i) flip[i] = (m >> i) & 1;
      if (fingerprint(b, lb, keys(b, order, flip)) == fa) return true;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

// --- DOT ----------------------------------------------------------------

std::string to_dot(const ProofStructure& s) {
  std::string out = "digraph structure {\n";
  for (std::size_t v = 0; v < s.labels.size(); ++v)
    out += "  v" + std::to_string(v) + " [label=\"" + s.labels[v].to_string() + "\"];\n";
  for (std::size_t i = 0; i < s.links.size(); ++i) {
    const Link& e = s.links[i];
    std::string n = "e" + std::to_string(i);
    out += "  " + n + " [shape=box,label=\"" + to_string(e.kind) + "\"];\n";
    for (std::size_t j = 0; j < e.sources.size(); ++j)
      out += "  v" + std::to_string(e.sources[j]) + " -> " + n + (j == 0 ? " [label=\"l\"]" : " [label=\"r\"]") + ";\n";
    for (int t : e.targets) out += "  " + n + " -> v" + std::to_string(t) + ";\n";
  }
  return out + "}\n";
}

std::string to_dot(const CorrectionGraph& g, const ProofStructure& s) {
  const std::size_t nv = s.labels.size();
  std::string out = "graph correction {\n";
  for (std::size_t i = 0; i < g.nodes; ++i) {
    if (i < nv) {
      out += "  n" + std::to_string(i) + " [label=\"" + s.labels[i].to_string() + "\"];\n";
    } else {
      out += "  n" + std::to_string(i) + " [shape=box,label=\"" + to_string(s.links.at(i - nv).kind) + "\"];\n";
    }
  }
  for (auto [a, b] : g.edges) out += "  n" + std::to_string(a) + " -- n" + std::to_string(b) + ";\n";
  return out + "}\n";
}

}  // namespace stellar::mll
