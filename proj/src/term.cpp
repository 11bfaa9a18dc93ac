//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/term.hpp"

#include <deque>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace stellar {

namespace {

struct SymbolStore {
  std::shared_mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string, int> ids;
};

SymbolStore& store() {
  static SymbolStore s;
  return s;
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

int Symbols::intern(std::string_view name) {
  auto& s = store();
  {
    std::shared_lock lock(s.mutex);
    auto it = s.ids.find(std::string(name));
    if (it != s.ids.end()) return it->second;
  }
  std::unique_lock lock(s.mutex);
  auto [it, inserted] = s.ids.emplace(std::string(name), static_cast<int>(s.names.size()));
  if (inserted) s.names.emplace_back(name);
  return it->second;
}

const std::string& Symbols::name(int id) {
  auto& s = store();
  std::shared_lock lock(s.mutex);
  return s.names.at(static_cast<std::size_t>(id));
}

std::string var_name(Var v) {
  std::string base = v.name >= 0 ? Symbols::name(v.name) : "_" + std::to_string(-v.name - 1);
  if (v.tag >= 0) base += "@" + std::to_string(v.tag);
  return base;
}

Term Term::variable(Var v) {
  auto n = std::make_shared<detail::TermNode>();
  n->is_var = true;
  n->v = v;
  n->hash = mix(mix(0x51ed27, static_cast<std::size_t>(v.name)), static_cast<std::size_t>(v.tag + 1));
  return Term(std::move(n));
}

Term Term::variable(std::string_view name, int tag) {
  return variable(Var{Symbols::intern(name), tag});
}

Term Term::apply(int symbol, std::vector<Term> args) {
  auto n = std::make_shared<detail::TermNode>();
  n->symbol = symbol;
  std::size_t h = mix(0x2545f491, static_cast<std::size_t>(symbol));
  for (const auto& a : args) h = mix(h, a.hash());
  n->hash = mix(h, args.size());
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::apply(std::string_view symbol, std::vector<Term> args) {
  return apply(Symbols::intern(symbol), std::move(args));
}

Term Term::constant(std::string_view symbol) { return apply(symbol, {}); }

bool Term::is_variable() const { return node_->is_var; }
Var Term::var() const { return node_->v; }
int Term::symbol() const { return node_->symbol; }
const std::string& Term::symbol_name() const { return Symbols::name(node_->symbol); }
const std::vector<Term>& Term::args() const { return node_->args; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }

bool Term::is_ground() const {
  if (is_variable()) return false;
  for (const auto& a : args())
    if (!a.is_ground()) return false;
  return true;
}

std::size_t Term::size() const {
  std::size_t n = 1;
  if (!is_variable())
    for (const auto& a : args()) n += a.size();
  return n;
}

std::size_t Term::depth() const {
  if (is_variable() || args().empty()) return 0;
  std::size_t d = 0;
  for (const auto& a : args()) d = std::max(d, a.depth());
  return d + 1;
}

bool Term::contains(Var v) const {
  if (is_variable()) return var() == v;
  for (const auto& a : args())
    if (a.contains(v)) return true;
  return false;
}

void Term::collect_vars(std::vector<Var>& out) const {
  if (is_variable()) {
    for (const auto& w : out)
      if (w == var()) return;
    out.push_back(var());
    return;
  }
  for (const auto& a : args()) a.collect_vars(out);
}

std::vector<Var> Term::vars() const {
  std::vector<Var> out;
  collect_vars(out);
  return out;
}

std::string Term::to_string() const {
  if (!valid()) return "<invalid>";
  if (is_variable()) return var_name(var());
  std::string s = symbol_name();
  if (!args().empty()) {
    s += '(';
    for (std::size_t i = 0; i < args().size(); ++i) {
      if (i) s += ", ";
      s += args()[i].to_string();
    }
    s += ')';
  }
  return s;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash()) return false;
  if (a.is_variable() != b.is_variable()) return false;
  if (a.is_variable()) return a.var() == b.var();
  if (a.symbol() != b.symbol() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.is_variable() != b.is_variable())
    return a.is_variable() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_variable()) return a.var() <=> b.var();
  if (a.symbol() != b.symbol()) {
    int c = a.symbol_name().compare(b.symbol_name());
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.arity() != b.arity()) return a.arity() <=> b.arity();
  for (std::size_t i = 0; i < a.arity(); ++i) {
    auto c = a.args()[i] <=> b.args()[i];
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// --- substitutions -------------------------------------------------------

const Term* Substitution::find(Var v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (map_.empty()) return t;
  if (t.is_variable()) {
    const Term* r = find(t.var());
    return r ? *r : t;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    if (args.back().node() != a.node()) changed = true;
  }
  return changed ? Term::apply(t.symbol(), std::move(args)) : t;
}

Substitution Substitution::compose(const Substitution& inner) const {
  Substitution out;
  for (const auto& [v, t] : inner.map_) {
    Term r = apply(t);
    if (!(r.is_variable() && r.var() == v)) out.map_.insert_or_assign(v, std::move(r));
  }
  for (const auto& [v, t] : map_)
    if (!inner.contains(v)) out.map_.insert_or_assign(v, t);
  return out;
}

bool Substitution::is_idempotent() const {
  for (const auto& [v, t] : map_)
    if (!(apply(t) == t)) return false;
  return true;
}

bool Substitution::is_renaming() const {
  for (const auto& [v, t] : map_)
    if (!t.is_variable()) return false;
  return true;
}

std::string Substitution::to_string() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [v, t] : map_) {
    if (!first) s += ", ";
    first = false;
    s += var_name(v) + " -> " + t.to_string();
  }
  return s + "}";
}

Term apply_substitution(const Substitution& s, const Term& t) { return s.apply(t); }

const char* to_string(UnifyError e) {
  return e == UnifyError::clash ? "clash" : "occurs-check";
}

// --- Martelli-Montanari --------------------------------------------------

SolveResult solve(const UnificationProblem& p) {
  std::vector<std::pair<Term, Term>> work;
  work.reserve(p.size());
  for (const auto& e : p) work.emplace_back(e.lhs, e.rhs);

  Substitution solved;
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    a = solved.apply(a);
    b = solved.apply(b);
    if (a == b) continue;
    if (!a.is_variable() && b.is_variable()) std::swap(a, b);
    if (a.is_variable()) {
      Var v = a.var();
      if (b.contains(v)) return SolveResult{std::nullopt, UnifyError::occurs_check};
      Substitution single{{v, b}};
      Substitution next;
      for (const auto& [w, t] : solved.bindings()) next.bind(w, single.apply(t));
      next.bind(v, b);
      solved = std::move(next);
      continue;
    }
    if (a.symbol() != b.symbol() || a.arity() != b.arity())
      return SolveResult{std::nullopt, UnifyError::clash};
    for (std::size_t i = 0; i < a.arity(); ++i) work.emplace_back(a.args()[i], b.args()[i]);
  }
  return SolveResult{std::move(solved), UnifyError::clash};
}

SolveResult unify(const Term& a, const Term& b) { return solve({Equation{a, b}}); }

Var rename_apart(Var v, int tag) {
  if (v.tag < 0) return Var{v.name, tag};
  return Var{Symbols::intern(var_name(v)), tag};
}

Term rename_apart(const Term& t, int tag) {
  if (t.is_variable()) return Term::variable(rename_apart(t.var(), tag));
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(rename_apart(a, tag));
  return Term::apply(t.symbol(), std::move(args));
}

bool matchable(const Term& t, const Term& u) {
  return unify(rename_apart(t, 0), rename_apart(u, 1)).ok();
}

namespace {
bool match_into(const Term& p, const Term& t, Substitution& s) {
  if (p.is_variable()) {
    if (const Term* b = s.find(p.var())) return *b == t;
    s.bind(p.var(), t);
    return true;
  }
  if (t.is_variable() || p.symbol() != t.symbol() || p.arity() != t.arity()) return false;
  for (std::size_t i = 0; i < p.arity(); ++i)
    if (!match_into(p.args()[i], t.args()[i], s)) return false;
  return true;
}
}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& target) {
  Substitution s;
  if (!match_into(pattern, target, s)) return std::nullopt;
  return s;
}

// --- signature -----------------------------------------------------------

void Signature::add_function(std::string_view name, std::size_t arity) {
  auto [it, inserted] = functions_.emplace(std::string(name), arity);
  if (!inserted && it->second != arity)
    throw Conflict("arity conflict for '" + std::string(name) + "': " +
                   std::to_string(it->second) + " vs " + std::to_string(arity));
}

void Signature::add_colour(std::string_view name, std::size_t arity) {
  add_function(name, arity);
  colours_.emplace(name);
}

void Signature::add_term(const Term& t) {
  if (t.is_variable()) return;
  add_function(t.symbol_name(), t.arity());
  for (const auto& a : t.args()) add_term(a);
}

std::optional<std::size_t> Signature::arity(std::string_view name) const {
  auto it = functions_.find(std::string(name));
  if (it == functions_.end()) return std::nullopt;
  return it->second;
}

}  // namespace stellar
