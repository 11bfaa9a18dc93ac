//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/constellation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace stellar {

char polarity_char(Polarity p) {
  switch (p) {
    case Polarity::positive: return '+';
    case Polarity::negative: return '-';
    default: return 0;
  }
}

Polarity opposite(Polarity p) {
  switch (p) {
    case Polarity::positive: return Polarity::negative;
    case Polarity::negative: return Polarity::positive;
    default: return Polarity::none;
  }
}

Ray Ray::pos(std::string_view colour, std::vector<Term> args) {
  return Ray{Polarity::positive, Term::apply(colour, std::move(args))};
}

Ray Ray::neg(std::string_view colour, std::vector<Term> args) {
  return Ray{Polarity::negative, Term::apply(colour, std::move(args))};
}

std::string Ray::to_string() const {
  if (!polarised()) return term.to_string();
  return std::string(1, polarity_char(polarity)) + term.to_string();
}

Star::Star(std::initializer_list<Ray> rays) : rays_(rays) {
  if (rays_.empty()) throw std::invalid_argument("a star has at least one ray");
}

Star::Star(std::vector<Ray> rays) : rays_(std::move(rays)) {
  if (rays_.empty()) throw std::invalid_argument("a star has at least one ray");
}

std::vector<Var> Star::vars() const {
  std::vector<Var> out;
  for (const auto& r : rays_) r.term.collect_vars(out);
  return out;
}

Star Star::map_terms(const std::function<Term(const Term&)>& f) const {
  std::vector<Ray> out;
  out.reserve(rays_.size());
  for (const auto& r : rays_) out.push_back(Ray{r.polarity, f(r.term)});
  return Star(std::move(out));
}

std::string Star::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    if (i) s += ", ";
    s += rays_[i].to_string();
  }
  return s + "]";
}

std::string canonical_var_name(std::size_t index) {
  static const char* base[] = {"X", "Y", "Z"};
  std::string s = base[index % 3];
  if (index >= 3) s += std::to_string(index / 3);
  return s;
}

Star rescope(const Star& s, int tag) {
  auto vars = s.vars();
  Substitution ren;
  for (std::size_t i = 0; i < vars.size(); ++i)
    ren.bind(vars[i], Term::variable(canonical_var_name(i), tag));
  return s.map_terms([&](const Term& t) { return ren.apply(t); });
}

Constellation::Constellation(std::initializer_list<Star> stars) {
  for (const auto& s : stars) add(s);
}

Constellation::Constellation(std::vector<Star> stars) {
  for (const auto& s : stars) add(s);
}

void Constellation::add(const Star& s) {
  stars_.push_back(rescope(s, static_cast<int>(stars_.size())));
}

bool Constellation::variables_disjoint() const {
  std::set<Var> seen;
  for (const auto& s : stars_) {
    for (const auto& v : s.vars())
      if (!seen.insert(v).second) return false;
  }
  return true;
}

std::set<std::string> Constellation::colours() const {
  std::set<std::string> out;
  for (const auto& s : stars_)
    for (const auto& r : s)
      if (r.polarised()) out.insert(r.term.symbol_name());
  return out;
}

Signature Constellation::signature() const {
  Signature sig;
  for (const auto& s : stars_)
    for (const auto& r : s) {
      if (r.polarised()) sig.add_colour(r.term.symbol_name(), r.term.arity());
      sig.add_term(r.term);
    }
  return sig;
}

std::string Constellation::to_string() const {
  std::vector<std::string> lines;
  lines.reserve(stars_.size());
  for (const auto& s : stars_) lines.push_back(canonical_string(s));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

Constellation constellation_union(const Constellation& a, const Constellation& b) {
  Constellation out = a;
  for (const auto& s : b) out.add(s);
  return out;
}

Star colourize(std::string_view colour, Polarity pol, const Star& s) {
  if (pol == Polarity::none) throw std::invalid_argument("colourize needs a polarity");
  std::vector<Ray> rays;
  rays.reserve(s.size());
  for (const auto& r : s) {
    // +d.t and -d.t: d is unary and t its argument; otherwise the whole term
    const Term& inner = (r.polarised() && r.term.arity() == 1) ? r.term.args()[0] : r.term;
    rays.push_back(Ray{pol, Term::apply(colour, {inner})});
  }
  return Star(std::move(rays));
}

Constellation colourize(std::string_view colour, Polarity pol, const Constellation& sigma) {
  Constellation out;
  for (const auto& s : sigma) out.add(colourize(colour, pol, s));
  return out;
}

Constellation decolourize(std::string_view colour, const Constellation& sigma) {
  int c = Symbols::intern(colour);
  Constellation out;
  for (const auto& s : sigma) {
    std::vector<Ray> rays;
    for (const auto& r : s) {
      if (r.polarised() && r.term.symbol() == c && r.term.arity() == 1)
        rays.push_back(Ray::plain(r.term.args()[0]));
      else
        rays.push_back(r);
    }
    out.add(Star(std::move(rays)));
  }
  return out;
}

// --- alpha-equivalence ---------------------------------------------------

namespace {

bool match_renaming(const Term& a, const Term& b, std::map<Var, Var>& fwd, std::map<Var, Var>& bwd) {
  if (a.is_variable() != b.is_variable()) return false;
  if (a.is_variable()) {
    auto f = fwd.find(a.var());
    auto g = bwd.find(b.var());
    if (f == fwd.end() && g == bwd.end()) {
      fwd.emplace(a.var(), b.var());
      bwd.emplace(b.var(), a.var());
      return true;
    }
    return f != fwd.end() && g != bwd.end() && f->second == b.var() && g->second == a.var();
  }
  if (a.symbol() != b.symbol() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!match_renaming(a.args()[i], b.args()[i], fwd, bwd)) return false;
  return true;
}

bool alpha_search(const Star& a, const Star& b, std::size_t i, std::vector<bool>& used,
                  const std::map<Var, Var>& fwd, const std::map<Var, Var>& bwd) {
  if (i == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j] || a[i].polarity != b[j].polarity) continue;
    auto f = fwd;
    auto g = bwd;
    if (!match_renaming(a[i].term, b[j].term, f, g)) continue;
    used[j] = true;
    if (alpha_search(a, b, i + 1, used, f, g)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool alpha_equivalent(const Star& a, const Star& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  return alpha_search(a, b, 0, used, {}, {});
}

bool alpha_equivalent(const Constellation& a, const Constellation& b) {
  if (a.size() != b.size()) return false;
  return a.to_string() == b.to_string();
}

// --- canonical rendering -------------------------------------------------

namespace {

int polarity_rank(Polarity p) {
  switch (p) {
    case Polarity::none: return 0;
    case Polarity::positive: return 1;
    default: return 2;
  }
}

// Shape comparison ignores variable identity.
int compare_shape(const Term& a, const Term& b) {
  if (a.is_variable() || b.is_variable()) {
    if (a.is_variable() && b.is_variable()) return 0;
    return a.is_variable() ? -1 : 1;
  }
  if (a.symbol() != b.symbol()) return a.symbol_name() < b.symbol_name() ? -1 : 1;
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (int c = compare_shape(a.args()[i], b.args()[i])) return c;
  return 0;
}

int compare_ray_shape(const Ray& a, const Ray& b) {
  int pa = polarity_rank(a.polarity), pb = polarity_rank(b.polarity);
  if (pa != pb) return pa < pb ? -1 : 1;
  return compare_shape(a.term, b.term);
}

void var_occurrences(const Term& t, std::vector<Var>& out) {
  if (t.is_variable()) {
    out.push_back(t.var());
    return;
  }
  for (const auto& a : t.args()) var_occurrences(a, out);
}

struct Canon {
  const Star& star;
  std::vector<std::vector<std::size_t>> groups;  // indices in shape order
  std::vector<std::vector<Var>> occ;             // variable occurrences per ray
  std::vector<int> best;
  std::vector<std::size_t> best_order;
  bool have_best = false;

  // numbering: current map var -> index
  void run(std::size_t g, std::vector<bool>& used, std::map<Var, int>& num, std::vector<int>& seq,
           std::vector<std::size_t>& order) {
    if (have_best) {
      // prune: compare prefix
      std::size_t n = std::min(seq.size(), best.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (seq[i] < best[i]) break;
        if (seq[i] > best[i]) return;
      }
    }
    // find next group with unused element
    while (g < groups.size()) {
      bool any = false;
      for (auto i : groups[g])
        if (!used[i]) any = true;
      if (any) break;
      ++g;
    }
    if (g == groups.size()) {
      if (!have_best || seq < best) {
        best = seq;
        best_order = order;
        have_best = true;
      }
      return;
    }
    // candidate sequences for each unused ray in the group
    std::vector<std::pair<std::vector<int>, std::size_t>> cands;
    for (auto i : groups[g]) {
      if (used[i]) continue;
      std::vector<int> s;
      std::map<Var, int> local;
      int next = static_cast<int>(num.size());
      for (const auto& v : occ[i]) {
        auto it = num.find(v);
        if (it != num.end()) {
          s.push_back(it->second);
          continue;
        }
        auto jt = local.find(v);
        if (jt == local.end()) jt = local.emplace(v, next++).first;
        s.push_back(jt->second);
      }
      cands.emplace_back(std::move(s), i);
    }
    auto least = std::min_element(cands.begin(), cands.end(),
                                  [](const auto& x, const auto& y) { return x.first < y.first; })->first;
    for (auto& [s, i] : cands) {
      if (s != least) continue;
      auto saved_num = num;
      int next = static_cast<int>(num.size());
      for (const auto& v : occ[i])
        if (!num.count(v)) num.emplace(v, next++);
      used[i] = true;
      std::size_t mark = seq.size();
      seq.insert(seq.end(), s.begin(), s.end());
      order.push_back(i);
      run(g, used, num, seq, order);
      order.pop_back();
      seq.resize(mark);
      used[i] = false;
      num = std::move(saved_num);
    }
  }
};

}  // namespace

std::string canonical_string(const Star& s) {
  std::vector<std::size_t> idx(s.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return compare_ray_shape(s[a], s[b]) < 0; });
  Canon c{s, {}, {}, {}, {}, false};
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k == 0 || compare_ray_shape(s[idx[k - 1]], s[idx[k]]) != 0) c.groups.emplace_back();
    c.groups.back().push_back(idx[k]);
  }
  c.occ.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) var_occurrences(s[i].term, c.occ[i]);
  std::vector<bool> used(s.size(), false);
  std::map<Var, int> num;
  std::vector<int> seq;
  std::vector<std::size_t> order;
  c.run(0, used, num, seq, order);

  // render in chosen order with final numbering
  std::map<Var, int> names;
  Substitution ren;
  for (auto i : c.best_order)
    for (const auto& v : c.occ[i])
      if (!names.count(v)) {
        int n = static_cast<int>(names.size());
        names.emplace(v, n);
        ren.bind(v, Term::variable(canonical_var_name(static_cast<std::size_t>(n))));
      }
  std::string out = "[";
  for (std::size_t k = 0; k < c.best_order.size(); ++k) {
    if (k) out += ", ";
    const Ray& r = s[c.best_order[k]];
    out += Ray{r.polarity, ren.apply(r.term)}.to_string();
  }
  return out + "]";
}

// --- families ------------------------------------------------------------

Term numeral_over(std::uint64_t n, const Term& base, std::string_view succ) {
  Term t = base;
  int s = Symbols::intern(succ);
  for (std::uint64_t i = 0; i < n; ++i) t = Term::apply(s, {t});
  return t;
}

Term numeral(std::uint64_t n, std::string_view succ, std::string_view zero) {
  return numeral_over(n, Term::constant(zero), succ);
}

Constellation instantiate_family(const StarSchema& schema, std::uint64_t bound) {
  Constellation out;
  for (std::uint64_t i = 0; i < bound; ++i) out.add(schema.instance(i));
  return out;
}

StarSchema nat_schema() {
  return StarSchema{"nat", [](std::uint64_t n) {
                      return Star{Ray::neg("nat", {numeral(n)}), Ray::pos("nat", {numeral(n + 1)})};
                    }};
}

}  // namespace stellar
