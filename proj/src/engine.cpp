//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace stellar {

// --- compiled stars and the binding store ----------------------------------

namespace detail {

struct CNode {
  bool var = false;
  int id = 0;  // local variable index or symbol
  std::vector<const CNode*> kids;
};

struct CRay {
  Polarity pol = Polarity::none;
  int colour = -1;
  const CNode* term = nullptr;
};

struct CStar {
  std::vector<CRay> rays;
  int nvars = 0;
};

struct Compiled {
  std::deque<CNode> arena;
  std::vector<CStar> stars;
  // partners[s][i]: ports (s', j) dual to (s, i)
  std::vector<std::vector<std::vector<std::pair<int, int>>>> partners;

  bool live(int s, int i) const { return !partners[s][i].empty(); }
};

const CNode* compile_term(Compiled& c, const Term& t, std::map<Var, int>& vars) {
  CNode n;
  if (t.is_variable()) {
    n.var = true;
    auto it = vars.find(t.var());
    if (it == vars.end()) it = vars.emplace(t.var(), static_cast<int>(vars.size())).first;
    n.id = it->second;
  } else {
    n.id = t.symbol();
    for (const auto& a : t.args()) n.kids.push_back(compile_term(c, a, vars));
  }
  c.arena.push_back(std::move(n));
  return &c.arena.back();
}

std::set<int> colour_ids(const ColourSet& colours) {
  std::set<int> out;
  for (const auto& c : colours) out.insert(Symbols::intern(c));
  return out;
}

std::unique_ptr<Compiled> compile(const Constellation& sigma, const ColourSet& colours) {
  auto c = std::make_unique<Compiled>();
  auto active = colour_ids(colours);
  for (const auto& s : sigma) {
    CStar cs;
    std::map<Var, int> vars;
    for (const auto& r : s) cs.rays.push_back(CRay{r.polarity, r.colour(), compile_term(*c, r.term, vars)});
    cs.nvars = static_cast<int>(vars.size());
    c->stars.push_back(std::move(cs));
  }
  std::size_t n = sigma.size();
  c->partners.resize(n);
  for (std::size_t s = 0; s < n; ++s) c->partners[s].resize(sigma[s].size());
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < sigma[s].size(); ++i) {
      const Ray& r = sigma[s][i];
      if (!r.polarised() || !active.count(r.colour())) continue;
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t j = 0; j < sigma[t].size(); ++j) {
          const Ray& q = sigma[t][j];
          if (q.polarity != opposite(r.polarity) || q.colour() != r.colour()) continue;
          if (!matchable(r.term, q.term)) continue;
          c->partners[s][i].emplace_back(static_cast<int>(t), static_cast<int>(j));
        }
    }
  return c;
}

struct Binding {
  const CNode* t = nullptr;
  int frame = -1;
};

struct Store {
  std::vector<Binding> b;
  std::vector<int> off;
  std::vector<int> trail;

  int add_frame(int nvars) {
    off.push_back(static_cast<int>(b.size()));
    b.resize(b.size() + static_cast<std::size_t>(nvars));
    return static_cast<int>(off.size()) - 1;
  }

  std::pair<const CNode*, int> deref(const CNode* n, int f) const {
    while (n->var) {
      const Binding& x = b[static_cast<std::size_t>(off[f] + n->id)];
      if (!x.t) break;
      n = x.t;
      f = x.frame;
    }
    return {n, f};
  }

  bool occurs(int slot, const CNode* n, int f) const {
    auto [m, g] = deref(n, f);
    if (m->var) return off[g] + m->id == slot;
    for (const auto* k : m->kids)
      if (occurs(slot, k, g)) return true;
    return false;
  }

  void bind(int slot, const CNode* t, int f) {
    b[static_cast<std::size_t>(slot)] = Binding{t, f};
    trail.push_back(slot);
  }

  bool unify(const CNode* a, int fa, const CNode* c, int fc) {
    std::vector<std::tuple<const CNode*, int, const CNode*, int>> work{{a, fa, c, fc}};
    while (!work.empty()) {
      auto [x, fx, y, fy] = work.back();
      work.pop_back();
      std::tie(x, fx) = deref(x, fx);
      std::tie(y, fy) = deref(y, fy);
      if (x->var && y->var) {
        int sx = off[fx] + x->id, sy = off[fy] + y->id;
        if (sx != sy) bind(sx, y, fy);
        continue;
      }
      if (y->var) {
        std::swap(x, y);
        std::swap(fx, fy);
      }
      if (x->var) {
        int sx = off[fx] + x->id;
        if (occurs(sx, y, fy)) return false;
        bind(sx, y, fy);
        continue;
      }
      if (x->id != y->id || x->kids.size() != y->kids.size()) return false;
      for (std::size_t i = 0; i < x->kids.size(); ++i) work.emplace_back(x->kids[i], fx, y->kids[i], fy);
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail.size() > mark) {
      b[static_cast<std::size_t>(trail.back())] = Binding{};
      trail.pop_back();
    }
  }

  Term resolve(const CNode* n, int f) const {
    auto [m, g] = deref(n, f);
    if (m->var) return Term::variable(Var{-(off[g] + m->id) - 1, -1});
    std::vector<Term> args;
    args.reserve(m->kids.size());
    for (const auto* k : m->kids) args.push_back(resolve(k, g));
    return Term::apply(m->id, std::move(args));
  }
};

struct Partial {
  Diagram d;
  std::vector<std::vector<std::pair<int, int>>> link;  // per vertex, per slot
  std::vector<int> parent;                             // -1 for the root
  std::vector<int> entry;                              // slot used to reach the parent
  Store store;
  bool ok = true;

  int add_vertex(const Compiled& c, int star, int par, int slot) {
    d.vertex_star.push_back(star);
    link.emplace_back(c.stars[static_cast<std::size_t>(star)].rays.size(), std::make_pair(-1, -1));
    parent.push_back(par);
    entry.push_back(slot);
    store.add_frame(c.stars[static_cast<std::size_t>(star)].nvars);
    return static_cast<int>(d.vertex_star.size()) - 1;
  }

  // `unified` says the caller already unified the two rays.
  void add_edge(const Compiled& c, int u, int su, int v, int sv, bool unified = false) {
    link[u][su] = {v, sv};
    link[v][sv] = {u, su};
    GraphEdge e{u, su, v, sv};
    if (std::tie(e.v, e.sv) < std::tie(e.u, e.su)) e = GraphEdge{v, sv, u, su};
    d.edges.push_back(e);
    if (!ok || unified) return;
    const auto& ru = c.stars[static_cast<std::size_t>(d.vertex_star[u])].rays[su];
    const auto& rv = c.stars[static_cast<std::size_t>(d.vertex_star[v])].rays[sv];
    ok = store.unify(ru.term, u, rv.term, v);
  }

  Term ray(const Compiled& c, int v, int slot) const {
    return store.resolve(c.stars[static_cast<std::size_t>(d.vertex_star[v])].rays[slot].term, v);
  }

  bool has_free_ray() const {
    for (const auto& l : link)
      for (const auto& p : l)
        if (p.first < 0) return true;
    return false;
  }
};

std::vector<int> code_of(const Partial& p) {
  std::size_t n = p.d.vertex_star.size();
  int min_star = *std::min_element(p.d.vertex_star.begin(), p.d.vertex_star.end());
  std::vector<int> best;
  std::vector<int> idx(n);
  std::vector<int> order;
  for (std::size_t r = 0; r < n; ++r) {
    if (p.d.vertex_star[r] != min_star) continue;
    std::fill(idx.begin(), idx.end(), -1);
    order.clear();
    order.push_back(static_cast<int>(r));
    idx[r] = 0;
    std::vector<int> code;
    code.reserve(n * 4);
    bool worse = false;
    for (std::size_t k = 0; k < order.size() && !worse; ++k) {
      int v = order[k];
      code.push_back(p.d.vertex_star[v]);
      for (const auto& [w, sw] : p.link[v]) {
        if (w < 0) {
          code.push_back(-1);
          continue;
        }
        if (idx[w] < 0) {
          idx[w] = static_cast<int>(order.size());
          order.push_back(w);
        }
        code.push_back(idx[w]);
        code.push_back(sw);
      }
      if (!best.empty()) {
        // stop once this prefix is already larger than the best code
        std::size_t m = std::min(code.size(), best.size());
        auto [x, y] = std::mismatch(code.begin(), code.begin() + static_cast<long>(m), best.begin());
        if (x != code.begin() + static_cast<long>(m) && *x > *y) worse = true;
      }
    }
    if (worse) continue;
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

struct CodeHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace detail

using detail::Compiled;
using detail::Partial;

// --- basic relations -------------------------------------------------------

bool dual(const Ray& a, const Ray& b, const ColourSet& colours) {
  if (!a.polarised() || !b.polarised()) return false;
  if (a.polarity != opposite(b.polarity)) return false;
  if (a.colour() != b.colour()) return false;
  if (!colours.count(a.term.symbol_name())) return false;
  return matchable(a.term, b.term);
}

UnificationGraph unification_graph(const Constellation& sigma, const ColourSet& colours) {
  UnificationGraph g;
  g.vertex_count = sigma.size();
  for (std::size_t u = 0; u < sigma.size(); ++u)
    for (std::size_t su = 0; su < sigma[u].size(); ++su)
      for (std::size_t v = u; v < sigma.size(); ++v)
        for (std::size_t sv = (v == u ? su + 1 : 0); sv < sigma[v].size(); ++sv)
          if (dual(sigma[u][su], sigma[v][sv], colours))
            g.edges.push_back(GraphEdge{static_cast<int>(u), static_cast<int>(su), static_cast<int>(v),
                                        static_cast<int>(sv)});
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

UnificationProblem underlying_problem(const Constellation& sigma, const Diagram& d) {
  UnificationProblem p;
  for (const auto& e : d.edges) {
    const Ray& a = sigma[static_cast<std::size_t>(d.vertex_star[e.u])][e.su];
    const Ray& b = sigma[static_cast<std::size_t>(d.vertex_star[e.v])][e.sv];
    p.push_back(Equation{rename_apart(a.term, e.u), rename_apart(b.term, e.v)});
  }
  return p;
}

bool is_diagram(const Constellation& sigma, const Diagram& d, const ColourSet& colours) {
  std::size_t n = d.vertex_star.size();
  if (n == 0) return false;
  std::vector<std::set<int>> used(n);
  std::vector<std::vector<int>> adj(n);
  for (int s : d.vertex_star)
    if (s < 0 || static_cast<std::size_t>(s) >= sigma.size()) return false;
  for (const auto& e : d.edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n || static_cast<std::size_t>(e.v) >= n) return false;
    const Star& a = sigma[static_cast<std::size_t>(d.vertex_star[e.u])];
    const Star& b = sigma[static_cast<std::size_t>(d.vertex_star[e.v])];
    if (e.su < 0 || e.sv < 0 || static_cast<std::size_t>(e.su) >= a.size() ||
        static_cast<std::size_t>(e.sv) >= b.size())
      return false;
    if (!used[e.u].insert(e.su).second) return false;
    if (!used[e.v].insert(e.sv).second) return false;
    if (!dual(a[e.su], b[e.sv], colours)) return false;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

std::vector<std::pair<int, int>> free_rays(const Constellation& sigma, const Diagram& d) {
  std::set<std::pair<int, int>> used;
  for (const auto& e : d.edges) {
    used.emplace(e.u, e.su);
    used.emplace(e.v, e.sv);
  }
  std::vector<std::pair<int, int>> out;
  for (std::size_t v = 0; v < d.vertex_star.size(); ++v)
    for (std::size_t i = 0; i < sigma[static_cast<std::size_t>(d.vertex_star[v])].size(); ++i)
      if (!used.count({static_cast<int>(v), static_cast<int>(i)}))
        out.emplace_back(static_cast<int>(v), static_cast<int>(i));
  return out;
}

bool is_correct(const Constellation& sigma, const Diagram& d) {
  if (free_rays(sigma, d).empty()) return false;
  return solve(underlying_problem(sigma, d)).ok();
}

Star actualise(const Constellation& sigma, const Diagram& d) {
  auto fr = free_rays(sigma, d);
  if (fr.empty()) throw std::invalid_argument("diagram has no free rays");
  auto r = solve(underlying_problem(sigma, d));
  if (!r.ok()) throw std::invalid_argument("underlying problem has no solution");
  std::vector<Ray> rays;
  for (const auto& [v, i] : fr) {
    const Ray& ray = sigma[static_cast<std::size_t>(d.vertex_star[v])][i];
    rays.push_back(Ray{ray.polarity, r.mgu->apply(rename_apart(ray.term, v))});
  }
  return rescope(Star(std::move(rays)), 0);
}

const char* to_string(ExecStatus s) {
  switch (s) {
    case ExecStatus::complete: return "complete";
    case ExecStatus::fuel_exhausted: return "fuel_exhausted";
    default: return "divergent";
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "unknown";
  }
}

const char* to_string(CRVerdict v) {
  switch (v) {
    case CRVerdict::holds: return "holds";
    case CRVerdict::fails: return "fails";
    default: return "indeterminate";
  }
}

// --- saturation search -----------------------------------------------------

namespace {

Star actualise_partial(const Compiled& c, const Partial& p) {
  std::vector<Ray> rays;
  for (std::size_t v = 0; v < p.link.size(); ++v)
    for (std::size_t i = 0; i < p.link[v].size(); ++i)
      if (p.link[v][i].first < 0) {
        auto pol = c.stars[static_cast<std::size_t>(p.d.vertex_star[v])].rays[i].pol;
        rays.push_back(Ray{pol, p.ray(c, static_cast<int>(v), static_cast<int>(i))});
      }
  return rescope(Star(std::move(rays)), 0);
}

// Ancestor/descendant pair entered through the same port of the same star
// with identical entry rays: the subtree above the ancestor can be grafted
// in place of the one above the descendant, forever.
std::optional<std::pair<int, int>> pumpable_pair(const Compiled& c, const Partial& p) {
  std::size_t n = p.d.vertex_star.size();
  for (std::size_t b = 1; b < n; ++b) {
    if (p.parent[b] < 0) continue;
    for (int a = p.parent[b]; a >= 0; a = p.parent[a]) {
      if (p.parent[a] < 0) break;  // the root has no entry port
      if (p.d.vertex_star[a] != p.d.vertex_star[b] || p.entry[a] != p.entry[b]) continue;
      if (p.ray(c, a, p.entry[a]) == p.ray(c, static_cast<int>(b), p.entry[b]))
        return std::make_pair(a, static_cast<int>(b));
    }
  }
  return std::nullopt;
}

// Ports from which a finite tree can hang, restricted to stars >= lo:
// least fixpoint of "some partner whose other live ports are all closable".
std::vector<std::vector<char>> closable_ports(const Compiled& c, int lo) {
  std::size_t n = c.stars.size();
  std::vector<std::vector<char>> cl(n);
  for (std::size_t s = 0; s < n; ++s) cl[s].assign(c.stars[s].rays.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = static_cast<std::size_t>(lo); s < n; ++s)
      for (std::size_t i = 0; i < c.stars[s].rays.size(); ++i) {
        if (cl[s][i] || !c.live(static_cast<int>(s), static_cast<int>(i))) continue;
        for (const auto& [t, j] : c.partners[s][i]) {
          if (t < lo) continue;
          bool all = true;
          for (std::size_t k = 0; k < c.stars[t].rays.size() && all; ++k)
            if (static_cast<int>(k) != j && c.live(t, static_cast<int>(k)) && !cl[t][k]) all = false;
          if (all) {
            cl[s][i] = 1;
            changed = true;
            break;
          }
        }
      }
  }
  return cl;
}

struct SearchState {
  const Compiled& c;
  const ExecOptions& opts;
  SaturationResult out;
  std::unordered_set<std::vector<int>, detail::CodeHash> seen;
  bool fuel_hit = false;
  bool budget_hit = false;
  bool stop = false;
};

void record_saturated(SearchState& st, const Partial& p) {
  bool correct = p.ok && p.has_free_ray();
  if (!correct && st.opts.prune) return;
  SaturatedDiagram sd;
  sd.diagram = p.d;
  sd.correct = correct;
  if (correct) sd.actualisation = actualise_partial(st.c, p);
  st.out.diagrams.push_back(std::move(sd));
  if (!correct || st.out.certificate) return;
  if (!p.d.is_tree()) {
    st.out.certificate = DivergenceCertificate{p.d, "correct saturated diagram with a cycle", -1, -1};
  } else if (auto pr = pumpable_pair(st.c, p)) {
    st.out.certificate =
        DivergenceCertificate{p.d, "pumpable subtree: repeated entry port with equal rays", pr->first, pr->second};
  }
  if (st.out.certificate && st.opts.stop_on_divergence) st.stop = true;
}

void search_from(SearchState& st, int s0) {
  const Compiled& c = st.c;
  const auto& opts = st.opts;
  std::size_t n = c.stars.size();
  std::vector<std::vector<char>> cl;
  std::vector<char> viable(n, 1);
  if (opts.tree_only) {
    cl = closable_ports(c, s0);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t i = 0; i < c.stars[s].rays.size(); ++i)
        if (c.live(static_cast<int>(s), static_cast<int>(i)) && !cl[s][i]) viable[s] = 0;
  } else {
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t i = 0; i < c.stars[s].rays.size(); ++i) {
        if (!c.live(static_cast<int>(s), static_cast<int>(i))) continue;
        bool any = false;
        for (const auto& pr : c.partners[s][i])
          if (pr.first >= s0) any = true;
        if (!any) viable[s] = 0;
      }
  }
  // In tree mode a fresh partner entered through slot j needs its other
  // live ports closable; the entry port itself is filled by the edge.
  auto usable = [&](int t, int j) {
    if (t < s0) return false;
    if (!opts.tree_only) return static_cast<bool>(viable[static_cast<std::size_t>(t)]);
    for (std::size_t k = 0; k < c.stars[static_cast<std::size_t>(t)].rays.size(); ++k)
      if (static_cast<int>(k) != j && c.live(t, static_cast<int>(k)) && !cl[static_cast<std::size_t>(t)][k])
        return false;
    return true;
  };
  if (!viable[static_cast<std::size_t>(s0)]) return;

  std::deque<Partial> frontier;
  {
    Partial root;
    root.add_vertex(c, s0, -1, -1);
    if (!st.seen.insert(detail::code_of(root)).second) return;
    frontier.push_back(std::move(root));
  }
  while (!frontier.empty() && !st.stop) {
    if (++st.out.partials_explored > opts.max_partials) {
      st.budget_hit = true;
      st.stop = true;
      break;
    }
    Partial p = std::move(frontier.front());
    frontier.pop_front();
    st.out.max_size_reached = std::max(st.out.max_size_reached, p.d.vertex_star.size());
    int v = -1, i = -1;
    for (std::size_t a = 0; a < p.link.size() && v < 0; ++a)
      for (std::size_t b = 0; b < p.link[a].size(); ++b)
        if (p.link[a][b].first < 0 && c.live(p.d.vertex_star[a], static_cast<int>(b))) {
          v = static_cast<int>(a);
          i = static_cast<int>(b);
          break;
        }
    if (v < 0) {
      record_saturated(st, p);
      continue;
    }
    int sv = p.d.vertex_star[v];
    for (const auto& [t, j] : c.partners[static_cast<std::size_t>(sv)][i]) {
      if (!usable(t, j)) continue;
      if (static_cast<int>(p.d.vertex_star.size()) >= opts.fuel) {
        st.fuel_hit = true;
      } else {
        Partial q = p;
        int w = q.add_vertex(c, t, v, j);
        q.add_edge(c, v, i, w, j);
        if ((q.ok || !opts.prune) && st.seen.insert(detail::code_of(q)).second) frontier.push_back(std::move(q));
      }
      if (opts.tree_only) continue;
      for (std::size_t w = 0; w < p.d.vertex_star.size(); ++w) {
        if (p.d.vertex_star[w] != t || p.link[w][j].first >= 0) continue;
        if (static_cast<int>(w) == v && j == i) continue;
        Partial q = p;
        q.add_edge(c, v, i, static_cast<int>(w), j);
        if ((q.ok || !opts.prune) && st.seen.insert(detail::code_of(q)).second) frontier.push_back(std::move(q));
      }
    }
  }
}

}  // namespace

SaturationResult saturated_diagrams(const Constellation& sigma, const ExecOptions& opts) {
  if (opts.fuel < 1) throw std::invalid_argument("fuel must be at least 1");
  auto c = detail::compile(sigma, opts.colours);
  SearchState st{*c, opts, {}, {}, false, false, false};
  for (std::size_t s0 = 0; s0 < sigma.size() && !st.stop; ++s0) search_from(st, static_cast<int>(s0));
  SaturationResult out = std::move(st.out);
  if (out.certificate)
    out.status = ExecStatus::divergent;
  else if (st.fuel_hit || st.budget_hit)
    out.status = ExecStatus::fuel_exhausted;
  // deterministic order: actualisation text, then diagram code
  std::vector<std::pair<std::pair<std::string, std::vector<int>>, std::size_t>> keys;
  for (std::size_t k = 0; k < out.diagrams.size(); ++k) {
    const auto& d = out.diagrams[k];
    keys.push_back({{d.actualisation ? canonical_string(*d.actualisation) : std::string("~"),
                     diagram_code(sigma, d.diagram)},
                    k});
  }
  std::sort(keys.begin(), keys.end());
  std::vector<SaturatedDiagram> sorted;
  for (const auto& kv : keys) sorted.push_back(std::move(out.diagrams[kv.second]));
  out.diagrams = std::move(sorted);
  return out;
}

ExecutionResult execute(const Constellation& sigma, const ExecOptions& opts) {
  auto sat = saturated_diagrams(sigma, opts);
  ExecutionResult r;
  r.status = sat.status;
  r.max_diagram_size = sat.max_size_reached;
  r.certificate = std::move(sat.certificate);
  for (auto& d : sat.diagrams) {
    if (!d.correct) continue;
    r.output.add(*d.actualisation);
    r.diagrams.push_back(std::move(d.diagram));
  }
  r.diagram_count = r.diagrams.size();
  return r;
}

ExecutionResult execute(const Constellation& sigma, const ColourSet& colours, int fuel, bool tree_only) {
  ExecOptions o;
  o.colours = colours;
  o.fuel = fuel;
  o.tree_only = tree_only;
  return execute(sigma, o);
}

Verdict is_strongly_normalising(const Constellation& sigma, const ColourSet& colours, int fuel, bool tree_only,
                                std::size_t max_partials) {
  ExecOptions o;
  o.colours = colours;
  o.fuel = fuel;
  o.tree_only = tree_only;
  o.max_partials = max_partials;
  auto r = execute(sigma, o);
  switch (r.status) {
    case ExecStatus::complete: return Verdict::yes;
    case ExecStatus::divergent: return Verdict::no;
    default: return Verdict::unknown;
  }
}

ChurchRosserReport church_rosser_check(const Constellation& sigma, const ColourSet& a, const ColourSet& b, int fuel,
                                       bool tree_only, std::size_t max_partials) {
  for (const auto& x : a)
    if (b.count(x)) throw std::invalid_argument("colour sets overlap on '" + x + "'");
  ExecOptions o;
  o.fuel = fuel;
  o.tree_only = tree_only;
  o.max_partials = max_partials;
  auto run = [&](const Constellation& s, const ColourSet& cs) {
    o.colours = cs;
    return execute(s, o);
  };
  ColourSet ab = a;
  ab.insert(b.begin(), b.end());
  ChurchRosserReport rep;
  auto ea = run(sigma, a);
  auto eb = run(sigma, b);
  rep.both = run(sigma, ab);
  rep.a_then_b = run(ea.output, b);
  rep.b_then_a = run(eb.output, a);
  bool complete = ea.status == ExecStatus::complete && eb.status == ExecStatus::complete &&
                  rep.both.status == ExecStatus::complete && rep.a_then_b.status == ExecStatus::complete &&
                  rep.b_then_a.status == ExecStatus::complete;
  if (!complete) {
    rep.verdict = CRVerdict::indeterminate;
    return rep;
  }
  bool eq = alpha_equivalent(rep.a_then_b.output, rep.both.output) &&
            alpha_equivalent(rep.b_then_a.output, rep.both.output);
  rep.verdict = eq ? CRVerdict::holds : CRVerdict::fails;
  return rep;
}

// --- generic enumeration ---------------------------------------------------

const Diagram& DiagramView::diagram() const { return p_->d; }
bool DiagramView::solvable() const { return p_->ok; }
bool DiagramView::slot_used(int vertex, int slot) const { return p_->link[vertex][slot].first >= 0; }
Term DiagramView::ray_term(int vertex, int slot) const { return p_->ray(*c_, vertex, slot); }

ExecStatus enumerate_diagrams(const Constellation& sigma, const EnumOptions& opts,
                              const std::function<bool(const DiagramView&)>& keep,
                              const std::function<void(const DiagramView&)>& visit) {
  if (opts.dense && opts.tree_only) throw std::invalid_argument("dense growth creates cycles");
  auto cp = detail::compile(sigma, opts.colours);
  const Compiled& c = *cp;
  std::unordered_set<std::vector<int>, detail::CodeHash> seen;
  std::deque<Partial> frontier;
  std::size_t explored = 0;

  auto offer = [&](Partial&& q) {
    if (opts.require_solvable && !q.ok) return;
    if (!seen.insert(detail::code_of(q)).second) return;
    DiagramView view(c, q);
    if (keep && !keep(view)) return;
    if (visit) visit(view);
    frontier.push_back(std::move(q));
  };

  // dense closure: connect the new vertex w to every free dual port that unifies
  auto densify = [&](Partial& q, int w) {
    int sw = q.d.vertex_star[w];
    for (std::size_t i = 0; i < q.link[w].size(); ++i) {
      if (q.link[w][i].first >= 0) continue;
      bool done = false;
      for (const auto& [t, j] : c.partners[static_cast<std::size_t>(sw)][i]) {
        for (std::size_t u = 0; u < q.d.vertex_star.size() && !done; ++u) {
          if (q.d.vertex_star[u] != t || q.link[u][j].first >= 0) continue;
          if (static_cast<int>(u) == w && j == static_cast<int>(i)) continue;
          auto mark = q.store.trail.size();
          auto& ru = c.stars[static_cast<std::size_t>(sw)].rays[i];
          auto& rv = c.stars[static_cast<std::size_t>(t)].rays[j];
          if (q.store.unify(ru.term, w, rv.term, static_cast<int>(u))) {
            q.add_edge(c, w, static_cast<int>(i), static_cast<int>(u), j, true);
            done = true;
          } else {
            q.store.undo_to(mark);
          }
        }
        if (done) break;
      }
    }
  };

  for (std::size_t s = 0; s < sigma.size(); ++s) {
    Partial root;
    root.add_vertex(c, static_cast<int>(s), -1, -1);
    offer(std::move(root));
  }
  while (!frontier.empty()) {
    if (++explored > opts.max_partials) return ExecStatus::fuel_exhausted;
    Partial p = std::move(frontier.front());
    frontier.pop_front();
    for (std::size_t v = 0; v < p.link.size(); ++v)
      for (std::size_t i = 0; i < p.link[v].size(); ++i) {
        if (p.link[v][i].first >= 0) continue;
        int sv = p.d.vertex_star[v];
        for (const auto& [t, j] : c.partners[static_cast<std::size_t>(sv)][i]) {
          if (static_cast<int>(p.d.vertex_star.size()) < opts.max_vertices) {
            Partial q = p;
            int w = q.add_vertex(c, t, static_cast<int>(v), j);
            q.add_edge(c, static_cast<int>(v), static_cast<int>(i), w, j);
            if (opts.dense && q.ok) densify(q, w);
            offer(std::move(q));
          }
          if (opts.tree_only || opts.dense) continue;
          for (std::size_t w = 0; w < p.d.vertex_star.size(); ++w) {
            if (p.d.vertex_star[w] != t || p.link[w][j].first >= 0) continue;
            if (w == v && j == static_cast<int>(i)) continue;
            Partial q = p;
            q.add_edge(c, static_cast<int>(v), static_cast<int>(i), static_cast<int>(w), j);
            offer(std::move(q));
          }
        }
      }
  }
  return ExecStatus::complete;
}

std::vector<int> diagram_code(const Constellation& sigma, const Diagram& d) {
  Partial p;
  p.d = d;
  for (int s : d.vertex_star)
    p.link.emplace_back(sigma[static_cast<std::size_t>(s)].size(), std::make_pair(-1, -1));
  for (const auto& e : d.edges) {
    p.link[e.u][e.su] = {e.v, e.sv};
    p.link[e.v][e.sv] = {e.u, e.su};
  }
  if (d.vertex_star.empty()) return {};
  return detail::code_of(p);
}

// --- incremental unifier ---------------------------------------------------

struct IncrementalUnifier::Impl {
  std::shared_ptr<const Compiled> c;
  detail::Store store;
  std::vector<int> star_of;
};

IncrementalUnifier::IncrementalUnifier(const Constellation& sigma) : impl_(std::make_unique<Impl>()) {
  impl_->c = detail::compile(sigma, {});
}
IncrementalUnifier::~IncrementalUnifier() = default;
IncrementalUnifier::IncrementalUnifier(const IncrementalUnifier& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
IncrementalUnifier& IncrementalUnifier::operator=(const IncrementalUnifier& o) {
  if (this != &o) impl_ = std::make_unique<Impl>(*o.impl_);
  return *this;
}

int IncrementalUnifier::add(int star) {
  impl_->star_of.push_back(star);
  return impl_->store.add_frame(impl_->c->stars.at(static_cast<std::size_t>(star)).nvars);
}

bool IncrementalUnifier::connect(int fa, int sa, int fb, int sb) {
  const auto& c = *impl_->c;
  auto mark = impl_->store.trail.size();
  const auto& ra = c.stars[static_cast<std::size_t>(impl_->star_of.at(static_cast<std::size_t>(fa)))].rays.at(sa);
  const auto& rb = c.stars[static_cast<std::size_t>(impl_->star_of.at(static_cast<std::size_t>(fb)))].rays.at(sb);
  if (impl_->store.unify(ra.term, fa, rb.term, fb)) return true;
  impl_->store.undo_to(mark);
  return false;
}

std::size_t IncrementalUnifier::frames() const { return impl_->star_of.size(); }

Term IncrementalUnifier::resolve(int frame, int slot) const {
  const auto& c = *impl_->c;
  const auto& r = c.stars[static_cast<std::size_t>(impl_->star_of.at(static_cast<std::size_t>(frame)))].rays.at(slot);
  return impl_->store.resolve(r.term, frame);
}

IncrementalUnifier::Mark IncrementalUnifier::mark() const {
  return Mark{impl_->store.trail.size(), impl_->star_of.size()};
}

void IncrementalUnifier::undo(const Mark& m) {
  impl_->store.undo_to(m.trail);
  while (impl_->star_of.size() > m.frames) {
    impl_->star_of.pop_back();
    impl_->store.b.resize(static_cast<std::size_t>(impl_->store.off.back()));
    impl_->store.off.pop_back();
  }
}

// --- export ----------------------------------------------------------------

namespace {
std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}
}  // namespace

std::string to_dot(const UnificationGraph& g, const Constellation& sigma) {
  std::string out = "graph unification {\n";
  for (std::size_t v = 0; v < g.vertex_count; ++v)
    out += "  s" + std::to_string(v) + " [label=\"" + dot_escape(canonical_string(sigma[v])) + "\"];\n";
  for (const auto& e : g.edges)
    out += "  s" + std::to_string(e.u) + " -- s" + std::to_string(e.v) + " [label=\"" + std::to_string(e.su) +
           ":" + std::to_string(e.sv) + "\"];\n";
  return out + "}\n";
}

std::string to_dot(const Diagram& d, const Constellation& sigma) {
  std::string out = "graph diagram {\n";
  for (std::size_t v = 0; v < d.vertex_star.size(); ++v)
    out += "  v" + std::to_string(v) + " [label=\"" + std::to_string(d.vertex_star[v]) + ": " +
           dot_escape(canonical_string(sigma[static_cast<std::size_t>(d.vertex_star[v])])) + "\"];\n";
  for (const auto& e : d.edges)
    out += "  v" + std::to_string(e.u) + " -- v" + std::to_string(e.v) + " [label=\"" + std::to_string(e.su) +
           ":" + std::to_string(e.sv) + "\"];\n";
  return out + "}\n";
}

nlohmann::json to_json(const Diagram& d) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : d.edges) edges.push_back({e.u, e.su, e.v, e.sv});
  return {{"vertices", d.vertex_star}, {"edges", edges}};
}

nlohmann::json to_json(const ExecutionResult& r) {
  nlohmann::json stars = nlohmann::json::array();
  for (std::size_t k = 0; k < r.output.size(); ++k)
    stars.push_back({{"star", canonical_string(r.output[k])}, {"diagram", to_json(r.diagrams[k])}});
  nlohmann::json j{{"status", to_string(r.status)},
                   {"diagram_count", r.diagram_count},
                   {"max_diagram_size", r.max_diagram_size},
                   {"output", stars}};
  if (r.certificate)
    j["certificate"] = {{"reason", r.certificate->reason},
                        {"diagram", to_json(r.certificate->diagram)},
                        {"pumped_from", r.certificate->pumped_from},
                        {"pumped_to", r.certificate->pumped_to}};
  return j;
}

}  // namespace stellar
