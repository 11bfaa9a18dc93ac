//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/realisability.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace stellar {

bool ray_leq(const Ray& r1, const Ray& r2) {
  return r1.polarity == r2.polarity && match(r1.term, r2.term).has_value();
}

bool ray_equivalent(const Ray& r1, const Ray& r2) { return ray_leq(r1, r2) && ray_leq(r2, r1); }

namespace {

std::string key(const Ray& r) { return canonical_string(Star{r}); }

Location sorted_unique(const std::vector<Ray>& rays) {
  std::map<std::string, Ray> by_key;
  for (const auto& r : rays) by_key.emplace(key(r), r);
  Location out;
  for (auto& [k, r] : by_key) out.push_back(rescope(Star{r}, -1)[0]);
  return out;
}

}  // namespace

Location prefix_reduce(const std::vector<Ray>& rays) {
  Location xs = sorted_unique(rays);
  Location out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < xs.size() && minimal; ++j)
      if (i != j && ray_leq(xs[j], xs[i])) minimal = false;  // j ≢ i after dedupe
    if (minimal) out.push_back(xs[i]);
  }
  return out;
}

Location location(const Star& s) { return prefix_reduce(s.rays()); }

Location location(const Constellation& sigma) {
  std::vector<Ray> all;
  for (const auto& s : sigma) {
    auto l = location(s);
    all.insert(all.end(), l.begin(), l.end());
  }
  return prefix_reduce(all);
}

bool same_location(const Location& a, const Location& b) {
  auto covered = [](const Location& xs, const Location& ys) {
    return std::all_of(xs.begin(), xs.end(), [&](const Ray& x) {
      return std::any_of(ys.begin(), ys.end(), [&](const Ray& y) { return ray_equivalent(x, y); });
    });
  };
  return covered(a, b) && covered(b, a);
}

Location ucap(const Location& r, const Location& q) {
  std::vector<Ray> common;
  for (const auto& a : r)
    for (const auto& b : q) {
      if (a.polarity != b.polarity) continue;
      Term ta = rename_apart(a.term, 1);
      auto u = unify(ta, rename_apart(b.term, 2));
      if (u) common.push_back(Ray{a.polarity, u.mgu->apply(ta)});
    }
  return prefix_reduce(common);
}

bool disjoint(const Location& a, const Location& b) { return ucap(a, b).empty(); }

bool disjoint(const Constellation& a, const Constellation& b) { return disjoint(location(a), location(b)); }

bool jointly_disjoint(const Constellation& s1, const Constellation& s2, const Constellation& s3) {
  return ucap(ucap(location(s1), location(s2)), location(s3)).empty();
}

// --- orthogonality ----------------------------------------------------------------

namespace {

ExecOptions exec_options(const RealisabilityOptions& o) {
  ExecOptions e;
  e.colours = o.colours;
  e.fuel = o.fuel;
  e.tree_only = o.tree_only;
  e.max_partials = o.max_partials;
  return e;
}

Verdict verdict_of(ExecStatus s) {
  switch (s) {
    case ExecStatus::complete: return Verdict::yes;
    case ExecStatus::divergent: return Verdict::no;
    case ExecStatus::fuel_exhausted: break;
  }
  return Verdict::unknown;
}

Verdict both(Verdict a, Verdict b) {
  if (a == Verdict::no || b == Verdict::no) return Verdict::no;
  if (a == Verdict::unknown || b == Verdict::unknown) return Verdict::unknown;
  return Verdict::yes;
}

}  // namespace

Orthogonality orthogonality(const Constellation& s1, const Constellation& s2, const RealisabilityOptions& opts) {
  ExecutionResult r = execute(constellation_union(s1, s2), exec_options(opts));
  Orthogonality o;
  o.status = r.status;
  o.verdict = verdict_of(r.status);
  o.max_diagram_size = r.max_diagram_size;
  o.certificate = r.certificate;
  return o;
}

Verdict orthogonal(const Constellation& s1, const Constellation& s2, const RealisabilityOptions& opts) {
  return orthogonality(s1, s2, opts).verdict;
}

TypeCheckReport type_check(const Constellation& candidate, const TestType& t, int fuel, std::string candidate_id,
                           bool stop_at_no) {
  TypeCheckReport rep;
  rep.candidate_id = std::move(candidate_id);
  rep.fuel = fuel;
  RealisabilityOptions o;
  o.colours = t.colours;
  o.fuel = fuel;
  for (std::size_t i = 0; i < t.tests.size(); ++i) {
    TypeCheckEntry e;
    e.test_id = i < t.ids.size() ? t.ids[i] : "test" + std::to_string(i);
    e.result = orthogonality(candidate, t.tests[i], o);
    rep.verdict = both(rep.verdict, e.result.verdict);
    rep.entries.push_back(std::move(e));
    if (stop_at_no && rep.verdict == Verdict::no) break;
  }
  return rep;
}

Verdict in_test_type(const Constellation& candidate, const TestType& t, int fuel) {
  return type_check(candidate, t, fuel, "candidate", true).verdict;
}

nlohmann::json to_json(const TypeCheckReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json j{{"candidate", r.candidate_id},
                     {"test", e.test_id},
                     {"verdict", to_string(e.result.verdict)},
                     {"status", to_string(e.result.status)},
                     {"fuel", r.fuel},
                     {"max_diagram_size", e.result.max_diagram_size}};
    if (e.result.certificate) {
      j["certificate"] = {{"reason", e.result.certificate->reason},
                          {"diagram", to_json(e.result.certificate->diagram)}};
    }
    entries.push_back(std::move(j));
  }
  return {{"candidate", r.candidate_id}, {"verdict", to_string(r.verdict)}, {"fuel", r.fuel}, {"tests", entries}};
}

// --- trefoil and associativity ----------------------------------------------------------------

const char* to_string(PropertyOutcome o) {
  switch (o) {
    case PropertyOutcome::agree: return "agree";
    case PropertyOutcome::disagree: return "disagree";
    case PropertyOutcome::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Σa ⊥ Σb and exec(Σa · Σb) ⊥ Σc, or Σb ⊥ Σc and Σa ⊥ exec(Σb · Σc),
// depending on which side is paired first.
Verdict side(const Constellation& first, const Constellation& second, const Constellation& other, bool other_left,
             const RealisabilityOptions& opts) {
  ExecutionResult inner = execute(constellation_union(first, second), exec_options(opts));
  Verdict v = verdict_of(inner.status);
  if (v != Verdict::yes) return v;
  Verdict outer = other_left ? orthogonal(other, inner.output, opts) : orthogonal(inner.output, other, opts);
  return both(v, outer);
}

PropertyOutcome compare(Verdict a, Verdict b) {
  if (a == Verdict::unknown || b == Verdict::unknown) return PropertyOutcome::inconclusive;
  return a == b ? PropertyOutcome::agree : PropertyOutcome::disagree;
}

void require_hypothesis(const Constellation& s1, const Constellation& s2, const Constellation& s3) {
  if (!jointly_disjoint(s1, s2, s3)) throw std::invalid_argument("locations of the three constellations intersect");
}

}  // namespace

TrefoilReport trefoil_check(const Constellation& s1, const Constellation& s2, const Constellation& s3,
                            const RealisabilityOptions& opts) {
  require_hypothesis(s1, s2, s3);
  TrefoilReport r;
  r.lhs = side(s2, s3, s1, true, opts);
  r.rhs = side(s1, s2, s3, false, opts);
  r.outcome = compare(r.lhs, r.rhs);
  return r;
}

AssocReport assoc_exec_check(const Constellation& s1, const Constellation& s2, const Constellation& s3,
                             const RealisabilityOptions& opts) {
  require_hypothesis(s1, s2, s3);
  AssocReport r;
  ExecOptions o = exec_options(opts);
  ExecutionResult e23 = execute(constellation_union(s2, s3), o);
  ExecutionResult e12 = execute(constellation_union(s1, s2), o);
  if (e23.status != ExecStatus::complete || e12.status != ExecStatus::complete) return r;
  ExecutionResult left = execute(constellation_union(s1, e23.output), o);
  ExecutionResult right = execute(constellation_union(e12.output, s3), o);
  if (left.status != ExecStatus::complete || right.status != ExecStatus::complete) return r;
  r.left = left.output;
  r.right = right.output;
  r.outcome = alpha_equivalent(r.left, r.right) ? PropertyOutcome::agree : PropertyOutcome::disagree;
  return r;
}

}  // namespace stellar
