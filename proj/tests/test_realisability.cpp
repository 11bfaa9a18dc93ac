//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "oracles/random_constellation.hpp"
#include "oracles/unify_oracle.hpp"
#include "stellar/mll.hpp"
#include "stellar/realisability.hpp"
#include "stellar/text_format.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace stellar;

namespace {

Constellation cs(const char* src) { return parse_constellation(src); }
Ray ray(const char* src) { return parse_ray(src); }

std::string text(const Ray& r) { return canonical_string(Star{r}); }

std::set<std::string> texts(const std::vector<Ray>& rs) {
  std::set<std::string> out;
  for (const auto& r : rs) out.insert(text(r));
  return out;
}

// One-way matching written against the raw term structure.
bool match_into(const Term& p, const Term& t, std::map<Var, Term>& b) {
  if (p.is_variable()) {
    auto [it, fresh] = b.emplace(p.var(), t);
    return fresh || it->second == t;
  }
  if (t.is_variable() || p.symbol() != t.symbol() || p.arity() != t.arity()) return false;
  for (std::size_t i = 0; i < p.arity(); ++i)
    if (!match_into(p.args()[i], t.args()[i], b)) return false;
  return true;
}

bool leq_oracle(const Ray& a, const Ray& b) {
  std::map<Var, Term> m;
  return a.polarity == b.polarity && match_into(a.term, b.term, m);
}

std::set<std::string> prefix_oracle(const std::vector<Ray>& rs) {
  std::set<std::string> out;
  for (const auto& a : rs) {
    bool minimal = true;
    for (const auto& b : rs)
      if (leq_oracle(b, a) && !leq_oracle(a, b)) minimal = false;
    if (minimal) out.insert(text(a));
  }
  return out;
}

// Joint instances through unification of the underlying terms, renamed apart.
std::set<std::string> ucap_oracle(const std::vector<Ray>& r, const std::vector<Ray>& q) {
  std::vector<Ray> common;
  for (const auto& a : r)
    for (const auto& b : q) {
      if (a.polarity != b.polarity) continue;
      auto u = oracle::robinson({{rename_apart(a.term, 1), rename_apart(b.term, 2)}});
      if (u) common.push_back(Ray{a.polarity, oracle::subst(*u, rename_apart(a.term, 1))});
    }
  return prefix_oracle(common);
}

std::vector<Ray> random_rays(std::mt19937& rng, int n) {
  oracle::RandomShape shape;
  shape.max_rays = n;
  std::vector<Ray> out;
  for (const auto& r : oracle::random_star(rng, shape)) out.push_back(r);
  return out;
}

RealisabilityOptions opts(ColourSet colours, int fuel = 16) {
  RealisabilityOptions o;
  o.colours = std::move(colours);
  o.fuel = fuel;
  return o;
}

const char* kIdentity = R"(
ax a b X0
ax c d X1
tensor a c -> e
par b d -> f
conclusions e f
)";

const char* kOpenCut = R"(
ax a1n a1 ~X0
ax a2n a2 ~X0
ax a3n a3 ~X0
par a1n a1 -> c
tensor a2 a3n -> d
cut c d
conclusions a2n a3
)";

const char* kSelfTensor = R"(
ax a b X0
tensor a b -> c
)";

}  // namespace

TEST_CASE("ray order examples", "[realisability]") {
  CHECK(ray_leq(ray("+f(X)"), ray("+f(g(Y))")));
  CHECK_FALSE(ray_leq(ray("+f(g(Y))"), ray("+f(X)")));
  CHECK(ray_leq(ray("+f(X)"), ray("+f(X)")));
  CHECK_FALSE(ray_leq(ray("+f(X)"), ray("-f(X)")));
  CHECK_FALSE(ray_leq(ray("f(X, X)"), ray("f(a, b)")));
  CHECK(ray_leq(ray("f(X, Y)"), ray("f(a, a)")));
  CHECK(ray_equivalent(ray("+f(X, Y)"), ray("+f(Y, Z)")));
  CHECK_FALSE(ray_equivalent(ray("+f(X, X)"), ray("+f(X, Y)")));
}

TEST_CASE("ray order is a preorder, antisymmetric up to renaming", "[realisability]") {
  std::mt19937 rng(31);
  for (int k = 0; k < 300; ++k) {
    auto rs = random_rays(rng, 3);
    for (const auto& a : rs) {
      CHECK(ray_leq(a, a));
      for (const auto& b : rs) {
        CHECK(ray_leq(a, b) == leq_oracle(a, b));
        if (ray_leq(a, b) && ray_leq(b, a)) CHECK(text(a) == text(b));
        for (const auto& c : rs)
          if (ray_leq(a, b) && ray_leq(b, c)) CHECK(ray_leq(a, c));
      }
    }
  }
}

TEST_CASE("prefix reduction and locations", "[realisability]") {
  CHECK(texts(prefix_reduce({ray("+f(X)"), ray("+f(g(Y))")})) == std::set<std::string>{"[+f(X)]"});
  CHECK(texts(prefix_reduce({ray("+f(g(Y))")})) == std::set<std::string>{"[+f(g(X))]"});
  CHECK(prefix_reduce({ray("+f(X)"), ray("+g(X)")}).size() == 2);
  CHECK(prefix_reduce({ray("+f(X)"), ray("+f(Y)")}).size() == 1);
  CHECK(texts(location(parse_star("[+f(X), +f(g(Y))]"))) == std::set<std::string>{"[+f(X)]"});

  std::mt19937 rng(32);
  for (int k = 0; k < 200; ++k) {
    auto rs = random_rays(rng, 4);
    CHECK(texts(prefix_reduce(rs)) == prefix_oracle(rs));
    CHECK_FALSE(location(Star(rs)).empty());
  }
  for (int k = 0; k < 100; ++k) {
    auto a = oracle::random_constellation(rng), b = oracle::random_constellation(rng);
    Constellation both = a;
    for (const auto& s : b) both.add(s);
    auto la = location(a), lb = location(b);
    std::vector<Ray> joined(la.begin(), la.end());
    joined.insert(joined.end(), lb.begin(), lb.end());
    CHECK(same_location(location(both), prefix_reduce(joined)));
  }
}

TEST_CASE("intersection up to unification", "[realisability]") {
  CHECK(texts(ucap({ray("+f(X)")}, {ray("+f(g(Y))")})) == std::set<std::string>{"[+f(g(X))]"});
  CHECK(ucap({ray("+f(X)")}, {ray("+g(Y)")}).empty());
  CHECK(texts(ucap({ray("+f(X)")}, {ray("+f(X)")})) == std::set<std::string>{"[+f(X)]"});
  CHECK(ucap({ray("+a(X)")}, {ray("-a(c)")}).empty());
  CHECK(texts(ucap({ray("f(X, c)")}, {ray("f(d, Y)")})) == std::set<std::string>{"[f(d, c)]"});

  std::mt19937 rng(33);
  for (int k = 0; k < 300; ++k) {
    auto r = prefix_reduce(random_rays(rng, 3)), q = prefix_reduce(random_rays(rng, 3));
    CHECK(texts(ucap(r, q)) == ucap_oracle(r, q));
    CHECK(texts(ucap(r, q)) == texts(ucap(q, r)));
    CHECK(disjoint(r, q) == ucap_oracle(r, q).empty());
  }
}

TEST_CASE("orthogonality on proof structures", "[realisability]") {
  using namespace stellar::mll;
  auto id = parse_structure(kIdentity);
  auto veh = colourize("t", Polarity::positive, vehicle(id));
  for (const auto& sw : all_switchings(id)) {
    CHECK(orthogonal(veh, ordeal(id, sw), opts({"t", "c"}, 32)) == Verdict::yes);
    CHECK(orthogonal(ordeal(id, sw), veh, opts({"t", "c"}, 32)) == Verdict::yes);
  }

  auto self = parse_structure(kSelfTensor);
  auto sveh = colourize("t", Polarity::positive, vehicle(self));
  auto o = orthogonality(sveh, ordeal(self, {}), opts({"t", "c"}, 32));
  CHECK(o.verdict == Verdict::no);
  REQUIRE(o.certificate.has_value());
  CHECK_FALSE(o.certificate->diagram.edges.empty());

  CHECK(orthogonal(Constellation{}, sveh, opts({"t", "c"})) == Verdict::yes);
  CHECK(orthogonal(Constellation{}, Constellation{}, opts({"t", "c"})) == Verdict::yes);
}

TEST_CASE("orthogonality is symmetric", "[realisability]") {
  std::mt19937 rng(34);
  oracle::RandomShape shape;
  shape.max_stars = 3;
  for (int k = 0; k < 150; ++k) {
    auto a = oracle::random_constellation(rng, shape), b = oracle::random_constellation(rng, shape);
    CHECK(orthogonal(a, b, opts({"a", "b"}, 10)) == orthogonal(b, a, opts({"a", "b"}, 10)));
  }
}

TEST_CASE("test types", "[realisability]") {
  using namespace stellar::mll;
  auto id = parse_structure(kIdentity);
  std::vector<Formula> gamma;
  for (int v : id.conclusions) gamma.push_back(id.labels[v]);
  auto t = ordeal_type(gamma);
  CHECK(in_test_type(colourize("t", Polarity::positive, vehicle(id)), t) == Verdict::yes);

  auto self = parse_structure(kSelfTensor);
  auto ts = ordeal_type({self.labels[self.conclusions[0]]});
  auto report = type_check(colourize("t", Polarity::positive, vehicle(self)), ts, 32, "self");
  CHECK(report.verdict == Verdict::no);
  auto j = to_json(report);
  CHECK(j["candidate"] == "self");
  CHECK(j["verdict"] == "no");
  CHECK(j["fuel"] == 32);
  REQUIRE(j["tests"].size() == ts.tests.size());
  for (const auto& e : j["tests"]) {
    CHECK(e.contains("test"));
    CHECK(e.contains("verdict"));
    if (e["verdict"] == "no") CHECK(e.contains("certificate"));
  }

  TestType none;
  none.colours = {"t"};
  CHECK(in_test_type(cs("[+t(X), -t(X)]"), none) == Verdict::yes);
}

TEST_CASE("trefoil on instances", "[realisability]") {
  // Different colours: every execution is a union.
  auto r = trefoil_check(cs("[+a(X), c]"), cs("[+b(X), d]"), cs("[e(X), f]"), opts({"a", "b"}));
  CHECK(r.outcome == PropertyOutcome::agree);
  CHECK(r.lhs == Verdict::yes);
  CHECK(r.rhs == Verdict::yes);

  CHECK_THROWS_AS(trefoil_check(cs("[+a(X)]"), cs("[+a(c)]"), cs("[+a(Y)]"), opts({"a"})), std::invalid_argument);

  // Vehicle, cuts and ordeals of a structure with a cut.
  using namespace stellar::mll;
  auto open = parse_structure(kOpenCut);
  auto veh = colourize("t", Polarity::positive, vehicle(open));
  auto cut = colourize("c", Polarity::negative, cut_constellation(open));
  for (const auto& sw : all_switchings(open)) {
    auto ord = ordeal(open, sw);
    REQUIRE(jointly_disjoint(veh, cut, ord));
    auto v = trefoil_check(veh, cut, ord, opts({"t", "c"}, 32));
    CHECK(v.outcome == PropertyOutcome::agree);
    CHECK(v.lhs == Verdict::yes);
  }
}

TEST_CASE("location-disjoint triples that still interact", "[realisability]") {
  // Documented failures of both properties under the polarity-sensitive
  // order: the hypothesis holds, yet stars of different triples connect.
  auto s1 = cs("[-a(c)]"), s2 = cs("[+a(X), +b(X)]"), s3 = cs("[-b(d)]");
  REQUIRE(jointly_disjoint(s1, s2, s3));
  CHECK(disjoint(s1, s2));
  CHECK(disjoint(s2, s3));
  auto a = assoc_exec_check(s1, s2, s3, opts({"a", "b"}));
  CHECK(a.outcome == PropertyOutcome::disagree);
  CHECK(alpha_equivalent(a.left, cs("[-a(c)]; [+a(d)]")));
  CHECK(alpha_equivalent(a.right, cs("[+b(c)]; [-b(d)]")));

  auto t = trefoil_check(cs("[+b(X), +b(X)]"), cs("[p(X), -b(d)]"), cs("[-b(X), -b(X)]"), opts({"b"}));
  CHECK(t.outcome == PropertyOutcome::disagree);
  CHECK(t.lhs == Verdict::no);
  CHECK(t.rhs == Verdict::yes);
}

TEST_CASE("associativity of execution on instances", "[realisability]") {
  // With an empty third argument the right side is exec(exec(s1 s2)), which
  // idempotence turns into exec(s1 s2).
  std::mt19937 rng(35);
  oracle::RandomShape shape;
  shape.max_stars = 3;
  for (int k = 0; k < 40; ++k) {
    auto s1 = oracle::random_constellation(rng, shape), s2 = oracle::random_constellation(rng, shape);
    auto o = opts({"a", "b"}, 10);
    auto r = assoc_exec_check(s1, s2, Constellation{}, o);
    if (r.outcome == PropertyOutcome::inconclusive) continue;
    ExecOptions eo;
    eo.colours = o.colours;
    eo.fuel = o.fuel;
    eo.max_partials = o.max_partials;
    auto direct = execute(constellation_union(s1, s2), eo);
    if (direct.status == ExecStatus::complete) CHECK(alpha_equivalent(r.right, direct.output));
  }

  // The left side executes s2 alone first, which can use up a star s1
  // needed: the hypothesis is vacuous here and the sides differ.
  auto gap = assoc_exec_check(cs("[-a(c), u]"), cs("[+a(X)]; [-a(Y), w(Y)]"), Constellation{}, opts({"a"}));
  CHECK(gap.outcome == PropertyOutcome::disagree);
  CHECK(alpha_equivalent(gap.left, cs("[u, -a(c)]; [w(X)]")));
  CHECK(alpha_equivalent(gap.right, cs("[u]; [w(X)]")));

  auto r = assoc_exec_check(cs("[+a(X), c(X)]"), cs("[-a(f(Y))]; [+b(g)]"), cs("[-b(g), e]"), opts({"a", "b"}));
  CHECK(r.outcome == PropertyOutcome::agree);
}
