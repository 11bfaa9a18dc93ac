//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "oracles/random_constellation.hpp"
#include "stellar/engine.hpp"
#include "stellar/text_format.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace stellar;

namespace {
Constellation C(std::string_view s) { return parse_constellation(s); }
Ray R(std::string_view s) { return parse_ray(s); }

const char* kSigmaEx = "[g(X), f(X), +a(f(X))]; [-a(Y), +b(Y)]; [X, -b(g(X))]; [+b(X), X]";
const char* kSigmaA = "[-a(X), +a(X), -b(X)]";

ExecOptions opts(ColourSet cs, int fuel = 64, bool tree = false) {
  ExecOptions o;
  o.colours = std::move(cs);
  o.fuel = fuel;
  o.tree_only = tree;
  return o;
}

// Saturated: no free ray with a dual partner anywhere in the constellation.
bool saturated_by_graph(const Constellation& s, const Diagram& d, const ColourSet& cs) {
  for (const auto& [v, i] : free_rays(s, d))
    for (const auto& star : s)
      for (const auto& r : star)
        if (dual(s[static_cast<std::size_t>(d.vertex_star[v])][i], r, cs)) return false;
  return true;
}
}  // namespace

TEST_CASE("dual", "[engine]") {
  CHECK(dual(R("+c(X)"), R("-c(f(Y))"), {"c"}));
  CHECK_FALSE(dual(R("+c(f(X))"), R("-c(g(Y))"), {"c"}));
  CHECK_FALSE(dual(R("+c(X)"), R("+c(Y)"), {"c"}));
  CHECK_FALSE(dual(R("+a(X)"), R("-a(X)"), {"b"}));
  CHECK_FALSE(dual(R("c(X)"), R("-c(X)"), {"c"}));
}

TEST_CASE("unification_graph", "[engine]") {
  SECTION("nat family is linear") {
    for (std::uint64_t k = 1; k <= 6; ++k) {
      auto g = unification_graph(instantiate_family(nat_schema(), k), {"nat"});
      CHECK(g.vertex_count == k);
      REQUIRE(g.edges.size() == k - 1);
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        CHECK(g.edges[e].u == static_cast<int>(e));
        CHECK(g.edges[e].v == static_cast<int>(e + 1));
      }
    }
  }
  SECTION("loop") {
    auto g = unification_graph(C(kSigmaA), {"a", "b"});
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0] == GraphEdge{0, 0, 0, 1});
  }
  SECTION("empty") { CHECK(unification_graph(Constellation{}, {"a"}).edges.empty()); }
  SECTION("example under its own colours: path on three stars plus an isolated one") {
    auto g = unification_graph(C(kSigmaEx), {"a", "b"});
    CHECK(g.edges == std::vector<GraphEdge>{{0, 2, 1, 0}, {1, 1, 2, 1}, {2, 1, 3, 0}});
  }
  SECTION("deterministic ordering") {
    auto g = unification_graph(C("[+a(X), +a(Y)]; [-a(c)]; [-a(Z)]"), {"a"});
    CHECK(std::is_sorted(g.edges.begin(), g.edges.end()));
    CHECK(g.edges.size() == 4);
  }
}

TEST_CASE("underlying problem, correctness and actualisation", "[engine]") {
  auto s = C(kSigmaEx);
  Diagram two{{2, 3}, {{0, 1, 1, 0}}};
  auto p = underlying_problem(s, two);
  REQUIRE(p.size() == 1);
  CHECK(p[0].lhs.to_string() == "b(g(X@2@0))");
  CHECK(p[0].rhs.to_string() == "b(X@3@1)");
  CHECK(is_correct(s, two));
  CHECK(canonical_string(actualise(s, two)) == "[X, g(X)]");

  Diagram chain{{0, 1, 2}, {{0, 2, 1, 0}, {1, 1, 2, 1}}};
  CHECK(is_diagram(s, chain, {"a", "b"}));
  CHECK_FALSE(is_correct(s, chain));
  CHECK_THROWS_AS(actualise(s, chain), std::invalid_argument);

  Diagram single{{0}, {}};
  CHECK(underlying_problem(s, single).empty());
  auto one = C("[a, +c(X)]");
  CHECK(canonical_string(actualise(one, Diagram{{0}, {}})) == "[a, +c(X)]");

  auto nat = instantiate_family(nat_schema(), 2);
  Diagram nchain{{0, 1}, {{0, 1, 1, 0}}};
  CHECK(canonical_string(actualise(nat, nchain)) == "[+nat(s(s(0))), -nat(0)]");

  // a closed diagram is not correct
  auto closed = C("[+a(X)]; [-a(c)]");
  CHECK_FALSE(is_correct(closed, Diagram{{0, 1}, {{0, 0, 1, 0}}}));
}

TEST_CASE("is_diagram rejects ray reuse and disconnection", "[engine]") {
  auto s = C("[+a(X), -a(X)]; [-a(c)]");
  CHECK_FALSE(is_diagram(s, Diagram{{0, 1, 1}, {{0, 0, 1, 0}, {0, 0, 2, 0}}}, {"a"}));
  CHECK_FALSE(is_diagram(s, Diagram{{0, 1}, {}}, {"a"}));
  CHECK(is_diagram(s, Diagram{{0}, {{0, 0, 0, 1}}}, {"a"}));
}

TEST_CASE("saturated diagrams of the worked example", "[engine]") {
  auto s = C(kSigmaEx);
  auto o = opts({"a", "b"}, 8);
  o.prune = false;
  auto all = saturated_diagrams(s, o);
  CHECK(all.status == ExecStatus::complete);
  REQUIRE(all.diagrams.size() == 2);
  int correct = 0;
  for (const auto& d : all.diagrams) {
    correct += d.correct;
    if (d.correct) CHECK(d.diagram.size() == 2);
    if (!d.correct) CHECK(d.diagram.size() == 3);
  }
  CHECK(correct == 1);
  auto pruned = saturated_diagrams(s, opts({"a", "b"}, 8));
  CHECK(pruned.diagrams.size() == 1);
}

TEST_CASE("execute", "[engine]") {
  SECTION("worked example") {
    auto r = execute(C(kSigmaEx), {"a", "b"}, 8);
    CHECK(r.status == ExecStatus::complete);
    CHECK(r.output.to_string() == "[X, g(X)]\n");
  }
  SECTION("empty") {
    auto r = execute(Constellation{}, {"a"});
    CHECK(r.output.empty());
    CHECK(r.status == ExecStatus::complete);
  }
  SECTION("single forced pairing") {
    auto r = execute(C("[+a(c)]; [-a(c), b]"), {"a"});
    CHECK(r.status == ExecStatus::complete);
    CHECK(r.output.to_string() == "[b]\n");
    REQUIRE(r.diagrams.size() == 1);
    CHECK(r.diagrams[0].size() == 2);
  }
  SECTION("stars without partners survive unchanged") {
    auto r = execute(C("[p(X), +t(X)]; [q]"), {"c"});
    CHECK(alpha_equivalent(r.output, C("[p(X), +t(X)]; [q]")));
  }
  SECTION("Girard's star, tree-like over a") {
    auto r = execute(C("[+a.X, -a.X, +b.X]"), {"a"}, 64, true);
    CHECK(r.status == ExecStatus::complete);
    CHECK(r.output.empty());
  }
  SECTION("self-loop star diverges in general mode") {
    for (int fuel : {1, 3, 8}) {
      auto r = execute(C(kSigmaA), {"a", "b"}, fuel);
      CHECK(r.status == ExecStatus::divergent);
      REQUIRE(r.certificate);
      CHECK_FALSE(r.certificate->diagram.is_tree());
    }
  }
  SECTION("self-loop star, tree-like: nothing closes") {
    auto r = execute(C(kSigmaA), {"a", "b"}, 5, true);
    CHECK(r.output.empty());
    CHECK(r.status == ExecStatus::complete);
  }
  SECTION("nat family chains") {
    auto r = execute(instantiate_family(nat_schema(), 4), {"nat"});
    CHECK(r.status == ExecStatus::complete);
    CHECK(r.output.to_string() == "[+nat(s(s(s(s(0))))), -nat(0)]\n");
  }
  SECTION("unbounded chain: fuel in general mode, provably empty tree-like") {
    auto s = C("[-n(X), +n(s(X))]; [+n(0)]");
    CHECK(execute(s, {"n"}, 5).status == ExecStatus::fuel_exhausted);
    auto t = execute(s, {"n"}, 5, true);
    CHECK(t.status == ExecStatus::complete);
    CHECK(t.output.empty());
  }
  SECTION("pumpable tree") {
    // copies of the first star chain through the same port with X = c each time
    auto r = execute(C("[-a(X), +a(X), p(X)]; [+a(c)]; [-a(c)]"), {"a"}, 10, true);
    CHECK(r.status == ExecStatus::divergent);
    REQUIRE(r.certificate);
    CHECK(r.certificate->pumped_from >= 0);
  }
}

TEST_CASE("strong normalisation", "[engine]") {
  CHECK(is_strongly_normalising(C(kSigmaEx), {"a", "b"}) == Verdict::yes);
  CHECK(is_strongly_normalising(instantiate_family(nat_schema(), 5), {"nat"}) == Verdict::yes);
  CHECK(is_strongly_normalising(C(kSigmaA), {"a", "b"}) == Verdict::no);
  CHECK(is_strongly_normalising(C("[-n(X), +n(s(X))]; [+n(0)]"), {"n"}, 6) == Verdict::unknown);
}

TEST_CASE("Church-Rosser checks", "[engine]") {
  SECTION("Girard tree-like") {
    auto rep = church_rosser_check(C("[+a.X, -a.X, +b.X]"), {"a"}, {"b"}, 64, true);
    CHECK(rep.verdict == CRVerdict::holds);
    CHECK(rep.both.output.empty());
    CHECK(rep.a_then_b.output.empty());
    CHECK(rep.b_then_a.output.empty());
  }
  SECTION("empty second set") {
    auto s = C(kSigmaEx);
    auto rep = church_rosser_check(s, {"a", "b"}, {}, 8);
    CHECK(rep.verdict == CRVerdict::holds);
  }
  SECTION("overlap") { CHECK_THROWS_AS(church_rosser_check(C(kSigmaEx), {"a"}, {"a", "b"}), std::invalid_argument); }
  SECTION("a two-coloured star split across stages") {
    // exec_a leaves [+b(c)] facing [-b(d)], exec_ab closes nothing
    auto rep = church_rosser_check(C("[+a(X), +b(X)]; [-a(c)]; [-b(d)]"), {"a"}, {"b"});
    CHECK(rep.verdict == CRVerdict::fails);
    CHECK(rep.both.output.empty());
    CHECK(alpha_equivalent(rep.a_then_b.output, C("[+b(c)]; [-b(d)]")));
  }
}

TEST_CASE("execute is invariant under renaming and star permutation", "[engine][property]") {
  std::mt19937 rng(21);
  int checked = 0;
  for (int k = 0; k < 150; ++k) {
    auto s = oracle::random_constellation(rng);
    std::vector<Star> stars(s.begin(), s.end());
    std::shuffle(stars.begin(), stars.end(), rng);
    Constellation t;
    for (const auto& st : stars) {
      Substitution inj;
      int n = 0;
      for (const auto& v : st.vars()) inj.bind(v, Term::variable("V" + std::to_string(n++)));
      t.add(st.map_terms([&](const Term& x) { return inj.apply(x); }));
    }
    for (bool tree : {false, true}) {
      ExecOptions o = opts({"a", "b"}, 10, tree);
      o.max_partials = 20000;
      auto a = execute(s, o), b = execute(t, o);
      REQUIRE(a.status == b.status);
      if (a.status != ExecStatus::complete) continue;
      ++checked;
      REQUIRE(a.output.to_string() == b.output.to_string());
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("forced-choice search agrees with exhaustive single-edge growth", "[engine][oracle]") {
  std::mt19937 rng(22);
  int compared = 0;
  for (int k = 0; k < 120; ++k) {
    auto s = oracle::random_constellation(rng, {4, 3, 2, {"a", "b"}, 25});
    for (bool tree : {false, true}) {
      const int fuel = 5;
      ExecOptions o = opts({"a", "b"}, fuel, tree);
      o.stop_on_divergence = false;
      o.max_partials = 50000;
      auto sat = saturated_diagrams(s, o);
      if (sat.status == ExecStatus::fuel_exhausted || sat.partials_explored > o.max_partials) continue;
      std::set<std::vector<int>> found;
      for (const auto& d : sat.diagrams) {
        REQUIRE(is_diagram(s, d.diagram, o.colours));
        REQUIRE(is_correct(s, d.diagram));
        REQUIRE(saturated_by_graph(s, d.diagram, o.colours));
        REQUIRE(found.insert(diagram_code(s, d.diagram)).second);  // pairwise non-isomorphic
        if (tree) REQUIRE(d.diagram.is_tree());
        REQUIRE(canonical_string(*d.actualisation) == canonical_string(actualise(s, d.diagram)));
      }
      // independent pass: all solvable diagrams, then filter by the definitions
      std::set<std::vector<int>> expected;
      EnumOptions e;
      e.colours = o.colours;
      e.max_vertices = fuel;
      e.tree_only = tree;
      e.max_partials = 200000;
      auto st = enumerate_diagrams(s, e, nullptr, [&](const DiagramView& v) {
        const Diagram& d = v.diagram();
        if (!saturated_by_graph(s, d, o.colours)) return;
        if (!is_correct(s, d)) return;
        expected.insert(diagram_code(s, d));
      });
      if (st != ExecStatus::complete) continue;
      // when the search reported complete, nothing larger than fuel is missing
      if (sat.status == ExecStatus::complete) {
        REQUIRE(found == expected);
        ++compared;
      } else {
        for (const auto& c : found) REQUIRE(expected.count(c));
      }
    }
  }
  CHECK(compared > 60);
}

TEST_CASE("pruning soundness: extending an unsolvable diagram stays unsolvable", "[engine][property]") {
  std::mt19937 rng(23);
  int seen = 0;
  for (int k = 0; k < 80; ++k) {
    auto s = oracle::random_constellation(rng);
    EnumOptions e;
    e.colours = {"a", "b"};
    e.max_vertices = 4;
    e.require_solvable = false;
    e.max_partials = 20000;
    enumerate_diagrams(s, e, nullptr, [&](const DiagramView& v) {
      const Diagram& d = v.diagram();
      bool ok = solve(underlying_problem(s, d)).ok();
      REQUIRE(ok == v.solvable());
      if (ok) return;
      // every one-edge extension keeps the equations of d
      auto g = unification_graph(s, e.colours);
      for (const auto& ge : g.edges) {
        Diagram x = d;
        for (std::size_t u = 0; u < d.size(); ++u) {
          if (d.vertex_star[u] != ge.u) continue;
          Diagram y = x;
          y.vertex_star.push_back(ge.v);
          y.edges.push_back(GraphEdge{static_cast<int>(u), ge.su, static_cast<int>(d.size()), ge.sv});
          if (!is_diagram(s, y, e.colours)) continue;
          ++seen;
          REQUIRE_FALSE(solve(underlying_problem(s, y)).ok());
        }
      }
    });
  }
  CHECK(seen > 0);
}

TEST_CASE("incremental unifier", "[engine]") {
  auto s = C("[+a(f(X)), -b(X)]; [-a(Y), +b(Y)]");
  IncrementalUnifier u(s);
  int f0 = u.add(0), f1 = u.add(1);
  auto m = u.mark();
  CHECK(u.connect(f0, 0, f1, 0));
  CHECK(u.resolve(f1, 1).to_string() == "b(f(_0))");
  CHECK_FALSE(u.connect(f0, 1, f1, 1));  // X = f(X) after the first edge
  CHECK(u.resolve(f1, 1).to_string() == "b(f(_0))");
  IncrementalUnifier copy = u;
  u.undo(m);
  CHECK(u.resolve(f1, 1).to_string() == "b(_1)");
  CHECK(copy.resolve(f1, 1).to_string() == "b(f(_0))");
  int f2 = u.add(0);
  CHECK(u.frames() == 3);
  u.undo(m);
  CHECK(u.frames() == 2);
  (void)f2;
}

TEST_CASE("exports", "[engine]") {
  auto s = C(kSigmaEx);
  auto dot = to_dot(unification_graph(s, {"a", "b"}), s);
  CHECK(dot.find("s1 -- s2") != std::string::npos);
  auto r = execute(s, {"a", "b"}, 8);
  auto j = to_json(r);
  CHECK(j["status"] == "complete");
  CHECK(j["output"][0]["star"] == "[X, g(X)]");
  CHECK(j["output"][0]["diagram"]["vertices"] == nlohmann::json::array({2, 3}));
  CHECK(to_dot(r.diagrams[0], s).find("v0 -- v1") != std::string::npos);
}
