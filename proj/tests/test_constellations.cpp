//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/constellation.hpp"
#include "stellar/text_format.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace stellar;

namespace {
Star S(std::string_view s) { return parse_star(s); }
Constellation C(std::string_view s) { return parse_constellation(s); }

Star random_star(std::mt19937& rng) {
  const char* atoms[] = {"X", "Y", "Z", "a", "f(X)", "g(X, Y)", "f(Z)", "g(a, Z)"};
  const char* heads[] = {"", "+c", "-c", "+d"};
  std::uniform_int_distribution<int> n(1, 3), a(0, 7), h(0, 3);
  std::string src = "[";
  int k = n(rng);
  for (int i = 0; i < k; ++i) {
    if (i) src += ", ";
    std::string head = heads[h(rng)];
    std::string t = atoms[a(rng)];
    src += head.empty() ? "p(" + t + ")" : head + "(" + t + ")";
  }
  return S(src + "]");
}

Star shuffle_rename(const Star& s, std::mt19937& rng) {
  std::vector<Ray> rays(s.begin(), s.end());
  std::shuffle(rays.begin(), rays.end(), rng);
  Substitution ren;
  int idx = 0;
  for (const auto& v : Star(rays).vars())
    ren.bind(v, Term::variable("V" + std::to_string(idx++ * 7 + 3)));
  return Star(rays).map_terms([&](const Term& t) { return ren.apply(t); });
}
}  // namespace

TEST_CASE("alpha_equivalent on stars", "[constellations]") {
  CHECK(alpha_equivalent(S("[+a(X), X]"), S("[+a(Y), Y]")));
  CHECK_FALSE(alpha_equivalent(S("[+a(X), X]"), S("[+a(X), Y]")));
  CHECK_FALSE(alpha_equivalent(S("[X]"), S("[X, X]")));
  CHECK_FALSE(alpha_equivalent(S("[+a(X)]"), S("[-a(X)]")));
  CHECK(alpha_equivalent(S("[f(X), g(Y)]"), S("[g(Z), f(W)]")));
  CHECK_FALSE(alpha_equivalent(S("[f(X, Y)]"), S("[f(X, X)]")));
}

TEST_CASE("canonical string is invariant under renaming and permutation", "[constellations][property]") {
  std::mt19937 rng(11);
  for (int i = 0; i < 500; ++i) {
    Star s = random_star(rng);
    Star t = shuffle_rename(s, rng);
    REQUIRE(alpha_equivalent(s, t));
    REQUIRE(canonical_string(s) == canonical_string(t));
  }
}

TEST_CASE("canonical string separates non-equivalent stars", "[constellations][property]") {
  std::mt19937 rng(12);
  std::vector<Star> stars;
  for (int i = 0; i < 150; ++i) stars.push_back(random_star(rng));
  for (const auto& a : stars)
    for (const auto& b : stars) REQUIRE((canonical_string(a) == canonical_string(b)) == alpha_equivalent(a, b));
}

TEST_CASE("alpha-equivalence is an equivalence relation", "[constellations][property]") {
  std::mt19937 rng(13);
  for (int i = 0; i < 200; ++i) {
    Star a = random_star(rng);
    Star b = shuffle_rename(a, rng);
    Star c = shuffle_rename(b, rng);
    REQUIRE(alpha_equivalent(a, a));
    REQUIRE(alpha_equivalent(b, a));
    REQUIRE(alpha_equivalent(a, c));
  }
}

TEST_CASE("colourize", "[constellations]") {
  auto out = colourize("t", Polarity::positive, C("[p(X), p(Y)]"));
  CHECK(alpha_equivalent(out, C("[+t(p(X)), +t(p(Y))]")));
  CHECK(alpha_equivalent(colourize("c", Polarity::negative, C("[+d.a]")), C("[-c.a]")));
  CHECK(colourize("c", Polarity::positive, Constellation{}).empty());
  std::mt19937 rng(14);
  for (int i = 0; i < 100; ++i) {
    Constellation s{random_star(rng), random_star(rng)};
    auto once = colourize("k", Polarity::negative, s);
    REQUIRE(alpha_equivalent(colourize("k", Polarity::negative, once), once));
  }
}

TEST_CASE("decolourize strips one colour", "[constellations]") {
  auto out = decolourize("c", C("[+c(p(X)), -d(X)]"));
  CHECK(alpha_equivalent(out, C("[p(X), -d(X)]")));
}

TEST_CASE("union", "[constellations]") {
  auto a = C("[a]");
  auto u = constellation_union(a, a);
  CHECK(u.size() == 2);
  CHECK(alpha_equivalent(constellation_union(a, Constellation{}), a));
  auto b = C("[f(X), +c(X)]; [-c(Y)]");
  CHECK(constellation_union(a, b).size() == a.size() + b.size());
  CHECK(constellation_union(b, b).variables_disjoint());
  auto c = C("[g(Z)]");
  CHECK(alpha_equivalent(constellation_union(constellation_union(a, b), c),
                         constellation_union(a, constellation_union(b, c))));
  CHECK(alpha_equivalent(constellation_union(a, b), constellation_union(b, a)));
}

TEST_CASE("instantiate_family", "[constellations]") {
  auto two = instantiate_family(nat_schema(), 2);
  CHECK(alpha_equivalent(two, C("[-nat(0), +nat(s(0))]; [-nat(s(0)), +nat(s(s(0)))]")));
  CHECK(instantiate_family(nat_schema(), 0).empty());
  for (std::uint64_t n = 0; n < 5; ++n)
    CHECK(instantiate_family(nat_schema(), n + 1).size() == instantiate_family(nat_schema(), n).size() + 1);
}

TEST_CASE("parse_constellation", "[constellations][format]") {
  auto c = C("[+a(X), X]; [-a(f(Y))]");
  CHECK(c.size() == 2);
  CHECK(c.variables_disjoint());
  CHECK_THROWS_AS(C("[+a(X, Y)]; [-a(Z)]"), Signature::Conflict);
  CHECK(C("# comment\n[+a.X, b]   # trailing\n[-a(c)]\n").size() == 2);
  CHECK(C("[?x, f(?x)]").size() == 1);
  CHECK_NOTHROW(C("[+a]; [-a]"));
  try {
    C("[+a(X), \n  f(]");
    FAIL("no parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(C("[]"), ParseError);
  CHECK_THROWS_AS(C("[a] [b]"), ParseError);
}

TEST_CASE("serialize round trip", "[constellations][format]") {
  auto c = C("[g(X), f(X), +a(f(X))]; [-a(Y), +b(Y)]; [X, -b(g(X))]; [+b(X), X]");
  auto again = C(serialize(c));
  CHECK(alpha_equivalent(c, again));
  CHECK(serialize(c) == serialize(again));
  auto j = constellation_to_json(c);
  CHECK(alpha_equivalent(constellation_from_json(j), c));
}

TEST_CASE("canonical text form", "[constellations][format]") {
  CHECK(canonical_string(S("[g(Y), Y]")) == "[X, g(X)]");
  CHECK(canonical_string(S("[+c.f(A), -c(B), A]")) == "[X, +c(f(X)), -c(Y)]");
  CHECK(canonical_var_name(3) == "X1");
}
