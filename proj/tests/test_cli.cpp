//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/cli.hpp"
#include "stellar/text_format.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace stellar;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

const char* kSigmaEx = "[g(X), f(X), +a(f(X))]; [-a(Y), +b(Y)]; [X, -b(g(X))]; [+b(X), X]";
const char* kSigmaA = "[-a(X), +a(X), -b(X)]";
const char* kSelfTensor = "ax a b X0\ntensor a b -> c\n";
const char* kIdentity = "ax a b X0\nax c d X1\ntensor a c -> e\npar b d -> f\nconclusions e f\n";
const char* kOpenCut =
    "ax a1n a1 ~X0\nax a2n a2 ~X0\nax a3n a3 ~X0\npar a1n a1 -> c\ntensor a2 a3n -> d\ncut c d\n"
    "conclusions a2n a3\n";
const char* kScaffold = "z m z m 0 2 0 2\nm z z x 2 0 0 1\nz x m z 0 1 2 0\nx z x z 1 0 1 0\ntemperature 2\n";
const char* kIncrement = "start q0\nblank b\ninput 1 1\nq0 1 -> q0 1 R\nq0 b -> qh 1 R\n";

}  // namespace

TEST_CASE("exec prints the output constellation", "[cli]") {
  auto r = run({"exec", "-e", kSigmaEx});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out.rfind("[X, g(X)]\n", 0) == 0);
  CHECK(contains(r.out, "# status: complete"));
  CHECK(alpha_equivalent(parse_constellation(r.out), parse_constellation("[X, g(X)]")));

  auto j = nlohmann::json::parse(run({"exec", "-e", kSigmaEx, "--format", "json"}).out);
  CHECK(j["status"] == "complete");
  CHECK(j["output"].size() == 1);
  CHECK(j["output"][0]["diagram"]["vertices"].size() == 2);
}

TEST_CASE("exec on the looping star", "[cli]") {
  auto r = run({"exec", "--fuel", "3", "-e", kSigmaA});
  CHECK((r.code == cli::exit_failure || r.code == cli::exit_unknown));
  CHECK((contains(r.out, "status: divergent") || contains(r.out, "status: fuel_exhausted")));
  if (r.code == cli::exit_failure) CHECK(contains(r.out, "# certificate:"));

  auto tree = run({"exec", "--tree", "-e", kSigmaA});
  CHECK(tree.code == cli::exit_ok);
  CHECK(tree.out == "# status: complete\n");
}

TEST_CASE("graph command", "[cli]") {
  auto text = run({"graph", "-e", kSigmaEx});
  CHECK(text.code == cli::exit_ok);
  CHECK(text.out == "vertices 4\n0.2 -- 1.0\n1.1 -- 2.1\n2.1 -- 3.0\n");
  auto j = nlohmann::json::parse(run({"graph", "-e", kSigmaEx, "--format", "json"}).out);
  CHECK(j["vertices"] == 4);
  CHECK(j["edges"].size() == 3);
  CHECK(run({"graph", "-e", kSigmaEx, "--format", "dot"}).out.rfind("graph unification {", 0) == 0);
  CHECK(run({"graph", "-e", kSigmaEx, "--colors", "a"}).out == "vertices 4\n0.2 -- 1.0\n");
}

TEST_CASE("mll-check verdicts and certificates", "[cli]") {
  auto bad = run({"mll-check", "-e", kSelfTensor});
  CHECK(bad.code == cli::exit_failure);
  CHECK(contains(bad.out, "verdict: not_proof_net"));
  CHECK(contains(bad.out, "has cycle"));
  auto j = nlohmann::json::parse(run({"mll-check", "-e", kSelfTensor, "--format", "json"}).out);
  CHECK(j["verdict"] == "not_proof_net");
  CHECK(j["dr_correct"] == false);
  // The cycle closes on its first node.
  auto cycle = j["correction_certificate"]["cycle"];
  REQUIRE(cycle.size() >= 3);
  CHECK(cycle.front() == cycle.back());

  auto good = run({"mll-check", "-e", kIdentity});
  CHECK(good.code == cli::exit_ok);
  CHECK(contains(good.out, "verdict: proof_net"));
  CHECK(run({"mll-check", "-e", kIdentity, "--format", "dot"}).out.rfind("graph correction {", 0) == 0);
}

TEST_CASE("mll-exec compares with cut elimination", "[cli]") {
  auto r = run({"mll-exec", "-e", kOpenCut});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out.rfind("[p0(X), p1(X)]\n", 0) == 0);
  CHECK(contains(r.out, "# matches normal form: yes"));
}

TEST_CASE("tile command", "[cli]") {
  auto enc = run({"tile", "-e", "r g r g\ng r g r\n"});
  CHECK(enc.code == cli::exit_ok);
  CHECK(parse_constellation(enc.out).size() == 2);
  auto r = run({"tile", "-e", "r g r g\ng r g r\n", "--width", "2", "--height", "2"});
  CHECK(r.code == cli::exit_ok);
  CHECK(contains(r.out, "# 2 tiling(s) of 2x2"));
  CHECK(run({"tile", "-e", "a b c d\n", "--width", "2", "--height", "1"}).code == cli::exit_failure);
  CHECK(run({"tile", "-e", "r g r g\ng r g r\n", "--width", "2", "--height", "2", "--paper-verbatim"}).code ==
        cli::exit_failure);
}

TEST_CASE("atam command", "[cli]") {
  auto enc = run({"atam", "-e", kScaffold});
  CHECK(enc.code == cli::exit_ok);
  CHECK_FALSE(parse_constellation(enc.out).empty());
  auto grown = run({"atam", "-e", kScaffold, "--grow", "4", "--seed", "7"});
  CHECK(grown.code == cli::exit_ok);
  CHECK(contains(grown.out, "0 0 0\n0 1 2\n1 0 1\n1 1 3\n"));
  CHECK(run({"atam", "-e", "a a a a\n"}).code == cli::exit_error);  // no strengths
}

TEST_CASE("resolve command", "[cli]") {
  const char* prog = "parent(ann, bob).\nparent(bob, cid).\ngrand(X, Z) :- parent(X, Y), parent(Y, Z).\n";
  auto r = run({"resolve", "-e", std::string(prog) + "?- grand(ann, W).\n"});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out.rfind("ans(cid)\n", 0) == 0);
  CHECK(run({"resolve", "-e", std::string(prog) + "?- grand(cid, W).\n"}).code == cli::exit_failure);
  auto j = nlohmann::json::parse(run({"resolve", "-e", std::string(prog) + "?- grand(X, W).\n", "--format", "json"}).out);
  CHECK(j["answers"] == nlohmann::json::array({"ans(ann, cid)"}));
}

TEST_CASE("tm command", "[cli]") {
  auto r = run({"tm", "-e", kIncrement, "--steps", "5"});
  CHECK(r.code == cli::exit_ok);
  CHECK(contains(r.out, "3: 1 1 1 [qh:b]"));
  CHECK(contains(r.out, "agrees with direct run: yes"));
  CHECK(run({"tm", "-e", kIncrement, "--paper-verbatim"}).code == cli::exit_failure);
}

TEST_CASE("input files and errors", "[cli]") {
  auto path = std::filesystem::temp_directory_path() / "stellar_cli_test.stel";
  {
    std::ofstream f(path);
    f << "# comment line\n" << kSigmaEx << "\n";
  }
  auto r = run({"exec", path.string()});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out.rfind("[X, g(X)]\n", 0) == 0);
  std::filesystem::remove(path);

  CHECK(run({"exec", "/nonexistent/input.stel"}).code == cli::exit_error);
  CHECK(run({"exec"}).code == cli::exit_error);
  CHECK(run({}).code == cli::exit_error);
  CHECK(run({"frobnicate"}).code == cli::exit_error);
  auto parse = run({"exec", "-e", "[+a(X"});
  CHECK(parse.code == cli::exit_error);
  CHECK(contains(parse.err, "parse error"));
  CHECK(run({"exec", "-e", "[+a(X, Y)]; [-a(Z)]"}).code == cli::exit_error);
  CHECK(run({"exec", "-e", "[+a(X)]", "--colors", "zz"}).code == cli::exit_error);
  CHECK(run({"exec", "-e", "[+a(X)]", "--fuel", "0"}).code == cli::exit_error);
  CHECK(run({"exec", "-e", "[+a(X)]", "--tree", "--general"}).code == cli::exit_error);
  CHECK(run({"exec", "-e", "[+a(X)]", "--format", "xml"}).code == cli::exit_error);
  CHECK(run({"tm", "-e", kIncrement, "--format", "dot"}).code == cli::exit_error);
  CHECK(run({"mll-check", "-e", "ax a b X0\ncut a a\n"}).code == cli::exit_error);
  CHECK(run({"--help"}).code == cli::exit_ok);
}

TEST_CASE("output is byte-stable", "[cli]") {
  const std::vector<std::vector<std::string>> cases{
      {"exec", "-e", kSigmaEx, "--format", "json"},
      {"exec", "--fuel", "3", "-e", kSigmaA},
      {"mll-check", "-e", kSelfTensor, "--format", "json"},
      {"atam", "-e", kScaffold, "--grow", "4", "--seed", "11", "--format", "json"},
      {"tm", "-e", kIncrement},
  };
  for (const auto& args : cases) {
    auto a = run(args), b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
