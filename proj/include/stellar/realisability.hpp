//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_REALISABILITY_HPP
#define STELLAR_REALISABILITY_HPP

#include "stellar/engine.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace stellar {

/// r1 ⪯ r2: same polarity and some θ with θ(r1) = r2 (the colour is the
/// head symbol, so it has to agree as well).
bool ray_leq(const Ray& r1, const Ray& r2);
bool ray_equivalent(const Ray& r1, const Ray& r2);

/// Prefix-reduced ray set, sorted by canonical text, one representative per
/// renaming class.
using Location = std::vector<Ray>;

/// ⪯-minimal rays, b ranging over rays not equivalent to a.
Location prefix_reduce(const std::vector<Ray>& rays);
Location location(const Star& s);
Location location(const Constellation& sigma);
bool same_location(const Location& a, const Location& b);

/// Most general common instances of an element of r and an element of q.
Location ucap(const Location& r, const Location& q);
bool disjoint(const Location& a, const Location& b);
bool disjoint(const Constellation& a, const Constellation& b);
/// loc(Σ1) ⋒ loc(Σ2) ⋒ loc(Σ3) = ∅
bool jointly_disjoint(const Constellation& s1, const Constellation& s2, const Constellation& s3);

struct RealisabilityOptions {
  ColourSet colours;
  int fuel = 64;
  bool tree_only = false;
  std::size_t max_partials = 200000;
};

struct Orthogonality {
  Verdict verdict = Verdict::unknown;
  ExecStatus status = ExecStatus::complete;
  std::size_t max_diagram_size = 0;
  std::optional<DivergenceCertificate> certificate;
};

/// Strong normalisation of s1 · s2.
Orthogonality orthogonality(const Constellation& s1, const Constellation& s2, const RealisabilityOptions& opts);
Verdict orthogonal(const Constellation& s1, const Constellation& s2, const RealisabilityOptions& opts);

/// A finite set of tests standing for a type.
struct TestType {
  std::vector<Constellation> tests;
  std::vector<std::string> ids;  // optional, aligned with tests
  ColourSet colours;
};

struct TypeCheckEntry {
  std::string test_id;
  Orthogonality result;
};

struct TypeCheckReport {
  std::string candidate_id;
  Verdict verdict = Verdict::yes;
  int fuel = 0;
  std::vector<TypeCheckEntry> entries;
};

/// Conjunction over the tests; no dominates unknown, unknown dominates yes.
TypeCheckReport type_check(const Constellation& candidate, const TestType& t, int fuel = 64,
                           std::string candidate_id = "candidate", bool stop_at_no = false);
Verdict in_test_type(const Constellation& candidate, const TestType& t, int fuel = 64);
nlohmann::json to_json(const TypeCheckReport& r);

enum class PropertyOutcome { agree, disagree, inconclusive };
const char* to_string(PropertyOutcome o);

struct TrefoilReport {
  PropertyOutcome outcome = PropertyOutcome::inconclusive;
  Verdict lhs = Verdict::unknown;  // Σ2 ⊥ Σ3 and Σ1 ⊥ exec(Σ2 · Σ3)
  Verdict rhs = Verdict::unknown;  // Σ1 ⊥ Σ2 and exec(Σ1 · Σ2) ⊥ Σ3
};

/// Throws std::invalid_argument unless the three locations jointly meet in ∅.
TrefoilReport trefoil_check(const Constellation& s1, const Constellation& s2, const Constellation& s3,
                            const RealisabilityOptions& opts);

struct AssocReport {
  PropertyOutcome outcome = PropertyOutcome::inconclusive;
  Constellation left;   // exec(Σ1 · exec(Σ2 · Σ3))
  Constellation right;  // exec(exec(Σ1 · Σ2) · Σ3)
};

AssocReport assoc_exec_check(const Constellation& s1, const Constellation& s2, const Constellation& s3,
                             const RealisabilityOptions& opts);

}  // namespace stellar

#endif
