//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_ENGINE_HPP
#define STELLAR_ENGINE_HPP

#include "stellar/constellation.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace stellar {

using ColourSet = std::set<std::string>;

/// +c(...) against -c(...) with c in `colours` and matchable arguments.
bool dual(const Ray& a, const Ray& b, const ColourSet& colours);

struct GraphEdge {
  int u = 0, su = 0;  // star occurrence and ray slot
  int v = 0, sv = 0;
  friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

struct UnificationGraph {
  std::size_t vertex_count = 0;
  std::vector<GraphEdge> edges;  // u <= v; loops have u == v and su < sv
};

UnificationGraph unification_graph(const Constellation& sigma, const ColourSet& colours);

/// A diagram edge joins slot `su` of vertex u with slot `sv` of vertex v.
/// Vertex k is an occurrence of star vertex_star[k] of the constellation.
struct Diagram {
  std::vector<int> vertex_star;
  std::vector<GraphEdge> edges;

  std::size_t size() const { return vertex_star.size(); }
  bool is_tree() const { return edges.size() + 1 == vertex_star.size(); }
};

/// One equation per edge: the two ray terms renamed apart by vertex.
UnificationProblem underlying_problem(const Constellation& sigma, const Diagram& d);

/// Checked: vertices in range, slots in range, ray injectivity, duality of
/// every edge under `colours` and connectedness.
bool is_diagram(const Constellation& sigma, const Diagram& d, const ColourSet& colours);

/// (vertex, slot) pairs not used by any edge.
std::vector<std::pair<int, int>> free_rays(const Constellation& sigma, const Diagram& d);

bool is_correct(const Constellation& sigma, const Diagram& d);

/// Contracts a correct diagram to one star; throws std::invalid_argument on
/// an incorrect one.
Star actualise(const Constellation& sigma, const Diagram& d);

enum class ExecStatus { complete, fuel_exhausted, divergent };
const char* to_string(ExecStatus s);

struct ExecOptions {
  ColourSet colours;
  int fuel = 64;                       // maximum vertices per diagram
  bool tree_only = false;
  bool prune = true;                   // drop diagrams once unsolvable
  bool stop_on_divergence = true;
  std::size_t max_partials = 200000;   // search budget; hitting it means fuel_exhausted
};

struct SaturatedDiagram {
  Diagram diagram;
  bool correct = false;
  std::optional<Star> actualisation;
};

struct DivergenceCertificate {
  Diagram diagram;
  std::string reason;
  int pumped_from = -1;  // tree case: ancestor vertex
  int pumped_to = -1;    // tree case: descendant vertex with the same entry
};

struct SaturationResult {
  std::vector<SaturatedDiagram> diagrams;  // sorted by canonical actualisation
  ExecStatus status = ExecStatus::complete;
  std::size_t partials_explored = 0;
  std::size_t max_size_reached = 0;
  std::optional<DivergenceCertificate> certificate;
};

/// All saturated diagrams with at most `fuel` vertices, up to isomorphism.
/// With prune = true only correct ones are listed; otherwise incorrect ones
/// are listed too, flagged.
SaturationResult saturated_diagrams(const Constellation& sigma, const ExecOptions& opts);

struct ExecutionResult {
  Constellation output;
  ExecStatus status = ExecStatus::complete;
  std::size_t diagram_count = 0;
  std::size_t max_diagram_size = 0;
  std::vector<Diagram> diagrams;  // provenance, aligned with output
  std::optional<DivergenceCertificate> certificate;
};

ExecutionResult execute(const Constellation& sigma, const ExecOptions& opts);
ExecutionResult execute(const Constellation& sigma, const ColourSet& colours, int fuel = 64,
                        bool tree_only = false);

enum class Verdict { yes, no, unknown };
const char* to_string(Verdict v);

/// General (cycle-admitting) diagrams unless tree_only.
Verdict is_strongly_normalising(const Constellation& sigma, const ColourSet& colours, int fuel = 64,
                                bool tree_only = false, std::size_t max_partials = 200000);

enum class CRVerdict { holds, fails, indeterminate };
const char* to_string(CRVerdict v);

struct ChurchRosserReport {
  CRVerdict verdict = CRVerdict::indeterminate;
  ExecutionResult a_then_b, both, b_then_a;
};

/// Throws std::invalid_argument when A and B overlap.
ChurchRosserReport church_rosser_check(const Constellation& sigma, const ColourSet& a, const ColourSet& b,
                                       int fuel = 64, bool tree_only = false,
                                       std::size_t max_partials = 200000);

// --- generic enumeration ---------------------------------------------------

namespace detail {
struct Partial;
struct Compiled;
}  // namespace detail

/// Read access to a diagram under construction.
class DiagramView {
public:
  DiagramView(const detail::Compiled& c, const detail::Partial& p) : c_(&c), p_(&p) {}

  const Diagram& diagram() const;
  bool solvable() const;
  bool slot_used(int vertex, int slot) const;
  /// Ray term of (vertex, slot) under the current most general unifier.
  Term ray_term(int vertex, int slot) const;

private:
  const detail::Compiled* c_;
  const detail::Partial* p_;
};

struct EnumOptions {
  ColourSet colours;
  int max_vertices = 6;
  bool tree_only = false;
  bool require_solvable = true;
  /// Grow by fresh vertices only, each time also connecting every other free
  /// dual port pair between the new vertex and the diagram whose
  /// unification succeeds (slot order). Needs tree_only = false.
  bool dense = false;
  std::size_t max_partials = 2000000;
};

/// Every connected diagram up to isomorphism, grown by single-edge
/// extensions. `keep` may reject a diagram together with all its
/// extensions. Returns complete or fuel_exhausted (budget).
ExecStatus enumerate_diagrams(const Constellation& sigma, const EnumOptions& opts,
                              const std::function<bool(const DiagramView&)>& keep,
                              const std::function<void(const DiagramView&)>& visit);

/// Canonical code of a diagram: equal codes iff isomorphic.
std::vector<int> diagram_code(const Constellation& sigma, const Diagram& d);

// --- incremental unification -----------------------------------------------

/// Star instances plus edges with transactional unification. Cheap to copy.
class IncrementalUnifier {
public:
  explicit IncrementalUnifier(const Constellation& sigma);
  ~IncrementalUnifier();
  IncrementalUnifier(const IncrementalUnifier&);
  IncrementalUnifier& operator=(const IncrementalUnifier&);

  int add(int star);  // returns the frame of the new instance
  /// Unifies the two rays; leaves the state unchanged on failure.
  bool connect(int frame_a, int slot_a, int frame_b, int slot_b);
  std::size_t frames() const;
  Term resolve(int frame, int slot) const;

  struct Mark {
    std::size_t trail = 0;
    std::size_t frames = 0;
  };
  Mark mark() const;
  void undo(const Mark& m);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// --- export ----------------------------------------------------------------

std::string to_dot(const UnificationGraph& g, const Constellation& sigma);
std::string to_dot(const Diagram& d, const Constellation& sigma);
nlohmann::json to_json(const Diagram& d);
nlohmann::json to_json(const ExecutionResult& r);

}  // namespace stellar

#endif
