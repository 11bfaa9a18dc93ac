//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_MLL_HPP
#define STELLAR_MLL_HPP

#include "stellar/engine.hpp"
#include "stellar/realisability.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stellar::mll {

/// X_i, X_i^⊥, A ⊗ B or A ⅋ B. Text: `X0`, `~X0`, `(A * B)`, `(A | B)`.
class Formula {
public:
  enum class Kind { atom, dual_atom, tensor, par };

  static Formula atom(int index);
  static Formula dual_atom(int index);
  static Formula tensor(const Formula& a, const Formula& b);
  static Formula par(const Formula& a, const Formula& b);

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  bool is_atomic() const { return kind_ == Kind::atom || kind_ == Kind::dual_atom; }
  const Formula& left() const { return *left_; }
  const Formula& right() const { return *right_; }
  std::size_t connectives() const;

  /// (A ⊗ B)^⊥ = A^⊥ ⅋ B^⊥, (A ⅋ B)^⊥ = A^⊥ ⊗ B^⊥, X^⊥⊥ = X.
  Formula dual() const;
  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b);

private:
  Kind kind_ = Kind::atom;
  int index_ = 0;
  std::shared_ptr<const Formula> left_, right_;
};

Formula parse_formula(std::string_view src);

enum class LinkKind { ax, cut, tensor, par };
const char* to_string(LinkKind k);

/// ax: no sources, targets {A, A^⊥}; cut: sources {A, A^⊥}, no target;
/// tensor/par: sources {left, right}, one target.
struct Link {
  LinkKind kind = LinkKind::ax;
  std::vector<int> sources;
  std::vector<int> targets;
};

class StructureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A proof-structure. Vertices are formula occurrences; `conclusions` lists
/// the vertices that are sources of no link, in a fixed order.
struct ProofStructure {
  std::vector<Formula> labels;
  std::vector<Link> links;
  std::vector<int> conclusions;

  int add_vertex(const Formula& f);
  /// Adds vertices X_i and X_i^⊥ (or the given atom and its dual) and the
  /// axiom between them; returns the two vertices.
  std::pair<int, int> add_axiom(const Formula& atom);
  int add_tensor(int l, int r);
  int add_par(int l, int r);
  void add_cut(int a, int b);
  /// Sets `conclusions` to the free vertices in vertex order.
  void close();

  /// Throws StructureError when an invariant fails. With `forest` set,
  /// vertices may be targets of no link (bare syntax forests).
  void validate(bool forest = false) const;

  std::size_t count(LinkKind k) const;
  std::vector<int> par_links() const;
  std::vector<int> cut_links() const;
  int producer(int v) const;  // link targeting v, or -1
  int consumer(int v) const;  // link with v as a source, or -1
};

/// Syntax forest of the conclusions (no axioms); atoms are leaves.
ProofStructure syntax_forest(const std::vector<Formula>& conclusions);

// --- text formats ----------------------------------------------------------

/// Lines: `ax a b X0`, `tensor a b -> c`, `par a b -> c`, `cut a b`,
/// `conclusions a b ...` (optional). '#' starts a comment.
ProofStructure parse_structure(std::string_view src);
std::string to_text(const ProofStructure& s);

/// Sequent derivation as an s-expression over the four rules:
/// `(ax X0)` proves X0, ~X0; `(par i j D)`; `(tensor i D1 j D2)`;
/// `(cut i D1 j D2)`. Indices select conclusions of the premises; the new
/// formula of par/tensor is appended last, cut keeps D1's rest then D2's.
struct Derivation {
  enum class Rule { ax, par, tensor, cut };
  Rule rule = Rule::ax;
  Formula atom = Formula::atom(0);
  int i = 0, j = 0;
  std::vector<Derivation> premises;

  std::size_t rules() const;
  std::vector<Formula> conclusions() const;  // throws StructureError if ill-formed
  std::string to_string() const;
};

Derivation parse_derivation(std::string_view src);
ProofStructure build_structure(const Derivation& d);

// --- addresses and translation ---------------------------------------------

/// Symbol of the conclusion or cut source below vertex v: p<i> for the i-th
/// conclusion, cut<k>l / cut<k>r for the sources of the k-th cut.
std::string root_name(const ProofStructure& s, int v);
int root_of(const ProofStructure& s, int v);
/// p_C(π(X)) with π the l/r path from v down to its root, outermost step
/// nearest the root. Throws StructureError for unknown vertices.
Term address_of(const ProofStructure& s, int v);

/// Atom addresses below conclusions (those that survive cut elimination).
std::vector<Term> conclusion_addresses(const ProofStructure& s);

Constellation vehicle(const ProofStructure& s);
Constellation cut_constellation(const ProofStructure& s);

/// Tree-like execution of +c.vehicle · -c.cuts over {c}; the output is
/// returned with the colour c removed so it compares with vehicles.
ExecutionResult exec_structure(const ProofStructure& s, int fuel = 64);

class NoRedex : public std::runtime_error {
public:
  NoRedex() : std::runtime_error("no cut to reduce") {}
};

/// One step on the first cut, by link order.
ProofStructure reduce_cut(const ProofStructure& s);
ProofStructure normal_form(const ProofStructure& s);
bool dynamics_check(const ProofStructure& s, int fuel = 64);

// --- correctness -----------------------------------------------------------

/// One entry per par link (par_links order); false = left, true = right.
using Switching = std::vector<bool>;
std::vector<Switching> all_switchings(const ProofStructure& s);

/// Incidence graph: nodes 0..V-1 are vertices, V..V+E-1 are links.
struct CorrectionGraph {
  std::size_t nodes = 0;
  std::vector<std::pair<int, int>> edges;
  bool acyclic() const;
  bool connected() const;
  bool is_tree() const { return acyclic() && connected(); }
};

CorrectionGraph correction_graph(const ProofStructure& s, const Switching& sw);
bool dr_correct(const ProofStructure& s);
bool mix_correct(const ProofStructure& s);

/// Test constellation of the switched structure, colours t and c. Works on
/// syntax forests too (only connective links are read).
Constellation ordeal(const ProofStructure& s, const Switching& sw);
/// +t.vehicle · -c.cuts · ordeal
Constellation stellar_test(const ProofStructure& s, const Switching& sw);
/// [p0(X), ..., p(n-1)(X), sw0(X), ..., sw(m-1)(X)]: the conclusions and
/// one marker per par link, left by the star closing its dropped premise.
Star expected_conclusion_star(const ProofStructure& s);

enum class NetVerdict { proof_net, not_proof_net, unknown };
const char* to_string(NetVerdict v);

struct SwitchingReport {
  Switching switching;
  ExecutionResult tree_exec;  // tree-like, must give the expected star
  Verdict normalising = Verdict::unknown;  // general diagrams
  std::optional<DivergenceCertificate> certificate;
};

struct CorrectnessReport {
  NetVerdict verdict = NetVerdict::unknown;
  Verdict strongly_normalising = Verdict::unknown;  // conjunction over switchings
  std::vector<SwitchingReport> switchings;
};

CorrectnessReport stellar_correct(const ProofStructure& s, int fuel = 64);

/// Ordeals of the syntax forest of ⊢Γ, one test per switching.
TestType ordeal_type(const std::vector<Formula>& gamma);

// --- proof-like constellations and reconstruction --------------------------

/// Every star binary and the location of sig equals `addresses`.
bool is_proof_like(const Constellation& sig, const std::vector<Term>& addresses);

enum class ReconstructFailure { none, not_proof_like, address_mismatch, cyclic };
const char* to_string(ReconstructFailure f);

struct ReconstructResult {
  std::optional<ProofStructure> structure;
  ReconstructFailure failure = ReconstructFailure::none;
  std::string detail;
};

ReconstructResult reconstruct_proof_net(const Constellation& sig, const std::vector<Formula>& conclusions);

/// Label-preserving isomorphism of structures that keeps conclusion order.
bool isomorphic(const ProofStructure& a, const ProofStructure& b);

std::string to_dot(const ProofStructure& s);
std::string to_dot(const CorrectionGraph& g, const ProofStructure& s);

}  // namespace stellar::mll

#endif
