//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_TERM_HPP
#define STELLAR_TERM_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stellar {

/// Process-wide interned identifier table; symbol ids are stable for the
/// lifetime of the process and safe to use from several threads.
class Symbols {
public:
  static int intern(std::string_view name);
  static const std::string& name(int id);
};

/// A variable is a base name plus a namespace tag. Parsed variables carry
/// tag -1; renaming apart moves them into the namespace of a tag.
/// Negative names are anonymous variables produced by the engine.
struct Var {
  int name = 0;
  int tag = -1;

  friend auto operator<=>(const Var&, const Var&) = default;
  friend bool operator==(const Var&, const Var&) = default;
};

std::string var_name(Var v);

class Term;

namespace detail {
struct TermNode;
}

class Term {
public:
  Term() = default;  // invalid until assigned

  static Term variable(Var v);
  static Term variable(std::string_view name, int tag = -1);
  static Term apply(int symbol, std::vector<Term> args);
  static Term apply(std::string_view symbol, std::vector<Term> args);
  static Term constant(std::string_view symbol);

  bool valid() const { return node_ != nullptr; }
  bool is_variable() const;
  Var var() const;
  int symbol() const;
  const std::string& symbol_name() const;
  const std::vector<Term>& args() const;
  std::size_t arity() const { return args().size(); }
  std::size_t hash() const;
  const detail::TermNode* node() const { return node_.get(); }

  bool is_ground() const;
  std::size_t size() const;
  std::size_t depth() const;
  bool contains(Var v) const;
  void collect_vars(std::vector<Var>& out) const;  // first-occurrence order
  std::vector<Var> vars() const;

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
  explicit Term(std::shared_ptr<const detail::TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

namespace detail {
struct TermNode {
  bool is_var = false;
  Var v;
  int symbol = -1;
  std::vector<Term> args;
  std::size_t hash = 0;
};
}  // namespace detail

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Finite map from variables to terms.
class Substitution {
public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const Var, Term>> init) : map_(init) {}

  void bind(Var v, Term t) { map_.insert_or_assign(v, std::move(t)); }
  const Term* find(Var v) const;
  bool contains(Var v) const { return map_.count(v) != 0; }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<Var, Term>& bindings() const { return map_; }

  Term apply(const Term& t) const;
  /// (this ∘ inner): apply inner first, then this.
  Substitution compose(const Substitution& inner) const;
  bool is_idempotent() const;
  bool is_renaming() const;

  std::string to_string() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

private:
  std::map<Var, Term> map_;
};

Term apply_substitution(const Substitution& s, const Term& t);

struct Equation {
  Term lhs;
  Term rhs;
};

/// Unordered equations; orientation carries no meaning.
using UnificationProblem = std::vector<Equation>;

enum class UnifyError { clash, occurs_check };

const char* to_string(UnifyError e);

struct SolveResult {
  std::optional<Substitution> mgu;
  UnifyError error = UnifyError::clash;

  bool ok() const { return mgu.has_value(); }
  explicit operator bool() const { return ok(); }
};

/// Martelli-Montanari unification with occurs check. The returned
/// substitution is idempotent and most general.
SolveResult solve(const UnificationProblem& p);
SolveResult unify(const Term& a, const Term& b);

/// Injective map of the variables of t into the namespace of `tag`.
/// Distinct tags give disjoint variable sets.
Term rename_apart(const Term& t, int tag);
Var rename_apart(Var v, int tag);

/// True iff t and u have a common instance once their variables are
/// renamed apart.
bool matchable(const Term& t, const Term& u);

/// One-way matching: a substitution θ with θ(pattern) = target, if any.
std::optional<Substitution> match(const Term& pattern, const Term& target);

/// Arity registry with colour flags. Symbols are fixed-arity.
class Signature {
public:
  class Conflict : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  void add_function(std::string_view name, std::size_t arity);
  void add_colour(std::string_view name, std::size_t arity);
  void add_term(const Term& t);

  std::optional<std::size_t> arity(std::string_view name) const;
  bool is_colour(std::string_view name) const { return colours_.count(std::string(name)) != 0; }
  const std::map<std::string, std::size_t>& functions() const { return functions_; }
  const std::set<std::string>& colours() const { return colours_; }

private:
  std::map<std::string, std::size_t> functions_;
  std::set<std::string> colours_;
};

}  // namespace stellar

#endif
