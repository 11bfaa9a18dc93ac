//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_CONSTELLATION_HPP
#define STELLAR_CONSTELLATION_HPP

#include "stellar/term.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace stellar {

enum class Polarity { none, positive, negative };

char polarity_char(Polarity p);  // '+', '-' or 0
Polarity opposite(Polarity p);

/// A polarised ray stores its colour as the head symbol of `term`, so
/// underlying() is always `term`.
struct Ray {
  Polarity polarity = Polarity::none;
  Term term;

  static Ray plain(Term t) { return Ray{Polarity::none, std::move(t)}; }
  static Ray pos(std::string_view colour, std::vector<Term> args);
  static Ray neg(std::string_view colour, std::vector<Term> args);

  bool polarised() const { return polarity != Polarity::none; }
  int colour() const { return polarised() ? term.symbol() : -1; }
  const Term& underlying() const { return term; }

  std::string to_string() const;

  friend bool operator==(const Ray& a, const Ray& b) {
    return a.polarity == b.polarity && a.term == b.term;
  }
};

/// Non-empty multiset of rays. Slot indices are stable and used by diagrams.
class Star {
public:
  Star() = default;
  Star(std::initializer_list<Ray> rays);
  explicit Star(std::vector<Ray> rays);

  const std::vector<Ray>& rays() const { return rays_; }
  std::size_t size() const { return rays_.size(); }
  bool empty() const { return rays_.empty(); }
  const Ray& operator[](std::size_t i) const { return rays_[i]; }
  auto begin() const { return rays_.begin(); }
  auto end() const { return rays_.end(); }

  std::vector<Var> vars() const;
  Star map_terms(const std::function<Term(const Term&)>& f) const;

  /// Rendering with variables as written (tags visible).
  std::string to_string() const;

  friend bool operator==(const Star&, const Star&) = default;

private:
  std::vector<Ray> rays_;
};

/// Renames the variables of s to X, Y, Z, X1, ... in the namespace `tag`
/// following first occurrence.
Star rescope(const Star& s, int tag);

/// Finite multiset of stars; star variables are kept disjoint by
/// re-scoping each star into the namespace of its index on insertion.
class Constellation {
public:
  Constellation() = default;
  Constellation(std::initializer_list<Star> stars);
  explicit Constellation(std::vector<Star> stars);

  void add(const Star& s);
  const std::vector<Star>& stars() const { return stars_; }
  std::size_t size() const { return stars_.size(); }
  bool empty() const { return stars_.empty(); }
  const Star& operator[](std::size_t i) const { return stars_[i]; }
  auto begin() const { return stars_.begin(); }
  auto end() const { return stars_.end(); }

  bool variables_disjoint() const;
  std::set<std::string> colours() const;  // colour symbols of polarised rays
  Signature signature() const;            // throws Signature::Conflict

  /// Canonical text, one star per line, sorted; stable under renaming and
  /// permutation.
  std::string to_string() const;

private:
  std::vector<Star> stars_;
};

Constellation constellation_union(const Constellation& a, const Constellation& b);

/// Re-heads every ray with `colour` and `pol`: +d.t and -d.t become pol c.t
/// and a bare t becomes pol c.t. The colour is unary.
Constellation colourize(std::string_view colour, Polarity pol, const Constellation& sigma);
Star colourize(std::string_view colour, Polarity pol, const Star& s);

/// Drops the polarity and colour of rays coloured `colour`.
Constellation decolourize(std::string_view colour, const Constellation& sigma);

bool alpha_equivalent(const Star& a, const Star& b);
/// Multiset equality up to renaming inside each star.
bool alpha_equivalent(const Constellation& a, const Constellation& b);

/// Canonical rendering: rays ordered by polarity, colour and shape, ties
/// broken by the least variable numbering; variables printed X, Y, Z, X1...
std::string canonical_string(const Star& s);
std::string canonical_var_name(std::size_t index);

/// Generator for indexed families of stars together with a bound.
struct StarSchema {
  std::string name;
  std::function<Star(std::uint64_t)> instance;
};

Constellation instantiate_family(const StarSchema& schema, std::uint64_t bound);

/// [-nat.s^n(0), +nat.s^{n+1}(0)]
StarSchema nat_schema();
Term numeral(std::uint64_t n, std::string_view succ = "s", std::string_view zero = "0");
Term numeral_over(std::uint64_t n, const Term& base, std::string_view succ = "s");

}  // namespace stellar

#endif
