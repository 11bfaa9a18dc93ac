//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_TESTS_RANDOM_CONSTELLATION_HPP
#define STELLAR_TESTS_RANDOM_CONSTELLATION_HPP

#include "stellar/constellation.hpp"

#include <random>
#include <string>
#include <vector>

namespace oracle {

struct RandomShape {
  int max_stars = 5;
  int max_rays = 3;
  int max_depth = 2;
  std::vector<std::string> colours{"a", "b"};
  int unpolarised_percent = 25;
};

inline stellar::Term random_term(std::mt19937& rng, int depth) {
  using stellar::Term;
  std::uniform_int_distribution<int> pick(0, 5);
  int k = depth <= 0 ? pick(rng) % 3 : pick(rng);
  switch (k) {
    case 0: return Term::variable(rng() % 2 ? "X" : "Y");
    case 1: return Term::constant("c");
    case 2: return Term::constant("d");
    case 3: return Term::apply("f", {random_term(rng, depth - 1)});
    default: return Term::apply("g", {random_term(rng, depth - 1), random_term(rng, depth - 1)});
  }
}

inline stellar::Star random_star(std::mt19937& rng, const RandomShape& shape) {
  using namespace stellar;
  std::uniform_int_distribution<int> nrays(1, shape.max_rays);
  std::uniform_int_distribution<int> pct(0, 99);
  std::uniform_int_distribution<std::size_t> col(0, shape.colours.size() - 1);
  std::vector<Ray> rays;
  int n = nrays(rng);
  for (int i = 0; i < n; ++i) {
    Term t = random_term(rng, shape.max_depth - 1);
    if (pct(rng) < shape.unpolarised_percent) {
      rays.push_back(Ray::plain(Term::apply("p", {t})));
    } else {
      auto pol = rng() % 2 ? Polarity::positive : Polarity::negative;
      rays.push_back(Ray{pol, Term::apply(shape.colours[col(rng)], {t})});
    }
  }
  return Star(std::move(rays));
}

inline stellar::Constellation random_constellation(std::mt19937& rng, const RandomShape& shape = {}) {
  std::uniform_int_distribution<int> nstars(1, shape.max_stars);
  stellar::Constellation c;
  int n = nstars(rng);
  for (int i = 0; i < n; ++i) c.add(random_star(rng, shape));
  return c;
}

}  // namespace oracle

#endif
