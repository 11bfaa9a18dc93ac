//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_TEXT_FORMAT_HPP
#define STELLAR_TEXT_FORMAT_HPP

#include "stellar/constellation.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace stellar {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Identifiers starting with an uppercase letter or '?' are variables.
Term parse_term(std::string_view src);
Ray parse_ray(std::string_view src);
Star parse_star(std::string_view src);

/// Stars `[r1, ..., rn]` separated by ';' or newlines; '#' starts a comment.
/// The signature is inferred and arity conflicts raise Signature::Conflict.
Constellation parse_constellation(std::string_view src);

/// Canonical text; reparses to an alpha-equivalent constellation.
std::string serialize(const Constellation& c);

nlohmann::json term_to_json(const Term& t);
Term term_from_json(const nlohmann::json& j);
nlohmann::json star_to_json(const Star& s);
nlohmann::json constellation_to_json(const Constellation& c);
Constellation constellation_from_json(const nlohmann::json& j);

}  // namespace stellar

#endif
