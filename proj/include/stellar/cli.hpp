//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_CLI_HPP
#define STELLAR_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace stellar::cli {

/// 0 definitive success, 1 definitive failure, 2 unknown at the given fuel,
/// 3 usage, I/O or parse error.
enum ExitCode { exit_ok = 0, exit_failure = 1, exit_unknown = 2, exit_error = 3 };

/// Runs one subcommand; `args` excludes the program name. Input is a path,
/// `-` for standard input, or inline text through `-e`.
///
///   exec       execute a constellation
///   graph      unification graph of a constellation
///   mll-check  correctness of a proof-structure
///   mll-exec   cut elimination by execution against reduce_cut
///   tile       Wang encoding, or rectangle tilings with --width/--height
///   atam       aTAM encoding, or a seeded assembly with --grow
///   resolve    answers of a clause program
///   tm         space-time tiling of a Turing machine run
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stellar::cli

#endif
