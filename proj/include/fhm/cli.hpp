#pragma once

// Command-line front end. Subcommands:
//   validate   --economy PATH [--allocation PATH]
//   check      --economy PATH --allocation PATH [--properties ir,ete,eene,sdeff,envy]
//   core       --economy PATH --allocation PATH --notion strong|weak [--max-size N]
//   reproduce  statement1|statement3 [--economy PATH]
//   find-core  --economy PATH [--schedule K --maxden D --seed S --tol T --output PATH]
//
// Global flags: --format text|structured. Reports go to stdout and are
// byte-identical for identical inputs, flags and seed; timing lines go to
// stderr. Exit codes: 0 success/member, 1 validation failure, 2 I/O error,
// 3 negative verdict (non-member, failed reproduction, property refuted),
// 4 solver/search failure.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fhm {

// FNV-1a 64-bit digest of a byte string, as 16 lowercase hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

// Runs one invocation; args excludes the program name. Reports are written
// to `out`, diagnostics and timings to `err`.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// main() adapter around cli_run(std::cout, std::cerr).
int cli_main(int argc, char** argv);

}  // namespace fhm
