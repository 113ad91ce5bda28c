#pragma once

// Scripted certification chains over constraint polytopes. A scenario is a
// line-oriented script executed against an economy; every directive runs and
// records exact LP values, and the chain succeeds only if every step does.
//
// Grammar ('#' comments, blank lines skipped; rows are n rationals):
//   constraints ALLOC | IR | EENE | IR+EENE
//   forced eq <functional> <rational>     functional: +/- [c*]p[i,oK] terms
//   forced le <functional> <rational>     passes iff exact max <= value
//   best-exchange {i,j,...} row ; row ...
//   conclude-equalities p[i] = row ; p[j] = row ...
//   expect infeasible
//   uniform-block {i,j,...} row ; row ... over <tags>
//
// best-exchange certifies that each listed bundle weakly sd-dominates every
// point of the current set in that member's row (all prefix gaps >= 0).
// conclude-equalities requires each row to be backed by a successful
// best-exchange bundle or to be entrywise forced (min = max). expect
// infeasible solves the current set plus all concluded rows and demands a
// verified Farkas certificate.

#include "fhm/core.hpp"
#include "fhm/economy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fhm {

struct ScenarioStep {
  std::string text;  // normalized directive
  bool ok = false;
  std::vector<std::string> detail;  // deterministic report lines

  // Typed payloads for downstream assertions (filled where meaningful).
  std::optional<Rat> bound_min, bound_max;
  std::vector<int> members;        // 0-based agents of exchange/block steps
  RatMat gaps;                     // per member, per prefix
  std::vector<int> strict_prefix;  // per member, -1 if none
  bool farkas_checked = false;
};

struct ScenarioReport {
  bool success = false;
  std::vector<ScenarioStep> steps;
};

// Parses and runs a script. Throws ParseError on malformed directives;
// domain-level failures (forced value mismatch, negative gap, feasible
// system) are reported as failing steps, not errors.
ScenarioReport run_scenario(const Economy& e, const std::string& script);

// The two bundled chains, run against a caller-supplied economy (defaults
// in the CLI are the bundled profiles). statement1: strong-core emptiness.
// statement3: weak core and equal-endowment no-envy are incompatible.
ScenarioReport certify_statement1(const Economy& e);
ScenarioReport certify_statement3(const Economy& e);

}  // namespace fhm
