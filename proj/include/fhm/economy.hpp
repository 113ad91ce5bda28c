#pragma once

// Housing markets with fractional endowments. An economy is n agents, n
// objects, a strict preference order per agent, and a doubly stochastic
// endowment matrix of exact rationals. Allocations are doubly stochastic
// matrices; an assignment is one agent's row (nonnegative, sums to 1).
//
// Agents and objects are 1-based in every file format and report string;
// internal storage is 0-based.

#include "fhm/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fhm {

using Assignment = RatVec;   // per-object shares, length n
using Allocation = RatMat;   // n rows, row i = assignment of agent i

struct Economy {
  int n = 0;
  // prefs[i][t] = 0-based object index ranked t-th best by agent i.
  std::vector<std::vector<int>> prefs;
  // endow[i][o] = agent i's endowed share of object o. Doubly stochastic.
  Allocation endow;

  // 0-based rank of object o in agent i's order (0 = favorite).
  int rank_of(int agent, int object) const { return rank_[agent][object]; }
  void rebuild_ranks();  // call after mutating prefs

 private:
  std::vector<std::vector<int>> rank_;
};

// Agents with identical preferences and identical endowments, grouped.
// Groups are sorted by smallest member; members ascend within a group.
struct EqualClassPartition {
  std::vector<std::vector<int>> groups;  // 0-based agent indices
  std::vector<int> class_of;             // agent -> index into groups
};

// Parse failure with 1-based line information.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

// One human-readable defect, 1-based indices. Empty report = valid.
using ValidationReport = std::vector<std::string>;

// --- economy files ---------------------------------------------------------
// Line 1: n. Lines 2..n+1: each agent's preference, n object names ("o3"),
// best first. Lines n+2..2n+1: endowment rows, n rationals "a/b" or "a".
// '#' starts a comment; blank lines are skipped. Serialization emits lowest
// terms and canonical object names, so parse(serialize(e)) == e.
Economy parse_economy(const std::string& text);
std::string serialize_economy(const Economy& e);

// --- allocation files ------------------------------------------------------
// n lines of n rationals. n is taken from the economy they are checked
// against; parse only enforces a square matrix.
Allocation parse_allocation(const std::string& text);
std::string serialize_allocation(const Allocation& p);

// Structural validation. For an economy: each preference a permutation of
// the objects, endowment rows/columns summing to 1, no negative entries.
// For an allocation: shape n x n, nonnegative, doubly stochastic.
ValidationReport validate(const Economy& e);
ValidationReport validate_allocation(const Economy& e, const Allocation& p);

bool is_assignment(const Assignment& row);
bool is_doubly_stochastic(const RatMat& m);
// True when every endowment entry is 0 or 1 (a permutation matrix).
bool is_integral_market(const Economy& e);

EqualClassPartition equal_class_partition(const Economy& e);

// The endowment matrix viewed as an allocation.
Allocation endowment_allocation(const Economy& e);

// Canonical object name for a 0-based index ("o1".."on") and its inverse.
std::string object_name(int index);
int parse_object_name(const std::string& name, int n);  // throws on bad name

}  // namespace fhm
