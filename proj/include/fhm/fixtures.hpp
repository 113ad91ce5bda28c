#pragma once

// Bundled economies and certification scripts. The four-agent economy comes
// in two preference profiles over the same fractional endowment; profile A
// drives the strong-core emptiness chain (statement1), profile B the
// weak-core / equal-endowment-no-envy incompatibility chain (statement3).
// The same text is shipped as files under fixtures/ for CLI use.

namespace fhm::fixtures {

inline constexpr const char* kEconomyProfileA =
    "# four agents, two endowment classes, profile A\n"
    "4\n"
    "o2 o1 o4 o3\n"
    "o2 o1 o4 o3\n"
    "o1 o2 o3 o4\n"
    "o2 o1 o4 o3\n"
    "1/2 0 1/2 0\n"
    "1/2 0 1/2 0\n"
    "0 1/2 0 1/2\n"
    "0 1/2 0 1/2\n";

inline constexpr const char* kEconomyProfileB =
    "# four agents, two endowment classes, profile B\n"
    "4\n"
    "o2 o1 o4 o3\n"
    "o1 o2 o4 o3\n"
    "o1 o2 o3 o4\n"
    "o1 o2 o4 o3\n"
    "1/2 0 1/2 0\n"
    "1/2 0 1/2 0\n"
    "0 1/2 0 1/2\n"
    "0 1/2 0 1/2\n";

inline constexpr const char* kEconomyTtc3 =
    "# three-agent integral market: 1 and 2 swap, 3 keeps\n"
    "3\n"
    "o2 o1 o3\n"
    "o1 o2 o3\n"
    "o1 o2 o3\n"
    "1 0 0\n"
    "0 1 0\n"
    "0 0 1\n";

// Strong-core emptiness chain for profile A: individual rationality forces
// the top-two prefix of every row to 1/2 and pins agent 4 to its endowment;
// the pair exchanges {1,3} and {2,3} are per-prefix maximal over the IR
// polytope, so an unblocked allocation must equal the concluded rows, and
// that system is infeasible.
inline constexpr const char* kStatement1Script =
    "# strong-core emptiness chain\n"
    "constraints IR\n"
    "forced eq p[1,o1]+p[1,o2] 1/2\n"
    "forced eq p[2,o1]+p[2,o2] 1/2\n"
    "forced eq p[3,o1]+p[3,o2] 1/2\n"
    "forced eq p[4,o1]+p[4,o2] 1/2\n"
    "forced eq p[4,o1] 0\n"
    "forced eq p[4,o2] 1/2\n"
    "forced eq p[4,o3] 0\n"
    "forced eq p[4,o4] 1/2\n"
    "best-exchange {1,3} 0 1/2 0 1/2 ; 1/2 0 1/2 0\n"
    "best-exchange {2,3} 0 1/2 0 1/2 ; 1/2 0 1/2 0\n"
    "conclude-equalities p[1] = 0 1/2 0 1/2 ; p[2] = 0 1/2 0 1/2 ; "
    "p[3] = 1/2 0 1/2 0 ; p[4] = 0 1/2 0 1/2\n"
    "expect infeasible\n";

// Weak-core versus equal-endowment-no-envy chain for profile B: IR pins
// p[2,o1] and p[4,o4] to 1/2, no-envy then caps p[1,o4] and p[3,o1] at 1/4,
// and the {1,3} swap strongly blocks every point of the IR+EENE polytope
// with a uniform 1/4 margin.
inline constexpr const char* kStatement3Script =
    "# weak-core vs equal-endowment-no-envy chain\n"
    "constraints IR+EENE\n"
    "forced eq p[2,o1] 1/2\n"
    "forced eq p[4,o4] 1/2\n"
    "forced le p[1,o4] 1/4\n"
    "forced le p[3,o1] 1/4\n"
    "uniform-block {1,3} 0 1/2 0 1/2 ; 1/2 0 1/2 0 over IR+EENE\n";

}  // namespace fhm::fixtures
