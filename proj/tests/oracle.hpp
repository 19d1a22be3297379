#pragma once

#include "shopstab/dynamics.hpp"
#include "shopstab/measures.hpp"
#include "shopstab/model.hpp"

// Slow, obviously-correct references for the test suite. These never call
// into the production code paths they are used to check: the pair count is
// a literal double loop, the optimum an exhaustive enumeration with its own
// relaxation-based timing, and the instability sum a long-double Kahan
// accumulation in reverse order.
namespace shopstab::oracle {

// Pairs (a, b) with s_a < s_b and s'_a > s'_b, checked exhaustively.
// Refuses inputs above 200 operations.
long long brute_sequence_count(const PairedSchedules& p,
                               SequenceScope scope = SequenceScope::global);

// Enumerates every combination of per-machine processing orders, times each
// with fixed-point relaxation, and returns the best schedule with its
// objective value. Combinations forming a precedence cycle are skipped.
// Ties go to the first combination in enumeration order, which starts from
// the lexicographically smallest sequences. Refuses instances with more
// than 1e6 combinations.
std::pair<Schedule, double> brute_optimal_schedule(
    const std::shared_ptr<const ProblemInstance>& instance, UtilityKind objective);

double term_by_term_instability(const PairedSchedules& p, const InstabilityConfig& cfg);

}  // namespace shopstab::oracle
