#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "gkp/decoder.hpp"
#include "gkp/matching.hpp"
#include "gkp/toric.hpp"

// Independent reference implementations, deliberately sharing no code with
// the production paths they check: the production matcher is checked against
// exhaustive recursion and a bitmask DP, Dijkstra against Floyd-Warshall,
// and the class-mass enumeration against a direct sweep of every pattern.
// Slow on purpose; test and diagnostic use only.
namespace gkp::validation {

// Exhaustive minimum-weight perfect matching by recursion over pairings of
// the lowest unmatched node, (n-1)!! leaves. Practical for n <= 12.
Matching brute_force_matching(int n, std::span<const double> w);

// Bitmask DP over subsets, O(2^n * n); returns the optimal weight only.
// Practical for n <= 18.
double subset_dp_matching_weight(int n, std::span<const double> w);

// All-pairs shortest-path distances between plaquettes by Floyd-Warshall on
// the dual lattice, flat P x P row-major.
std::vector<double> floyd_warshall_distances(const ToricLattice& lat,
                                             const EdgeWeights& weights);

// Minimum weight over every simple dual path from one plaquette to another,
// by depth-first enumeration with branch-and-bound pruning. Practical for
// L <= 3.
double exhaustive_shortest_path(const ToricLattice& lat, const EdgeWeights& weights,
                                int from, int to);

// Normalized homology-class masses by direct enumeration of every edge
// pattern with the representative's syndrome (2^(2 L^2) sweeps; L <= 3).
std::array<double, 4> enumerate_class_masses(const ToricLattice& lat,
                                             const ErrorPattern& representative,
                                             std::span<const double> rates);

// Battery of internal consistency checks; writes one line per check and
// returns true when every check passes.
bool run_all(std::ostream& out, unsigned seed = 20260822u);

}  // namespace gkp::validation
