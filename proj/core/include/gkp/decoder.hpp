#pragma once

#include <array>
#include <span>
#include <vector>

#include "gkp/matching.hpp"
#include "gkp/toric.hpp"

namespace gkp {

// Per-edge log-likelihood weights w = ln((1-p)/p). Rates are clamped to
// [1e-12, 1 - 1e-12] before taking the log, and the weight to [0, w_cap()]
// afterwards, so every weight is finite and nonnegative (rates above 1/2
// collapse to weight zero rather than going negative).
struct EdgeWeights {
    std::vector<double> w;
};

double rate_clamp_lo() noexcept;
double rate_clamp_hi() noexcept;
double weight_cap() noexcept;

EdgeWeights edge_weights_from_rates(std::span<const double> rates);
EdgeWeights uniform_weights(const ToricLattice& lat);

// All-pairs shortest paths between syndrome defects on the weighted dual
// lattice, one Dijkstra sweep per defect. Parent pointers are kept for every
// sweep so the edge set of any defect-to-defect geodesic can be replayed.
class DefectGraph {
public:
    DefectGraph(const ToricLattice& lat, std::span<const int> defects,
                const EdgeWeights& weights);

    int num_defects() const noexcept { return static_cast<int>(defects_.size()); }
    int defect_plaquette(int i) const { return defects_.at(i); }
    double distance(int i, int j) const;
    // Lattice edges crossed by the shortest path from defect i to defect j.
    std::vector<int> path_edges(int i, int j) const;
    // Flat num_defects^2 matrix of pairwise distances, row-major.
    const std::vector<double>& distance_matrix() const noexcept { return dist_; }

private:
    int num_plaquettes_;
    std::vector<int> defects_;
    std::vector<double> dist_;         // D x D
    std::vector<int> parent_edge_;     // D x P, lattice edge toward source, -1 unset
    std::vector<int> parent_plaq_;     // D x P, previous plaquette toward source
};

DefectGraph all_pairs_defect_paths(const ToricLattice& lat,
                                   const SyndromeMeasurement& syndrome,
                                   const EdgeWeights& weights);

// Minimum-weight perfect matching decoder: pairs up the defects of the
// syndrome along weighted geodesics and returns the correction pattern.
// An odd defect count is completed with one virtual defect sitting at a
// uniform distance beyond every finite pair; the defect it absorbs gets no
// correction path. The same scratch matcher can serve many calls.
ErrorPattern decode_mwpm(const ToricLattice& lat, const SyndromeMeasurement& syndrome,
                         const EdgeWeights& weights, MinWeightMatcher& matcher);
ErrorPattern decode_mwpm(const ToricLattice& lat, const SyndromeMeasurement& syndrome,
                         const EdgeWeights& weights);

// Prior probability that a plaquette hosts a genuine defect: odd number of
// data errors among its four incident edges.
double defect_odd_prior(const ToricLattice& lat, int plaquette,
                        std::span<const double> data_rates);
// Posterior probability that a reported defect is genuine rather than an
// artifact of the measurement shift, given that prior and the plaquette's
// conditional measurement failure rate.
double defect_genuine_posterior(double odd_prior, double fail_prob);

struct PrecorrectionResult {
    SyndromeMeasurement syndrome;  // defects with confident fakes cleared
    int cleared = 0;               // defects flipped off
    int retained = 0;              // defects kept
};

// Clears every measured defect whose posterior probability of being genuine
// is at or below the confidence cut p_c; more confident defects are kept.
PrecorrectionResult precorrect_defects(const ToricLattice& lat,
                                       const SyndromeMeasurement& syndrome,
                                       std::span<const double> data_rates, double p_c);

// Exact maximum-likelihood decoder for small lattices (L <= 3): sums the
// probability of every error pattern consistent with the syndrome, split by
// homology class (vertex-star deformations of a representative, shifted by
// the two winding loops), then corrects with a representative of the most
// massive class.
struct MldResult {
    ErrorPattern correction;           // representative of the chosen class
    std::array<double, 4> class_prob;  // normalized, indexed wh + 2 * wv
    int chosen = 0;                    // argmax index into class_prob
};

MldResult decode_mld_exact(const ToricLattice& lat, const SyndromeMeasurement& syndrome,
                           std::span<const double> rates);

// Normalized mass of the four homology classes of patterns with the same
// syndrome as the representative, indexed [wh + 2 * wv] by the absolute
// class of the pattern. Exposed for validation against direct enumeration.
std::array<double, 4> mld_class_probabilities(const ToricLattice& lat,
                                              const ErrorPattern& representative,
                                              std::span<const double> rates);

}  // namespace gkp
