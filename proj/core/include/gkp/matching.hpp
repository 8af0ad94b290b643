#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gkp {

struct Matching {
    std::vector<std::pair<int, int>> pairs;  // i < j, node indices
    double total_weight;
};

// Exact minimum-weight perfect matching on a complete graph, primal-dual
// blossom algorithm, O(n^3). Weights are quantized onto a 2^40 integer
// grid (relative resolution ~1e-12) so every dual comparison is exact and
// termination is unconditional; the reported total_weight is the sum of the
// original double weights of the chosen pairs.
//
// The solver is a class so its scratch arrays can be reused across calls;
// instances are independent (one per thread).
class MinWeightMatcher {
public:
    // w is a flat n*n symmetric matrix, nonnegative, zero diagonal.
    // n must be even (n = 0 gives an empty matching).
    Matching solve(int n, std::span<const double> w);

private:
    struct Edge {
        int u, v;
        std::int64_t w;
    };

    void ensure_capacity(int n);
    std::int64_t edge_delta(const Edge& e) const noexcept;
    void update_slack(int u, int x) noexcept;
    void set_slack(int x) noexcept;
    void push_queue(int x);
    void set_top(int x, int b);
    int blossom_position(int b, int xr);
    void set_match(int u, int v);
    void augment(int u, int v);
    int find_lca(int u, int v);
    void add_blossom(int u, int lca, int v);
    void expand_blossom(int b);
    bool on_found_edge(const Edge& e);
    bool grow_phase();

    int n_ = 0;    // real nodes, 1-indexed
    int n_x_ = 0;  // highest id in use (blossoms occupy n+1 .. 2n)
    std::vector<std::vector<Edge>> g_;
    std::vector<std::int64_t> lab_;
    std::vector<int> match_, slack_, top_, parent_, side_, vis_;
    std::vector<std::vector<int>> flower_, flower_from_;
    std::vector<int> queue_;
    std::size_t queue_head_ = 0;
    int lca_stamp_ = 0;
};

Matching min_weight_perfect_matching(int n, std::span<const double> w);

}  // namespace gkp
