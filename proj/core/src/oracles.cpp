#include "gkp/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gkp/analytics.hpp"
#include "gkp/constants.hpp"
#include "gkp/quadrature.hpp"
#include "gkp/rng.hpp"

namespace gkp::validation {

namespace {

void check_square(int n, std::span<const double> w, const char* who) {
    if (n < 0 || n % 2 != 0) throw std::invalid_argument(std::string(who) + ": node count must be even");
    if (static_cast<std::size_t>(n) * n != w.size())
        throw std::invalid_argument(std::string(who) + ": weight matrix size mismatch");
}

void brute_recurse(int n, std::span<const double> w, std::vector<int>& rem,
                   std::vector<std::pair<int, int>>& cur, double acc, Matching& best) {
    if (acc >= best.total_weight) return;
    if (rem.empty()) {
        best.total_weight = acc;
        best.pairs = cur;
        return;
    }
    const int a = rem.front();
    for (std::size_t j = 1; j < rem.size(); ++j) {
        const int b = rem[j];
        std::vector<int> next;
        next.reserve(rem.size() - 2);
        for (std::size_t t = 1; t < rem.size(); ++t)
            if (t != j) next.push_back(rem[t]);
        cur.emplace_back(a, b);
        brute_recurse(n, w, next, cur, acc + w[static_cast<std::size_t>(a) * n + b], best);
        cur.pop_back();
    }
}

}  // namespace

Matching brute_force_matching(int n, std::span<const double> w) {
    check_square(n, w, "brute_force_matching");
    Matching best;
    best.total_weight = std::numeric_limits<double>::infinity();
    if (n == 0) {
        best.total_weight = 0.0;
        return best;
    }
    std::vector<int> rem(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rem[static_cast<std::size_t>(i)] = i;
    std::vector<std::pair<int, int>> cur;
    brute_recurse(n, w, rem, cur, 0.0, best);
    return best;
}

double subset_dp_matching_weight(int n, std::span<const double> w) {
    check_square(n, w, "subset_dp_matching_weight");
    if (n == 0) return 0.0;
    if (n > 24) throw std::invalid_argument("subset_dp_matching_weight: n too large");
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::vector<double> dp(static_cast<std::size_t>(full) + 1,
                           std::numeric_limits<double>::infinity());
    dp[0] = 0.0;
    for (std::uint32_t s = 1; s <= full; ++s) {
        const int i = std::countr_zero(s);
        const std::uint32_t rest = s & (s - 1);  // s without node i
        double best = std::numeric_limits<double>::infinity();
        for (std::uint32_t m = rest; m != 0; m &= m - 1) {
            const int j = std::countr_zero(m);
            const double cand =
                dp[rest & ~(std::uint32_t{1} << j)] + w[static_cast<std::size_t>(i) * n + j];
            best = std::min(best, cand);
        }
        dp[s] = best;
    }
    return dp[full];
}

std::vector<double> floyd_warshall_distances(const ToricLattice& lat,
                                             const EdgeWeights& weights) {
    const int p = lat.num_plaquettes();
    std::vector<double> d(static_cast<std::size_t>(p) * p,
                          std::numeric_limits<double>::infinity());
    for (int i = 0; i < p; ++i) {
        d[static_cast<std::size_t>(i) * p + i] = 0.0;
        for (const auto& step : lat.dual_neighbors(i)) {
            auto& slot = d[static_cast<std::size_t>(i) * p + step.plaquette];
            slot = std::min(slot, weights.w[static_cast<std::size_t>(step.crossing_edge)]);
        }
    }
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                const double via = d[static_cast<std::size_t>(i) * p + k] +
                                   d[static_cast<std::size_t>(k) * p + j];
                auto& slot = d[static_cast<std::size_t>(i) * p + j];
                if (via < slot) slot = via;
            }
    return d;
}

namespace {

void path_dfs(const ToricLattice& lat, const EdgeWeights& weights, int at, int to,
              double acc, std::vector<std::uint8_t>& visited, double& best) {
    if (acc >= best) return;
    if (at == to) {
        best = acc;
        return;
    }
    visited[static_cast<std::size_t>(at)] = 1;
    for (const auto& step : lat.dual_neighbors(at)) {
        if (visited[static_cast<std::size_t>(step.plaquette)]) continue;
        path_dfs(lat, weights, step.plaquette, to,
                 acc + weights.w[static_cast<std::size_t>(step.crossing_edge)], visited, best);
    }
    visited[static_cast<std::size_t>(at)] = 0;
}

}  // namespace

double exhaustive_shortest_path(const ToricLattice& lat, const EdgeWeights& weights,
                                int from, int to) {
    if (lat.length() > 3)
        throw std::invalid_argument("exhaustive_shortest_path: L <= 3 only");
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(lat.num_plaquettes()), 0);
    double best = std::numeric_limits<double>::infinity();
    path_dfs(lat, weights, from, to, 0.0, visited, best);
    return best;
}

std::array<double, 4> enumerate_class_masses(const ToricLattice& lat,
                                             const ErrorPattern& representative,
                                             std::span<const double> rates) {
    const int ne = lat.num_edges();
    if (lat.length() > 3)
        throw std::invalid_argument("enumerate_class_masses: L <= 3 only");
    const SyndromeMeasurement target = ideal_syndrome(lat, representative);

    std::array<double, 4> mass{};
    ErrorPattern e(static_cast<std::size_t>(ne), 0);
    const std::uint32_t full = (ne >= 32) ? 0xffffffffu : ((std::uint32_t{1} << ne) - 1);
    for (std::uint32_t bits = 0;; ++bits) {
        for (int j = 0; j < ne; ++j) e[static_cast<std::size_t>(j)] = (bits >> j) & 1u;
        const SyndromeMeasurement s = ideal_syndrome(lat, e);
        if (s.defects == target.defects) {
            double p = 1.0;
            for (int j = 0; j < ne; ++j)
                p *= e[static_cast<std::size_t>(j)] ? rates[static_cast<std::size_t>(j)]
                                                    : 1.0 - rates[static_cast<std::size_t>(j)];
            const HomologyClass h = cut_parities(lat, e);
            mass[static_cast<std::size_t>((h.wraps_horizontal ? 1 : 0) +
                                          2 * (h.wraps_vertical ? 1 : 0))] += p;
        }
        if (bits == full) break;
    }
    const double z = mass[0] + mass[1] + mass[2] + mass[3];
    if (z > 0.0)
        for (auto& m : mass) m /= z;
    return mass;
}

namespace {

bool report(std::ostream& out, const char* name, bool ok) {
    out << (ok ? "ok   " : "FAIL ") << name << "\n";
    return ok;
}

bool check_cut_invariance(std::ostream& out) {
    bool ok = true;
    for (int L = 2; L <= 4; ++L) {
        const ToricLattice lat(L);
        for (int r = 0; r < L && ok; ++r)
            for (int c = 0; c < L && ok; ++c) {
                ErrorPattern e = empty_pattern(lat);
                for (int j : lat.vertex_star(r, c)) e[static_cast<std::size_t>(j)] ^= 1u;
                const SyndromeMeasurement s = ideal_syndrome(lat, e);
                for (auto d : s.defects) ok = ok && d == 0;
                ok = ok && logical_class(lat, e).trivial();
            }
        for (int c0 = 0; c0 < L && ok; ++c0) {
            ErrorPattern e = empty_pattern(lat);
            for (int r = 0; r < L; ++r)
                e[static_cast<std::size_t>(lat.horizontal_edge(r, c0))] ^= 1u;
            const HomologyClass h = logical_class(lat, e);
            ok = ok && h.wraps_horizontal && !h.wraps_vertical;
        }
        for (int r0 = 0; r0 < L && ok; ++r0) {
            ErrorPattern e = empty_pattern(lat);
            for (int c = 0; c < L; ++c)
                e[static_cast<std::size_t>(lat.vertical_edge(r0, c))] ^= 1u;
            const HomologyClass h = logical_class(lat, e);
            ok = ok && !h.wraps_horizontal && h.wraps_vertical;
        }
    }
    return report(out, "homology cuts invariant under stars, flipped by loops", ok);
}

bool check_matching_bruteforce(std::ostream& out, RandomStream& rng) {
    MinWeightMatcher matcher;
    bool ok = true;
    for (int trial = 0; trial < 300 && ok; ++trial) {
        const int n = 2 * (1 + static_cast<int>(rng.uniform() * 5.0));  // 2..10
        std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double x = (trial % 3 == 0)
                                     ? static_cast<double>(1 + static_cast<int>(rng.uniform() * 9.0))
                                     : rng.uniform(0.0, 10.0);
                w[static_cast<std::size_t>(i) * n + j] = x;
                w[static_cast<std::size_t>(j) * n + i] = x;
            }
        const Matching got = matcher.solve(n, w);
        const Matching want = brute_force_matching(n, w);
        ok = ok && std::abs(got.total_weight - want.total_weight) < 1e-6;
    }
    return report(out, "blossom matches exhaustive recursion (n <= 10)", ok);
}

bool check_matching_subset_dp(std::ostream& out, RandomStream& rng) {
    MinWeightMatcher matcher;
    bool ok = true;
    for (int trial = 0; trial < 40 && ok; ++trial) {
        const int n = 12 + 2 * static_cast<int>(rng.uniform() * 3.0);  // 12..16
        std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double x = rng.uniform(0.0, 30.0);
                w[static_cast<std::size_t>(i) * n + j] = x;
                w[static_cast<std::size_t>(j) * n + i] = x;
            }
        const Matching got = matcher.solve(n, w);
        const double want = subset_dp_matching_weight(n, w);
        ok = ok && std::abs(got.total_weight - want) < 1e-6;
    }
    return report(out, "blossom matches subset DP (n <= 16)", ok);
}

bool check_dijkstra_floyd(std::ostream& out, RandomStream& rng) {
    bool ok = true;
    for (int trial = 0; trial < 5 && ok; ++trial) {
        const int L = 3 + trial % 2;
        const ToricLattice lat(L);
        EdgeWeights ew;
        ew.w.resize(static_cast<std::size_t>(lat.num_edges()));
        for (auto& x : ew.w) x = rng.uniform(0.2, 3.0);
        std::vector<int> all(static_cast<std::size_t>(lat.num_plaquettes()));
        for (int p = 0; p < lat.num_plaquettes(); ++p) all[static_cast<std::size_t>(p)] = p;
        const DefectGraph graph(lat, all, ew);
        const std::vector<double> fw = floyd_warshall_distances(lat, ew);
        for (int i = 0; i < lat.num_plaquettes() && ok; ++i)
            for (int j = 0; j < lat.num_plaquettes() && ok; ++j)
                ok = std::abs(graph.distance(i, j) -
                              fw[static_cast<std::size_t>(i) * lat.num_plaquettes() + j]) < 1e-9;
    }
    return report(out, "Dijkstra distances match Floyd-Warshall", ok);
}

bool check_dijkstra_exhaustive(std::ostream& out, RandomStream& rng) {
    bool ok = true;
    for (int trial = 0; trial < 3 && ok; ++trial) {
        const ToricLattice lat(3);
        EdgeWeights ew;
        ew.w.resize(static_cast<std::size_t>(lat.num_edges()));
        for (auto& x : ew.w) x = rng.uniform(0.2, 3.0);
        std::vector<int> all(static_cast<std::size_t>(lat.num_plaquettes()));
        for (int p = 0; p < lat.num_plaquettes(); ++p) all[static_cast<std::size_t>(p)] = p;
        const DefectGraph graph(lat, all, ew);
        for (int i = 0; i < lat.num_plaquettes() && ok; ++i)
            for (int j = 0; j < lat.num_plaquettes() && ok; ++j) {
                const double want = i == j ? 0.0 : exhaustive_shortest_path(lat, ew, i, j);
                ok = std::abs(graph.distance(i, j) - want) < 1e-9;
            }
    }
    return report(out, "Dijkstra distances match exhaustive path enumeration (L = 3)", ok);
}

bool check_mwpm_clears_syndrome(std::ostream& out, RandomStream& rng) {
    MinWeightMatcher matcher;
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const int L = 4 + 2 * (trial % 3);
        const ToricLattice lat(L);
        EdgeWeights ew;
        ew.w.resize(static_cast<std::size_t>(lat.num_edges()));
        for (auto& x : ew.w) x = rng.uniform(0.5, 4.0);
        ErrorPattern e = empty_pattern(lat);
        for (auto& b : e) b = rng.uniform() < 0.1 ? 1 : 0;
        const SyndromeMeasurement s = ideal_syndrome(lat, e);
        ErrorPattern corr = decode_mwpm(lat, s, ew, matcher);
        xor_into(corr, e);
        const SyndromeMeasurement res = ideal_syndrome(lat, corr);
        for (auto d : res.defects) ok = ok && d == 0;
    }
    return report(out, "MWPM correction clears every random syndrome", ok);
}

bool check_mld_enumeration(std::ostream& out, RandomStream& rng) {
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
        const ToricLattice lat(2);
        std::vector<double> rates(static_cast<std::size_t>(lat.num_edges()));
        for (auto& r : rates) r = rng.uniform(0.02, 0.45);
        ErrorPattern rep = empty_pattern(lat);
        for (auto& b : rep) b = rng.uniform() < 0.3 ? 1 : 0;
        const auto fast = mld_class_probabilities(lat, rep, rates);
        const auto slow = enumerate_class_masses(lat, rep, rates);
        for (int s = 0; s < 4; ++s)
            ok = ok && std::abs(fast[static_cast<std::size_t>(s)] -
                                slow[static_cast<std::size_t>(s)]) < 1e-12;
    }
    return report(out, "MLD class masses match direct enumeration (L = 2)", ok);
}

bool check_bayes_consistency(std::ostream& out) {
    bool ok = true;
    for (const double sigma : {0.3, 0.45, 0.6}) {
        for (const int k : {1, 2, 3}) {
            const RatePair rp(sigma, 0.0, k);
            const double avg = average_success(rp);
            const double integral = integrate(
                [&](double q) { return conditional_success(q, rp) * outcome_density(q, rp); },
                -half_cell(), half_cell(), 1e-12);
            ok = ok && std::abs(avg - integral) < 1e-9;
        }
    }
    return report(out, "average success equals density-weighted conditional", ok);
}

}  // namespace

bool run_all(std::ostream& out, unsigned seed) {
    RandomStream rng(seed);
    bool ok = true;
    ok &= check_cut_invariance(out);
    ok &= check_matching_bruteforce(out, rng);
    ok &= check_matching_subset_dp(out, rng);
    ok &= check_dijkstra_floyd(out, rng);
    ok &= check_dijkstra_exhaustive(out, rng);
    ok &= check_mwpm_clears_syndrome(out, rng);
    ok &= check_mld_enumeration(out, rng);
    ok &= check_bayes_consistency(out);
    return ok;
}

}  // namespace gkp::validation
