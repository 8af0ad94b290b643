#include "gkp/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "gkp/toric.hpp"

namespace gkp {

namespace {

constexpr double kRateLo = 1e-12;
constexpr double kRateHi = 1.0 - 1e-12;
const double kWeightCap = std::log((1.0 - kRateLo) / kRateLo);

}  // namespace

double rate_clamp_lo() noexcept { return kRateLo; }
double rate_clamp_hi() noexcept { return kRateHi; }
double weight_cap() noexcept { return kWeightCap; }

EdgeWeights edge_weights_from_rates(std::span<const double> rates) {
    EdgeWeights ew;
    ew.w.resize(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double p = std::clamp(rates[i], kRateLo, kRateHi);
        const double w = std::log((1.0 - p) / p);
        ew.w[i] = std::clamp(w, 0.0, kWeightCap);
    }
    return ew;
}

EdgeWeights uniform_weights(const ToricLattice& lat) {
    EdgeWeights ew;
    ew.w.assign(static_cast<std::size_t>(lat.num_edges()), 1.0);
    return ew;
}

DefectGraph::DefectGraph(const ToricLattice& lat, std::span<const int> defects,
                         const EdgeWeights& weights)
    : num_plaquettes_(lat.num_plaquettes()), defects_(defects.begin(), defects.end()) {
    if (static_cast<int>(weights.w.size()) != lat.num_edges())
        throw std::invalid_argument("DefectGraph: weight vector size mismatch");
    const int d = num_defects();
    const int np = num_plaquettes_;
    dist_.assign(static_cast<std::size_t>(d) * d, 0.0);
    parent_edge_.assign(static_cast<std::size_t>(d) * np, -1);
    parent_plaq_.assign(static_cast<std::size_t>(d) * np, -1);

    std::vector<double> node_dist(static_cast<std::size_t>(np));
    std::vector<std::uint8_t> settled(static_cast<std::size_t>(np));
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

    for (int i = 0; i < d; ++i) {
        std::fill(node_dist.begin(), node_dist.end(),
                  std::numeric_limits<double>::infinity());
        std::fill(settled.begin(), settled.end(), std::uint8_t{0});
        int* pe = parent_edge_.data() + static_cast<std::size_t>(i) * np;
        int* pp = parent_plaq_.data() + static_cast<std::size_t>(i) * np;

        const int src = defects_[static_cast<std::size_t>(i)];
        node_dist[static_cast<std::size_t>(src)] = 0.0;
        heap.emplace(0.0, src);
        while (!heap.empty()) {
            const auto [du, u] = heap.top();
            heap.pop();
            if (settled[static_cast<std::size_t>(u)]) continue;
            settled[static_cast<std::size_t>(u)] = 1;
            for (const auto& step : lat.dual_neighbors(u)) {
                const double nd = du + weights.w[static_cast<std::size_t>(step.crossing_edge)];
                if (nd < node_dist[static_cast<std::size_t>(step.plaquette)]) {
                    node_dist[static_cast<std::size_t>(step.plaquette)] = nd;
                    pe[step.plaquette] = step.crossing_edge;
                    pp[step.plaquette] = u;
                    heap.emplace(nd, step.plaquette);
                }
            }
        }
        for (int j = 0; j < d; ++j)
            dist_[static_cast<std::size_t>(i) * d + j] =
                node_dist[static_cast<std::size_t>(defects_[static_cast<std::size_t>(j)])];
    }
    // Opposite sweeps can disagree in the last ulp (summation order); the
    // matcher needs one symmetric matrix, so the lower-index sweep wins.
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            dist_[static_cast<std::size_t>(j) * d + i] =
                dist_[static_cast<std::size_t>(i) * d + j];
}

double DefectGraph::distance(int i, int j) const {
    const int d = num_defects();
    if (i < 0 || j < 0 || i >= d || j >= d)
        throw std::out_of_range("DefectGraph::distance: index out of range");
    return dist_[static_cast<std::size_t>(i) * d + j];
}

std::vector<int> DefectGraph::path_edges(int i, int j) const {
    const int d = num_defects();
    if (i < 0 || j < 0 || i >= d || j >= d)
        throw std::out_of_range("DefectGraph::path_edges: index out of range");
    std::vector<int> edges;
    if (i == j) return edges;
    // Replay j's walk back to i through i's parent forest; using the
    // lower-index forest keeps path_edges(i, j) and path_edges(j, i)
    // identical.
    const int src_sweep = std::min(i, j);
    const int from = std::max(i, j);
    const int* pe = parent_edge_.data() + static_cast<std::size_t>(src_sweep) * num_plaquettes_;
    const int* pp = parent_plaq_.data() + static_cast<std::size_t>(src_sweep) * num_plaquettes_;
    const int src = defects_[static_cast<std::size_t>(src_sweep)];
    int cur = defects_[static_cast<std::size_t>(from)];
    int guard = 0;
    while (cur != src) {
        if (pe[cur] < 0 || ++guard > num_plaquettes_)
            throw std::logic_error("DefectGraph::path_edges: broken parent chain");
        edges.push_back(pe[cur]);
        cur = pp[cur];
    }
    return edges;
}

DefectGraph all_pairs_defect_paths(const ToricLattice& lat,
                                   const SyndromeMeasurement& syndrome,
                                   const EdgeWeights& weights) {
    std::vector<int> defects;
    for (int p = 0; p < lat.num_plaquettes(); ++p)
        if (syndrome.defects[static_cast<std::size_t>(p)]) defects.push_back(p);
    return DefectGraph(lat, defects, weights);
}

ErrorPattern decode_mwpm(const ToricLattice& lat, const SyndromeMeasurement& syndrome,
                         const EdgeWeights& weights, MinWeightMatcher& matcher) {
    ErrorPattern correction = empty_pattern(lat);
    const DefectGraph graph = all_pairs_defect_paths(lat, syndrome, weights);
    const int d = graph.num_defects();
    if (d == 0) return correction;

    const bool odd = (d % 2) != 0;
    const int n = odd ? d + 1 : d;
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    double far = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double dij = graph.distance(i, j);
            w[static_cast<std::size_t>(i) * n + j] = dij;
            far = std::max(far, dij);
        }
    if (odd) {
        // One virtual defect, equidistant beyond every finite pair; whoever
        // it absorbs is left uncorrected.
        const double v = far + 1.0;
        for (int i = 0; i < d; ++i) {
            w[static_cast<std::size_t>(i) * n + d] = v;
            w[static_cast<std::size_t>(d) * n + i] = v;
        }
    }

    const Matching m = matcher.solve(n, w);
    for (const auto& [a, b] : m.pairs) {
        if (b >= d) continue;  // virtual partner
        for (int e : graph.path_edges(a, b)) correction[static_cast<std::size_t>(e)] ^= 1u;
    }
    return correction;
}

ErrorPattern decode_mwpm(const ToricLattice& lat, const SyndromeMeasurement& syndrome,
                         const EdgeWeights& weights) {
    MinWeightMatcher matcher;
    return decode_mwpm(lat, syndrome, weights, matcher);
}

double defect_odd_prior(const ToricLattice& lat, int plaquette,
                        std::span<const double> data_rates) {
    if (static_cast<int>(data_rates.size()) != lat.num_edges())
        throw std::invalid_argument("defect_odd_prior: rate vector size mismatch");
    double prod = 1.0;
    for (int e : lat.plaquette_support(plaquette))
        prod *= 1.0 - 2.0 * data_rates[static_cast<std::size_t>(e)];
    return 0.5 * (1.0 - prod);
}

double defect_genuine_posterior(double odd_prior, double fail_prob) {
    const double genuine = odd_prior * (1.0 - fail_prob);
    const double spurious = (1.0 - odd_prior) * fail_prob;
    const double total = genuine + spurious;
    if (total <= 0.0) return 1.0;  // a shown defect with no explanation: keep it
    return genuine / total;
}

PrecorrectionResult precorrect_defects(const ToricLattice& lat,
                                       const SyndromeMeasurement& syndrome,
                                       std::span<const double> data_rates, double p_c) {
    if (syndrome.fail_prob.empty())
        throw std::invalid_argument("precorrect_defects: syndrome carries no failure probabilities");
    PrecorrectionResult result;
    result.syndrome = syndrome;
    for (int p = 0; p < lat.num_plaquettes(); ++p) {
        if (!syndrome.defects[static_cast<std::size_t>(p)]) continue;
        const double prior = defect_odd_prior(lat, p, data_rates);
        const double post =
            defect_genuine_posterior(prior, syndrome.fail_prob[static_cast<std::size_t>(p)]);
        if (post <= p_c) {
            result.syndrome.defects[static_cast<std::size_t>(p)] = 0;
            ++result.cleared;
        } else {
            ++result.retained;
        }
    }
    return result;
}

namespace {

double pattern_probability(const ErrorPattern& e, std::span<const double> rates) {
    double p = 1.0;
    for (std::size_t j = 0; j < e.size(); ++j)
        p *= e[j] ? rates[j] : 1.0 - rates[j];
    return p;
}

}  // namespace

std::array<double, 4> mld_class_probabilities(const ToricLattice& lat,
                                              const ErrorPattern& representative,
                                              std::span<const double> rates) {
    const int L = lat.length();
    if (L > 3)
        throw std::invalid_argument("mld_class_probabilities: exact enumeration limited to L <= 3");
    if (static_cast<int>(rates.size()) != lat.num_edges())
        throw std::invalid_argument("mld_class_probabilities: rate vector size mismatch");

    // Winding-loop shifts between the four classes.
    ErrorPattern loop_h(static_cast<std::size_t>(lat.num_edges()), 0);
    ErrorPattern loop_v(static_cast<std::size_t>(lat.num_edges()), 0);
    for (int r = 0; r < L; ++r) loop_h[static_cast<std::size_t>(lat.horizontal_edge(r, 0))] = 1;
    for (int c = 0; c < L; ++c) loop_v[static_cast<std::size_t>(lat.vertical_edge(0, c))] = 1;

    const HomologyClass base = cut_parities(lat, representative);

    // Gray-code walk over all combinations of the independent vertex stars
    // (all but the last; their product is the identity).
    const int n_stars = L * L - 1;
    std::array<ErrorPattern, 4> pat;
    pat[0] = representative;
    pat[1] = representative;
    xor_into(pat[1], loop_h);
    pat[2] = representative;
    xor_into(pat[2], loop_v);
    pat[3] = representative;
    xor_into(pat[3], loop_h);
    xor_into(pat[3], loop_v);

    std::array<double, 4> rel_mass{};  // indexed by shift applied to the representative
    for (std::uint32_t it = 0;; ++it) {
        for (int s = 0; s < 4; ++s) rel_mass[static_cast<std::size_t>(s)] +=
            pattern_probability(pat[static_cast<std::size_t>(s)], rates);
        if (it + 1 >= (std::uint32_t{1} << n_stars)) break;
        // Toggle the star whose bit flips between consecutive Gray codes.
        const std::uint32_t g0 = it ^ (it >> 1);
        const std::uint32_t g1 = (it + 1) ^ ((it + 1) >> 1);
        int star = 0;
        for (std::uint32_t diff = g0 ^ g1; (diff >>= 1) != 0;) ++star;
        const auto edges = lat.vertex_star(star / L, star % L);
        for (auto& p : pat)
            for (int e : edges) p[static_cast<std::size_t>(e)] ^= 1u;
    }

    // Map relative shifts to absolute classes: shift 1 flips wh, shift 2
    // flips wv.
    std::array<double, 4> mass{};
    const int base_idx = (base.wraps_horizontal ? 1 : 0) + 2 * (base.wraps_vertical ? 1 : 0);
    for (int s = 0; s < 4; ++s) mass[static_cast<std::size_t>(base_idx ^ s)] =
        rel_mass[static_cast<std::size_t>(s)];

    double z = mass[0] + mass[1] + mass[2] + mass[3];
    if (z <= 0.0) {
        // Degenerate rates (all zero or one); fall back to uniform.
        return {0.25, 0.25, 0.25, 0.25};
    }
    for (auto& m : mass) m /= z;
    return mass;
}

MldResult decode_mld_exact(const ToricLattice& lat, const SyndromeMeasurement& syndrome,
                           std::span<const double> rates) {
    MldResult result;
    // Any pattern with the right syndrome serves as representative.
    const EdgeWeights uw = uniform_weights(lat);
    ErrorPattern rep = decode_mwpm(lat, syndrome, uw);
    result.class_prob = mld_class_probabilities(lat, rep, rates);
    int best = 0;
    for (int s = 1; s < 4; ++s)
        if (result.class_prob[static_cast<std::size_t>(s)] >
            result.class_prob[static_cast<std::size_t>(best)])
            best = s;
    result.chosen = best;

    const HomologyClass base = cut_parities(lat, rep);
    const int base_idx = (base.wraps_horizontal ? 1 : 0) + 2 * (base.wraps_vertical ? 1 : 0);
    const int shift = base_idx ^ best;
    const int L = lat.length();
    if (shift & 1)
        for (int r = 0; r < L; ++r)
            rep[static_cast<std::size_t>(lat.horizontal_edge(r, 0))] ^= 1u;
    if (shift & 2)
        for (int c = 0; c < L; ++c)
            rep[static_cast<std::size_t>(lat.vertical_edge(0, c))] ^= 1u;
    result.correction = std::move(rep);
    return result;
}

}  // namespace gkp
