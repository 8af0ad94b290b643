#include <benchmark/benchmark.h>

#include <vector>

#include "gkp/analytics.hpp"
#include "gkp/decoder.hpp"
#include "gkp/matching.hpp"
#include "gkp/qubit.hpp"
#include "gkp/rng.hpp"
#include "gkp/toric.hpp"

namespace {

void bm_wrap(benchmark::State& state) {
    gkp::RandomStream rng(7);
    std::vector<double> xs(1024);
    for (auto& x : xs) x = 5.0 * rng.normal();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gkp::wrap_to_fundamental(xs[i]));
        i = (i + 1) & 1023;
    }
}
BENCHMARK(bm_wrap);

void bm_conditional_success(benchmark::State& state) {
    const gkp::RatePair rp(0.6, 0.0, static_cast<int>(state.range(0)));
    gkp::RandomStream rng(7);
    std::vector<double> qs(1024);
    for (auto& q : qs) q = gkp::wrap_to_fundamental(0.6 * rng.normal()).q_cor;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gkp::conditional_success(qs[i], rp));
        i = (i + 1) & 1023;
    }
}
BENCHMARK(bm_conditional_success)->Arg(1)->Arg(2);

void bm_average_success(benchmark::State& state) {
    const gkp::RatePair rp(0.6, 0.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(gkp::average_success(rp));
}
BENCHMARK(bm_average_success);

// One Dijkstra sweep per defect on a typical supercritical syndrome.
void bm_defect_graph(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const gkp::ToricLattice lat(L);
    gkp::RandomStream rng(11);
    gkp::ErrorPattern e = gkp::empty_pattern(lat);
    for (auto& b : e) b = rng.uniform() < 0.1 ? 1 : 0;
    const gkp::SyndromeMeasurement syn = gkp::ideal_syndrome(lat, e);
    gkp::EdgeWeights w;
    w.w.resize(static_cast<std::size_t>(lat.num_edges()));
    for (auto& x : w.w) x = rng.uniform(0.5, 4.0);
    for (auto _ : state) {
        gkp::DefectGraph g = gkp::all_pairs_defect_paths(lat, syn, w);
        benchmark::DoNotOptimize(g.num_defects());
    }
}
BENCHMARK(bm_defect_graph)->Arg(8)->Arg(12)->Arg(16);

void bm_matching(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    gkp::RandomStream rng(13);
    std::vector<double> w(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double x = rng.uniform(0.1, 10.0);
            w[static_cast<std::size_t>(i) * n + j] = x;
            w[static_cast<std::size_t>(j) * n + i] = x;
        }
    gkp::MinWeightMatcher matcher;
    for (auto _ : state) {
        gkp::Matching m = matcher.solve(n, w);
        benchmark::DoNotOptimize(m.total_weight);
    }
}
BENCHMARK(bm_matching)->Arg(16)->Arg(32)->Arg(64);

// End-to-end trial at the interesting width: draw edge noise, extract the
// syndrome, decode with rate-aware weights, classify the residual.
void bm_toric_trial(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const gkp::ToricLattice lat(L);
    const gkp::RatePair rp(0.6, 0.0, 1);
    const double width = rp.sigma();
    gkp::MinWeightMatcher matcher;
    std::uint64_t trial = 0;
    for (auto _ : state) {
        gkp::RandomStream rng = gkp::RandomStream::for_trial(99, 0, trial++);
        gkp::ErrorPattern flips = gkp::empty_pattern(lat);
        std::vector<double> rates(static_cast<std::size_t>(lat.num_edges()));
        for (int e = 0; e < lat.num_edges(); ++e) {
            const gkp::WrapResult w = gkp::wrap_to_fundamental(width * rng.normal());
            flips[static_cast<std::size_t>(e)] = (w.n & 1L) != 0 ? 1 : 0;
            rates[static_cast<std::size_t>(e)] = gkp::conditional_error(w.q_cor, rp);
        }
        const gkp::SyndromeMeasurement syn = gkp::ideal_syndrome(lat, flips);
        gkp::ErrorPattern corr =
            gkp::decode_mwpm(lat, syn, gkp::edge_weights_from_rates(rates), matcher);
        gkp::xor_into(corr, flips);
        benchmark::DoNotOptimize(gkp::logical_class(lat, corr).trivial());
    }
}
BENCHMARK(bm_toric_trial)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
