#include "gkp/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "json.hpp"

#include "gkp/analytics.hpp"
#include "gkp/decoder.hpp"
#include "gkp/repetition.hpp"
#include "gkp/rng.hpp"
#include "gkp/version.hpp"

namespace gkp {

namespace {

using ordered_json = nlohmann::ordered_json;

// Trials are split into fixed chunks; each chunk is processed by one worker
// and reduced in chunk order, which pins the floating-point summation order
// independently of the worker count.
constexpr long long kChunkTrials = 1024;

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool lattice_experiment(Experiment e) noexcept {
    return e == Experiment::toric_ideal || e == Experiment::toric_noisy ||
           e == Experiment::mld_compare;
}

bool needs_ancilla_width(Experiment e) noexcept {
    return e == Experiment::toric_noisy || e == Experiment::double_measurement;
}

bool exact_decoder_selected(const ExperimentConfig& cfg) noexcept {
    return cfg.experiment == Experiment::mld_compare ||
           (cfg.experiment == Experiment::toric_ideal && cfg.decoder == DecoderKind::mld);
}

int resolve_threads(const ExperimentConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    if (const char* env = std::getenv("GKP_MC_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Element-wise accumulator: integer counters plus double sums with a fixed
// per-experiment layout.
struct Accum {
    std::vector<long long> counts;
    std::vector<double> sums;

    void reset(std::size_t nc, std::size_t ns) {
        counts.assign(nc, 0);
        sums.assign(ns, 0.0);
    }
    void add(const Accum& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += o.sums[i];
    }
};

struct Scratch {
    MinWeightMatcher matcher;
    ErrorPattern flips;
    std::vector<double> rates;
};

// Everything one grid cell's trials need, fixed before workers start.
struct TrialCtx {
    const ExperimentConfig* cfg = nullptr;
    double sigma = 0.0;
    double sigma2 = 0.0;
    int L = 0;
    std::optional<ToricLattice> lat;
    std::optional<RatePair> rp;  // (sigma, sigma2, k)
    double width = 0.0;          // rp->sigma()
    EdgeWeights uniform_w;
    std::size_t counts_size = 0;
    std::size_t sums_size = 0;
};

// toric_noisy counter layout: 4 slots per confidence cut
// [retained-genuine, retained-fake, cleared-genuine, cleared-fake],
// then one slot counting flipped data edges across all draws.
std::size_t noisy_flip_slot(const ExperimentConfig& cfg) {
    return 4 * cfg.p_c_grid.size();
}

void draw_edge_noise(const TrialCtx& ctx, RandomStream& rng, Scratch& s) {
    const int E = ctx.lat->num_edges();
    s.flips.assign(static_cast<std::size_t>(E), 0);
    s.rates.resize(static_cast<std::size_t>(E));
    for (int e = 0; e < E; ++e) {
        WrapResult w = wrap_to_fundamental(ctx.width * rng.normal());
        s.flips[static_cast<std::size_t>(e)] = (w.n & 1L) != 0 ? 1 : 0;
        s.rates[static_cast<std::size_t>(e)] = conditional_error(w.q_cor, *ctx.rp);
    }
}

void trial_steane_stats(const TrialCtx& ctx, RandomStream& rng, Accum& a) {
    WrapResult w = wrap_to_fundamental(ctx.width * rng.normal());
    a.counts[0] += (w.n & 1L) != 0;
    a.sums[0] += conditional_error(w.q_cor, *ctx.rp);
}

void trial_repetition(const TrialCtx& ctx, RandomStream& rng, Accum& a) {
    RepetitionState st = draw_repetition_state(ctx.sigma, ctx.cfg->k, rng);
    bool fail_maj = decode_repetition_trial(st, RepetitionMode::average);
    bool fail_ml = decode_repetition_trial(st, RepetitionMode::ml);
    a.counts[0] += fail_ml;
    a.counts[1] += fail_maj;
    a.counts[2] += fail_maj && !fail_ml;
    a.counts[3] += fail_ml && !fail_maj;
}

void trial_toric_ideal(const TrialCtx& ctx, RandomStream& rng, Scratch& s, Accum& a) {
    const ToricLattice& lat = *ctx.lat;
    draw_edge_noise(ctx, rng, s);
    SyndromeMeasurement syn = ideal_syndrome(lat, s.flips);
    long long ndef = 0;
    for (std::uint8_t d : syn.defects) ndef += d;

    ErrorPattern corr;
    switch (ctx.cfg->decoder) {
        case DecoderKind::uniform:
            corr = decode_mwpm(lat, syn, ctx.uniform_w, s.matcher);
            break;
        case DecoderKind::weighted:
            corr = decode_mwpm(lat, syn, edge_weights_from_rates(s.rates), s.matcher);
            break;
        case DecoderKind::mld:
            corr = decode_mld_exact(lat, syn, s.rates).correction;
            break;
    }
    xor_into(corr, s.flips);
    a.counts[0] += !logical_class(lat, corr).trivial();
    a.counts[1] += ndef;
}

void trial_mld_compare(const TrialCtx& ctx, RandomStream& rng, Scratch& s, Accum& a) {
    const ToricLattice& lat = *ctx.lat;
    draw_edge_noise(ctx, rng, s);
    SyndromeMeasurement syn = ideal_syndrome(lat, s.flips);

    ErrorPattern corr_mwpm = decode_mwpm(lat, syn, edge_weights_from_rates(s.rates), s.matcher);
    xor_into(corr_mwpm, s.flips);
    bool fail_mwpm = !logical_class(lat, corr_mwpm).trivial();

    ErrorPattern corr_mld = decode_mld_exact(lat, syn, s.rates).correction;
    xor_into(corr_mld, s.flips);
    bool fail_mld = !logical_class(lat, corr_mld).trivial();

    a.counts[0] += fail_mld;
    a.counts[1] += fail_mwpm;
    a.counts[2] += fail_mwpm && !fail_mld;
    a.counts[3] += fail_mld && !fail_mwpm;
}

void trial_toric_noisy(const TrialCtx& ctx, RandomStream& rng, Scratch& s, Accum& a) {
    const ToricLattice& lat = *ctx.lat;
    draw_edge_noise(ctx, rng, s);
    SyndromeMeasurement truth = ideal_syndrome(lat, s.flips);
    SyndromeMeasurement meas = noisy_syndrome(lat, s.flips, ctx.sigma2, rng, ctx.cfg->k);

    long long nflip = 0;
    for (std::uint8_t f : s.flips) nflip += f;
    a.counts[noisy_flip_slot(*ctx.cfg)] += nflip;

    const auto& cuts = ctx.cfg->p_c_grid;
    for (int p = 0; p < lat.num_plaquettes(); ++p) {
        if (!meas.defects[static_cast<std::size_t>(p)]) continue;
        double prior = defect_odd_prior(lat, p, s.rates);
        double post = defect_genuine_posterior(prior, meas.fail_prob[static_cast<std::size_t>(p)]);
        bool genuine = truth.defects[static_cast<std::size_t>(p)] != 0;
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            bool cleared = post <= cuts[i];
            std::size_t slot = 4 * i + (cleared ? (genuine ? 2u : 3u) : (genuine ? 0u : 1u));
            a.counts[slot] += 1;
        }
    }
}

// Stopping after the first round fails when the first measured sum wrapped
// an odd tooth; the two-round procedure instead corrects by the second
// outcome with the jointly decided parity, and fails when that decision
// misses the second sum's true parity.
void trial_double_measurement(const TrialCtx& ctx, RandomStream& rng, Accum& a) {
    double u0 = ctx.sigma * rng.normal();
    double u1 = ctx.sigma2 * rng.normal();
    double u2 = ctx.sigma2 * rng.normal();
    double u3 = ctx.sigma2 * rng.normal();
    WrapResult f1 = wrap_to_fundamental(u0 + u1);
    WrapResult f2 = wrap_to_fundamental(u0 + u2 + u3);

    bool single_fail = (f1.n & 1L) != 0;
    ParityDecision dec = double_measurement_decision(f1.q_cor, f2.q_cor, *ctx.rp);
    bool double_fail = dec.parity_even != ((f2.n & 1L) == 0);

    a.counts[0] += double_fail;
    a.counts[1] += single_fail;
    a.counts[2] += single_fail && !double_fail;
    a.counts[3] += double_fail && !single_fail;
}

void run_trial(const TrialCtx& ctx, RandomStream& rng, Scratch& s, Accum& a) {
    switch (ctx.cfg->experiment) {
        case Experiment::steane_stats: trial_steane_stats(ctx, rng, a); break;
        case Experiment::repetition: trial_repetition(ctx, rng, a); break;
        case Experiment::toric_ideal: trial_toric_ideal(ctx, rng, s, a); break;
        case Experiment::toric_noisy: trial_toric_noisy(ctx, rng, s, a); break;
        case Experiment::mld_compare: trial_mld_compare(ctx, rng, s, a); break;
        case Experiment::double_measurement: trial_double_measurement(ctx, rng, a); break;
    }
}

Accum run_cell(const TrialCtx& ctx, int rng_cell, int threads) {
    const long long trials = ctx.cfg->trials;
    const std::uint64_t seed = ctx.cfg->master_seed;
    const long long nchunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<Accum> partials(static_cast<std::size_t>(nchunks));
    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        Scratch scratch;
        try {
            for (;;) {
                long long c = next.fetch_add(1, std::memory_order_relaxed);
                if (c >= nchunks) break;
                Accum acc;
                acc.reset(ctx.counts_size, ctx.sums_size);
                const long long lo = c * kChunkTrials;
                const long long hi = std::min(trials, lo + kChunkTrials);
                for (long long t = lo; t < hi; ++t) {
                    RandomStream rng = RandomStream::for_trial(
                        seed, static_cast<std::uint64_t>(rng_cell), static_cast<std::uint64_t>(t));
                    run_trial(ctx, rng, scratch, acc);
                }
                partials[static_cast<std::size_t>(c)] = std::move(acc);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            next.store(nchunks, std::memory_order_relaxed);
        }
    };

    if (threads <= 1 || nchunks == 1) {
        worker();
    } else {
        int n = static_cast<int>(std::min<long long>(threads, nchunks));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    Accum total;
    total.reset(ctx.counts_size, ctx.sums_size);
    for (const Accum& part : partials) total.add(part);
    return total;
}

std::size_t counts_size_for(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case Experiment::steane_stats: return 1;
        case Experiment::repetition: return 4;
        case Experiment::toric_ideal: return 2;
        case Experiment::toric_noisy: return 4 * cfg.p_c_grid.size() + 1;
        case Experiment::mld_compare: return 4;
        case Experiment::double_measurement: return 4;
    }
    return 0;
}

std::size_t sums_size_for(const ExperimentConfig& cfg) {
    return cfg.experiment == Experiment::steane_stats ? 1 : 0;
}

CellSummary base_row(const TrialCtx& ctx, int rng_cell) {
    CellSummary row;
    row.rng_cell = rng_cell;
    row.sigma = ctx.sigma;
    row.sigma2 = ctx.sigma2;
    row.L = ctx.L;
    return row;
}

void fill_rate(CellSummary& row, long long failures, long long trials) {
    row.trials = trials;
    row.failures = failures;
    row.rate = trials > 0 ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
    row.wilson = wilson_interval(failures, trials);
}

// Expands one executed cell's accumulator into summary rows (one row,
// except toric_noisy which emits one per confidence cut).
void emit_rows(const TrialCtx& ctx, int rng_cell, const Accum& acc,
               std::vector<CellSummary>& rows) {
    const ExperimentConfig& cfg = *ctx.cfg;
    const double trials_d = static_cast<double>(cfg.trials);

    switch (cfg.experiment) {
        case Experiment::steane_stats: {
            CellSummary row = base_row(ctx, rng_cell);
            fill_rate(row, acc.counts[0], cfg.trials);
            const double avg = average_success(*ctx.rp);
            row.extras.emplace_back("predicted_rate", acc.sums[0] / trials_d);
            row.extras.emplace_back("analytic_rate", 1.0 - avg);
            row.extras.emplace_back("average_success", avg);
            row.extras.emplace_back("success_rate_sd", rate_variance(*ctx.rp));
            rows.push_back(std::move(row));
            break;
        }
        case Experiment::repetition: {
            CellSummary row = base_row(ctx, rng_cell);
            fill_rate(row, acc.counts[0], cfg.trials);
            McNemar mn = mcnemar_one_sided(acc.counts[2], acc.counts[3]);
            row.extras.emplace_back("majority_rate", static_cast<double>(acc.counts[1]) / trials_d);
            row.extras.emplace_back("majority_only", static_cast<double>(acc.counts[2]));
            row.extras.emplace_back("ml_only", static_cast<double>(acc.counts[3]));
            row.extras.emplace_back("mcnemar_z", mn.z);
            row.extras.emplace_back("mcnemar_p", mn.p_value);
            rows.push_back(std::move(row));
            break;
        }
        case Experiment::toric_ideal: {
            CellSummary row = base_row(ctx, rng_cell);
            row.has_decoder = true;
            row.decoder = cfg.decoder;
            fill_rate(row, acc.counts[0], cfg.trials);
            row.extras.emplace_back("mean_defects", static_cast<double>(acc.counts[1]) / trials_d);
            rows.push_back(std::move(row));
            break;
        }
        case Experiment::toric_noisy: {
            const long long flips = acc.counts[noisy_flip_slot(cfg)];
            const double edges = trials_d * static_cast<double>(ctx.lat->num_edges());
            for (std::size_t i = 0; i < cfg.p_c_grid.size(); ++i) {
                long long rt = acc.counts[4 * i + 0];
                long long rf = acc.counts[4 * i + 1];
                long long ct = acc.counts[4 * i + 2];
                long long cf = acc.counts[4 * i + 3];
                long long shown = rt + rf + ct + cf;
                CellSummary row = base_row(ctx, rng_cell);
                row.p_c = cfg.p_c_grid[i];
                fill_rate(row, rf + ct, shown);
                double r_val = shown > 0
                                   ? static_cast<double>(rt + cf) / static_cast<double>(shown)
                                   : 1.0;
                row.extras.emplace_back("R", r_val);
                row.extras.emplace_back("retained_true", static_cast<double>(rt));
                row.extras.emplace_back("retained_false", static_cast<double>(rf));
                row.extras.emplace_back("cleared_true", static_cast<double>(ct));
                row.extras.emplace_back("cleared_false", static_cast<double>(cf));
                row.extras.emplace_back("data_error_rate", static_cast<double>(flips) / edges);
                row.extras.emplace_back("draws", trials_d);
                rows.push_back(std::move(row));
            }
            break;
        }
        case Experiment::mld_compare: {
            CellSummary row = base_row(ctx, rng_cell);
            fill_rate(row, acc.counts[0], cfg.trials);
            McNemar mn = mcnemar_one_sided(acc.counts[2], acc.counts[3]);
            row.extras.emplace_back("mwpm_rate", static_cast<double>(acc.counts[1]) / trials_d);
            row.extras.emplace_back("mwpm_only", static_cast<double>(acc.counts[2]));
            row.extras.emplace_back("mld_only", static_cast<double>(acc.counts[3]));
            row.extras.emplace_back("mcnemar_z", mn.z);
            row.extras.emplace_back("mcnemar_p", mn.p_value);
            rows.push_back(std::move(row));
            break;
        }
        case Experiment::double_measurement: {
            CellSummary row = base_row(ctx, rng_cell);
            fill_rate(row, acc.counts[0], cfg.trials);
            McNemar mn = mcnemar_one_sided(acc.counts[2], acc.counts[3]);
            double single_rate = static_cast<double>(acc.counts[1]) / trials_d;
            row.extras.emplace_back("single_rate", single_rate);
            row.extras.emplace_back("improvement", single_rate - row.rate);
            row.extras.emplace_back("single_only", static_cast<double>(acc.counts[2]));
            row.extras.emplace_back("double_only", static_cast<double>(acc.counts[3]));
            row.extras.emplace_back("mcnemar_z", mn.z);
            row.extras.emplace_back("mcnemar_p", mn.p_value);
            rows.push_back(std::move(row));
            break;
        }
    }
}

ordered_json config_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["experiment"] = to_string(cfg.experiment);
    j["sigma_grid"] = cfg.sigma_grid;
    j["sigma2"] = cfg.sigma2;
    j["sigma2_scale"] = cfg.sigma2_scale;
    j["L_grid"] = cfg.L_grid;
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    j["k"] = cfg.k;
    j["p_c_grid"] = cfg.p_c_grid;
    j["decoder"] = to_string(cfg.decoder);
    return j;
}

template <typename T>
std::vector<T> number_array(const ordered_json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
    std::vector<T> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(key, "expected an array of numbers");
        out.push_back(e.get<T>());
    }
    return out;
}

}  // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::steane_stats: return "steane_stats";
        case Experiment::repetition: return "repetition";
        case Experiment::toric_ideal: return "toric_ideal";
        case Experiment::toric_noisy: return "toric_noisy";
        case Experiment::mld_compare: return "mld_compare";
        case Experiment::double_measurement: return "double_measurement";
    }
    return "unknown";
}

std::string to_string(DecoderKind d) {
    switch (d) {
        case DecoderKind::uniform: return "uniform";
        case DecoderKind::weighted: return "weighted";
        case DecoderKind::mld: return "mld";
    }
    return "unknown";
}

Experiment parse_experiment(const std::string& s) {
    if (s == "steane_stats") return Experiment::steane_stats;
    if (s == "repetition") return Experiment::repetition;
    if (s == "toric_ideal") return Experiment::toric_ideal;
    if (s == "toric_noisy") return Experiment::toric_noisy;
    if (s == "mld_compare") return Experiment::mld_compare;
    if (s == "double_measurement") return Experiment::double_measurement;
    throw ConfigError("experiment", "unknown experiment '" + s + "'");
}

DecoderKind parse_decoder(const std::string& s) {
    if (s == "uniform") return DecoderKind::uniform;
    if (s == "weighted") return DecoderKind::weighted;
    if (s == "mld") return DecoderKind::mld;
    throw ConfigError("decoder", "unknown decoder '" + s + "'");
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
    if (cfg.sigma_grid.empty()) throw ConfigError("sigma_grid", "must be non-empty");
    for (double s : cfg.sigma_grid)
        if (!std::isfinite(s) || !(s > 0.0))
            throw ConfigError("sigma_grid", "entries must be finite and > 0");
    for (std::size_t i = 1; i < cfg.sigma_grid.size(); ++i)
        if (!(cfg.sigma_grid[i] > cfg.sigma_grid[i - 1]))
            throw ConfigError("sigma_grid", "entries must be strictly increasing");
    if (!std::isfinite(cfg.sigma2) || cfg.sigma2 < 0.0)
        throw ConfigError("sigma2", "must be finite and >= 0");
    if (!std::isfinite(cfg.sigma2_scale) || cfg.sigma2_scale < 0.0)
        throw ConfigError("sigma2_scale", "must be finite and >= 0");
    if (cfg.sigma2 > 0.0 && cfg.sigma2_scale > 0.0)
        throw ConfigError("sigma2", "sigma2 and sigma2_scale are mutually exclusive");
    if (cfg.k < 1 || cfg.k > 8) throw ConfigError("k", "must be in [1, 8]");
    if (cfg.threads < 0) throw ConfigError("threads", "must be >= 0");

    if (lattice_experiment(cfg.experiment)) {
        if (cfg.L_grid.empty()) throw ConfigError("L_grid", "must be non-empty");
        for (int L : cfg.L_grid)
            if (L < 2) throw ConfigError("L_grid", "entries must be >= 2");
        for (std::size_t i = 1; i < cfg.L_grid.size(); ++i)
            if (cfg.L_grid[i] <= cfg.L_grid[i - 1])
                throw ConfigError("L_grid", "entries must be strictly increasing");
        if (exact_decoder_selected(cfg) && cfg.L_grid.back() > 3)
            throw ConfigError("L_grid", "the exact decoder enumerates classes only for L <= 3");
    }
    if (cfg.experiment == Experiment::toric_noisy) {
        if (cfg.p_c_grid.empty()) throw ConfigError("p_c_grid", "must be non-empty");
        for (double p : cfg.p_c_grid)
            if (!std::isfinite(p) || p < 0.0 || p > 1.0)
                throw ConfigError("p_c_grid", "entries must be in [0, 1]");
    }
    if (needs_ancilla_width(cfg.experiment) && cfg.sigma2 == 0.0 && cfg.sigma2_scale == 0.0)
        throw ConfigError("sigma2", "this experiment needs a positive ancilla width");
    if (cfg.experiment == Experiment::repetition && (cfg.sigma2 > 0.0 || cfg.sigma2_scale > 0.0))
        throw ConfigError("sigma2", "repetition uses a single combined width; leave sigma2 unset");
}

SweepSummary run_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const int threads = resolve_threads(cfg);
    const bool lattice = lattice_experiment(cfg.experiment);
    const std::size_t l_count = lattice ? cfg.L_grid.size() : 1;
    const std::size_t l_stride = std::max<std::size_t>(std::size_t{1}, cfg.L_grid.size());

    SweepSummary out;
    out.config = cfg;

    for (std::size_t si = 0; si < cfg.sigma_grid.size(); ++si) {
        for (std::size_t li = 0; li < l_count; ++li) {
            TrialCtx ctx;
            ctx.cfg = &cfg;
            ctx.sigma = cfg.sigma_grid[si];
            ctx.sigma2 = cfg.ancilla_sigma(ctx.sigma);
            ctx.counts_size = counts_size_for(cfg);
            ctx.sums_size = sums_size_for(cfg);
            ctx.rp.emplace(ctx.sigma, ctx.sigma2, cfg.k);
            ctx.width = ctx.rp->sigma();
            if (lattice) {
                ctx.L = cfg.L_grid[li];
                ctx.lat.emplace(ctx.L);
                if (cfg.experiment == Experiment::toric_ideal &&
                    cfg.decoder == DecoderKind::uniform)
                    ctx.uniform_w = uniform_weights(*ctx.lat);
            }
            const int rng_cell = static_cast<int>(si * l_stride + li);
            Accum acc = run_cell(ctx, rng_cell, threads);
            emit_rows(ctx, rng_cell, acc, out.cells);
        }
    }
    for (std::size_t i = 0; i < out.cells.size(); ++i)
        out.cells[i].cell_id = static_cast<int>(i);

    if (lattice && cfg.experiment != Experiment::toric_noisy && cfg.L_grid.size() >= 2 &&
        cfg.sigma_grid.size() >= 3)
        out.crossing = detect_crossing(out);
    return out;
}

CrossingResult detect_crossing(const SweepSummary& summary) {
    const ExperimentConfig& cfg = summary.config;
    if (!lattice_experiment(cfg.experiment) || cfg.experiment == Experiment::toric_noisy)
        throw std::invalid_argument("detect_crossing: needs a lattice sweep without cut expansion");
    if (cfg.L_grid.size() < 2) throw std::invalid_argument("detect_crossing: needs >= 2 sizes");
    if (cfg.sigma_grid.size() < 3)
        throw std::invalid_argument("detect_crossing: needs >= 3 sigma points");

    const int L_min = cfg.L_grid.front();
    const int L_max = cfg.L_grid.back();
    const std::size_t n = cfg.sigma_grid.size();
    std::vector<double> rate_min(n, -1.0), rate_max(n, -1.0);
    for (const CellSummary& cell : summary.cells) {
        if (cell.L != L_min && cell.L != L_max) continue;
        std::size_t si = n;
        for (std::size_t i = 0; i < n; ++i)
            if (cfg.sigma_grid[i] == cell.sigma) {
                si = i;
                break;
            }
        if (si == n) continue;
        (cell.L == L_min ? rate_min : rate_max)[si] = cell.rate;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (rate_min[i] < 0.0 || rate_max[i] < 0.0)
            throw std::invalid_argument("detect_crossing: missing grid cell");

    // Sign of rate(L_max) - rate(L_min): below threshold bigger lattices do
    // better (negative), above they do worse. The crossing is the first
    // adjacent pair where the sign flips.
    auto sgn = [](double d) { return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0); };
    CrossingResult res;
    res.found = false;
    res.sigma_lo = cfg.sigma_grid.front();
    res.sigma_hi = cfg.sigma_grid.back();
    int prev = sgn(rate_max[0] - rate_min[0]);
    for (std::size_t i = 1; i < n; ++i) {
        int cur = sgn(rate_max[i] - rate_min[i]);
        if ((prev != cur && prev != 0 && cur != 0) || (prev == 0 && cur != 0) ||
            (prev != 0 && cur == 0)) {
            res.found = true;
            res.sigma_lo = cfg.sigma_grid[i - 1];
            res.sigma_hi = cfg.sigma_grid[i];
            break;
        }
        prev = cur;
    }
    return res;
}

std::string to_csv(const SweepSummary& summary) {
    std::string out =
        "schema_version,experiment,cell_id,sigma,sigma2,L,decoder,p_c,trials,failures,rate,"
        "wilson_lo,wilson_hi";
    if (!summary.cells.empty())
        for (const auto& kv : summary.cells.front().extras) out += "," + kv.first;
    out += "\n";

    const std::string experiment = to_string(summary.config.experiment);
    for (const CellSummary& cell : summary.cells) {
        out += std::to_string(output_schema_version());
        out += ',';
        out += experiment;
        out += ',';
        out += std::to_string(cell.cell_id);
        out += ',';
        out += format_double(cell.sigma);
        out += ',';
        out += format_double(cell.sigma2);
        out += ',';
        if (cell.L > 0) out += std::to_string(cell.L);
        out += ',';
        if (cell.has_decoder) out += to_string(cell.decoder);
        out += ',';
        if (cell.p_c >= 0.0) out += format_double(cell.p_c);
        out += ',';
        out += std::to_string(cell.trials);
        out += ',';
        out += std::to_string(cell.failures);
        out += ',';
        out += format_double(cell.rate);
        out += ',';
        out += format_double(cell.wilson.lo);
        out += ',';
        out += format_double(cell.wilson.hi);
        for (const auto& kv : cell.extras) {
            out += ',';
            out += format_double(kv.second);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepSummary& summary) {
    ordered_json j;
    j["schema_version"] = output_schema_version();
    j["software_version"] = version_string();
    j["master_seed"] = summary.config.master_seed;
    j["config"] = config_json(summary.config);
    ordered_json cells = ordered_json::array();
    for (const CellSummary& cell : summary.cells) {
        ordered_json c;
        c["cell_id"] = cell.cell_id;
        c["rng_cell"] = cell.rng_cell;
        c["sigma"] = cell.sigma;
        c["sigma2"] = cell.sigma2;
        if (cell.L > 0) c["L"] = cell.L;
        if (cell.has_decoder) c["decoder"] = to_string(cell.decoder);
        if (cell.p_c >= 0.0) c["p_c"] = cell.p_c;
        c["trials"] = cell.trials;
        c["failures"] = cell.failures;
        c["rate"] = cell.rate;
        c["wilson_lo"] = cell.wilson.lo;
        c["wilson_hi"] = cell.wilson.hi;
        ordered_json extras;
        for (const auto& kv : cell.extras) extras[kv.first] = kv.second;
        c["extras"] = std::move(extras);
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    if (summary.crossing) {
        ordered_json c;
        c["found"] = summary.crossing->found;
        c["sigma_lo"] = summary.crossing->sigma_lo;
        c["sigma_hi"] = summary.crossing->sigma_hi;
        j["crossing"] = std::move(c);
    } else {
        j["crossing"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::string config_to_json(const ExperimentConfig& cfg) {
    return config_json(cfg).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ConfigError("json", e.what());
    }
    if (!j.is_object()) throw ConfigError("json", "top level must be an object");
    // A full sweep summary also serves as a config: the embedded echo is
    // reused and the surrounding report fields are ignored.
    if (j.contains("config") && j["config"].is_object()) j = j["config"];

    ExperimentConfig cfg;
    for (const auto& [key, val] : j.items()) {
        if (key == "experiment") {
            if (!val.is_string()) throw ConfigError(key, "expected a string");
            cfg.experiment = parse_experiment(val.get<std::string>());
        } else if (key == "sigma_grid") {
            cfg.sigma_grid = number_array<double>(val, key);
        } else if (key == "sigma2") {
            if (!val.is_number()) throw ConfigError(key, "expected a number");
            cfg.sigma2 = val.get<double>();
        } else if (key == "sigma2_scale") {
            if (!val.is_number()) throw ConfigError(key, "expected a number");
            cfg.sigma2_scale = val.get<double>();
        } else if (key == "L_grid") {
            if (!val.is_array()) throw ConfigError(key, "expected an array of integers");
            cfg.L_grid.clear();
            for (const auto& e : val) {
                if (!e.is_number_integer()) throw ConfigError(key, "expected an array of integers");
                cfg.L_grid.push_back(e.get<int>());
            }
        } else if (key == "trials") {
            if (!val.is_number_integer()) throw ConfigError(key, "expected an integer");
            cfg.trials = val.get<long long>();
        } else if (key == "master_seed") {
            if (!val.is_number_integer() || (val.is_number_integer() && !val.is_number_unsigned() &&
                                             val.get<long long>() < 0))
                throw ConfigError(key, "expected a non-negative integer");
            cfg.master_seed = val.get<std::uint64_t>();
        } else if (key == "k") {
            if (!val.is_number_integer()) throw ConfigError(key, "expected an integer");
            cfg.k = val.get<int>();
        } else if (key == "p_c_grid") {
            cfg.p_c_grid = number_array<double>(val, key);
        } else if (key == "decoder") {
            if (!val.is_string()) throw ConfigError(key, "expected a string");
            cfg.decoder = parse_decoder(val.get<std::string>());
        } else if (key == "threads") {
            if (!val.is_number_integer()) throw ConfigError(key, "expected an integer");
            cfg.threads = val.get<int>();
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    return cfg;
}

}  // namespace gkp
