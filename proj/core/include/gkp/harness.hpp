#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gkp/stats.hpp"

namespace gkp {

enum class Experiment {
    steane_stats,
    repetition,
    toric_ideal,
    toric_noisy,
    mld_compare,
    double_measurement,
};

enum class DecoderKind { uniform, weighted, mld };

std::string to_string(Experiment e);
std::string to_string(DecoderKind d);
Experiment parse_experiment(const std::string& s);
DecoderKind parse_decoder(const std::string& s);

struct ConfigError : std::runtime_error {
    ConfigError(std::string field_name, const std::string& message)
        : std::runtime_error(field_name + ": " + message), field(std::move(field_name)) {}
    std::string field;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::steane_stats;
    std::vector<double> sigma_grid;
    // Ancilla width: either absolute (sigma2) or proportional
    // (sigma2 = sigma2_scale * sigma); at most one may be nonzero.
    double sigma2 = 0.0;
    double sigma2_scale = 0.0;
    std::vector<int> L_grid;
    long long trials = 10000;
    std::uint64_t master_seed = 1;
    int k = 1;
    std::vector<double> p_c_grid;
    DecoderKind decoder = DecoderKind::weighted;
    // Worker count: 0 means the GKP_MC_THREADS environment variable, or
    // failing that the hardware thread count. Execution detail only; it is
    // excluded from the JSON echo because results do not depend on it.
    int threads = 0;

    double ancilla_sigma(double sigma) const noexcept {
        return sigma2 > 0.0 ? sigma2 : sigma2_scale * sigma;
    }
};

// Field-level validation; throws ConfigError naming the offending field.
void validate_config(const ExperimentConfig& cfg);

struct CellSummary {
    int cell_id = 0;       // row index in enumeration order
    int rng_cell = 0;      // RNG stream key: sigma index * |L_grid| + L index
    double sigma = 0.0;
    double sigma2 = 0.0;   // resolved ancilla width for this cell
    int L = 0;             // 0 when the experiment has no lattice
    bool has_decoder = false;
    DecoderKind decoder = DecoderKind::uniform;
    double p_c = -1.0;     // -1 when not applicable
    long long trials = 0;  // denominator of rate (see docs/formats.md per experiment)
    long long failures = 0;
    double rate = 0.0;
    Interval wilson{0.0, 0.0};
    // Experiment-specific columns, fixed order within one experiment.
    std::vector<std::pair<std::string, double>> extras;
};

struct CrossingResult {
    bool found = false;
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
};

struct SweepSummary {
    ExperimentConfig config;
    std::vector<CellSummary> cells;
    std::optional<CrossingResult> crossing;  // set for toric sweeps with >= 2 L, >= 3 sigma
};

// Runs trials for every grid cell with per-trial RNG streams keyed by
// (master_seed, rng_cell, trial_index) and fixed-size chunk reduction in
// chunk order, so the summary is identical for any worker count.
SweepSummary run_sweep(const ExperimentConfig& cfg);

// Smallest sigma-grid interval on which the ordering of logical rates
// between the smallest and largest lattice flips; found = false (and the
// whole grid as interval) when the ordering never flips. Uses only the
// extreme lattice sizes.
CrossingResult detect_crossing(const SweepSummary& summary);

// One row per cell, versioned header; doubles in shortest round-trip form.
std::string to_csv(const SweepSummary& summary);
// Full config echo plus per-cell stats, software version, and master seed.
std::string to_json(const SweepSummary& summary);

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

}  // namespace gkp
