#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "gkp/analytics.hpp"
#include "gkp/harness.hpp"

using namespace gkp;

namespace {

ExperimentConfig steane_config() {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::steane_stats;
    cfg.sigma_grid = {0.6};
    cfg.trials = 20000;
    cfg.master_seed = 42;
    return cfg;
}

const CellSummary* find_extra(const CellSummary& cell, const std::string& key, double* out) {
    for (const auto& kv : cell.extras) {
        if (kv.first == key) {
            *out = kv.second;
            return &cell;
        }
    }
    return nullptr;
}

double extra(const CellSummary& cell, const std::string& key) {
    double v = 0.0;
    REQUIRE(find_extra(cell, key, &v) != nullptr);
    return v;
}

}  // namespace

TEST_CASE("experiment and decoder names round-trip") {
    for (auto e : {Experiment::steane_stats, Experiment::repetition, Experiment::toric_ideal,
                   Experiment::toric_noisy, Experiment::mld_compare,
                   Experiment::double_measurement}) {
        CHECK(parse_experiment(to_string(e)) == e);
    }
    for (auto d : {DecoderKind::uniform, DecoderKind::weighted, DecoderKind::mld}) {
        CHECK(parse_decoder(to_string(d)) == d);
    }
    CHECK_THROWS_AS(parse_experiment("nope"), ConfigError);
    CHECK_THROWS_AS(parse_decoder("nope"), ConfigError);
}

TEST_CASE("validation names the offending field") {
    auto field_of = [](ExperimentConfig cfg) {
        try {
            validate_config(cfg);
        } catch (const ConfigError& e) {
            return e.field;
        }
        return std::string{};
    };

    ExperimentConfig cfg = steane_config();
    cfg.trials = 0;
    CHECK(field_of(cfg) == "trials");

    cfg = steane_config();
    cfg.sigma_grid = {};
    CHECK(field_of(cfg) == "sigma_grid");
    cfg.sigma_grid = {0.5, 0.5};
    CHECK(field_of(cfg) == "sigma_grid");
    cfg.sigma_grid = {0.6, 0.5};
    CHECK(field_of(cfg) == "sigma_grid");
    cfg.sigma_grid = {-0.1};
    CHECK(field_of(cfg) == "sigma_grid");

    cfg = steane_config();
    cfg.sigma2 = 0.2;
    cfg.sigma2_scale = 0.5;
    CHECK(field_of(cfg) == "sigma2");   // mutually exclusive pair

    cfg = steane_config();
    cfg.k = 11;
    CHECK(field_of(cfg) == "k");

    cfg = steane_config();
    cfg.threads = -1;
    CHECK(field_of(cfg) == "threads");

    cfg = steane_config();
    cfg.experiment = Experiment::toric_ideal;
    CHECK(field_of(cfg) == "L_grid");
    cfg.L_grid = {1};
    CHECK(field_of(cfg) == "L_grid");
    cfg.L_grid = {8, 8};
    CHECK(field_of(cfg) == "L_grid");

    // Exact decoding is capped to small lattices.
    cfg.L_grid = {4};
    cfg.decoder = DecoderKind::mld;
    CHECK(field_of(cfg) == "L_grid");
    cfg.decoder = DecoderKind::weighted;
    CHECK(field_of(cfg).empty());

    cfg = steane_config();
    cfg.experiment = Experiment::toric_noisy;
    cfg.L_grid = {4};
    cfg.sigma2 = 0.2;
    CHECK(field_of(cfg) == "p_c_grid");
    cfg.p_c_grid = {0.0, 1.5};
    CHECK(field_of(cfg) == "p_c_grid");
    cfg.p_c_grid = {0.0, 0.5};
    cfg.sigma2 = 0.0;
    CHECK(field_of(cfg) == "sigma2");   // measurement noise width required

    cfg = steane_config();
    cfg.experiment = Experiment::repetition;
    cfg.sigma2 = 0.3;
    CHECK(field_of(cfg) == "sigma2");   // perfect-ancilla model only

    cfg = steane_config();
    cfg.experiment = Experiment::double_measurement;
    CHECK(field_of(cfg) == "sigma2");
}

TEST_CASE("steane sweep reproduces the analytic rate and its annotations") {
    SweepSummary s = run_sweep(steane_config());
    REQUIRE(s.cells.size() == 1);
    const CellSummary& cell = s.cells[0];
    CHECK(cell.trials == 20000);
    CHECK(cell.sigma == 0.6);
    CHECK(cell.L == 0);
    CHECK_FALSE(s.crossing.has_value());

    RatePair rp(0.6);
    double analytic = 1.0 - average_success(rp);
    CHECK(extra(cell, "analytic_rate") == doctest::Approx(analytic).epsilon(1e-12));
    CHECK(extra(cell, "average_success") == doctest::Approx(average_success(rp)).epsilon(1e-12));
    CHECK(extra(cell, "success_rate_sd") == doctest::Approx(rate_variance(rp)).epsilon(1e-9));
    // Monte Carlo within 4.5 sigma of the analytic value.
    double se = std::sqrt(analytic * (1.0 - analytic) / 20000.0);
    CHECK(std::abs(cell.rate - analytic) < 4.5 * se);
    // The per-outcome predictions average to nearly the same number.
    CHECK(extra(cell, "predicted_rate") == doctest::Approx(cell.rate).epsilon(0.15));
    CHECK(cell.wilson.lo < cell.rate);
    CHECK(cell.wilson.hi > cell.rate);
}

TEST_CASE("sweep output is identical for any worker count") {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::toric_ideal;
    cfg.sigma_grid = {0.55, 0.6};
    cfg.L_grid = {2, 3};
    cfg.trials = 1500;
    cfg.master_seed = 7;
    cfg.decoder = DecoderKind::weighted;

    cfg.threads = 1;
    SweepSummary a = run_sweep(cfg);
    cfg.threads = 3;
    SweepSummary b = run_sweep(cfg);
    cfg.threads = 8;
    SweepSummary c = run_sweep(cfg);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(to_csv(a) == to_csv(c));
    CHECK(to_json(a) == to_json(b));
}

TEST_CASE("per-cell streams make cells independent of the grid") {
    // The sigma = 0.6 cell must produce the same counts whether or not
    // other sigmas run in the same sweep.
    ExperimentConfig solo = steane_config();
    ExperimentConfig both = steane_config();
    both.sigma_grid = {0.3, 0.6};
    SweepSummary a = run_sweep(solo);
    SweepSummary b = run_sweep(both);
    REQUIRE(b.cells.size() == 2);
    CHECK(b.cells[1].rng_cell == 1);
    ExperimentConfig shifted = steane_config();
    shifted.sigma_grid = {0.3, 0.6};
    SweepSummary c = run_sweep(shifted);
    CHECK(c.cells[1].failures == b.cells[1].failures);
    // Different rng_cell for the same sigma when the grid index moves.
    CHECK(a.cells[0].rng_cell == 0);
    CHECK(b.cells[1].sigma == a.cells[0].sigma);
}

TEST_CASE("csv layout is versioned and rectangular") {
    SweepSummary s = run_sweep(steane_config());
    std::string csv = to_csv(s);
    CHECK(csv.rfind("schema_version,experiment,cell_id,", 0) == 0);
    // Same number of commas on every line.
    std::vector<int> commas;
    int count = 0;
    for (char ch : csv) {
        if (ch == ',') ++count;
        if (ch == '\n') {
            commas.push_back(count);
            count = 0;
        }
    }
    REQUIRE(commas.size() == 2);
    CHECK(commas[0] == commas[1]);
}

TEST_CASE("config json round-trips") {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::toric_noisy;
    cfg.sigma_grid = {0.4, 0.45};
    cfg.sigma2_scale = 0.5;
    cfg.L_grid = {8, 12};
    cfg.trials = 5555;
    cfg.master_seed = 99;
    cfg.k = 2;
    cfg.p_c_grid = {0.0, 0.5, 0.9};
    cfg.decoder = DecoderKind::uniform;

    ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.experiment == cfg.experiment);
    CHECK(back.sigma_grid == cfg.sigma_grid);
    CHECK(back.sigma2 == cfg.sigma2);
    CHECK(back.sigma2_scale == cfg.sigma2_scale);
    CHECK(back.L_grid == cfg.L_grid);
    CHECK(back.trials == cfg.trials);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.k == cfg.k);
    CHECK(back.p_c_grid == cfg.p_c_grid);
    CHECK(back.decoder == cfg.decoder);
}

TEST_CASE("config parsing is strict about keys and types") {
    CHECK_THROWS_AS(config_from_json("not json"), ConfigError);
    CHECK_THROWS_AS(config_from_json("[1,2]"), ConfigError);
    try {
        config_from_json(R"({"experiment":"steane_stats","bogus":1})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "bogus");
    }
    try {
        config_from_json(R"({"trials":"many"})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "trials");
    }
}

TEST_CASE("summary json is accepted as a config") {
    SweepSummary s = run_sweep(steane_config());
    ExperimentConfig back = config_from_json(to_json(s));
    CHECK(back.experiment == Experiment::steane_stats);
    CHECK(back.sigma_grid == std::vector<double>{0.6});
    CHECK(back.trials == 20000);
    CHECK(back.master_seed == 42);
}

TEST_CASE("crossing detection on synthetic sweeps") {
    auto make = [](const std::vector<double>& sigmas, const std::vector<int>& Ls,
                   auto rate_fn) {
        SweepSummary s;
        s.config.experiment = Experiment::toric_ideal;
        s.config.sigma_grid = sigmas;
        s.config.L_grid = Ls;
        int id = 0;
        for (std::size_t si = 0; si < sigmas.size(); ++si) {
            for (std::size_t li = 0; li < Ls.size(); ++li) {
                CellSummary cell;
                cell.cell_id = id++;
                cell.sigma = sigmas[si];
                cell.L = Ls[li];
                cell.trials = 1000;
                cell.rate = rate_fn(sigmas[si], Ls[li]);
                s.cells.push_back(cell);
            }
        }
        return s;
    };

    // Rates that grow with L at every sigma: no crossing anywhere.
    SweepSummary rising = make({0.5, 0.55, 0.6}, {8, 12, 16},
                               [](double sig, int L) { return sig * L * 0.01; });
    CrossingResult none = detect_crossing(rising);
    CHECK_FALSE(none.found);
    CHECK(none.sigma_lo == 0.5);
    CHECK(none.sigma_hi == 0.6);

    // Engineered flip between 0.55 and 0.6: below, bigger lattices win.
    SweepSummary flip = make({0.5, 0.55, 0.6, 0.65}, {8, 16}, [](double sig, int L) {
        double dist = sig - 0.575;
        return 0.1 + dist * (L - 12) * 0.05;
    });
    CrossingResult found = detect_crossing(flip);
    CHECK(found.found);
    CHECK(found.sigma_lo == 0.55);
    CHECK(found.sigma_hi == 0.6);

    // Uses the extreme sizes only: the middle lattice cannot veto.
    SweepSummary noisy_mid = make({0.5, 0.55, 0.6}, {8, 12, 16}, [](double sig, int L) {
        if (L == 12) return 0.5;
        double dist = sig - 0.525;
        return 0.1 + dist * (L - 12) * 0.05;
    });
    CHECK(detect_crossing(noisy_mid).found);

    CHECK_THROWS_AS(detect_crossing(make({0.5, 0.55, 0.6}, {8}, [](double, int) { return 0.1; })),
                    std::invalid_argument);
    CHECK_THROWS_AS(detect_crossing(make({0.5, 0.55}, {8, 16}, [](double, int) { return 0.1; })),
                    std::invalid_argument);
}

TEST_CASE("toric sweep carries its crossing") {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::toric_ideal;
    cfg.sigma_grid = {0.3, 0.6, 0.9};
    cfg.L_grid = {2, 3};
    cfg.trials = 800;
    cfg.master_seed = 3;
    cfg.decoder = DecoderKind::uniform;
    SweepSummary s = run_sweep(cfg);
    REQUIRE(s.crossing.has_value());
    REQUIRE(s.cells.size() == 6);
    double first_rate = s.cells[0].rate;
    CHECK(first_rate >= 0.0);
    for (const CellSummary& cell : s.cells) {
        CHECK(cell.has_decoder);
        CHECK(cell.decoder == DecoderKind::uniform);
    }
}

TEST_CASE("noisy sweep emits one row per confidence cut") {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::toric_noisy;
    cfg.sigma_grid = {0.4};
    cfg.sigma2_scale = 0.5;
    cfg.L_grid = {4};
    cfg.trials = 300;
    cfg.master_seed = 12;
    cfg.p_c_grid = {0.0, 0.5, 0.9};
    SweepSummary s = run_sweep(cfg);
    REQUIRE(s.cells.size() == 3);
    CHECK_FALSE(s.crossing.has_value());
    // All rows of one execution cell share the same defect draws.
    long long shown0 = s.cells[0].trials;
    CHECK(shown0 > 0);
    for (const CellSummary& cell : s.cells) {
        CHECK(cell.rng_cell == 0);
        CHECK(extra(cell, "draws") == 300.0);
        CHECK(extra(cell, "R") == doctest::Approx(1.0 - cell.rate).epsilon(1e-12));
        double rt = extra(cell, "retained_true");
        double rf = extra(cell, "retained_false");
        double ct = extra(cell, "cleared_true");
        double cf = extra(cell, "cleared_false");
        CHECK(rt + rf + ct + cf == doctest::Approx(static_cast<double>(shown0)));
        CHECK(cell.failures == static_cast<long long>(rf + ct));
    }
    // p_c = 0 keeps everything.
    CHECK(extra(s.cells[0], "cleared_true") + extra(s.cells[0], "cleared_false") == 0.0);
}

TEST_CASE("double measurement cell reports the paired comparison") {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::double_measurement;
    cfg.sigma_grid = {0.6};
    cfg.sigma2 = 0.2;
    cfg.trials = 30000;
    cfg.master_seed = 5;
    SweepSummary s = run_sweep(cfg);
    REQUIRE(s.cells.size() == 1);
    const CellSummary& cell = s.cells[0];
    double single = extra(cell, "single_rate");
    CHECK(extra(cell, "improvement") == doctest::Approx(single - cell.rate).epsilon(1e-12));
    // Single-round error at the combined width, within 4.5 SE.
    double expect = 1.0 - average_success(RatePair(0.6, 0.2));
    double se = std::sqrt(expect * (1.0 - expect) / 30000.0);
    CHECK(std::abs(single - expect) < 4.5 * se);
}
