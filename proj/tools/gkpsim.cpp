#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gkp/analytics.hpp"
#include "gkp/constants.hpp"
#include "gkp/harness.hpp"
#include "gkp/oracles.hpp"
#include "gkp/version.hpp"

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

struct CommonFlags {
    std::string config_path;
    std::vector<double> sigma;
    double sigma2 = 0.0;
    double sigma2_scale = 0.0;
    std::vector<int> sizes;
    long long trials = 0;
    std::uint64_t seed = 0;
    int k = 1;
    std::string decoder;
    std::vector<double> pc;
    int threads = 0;
    std::string csv_path;
    std::string json_path;
    bool compare = false;
};

void add_common_options(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config to load first; flags override it");
    cmd->add_option("--sigma", f.sigma, "data shift widths to sweep")->delimiter(',');
    cmd->add_option("--sigma2", f.sigma2, "absolute ancilla shift width");
    cmd->add_option("--sigma2-scale", f.sigma2_scale, "ancilla width as a multiple of sigma");
    cmd->add_option("-L,--size", f.sizes, "lattice sizes to sweep")->delimiter(',');
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per grid cell");
    cmd->add_option("--seed", f.seed, "master seed for the per-trial streams");
    cmd->add_option("--k", f.k, "tooth truncation: sums run over |n| <= k");
    cmd->add_option("--threads", f.threads,
                    "worker threads (0: GKP_MC_THREADS, then hardware count)");
    cmd->add_option("--csv", f.csv_path, "write the per-cell CSV here ('-' = stdout)");
    cmd->add_option("--json", f.json_path, "write the full JSON summary here ('-' = stdout)");
}

gkp::ExperimentConfig build_config(const CLI::App& cmd, const CommonFlags& f,
                                   const gkp::ExperimentConfig& defaults, bool allow_compare) {
    gkp::ExperimentConfig cfg = defaults;
    if (!f.config_path.empty()) {
        cfg = gkp::config_from_json(read_file(f.config_path));
        const bool matches =
            cfg.experiment == defaults.experiment ||
            (allow_compare && cfg.experiment == gkp::Experiment::mld_compare);
        if (!matches)
            throw gkp::ConfigError("experiment",
                                   "config runs '" + gkp::to_string(cfg.experiment) +
                                       "' but this subcommand runs '" +
                                       gkp::to_string(defaults.experiment) + "'");
    }
    if (f.compare) cfg.experiment = gkp::Experiment::mld_compare;
    auto given = [&cmd](const std::string& name) {
        const CLI::Option* opt = cmd.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--sigma")) cfg.sigma_grid = f.sigma;
    if (given("--sigma2")) {
        cfg.sigma2 = f.sigma2;
        if (!given("--sigma2-scale")) cfg.sigma2_scale = 0.0;
    }
    if (given("--sigma2-scale")) {
        cfg.sigma2_scale = f.sigma2_scale;
        if (!given("--sigma2")) cfg.sigma2 = 0.0;
    }
    if (given("--size")) cfg.L_grid = f.sizes;
    if (given("--trials")) cfg.trials = f.trials;
    if (given("--seed")) cfg.master_seed = f.seed;
    if (given("--k")) cfg.k = f.k;
    if (given("--decoder")) cfg.decoder = gkp::parse_decoder(f.decoder);
    if (given("--pc-grid")) cfg.p_c_grid = f.pc;
    if (given("--threads")) cfg.threads = f.threads;
    return cfg;
}

// The analytic outcome profile: 200 bin midpoints across the fundamental
// domain, then one summary comment per width with the round-averaged
// success.
std::string steane_profile_csv(const gkp::ExperimentConfig& cfg) {
    std::string out = "sigma,q_cor,cond_success,density\n";
    const double step = gkp::sqrt_pi() / 200.0;
    for (double sigma : cfg.sigma_grid) {
        const gkp::RatePair rp(sigma, cfg.ancilla_sigma(sigma), cfg.k);
        for (int i = 0; i < 200; ++i) {
            const double q = -gkp::half_cell() + (static_cast<double>(i) + 0.5) * step;
            out += format_double(sigma);
            out += ',';
            out += format_double(q);
            out += ',';
            out += format_double(gkp::conditional_success(q, rp));
            out += ',';
            out += format_double(gkp::outcome_density(q, rp));
            out += '\n';
        }
    }
    for (double sigma : cfg.sigma_grid) {
        const gkp::RatePair rp(sigma, cfg.ancilla_sigma(sigma), cfg.k);
        out += "# average_success sigma=" + format_double(sigma) +
               " sigma2=" + format_double(rp.sigma2) + " k=" + std::to_string(cfg.k) + ": " +
               format_double(gkp::average_success(rp)) + '\n';
    }
    return out;
}

void print_cell_lines(const gkp::SweepSummary& s) {
    for (const gkp::CellSummary& cell : s.cells) {
        std::string line = "cell " + std::to_string(cell.cell_id) +
                           ": sigma=" + format_double(cell.sigma);
        if (cell.sigma2 > 0.0) line += " sigma2=" + format_double(cell.sigma2);
        if (cell.L > 0) line += " L=" + std::to_string(cell.L);
        if (cell.has_decoder) line += " decoder=" + gkp::to_string(cell.decoder);
        if (cell.p_c >= 0.0) line += " p_c=" + format_double(cell.p_c);
        line += " rate=" + format_double(cell.rate) + " [" + format_double(cell.wilson.lo) +
                ", " + format_double(cell.wilson.hi) + "]";
        std::cout << line << "\n";
    }
    if (s.crossing) {
        if (s.crossing->found)
            std::cout << "crossing between sigma=" << format_double(s.crossing->sigma_lo)
                      << " and sigma=" << format_double(s.crossing->sigma_hi) << "\n";
        else
            std::cout << "no crossing on the grid\n";
    }
}

void run_and_emit(const CLI::App& cmd, const CommonFlags& f,
                  const gkp::ExperimentConfig& defaults, bool allow_compare) {
    const gkp::ExperimentConfig cfg = build_config(cmd, f, defaults, allow_compare);
    const gkp::SweepSummary summary = gkp::run_sweep(cfg);
    const std::string csv = gkp::to_csv(summary);
    const bool steane = cfg.experiment == gkp::Experiment::steane_stats;

    if (steane) {
        // stdout carries the analytic profile; the Monte Carlo CSV goes to
        // --csv (with '-' claiming stdout for the CSV instead).
        if (f.csv_path == "-") {
            std::cout << csv;
        } else {
            std::cout << steane_profile_csv(cfg);
            if (!f.csv_path.empty()) write_file(f.csv_path, csv);
        }
    } else if (f.csv_path.empty() || f.csv_path == "-") {
        std::cout << csv;
    } else {
        write_file(f.csv_path, csv);
        print_cell_lines(summary);
    }
    if (!f.json_path.empty()) {
        const std::string js = gkp::to_json(summary);
        if (f.json_path == "-")
            std::cout << js;
        else
            write_file(f.json_path, js);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator and analytics for shift-encoded qubits"};
    app.set_version_flag("--version", gkp::version_string());
    app.require_subcommand(1);

    int exit_code = 0;

    CommonFlags f_steane;
    auto* steane = app.add_subcommand(
        "steane-stats", "outcome profile and logical rates for single error-correction rounds");
    add_common_options(steane, f_steane);
    steane->callback([&]() {
        gkp::ExperimentConfig d;
        d.experiment = gkp::Experiment::steane_stats;
        d.sigma_grid = {0.6};
        d.trials = 10000;
        run_and_emit(*steane, f_steane, d, false);
    });

    CommonFlags f_double;
    auto* dbl = app.add_subcommand("double-measure",
                                   "repeated q measurement against the one-shot baseline");
    add_common_options(dbl, f_double);
    dbl->callback([&]() {
        gkp::ExperimentConfig d;
        d.experiment = gkp::Experiment::double_measurement;
        d.sigma_grid = {0.6};
        d.sigma2 = 0.2;
        d.trials = 100000;
        run_and_emit(*dbl, f_double, d, false);
    });

    CommonFlags f_rep;
    auto* rep = app.add_subcommand("repetition",
                                   "three-qubit repetition block: majority versus rate-aware ML");
    add_common_options(rep, f_rep);
    rep->callback([&]() {
        gkp::ExperimentConfig d;
        d.experiment = gkp::Experiment::repetition;
        d.sigma_grid = {0.4, 0.5};
        d.trials = 100000;
        run_and_emit(*rep, f_rep, d, false);
    });

    CommonFlags f_toric;
    auto* toric = app.add_subcommand("toric-threshold",
                                     "logical failure sweep over sigma and lattice size");
    add_common_options(toric, f_toric);
    toric->add_option("--decoder", f_toric.decoder, "uniform | weighted | mld")
        ->check(CLI::IsMember({"uniform", "weighted", "mld"}));
    toric->add_flag("--compare", f_toric.compare,
                    "run the paired weighted-matching versus exact-decoder comparison");
    toric->callback([&]() {
        gkp::ExperimentConfig d;
        d.experiment = gkp::Experiment::toric_ideal;
        d.sigma_grid = {0.54, 0.56, 0.58, 0.6};
        d.L_grid = {8, 12};
        d.trials = 10000;
        run_and_emit(*toric, f_toric, d, true);
    });

    CommonFlags f_noisy;
    auto* noisy = app.add_subcommand(
        "noisy-syndrome", "defect classification under measurement noise, swept over p_c");
    add_common_options(noisy, f_noisy);
    noisy->add_option("--pc-grid", f_noisy.pc, "confidence cuts to sweep")->delimiter(',');
    noisy->callback([&]() {
        gkp::ExperimentConfig d;
        d.experiment = gkp::Experiment::toric_noisy;
        d.sigma_grid = {0.4};
        d.sigma2_scale = 0.5;
        d.L_grid = {8};
        d.trials = 5000;
        d.p_c_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        run_and_emit(*noisy, f_noisy, d, false);
    });

    auto* validate = app.add_subcommand("validate", "run the independent cross-check suite");
    validate->callback([&]() {
        if (!gkp::validation::run_all(std::cout)) exit_code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const gkp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
