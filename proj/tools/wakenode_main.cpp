// wakenode: command-line front end for the acquisition-node models.
//
//   wakenode coherence SOURCE.wav RECORDING.wav [--out DIR]
//   wakenode simulate [--scenario urban|silence|sound|FILE.csv] [--wav FILE] [--profile KEY]
//   wakenode calibrate POINTS.csv
//   wakenode rank-mics [TABLE.csv] [--analog] [--supply V] [--no-constraints]
//   wakenode default-config
//
// Every command accepts --config FILE (or $WAKENODE_CONFIG) and --out DIR.
// Exit status is 0 only when the report was written; failures print
// `error[E_CODE]: message` on stderr.

#include "wakenode/error.hpp"
#include "wakenode/io/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kFailure = 1 };

void print_warnings(const wakenode::io::Report& report) {
    if (!report.results.contains("warnings")) return;
    for (const auto& w : report.results["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    namespace io = wakenode::io;

    CLI::App app{"Threshold-wake acoustic sensor node: coherence scoring, power simulation, SPL calibration"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    app.add_option("--config", config_path, "YAML run configuration (overrides $WAKENODE_CONFIG)");
    app.add_option("--out", out_dir, "Output directory (default: io.out_dir from the config, else '.')");

    auto* coh = app.add_subcommand("coherence", "Score a recording against its source");
    std::string source_wav;
    std::string recording_wav;
    coh->add_option("source", source_wav, "Source WAV")->required()->check(CLI::ExistingFile);
    coh->add_option("recording", recording_wav, "Recorded WAV")->required()->check(CLI::ExistingFile);

    auto* sim = app.add_subcommand("simulate", "Simulate node power over a scenario or a recording");
    io::SimulateRequest sim_req;
    std::string sim_wav;
    std::string sim_profile;
    sim->add_option("--scenario", sim_req.scenario, "urban | silence | sound | scenario CSV")->capture_default_str();
    sim->add_option("--wav", sim_wav, "Drive the wake line from this recording")->check(CLI::ExistingFile);
    sim->add_option("--profile", sim_profile, "wifi | ble | zigbee | zigbee-standalone");

    auto* cal = app.add_subcommand("calibrate", "Fit the ADC-to-dB curve to reference points");
    std::string points_csv;
    cal->add_option("points", points_csv, "CSV with adc_value,spl_db")->required()->check(CLI::ExistingFile);

    auto* rank = app.add_subcommand("rank-mics", "Rank microphone candidates by accuracy under constraints");
    std::string table_csv;
    bool analog = false;
    double supply = 0.0;
    bool no_constraints = false;
    rank->add_option("table", table_csv, "Microphone table CSV (default: bundled reference table)")
        ->check(CLI::ExistingFile);
    auto* analog_flag = rank->add_flag("--analog", analog, "Require an analog output");
    auto* supply_opt = rank->add_option("--supply", supply, "Supply voltage the microphone must accept");
    rank->add_flag("--no-constraints", no_constraints, "Rank purely by accuracy")
        ->excludes(analog_flag)
        ->excludes(supply_opt);

    auto* defaults = app.add_subcommand("default-config", "Print the default configuration as YAML");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (defaults->parsed()) {
            std::cout << io::default_config_yaml();
            return kOk;
        }

        const auto config = io::resolve_config(config_path.empty() ? std::nullopt
                                                                   : std::optional<std::filesystem::path>(config_path));
        const std::filesystem::path out = out_dir.empty() ? config.out_dir : std::filesystem::path(out_dir);

        io::Report report;
        if (coh->parsed()) {
            report = io::cmd_coherence(source_wav, recording_wav, config, out);
            std::cout << "score " << report.results["score"].get<double>() << '\n';
        } else if (sim->parsed()) {
            if (!sim_wav.empty()) sim_req.wav = sim_wav;
            if (!sim_profile.empty()) sim_req.profile = sim_profile;
            report = io::cmd_simulate(sim_req, config, out);
            std::cout << "duty_cycle " << report.results["duty_cycle"].get<double>() << '\n'
                      << "avg_power_mw " << report.results["avg_power_mw"].get<double>() << '\n'
                      << "lifetime_days " << report.results["lifetime_days"].get<double>() << '\n';
        } else if (cal->parsed()) {
            report = io::cmd_calibrate(points_csv, config, out);
            std::cout << "r_squared " << report.results["r_squared"].get<double>() << '\n';
        } else if (rank->parsed()) {
            io::RankRequest req;
            if (!table_csv.empty()) req.table = table_csv;
            if (no_constraints) {
                req.require_analog = false;
                req.supply_v.reset();
            } else if (analog || supply_opt->count() > 0) {
                req.require_analog = analog;
                req.supply_v = supply_opt->count() > 0 ? std::optional<double>(supply) : std::nullopt;
            }
            report = io::cmd_rank_mics(req, config, out);
            for (const auto& r : report.results["ranking"]) {
                std::cout << r["rank"].get<std::size_t>() << ' ' << r["name"].get<std::string>()
                          << (r["eligible"].get<bool>() ? "" : " (ineligible)") << '\n';
            }
        }
        print_warnings(report);
        return kOk;
    } catch (const wakenode::Error& e) {
        std::cerr << "error[" << wakenode::error_code_name(e.code()) << "]: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error[E_INTERNAL]: " << e.what() << '\n';
    }
    return kFailure;
}
