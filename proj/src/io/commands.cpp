#include "wakenode/io/commands.hpp"

#include "wakenode/error.hpp"
#include "wakenode/io/csv.hpp"
#include "wakenode/io/wav.hpp"

#include <cmath>
#include <sstream>

namespace wakenode::io {

namespace {

namespace fs = std::filesystem;

void prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
}

void finish(Report& report, const fs::path& out_dir) {
    report.outputs.push_back("report.json");
    write_text(out_dir / "report.json", report.dump());
}

nlohmann::json wav_info_json(const WavInfo& info) {
    return {{"channels", info.channels},
            {"sample_rate_hz", info.sample_rate_hz},
            {"bits_per_sample", info.bits_per_sample},
            {"float", info.is_float},
            {"frames", info.frames}};
}

Signal read_checked(const fs::path& path, const char* role, nlohmann::json& info_out,
                    std::vector<std::string>& warnings, double analysis_rate) {
    WavInfo info;
    Signal s = read_wav(path, &info);
    if (info.sample_rate_hz < analysis_rate) {
        throw Error(ErrorCode::RateTooLow, std::string(role) + " '" + path.filename().string() + "' is sampled at " +
                                               std::to_string(info.sample_rate_hz) +
                                               " Hz, below the 8000 Hz analysis rate");
    }
    if (info.sample_rate_hz < 2.0 * analysis_rate) {
        warnings.push_back("W_LOW_RATE: " + std::string(role) + " sampled at " + std::to_string(info.sample_rate_hz) +
                           " Hz leaves no anti-alias headroom above 4 kHz");
    }
    info_out[role] = wav_info_json(info);
    return s;
}

}  // namespace

Report cmd_coherence(const fs::path& source_wav, const fs::path& recording_wav, const RunConfig& config,
                     const fs::path& out_dir) {
    Report report;
    report.command = "coherence";
    report.config = config_to_json(config);
    report.inputs = {digest_file(source_wav), digest_file(recording_wav)};

    ScoringProtocol protocol;
    protocol.welch = config.welch;

    std::vector<std::string> warnings;
    nlohmann::json audio;
    const Signal source = read_checked(source_wav, "source", audio, warnings, protocol.analysis_rate_hz);
    const Signal recording = read_checked(recording_wav, "recording", audio, warnings, protocol.analysis_rate_hz);

    const auto result = evaluate_recording(source, recording, protocol);

    prepare_out_dir(out_dir);
    std::ostringstream csv;
    csv << "frequency_hz,coherence,envelope\n";
    for (std::size_t k = 0; k < result.coherence.values.size(); ++k) {
        csv << format_number(result.coherence.frequencies_hz[k]) << ',' << format_number(result.coherence.values[k])
            << ',' << format_number(result.envelope[k]) << '\n';
    }
    write_text(out_dir / "coherence.csv", csv.str());
    report.outputs.push_back("coherence.csv");

    report.results = {{"score", result.score},
                      {"delay_samples", result.delay_samples},
                      {"delay_s", static_cast<double>(result.delay_samples) / protocol.analysis_rate_hz},
                      {"analysis_rate_hz", protocol.analysis_rate_hz},
                      {"alignment_s", protocol.alignment_s},
                      {"analysis_s", protocol.analysis_s},
                      {"envelope_separation", protocol.envelope_separation},
                      {"frequency_bins", result.coherence.values.size()},
                      {"audio", audio},
                      {"warnings", warnings}};
    finish(report, out_dir);
    return report;
}

Scenario resolve_scenario(const std::string& name_or_path) {
    if (name_or_path == "urban") return build_urban_scenario();
    if (name_or_path == "silence") return Scenario{{{480.0, false, "silence"}}};
    if (name_or_path == "sound") return Scenario{{{480.0, true, "sound"}}};
    return load_scenario(name_or_path);
}

Report cmd_simulate(const SimulateRequest& request, const RunConfig& config, const fs::path& out_dir) {
    Report report;
    report.command = "simulate";

    RunConfig effective = config;
    if (request.profile) {
        auto p = find_builtin_profile(*request.profile);
        if (!p) {
            std::string known;
            for (const auto& k : builtin_profile_keys()) known += (known.empty() ? "" : ", ") + k;
            throw Error(ErrorCode::UnknownProfile, "unknown profile '" + *request.profile + "' (built-ins: " + known + ")");
        }
        effective.node.profile = *p;
        effective.profile_key = *request.profile;
    }
    report.config = config_to_json(effective);
    const NodeConfig& node = effective.node;

    std::vector<std::string> warnings;
    if (!node.profile.components.empty()) {
        const auto composed = compose_profile(node.profile.components, node.profile.name + " components");
        if (auto w = totals_discrepancy(composed, node.profile)) warnings.push_back("W_PROFILE_TOTALS: " + *w);
    }

    SimTrace trace;
    nlohmann::json source;
    if (request.wav) {
        report.inputs.push_back(digest_file(*request.wav));
        WavInfo info;
        const Signal audio = read_wav(*request.wav, &info);
        std::vector<double> volts(audio.samples().begin(), audio.samples().end());
        for (double& v : volts) v *= effective.wake.mic_full_scale_v;
        const Signal mic(std::move(volts), audio.sample_rate_hz());
        const Signal env = envelope_detect(amplify(mic, effective.circuit), effective.circuit);
        trace = simulate_from_wake(threshold_out(env, effective.wake.threshold_v), node);
        source = {{"kind", "wav"}, {"name", request.wav->filename().string()}, {"audio", wav_info_json(info)}};
    } else {
        const Scenario scenario = resolve_scenario(request.scenario);
        if (request.scenario != "urban" && request.scenario != "silence" && request.scenario != "sound") {
            report.inputs.push_back(digest_file(request.scenario));
            source = {{"kind", "file"}, {"name", fs::path(request.scenario).filename().string()}};
        } else {
            source = {{"kind", "builtin"}, {"name", request.scenario}};
        }
        source["segments"] = scenario.segments.size();
        trace = simulate(scenario, node);
    }

    prepare_out_dir(out_dir);
    std::ostringstream csv;
    csv << "t_start,t_end,state,power_mw\n";
    for (const auto& iv : trace.timeline) {
        const double p = iv.state == NodeState::Transmit ? node.profile.transmit_mw : node.profile.sleep_mw;
        csv << format_number(iv.t_start_s) << ',' << format_number(iv.t_end_s) << ',' << to_string(iv.state) << ','
            << format_number(p) << '\n';
    }
    write_text(out_dir / "trace.csv", csv.str());
    report.outputs.push_back("trace.csv");

    report.results = {
        {"scenario", source},
        {"profile", node.profile.name},
        {"duty_cycle", trace.duty_cycle},
        {"avg_power_mw", trace.avg_power_mw},
        {"energy_mwh", trace.energy_mwh},
        {"total_duration_s", trace.total_duration_s},
        {"transmit_time_s", trace.transmit_time_s},
        {"intervals", trace.timeline.size()},
        {"lifetime_days", battery_lifetime_days(trace.avg_power_mw, node.battery_mah, node.battery_v)},
        {"savings_percent", savings_percent(node.profile)},
        {"warnings", warnings},
    };
    finish(report, out_dir);
    return report;
}

Report cmd_calibrate(const fs::path& points_csv, const RunConfig& config, const fs::path& out_dir) {
    Report report;
    report.command = "calibrate";
    report.config = config_to_json(config);
    report.inputs = {digest_file(points_csv)};

    const auto points = load_cal_points(points_csv);
    if (points.size() < 6) {
        throw Error(ErrorCode::InvalidArgument, points_csv.string() + ": calibration needs at least 6 points, found " +
                                                    std::to_string(points.size()));
    }
    const CurveFit fit = fit_curve(points);

    prepare_out_dir(out_dir);
    std::ostringstream csv;
    csv << "adc_value,spl_db,predicted_db,residual_db\n";
    double max_abs = 0.0;
    for (const auto& p : points) {
        const double pred = adc_to_db(p.adc_value, fit.curve);
        max_abs = std::max(max_abs, std::abs(p.spl_db - pred));
        csv << format_number(p.adc_value) << ',' << format_number(p.spl_db) << ',' << format_number(pred) << ','
            << format_number(p.spl_db - pred) << '\n';
    }
    write_text(out_dir / "residuals.csv", csv.str());
    report.outputs.push_back("residuals.csv");

    report.results = {{"curve", {{"a", fit.curve.a}, {"b", fit.curve.b}, {"c", fit.curve.c}, {"d", fit.curve.d}}},
                      {"r_squared", fit.r_squared},
                      {"sse", fit.sse},
                      {"max_abs_residual_db", max_abs},
                      {"points", points.size()},
                      {"iterations", fit.iterations}};
    finish(report, out_dir);
    return report;
}

Report cmd_rank_mics(const RankRequest& request, const RunConfig& config, const fs::path& out_dir) {
    Report report;
    report.command = "rank-mics";
    report.config = config_to_json(config);

    std::vector<MicCandidate> mics;
    if (request.table) {
        report.inputs = {digest_file(*request.table)};
        mics = load_mic_table(*request.table);
    } else {
        mics = reference_microphones();
    }
    const auto ranking = rank_microphones(mics, request.require_analog, request.supply_v);

    prepare_out_dir(out_dir);
    std::ostringstream csv;
    csv << "rank,name,eligible,accuracy,power_mw,configuration,reasons\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : ranking) {
        std::string reasons;
        for (const auto& why : r.reasons) reasons += (reasons.empty() ? "" : "; ") + why;
        csv << r.rank << ',' << r.mic.name << ',' << (r.eligible ? "true" : "false") << ','
            << format_number(r.mic.accuracy) << ',' << format_number(r.mic.power_mw) << ','
            << to_string(r.mic.configuration) << ',' << reasons << '\n';
        rows.push_back({{"rank", r.rank},
                        {"name", r.mic.name},
                        {"eligible", r.eligible},
                        {"accuracy", r.mic.accuracy},
                        {"power_mw", r.mic.power_mw},
                        {"configuration", to_string(r.mic.configuration)},
                        {"supply_min_v", r.mic.supply_min_v},
                        {"supply_max_v", r.mic.supply_max_v},
                        {"reasons", r.reasons}});
    }
    write_text(out_dir / "ranking.csv", csv.str());
    report.outputs.push_back("ranking.csv");

    report.results = {{"require_analog", request.require_analog},
                      {"supply_v", request.supply_v ? nlohmann::json(*request.supply_v) : nlohmann::json(nullptr)},
                      {"source", request.table ? request.table->filename().string() : std::string("builtin")},
                      {"ranking", rows}};
    finish(report, out_dir);
    return report;
}

}  // namespace wakenode::io
