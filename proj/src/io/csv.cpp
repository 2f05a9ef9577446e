#include "wakenode/io/csv.hpp"

#include "wakenode/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wakenode::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string at(const CsvTable& t, std::size_t row) {
    return t.source + ":" + std::to_string(t.line_numbers[row]);
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& source) {
    CsvTable t;
    t.source = source;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto fields = split(body);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw Error(ErrorCode::Parse, source + ":" + std::to_string(lineno) + ": expected " +
                                              std::to_string(t.header.size()) + " fields, found " +
                                              std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.line_numbers.push_back(lineno);
    }
    if (t.header.empty()) {
        throw Error(ErrorCode::Parse, source + ":" + std::to_string(lineno == 0 ? 1 : lineno) + ": file is empty");
    }
    return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    return parse_csv(in, path.string());
}

void require_columns(const CsvTable& t, const std::vector<std::string>& expected) {
    if (t.header != expected) {
        std::string want;
        for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
        throw Error(ErrorCode::Parse, t.source + ":1: expected header '" + want + "'");
    }
}

double parse_number(const std::string& field, const std::string& where) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw Error(ErrorCode::Parse, where + ": '" + field + "' is not a number");
    }
    return v;
}

std::vector<CalPoint> load_cal_points(const std::filesystem::path& path) {
    const auto t = read_csv(path);
    require_columns(t, {"adc_value", "spl_db"});
    std::vector<CalPoint> pts;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CalPoint p{parse_number(t.rows[r][0], at(t, r)), parse_number(t.rows[r][1], at(t, r))};
        try {
            p.validate();
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, at(t, r) + ": " + e.what());
        }
        pts.push_back(p);
    }
    return pts;
}

std::vector<MicCandidate> load_mic_table(const std::filesystem::path& path) {
    const auto t = read_csv(path);
    require_columns(t, {"name", "power_mw", "accuracy", "configuration", "supply_min_v", "supply_max_v"});
    if (t.rows.empty()) throw Error(ErrorCode::Parse, t.source + ": microphone table has no rows");
    std::vector<MicCandidate> mics;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& f = t.rows[r];
        MicCandidate m;
        m.name = f[0];
        m.power_mw = parse_number(f[1], at(t, r));
        m.accuracy = parse_number(f[2], at(t, r));
        if (f[3] == "analog") {
            m.configuration = MicConfiguration::Analog;
        } else if (f[3] == "digital") {
            m.configuration = MicConfiguration::Digital;
        } else {
            throw Error(ErrorCode::Parse, at(t, r) + ": configuration must be 'analog' or 'digital'");
        }
        m.supply_min_v = parse_number(f[4], at(t, r));
        m.supply_max_v = parse_number(f[5], at(t, r));
        try {
            m.validate();
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, at(t, r) + ": " + e.what());
        }
        mics.push_back(std::move(m));
    }
    return mics;
}

Scenario load_scenario(const std::filesystem::path& path) {
    const auto t = read_csv(path);
    require_columns(t, {"duration_s", "sound_present", "label"});
    if (t.rows.empty()) throw Error(ErrorCode::Parse, t.source + ":2: scenario has no segments");
    Scenario s;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& f = t.rows[r];
        ScenarioSegment seg;
        seg.duration_s = parse_number(f[0], at(t, r));
        if (!(seg.duration_s > 0.0)) throw Error(ErrorCode::Parse, at(t, r) + ": duration must be positive");
        if (f[1] == "1" || f[1] == "true") {
            seg.sound_present = true;
        } else if (f[1] == "0" || f[1] == "false") {
            seg.sound_present = false;
        } else {
            throw Error(ErrorCode::Parse, at(t, r) + ": sound_present must be true/false or 1/0");
        }
        seg.label = f[2];
        s.segments.push_back(std::move(seg));
    }
    return s;
}

std::string format_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace wakenode::io
