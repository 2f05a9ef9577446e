#pragma once

#include "wakenode/calibrate.hpp"
#include "wakenode/coherence.hpp"
#include "wakenode/powersim.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace wakenode::io {

/// Comma-separated table with a header row. Blank lines and lines starting
/// with '#' are skipped; fields are whitespace-trimmed.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based, per row
};

CsvTable parse_csv(std::istream& in, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

/// Checks the header matches `expected` exactly, in order.
void require_columns(const CsvTable& t, const std::vector<std::string>& expected);

double parse_number(const std::string& field, const std::string& where);

// adc_value,spl_db
std::vector<CalPoint> load_cal_points(const std::filesystem::path& path);

// name,power_mw,accuracy,configuration,supply_min_v,supply_max_v
std::vector<MicCandidate> load_mic_table(const std::filesystem::path& path);

// duration_s,sound_present,label
Scenario load_scenario(const std::filesystem::path& path);

/// Shortest round-trip decimal form; locale independent.
std::string format_number(double v);

}  // namespace wakenode::io
