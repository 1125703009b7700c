#pragma once

#include "padic_lab/config.hpp"

#include <nlohmann/json.hpp>

#include <concepts>
#include <filesystem>
#include <string>
#include <vector>

namespace padic::lab {

inline constexpr const char* kToolName = "padiclab";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// Top-level report fields shared by every command. There is deliberately no
/// timestamp: identical inputs must give byte-identical files.
nlohmann::ordered_json report_envelope(const std::string& command, const ExperimentConfig& cfg);

/// Shortest decimal that reads back to the same double ("%.17g" trimmed).
std::string format_number(double v);

/// Writes `doc` as two-space indented JSON followed by a newline.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

/// Minimal CSV table: a header row and rows of preformatted cells.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(std::vector<std::string> cells);
    std::size_t rows() const noexcept { return rows_.size(); }
    const std::vector<std::string>& header() const noexcept { return header_; }
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Cell helpers.
std::string cell(double v);
template <std::integral T>
    requires(!std::same_as<T, bool>)
std::string cell(T v) {
    return std::to_string(v);
}
inline std::string cell(bool b) { return b ? "true" : "false"; }
inline std::string cell(const std::string& s) { return s; }

}  // namespace padic::lab
