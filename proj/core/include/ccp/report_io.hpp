#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccp/estimators.hpp"
#include "ccp/experiments.hpp"
#include "ccp/monte_carlo.hpp"

namespace ccp {

enum class ReportFormat { json, csv, both };

/// Accepts "json", "csv", "both"; anything else throws std::invalid_argument.
ReportFormat parse_report_format(const std::string& text);
std::string to_string(ReportFormat format);

/// Deterministic JSON renderings (insertion-ordered keys, two-space
/// indent, trailing newline). Identical inputs give identical bytes.
std::string to_json_text(const ExperimentReport& report);
std::string to_json_text(const MonteCarloSummary& summary);

/// PSD rows `bin,freq_hz,power_linear,power_db`. Without a sample rate the
/// freq_hz column falls back to normalized frequency bin/L (a 1 Hz rate).
void write_psd_csv(std::ostream& out, const PsdEstimate& estimate,
                   std::optional<double> sample_rate);

void write_table_csv(std::ostream& out, const ReportTable& table);

/// All of a report's per-bin series side by side: `bin` first, then one
/// column per series in report order. Requires every series to share one
/// length.
void write_series_csv(std::ostream& out, const ExperimentReport& report);

/// Parses a header + numeric rows CSV as emitted by the writers above.
/// Throws std::runtime_error naming the line for ragged rows, non-numeric
/// cells, or an empty stream.
ReportTable read_table_csv(std::istream& in, std::string name = "");

/// Writes a report bundle under dir (created if missing):
///   <name>.json            full report            (json | both)
///   <name>_<table>.csv     one file per table     (csv | both)
///   <name>_series.csv      wide series file       (csv | both, if any)
///   <name>_meta.json       timestamp sidecar      (always)
/// Data files carry no timestamps, so reruns are byte-identical; the
/// sidecar holds the wall-clock metadata. Returns the paths written.
std::vector<std::filesystem::path> write_report(
    const ExperimentReport& report, const std::filesystem::path& dir,
    ReportFormat format);

}  // namespace ccp
