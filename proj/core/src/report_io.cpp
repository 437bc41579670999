#include "ccp/report_io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ccp {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_row(std::ostream& out, const std::vector<double>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << fmt(row[i]);
    }
    out << '\n';
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() +
                                 " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

ordered_json table_to_json(const ReportTable& table) {
    ordered_json j;
    j["name"] = table.name;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    return j;
}

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
    if (text == "json") return ReportFormat::json;
    if (text == "csv") return ReportFormat::csv;
    if (text == "both") return ReportFormat::both;
    throw std::invalid_argument("unknown report format: " + text +
                                " (expected json, csv, or both)");
}

std::string to_string(ReportFormat format) {
    switch (format) {
        case ReportFormat::json: return "json";
        case ReportFormat::csv: return "csv";
        case ReportFormat::both: return "both";
    }
    throw std::invalid_argument("unknown report format value");
}

std::string to_json_text(const ExperimentReport& report) {
    ordered_json j;
    j["experiment"] = report.name;
    ordered_json params;
    for (const auto& [key, value] : report.parameters) params[key] = value;
    j["parameters"] = std::move(params);
    ordered_json flags;
    for (const auto& [key, value] : report.pass_flags) flags[key] = value;
    j["pass_flags"] = std::move(flags);
    ordered_json tables = ordered_json::array();
    for (const auto& table : report.tables) {
        tables.push_back(table_to_json(table));
    }
    j["tables"] = std::move(tables);
    ordered_json series;
    for (const auto& [key, values] : report.series) series[key] = values;
    j["series"] = std::move(series);
    return j.dump(2) + "\n";
}

std::string to_json_text(const MonteCarloSummary& summary) {
    ordered_json j;
    j["estimator"] = summary.estimator;
    j["noise"] = summary.noise;
    j["trials"] = summary.num_trials;
    j["windows"] = summary.num_windows;
    j["window_len"] = summary.window_len;
    j["root_seed"] = summary.root_seed;
    ordered_json bins = ordered_json::array();
    for (const BinSummary& b : summary.bins) {
        ordered_json jb;
        jb["bin"] = b.bin;
        jb["sample_mean"] = b.sample_mean;
        jb["standard_error"] = b.standard_error;
        jb["sample_second_moment"] = b.sample_second_moment;
        jb["sample_variance"] = b.sample_variance;
        jb["predicted_mean"] = b.predicted_mean;
        jb["predicted_bound_abs"] = b.predicted_bound_abs;
        jb["predicted_second_moment"] = b.predicted_second_moment;
        bins.push_back(std::move(jb));
    }
    j["bins"] = std::move(bins);
    return j.dump(2) + "\n";
}

void write_psd_csv(std::ostream& out, const PsdEstimate& estimate,
                   std::optional<double> sample_rate) {
    const std::size_t L = estimate.power.size();
    const double rate = sample_rate.value_or(1.0);
    out << "bin,freq_hz,power_linear,power_db\n";
    for (std::size_t f = 0; f < L; ++f) {
        const double freq =
            static_cast<double>(f) * rate / static_cast<double>(L);
        write_row(out, {static_cast<double>(f), freq, estimate.power[f],
                        to_db(estimate.power[f])});
    }
}

void write_table_csv(std::ostream& out, const ReportTable& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw std::runtime_error("table " + table.name +
                                     " has a ragged row");
        }
        write_row(out, row);
    }
}

void write_series_csv(std::ostream& out, const ExperimentReport& report) {
    if (report.series.empty()) {
        throw std::runtime_error("report " + report.name + " has no series");
    }
    const std::size_t len = report.series.front().second.size();
    out << "bin";
    for (const auto& [key, values] : report.series) {
        if (values.size() != len) {
            throw std::runtime_error("series " + key + " in " + report.name +
                                     " has mismatched length");
        }
        out << ',' << key;
    }
    out << '\n';
    std::vector<double> row(report.series.size() + 1);
    for (std::size_t i = 0; i < len; ++i) {
        row[0] = static_cast<double>(i);
        for (std::size_t s = 0; s < report.series.size(); ++s) {
            row[s + 1] = report.series[s].second[i];
        }
        write_row(out, row);
    }
}

ReportTable read_table_csv(std::istream& in, std::string name) {
    ReportTable table;
    table.name = std::move(name);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }

        if (table.columns.empty()) {
            table.columns = std::move(cells);
            continue;
        }
        if (cells.size() != table.columns.size()) {
            throw std::runtime_error(
                "line " + std::to_string(line_no) + " has " +
                std::to_string(cells.size()) + " cells, header has " +
                std::to_string(table.columns.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& cell : cells) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         " cell is not numeric: " + cell);
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) {
        throw std::runtime_error("CSV stream is empty");
    }
    return table;
}

std::vector<std::filesystem::path> write_report(
    const ExperimentReport& report, const std::filesystem::path& dir,
    ReportFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create directory " + dir.string() +
                                 ": " + ec.message());
    }

    std::vector<std::filesystem::path> written;
    const bool json = format != ReportFormat::csv;
    const bool csv = format != ReportFormat::json;

    if (json) {
        const auto path = dir / (report.name + ".json");
        write_text_file(path, to_json_text(report));
        written.push_back(path);
    }
    if (csv) {
        for (const auto& table : report.tables) {
            const auto path = dir / (report.name + "_" + table.name + ".csv");
            std::ostringstream text;
            write_table_csv(text, table);
            write_text_file(path, text.str());
            written.push_back(path);
        }
        if (!report.series.empty()) {
            const auto path = dir / (report.name + "_series.csv");
            std::ostringstream text;
            write_series_csv(text, report);
            write_text_file(path, text.str());
            written.push_back(path);
        }
    }

    ordered_json meta;
    meta["experiment"] = report.name;
    meta["generated_at"] = utc_now();
    ordered_json files = ordered_json::array();
    for (const auto& path : written) files.push_back(path.filename().string());
    meta["data_files"] = std::move(files);
    const auto meta_path = dir / (report.name + "_meta.json");
    write_text_file(meta_path, meta.dump(2) + "\n");
    written.push_back(meta_path);

    return written;
}

}  // namespace ccp
