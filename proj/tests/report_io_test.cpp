#include <doctest.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ccp/report_io.hpp"

using namespace ccp;
namespace fs = std::filesystem;

namespace {

ExperimentReport tiny_report() {
    ExperimentReport report;
    report.name = "tiny";
    report.parameters = {{"alpha", "0.25"}, {"label", "unit"}};
    report.series = {{"raw", {1.0, 2.0, 4.0}}, {"scaled", {0.5, 1.0, 2.0}}};
    report.tables.push_back(
        {"checks", {"row", "value"}, {{0.0, 1.5}, {1.0, -2.5}}});
    report.pass_flags = {{"all_good", true}, {"soft_hint", false}};
    return report;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ccp_report_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("report format names round trip") {
    CHECK(parse_report_format("json") == ReportFormat::json);
    CHECK(parse_report_format("csv") == ReportFormat::csv);
    CHECK(parse_report_format("both") == ReportFormat::both);
    CHECK(to_string(ReportFormat::both) == "both");
    CHECK_THROWS_AS(parse_report_format("yaml"), std::invalid_argument);
}

TEST_CASE("report JSON is stable and parseable") {
    const ExperimentReport report = tiny_report();
    const std::string text = to_json_text(report);
    CHECK(text == to_json_text(report));
    CHECK(text.back() == '\n');

    const auto j = nlohmann::json::parse(text);
    CHECK(j["experiment"] == "tiny");
    CHECK(j["parameters"]["alpha"] == "0.25");
    CHECK(j["pass_flags"]["all_good"] == true);
    CHECK(j["pass_flags"]["soft_hint"] == false);
    CHECK(j["series"]["raw"][2] == 4.0);
    CHECK(j["tables"][0]["name"] == "checks");
    CHECK(j["tables"][0]["columns"][1] == "value");
    CHECK(j["tables"][0]["rows"][1][1] == -2.5);
}

TEST_CASE("trial summary JSON carries every moment field") {
    MonteCarloSummary summary;
    summary.estimator = "ccp_real";
    summary.noise = "gaussian:sigma=1";
    summary.num_trials = 500;
    summary.num_windows = 10;
    summary.window_len = 100;
    summary.root_seed = 77;
    BinSummary bin;
    bin.bin = 10;
    bin.sample_mean = -0.001;
    bin.standard_error = 0.002;
    bin.sample_second_moment = 0.05;
    bin.sample_variance = 0.0499;
    bin.predicted_bound_abs = 0.2236;
    bin.predicted_second_moment = 0.05;
    summary.bins.push_back(bin);

    const auto j = nlohmann::json::parse(to_json_text(summary));
    CHECK(j["estimator"] == "ccp_real");
    CHECK(j["root_seed"] == 77);
    CHECK(j["bins"][0]["bin"] == 10);
    CHECK(j["bins"][0]["sample_mean"] == -0.001);
    CHECK(j["bins"][0]["predicted_bound_abs"] == 0.2236);
}

TEST_CASE("table CSV survives a write/read cycle bit for bit") {
    ReportTable table{"extremes",
                      {"a", "b", "c"},
                      {{6.02214076e23, -2.2250738585072014e-308, 0.1 + 0.2},
                       {-0.0, 1.0 / 3.0, 12345.678901234567}}};
    std::ostringstream out;
    write_table_csv(out, table);

    std::istringstream in(out.str());
    const ReportTable back = read_table_csv(in, "extremes");
    CHECK(back.name == "extremes");
    CHECK(back.columns == table.columns);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            CHECK(back.rows[r][c] == table.rows[r][c]);
        }
    }

    ReportTable ragged{"bad", {"a", "b"}, {{1.0}}};
    std::ostringstream sink;
    CHECK_THROWS_AS(write_table_csv(sink, ragged), std::runtime_error);
}

TEST_CASE("series CSV lays the columns side by side") {
    const ExperimentReport report = tiny_report();
    std::ostringstream out;
    write_series_csv(out, report);

    std::istringstream in(out.str());
    const ReportTable back = read_table_csv(in);
    CHECK(back.columns == std::vector<std::string>{"bin", "raw", "scaled"});
    REQUIRE(back.rows.size() == 3);
    CHECK(back.rows[2][0] == 2.0);
    CHECK(back.rows[2][1] == 4.0);
    CHECK(back.rows[2][2] == 2.0);

    ExperimentReport uneven = report;
    uneven.series[1].second.pop_back();
    std::ostringstream sink;
    CHECK_THROWS_AS(write_series_csv(sink, uneven), std::runtime_error);

    ExperimentReport empty;
    empty.name = "empty";
    CHECK_THROWS_AS(write_series_csv(sink, empty), std::runtime_error);
}

TEST_CASE("PSD CSV carries the frequency axis") {
    PsdEstimate estimate;
    estimate.power = {4.0, 1.0, 0.25, 1.0};

    std::ostringstream with_rate;
    write_psd_csv(with_rate, estimate, 400.0);
    std::istringstream in(with_rate.str());
    const ReportTable table = read_table_csv(in);
    CHECK(table.columns ==
          std::vector<std::string>{"bin", "freq_hz", "power_linear",
                                   "power_db"});
    REQUIRE(table.rows.size() == 4);
    CHECK(table.rows[1][1] == 100.0);
    CHECK(table.rows[2][2] == 0.25);
    CHECK(table.rows[2][3] == doctest::Approx(10.0 * std::log10(0.25)));

    std::ostringstream normalized;
    write_psd_csv(normalized, estimate, std::nullopt);
    std::istringstream nin(normalized.str());
    CHECK(read_table_csv(nin).rows[1][1] == 0.25);
}

TEST_CASE("CSV reader names the offending line") {
    std::istringstream ragged("a,b\n1,2\n3\n");
    CHECK_THROWS_WITH_AS(read_table_csv(ragged),
                         "line 3 has 1 cells, header has 2",
                         std::runtime_error);

    std::istringstream sour("a,b\n1,banana\n");
    CHECK_THROWS_WITH_AS(read_table_csv(sour),
                         "line 2 cell is not numeric: banana",
                         std::runtime_error);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_table_csv(empty), std::runtime_error);

    std::istringstream crlf("a,b\r\n1,2\r\n\r\n");
    const ReportTable tolerant = read_table_csv(crlf);
    CHECK(tolerant.rows.size() == 1);
    CHECK(tolerant.rows[0][1] == 2.0);
}

TEST_CASE("report bundles rewrite byte-identically") {
    const TempDir tmp;
    const ExperimentReport report = tiny_report();

    const auto written = write_report(report, tmp.path, ReportFormat::both);
    // tiny.json, tiny_checks.csv, tiny_series.csv, tiny_meta.json
    REQUIRE(written.size() == 4);
    for (const auto& path : written) CHECK(fs::exists(path));
    CHECK(written[0].filename() == "tiny.json");
    CHECK(written[3].filename() == "tiny_meta.json");

    std::vector<std::string> first;
    for (std::size_t i = 0; i + 1 < written.size(); ++i) {
        first.push_back(slurp(written[i]));
    }
    const auto meta = nlohmann::json::parse(slurp(written[3]));
    CHECK(meta["experiment"] == "tiny");
    CHECK(meta["generated_at"].get<std::string>().size() == 20);
    CHECK(meta["data_files"].size() == 3);

    const auto rewritten = write_report(report, tmp.path, ReportFormat::both);
    REQUIRE(rewritten == written);
    for (std::size_t i = 0; i + 1 < written.size(); ++i) {
        CHECK(slurp(written[i]) == first[i]);
    }

    const auto json_only = write_report(report, tmp.path / "j",
                                        ReportFormat::json);
    REQUIRE(json_only.size() == 2);
    CHECK(json_only[0].filename() == "tiny.json");

    const auto csv_only = write_report(report, tmp.path / "c",
                                       ReportFormat::csv);
    REQUIRE(csv_only.size() == 3);
    CHECK(csv_only[0].filename() == "tiny_checks.csv");
}
