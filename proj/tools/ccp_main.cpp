// ccp: cross-correlation PSD estimation and its validation experiments.
//
// Exit codes: 0 success, 1 an attached assertion failed (outputs are still
// written), 2 usage or configuration error, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccp/csv_io.hpp"
#include "ccp/estimators.hpp"
#include "ccp/experiments.hpp"
#include "ccp/monte_carlo.hpp"
#include "ccp/noise.hpp"
#include "ccp/report_io.hpp"
#include "ccp/sample_record.hpp"
#include "ccp/spectrum.hpp"

namespace {

using ccp::ExperimentReport;
using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 0x5EED;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

ccp::Reduction parse_reduction(const std::string& text) {
    if (text == "real") return ccp::Reduction::real;
    if (text == "abs") return ccp::Reduction::abs;
    if (text == "modulus_of_mean") return ccp::Reduction::modulus_of_mean;
    if (text == "phase_corrected") return ccp::Reduction::phase_corrected;
    throw UsageError("--reduction must be real, abs, modulus_of_mean, or "
                     "phase_corrected (got " + text + ")");
}

std::vector<ccp::Spectrum> spectra_of(
    const std::vector<std::span<const double>>& windows) {
    std::vector<ccp::Spectrum> spectra;
    spectra.reserve(windows.size());
    for (const auto& w : windows) spectra.push_back(ccp::dft_normalized(w));
    return spectra;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() +
                                 " for writing");
    }
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_meta_sidecar(const std::filesystem::path& dir,
                        const std::string& stem,
                        const std::vector<std::string>& data_files) {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);

    ordered_json meta;
    meta["generated_at"] = stamp;
    meta["data_files"] = data_files;
    write_text_file(dir / (stem + "_meta.json"), meta.dump(2) + "\n");
}

int report_flags(const ExperimentReport& report) {
    for (const auto& [name, ok] : report.pass_flags) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    }
    const std::size_t failures = ccp::count_hard_failures(report);
    if (failures > 0) {
        std::cout << failures << " hard check(s) failed\n";
        return 1;
    }
    return 0;
}

int run_experiment_command(const ExperimentReport& report,
                           const std::filesystem::path& outdir,
                           ccp::ReportFormat format) {
    const auto written = ccp::write_report(report, outdir, format);
    for (const auto& path : written) {
        std::cout << "wrote " << path.string() << '\n';
    }
    return report_flags(report);
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
    std::string input;
    std::string method = "ccp";
    std::string reduction = "abs";
    std::size_t num_windows = 0;
    std::size_t window_len = 0;
    std::size_t gap = 0;
    double rate = 0.0;
    double phase = 0.0;
    bool phase_set = false;
    bool validate_theorems = false;
    std::string outdir = "ccp_out";
    std::string format = "both";
};

ordered_json psd_to_json(const ccp::PsdEstimate& estimate,
                         std::optional<double> sample_rate) {
    ordered_json j;
    j["method"] = ccp::to_string(estimate.method);
    j["reduction"] = ccp::to_string(estimate.reduction);
    j["windows"] = estimate.num_windows;
    j["window_len"] = estimate.window_len;
    if (sample_rate) {
        j["sample_rate_hz"] = *sample_rate;
    } else {
        j["sample_rate_hz"] = nullptr;
    }
    j["power"] = estimate.power;
    j["power_db"] = estimate.power_db();
    return j;
}

// Identities every estimate must satisfy, checked when requested: the abs
// reduction equals |real| bin-wise, no real part exceeds the modulus of the
// averaged cross term, and the squared-modulus average preserves the mean
// window energy.
int check_estimate_identities(
    const std::vector<std::span<const double>>& windows,
    const std::vector<ccp::Spectrum>& spectra) {
    int failures = 0;

    const auto real_est = ccp::ccp(spectra, ccp::Reduction::real);
    const auto abs_est = ccp::ccp(spectra, ccp::Reduction::abs);
    const auto mod_est = ccp::ccp(spectra, ccp::Reduction::modulus_of_mean);
    const std::size_t L = real_est.power.size();

    bool abs_ok = true;
    bool mod_ok = true;
    for (std::size_t f = 0; f < L; ++f) {
        abs_ok = abs_ok &&
                 std::abs(abs_est.power[f] - std::abs(real_est.power[f])) <=
                     1e-12 * std::max(1.0, std::abs(real_est.power[f]));
        mod_ok = mod_ok &&
                 real_est.power[f] <= mod_est.power[f] +
                     1e-12 * std::max(1.0, mod_est.power[f]);
    }

    const auto bart = ccp::bartlett(spectra);
    long double spectral = 0.0L;
    for (double p : bart.power) spectral += p;
    long double energy = 0.0L;
    for (const auto& w : windows) {
        for (double x : w) energy += static_cast<long double>(x) * x;
    }
    energy /= static_cast<long double>(windows.size());
    const double parseval_rel =
        std::abs(static_cast<double>(spectral - energy)) /
        std::max(1.0, static_cast<double>(energy));
    const bool parseval_ok = parseval_rel <= 1e-10;

    std::cout << (abs_ok ? "PASS" : "FAIL")
              << " abs_reduction_matches_signed_magnitude\n";
    std::cout << (mod_ok ? "PASS" : "FAIL")
              << " signed_reduction_bounded_by_modulus\n";
    std::cout << (parseval_ok ? "PASS" : "FAIL")
              << " energy_preserved_by_transform (rel err "
              << fmt(parseval_rel) << ")\n";
    failures += !abs_ok + !mod_ok + !parseval_ok;
    return failures;
}

int run_estimate(const EstimateOptions& opt) {
    if (opt.num_windows == 0) {
        throw UsageError("estimate requires -M/--windows");
    }
    if (opt.validate_theorems && opt.num_windows < 3) {
        throw UsageError(
            "-M " + std::to_string(opt.num_windows) +
            " is too small for --validate-theorems: the closed-form moment "
            "guarantees hold only for M >= 3 windows");
    }
    if (opt.input.empty()) {
        throw UsageError("estimate requires --input FILE");
    }
    if (opt.window_len == 0) {
        throw UsageError("estimate requires -L/--window-len");
    }
    const ccp::ReportFormat format = ccp::parse_report_format(opt.format);

    ccp::SampleRecord record = ccp::ingest_csv_file(opt.input);
    if (opt.rate > 0.0) record.sample_rate = opt.rate;

    const ccp::WindowPlan plan{opt.window_len, opt.num_windows, opt.gap};
    ccp::validate(plan);
    const auto windows = ccp::partition(record, plan);
    const auto spectra = spectra_of(windows);

    ccp::PsdEstimate estimate;
    if (opt.method == "bartlett") {
        estimate = ccp::bartlett(spectra);
    } else if (opt.method == "welch") {
        estimate = ccp::welch_hann(std::span<const std::span<const double>>(
            windows.data(), windows.size()));
    } else if (opt.method == "ccp") {
        const ccp::Reduction reduction = parse_reduction(opt.reduction);
        if (reduction == ccp::Reduction::phase_corrected) {
            if (opt.phase_set) {
                estimate = ccp::ccp_phase_corrected(spectra, opt.phase);
            } else if (opt.gap > 0) {
                estimate = ccp::ccp_phase_corrected(
                    spectra,
                    ccp::gap_phase_schedule(opt.gap, opt.window_len));
            } else {
                throw UsageError(
                    "--reduction phase_corrected needs --phase THETA or a "
                    "nonzero --gap to derive the rotation schedule");
            }
        } else {
            estimate = ccp::ccp(spectra, reduction);
        }
    } else {
        throw UsageError("--method must be bartlett, welch, or ccp (got " +
                         opt.method + ")");
    }

    const std::filesystem::path dir(opt.outdir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create directory " + dir.string() +
                                 ": " + ec.message());
    }

    std::vector<std::string> data_files;
    if (format != ccp::ReportFormat::json) {
        std::ostringstream text;
        ccp::write_psd_csv(text, estimate, record.sample_rate);
        write_text_file(dir / "psd.csv", text.str());
        data_files.push_back("psd.csv");
        std::cout << "wrote " << (dir / "psd.csv").string() << '\n';
    }
    if (format != ccp::ReportFormat::csv) {
        write_text_file(dir / "psd.json",
                        psd_to_json(estimate, record.sample_rate).dump(2) +
                            "\n");
        data_files.push_back("psd.json");
        std::cout << "wrote " << (dir / "psd.json").string() << '\n';
    }
    write_meta_sidecar(dir, "psd", data_files);

    if (opt.validate_theorems) {
        return check_estimate_identities(windows, spectra) == 0 ? 0 : 1;
    }
    return 0;
}

// ---------------------------------------------------------------- validate

int run_validate(std::uint64_t seed, std::size_t trials,
                 const std::string& noise_text) {
    const ccp::NoiseModel noise = ccp::parse_noise_model(noise_text);
    constexpr std::size_t kL = 100;
    constexpr std::size_t kBin = 10;

    struct Row {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Row> rows;

    std::uint64_t stream = 0;
    for (const std::size_t m : {std::size_t{3}, std::size_t{10},
                                std::size_t{100}}) {
        const std::string suffix = "_m" + std::to_string(m);

        ccp::TrialSpec spec;
        spec.noise = noise;
        spec.plan = ccp::WindowPlan{kL, m, 0};
        spec.estimator = ccp::TrialEstimator::ccp_real;
        spec.target_bins = {kBin};
        spec.num_trials = trials;
        spec.root_seed = ccp::sub_seed(seed, stream++);
        const auto signed_run = ccp::run_trials(spec);
        const auto& sb = signed_run.bins[0];

        const double z = sb.sample_mean / sb.standard_error;
        rows.push_back({"noise_mean_zero" + suffix, std::abs(z) <= 4.0,
                        "z=" + fmt(z)});

        const double rel =
            std::abs(sb.sample_second_moment - sb.predicted_second_moment) /
            sb.predicted_second_moment;
        rows.push_back({"second_moment_within_5pct" + suffix, rel <= 0.05,
                        "rel err=" + fmt(rel)});

        spec.estimator = ccp::TrialEstimator::ccp_abs;
        spec.root_seed = ccp::sub_seed(seed, stream++);
        const auto abs_run = ccp::run_trials(spec);
        const auto& ab = abs_run.bins[0];
        rows.push_back({"abs_mean_below_bound" + suffix,
                        ab.sample_mean <= ab.predicted_bound_abs,
                        fmt(ab.sample_mean) + " vs bound " +
                            fmt(ab.predicted_bound_abs)});
    }

    {
        constexpr std::size_t kM = 10;
        constexpr double kAmp = 0.2;  // |X(10)|^2 = A^2 * L / 4 = 1
        ccp::TrialSpec spec;
        spec.signal = ccp::generate_sinusoid(10.0, 100.0, kAmp, kL * kM);
        spec.noise = noise;
        spec.plan = ccp::WindowPlan{kL, kM, 0};
        spec.estimator = ccp::TrialEstimator::ccp_real;
        spec.target_bins = {kBin, 30};
        spec.num_trials = trials;
        spec.root_seed = ccp::sub_seed(seed, stream++);
        const auto checks = ccp::check_unbiasedness(spec, {1.0, 0.0});
        rows.push_back({"unbiased_at_signal_bin", checks[0].pass,
                        "z=" + fmt(checks[0].z_score)});
        rows.push_back({"mean_zero_off_signal", checks[1].pass,
                        "z=" + fmt(checks[1].z_score)});
    }

    {
        const auto check = ccp::check_variance_ordering(
            noise, ccp::WindowPlan{kL, 10, 0}, kBin, trials,
            ccp::sub_seed(seed, stream++));
        rows.push_back({"variance_below_squared_average", check.ordered,
                        "ratio=" + fmt(check.ratio)});
        rows.push_back({"variance_ratio_near_half", check.ratio_near_half,
                        "ratio=" + fmt(check.ratio)});
    }

    std::size_t failures = 0;
    for (const Row& row : rows) {
        std::cout << (row.pass ? "PASS " : "FAIL ") << row.name << " ("
                  << row.detail << ")\n";
        failures += !row.pass;
    }
    std::cout << (failures == 0 ? "all checks passed"
                                : std::to_string(failures) +
                                      " check(s) failed")
              << " [noise " << noise.to_string() << ", trials "
              << trials << ", seed " << seed << "]\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Power spectral density estimation via averaged cross-correlation "
        "of adjacent windows, with Bartlett and Welch baselines and "
        "self-validation experiments"};
    app.require_subcommand(1);

    EstimateOptions est_opt;
    std::uint64_t seed = kDefaultSeed;
    std::size_t trials = 0;
    std::string outdir = "ccp_out";
    std::string format = "both";
    std::string noise_text = "gaussian:sigma=1";

    auto* est = app.add_subcommand(
        "estimate", "Estimate a PSD from a CSV sample record");
    est->add_option("--input", est_opt.input,
                    "Input CSV: one sample per line, optional leading "
                    "'# sample_rate=HZ' header");
    est->add_option("--method", est_opt.method,
                    "bartlett | welch | ccp")
        ->capture_default_str();
    est->add_option("--reduction", est_opt.reduction,
                    "real | abs | modulus_of_mean | phase_corrected")
        ->capture_default_str();
    est->add_option("-M,--windows", est_opt.num_windows,
                    "Number of windows");
    est->add_option("-L,--window-len", est_opt.window_len,
                    "Samples per window");
    est->add_option("--gap", est_opt.gap,
                    "Samples skipped between consecutive windows")
        ->capture_default_str();
    est->add_option("--rate", est_opt.rate,
                    "Sample rate in Hz (overrides any rate in the input)");
    auto* phase_opt = est->add_option(
        "--phase", est_opt.phase,
        "Constant rotation theta for --reduction phase_corrected");
    est->add_flag("--validate-theorems", est_opt.validate_theorems,
                  "Check the estimator's structural identities on this "
                  "input (requires M >= 3)");
    est->add_option("-o,--output", est_opt.outdir, "Output directory")
        ->capture_default_str();
    est->add_option("--format", est_opt.format, "json | csv | both")
        ->capture_default_str();

    auto add_experiment_flags = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Root seed")->capture_default_str();
        cmd->add_option("-o,--output", outdir, "Output directory")
            ->capture_default_str();
        cmd->add_option("--format", format, "json | csv | both")
            ->capture_default_str();
    };

    auto* cmp = app.add_subcommand(
        "compare",
        "Bartlett vs Welch vs cross-correlation on a noisy tone: noise "
        "floors and signal peaks at 10 and 100 windows");
    add_experiment_flags(cmp);

    auto* bnd = app.add_subcommand(
        "bounds",
        "Mean and second moment of the noise-only estimator against their "
        "closed forms, 3 to 1000 windows");
    add_experiment_flags(bnd);
    bnd->add_option("--trials", trials, "Monte Carlo trials per row");

    auto* gap = app.add_subcommand(
        "phase-gap",
        "Attenuation of a tone under inter-window sampling gaps, with "
        "noiseless checks of the attenuation laws");
    add_experiment_flags(gap);

    auto* ann = app.add_subcommand(
        "annihilate",
        "A tone whose per-window phase step is a quarter turn vanishes "
        "from the signed estimate; a pi/2 rotation restores it");
    add_experiment_flags(ann);

    auto* ngs = app.add_subcommand(
        "nongaussian",
        "Noise-only estimator means under Laplace, uniform, and "
        "lag-1 autoregressive noise, 3 to 100 windows");
    add_experiment_flags(ngs);
    ngs->add_option("--trials", trials, "Monte Carlo trials per cell");

    auto* val = app.add_subcommand(
        "validate",
        "Run the closed-form moment property suite and print a pass/fail "
        "matrix");
    val->add_option("--seed", seed, "Root seed")->capture_default_str();
    val->add_option("--trials", trials, "Monte Carlo trials per check");
    val->add_option("--noise", noise_text,
                    "Noise model, e.g. gaussian:sigma=1 or "
                    "ar1:sigma=1,phi=0.5")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        est_opt.phase_set = phase_opt->count() > 0;
        if (trials == 0) {
            trials = ngs->parsed() ? 1000 : 10000;
        }
        const auto fmt_parsed = [&] { return ccp::parse_report_format(format); };

        if (est->parsed()) return run_estimate(est_opt);
        if (cmp->parsed()) {
            return run_experiment_command(ccp::run_comparison(seed), outdir,
                                          fmt_parsed());
        }
        if (bnd->parsed()) {
            return run_experiment_command(
                ccp::run_bound_validation(seed, trials), outdir, fmt_parsed());
        }
        if (gap->parsed()) {
            return run_experiment_command(ccp::run_phase_gap(seed), outdir,
                                          fmt_parsed());
        }
        if (ann->parsed()) {
            return run_experiment_command(ccp::run_annihilation(seed), outdir,
                                          fmt_parsed());
        }
        if (ngs->parsed()) {
            return run_experiment_command(
                ccp::run_nongaussian(seed, trials), outdir, fmt_parsed());
        }
        if (val->parsed()) return run_validate(seed, trials, noise_text);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
