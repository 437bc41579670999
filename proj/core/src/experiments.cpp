#include "ccp/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "ccp/estimators.hpp"
#include "ccp/monte_carlo.hpp"
#include "ccp/noise.hpp"
#include "ccp/sample_record.hpp"
#include "ccp/spectrum.hpp"

namespace ccp {

namespace {

// Frozen reference columns for the default trial counts. Tolerances:
// 0.012 for the Gaussian bound table, 0.015 for the non-Gaussian table
// (roughly four reference standard errors in each case).
constexpr std::array<double, 6> kBoundTableWindows = {3, 5, 10, 25, 100, 1000};
constexpr std::array<double, 6> kBoundTableMeanRef = {0.2955, 0.2358, 0.1723,
                                                      0.1110, 0.0558, 0.0179};
constexpr double kBoundMeanTol = 0.012;

constexpr std::array<double, 5> kNoiseTableWindows = {3, 5, 10, 25, 100};
constexpr std::array<double, 5> kLaplaceRef = {0.3051, 0.2331, 0.1764,
                                               0.1105, 0.0560};
constexpr std::array<double, 5> kUniformRef = {0.2954, 0.2347, 0.1671,
                                               0.1138, 0.0566};
constexpr std::array<double, 5> kAr1Ref = {0.3988, 0.3253, 0.2348,
                                           0.1463, 0.0721};
constexpr double kNoiseTableTol = 0.015;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_count(std::size_t v) { return std::to_string(v); }

void add_param(ExperimentReport& report, std::string key, std::string value) {
    report.parameters.emplace_back(std::move(key), std::move(value));
}

void add_series(ExperimentReport& report, std::string name,
                std::vector<double> values) {
    report.series.emplace_back(std::move(name), std::move(values));
}

void add_power_series(ExperimentReport& report, const std::string& name,
                      const std::vector<double>& power) {
    add_series(report, name, power);
    add_series(report, name + "_db", to_db(power));
}

std::vector<double> freq_axis(std::size_t window_len, double sample_rate) {
    std::vector<double> freq(window_len);
    for (std::size_t f = 0; f < window_len; ++f) {
        freq[f] = static_cast<double>(f) * sample_rate /
                  static_cast<double>(window_len);
    }
    return freq;
}

std::vector<Spectrum> spectra_of(
    const std::vector<std::span<const double>>& windows) {
    std::vector<Spectrum> spectra;
    spectra.reserve(windows.size());
    for (const auto& w : windows) spectra.push_back(dft_normalized(w));
    return spectra;
}

double table_cell(const ReportTable& table, std::size_t row,
                  const std::string& column) {
    auto it = std::find(table.columns.begin(), table.columns.end(), column);
    if (it == table.columns.end()) {
        throw std::runtime_error("table " + table.name + " lacks column " +
                                 column);
    }
    return table.rows.at(row).at(
        static_cast<std::size_t>(it - table.columns.begin()));
}

double param_value(const ExperimentReport& report, const std::string& key) {
    const std::string* raw = find_parameter(report, key);
    if (!raw) {
        throw std::runtime_error("report " + report.name +
                                 " lacks parameter " + key);
    }
    return std::stod(*raw);
}

void flag(std::vector<std::pair<std::string, bool>>& flags, std::string name,
          bool value) {
    flags.emplace_back(std::move(name), value);
}

std::vector<std::pair<std::string, bool>> comparison_flags(
    const ExperimentReport& report) {
    const ReportTable* floors = find_table(report, "noise_floors");
    const ReportTable* peaks = find_table(report, "signal_peaks");
    if (!floors || !peaks) {
        throw std::runtime_error("comparison report is missing its tables");
    }

    std::vector<std::pair<std::string, bool>> flags_out;
    bool peaks_clear = true;
    for (std::size_t row = 0; row < floors->rows.size(); ++row) {
        const auto m = static_cast<std::size_t>(
            table_cell(*floors, row, "windows"));
        const std::string suffix = "_m" + std::to_string(m);
        const double bart = table_cell(*floors, row, "bartlett_floor_db");
        const double welch = table_cell(*floors, row, "welch_floor_db");
        const double ccp_f = table_cell(*floors, row, "ccp_floor_db");
        flag(flags_out, "bartlett_floor_near_0db" + suffix,
             std::abs(bart - 0.0) <= 1.0);
        flag(flags_out, "welch_floor_near_minus4db" + suffix,
             std::abs(welch - (-4.0)) <= 1.0);
        const double ccp_target = (m == 10) ? -8.0 : -13.0;
        flag(flags_out,
             "ccp_floor_near_" + std::to_string(static_cast<int>(-ccp_target)) +
                 "db" + suffix,
             std::abs(ccp_f - ccp_target) <= 1.5);

        peaks_clear = peaks_clear &&
            (table_cell(*peaks, row, "bartlett_peak_db") - bart >= 10.0) &&
            (table_cell(*peaks, row, "welch_peak_db") - welch >= 10.0) &&
            (table_cell(*peaks, row, "ccp_peak_db") - ccp_f >= 10.0);
    }
    flag(flags_out, "peaks_at_least_10db_above_floor", peaks_clear);
    return flags_out;
}

std::vector<std::pair<std::string, bool>> bound_validation_flags(
    const ExperimentReport& report) {
    const ReportTable* table = find_table(report, "bound_table");
    if (!table) {
        throw std::runtime_error("bound_validation report lacks bound_table");
    }
    const auto trials = static_cast<std::size_t>(param_value(report, "trials"));

    bool below = true;
    bool decreasing = true;
    bool within_ref = true;
    bool second_moment_ok = true;
    double prev_mean = 0.0;
    for (std::size_t row = 0; row < table->rows.size(); ++row) {
        const double mean = table_cell(*table, row, "mean");
        const double bound = table_cell(*table, row, "mean_bound");
        const double mean_sq = table_cell(*table, row, "sample_mean_sq");
        const double pred_sq = table_cell(*table, row, "pred_mean_sq");
        below = below && (mean <= bound);
        if (row > 0) decreasing = decreasing && (mean < prev_mean);
        prev_mean = mean;
        within_ref = within_ref &&
                     (std::abs(mean - kBoundTableMeanRef[row]) <= kBoundMeanTol);
        second_moment_ok =
            second_moment_ok && (std::abs(mean_sq - pred_sq) <= 0.05 * pred_sq);
    }

    std::vector<std::pair<std::string, bool>> flags_out;
    flag(flags_out, "means_below_bound", below);
    flag(flags_out, "means_strictly_decreasing", decreasing);
    if (trials >= 10000) {
        flag(flags_out, "means_match_reference", within_ref);
        flag(flags_out, "second_moments_within_5pct", second_moment_ok);
    }
    return flags_out;
}

std::vector<std::pair<std::string, bool>> phase_gap_flags(
    const ExperimentReport& report) {
    const ReportTable* noisy = find_table(report, "gap_attenuation");
    const ReportTable* control = find_table(report, "noiseless_control");
    if (!noisy || !control) {
        throw std::runtime_error("phase_gap report is missing its tables");
    }

    bool detected = true;
    bool within_circular = true;
    double worst_power = 0.0;
    std::size_t worst_gap = 0;
    for (std::size_t row = 0; row < noisy->rows.size(); ++row) {
        detected = detected &&
                   (table_cell(*noisy, row, "detection_margin_db") >= 6.0);
        const double measured_db = table_cell(*noisy, row, "measured_db");
        const double circular_db = table_cell(*noisy, row, "circular_law_db");
        within_circular =
            within_circular && (std::abs(measured_db - circular_db) <= 1.5);
        const double power = table_cell(*noisy, row, "signal_bin_power");
        if (row == 0 || power < worst_power) {
            worst_power = power;
            worst_gap = static_cast<std::size_t>(table_cell(*noisy, row, "gap"));
        }
    }

    bool adjacent_ok = true;
    bool circular_ok = true;
    for (std::size_t row = 0; row < control->rows.size(); ++row) {
        adjacent_ok = adjacent_ok &&
            (table_cell(*control, row, "adjacent_rel_error_m50") <= 1e-8);
        circular_ok = circular_ok &&
            (table_cell(*control, row, "circular_rel_error_m10") <= 1e-8);
    }

    std::vector<std::pair<std::string, bool>> flags_out;
    flag(flags_out, "detected_at_every_gap", detected);
    flag(flags_out, "gap60_most_attenuated", worst_gap == 60);
    flag(flags_out, "noiseless_adjacent_law_1e8", adjacent_ok);
    flag(flags_out, "noiseless_circular_form_1e8", circular_ok);
    flag(flags_out, "measured_within_1p5db_of_circular_form", within_circular);
    return flags_out;
}

std::vector<std::pair<std::string, bool>> annihilation_flags(
    const ExperimentReport& report) {
    const ReportTable* table = find_table(report, "peaks_and_floors");
    if (!table || table->rows.empty()) {
        throw std::runtime_error("annihilation report lacks peaks_and_floors");
    }
    const double bart_peak = table_cell(*table, 0, "bartlett_peak_db");
    const double uncorrected = table_cell(*table, 0, "uncorrected_peak_db");
    const double corrected = table_cell(*table, 0, "corrected_peak_db");
    const double bart_floor = table_cell(*table, 0, "bartlett_floor_db");
    const double ccp_floor = table_cell(*table, 0, "ccp_floor_db");
    const double ctrl_uncorr = table_cell(*table, 0, "control_uncorrected_peak");
    const double ctrl_corr = table_cell(*table, 0, "control_corrected_peak");

    std::vector<std::pair<std::string, bool>> flags_out;
    flag(flags_out, "uncorrected_peak_within_3db_of_floor",
         uncorrected <= ccp_floor + 3.0);
    flag(flags_out, "corrected_peak_within_1p5db_of_bartlett",
         std::abs(corrected - bart_peak) <= 1.5);
    flag(flags_out, "ccp_floor_5db_below_bartlett",
         bart_floor - ccp_floor >= 5.0);
    flag(flags_out, "noiseless_control_annihilates",
         std::abs(ctrl_uncorr) < 1e-6 * ctrl_corr);
    return flags_out;
}

std::vector<std::pair<std::string, bool>> nongaussian_flags(
    const ExperimentReport& report) {
    const ReportTable* table = find_table(report, "noise_table");
    if (!table) {
        throw std::runtime_error("nongaussian report lacks noise_table");
    }
    const auto trials = static_cast<std::size_t>(param_value(report, "trials"));

    const std::array<std::string, 3> models = {"laplace", "uniform", "ar1"};
    const std::array<const std::array<double, 5>*, 3> refs = {
        &kLaplaceRef, &kUniformRef, &kAr1Ref};

    std::vector<std::pair<std::string, bool>> flags_out;
    std::array<double, 3> at_m25{};
    std::array<double, 3> at_m100{};
    bool ar1_dominates = true;

    for (std::size_t row = 0; row < table->rows.size(); ++row) {
        const double m = table_cell(*table, row, "windows");
        std::array<double, 3> cell{};
        for (std::size_t k = 0; k < models.size(); ++k) {
            cell[k] = table_cell(*table, row, models[k]);
            if (m == 25.0) at_m25[k] = cell[k];
            if (m == 100.0) at_m100[k] = cell[k];
        }
        ar1_dominates =
            ar1_dominates && (cell[2] > cell[0]) && (cell[2] > cell[1]);
    }

    for (std::size_t k = 0; k < models.size(); ++k) {
        if (trials == 1000) {
            bool within = true;
            for (std::size_t row = 0; row < table->rows.size(); ++row) {
                within = within && (std::abs(table_cell(*table, row, models[k]) -
                                             (*refs[k])[row]) <= kNoiseTableTol);
            }
            flag(flags_out, models[k] + "_within_reference", within);
        }
        const double ratio = at_m100[k] / at_m25[k];
        flag(flags_out, models[k] + "_decay_ratio_near_half",
             ratio >= 0.4 && ratio <= 0.6);
    }
    flag(flags_out, "soft_ar1_exceeds_iid_models", ar1_dominates);
    return flags_out;
}

}  // namespace

const std::vector<double>* find_series(const ExperimentReport& report,
                                       const std::string& name) {
    for (const auto& [key, values] : report.series) {
        if (key == name) return &values;
    }
    return nullptr;
}

const ReportTable* find_table(const ExperimentReport& report,
                              const std::string& name) {
    for (const auto& table : report.tables) {
        if (table.name == name) return &table;
    }
    return nullptr;
}

const std::string* find_parameter(const ExperimentReport& report,
                                  const std::string& name) {
    for (const auto& [key, value] : report.parameters) {
        if (key == name) return &value;
    }
    return nullptr;
}

std::vector<std::pair<std::string, bool>> compute_pass_flags(
    const ExperimentReport& report) {
    if (report.name == "comparison") return comparison_flags(report);
    if (report.name == "bound_validation") return bound_validation_flags(report);
    if (report.name == "phase_gap") return phase_gap_flags(report);
    if (report.name == "annihilation") return annihilation_flags(report);
    if (report.name == "nongaussian") return nongaussian_flags(report);
    throw std::runtime_error("unknown experiment report: " + report.name);
}

std::size_t count_hard_failures(const ExperimentReport& report) {
    std::size_t failures = 0;
    for (const auto& [name, ok] : report.pass_flags) {
        if (!ok && name.rfind("soft_", 0) != 0) ++failures;
    }
    return failures;
}

double noise_floor_db(std::span<const double> power, std::size_t signal_bin) {
    const std::size_t L = power.size();
    if (L < 8) {
        throw std::invalid_argument("spectrum too short for a floor estimate");
    }
    long double sum = 0.0L;
    std::size_t count = 0;
    for (std::size_t f = 1; f < (L + 1) / 2; ++f) {
        if (2 * f == L) continue;
        const std::size_t dist =
            f > signal_bin ? f - signal_bin : signal_bin - f;
        if (dist <= 2) continue;
        sum += power[f];
        ++count;
    }
    if (count == 0) {
        throw std::invalid_argument("no bins left for the floor estimate");
    }
    return to_db(static_cast<double>(sum / static_cast<long double>(count)));
}

std::pair<std::size_t, double> peak_over(std::span<const double> power,
                                         std::size_t lo, std::size_t hi) {
    if (lo > hi || hi >= power.size()) {
        throw std::invalid_argument("peak window out of range");
    }
    std::size_t best = lo;
    for (std::size_t f = lo + 1; f <= hi; ++f) {
        if (power[f] > power[best]) best = f;
    }
    return {best, power[best]};
}

ExperimentReport run_comparison(std::uint64_t seed) {
    constexpr std::size_t kL = 80;
    constexpr double kRate = 800.0;
    constexpr double kFreq = 200.0;
    constexpr double kAmp = 1.0;
    constexpr std::size_t kTotalWindows = 100;
    constexpr std::size_t kSignalBin = 20;  // 200 Hz * 80 / 800 Hz

    const NoiseModel noise{NoiseKind::gaussian, 1.0, 0.0};
    SampleRecord record =
        generate_sinusoid(kFreq, kRate, kAmp, kL * kTotalWindows);
    {
        const SampleRecord n = sample(noise, record.size(), seed);
        for (std::size_t i = 0; i < record.size(); ++i) {
            record.samples[i] += n.samples[i];
        }
    }

    ExperimentReport report;
    report.name = "comparison";
    add_param(report, "window_len", fmt_count(kL));
    add_param(report, "sample_rate_hz", fmt(kRate));
    add_param(report, "signal_freq_hz", fmt(kFreq));
    add_param(report, "signal_bin", fmt_count(kSignalBin));
    add_param(report, "signal_amplitude", fmt(kAmp));
    add_param(report, "noise", noise.to_string());
    add_param(report, "window_counts", "10,100");
    add_param(report, "seed", fmt_count(seed));
    add_param(report, "floor_metric",
              "dB of mean linear power over bins 1..L/2-1, signal bin +/- 2 "
              "excluded");

    add_series(report, "freq_hz", freq_axis(kL, kRate));

    ReportTable floors{"noise_floors",
                       {"windows", "bartlett_floor_db", "welch_floor_db",
                        "ccp_floor_db"},
                       {}};
    ReportTable peaks{"signal_peaks",
                      {"windows", "bartlett_peak_db", "welch_peak_db",
                       "ccp_peak_db"},
                      {}};

    for (const std::size_t m : {std::size_t{10}, std::size_t{100}}) {
        const WindowPlan plan{kL, m, 0};
        const auto windows = partition(record, plan);
        const auto spectra = spectra_of(windows);
        const std::string suffix = "_m" + std::to_string(m);

        const PsdEstimate bart = bartlett(spectra);
        const PsdEstimate welch = welch_hann(
            std::span<const std::span<const double>>(windows.data(),
                                                     windows.size()));
        const PsdEstimate cross = ccp(spectra, Reduction::abs);

        add_power_series(report, "bartlett" + suffix, bart.power);
        add_power_series(report, "welch" + suffix, welch.power);
        add_power_series(report, "ccp_abs" + suffix, cross.power);

        floors.rows.push_back({static_cast<double>(m),
                               noise_floor_db(bart.power, kSignalBin),
                               noise_floor_db(welch.power, kSignalBin),
                               noise_floor_db(cross.power, kSignalBin)});
        peaks.rows.push_back({static_cast<double>(m),
                              to_db(bart.power[kSignalBin]),
                              to_db(welch.power[kSignalBin]),
                              to_db(cross.power[kSignalBin])});
    }

    report.tables.push_back(std::move(floors));
    report.tables.push_back(std::move(peaks));
    report.pass_flags = compute_pass_flags(report);
    return report;
}

ExperimentReport run_bound_validation(std::uint64_t seed, std::size_t trials) {
    constexpr std::size_t kL = 100;
    constexpr std::size_t kBin = 10;

    ExperimentReport report;
    report.name = "bound_validation";
    add_param(report, "window_len", fmt_count(kL));
    add_param(report, "target_bin", fmt_count(kBin));
    add_param(report, "trials", fmt_count(trials));
    add_param(report, "noise", "gaussian:sigma=1");
    add_param(report, "estimator", "ccp_abs");
    add_param(report, "seed", fmt_count(seed));

    ReportTable table{"bound_table",
                      {"windows", "mean", "se", "mean_bound",
                       "sample_mean_sq", "pred_mean_sq"},
                      {}};

    for (std::size_t row = 0; row < kBoundTableWindows.size(); ++row) {
        const auto m = static_cast<std::size_t>(kBoundTableWindows[row]);
        TrialSpec spec;
        spec.noise = NoiseModel{NoiseKind::gaussian, 1.0, 0.0};
        spec.plan = WindowPlan{kL, m, 0};
        spec.estimator = TrialEstimator::ccp_abs;
        spec.target_bins = {kBin};
        spec.num_trials = trials;
        spec.root_seed = sub_seed(seed, row);
        const MonteCarloSummary summary = run_trials(spec);
        const BinSummary& bin = summary.bins[0];
        table.rows.push_back({static_cast<double>(m), bin.sample_mean,
                              bin.standard_error, bin.predicted_bound_abs,
                              bin.sample_second_moment,
                              bin.predicted_second_moment});
    }

    report.tables.push_back(std::move(table));
    report.pass_flags = compute_pass_flags(report);
    return report;
}

ExperimentReport run_phase_gap(std::uint64_t seed) {
    constexpr std::size_t kL = 1000;
    constexpr double kRate = 1000.0;
    constexpr double kFreq = 121.0;
    constexpr std::size_t kBin = 121;
    constexpr std::size_t kM = 10;
    constexpr std::size_t kControlM = 50;
    constexpr double kAmp = 1.0;
    const double signal_power = kAmp * kAmp * static_cast<double>(kL) / 4.0;
    const std::array<std::size_t, 4> gaps = {20, 40, 60, 80};

    ExperimentReport report;
    report.name = "phase_gap";
    add_param(report, "window_len", fmt_count(kL));
    add_param(report, "sample_rate_hz", fmt(kRate));
    add_param(report, "signal_freq_hz", fmt(kFreq));
    add_param(report, "signal_bin", fmt_count(kBin));
    add_param(report, "signal_amplitude", fmt(kAmp));
    add_param(report, "signal_power", fmt(signal_power));
    add_param(report, "windows", fmt_count(kM));
    add_param(report, "noise", "gaussian:sigma=1");
    add_param(report, "seed", fmt_count(seed));
    // The circular estimator pairs the last window with the first; that
    // wrap pair carries phase step (M-1)*delta instead of delta. With
    // control_windows chosen so M*delta is a whole number of turns for
    // every gap here, the wrap pair matches the adjacent pairs and the
    // per-pair law cos(delta)*|X|^2 holds exactly.
    add_param(report, "control_windows", fmt_count(kControlM));

    add_series(report, "freq_hz", freq_axis(kL, kRate));

    ReportTable noisy{"gap_attenuation",
                      {"gap", "phase_step_periods", "signal_bin_power",
                       "adjacent_law_power", "circular_law_power",
                       "measured_db", "circular_law_db", "floor_db",
                       "detection_margin_db"},
                      {}};
    ReportTable control{"noiseless_control",
                        {"gap", "adjacent_rel_error_m50",
                         "circular_rel_error_m10"},
                        {}};

    const NoiseModel noise{NoiseKind::gaussian, 1.0, 0.0};
    for (std::size_t g = 0; g < gaps.size(); ++g) {
        const std::size_t gap = gaps[g];
        const WindowPlan plan{kL, kM, gap};

        SampleRecord record =
            generate_sinusoid(kFreq, kRate, kAmp, plan.span_samples());
        {
            const SampleRecord n = sample(noise, record.size(),
                                          sub_seed(seed, g));
            for (std::size_t i = 0; i < record.size(); ++i) {
                record.samples[i] += n.samples[i];
            }
        }
        const auto spectra = spectra_of(partition(record, plan));
        const PsdEstimate estimate = ccp(spectra, Reduction::abs);
        add_power_series(report, "ccp_abs_gap" + std::to_string(gap),
                         estimate.power);

        const double phase_step_periods =
            std::fmod(static_cast<double>(gap) * kFreq / kRate, 1.0);
        const double adjacent =
            std::abs(expected_gap_attenuation(kBin, gap, kL)) * signal_power;
        const double circular =
            std::abs(circular_gap_attenuation(kBin, gap, kL, kM)) *
            signal_power;
        const double measured = estimate.power[kBin];
        const double floor_db = noise_floor_db(estimate.power, kBin);
        noisy.rows.push_back({static_cast<double>(gap), phase_step_periods,
                              measured, adjacent, circular, to_db(measured),
                              to_db(circular), floor_db,
                              to_db(measured) - floor_db});

        // Noiseless controls for the same gap.
        const WindowPlan aligned_plan{kL, kControlM, gap};
        const SampleRecord aligned_tone = generate_sinusoid(
            kFreq, kRate, kAmp, aligned_plan.span_samples());
        const auto aligned_spectra = spectra_of(
            partition(aligned_tone, aligned_plan));
        const double aligned_measured =
            ccp(aligned_spectra, Reduction::real).power[kBin];
        const double adjacent_signed =
            expected_gap_attenuation(kBin, gap, kL) * signal_power;
        const double adjacent_err =
            std::abs(aligned_measured - adjacent_signed) /
            std::abs(adjacent_signed);

        const SampleRecord short_tone =
            generate_sinusoid(kFreq, kRate, kAmp, plan.span_samples());
        const auto short_spectra = spectra_of(partition(short_tone, plan));
        const double short_measured =
            ccp(short_spectra, Reduction::real).power[kBin];
        const double circular_signed =
            circular_gap_attenuation(kBin, gap, kL, kM) * signal_power;
        const double circular_err =
            std::abs(short_measured - circular_signed) /
            std::abs(circular_signed);

        control.rows.push_back(
            {static_cast<double>(gap), adjacent_err, circular_err});
    }

    report.tables.push_back(std::move(noisy));
    report.tables.push_back(std::move(control));
    report.pass_flags = compute_pass_flags(report);
    return report;
}

ExperimentReport run_annihilation(std::uint64_t seed) {
    constexpr std::size_t kL = 1250;
    constexpr double kRate = 1000.0;
    constexpr double kFreq = 121.0;
    constexpr std::size_t kM = 10;
    constexpr double kAmp = 1.0;
    constexpr std::size_t kPeakLo = 148;
    constexpr std::size_t kPeakHi = 155;
    constexpr std::size_t kToneBin = 151;  // nearest bin to 121 Hz * 1.25 s
    const double theta = std::numbers::pi / 2.0;

    // The tone is phased to be even-symmetric about the first window's
    // center. That zeroes the quadrature beat between the tone and its
    // negative-frequency image in the noiseless control; the per-window
    // quarter-turn phase step is unaffected.
    const double omega = 2.0 * std::numbers::pi * kFreq / kRate;
    const double phase = -omega * static_cast<double>(kL - 1) / 2.0;

    const WindowPlan plan{kL, kM, 0};

    ExperimentReport report;
    report.name = "annihilation";
    add_param(report, "window_len", fmt_count(kL));
    add_param(report, "sample_rate_hz", fmt(kRate));
    add_param(report, "signal_freq_hz", fmt(kFreq));
    add_param(report, "tone_bin_nearest", fmt_count(kToneBin));
    add_param(report, "tone_bin_exact", fmt(kFreq * kL / kRate));
    add_param(report, "peak_window_bins", "148..155");
    add_param(report, "windows", fmt_count(kM));
    add_param(report, "signal_amplitude", fmt(kAmp));
    add_param(report, "signal_phase", fmt(phase));
    add_param(report, "correction_theta", fmt(theta));
    add_param(report, "noise", "gaussian:sigma=1");
    add_param(report, "seed", fmt_count(seed));

    add_series(report, "freq_hz", freq_axis(kL, kRate));

    SampleRecord record = generate_sinusoid(kFreq, kRate, kAmp,
                                            plan.span_samples(), phase);
    const SampleRecord tone_only = record;
    {
        const NoiseModel noise{NoiseKind::gaussian, 1.0, 0.0};
        const SampleRecord n = sample(noise, record.size(), seed);
        for (std::size_t i = 0; i < record.size(); ++i) {
            record.samples[i] += n.samples[i];
        }
    }

    const auto spectra = spectra_of(partition(record, plan));
    const PsdEstimate bart = bartlett(spectra);
    const PsdEstimate uncorrected = ccp(spectra, Reduction::real);
    const PsdEstimate corrected = ccp_phase_corrected(spectra, theta);

    add_power_series(report, "bartlett", bart.power);
    add_series(report, "ccp_real", uncorrected.power);
    add_series(report, "ccp_real_db", to_db(uncorrected.power));
    add_series(report, "ccp_corrected", corrected.power);
    add_series(report, "ccp_corrected_db", to_db(corrected.power));

    const auto ctrl_spectra = spectra_of(partition(tone_only, plan));
    const PsdEstimate ctrl_uncorrected = ccp(ctrl_spectra, Reduction::real);
    const PsdEstimate ctrl_corrected =
        ccp_phase_corrected(ctrl_spectra, theta);
    add_series(report, "control_ccp_real", ctrl_uncorrected.power);
    add_series(report, "control_ccp_corrected", ctrl_corrected.power);

    std::vector<double> abs_uncorrected(uncorrected.power.size());
    for (std::size_t f = 0; f < uncorrected.power.size(); ++f) {
        abs_uncorrected[f] = std::abs(uncorrected.power[f]);
    }

    ReportTable table{"peaks_and_floors",
                      {"bartlett_peak_db", "uncorrected_peak_db",
                       "corrected_peak_db", "bartlett_floor_db",
                       "ccp_floor_db", "control_uncorrected_peak",
                       "control_corrected_peak"},
                      {}};
    const double bart_peak = peak_over(bart.power, kPeakLo, kPeakHi).second;
    const double uncorr_peak =
        peak_over(uncorrected.power, kPeakLo, kPeakHi).second;
    const double corr_peak =
        peak_over(corrected.power, kPeakLo, kPeakHi).second;
    const double ctrl_uncorr_peak =
        peak_over(ctrl_uncorrected.power, kPeakLo, kPeakHi).second;
    const double ctrl_corr_peak =
        peak_over(ctrl_corrected.power, kPeakLo, kPeakHi).second;
    table.rows.push_back({to_db(bart_peak), to_db(uncorr_peak),
                          to_db(corr_peak),
                          noise_floor_db(bart.power, kToneBin),
                          noise_floor_db(abs_uncorrected, kToneBin),
                          ctrl_uncorr_peak, ctrl_corr_peak});
    report.tables.push_back(std::move(table));
    report.pass_flags = compute_pass_flags(report);
    return report;
}

ExperimentReport run_nongaussian(std::uint64_t seed, std::size_t trials) {
    constexpr std::size_t kL = 100;
    constexpr std::size_t kBin = 10;

    const std::array<NoiseModel, 3> models = {
        NoiseModel{NoiseKind::laplace, 1.0, 0.0},
        NoiseModel{NoiseKind::uniform, 1.0, 0.0},
        NoiseModel{NoiseKind::ar1, 1.0, 0.5},
    };

    ExperimentReport report;
    report.name = "nongaussian";
    add_param(report, "window_len", fmt_count(kL));
    add_param(report, "target_bin", fmt_count(kBin));
    add_param(report, "trials", fmt_count(trials));
    add_param(report, "estimator", "ccp_abs");
    add_param(report, "models",
              models[0].to_string() + ";" + models[1].to_string() + ";" +
                  models[2].to_string());
    add_param(report, "seed", fmt_count(seed));

    ReportTable table{"noise_table",
                      {"windows", "laplace", "uniform", "ar1"},
                      {}};
    ReportTable se_table{"noise_table_se",
                         {"windows", "laplace_se", "uniform_se", "ar1_se"},
                         {}};

    for (std::size_t row = 0; row < kNoiseTableWindows.size(); ++row) {
        const auto m = static_cast<std::size_t>(kNoiseTableWindows[row]);
        std::vector<double> means{static_cast<double>(m)};
        std::vector<double> ses{static_cast<double>(m)};
        for (std::size_t k = 0; k < models.size(); ++k) {
            TrialSpec spec;
            spec.noise = models[k];
            spec.plan = WindowPlan{kL, m, 0};
            spec.estimator = TrialEstimator::ccp_abs;
            spec.target_bins = {kBin};
            spec.num_trials = trials;
            spec.root_seed = sub_seed(seed, row * models.size() + k);
            const MonteCarloSummary summary = run_trials(spec);
            means.push_back(summary.bins[0].sample_mean);
            ses.push_back(summary.bins[0].standard_error);
        }
        table.rows.push_back(std::move(means));
        se_table.rows.push_back(std::move(ses));
    }

    report.tables.push_back(std::move(table));
    report.tables.push_back(std::move(se_table));
    report.pass_flags = compute_pass_flags(report);
    return report;
}

}  // namespace ccp
