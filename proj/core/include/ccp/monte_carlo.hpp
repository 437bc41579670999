#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccp/noise.hpp"
#include "ccp/sample_record.hpp"

namespace ccp {

/// Estimators the trial harness can evaluate at selected bins.
enum class TrialEstimator { ccp_real, ccp_abs, bartlett };

std::string to_string(TrialEstimator estimator);

/// One repeated-trials configuration: an optional deterministic signal,
/// a noise model sampled fresh per trial, a window plan, the estimator,
/// and the frequency bins whose values are recorded.
struct TrialSpec {
    std::optional<SampleRecord> signal;  // added to every realization
    NoiseModel noise;
    WindowPlan plan;
    TrialEstimator estimator = TrialEstimator::ccp_real;
    std::vector<std::size_t> target_bins;
    std::size_t num_trials = 0;   // >= 100 so standard errors mean something
    std::uint64_t root_seed = 0;

    /// Attach the closed-form noise-moment predictions (mean 0, variance
    /// sigma^4/(2M), absolute-mean bound sigma^2/sqrt(2M)). Requires
    /// M >= 3 and target bins excluding 0 and L/2, where the closed forms
    /// do not apply.
    bool attach_predictions = true;
};

struct BinSummary {
    std::size_t bin = 0;
    double sample_mean = 0.0;
    double standard_error = 0.0;        // sample sd / sqrt(num_trials)
    double sample_second_moment = 0.0;  // mean of value^2
    double sample_variance = 0.0;       // unbiased
    // Closed forms computed from (sigma, M) only, never from samples.
    double predicted_mean = 0.0;
    double predicted_bound_abs = 0.0;    // sigma^2 / sqrt(2M)
    double predicted_second_moment = 0.0;  // sigma^4 / (2M)
};

struct MonteCarloSummary {
    std::vector<BinSummary> bins;
    std::size_t num_trials = 0;
    std::size_t num_windows = 0;
    std::size_t window_len = 0;
    std::string estimator;
    std::string noise;
    std::uint64_t root_seed = 0;
};

/// Runs num_trials independent realizations (noise sub-seeded per trial
/// from root_seed, signal added if present), evaluates the estimator at
/// the target bins, and aggregates moments. Bit-identical results for a
/// given spec regardless of the worker count: per-trial values are stored
/// and reduced in ascending trial order. Worker threads are capped by the
/// CCP_THREADS environment variable.
MonteCarloSummary run_trials(const TrialSpec& spec);

struct NoiseOnlyMoments {
    double mean = 0.0;       // exactly zero
    double variance = 0.0;   // sigma^4 / (2M)
    double abs_bound = 0.0;  // sigma^2 / sqrt(2M)
};

/// Closed-form moments of the noise-only estimator. M < 3 is rejected:
/// below that the cross terms lose the independence structure the
/// formulas rely on.
NoiseOnlyMoments predict_noise_only_moments(double sigma, std::size_t num_windows);

/// Upper bound on E|P_y(f)| - |X(f)|^2 at a signal-bearing bin:
/// sigma*sqrt(pi)*|X(f)| + sigma^2/sqrt(2M). M < 3 rejected as above.
double predict_bias_bound(double sigma, std::size_t num_windows,
                          double signal_mag);

struct UnbiasednessCheck {
    std::size_t bin = 0;
    double sample_mean = 0.0;
    double standard_error = 0.0;
    double true_power = 0.0;  // |X(f)|^2
    double z_score = 0.0;
    bool pass = false;
};

/// Mean-unbiasedness test for the signed estimator with a signal present:
/// z = (sample_mean - |X(f)|^2) / SE per target bin, pass iff |z| <= 4.
/// Requires estimator ccp_real, a signal, and M >= 3.
std::vector<UnbiasednessCheck> check_unbiasedness(
    const TrialSpec& spec, const std::vector<double>& true_psd);

struct VarianceOrderingCheck {
    double var_ccp = 0.0;
    double var_bartlett = 0.0;
    double ratio = 0.0;
    bool ordered = false;      // var_ccp < var_bartlett
    bool ratio_near_half = false;  // |ratio - 0.5| <= 0.075
    bool pass = false;
};

/// Compares the sampling variance of the signed cross-correlation
/// estimator against Bartlett's on identical pure-noise realizations
/// (same root seed, same sub-seeded streams).
VarianceOrderingCheck check_variance_ordering(const NoiseModel& noise,
                                              const WindowPlan& plan,
                                              std::size_t bin,
                                              std::size_t num_trials,
                                              std::uint64_t root_seed);

/// Worker count used by run_trials: CCP_THREADS if set (minimum 1),
/// otherwise the hardware concurrency.
std::size_t resolve_thread_count();

}  // namespace ccp
