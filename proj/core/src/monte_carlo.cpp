#include "ccp/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "ccp/spectrum.hpp"

namespace ccp {

namespace {

void validate_spec(const TrialSpec& spec) {
    validate(spec.plan);
    validate(spec.noise);
    if (spec.num_trials < 100) {
        throw std::invalid_argument(
            "num_trials must be >= 100 for standard-error estimates");
    }
    if (spec.target_bins.empty()) {
        throw std::invalid_argument("target_bins must be non-empty");
    }
    const std::size_t L = spec.plan.window_len;
    const std::size_t M = spec.plan.num_windows;
    for (std::size_t bin : spec.target_bins) {
        if (bin >= L) {
            throw std::invalid_argument("target bin " + std::to_string(bin) +
                                        " out of range for L=" +
                                        std::to_string(L));
        }
    }
    if (spec.estimator != TrialEstimator::bartlett && M < 2) {
        throw std::invalid_argument(
            "cross-correlation estimators need at least 2 windows");
    }
    if (spec.attach_predictions &&
        spec.estimator != TrialEstimator::bartlett) {
        if (M < 3) {
            throw std::invalid_argument(
                "moment predictions require M >= 3 windows");
        }
        for (std::size_t bin : spec.target_bins) {
            if (bin == 0 || 2 * bin == L) {
                throw std::invalid_argument(
                    "moment predictions exclude bins 0 and L/2 (bin " +
                    std::to_string(bin) + ")");
            }
        }
    }
    if (spec.signal && spec.signal->size() < spec.plan.span_samples()) {
        throw std::invalid_argument(
            "signal record shorter than the window plan");
    }
}

// Evaluates the estimator at each target bin for one realization laid out
// in `buf`. Y values are produced window-by-window through single-bin
// transforms; the circular cross-correlation includes the wrap pair.
void evaluate_bins(const double* buf, const WindowPlan& plan,
                   TrialEstimator estimator,
                   const std::vector<BinDft>& bin_dfts,
                   std::vector<std::complex<double>>& y_scratch,
                   double* out_values) {
    const std::size_t M = plan.num_windows;
    const std::size_t stride = plan.window_len + plan.gap;

    for (std::size_t b = 0; b < bin_dfts.size(); ++b) {
        const BinDft& dft = bin_dfts[b];
        y_scratch.resize(M);
        for (std::size_t m = 0; m < M; ++m) {
            y_scratch[m] =
                dft(std::span<const double>(buf + m * stride, plan.window_len));
        }

        double value = 0.0;
        if (estimator == TrialEstimator::bartlett) {
            for (std::size_t m = 0; m < M; ++m) {
                value += std::norm(y_scratch[m]);
            }
            value /= static_cast<double>(M);
        } else {
            for (std::size_t m = 0; m < M; ++m) {
                const auto& a = y_scratch[m];
                const auto& c = y_scratch[(m + 1) % M];
                value += a.real() * c.real() + a.imag() * c.imag();
            }
            value /= static_cast<double>(M);
            if (estimator == TrialEstimator::ccp_abs) {
                value = std::abs(value);
            }
        }
        out_values[b] = value;
    }
}

}  // namespace

std::string to_string(TrialEstimator estimator) {
    switch (estimator) {
        case TrialEstimator::ccp_real: return "ccp_real";
        case TrialEstimator::ccp_abs: return "ccp_abs";
        case TrialEstimator::bartlett: return "bartlett";
    }
    return "?";
}

std::size_t resolve_thread_count() {
    if (const char* env = std::getenv("CCP_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) return static_cast<std::size_t>(parsed);
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

MonteCarloSummary run_trials(const TrialSpec& spec) {
    validate_spec(spec);

    const std::size_t M = spec.plan.num_windows;
    const std::size_t total_n = spec.plan.span_samples();
    const std::size_t num_bins = spec.target_bins.size();
    const std::size_t trials = spec.num_trials;

    std::vector<BinDft> bin_dfts;
    bin_dfts.reserve(num_bins);
    for (std::size_t bin : spec.target_bins) {
        bin_dfts.emplace_back(spec.plan.window_len, bin);
    }

    // values[trial*num_bins + b]; workers own disjoint trial ranges, the
    // reduction below walks trials in ascending order so results do not
    // depend on the worker count.
    std::vector<double> values(trials * num_bins);

    const std::size_t want_threads =
        std::min<std::size_t>(resolve_thread_count(), trials);

    auto worker = [&](std::size_t first, std::size_t last) {
        std::vector<double> buf(total_n);
        std::vector<std::complex<double>> y_scratch;
        for (std::size_t trial = first; trial < last; ++trial) {
            sample_into(spec.noise, buf, sub_seed(spec.root_seed, trial));
            if (spec.signal) {
                const double* sig = spec.signal->samples.data();
                for (std::size_t i = 0; i < total_n; ++i) buf[i] += sig[i];
            }
            evaluate_bins(buf.data(), spec.plan, spec.estimator, bin_dfts,
                          y_scratch, values.data() + trial * num_bins);
        }
    };

    if (want_threads <= 1) {
        worker(0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(want_threads);
        const std::size_t chunk = (trials + want_threads - 1) / want_threads;
        for (std::size_t t = 0; t < want_threads; ++t) {
            const std::size_t first = t * chunk;
            const std::size_t last = std::min(trials, first + chunk);
            if (first >= last) break;
            pool.emplace_back(worker, first, last);
        }
        for (auto& th : pool) th.join();
    }

    MonteCarloSummary summary;
    summary.num_trials = trials;
    summary.num_windows = M;
    summary.window_len = spec.plan.window_len;
    summary.estimator = to_string(spec.estimator);
    summary.noise = spec.noise.to_string();
    summary.root_seed = spec.root_seed;
    summary.bins.resize(num_bins);

    const bool predict = spec.attach_predictions &&
                         spec.estimator != TrialEstimator::bartlett;
    for (std::size_t b = 0; b < num_bins; ++b) {
        BinSummary& out = summary.bins[b];
        out.bin = spec.target_bins[b];

        long double sum = 0.0L;
        long double sum_sq = 0.0L;
        for (std::size_t trial = 0; trial < trials; ++trial) {
            const long double v = values[trial * num_bins + b];
            sum += v;
            sum_sq += v * v;
        }
        const long double n = static_cast<long double>(trials);
        const long double mean = sum / n;
        out.sample_mean = static_cast<double>(mean);
        out.sample_second_moment = static_cast<double>(sum_sq / n);

        long double centered = 0.0L;
        for (std::size_t trial = 0; trial < trials; ++trial) {
            const long double d = values[trial * num_bins + b] - mean;
            centered += d * d;
        }
        out.sample_variance = static_cast<double>(centered / (n - 1.0L));
        out.standard_error =
            std::sqrt(out.sample_variance / static_cast<double>(trials));

        if (predict) {
            const auto pred = predict_noise_only_moments(spec.noise.sigma, M);
            out.predicted_mean = pred.mean;
            out.predicted_bound_abs = pred.abs_bound;
            out.predicted_second_moment = pred.variance;
        }
    }
    return summary;
}

NoiseOnlyMoments predict_noise_only_moments(double sigma, std::size_t num_windows) {
    if (num_windows < 3) {
        throw std::invalid_argument(
            "closed-form moments require M >= 3, got M=" +
            std::to_string(num_windows));
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("sigma must be positive");
    }
    const double s2 = sigma * sigma;
    const double M = static_cast<double>(num_windows);
    NoiseOnlyMoments pred;
    pred.mean = 0.0;
    pred.variance = s2 * s2 / (2.0 * M);
    pred.abs_bound = s2 / std::sqrt(2.0 * M);
    return pred;
}

double predict_bias_bound(double sigma, std::size_t num_windows,
                          double signal_mag) {
    if (num_windows < 3) {
        throw std::invalid_argument(
            "bias bound requires M >= 3, got M=" +
            std::to_string(num_windows));
    }
    if (signal_mag < 0.0) {
        throw std::invalid_argument("signal magnitude must be >= 0");
    }
    if (sigma == 0.0) return 0.0;
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("sigma must be >= 0");
    }
    return sigma * std::sqrt(std::numbers::pi) * signal_mag +
           sigma * sigma / std::sqrt(2.0 * static_cast<double>(num_windows));
}

std::vector<UnbiasednessCheck> check_unbiasedness(
    const TrialSpec& spec, const std::vector<double>& true_psd) {
    if (spec.estimator != TrialEstimator::ccp_real) {
        throw std::invalid_argument(
            "unbiasedness holds for the signed estimator only; use ccp_real");
    }
    if (!spec.signal) {
        throw std::invalid_argument("unbiasedness check needs a signal");
    }
    if (spec.plan.num_windows < 3) {
        throw std::invalid_argument("unbiasedness check requires M >= 3");
    }
    if (true_psd.size() != spec.target_bins.size()) {
        throw std::invalid_argument(
            "true_psd must list one |X(f)|^2 per target bin");
    }

    TrialSpec run = spec;
    run.attach_predictions = false;
    const MonteCarloSummary summary = run_trials(run);

    std::vector<UnbiasednessCheck> checks(summary.bins.size());
    for (std::size_t b = 0; b < summary.bins.size(); ++b) {
        UnbiasednessCheck& c = checks[b];
        c.bin = summary.bins[b].bin;
        c.sample_mean = summary.bins[b].sample_mean;
        c.standard_error = summary.bins[b].standard_error;
        c.true_power = true_psd[b];
        if (c.standard_error > 0.0) {
            c.z_score = (c.sample_mean - c.true_power) / c.standard_error;
            c.pass = std::abs(c.z_score) <= 4.0;
        } else {
            // Degenerate noiseless run: require exact agreement instead.
            c.z_score = 0.0;
            c.pass = std::abs(c.sample_mean - c.true_power) <=
                     1e-12 * std::max(1.0, std::abs(c.true_power));
        }
    }
    return checks;
}

VarianceOrderingCheck check_variance_ordering(const NoiseModel& noise,
                                              const WindowPlan& plan,
                                              std::size_t bin,
                                              std::size_t num_trials,
                                              std::uint64_t root_seed) {
    if (plan.num_windows < 3) {
        throw std::invalid_argument(
            "variance comparison requires M >= 3 windows");
    }

    TrialSpec spec;
    spec.noise = noise;
    spec.plan = plan;
    spec.target_bins = {bin};
    spec.num_trials = num_trials;
    spec.root_seed = root_seed;
    spec.attach_predictions = false;

    spec.estimator = TrialEstimator::ccp_real;
    const auto ccp_summary = run_trials(spec);
    spec.estimator = TrialEstimator::bartlett;
    const auto bart_summary = run_trials(spec);

    VarianceOrderingCheck check;
    check.var_ccp = ccp_summary.bins[0].sample_variance;
    check.var_bartlett = bart_summary.bins[0].sample_variance;
    check.ratio = check.var_ccp / check.var_bartlett;
    check.ordered = check.var_ccp < check.var_bartlett;
    check.ratio_near_half = std::abs(check.ratio - 0.5) <= 0.075;
    check.pass = check.ordered && check.ratio_near_half;
    return check;
}

}  // namespace ccp
