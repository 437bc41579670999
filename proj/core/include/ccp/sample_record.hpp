#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ccp {

/// A finite real-valued time series, optionally tagged with its sample rate.
///
/// Amplitudes are dimensionless. The sample rate is presentation metadata:
/// it is required only when results are reported in Hz rather than by bin
/// index, so the numerical core stays unit-free.
struct SampleRecord {
    std::vector<double> samples;
    std::optional<double> sample_rate;  // Hz

    std::size_t size() const { return samples.size(); }
};

/// Throws std::invalid_argument unless the record is non-empty and every
/// sample is a finite real number.
void validate(const SampleRecord& record);

/// Partition of a record into num_windows windows of window_len samples,
/// with an optional fixed gap of skipped samples between consecutive
/// windows. Window m starts at m * (window_len + gap).
struct WindowPlan {
    std::size_t window_len = 0;   // L, samples per window
    std::size_t num_windows = 0;  // M
    std::size_t gap = 0;          // samples skipped between windows

    /// Samples consumed from the start of a record: M*L + (M-1)*gap.
    std::size_t span_samples() const {
        return num_windows * window_len +
               (num_windows > 0 ? (num_windows - 1) * gap : 0);
    }
};

/// Throws std::invalid_argument unless L >= 2 and M >= 1.
void validate(const WindowPlan& plan);

/// samples[t] = amplitude * cos(2*pi*freq_hz*t/sample_rate + phase).
///
/// freq_hz must lie strictly between 0 and the Nyquist rate; sample_rate
/// must be positive. The returned record carries sample_rate.
SampleRecord generate_sinusoid(double freq_hz, double sample_rate,
                               double amplitude, std::size_t num_samples,
                               double phase = 0.0);

/// Splits the record prefix into M non-overlapping views of length L.
/// Window m covers indices [m*(L+gap), m*(L+gap)+L). Trailing samples
/// beyond the plan are ignored. Throws std::invalid_argument when the plan
/// does not fit, naming required vs available sample counts.
std::vector<std::span<const double>> partition(const SampleRecord& record,
                                               const WindowPlan& plan);

}  // namespace ccp
