#include "ccp/sample_record.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ccp {

void validate(const SampleRecord& record) {
    if (record.samples.empty()) {
        throw std::invalid_argument("sample record is empty");
    }
    for (std::size_t i = 0; i < record.samples.size(); ++i) {
        if (!std::isfinite(record.samples[i])) {
            throw std::invalid_argument("sample " + std::to_string(i) +
                                        " is not finite");
        }
    }
}

void validate(const WindowPlan& plan) {
    if (plan.window_len < 2) {
        throw std::invalid_argument(
            "window_len must be >= 2, got " + std::to_string(plan.window_len));
    }
    if (plan.num_windows < 1) {
        throw std::invalid_argument("num_windows must be >= 1");
    }
}

SampleRecord generate_sinusoid(double freq_hz, double sample_rate,
                               double amplitude, std::size_t num_samples,
                               double phase) {
    if (!(sample_rate > 0.0)) {
        throw std::invalid_argument("sample_rate must be positive, got " +
                                    std::to_string(sample_rate));
    }
    if (!(freq_hz > 0.0) || freq_hz >= sample_rate / 2.0) {
        throw std::invalid_argument(
            "freq_hz must lie in (0, sample_rate/2), got " +
            std::to_string(freq_hz) + " at rate " +
            std::to_string(sample_rate));
    }
    if (num_samples < 1) {
        throw std::invalid_argument("num_samples must be >= 1");
    }

    SampleRecord record;
    record.sample_rate = sample_rate;
    record.samples.resize(num_samples);
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
    for (std::size_t t = 0; t < num_samples; ++t) {
        record.samples[t] = amplitude * std::cos(w * static_cast<double>(t) + phase);
    }
    return record;
}

std::vector<std::span<const double>> partition(const SampleRecord& record,
                                               const WindowPlan& plan) {
    validate(record);
    validate(plan);
    const std::size_t required = plan.span_samples();
    if (required > record.size()) {
        throw std::invalid_argument(
            "window plan needs " + std::to_string(required) +
            " samples but the record has " + std::to_string(record.size()));
    }

    std::vector<std::span<const double>> windows;
    windows.reserve(plan.num_windows);
    const std::size_t stride = plan.window_len + plan.gap;
    for (std::size_t m = 0; m < plan.num_windows; ++m) {
        windows.emplace_back(record.samples.data() + m * stride,
                             plan.window_len);
    }
    return windows;
}

}  // namespace ccp
