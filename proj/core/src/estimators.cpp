#include "ccp/estimators.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace ccp {

namespace {

void require_uniform_length(std::span<const Spectrum> windows) {
    if (windows.empty()) {
        throw std::invalid_argument("no window spectra supplied");
    }
    const std::size_t L = windows[0].size();
    for (const auto& w : windows) {
        if (w.size() != L) {
            throw std::invalid_argument("window spectra lengths differ");
        }
    }
}

// Averaged complex cross terms c[f] = (1/M) sum_m Y_m(f)*conj(Y_{m+1}(f)),
// with the wraparound pair (Y_{M-1}, Y_0) included. Summation order over m
// is fixed ascending so results are bit-identical run to run.
std::vector<std::complex<double>> mean_cross_terms(
    std::span<const Spectrum> windows) {
    const std::size_t M = windows.size();
    const std::size_t L = windows[0].size();
    std::vector<std::complex<double>> mean(L, {0.0, 0.0});
    for (std::size_t m = 0; m < M; ++m) {
        const Spectrum& a = windows[m];
        const Spectrum& b = windows[(m + 1) % M];
        for (std::size_t f = 0; f < L; ++f) {
            mean[f] += a[f] * std::conj(b[f]);
        }
    }
    const double inv = 1.0 / static_cast<double>(M);
    for (auto& c : mean) c *= inv;
    return mean;
}

PsdEstimate make_ccp_estimate(std::span<const Spectrum> windows,
                              Reduction reduction) {
    require_uniform_length(windows);
    if (windows.size() < 2) {
        throw std::invalid_argument(
            "cross-correlation estimate needs at least 2 windows");
    }
    PsdEstimate est;
    est.method = Method::ccp;
    est.reduction = reduction;
    est.num_windows = windows.size();
    est.window_len = windows[0].size();
    return est;
}

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::bartlett: return "bartlett";
        case Method::welch: return "welch";
        case Method::ccp: return "ccp";
    }
    return "?";
}

std::string to_string(Reduction reduction) {
    switch (reduction) {
        case Reduction::real: return "real";
        case Reduction::abs: return "abs";
        case Reduction::modulus_of_mean: return "modulus_of_mean";
        case Reduction::phase_corrected: return "phase_corrected";
    }
    return "?";
}

PsdEstimate bartlett(std::span<const Spectrum> windows) {
    require_uniform_length(windows);
    const std::size_t M = windows.size();
    const std::size_t L = windows[0].size();

    PsdEstimate est;
    est.method = Method::bartlett;
    est.reduction = Reduction::real;
    est.num_windows = M;
    est.window_len = L;
    est.power.assign(L, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t f = 0; f < L; ++f) {
            est.power[f] += std::norm(windows[m][f]);
        }
    }
    const double inv = 1.0 / static_cast<double>(M);
    for (auto& p : est.power) p *= inv;
    return est;
}

std::vector<double> hann_taper(std::size_t window_len) {
    if (window_len < 2) {
        throw std::invalid_argument("hann_taper needs window_len >= 2");
    }
    std::vector<double> w(window_len);
    const double denom = static_cast<double>(window_len - 1);
    for (std::size_t t = 0; t < window_len; ++t) {
        w[t] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(t) / denom));
    }
    return w;
}

PsdEstimate welch_hann(std::span<const std::span<const double>> windows) {
    if (windows.empty()) {
        throw std::invalid_argument("no windows supplied");
    }
    const std::size_t L = windows[0].size();
    for (const auto& w : windows) {
        if (w.size() != L) {
            throw std::invalid_argument("window lengths differ");
        }
    }

    const std::vector<double> taper = hann_taper(L);
    std::vector<double> tapered(L);
    std::vector<Spectrum> spectra;
    spectra.reserve(windows.size());
    for (const auto& w : windows) {
        for (std::size_t t = 0; t < L; ++t) tapered[t] = w[t] * taper[t];
        spectra.push_back(dft_normalized(tapered));
    }

    PsdEstimate est = bartlett(spectra);
    est.method = Method::welch;
    return est;
}

PsdEstimate welch_hann(const std::vector<std::vector<double>>& windows) {
    std::vector<std::span<const double>> views;
    views.reserve(windows.size());
    for (const auto& w : windows) views.emplace_back(w.data(), w.size());
    return welch_hann(std::span<const std::span<const double>>(views));
}

PsdEstimate ccp(std::span<const Spectrum> windows, Reduction reduction) {
    if (reduction == Reduction::phase_corrected) {
        throw std::invalid_argument(
            "phase_corrected requires a rotation angle; use ccp_phase_corrected");
    }
    PsdEstimate est = make_ccp_estimate(windows, reduction);
    const auto mean = mean_cross_terms(windows);
    est.power.resize(mean.size());
    switch (reduction) {
        case Reduction::real:
            for (std::size_t f = 0; f < mean.size(); ++f) {
                est.power[f] = mean[f].real();
            }
            break;
        case Reduction::abs:
            for (std::size_t f = 0; f < mean.size(); ++f) {
                est.power[f] = std::abs(mean[f].real());
            }
            break;
        case Reduction::modulus_of_mean:
            for (std::size_t f = 0; f < mean.size(); ++f) {
                est.power[f] = std::abs(mean[f]);
            }
            break;
        case Reduction::phase_corrected:
            break;  // unreachable
    }
    return est;
}

PsdEstimate ccp_phase_corrected(std::span<const Spectrum> windows,
                                double theta) {
    PsdEstimate est = make_ccp_estimate(windows, Reduction::phase_corrected);
    const auto mean = mean_cross_terms(windows);
    const std::complex<double> rot = std::polar(1.0, theta);
    est.power.resize(mean.size());
    for (std::size_t f = 0; f < mean.size(); ++f) {
        est.power[f] = (rot * mean[f]).real();
    }
    return est;
}

PsdEstimate ccp_phase_corrected(std::span<const Spectrum> windows,
                                std::span<const double> theta_per_bin) {
    PsdEstimate est = make_ccp_estimate(windows, Reduction::phase_corrected);
    const auto mean = mean_cross_terms(windows);
    if (theta_per_bin.size() != mean.size()) {
        throw std::invalid_argument(
            "phase schedule length must match the spectrum length");
    }
    est.power.resize(mean.size());
    for (std::size_t f = 0; f < mean.size(); ++f) {
        est.power[f] = (std::polar(1.0, theta_per_bin[f]) * mean[f]).real();
    }
    return est;
}

std::vector<double> gap_phase_schedule(std::size_t gap,
                                       std::size_t window_len) {
    std::vector<double> theta(window_len);
    for (std::size_t f = 0; f < window_len; ++f) {
        theta[f] = 2.0 * std::numbers::pi * static_cast<double>(gap) *
                   static_cast<double>(f) / static_cast<double>(window_len);
    }
    return theta;
}

double expected_gap_attenuation(std::size_t freq_bin, std::size_t gap,
                                std::size_t window_len) {
    if (freq_bin >= window_len) {
        throw std::invalid_argument("freq_bin out of range");
    }
    return std::cos(2.0 * std::numbers::pi * static_cast<double>(gap) *
                    static_cast<double>(freq_bin) /
                    static_cast<double>(window_len));
}

double circular_gap_attenuation(std::size_t freq_bin, std::size_t gap,
                                std::size_t window_len,
                                std::size_t num_windows) {
    if (num_windows < 2) {
        throw std::invalid_argument("num_windows must be >= 2");
    }
    const double delta = 2.0 * std::numbers::pi * static_cast<double>(gap) *
                         static_cast<double>(freq_bin) /
                         static_cast<double>(window_len);
    const double M = static_cast<double>(num_windows);
    return ((M - 1.0) * std::cos(delta) + std::cos((M - 1.0) * delta)) / M;
}

}  // namespace ccp
