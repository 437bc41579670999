#include "ccp/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccp {

Spectrum dft_normalized(std::span<const double> window) {
    const std::size_t L = window.size();
    if (L < 2) {
        throw std::invalid_argument("dft_normalized needs a window of >= 2 samples");
    }

    // One table of the L distinct twiddle factors; exponents reduce mod L.
    std::vector<std::complex<double>> twiddle(L);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(L);
    for (std::size_t k = 0; k < L; ++k) {
        twiddle[k] = std::polar(1.0, step * static_cast<double>(k));
    }

    Spectrum spectrum;
    spectrum.values.resize(L);
    const double scale = 1.0 / std::sqrt(static_cast<double>(L));
    for (std::size_t f = 0; f < L; ++f) {
        std::complex<double> acc{0.0, 0.0};
        std::size_t k = 0;
        for (std::size_t t = 0; t < L; ++t) {
            acc += window[t] * twiddle[k];
            k += f;
            if (k >= L) k -= L;
        }
        spectrum.values[f] = acc * scale;
    }
    return spectrum;
}

BinDft::BinDft(std::size_t window_len, std::size_t bin) : bin_(bin) {
    if (window_len < 2) {
        throw std::invalid_argument("BinDft needs window_len >= 2");
    }
    if (bin >= window_len) {
        throw std::invalid_argument("BinDft bin out of range");
    }
    cos_.resize(window_len);
    sin_.resize(window_len);
    const double scale = 1.0 / std::sqrt(static_cast<double>(window_len));
    for (std::size_t t = 0; t < window_len; ++t) {
        // Tables hold exp(-i*2*pi*bin*t/L) pre-scaled by 1/sqrt(L); the
        // exponent reduces mod L exactly as in dft_normalized so the two
        // paths agree bit-for-bit in their trig arguments.
        const std::size_t k = (t * bin) % window_len;
        const double reduced = 2.0 * std::numbers::pi *
                               static_cast<double>(k) /
                               static_cast<double>(window_len);
        cos_[t] = std::cos(reduced) * scale;
        sin_[t] = std::sin(reduced) * scale;
    }
}

std::complex<double> BinDft::operator()(std::span<const double> window) const {
    if (window.size() != cos_.size()) {
        throw std::invalid_argument("BinDft window length mismatch");
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < window.size(); ++t) {
        re += window[t] * cos_[t];
        im -= window[t] * sin_[t];
    }
    return {re, im};
}

double to_db(double power) {
    if (!(power > 1e-300)) return -3000.0;
    return 10.0 * std::log10(power);
}

std::vector<double> to_db(const std::vector<double>& power) {
    std::vector<double> out(power.size());
    for (std::size_t i = 0; i < power.size(); ++i) out[i] = to_db(power[i]);
    return out;
}

}  // namespace ccp
