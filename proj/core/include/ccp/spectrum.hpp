#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ccp {

/// Normalized DFT values of one window, indexed by frequency bin 0..L-1.
/// For a real-valued input window the values are Hermitian-symmetric:
/// values[L-f] == conj(values[f]) for f = 1..L-1.
struct Spectrum {
    std::vector<std::complex<double>> values;

    std::size_t size() const { return values.size(); }
    const std::complex<double>& operator[](std::size_t f) const {
        return values[f];
    }
};

/// values[f] = (1/sqrt(L)) * sum_t window[t] * exp(-2*pi*i*f*t/L).
///
/// The 1/sqrt(L) normalization makes the transform unitary, so Parseval
/// holds exactly: sum_f |values[f]|^2 == sum_t window[t]^2. Direct O(L^2)
/// evaluation; window lengths here stay at desk scale (L <= 4096).
Spectrum dft_normalized(std::span<const double> window);

/// Single-bin evaluator with precomputed twiddle factors, for hot loops
/// that only need one frequency of many windows (Monte Carlo trials).
/// Matches dft_normalized(window).values[bin] to machine precision.
class BinDft {
  public:
    BinDft(std::size_t window_len, std::size_t bin);

    std::size_t window_len() const { return cos_.size(); }
    std::size_t bin() const { return bin_; }

    std::complex<double> operator()(std::span<const double> window) const;

  private:
    std::size_t bin_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

/// 10*log10(power). Values at or below 1e-300 (including every
/// non-positive value) clamp to -3000 dB so reports never contain -inf.
double to_db(double power);

/// Applies to_db elementwise.
std::vector<double> to_db(const std::vector<double>& power);

}  // namespace ccp
