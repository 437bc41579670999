#pragma once

#include <span>
#include <string>
#include <vector>

#include "ccp/spectrum.hpp"

namespace ccp {

enum class Method { bartlett, welch, ccp };

/// How the averaged cross-correlation is reduced to a real power value.
///   real            Re of each adjacent-window cross term, averaged.
///   abs             |real reduction| per bin, for nonnegative display.
///   modulus_of_mean modulus of the averaged complex cross terms.
///   phase_corrected Re of e^{i*theta_f} times each cross term, averaged;
///                   undoes a known inter-window phase step.
enum class Reduction { real, abs, modulus_of_mean, phase_corrected };

std::string to_string(Method method);
std::string to_string(Reduction reduction);

/// Per-frequency power estimate plus the metadata needed to interpret it.
/// bartlett/welch/ccp(abs)/ccp(modulus_of_mean) powers are nonnegative;
/// ccp(real) and ccp(phase_corrected) may go negative at noise bins.
struct PsdEstimate {
    std::vector<double> power;  // length L, linear units
    Method method = Method::bartlett;
    Reduction reduction = Reduction::real;
    std::size_t num_windows = 0;  // M
    std::size_t window_len = 0;   // L

    std::vector<double> power_db() const { return to_db(power); }
};

/// power[f] = (1/M) * sum_m |Y_m(f)|^2.
PsdEstimate bartlett(std::span<const Spectrum> windows);

/// Hann taper w[t] = 0.5*(1 - cos(2*pi*t/(L-1))), length L.
std::vector<double> hann_taper(std::size_t window_len);

/// Tapers each raw window with hann_taper, transforms, and averages the
/// squared moduli as bartlett does. No coherent-gain or window-power
/// compensation is applied, so white noise of unit variance settles at
/// 10*log10(3/8) ~ -4.26 dB instead of 0 dB.
PsdEstimate welch_hann(std::span<const std::span<const double>> windows);
PsdEstimate welch_hann(const std::vector<std::vector<double>>& windows);

/// Cross-correlation estimate over adjacent window spectra,
///
///   power[f] = (1/M) * sum_m Re[Y_m(f) * conj(Y_{m+1 mod M}(f))],
///
/// with circular indexing (the last term pairs Y_{M-1} with Y_0), so there
/// are exactly M cross terms. Requires M >= 2; the closed-form moment
/// guarantees used elsewhere additionally need M >= 3 and are enforced by
/// those callers. Reduction::phase_corrected is served by the overloads
/// below.
PsdEstimate ccp(std::span<const Spectrum> windows, Reduction reduction);

/// phase_corrected with one constant rotation theta applied at every bin:
/// power[f] = (1/M) * sum_m Re[e^{i*theta} * Y_m(f) * conj(Y_{m+1}(f))].
/// theta = +pi/2 is the quadrature correction (multiply cross terms by i).
PsdEstimate ccp_phase_corrected(std::span<const Spectrum> windows,
                                double theta);

/// phase_corrected with a per-bin schedule theta_f (length L).
PsdEstimate ccp_phase_corrected(std::span<const Spectrum> windows,
                                std::span<const double> theta_per_bin);

/// Rotation schedule theta_f = 2*pi*gap*f/L that undoes the phase step a
/// fixed inter-window gap imprints on bin-centered content.
std::vector<double> gap_phase_schedule(std::size_t gap, std::size_t window_len);

/// cos(2*pi*gap*f/L): the factor multiplying |X(f)|^2 in the expectation
/// of each adjacent uncorrected cross term under a constant gap.
double expected_gap_attenuation(std::size_t freq_bin, std::size_t gap,
                                std::size_t window_len);

/// Noiseless value of the circular estimator at a gapped tone bin with
/// per-window phase step delta = 2*pi*gap*f/L: the M-1 adjacent pairs each
/// contribute cos(delta) while the wrap pair contributes cos((M-1)*delta).
double circular_gap_attenuation(std::size_t freq_bin, std::size_t gap,
                                std::size_t window_len,
                                std::size_t num_windows);

}  // namespace ccp
