#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "ccp/sample_record.hpp"

namespace ccp {

enum class NoiseKind { gaussian, laplace, uniform, ar1 };

/// Tagged description of a zero-mean noise process. Every model is
/// normalized so the marginal variance is sigma^2; for ar1 the innovation
/// variance is sigma^2*(1-phi^2), which keeps the stationary variance at
/// sigma^2 for all times t.
struct NoiseModel {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 1.0;      // target marginal standard deviation
    double ar_coeff = 0.5;   // phi, ar1 only, |phi| < 1

    /// Serializes to the CLI syntax, e.g. "ar1:sigma=1,phi=0.5".
    std::string to_string() const;
};

/// Throws std::invalid_argument unless sigma > 0 and, for ar1, |phi| < 1.
void validate(const NoiseModel& model);

/// Parses the CLI syntax: a kind tag (gaussian|laplace|uniform|ar1)
/// optionally followed by ":key=value,..." with keys sigma and (ar1 only)
/// phi. Unknown keys are errors.
NoiseModel parse_noise_model(const std::string& text);

/// Counter-based seed split: derives the seed for stream `index` from one
/// root seed. Pure function, so parallel trials can derive their own
/// generator state without coordination.
std::uint64_t sub_seed(std::uint64_t root_seed, std::uint64_t index);

/// Deterministic uniform/normal variates on top of std::mt19937_64. The
/// transforms (53-bit uniform, polar normal, inverse-CDF Laplace) are
/// spelled out here rather than taken from <random>'s distribution
/// adapters, whose output sequences vary across standard libraries; this
/// keeps seeded results identical for any conforming compiler.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via the polar (Marsaglia) method, one spare cached.
    double normal();

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Generates n samples of the model, deterministically in (model, n, seed).
///   gaussian  i.i.d. N(0, sigma^2)
///   laplace   i.i.d. Laplace with scale sigma/sqrt(2), so variance sigma^2
///   uniform   i.i.d. Uniform(-sigma*sqrt(3), sigma*sqrt(3))
///   ar1       n(t) = phi*n(t-1) + e(t), e ~ N(0, sigma^2*(1-phi^2)),
///             started from the stationary distribution N(0, sigma^2)
SampleRecord sample(const NoiseModel& model, std::size_t n,
                    std::uint64_t seed);

/// In-place variant that overwrites `out` (hot path for trial loops).
void sample_into(const NoiseModel& model, std::span<double> out,
                 std::uint64_t seed);

}  // namespace ccp
