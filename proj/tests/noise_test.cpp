#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ccp/noise.hpp"

using namespace ccp;

namespace {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double excess_kurtosis = 0.0;
};

Moments moments_of(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    long double sum = 0.0L;
    for (double v : x) sum += v;
    const double mean = static_cast<double>(sum / n);

    long double m2 = 0.0L;
    long double m4 = 0.0L;
    for (double v : x) {
        const long double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    Moments m;
    m.mean = mean;
    m.variance = static_cast<double>(m2 / n);
    m.excess_kurtosis =
        static_cast<double>(m4 / n / (m2 / n * (m2 / n))) - 3.0;
    return m;
}

}  // namespace

TEST_CASE("sampling is a pure function of model, length, and seed") {
    const NoiseModel model{NoiseKind::gaussian, 1.0, 0.0};
    const SampleRecord a = sample(model, 512, 99);
    const SampleRecord b = sample(model, 512, 99);
    const SampleRecord c = sample(model, 512, 100);

    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
}

TEST_CASE("sub-seed streams are distinct and stable") {
    const std::uint64_t root = 0x5EED;
    CHECK(sub_seed(root, 0) == sub_seed(root, 0));
    CHECK(sub_seed(root, 0) != sub_seed(root, 1));
    CHECK(sub_seed(root, 0) != sub_seed(root + 1, 0));

    std::vector<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 64; ++i) seeds.push_back(sub_seed(root, i));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("each model hits its marginal mean, variance, and tail shape") {
    constexpr std::size_t kN = 400000;
    const double sigma = 1.3;

    const struct {
        NoiseKind kind;
        double kurtosis;
        double tol;
    } cases[] = {
        {NoiseKind::gaussian, 0.0, 0.15},
        {NoiseKind::laplace, 3.0, 0.40},
        {NoiseKind::uniform, -1.2, 0.05},
    };

    for (const auto& c : cases) {
        const NoiseModel model{c.kind, sigma, 0.0};
        const SampleRecord rec = sample(model, kN, 0xC0FFEE);
        const Moments m = moments_of(rec.samples);

        CHECK(std::abs(m.mean) < 4.0 * sigma / std::sqrt(kN));
        CHECK(m.variance ==
              doctest::Approx(sigma * sigma).epsilon(0.02));
        CHECK(std::abs(m.excess_kurtosis - c.kurtosis) < c.tol);
    }
}

TEST_CASE("uniform samples stay inside and fill the advertised support") {
    const double sigma = 0.7;
    const double half_width = sigma * std::sqrt(3.0);
    const SampleRecord rec =
        sample(NoiseModel{NoiseKind::uniform, sigma, 0.0}, 100000, 21);
    const auto [lo, hi] =
        std::minmax_element(rec.samples.begin(), rec.samples.end());
    CHECK(*lo >= -half_width);
    CHECK(*hi < half_width);
    CHECK(*lo < -0.999 * half_width);
    CHECK(*hi > 0.999 * half_width);
}

TEST_CASE("the autoregressive model is stationary from the first sample") {
    const double sigma = 2.0;
    const NoiseModel model{NoiseKind::ar1, sigma, 0.5};

    // Variance of the very first output across independent streams: a
    // transient-laden start would show var sigma^2*(1-phi^2) here instead.
    std::vector<double> firsts;
    firsts.reserve(20000);
    for (std::uint64_t s = 0; s < 20000; ++s) {
        firsts.push_back(sample(model, 2, sub_seed(77, s)).samples[0]);
    }
    const Moments m0 = moments_of(firsts);
    CHECK(m0.variance == doctest::Approx(sigma * sigma).epsilon(0.05));

    // Within one long stream: marginal variance sigma^2, lag-1
    // autocorrelation phi.
    const SampleRecord rec = sample(model, 400000, 31337);
    const Moments m = moments_of(rec.samples);
    CHECK(m.variance == doctest::Approx(sigma * sigma).epsilon(0.02));

    long double lag1 = 0.0L;
    for (std::size_t i = 1; i < rec.size(); ++i) {
        lag1 += (rec.samples[i] - m.mean) * (rec.samples[i - 1] - m.mean);
    }
    const double rho =
        static_cast<double>(lag1 / static_cast<long double>(rec.size())) /
        m.variance;
    CHECK(rho == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("noise model strings round-trip through the parser") {
    const NoiseModel a = parse_noise_model("ar1:sigma=2.5,phi=-0.25");
    CHECK(a.kind == NoiseKind::ar1);
    CHECK(a.sigma == 2.5);
    CHECK(a.ar_coeff == -0.25);
    const NoiseModel b = parse_noise_model(a.to_string());
    CHECK(b.sigma == a.sigma);
    CHECK(b.ar_coeff == a.ar_coeff);

    const NoiseModel c = parse_noise_model("gaussian");
    CHECK(c.kind == NoiseKind::gaussian);
    CHECK(c.sigma == 1.0);

    CHECK(parse_noise_model("laplace:sigma=0.5").kind == NoiseKind::laplace);
    CHECK(parse_noise_model("uniform").kind == NoiseKind::uniform);
}

TEST_CASE("noise model parser rejects nonsense with a pointed message") {
    CHECK_THROWS_AS(parse_noise_model("pink"), std::invalid_argument);
    CHECK_THROWS_AS(parse_noise_model("gaussian:phi=0.5"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_noise_model("gaussian:sigma=abc"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_noise_model("gaussian:sigma"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_noise_model("gaussian:sigma=-1"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_noise_model("ar1:phi=1.0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_noise_model("ar1:phi=-1.5"), std::invalid_argument);
}

TEST_CASE("noise validation bounds") {
    CHECK_NOTHROW(validate(NoiseModel{NoiseKind::ar1, 1.0, 0.99}));
    CHECK_THROWS_AS(validate(NoiseModel{NoiseKind::gaussian, 0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(NoiseModel{NoiseKind::ar1, 1.0, 1.0}),
                    std::invalid_argument);
}
