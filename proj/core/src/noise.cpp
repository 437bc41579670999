#include "ccp/noise.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ccp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

std::string NoiseModel::to_string() const {
    switch (kind) {
        case NoiseKind::gaussian: return "gaussian:sigma=" + format_double(sigma);
        case NoiseKind::laplace: return "laplace:sigma=" + format_double(sigma);
        case NoiseKind::uniform: return "uniform:sigma=" + format_double(sigma);
        case NoiseKind::ar1:
            return "ar1:sigma=" + format_double(sigma) +
                   ",phi=" + format_double(ar_coeff);
    }
    return "?";
}

void validate(const NoiseModel& model) {
    if (!(model.sigma > 0.0) || !std::isfinite(model.sigma)) {
        throw std::invalid_argument("noise sigma must be positive and finite");
    }
    if (model.kind == NoiseKind::ar1 &&
        !(std::abs(model.ar_coeff) < 1.0)) {
        throw std::invalid_argument("ar1 coefficient must satisfy |phi| < 1");
    }
}

NoiseModel parse_noise_model(const std::string& text) {
    NoiseModel model;
    std::string kind = text;
    std::string params;
    if (auto colon = text.find(':'); colon != std::string::npos) {
        kind = text.substr(0, colon);
        params = text.substr(colon + 1);
    }

    if (kind == "gaussian") {
        model.kind = NoiseKind::gaussian;
    } else if (kind == "laplace") {
        model.kind = NoiseKind::laplace;
    } else if (kind == "uniform") {
        model.kind = NoiseKind::uniform;
    } else if (kind == "ar1") {
        model.kind = NoiseKind::ar1;
    } else {
        throw std::invalid_argument(
            "unknown noise kind \"" + kind +
            "\" (expected gaussian|laplace|uniform|ar1)");
    }

    std::size_t pos = 0;
    while (pos < params.size()) {
        auto comma = params.find(',', pos);
        if (comma == std::string::npos) comma = params.size();
        const std::string item = params.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) continue;

        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("noise parameter \"" + item +
                                        "\" is not key=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        double parsed = 0.0;
        try {
            std::size_t used = 0;
            parsed = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw std::invalid_argument("noise parameter " + key +
                                        " has non-numeric value \"" + value +
                                        "\"");
        }
        if (key == "sigma") {
            model.sigma = parsed;
        } else if (key == "phi" && model.kind == NoiseKind::ar1) {
            model.ar_coeff = parsed;
        } else {
            throw std::invalid_argument("unknown noise parameter \"" + key +
                                        "\" for kind " + kind);
        }
    }

    validate(model);
    return model;
}

std::uint64_t sub_seed(std::uint64_t root_seed, std::uint64_t index) {
    return splitmix64(root_seed + kGolden * (index + 1));
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

void sample_into(const NoiseModel& model, std::span<double> out,
                 std::uint64_t seed) {
    validate(model);
    if (out.empty()) {
        throw std::invalid_argument("sample count must be >= 1");
    }
    Rng rng(seed);

    switch (model.kind) {
        case NoiseKind::gaussian: {
            for (auto& x : out) x = model.sigma * rng.normal();
            break;
        }
        case NoiseKind::laplace: {
            // Inverse CDF on u in (-1/2, 1/2): x = -b*sgn(u)*ln(1-2|u|),
            // with scale b = sigma/sqrt(2) so the variance is sigma^2.
            const double b = model.sigma / std::sqrt(2.0);
            for (auto& x : out) {
                const double u = rng.uniform01() - 0.5;
                const double t = -2.0 * std::abs(u);
                // t = -1 happens once per 2^53 draws; clamp to the tail
                // value of the neighbouring representable u instead of inf.
                const double mag =
                    t <= -1.0 ? b * 37.0 : -b * std::log1p(t);
                x = u < 0.0 ? -mag : mag;
            }
            break;
        }
        case NoiseKind::uniform: {
            const double half_width = model.sigma * std::sqrt(3.0);
            for (auto& x : out) {
                x = half_width * (2.0 * rng.uniform01() - 1.0);
            }
            break;
        }
        case NoiseKind::ar1: {
            const double phi = model.ar_coeff;
            const double innovation_sd =
                model.sigma * std::sqrt(1.0 - phi * phi);
            double state = model.sigma * rng.normal();  // stationary start
            for (auto& x : out) {
                state = phi * state + innovation_sd * rng.normal();
                x = state;
            }
            break;
        }
    }
}

SampleRecord sample(const NoiseModel& model, std::size_t n,
                    std::uint64_t seed) {
    SampleRecord record;
    record.samples.resize(n);
    sample_into(model, record.samples, seed);
    return record;
}

}  // namespace ccp
