#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace specmatch {

/// Deterministic random helpers. std::mt19937_64 output is pinned by the
/// standard and the value mappings below are our own, so streams are
/// reproducible across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Integer in [a, b] inclusive.
    int uniform_int(int a, int b) {
        const auto span = static_cast<std::uint64_t>(b - a) + 1;
        return a + static_cast<int>(gen_() % span);
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do {
            u = uniform();
        } while (u <= 0.0);
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        has_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace specmatch
