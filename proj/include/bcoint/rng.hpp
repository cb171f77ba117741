#pragma once

#include <cstdint>
#include <random>

namespace bcoint {

/// Seeded random number generator with library-owned variate transforms.
///
/// The mt19937_64 engine is standardised, and all transforms (uniform,
/// normal, gamma) are implemented here rather than taken from
/// <random>'s distributions, whose output is implementation-defined.
/// A fixed seed therefore yields a bit-identical draw stream on every
/// platform and compiler. Callers own one generator per chain/worker.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on {lo, ..., hi} inclusive.
    int uniform_int(int lo, int hi);

    /// Standard normal draw (Box-Muller, pairs cached).
    double normal();

    /// Gamma(shape, 1) draw via Marsaglia-Tsang squeeze.
    double gamma(double shape);

    /// Chi-squared draw with nu degrees of freedom (nu need not be integral).
    double chi_squared(double nu) { return 2.0 * gamma(0.5 * nu); }

    /// Derive a stream seed for a sub-task (chain, trial, instance).
    /// Splitmix64 mixing keeps derived streams decorrelated.
    static std::uint64_t derive(std::uint64_t base, std::uint64_t index);

private:
    std::mt19937_64 engine_;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

}  // namespace bcoint
