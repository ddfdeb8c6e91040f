#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pathdep/dag.hpp"
#include "pathdep/gaussian.hpp"

namespace pathdep {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seeded random source. Engine output is fixed by the standard and the
/// conversions below are ours, so streams are reproducible across toolchains.
/// split() derives an independent child stream, letting trial i of a suite
/// run anywhere with the same draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next() { return engine_(); }
    /// Uniform in [0,1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n);
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool coin(double p = 0.5) { return uniform() < p; }

    Rng split(std::uint64_t stream) const { return Rng(child_seed(seed_, stream)); }
    static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Constrained sampler keeping parameterizations away from the measure-zero
/// unfaithful set: |b| ~ U[0.2, 2] with random sign, tau2 ~ U[0.5, 2].
struct ParamRanges {
    double coeff_min = 0.2;
    double coeff_max = 2.0;
    double var_min = 0.5;
    double var_max = 2.0;
};

GaussianParams sample_params(const Dag& dag, Rng& rng, const ParamRanges& ranges = {});

/// Random labelled polytree on n vertices named v0..v{n-1}: random recursive
/// tree, random edge orientations, random labelling.
Dag random_polytree(std::size_t n, Rng& rng);

}  // namespace pathdep
