#include "pathdep/random.hpp"

#include <numeric>

namespace pathdep {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t Rng::child_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::size_t Rng::below(std::size_t n) {
    if (n <= 1) return 0;
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

GaussianParams sample_params(const Dag& dag, Rng& rng, const ParamRanges& ranges) {
    GaussianParams p;
    for (const Edge& e : dag.edges()) {
        double mag = rng.uniform(ranges.coeff_min, ranges.coeff_max);
        p.set_coefficient(e.parent, e.child, rng.coin() ? mag : -mag);
    }
    for (Vertex v : dag.vertices()) p.set_noise_variance(v, rng.uniform(ranges.var_min, ranges.var_max));
    return p;
}

Dag random_polytree(std::size_t n, Rng& rng) {
    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), std::size_t{0});
    rng.shuffle(label);
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = "v" + std::to_string(i);
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t v = 1; v < n; ++v) {
        std::size_t u = rng.below(v);
        const std::string& a = names[label[u]];
        const std::string& b = names[label[v]];
        if (rng.coin()) {
            edges.emplace_back(a, b);
        } else {
            edges.emplace_back(b, a);
        }
    }
    return Dag::build(std::move(names), edges);
}

}  // namespace pathdep
