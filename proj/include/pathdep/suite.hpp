#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathdep/dag.hpp"
#include "pathdep/gaussian.hpp"
#include "pathdep/random.hpp"

namespace pathdep {

enum class SuiteId { Lemmas, Theorem1, Monotonicity, Telescoping, Faithfulness, Reduction };

std::string_view to_string(SuiteId id) noexcept;
/// Throws UnknownKind.
SuiteId parse_suite_id(std::string_view text);

struct Violation {
    std::uint64_t seed = 0;  ///< per-trial seed; rerunning the trial with it reproduces the case
    std::vector<double> params;
    double lhs = 0;
    double rhs = 0;
    std::string detail;
};

struct TrialReport {
    SuiteId suite = SuiteId::Lemmas;
    std::size_t trials = 0;
    std::vector<Violation> violations;
    double max_violation_magnitude = 0;
    /// Trials skipped as not applicable (e.g. a vanishing telescoping denominator).
    std::size_t excluded = 0;
    /// Violations tolerated before the suite fails (nonzero only for faithfulness).
    std::size_t allowed_violations = 0;

    bool passes() const { return violations.size() <= allowed_violations; }
};

/// A polytree with an ordered conditioning pair z1 < z2 for (a, c).
struct OrderedInstance {
    Dag dag;
    Vertex a, c;
    VertexSet z1, z2;
};

/// Random polytree on 3..max_vertices vertices and a random ordered pair of
/// distinct relevant subsets with at most 3 elements each.
OrderedInstance sample_ordered_instance(Rng& rng, std::size_t max_vertices = 12);

/// Deterministic given the seed: trial i draws from Rng(child_seed(seed, i)).
/// For the lemma suite n_trials is per family.
TrialReport run_trial_suite(SuiteId id, std::uint64_t seed, std::size_t n_trials);

}  // namespace pathdep
