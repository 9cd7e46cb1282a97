#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infl/inflate.hpp"
#include "infl/preprocess.hpp"
#include "infl/witness.hpp"

namespace infl {

/// "Feasible at order n" deliberately claims only that an order-n inflation
/// exists; finite order is one-sided.
enum class CompatibilityStatus { FeasibleAtOrder, Incompatible, InconclusiveAtTolerance };

std::string to_string(CompatibilityStatus status);

struct CompatibilityVerdict {
    int order = 0;
    CompatibilityStatus status = CompatibilityStatus::FeasibleAtOrder;
    std::optional<Witness> witness;         // present iff status == Incompatible
    std::optional<double> distance_bound;   // Euclidean lower bound, when computed
};

struct EngineOptions {
    double tolerance = 1e-7;
    std::uint64_t budget = kDefaultEnumerationBudget;
    bool with_distance_bound = true;  // attach the bound to incompatible verdicts at n >= 2
};

/// Sign classification of a normalized witness value: strictly below the
/// tolerance margin is incompatible; near-threshold ties are inconclusive,
/// never incompatible.
CompatibilityStatus classify_witness_value(double value_at_input, double tolerance);

/// Order-n inflation feasibility for a full distribution over the scenario.
CompatibilityVerdict check_compatibility(const CorrelationScenario& scenario, const Distribution& p,
                                         int order, const EngineOptions& options = {});

/// Event-restricted variant: only the probabilities of the measurable events
/// are constrained.
CompatibilityVerdict check_compatibility(const CorrelationScenario& scenario, const EventTable& events,
                                         int order, const EngineOptions& options = {});

/// Certified lower bound on a degree-g polynomial over distributions the
/// scenario can realize: min F.Q_n^g over the order-n symmetric polytope.
struct OptimizationResult {
    int order = 0;
    int degree = 0;
    double lower_bound = 0.0;
    std::vector<double> argmin_marginal;  // dense over degree-g block tuples
};

OptimizationResult optimize(const CorrelationScenario& scenario, const Polynomial& f, int order,
                            const EngineOptions& options = {});

/// sqrt(max(f_n, 0)) for the squared-distance polynomial sum (R(a)-P(a))^2:
/// a certified lower bound on min ||P - P~||_2 over realizable P~. Needs n >= 2.
double distance_lower_bound(const CorrelationScenario& scenario, const Distribution& p, int order,
                            const EngineOptions& options = {});

/// Event variant with N(R) = sum_e (P(e) - R(e))^2.
double distance_lower_bound(const CorrelationScenario& scenario, const EventTable& events, int order,
                            const EngineOptions& options = {});

/// Full pipeline for general causal structures: exogenize, split into
/// districts, unpack each, map the distribution onto events, and run the
/// event-restricted check. Incompatible overall if any district is.
struct DistrictVerdict {
    District district;
    UnpackedScenario unpacked;
    CompatibilityVerdict verdict;
};

struct StructureVerdict {
    std::vector<DistrictVerdict> districts;
    CompatibilityStatus overall = CompatibilityStatus::FeasibleAtOrder;
    std::vector<std::string> warnings;
};

StructureVerdict check_structure(const CausalStructure& structure, const Distribution& p, int order,
                                 const EngineOptions& options = {});

/// Samples seeded compatible distributions and reports the minimum witness
/// value over the samples; flags failure below -1e-6.
struct WitnessReport {
    int samples = 0;
    double min_sample_value = 0.0;
    double value_at_input = 0.0;
    bool flagged = false;
};

WitnessReport verify_witness(const Witness& witness, const CorrelationScenario& scenario, int samples,
                             std::uint64_t seed, int latent_alphabet = 4);

}  // namespace infl
