#pragma once

#include <optional>
#include <vector>

#include "infl/inflate.hpp"
#include "infl/lpcore.hpp"
#include "infl/model.hpp"

namespace infl {

/// Polynomial incompatibility witness: nonnegative on every distribution the
/// scenario can realize, strictly negative on the tested input. Coefficients
/// are affinely normalized so the certified minimum over the order-n symmetric
/// polytope is 0 and the maximum is at most 1.
struct Witness {
    Polynomial coefficients;       // degree n over the scenario's joint outcomes
    double value_at_input = 0.0;   // recomputed against the raw input after normalization
    double certified_floor = 0.0;  // 0 by construction
};

/// Assembles the unnormalized coefficient vector from the Farkas multipliers
/// of the product rows: the multiplier of row (a^1..a^n), negated, becomes the
/// coefficient of the corresponding lifted tuple. Event rows spread their
/// multiplier over every lifted tuple in e^1 x ... x e^n.
Polynomial witness_coefficients(const std::vector<double>& farkas, const ConstraintSet& constraints,
                                const CorrelationScenario& scenario, int order,
                                const EventTable* events = nullptr);

/// Full extraction: assemble, normalize via the two auxiliary LPs (min and max
/// of F.Q over the symmetric polytope), affinely rescale to floor 0 / span 1,
/// and recompute value_at_input from scratch against the input (p for
/// distribution-constrained problems, events otherwise).
/// Throws if a normalization LP fails, which signals a malformed constraint set.
Witness extract_witness(const std::vector<double>& farkas, const ConstraintSet& constraints,
                        const InflationProblem& problem, const OrbitIndex& index,
                        const Distribution* p, const EventTable* events,
                        const SolverOptions& options = {});

}  // namespace infl
