#pragma once

#include <vector>

#include "infl/model.hpp"

namespace infl {

/// Explicit realization of a distribution in a correlation scenario: finite
/// latent alphabets with weights, and a deterministic response table per
/// observed variable over its latent parents' joint values.
struct LatentModel {
    std::vector<int> latent_cards;             // alphabet size per latent
    std::vector<std::vector<double>> weights;  // per latent, sums to 1
    std::vector<std::vector<int>> responses;   // per observed: table over parent tuples (L_x order)

    std::vector<std::string> check(const CorrelationScenario& scenario) const;
};

/// The observed distribution the model generates, by enumeration over the
/// latent joint alphabet.
Distribution realize(const LatentModel& model, const CorrelationScenario& scenario);

}  // namespace infl
