#pragma once

#include <cstdint>
#include <random>

#include "infl/latent_model.hpp"
#include "infl/model.hpp"

namespace infl {

/// Uniform integer in [0, bound) from raw engine draws. Avoids the standard
/// distribution adaptors so that seeded streams are identical everywhere.
std::uint64_t draw_index(std::mt19937_64& rng, std::uint64_t bound);

/// Uniform double in (0, 1).
double draw_unit(std::mt19937_64& rng);

/// Random latent model: Dirichlet-uniform weights over alphabets of the given
/// size, response tables sampled uniformly.
LatentModel sample_latent_model(const CorrelationScenario& scenario, std::mt19937_64& rng,
                                int latent_alphabet = 4);

/// A distribution compatible with the scenario by construction.
Distribution sample_compatible(const CorrelationScenario& scenario, std::mt19937_64& rng,
                               int latent_alphabet = 4);

/// Dirichlet-uniform random table over the given outcome space.
Distribution sample_random_table(const std::vector<std::string>& names, const std::vector<int>& cards,
                                 std::mt19937_64& rng);

}  // namespace infl
