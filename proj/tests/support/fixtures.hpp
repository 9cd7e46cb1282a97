#pragma once

#include <random>
#include <string>
#include <vector>

#include "infl/model.hpp"

namespace fixtures {

// Correlation scenarios
infl::CorrelationScenario triangle(int cardinality = 2);
infl::CorrelationScenario three_on_line(int cardinality = 2);
infl::CorrelationScenario single_variable(int cardinality = 2);

// General structures
infl::CausalStructure triangle_structure(int cardinality = 2);
infl::CausalStructure instrumental_structure();
infl::CausalStructure bell_structure();
infl::CausalStructure chain_example_structure();  // A -> U1 -> U2 -> B, latents endogenous
infl::CausalStructure g1_structure();             // X -> A -> C <- B with a shared latent

// Distributions on three binary variables
infl::Distribution ghz();                  // mass 1/2 on 000 and 111
infl::Distribution noisy_ghz(double v);    // v * ghz + (1-v)/8
infl::Distribution uniform(const std::vector<std::string>& names, const std::vector<int>& cards);

infl::Distribution make_distribution(const std::vector<std::string>& names, const std::vector<int>& cards,
                                     std::vector<double> table);

// Conditional P(A,B|X) for the instrumental scenario; table laid out x-major.
infl::Distribution instrumental_conditional(std::vector<double> table);

// The instrumental-inequality violator: X=0 gives (0,0) surely,
// X=1 gives (0,1) or (1,1) with probability 1/2 each.
infl::Distribution instrumental_violation();

// Forward-sampled instrumental model: u over a 4-letter alphabet with
// Dirichlet-uniform weights, deterministic responses a = f(x,u), b = g(a,u).
infl::Distribution sample_instrumental(std::mt19937_64& rng);

}  // namespace fixtures
