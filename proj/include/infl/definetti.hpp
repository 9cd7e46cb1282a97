#pragma once

#include <cstdint>
#include <vector>

#include "infl/inflate.hpp"
#include "infl/latent_model.hpp"
#include "infl/model.hpp"

namespace infl {

/// A fixed outcome for every variable of an inflation, in variable order.
struct DeterministicAssignment {
    std::vector<int> values;
};

/// Group-average of a dense distribution over the full inflation outcome
/// space. A projection: idempotent, linear, preserves normalization.
std::vector<double> symmetrize(const std::vector<double>& q, const InflationProblem& problem,
                               std::uint64_t budget = kDefaultEnumerationBudget);

/// Diagonal marginals of the symmetrized deterministic point, computed
/// combinatorially from sums over non-repeating copy-index tuples per latent,
/// without materializing the symmetrized distribution.
struct ClosedFormMarginals {
    Distribution degree_g;  // over g blocks of the scenario's joint outcomes
    Distribution degree_1;
    LatentModel model;      // uniform copy indices + the assignment as responses; realizes degree_1
};

ClosedFormMarginals diagonal_marginal_closed_form(const DeterministicAssignment& assignment,
                                                  const CorrelationScenario& scenario, int n, int g);

/// 2 ( 1 - n^L (n-1)^L ... (n-g+1)^L / n^{gL} ), the total-variation bound on
/// the distance between the degree-g diagonal marginal and the lifting of the
/// degree-1 marginal.
double convergence_bound(int latent_count, int n, int g);

/// Unhalved L1 distance sum_x |q1(x) - q2(x)|. Many references halve this;
/// the convergence bound above uses the unhalved convention.
double tv_distance(const std::vector<double>& q1, const std::vector<double>& q2);

}  // namespace infl
