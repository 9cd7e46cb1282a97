#include "infl/latent_model.hpp"

#include <cmath>

namespace infl {

std::vector<std::string> LatentModel::check(const CorrelationScenario& scenario) const {
    std::vector<std::string> issues;
    if (latent_cards.size() != scenario.latent_count()) issues.push_back("latent alphabet count mismatch");
    if (weights.size() != scenario.latent_count()) issues.push_back("weight vector count mismatch");
    if (responses.size() != scenario.observed_count()) issues.push_back("response table count mismatch");
    for (std::size_t j = 0; j < weights.size() && j < latent_cards.size(); ++j) {
        if (weights[j].size() != static_cast<std::size_t>(latent_cards[j])) {
            issues.push_back("weight vector length mismatch for latent " + std::to_string(j));
            continue;
        }
        double sum = 0.0;
        for (double w : weights[j]) {
            if (w < 0.0) issues.push_back("negative latent weight");
            sum += w;
        }
        if (std::fabs(sum - 1.0) > kNormalizationTolerance)
            issues.push_back("latent weights do not sum to 1");
    }
    return issues;
}

Distribution realize(const LatentModel& model, const CorrelationScenario& scenario) {
    Distribution out;
    out.names = scenario.observed_names;
    out.cards = scenario.cardinalities;
    const OutcomeSpace joint = scenario.joint_space();
    out.table.assign(joint.size(), 0.0);

    const OutcomeSpace latent_space{model.latent_cards};
    std::vector<int> u(latent_space.rank());
    std::vector<int> outcome(scenario.observed_count());
    for (std::uint64_t flat = 0; flat < latent_space.size(); ++flat) {
        latent_space.decode(flat, u);
        double weight = 1.0;
        for (std::size_t j = 0; j < u.size(); ++j) weight *= model.weights[j][u[j]];
        if (weight == 0.0) continue;
        for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
            const auto& parents = scenario.parent_sets[x];
            std::uint64_t idx = 0;
            for (std::size_t k = 0; k < parents.size(); ++k)
                idx = idx * static_cast<std::uint64_t>(model.latent_cards[parents[k]]) +
                      static_cast<std::uint64_t>(u[parents[k]]);
            outcome[x] = model.responses[x][idx];
        }
        out.table[joint.encode(outcome)] += weight;
    }
    return out;
}

}  // namespace infl
