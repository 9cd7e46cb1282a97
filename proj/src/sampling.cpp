#include "infl/sampling.hpp"

#include <cmath>

namespace infl {

std::uint64_t draw_index(std::mt19937_64& rng, std::uint64_t bound) {
    // modulo is fine here: bounds are tiny relative to 2^64
    return bound == 0 ? 0 : rng() % bound;
}

double draw_unit(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

namespace {

std::vector<double> dirichlet_uniform(std::mt19937_64& rng, int size) {
    std::vector<double> w(static_cast<std::size_t>(size));
    double sum = 0.0;
    for (double& v : w) {
        v = -std::log(draw_unit(rng));
        sum += v;
    }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

LatentModel sample_latent_model(const CorrelationScenario& scenario, std::mt19937_64& rng,
                                int latent_alphabet) {
    LatentModel model;
    model.latent_cards.assign(scenario.latent_count(), latent_alphabet);
    for (std::size_t j = 0; j < scenario.latent_count(); ++j)
        model.weights.push_back(dirichlet_uniform(rng, latent_alphabet));
    for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
        std::uint64_t table_size = 1;
        for (std::size_t k = 0; k < scenario.parent_sets[x].size(); ++k)
            table_size *= static_cast<std::uint64_t>(latent_alphabet);
        std::vector<int> response(table_size);
        for (auto& r : response)
            r = static_cast<int>(draw_index(rng, static_cast<std::uint64_t>(scenario.cardinalities[x])));
        model.responses.push_back(std::move(response));
    }
    return model;
}

Distribution sample_compatible(const CorrelationScenario& scenario, std::mt19937_64& rng,
                               int latent_alphabet) {
    return realize(sample_latent_model(scenario, rng, latent_alphabet), scenario);
}

Distribution sample_random_table(const std::vector<std::string>& names, const std::vector<int>& cards,
                                 std::mt19937_64& rng) {
    Distribution out;
    out.names = names;
    out.cards = cards;
    out.table = dirichlet_uniform(rng, static_cast<int>(OutcomeSpace(cards).size()));
    return out;
}

}  // namespace infl
