#include "fixtures.hpp"

#include <cmath>

#include "infl/sampling.hpp"

namespace fixtures {

using namespace infl;

CorrelationScenario triangle(int cardinality) {
    CorrelationScenario s;
    s.latent_names = {"U1", "U2", "U3"};
    s.observed_names = {"A", "B", "C"};
    s.cardinalities = {cardinality, cardinality, cardinality};
    s.parent_sets = {{0, 1}, {1, 2}, {2, 0}};
    return s;
}

CorrelationScenario three_on_line(int cardinality) {
    CorrelationScenario s;
    s.latent_names = {"U1", "U2"};
    s.observed_names = {"A", "B", "C"};
    s.cardinalities = {cardinality, cardinality, cardinality};
    s.parent_sets = {{0}, {0, 1}, {1}};
    return s;
}

CorrelationScenario single_variable(int cardinality) {
    CorrelationScenario s;
    s.latent_names = {"U"};
    s.observed_names = {"A"};
    s.cardinalities = {cardinality};
    s.parent_sets = {{0}};
    return s;
}

CausalStructure triangle_structure(int cardinality) {
    return triangle(cardinality).to_structure();
}

CausalStructure instrumental_structure() {
    CausalStructure s;
    s.nodes = {{"X", NodeKind::ExogenousObserved, 2},
               {"U", NodeKind::Latent, 0},
               {"A", NodeKind::Observed, 2},
               {"B", NodeKind::Observed, 2}};
    s.edges = {{"X", "A"}, {"U", "A"}, {"U", "B"}, {"A", "B"}};
    return s;
}

CausalStructure bell_structure() {
    CausalStructure s;
    s.nodes = {{"X", NodeKind::ExogenousObserved, 2},
               {"Y", NodeKind::ExogenousObserved, 2},
               {"U", NodeKind::Latent, 0},
               {"A", NodeKind::Observed, 2},
               {"B", NodeKind::Observed, 2}};
    s.edges = {{"X", "A"}, {"U", "A"}, {"U", "B"}, {"Y", "B"}};
    return s;
}

CausalStructure chain_example_structure() {
    CausalStructure s;
    s.nodes = {{"A", NodeKind::Observed, 2},
               {"U1", NodeKind::Latent, 0},
               {"U2", NodeKind::Latent, 0},
               {"B", NodeKind::Observed, 2}};
    s.edges = {{"A", "U1"}, {"U1", "U2"}, {"U2", "B"}};
    return s;
}

CausalStructure g1_structure() {
    CausalStructure s;
    s.nodes = {{"X", NodeKind::ExogenousObserved, 2},
               {"U", NodeKind::Latent, 0},
               {"A", NodeKind::Observed, 2},
               {"B", NodeKind::Observed, 2},
               {"C", NodeKind::Observed, 2}};
    s.edges = {{"X", "A"}, {"U", "A"}, {"U", "B"}, {"U", "C"}, {"A", "C"}, {"B", "C"}};
    return s;
}

Distribution make_distribution(const std::vector<std::string>& names, const std::vector<int>& cards,
                               std::vector<double> table) {
    Distribution p;
    p.names = names;
    p.cards = cards;
    p.table = std::move(table);
    return p;
}

Distribution ghz() {
    return make_distribution({"A", "B", "C"}, {2, 2, 2}, {0.5, 0, 0, 0, 0, 0, 0, 0.5});
}

Distribution noisy_ghz(double v) {
    std::vector<double> table(8, (1.0 - v) / 8.0);
    table[0] += v / 2.0;
    table[7] += v / 2.0;
    return make_distribution({"A", "B", "C"}, {2, 2, 2}, std::move(table));
}

Distribution uniform(const std::vector<std::string>& names, const std::vector<int>& cards) {
    std::uint64_t size = 1;
    for (int c : cards) size *= static_cast<std::uint64_t>(c);
    return make_distribution(names, cards, std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Distribution instrumental_conditional(std::vector<double> table) {
    Distribution p;
    p.names = {"A", "B"};
    p.cards = {2, 2};
    p.given_names = {"X"};
    p.given_cards = {2};
    p.table = std::move(table);
    return p;
}

Distribution instrumental_violation() {
    // x = 0: (a,b) = (0,0); x = 1: (0,1) or (1,1) equally
    return instrumental_conditional({1, 0, 0, 0, 0, 0.5, 0, 0.5});
}

Distribution sample_instrumental(std::mt19937_64& rng) {
    std::vector<double> u_weights(4);
    double sum = 0.0;
    for (double& w : u_weights) {
        w = -std::log(draw_unit(rng));
        sum += w;
    }
    for (double& w : u_weights) w /= sum;
    int f[2][4], g[2][4];
    for (int x = 0; x < 2; ++x)
        for (int u = 0; u < 4; ++u) {
            f[x][u] = static_cast<int>(draw_index(rng, 2));
            g[x][u] = static_cast<int>(draw_index(rng, 2));
        }
    std::vector<double> table(8, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int u = 0; u < 4; ++u) {
            const int a = f[x][u];
            const int b = g[a][u];
            table[x * 4 + a * 2 + b] += u_weights[u];
        }
    return instrumental_conditional(std::move(table));
}

}  // namespace fixtures
