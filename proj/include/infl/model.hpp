#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infl/outcome_space.hpp"

namespace infl {

constexpr double kNormalizationTolerance = 1e-9;

enum class NodeKind { Latent, Observed, ExogenousObserved };

struct Node {
    std::string name;
    NodeKind kind = NodeKind::Observed;
    int cardinality = 0;  // positive for observed kinds, 0 for latent
};

/// Directed acyclic graph over latent / observed / exogenous-observed variables.
/// Edges are stored as (parent name, child name) pairs; structural invariants
/// are checked by validate(), not by the constructor.
struct CausalStructure {
    std::vector<Node> nodes;
    std::vector<std::pair<std::string, std::string>> edges;

    std::optional<std::size_t> node_index(const std::string& name) const;
    std::vector<std::size_t> parents_of(std::size_t node) const;
    std::vector<std::size_t> children_of(std::size_t node) const;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Lists every invariant violation: duplicate names, dangling edge endpoints,
/// parents on exogenous-observed nodes, missing/spurious cardinalities, cycles.
ValidationReport validate(const CausalStructure& structure);

/// Two-layer structure: independent latent roots feeding observed leaves.
struct CorrelationScenario {
    std::vector<std::string> latent_names;                // U_1..U_L
    std::vector<std::string> observed_names;              // A_1..A_m
    std::vector<int> cardinalities;                       // d_1..d_m
    std::vector<std::vector<int>> parent_sets;            // L_x: sorted latent indices

    std::size_t latent_count() const { return latent_names.size(); }
    std::size_t observed_count() const { return observed_names.size(); }
    OutcomeSpace joint_space() const { return OutcomeSpace(cardinalities); }

    /// Weak connectivity of the latent/observed bipartite graph. Reported, never enforced.
    bool connected() const;

    /// Empty on success; otherwise one message per violated invariant.
    std::vector<std::string> check() const;

    /// The scenario as a plain causal structure (latent roots plus edges to children).
    CausalStructure to_structure() const;
};

/// Dense probability table, optionally conditional. Layout is row-major over
/// (conditioning tuple, outcome tuple) in declared variable order.
struct Distribution {
    std::vector<std::string> names;
    std::vector<int> cards;
    std::vector<std::string> given_names;
    std::vector<int> given_cards;
    std::vector<double> table;

    OutcomeSpace outcome_space() const { return OutcomeSpace(cards); }
    OutcomeSpace given_space() const { return OutcomeSpace(given_cards); }
    bool conditional() const { return !given_names.empty(); }

    double at(std::uint64_t given_flat, std::uint64_t outcome_flat) const {
        return table[given_flat * OutcomeSpace(cards).size() + outcome_flat];
    }
    double at(std::uint64_t outcome_flat) const { return table[outcome_flat]; }

    /// Entries nonnegative, every conditioning slice sums to 1 within 1e-9.
    std::vector<std::string> check() const;
};

/// Named measurable events over a scenario's joint outcome space.
struct Event {
    std::string name;
    std::vector<std::uint64_t> members;  // sorted flat outcome indices
    double probability = 0.0;
};

struct EventTable {
    std::vector<std::string> names;  // variables of the outcome space
    std::vector<int> cards;          // per-variable cardinalities
    std::vector<Event> events;

    OutcomeSpace outcome_space() const { return OutcomeSpace(cards); }
    std::vector<std::string> check() const;
};

/// Degree-g polynomial in the probabilities, stored as the dense coefficient
/// vector over g-tuples of joint outcomes: F(P) = sum_t coeffs[t] * P^{(x)g}[t].
struct Polynomial {
    int degree = 1;
    std::vector<int> cards;
    std::vector<double> coeffs;  // size = (prod cards)^degree, blocks row-major

    OutcomeSpace base_space() const { return OutcomeSpace(cards); }
    OutcomeSpace lifted_space() const;
    std::vector<std::string> check() const;

    /// Canonical form: average over permutations of the g copy blocks.
    /// Leaves F(P) unchanged for every distribution P.
    Polynomial symmetrized() const;

    double value_at(const Distribution& p) const;
};

/// Degree-g lifting P^{(x)g}: the joint table of g independent copies of p.
/// Rejects conditional input.
Distribution lift(const Distribution& p, int degree);

}  // namespace infl
