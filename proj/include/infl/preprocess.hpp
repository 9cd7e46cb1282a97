#pragma once

#include <string>
#include <utility>
#include <vector>

#include "infl/model.hpp"

namespace infl {

/// Removes endogenous latent variables: each one is replaced by edges wiring
/// every parent directly to every child, iterated to a fixed point. The
/// observed subgraph is unchanged; idempotent.
CausalStructure exogenize(const CausalStructure& structure);

/// Deletes all and only edges whose origin is observable. Expects an
/// exogenized structure.
CausalStructure correlation_skeleton(const CausalStructure& structure);

/// Weakly-connected component of the correlation skeleton, with its induced
/// original edges. Exogenous-observed nodes attach to every district that
/// contains one of their children and condition that district's kernel.
struct District {
    CausalStructure structure;               // members + attached conditioning nodes
    std::vector<std::string> members;        // latent and observed names in the component
    std::vector<std::string> conditioning;   // attached exogenous-observed names
};

std::vector<District> districts(const CausalStructure& structure);

/// Counterfactual correlation scenario: each endogenous observed variable A
/// becomes one variable per joint value of its observable parents, all with
/// A's latent parents. Variables with no latent parents receive a private one.
struct UnpackedScenario {
    CorrelationScenario scenario;
    struct Origin {
        std::string original;
        std::vector<std::pair<std::string, int>> parent_values;  // empty when paOBS is empty
    };
    std::vector<Origin> origins;  // one per scenario observed variable
};

/// Measurable-event map realizing the varying-marginal identity: the event for
/// (a-bar, x-bar) pins, for each original variable, the counterfactual copy
/// selected by its parents' values to the assigned value. The pinned
/// coordinate set depends only on parent values, never on the assigned value.
struct EventMap {
    std::vector<std::string> endo_names;
    std::vector<int> endo_cards;
    std::vector<std::string> cond_names;
    std::vector<int> cond_cards;
    std::vector<std::string> unpacked_names;
    std::vector<int> unpacked_cards;
    // indexed by flat (x-bar major, a-bar minor): pinned (variable, value) pairs
    std::vector<std::vector<std::pair<int, int>>> pinned;

    OutcomeSpace endo_space() const { return OutcomeSpace(endo_cards); }
    OutcomeSpace cond_space() const { return OutcomeSpace(cond_cards); }
};

/// Requires an exogenized, single-district structure; multi-district input is
/// rejected with a directive to call districts() first. A correlation scenario
/// unpacks to itself with the trivial (singleton-event) map.
std::pair<UnpackedScenario, EventMap> unpack(const CausalStructure& structure);

/// Pairs each unpacked event with the original conditional probability
/// P(a-bar | x-bar). The distribution signature must match the event map.
EventTable map_distribution(const Distribution& p, const EventMap& map);

/// True when the structure already is a two-layer correlation scenario.
bool is_correlation_scenario(const CausalStructure& structure);

/// Conversion for structures that are correlation scenarios. Throws otherwise.
CorrelationScenario as_correlation_scenario(const CausalStructure& structure);

}  // namespace infl
