#include "infl/preprocess.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace infl {

namespace {

bool edge_exists(const CausalStructure& s, const std::string& from, const std::string& to) {
    for (const auto& e : s.edges)
        if (e.first == from && e.second == to) return true;
    return false;
}

}  // namespace

CausalStructure exogenize(const CausalStructure& structure) {
    CausalStructure out = structure;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& node : out.nodes) {
            if (node.kind != NodeKind::Latent) continue;
            std::vector<std::string> parents, children;
            for (const auto& [from, to] : out.edges) {
                if (to == node.name) parents.push_back(from);
                if (from == node.name) children.push_back(to);
            }
            if (parents.empty()) continue;
            for (const auto& p : parents)
                for (const auto& c : children)
                    if (!edge_exists(out, p, c)) out.edges.emplace_back(p, c);
            out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                           [&](const auto& e) { return e.second == node.name; }),
                            out.edges.end());
            changed = true;
        }
    }
    return out;
}

CausalStructure correlation_skeleton(const CausalStructure& structure) {
    CausalStructure out = structure;
    out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                   [&](const auto& e) {
                                       const auto from = structure.node_index(e.first);
                                       return from && structure.nodes[*from].kind != NodeKind::Latent;
                                   }),
                    out.edges.end());
    return out;
}

std::vector<District> districts(const CausalStructure& structure) {
    const CausalStructure skeleton = correlation_skeleton(structure);
    const std::size_t n = structure.nodes.size();

    // union-find over skeleton edges
    std::vector<std::size_t> root(n);
    for (std::size_t i = 0; i < n; ++i) root[i] = i;
    const auto find = [&](std::size_t v) {
        while (root[v] != v) {
            root[v] = root[root[v]];
            v = root[v];
        }
        return v;
    };
    for (const auto& [from, to] : skeleton.edges) {
        const auto f = structure.node_index(from);
        const auto t = structure.node_index(to);
        if (!f || !t) continue;
        const std::size_t a = find(*f), b = find(*t);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
    }

    // components in first-member order; exogenous nodes are always skeleton
    // singletons and are attached as conditioning below, never as districts
    std::vector<std::size_t> component_roots;
    for (std::size_t i = 0; i < n; ++i)
        if (find(i) == i && structure.nodes[i].kind != NodeKind::ExogenousObserved)
            component_roots.push_back(i);

    std::vector<District> out;
    for (std::size_t r : component_roots) {
        District district;
        std::set<std::string> in_district;
        for (std::size_t i = 0; i < n; ++i) {
            if (find(i) != r) continue;
            district.members.push_back(structure.nodes[i].name);
            in_district.insert(structure.nodes[i].name);
        }
        // attach exogenous conditioning nodes with a child in the component
        for (std::size_t i = 0; i < n; ++i) {
            if (structure.nodes[i].kind != NodeKind::ExogenousObserved) continue;
            for (const auto& [from, to] : structure.edges)
                if (from == structure.nodes[i].name && in_district.count(to)) {
                    district.conditioning.push_back(structure.nodes[i].name);
                    in_district.insert(from);
                    break;
                }
        }
        for (const auto& node : structure.nodes)
            if (in_district.count(node.name)) district.structure.nodes.push_back(node);
        for (const auto& edge : structure.edges)
            if (in_district.count(edge.first) && in_district.count(edge.second))
                district.structure.edges.push_back(edge);
        out.push_back(std::move(district));
    }
    return out;
}

bool is_correlation_scenario(const CausalStructure& structure) {
    for (const auto& node : structure.nodes)
        if (node.kind == NodeKind::ExogenousObserved) return false;
    for (const auto& [from, to] : structure.edges) {
        const auto f = structure.node_index(from);
        const auto t = structure.node_index(to);
        if (!f || !t) return false;
        if (structure.nodes[*f].kind != NodeKind::Latent) return false;
        if (structure.nodes[*t].kind != NodeKind::Observed) return false;
    }
    for (std::size_t i = 0; i < structure.nodes.size(); ++i)
        if (structure.nodes[i].kind == NodeKind::Observed && structure.parents_of(i).empty())
            return false;
    return true;
}

CorrelationScenario as_correlation_scenario(const CausalStructure& structure) {
    if (!is_correlation_scenario(structure))
        throw std::invalid_argument("structure is not a two-layer correlation scenario");
    CorrelationScenario scenario;
    std::map<std::string, int> latent_index;
    for (const auto& node : structure.nodes) {
        if (node.kind == NodeKind::Latent) {
            latent_index[node.name] = static_cast<int>(scenario.latent_names.size());
            scenario.latent_names.push_back(node.name);
        }
    }
    for (const auto& node : structure.nodes) {
        if (node.kind != NodeKind::Observed) continue;
        scenario.observed_names.push_back(node.name);
        scenario.cardinalities.push_back(node.cardinality);
        std::vector<int> parents;
        for (const auto& [from, to] : structure.edges)
            if (to == node.name) parents.push_back(latent_index.at(from));
        std::sort(parents.begin(), parents.end());
        parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
        scenario.parent_sets.push_back(std::move(parents));
    }
    return scenario;
}

namespace {

std::string unique_name(std::string candidate, const std::set<std::string>& taken) {
    while (taken.count(candidate)) candidate += "'";
    return candidate;
}

}  // namespace

std::pair<UnpackedScenario, EventMap> unpack(const CausalStructure& structure) {
    for (std::size_t i = 0; i < structure.nodes.size(); ++i)
        if (structure.nodes[i].kind == NodeKind::Latent && !structure.parents_of(i).empty())
            throw std::invalid_argument("unpack requires an exogenized structure");
    if (districts(structure).size() != 1)
        throw std::invalid_argument("unpack requires a single district; split the structure with districts() first");

    std::set<std::string> taken;
    for (const auto& node : structure.nodes) taken.insert(node.name);

    UnpackedScenario unpacked;
    EventMap map;

    std::map<std::string, int> latent_index;
    for (const auto& node : structure.nodes) {
        if (node.kind != NodeKind::Latent) continue;
        latent_index[node.name] = static_cast<int>(unpacked.scenario.latent_names.size());
        unpacked.scenario.latent_names.push_back(node.name);
    }

    struct EndoInfo {
        std::size_t node;
        std::vector<std::size_t> observable_parents;  // node indices, in node order
        OutcomeSpace parent_space;
        std::vector<int> latent_parents;
        std::size_t first_variable;  // index of its first counterfactual in the scenario
    };
    std::vector<EndoInfo> endo;

    for (std::size_t i = 0; i < structure.nodes.size(); ++i) {
        const Node& node = structure.nodes[i];
        if (node.kind == NodeKind::ExogenousObserved) {
            map.cond_names.push_back(node.name);
            map.cond_cards.push_back(node.cardinality);
        }
        if (node.kind != NodeKind::Observed) continue;

        EndoInfo info;
        info.node = i;
        for (std::size_t p : structure.parents_of(i)) {
            if (structure.nodes[p].kind == NodeKind::Latent)
                info.latent_parents.push_back(latent_index.at(structure.nodes[p].name));
            else
                info.observable_parents.push_back(p);
        }
        std::sort(info.observable_parents.begin(), info.observable_parents.end());
        info.observable_parents.erase(
            std::unique(info.observable_parents.begin(), info.observable_parents.end()),
            info.observable_parents.end());
        std::vector<int> parent_cards;
        for (std::size_t p : info.observable_parents) parent_cards.push_back(structure.nodes[p].cardinality);
        info.parent_space = OutcomeSpace(parent_cards);
        std::sort(info.latent_parents.begin(), info.latent_parents.end());
        info.latent_parents.erase(std::unique(info.latent_parents.begin(), info.latent_parents.end()),
                                  info.latent_parents.end());

        if (info.latent_parents.empty()) {
            // private noise source so the scenario stays two-layer
            const std::string name = unique_name(node.name + "_u", taken);
            taken.insert(name);
            info.latent_parents.push_back(static_cast<int>(unpacked.scenario.latent_names.size()));
            unpacked.scenario.latent_names.push_back(name);
        }

        info.first_variable = unpacked.scenario.observed_names.size();
        std::vector<int> parent_values(info.observable_parents.size());
        for (std::uint64_t v = 0; v < info.parent_space.size(); ++v) {
            info.parent_space.decode(v, parent_values);
            std::string name = node.name;
            UnpackedScenario::Origin origin;
            origin.original = node.name;
            if (!info.observable_parents.empty()) {
                name += "[";
                for (std::size_t k = 0; k < info.observable_parents.size(); ++k) {
                    const std::string& pname = structure.nodes[info.observable_parents[k]].name;
                    if (k > 0) name += ",";
                    name += pname + "=" + std::to_string(parent_values[k]);
                    origin.parent_values.emplace_back(pname, parent_values[k]);
                }
                name += "]";
            }
            unpacked.scenario.observed_names.push_back(name);
            unpacked.scenario.cardinalities.push_back(node.cardinality);
            unpacked.scenario.parent_sets.push_back(info.latent_parents);
            unpacked.origins.push_back(std::move(origin));
        }

        map.endo_names.push_back(node.name);
        map.endo_cards.push_back(node.cardinality);
        endo.push_back(std::move(info));
    }

    map.unpacked_names = unpacked.scenario.observed_names;
    map.unpacked_cards = unpacked.scenario.cardinalities;

    // position of each original observable within (endo | cond), for parent lookups
    std::map<std::string, std::pair<bool, std::size_t>> position;  // (is_conditioning, index)
    for (std::size_t k = 0; k < map.endo_names.size(); ++k) position[map.endo_names[k]] = {false, k};
    for (std::size_t k = 0; k < map.cond_names.size(); ++k) position[map.cond_names[k]] = {true, k};

    const OutcomeSpace endo_space(map.endo_cards);
    const OutcomeSpace cond_space(map.cond_cards);
    std::vector<int> a_bar(map.endo_cards.size());
    std::vector<int> x_bar(map.cond_cards.size());
    std::vector<int> parent_values;

    map.pinned.resize(cond_space.size() * endo_space.size());
    for (std::uint64_t xi = 0; xi < cond_space.size(); ++xi) {
        cond_space.decode(xi, x_bar);
        for (std::uint64_t ai = 0; ai < endo_space.size(); ++ai) {
            endo_space.decode(ai, a_bar);
            std::vector<std::pair<int, int>> pins;
            for (std::size_t k = 0; k < endo.size(); ++k) {
                const EndoInfo& info = endo[k];
                parent_values.clear();
                for (std::size_t p : info.observable_parents) {
                    const auto& [is_cond, idx] = position.at(structure.nodes[p].name);
                    parent_values.push_back(is_cond ? x_bar[idx] : a_bar[idx]);
                }
                const std::uint64_t v = info.parent_space.encode(parent_values);
                pins.emplace_back(static_cast<int>(info.first_variable + v), a_bar[k]);
            }
            map.pinned[xi * endo_space.size() + ai] = std::move(pins);
        }
    }
    return {std::move(unpacked), std::move(map)};
}

EventTable map_distribution(const Distribution& p, const EventMap& map) {
    if (p.names != map.endo_names || p.cards != map.endo_cards || p.given_names != map.cond_names ||
        p.given_cards != map.cond_cards)
        throw std::invalid_argument("distribution signature does not match the event map");

    EventTable table;
    table.names = map.unpacked_names;
    table.cards = map.unpacked_cards;
    const OutcomeSpace unpacked_space(map.unpacked_cards);
    const OutcomeSpace endo_space = map.endo_space();
    const OutcomeSpace cond_space = map.cond_space();

    std::vector<int> a_bar(map.endo_cards.size());
    std::vector<int> x_bar(map.cond_cards.size());
    for (std::uint64_t xi = 0; xi < cond_space.size(); ++xi) {
        cond_space.decode(xi, x_bar);
        for (std::uint64_t ai = 0; ai < endo_space.size(); ++ai) {
            endo_space.decode(ai, a_bar);
            const auto& pins = map.pinned[xi * endo_space.size() + ai];

            Event event;
            for (std::size_t k = 0; k < a_bar.size(); ++k) {
                if (k > 0) event.name += ",";
                event.name += map.endo_names[k] + "=" + std::to_string(a_bar[k]);
            }
            if (!x_bar.empty()) {
                event.name += "|";
                for (std::size_t k = 0; k < x_bar.size(); ++k) {
                    if (k > 0) event.name += ",";
                    event.name += map.cond_names[k] + "=" + std::to_string(x_bar[k]);
                }
            }
            event.probability = p.table[xi * endo_space.size() + ai];

            // enumerate members over the free coordinates
            std::vector<int> fixed(map.unpacked_cards.size(), -1);
            for (const auto& [var, value] : pins) fixed[var] = value;
            std::vector<std::size_t> free_vars;
            for (std::size_t v = 0; v < fixed.size(); ++v)
                if (fixed[v] < 0) free_vars.push_back(v);
            std::vector<int> digits(map.unpacked_cards.size());
            for (std::size_t v = 0; v < fixed.size(); ++v) digits[v] = std::max(fixed[v], 0);
            while (true) {
                event.members.push_back(unpacked_space.encode(digits));
                std::size_t j = free_vars.size();
                bool done = free_vars.empty();
                while (j-- > 0) {
                    const std::size_t v = free_vars[j];
                    if (++digits[v] < map.unpacked_cards[v]) break;
                    digits[v] = 0;
                    if (j == 0) done = true;
                }
                if (done) break;
            }
            std::sort(event.members.begin(), event.members.end());
            table.events.push_back(std::move(event));
        }
    }
    return table;
}

}  // namespace infl
