#include "infl/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace infl {

std::optional<std::size_t> CausalStructure::node_index(const std::string& name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].name == name) return i;
    return std::nullopt;
}

std::vector<std::size_t> CausalStructure::parents_of(std::size_t node) const {
    std::vector<std::size_t> out;
    for (const auto& [from, to] : edges)
        if (to == nodes[node].name)
            if (auto i = node_index(from)) out.push_back(*i);
    return out;
}

std::vector<std::size_t> CausalStructure::children_of(std::size_t node) const {
    std::vector<std::size_t> out;
    for (const auto& [from, to] : edges)
        if (from == nodes[node].name)
            if (auto i = node_index(to)) out.push_back(*i);
    return out;
}

namespace {

bool has_cycle(const CausalStructure& s) {
    const std::size_t n = s.nodes.size();
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<int> indegree(n, 0);
    for (const auto& [from, to] : s.edges) {
        auto f = s.node_index(from), t = s.node_index(to);
        if (!f || !t) continue;  // dangling endpoints reported separately
        adj[*f].push_back(*t);
        ++indegree[*t];
    }
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) queue.push_back(i);
    std::size_t seen = 0;
    while (!queue.empty()) {
        const std::size_t v = queue.back();
        queue.pop_back();
        ++seen;
        for (std::size_t w : adj[v])
            if (--indegree[w] == 0) queue.push_back(w);
    }
    return seen != n;
}

}  // namespace

ValidationReport validate(const CausalStructure& structure) {
    ValidationReport report;
    std::set<std::string> seen;
    for (const auto& node : structure.nodes) {
        if (!seen.insert(node.name).second)
            report.violations.push_back("duplicate node name: " + node.name);
        if (node.kind == NodeKind::Latent && node.cardinality != 0)
            report.violations.push_back("latent node " + node.name + " must not declare a cardinality");
        if (node.kind != NodeKind::Latent && node.cardinality <= 0)
            report.violations.push_back("observed node " + node.name + " needs a positive cardinality");
    }
    for (const auto& [from, to] : structure.edges) {
        if (!structure.node_index(from))
            report.violations.push_back("edge references unknown node: " + from);
        if (!structure.node_index(to))
            report.violations.push_back("edge references unknown node: " + to);
        if (auto t = structure.node_index(to))
            if (structure.nodes[*t].kind == NodeKind::ExogenousObserved)
                report.violations.push_back("exogenous-observed node " + to + " must not have parents");
    }
    if (has_cycle(structure)) report.violations.push_back("edge relation contains a cycle");
    return report;
}

bool CorrelationScenario::connected() const {
    const std::size_t total = latent_count() + observed_count();
    if (total == 0) return true;
    std::vector<std::vector<std::size_t>> adj(total);
    for (std::size_t x = 0; x < parent_sets.size(); ++x) {
        for (int j : parent_sets[x]) {
            adj[j].push_back(latent_count() + x);
            adj[latent_count() + x].push_back(j);
        }
    }
    std::vector<bool> visited(total, false);
    std::vector<std::size_t> stack{0};
    visited[0] = true;
    std::size_t seen = 0;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        ++seen;
        for (std::size_t w : adj[v])
            if (!visited[w]) {
                visited[w] = true;
                stack.push_back(w);
            }
    }
    return seen == total;
}

std::vector<std::string> CorrelationScenario::check() const {
    std::vector<std::string> issues;
    if (observed_names.size() != cardinalities.size() || observed_names.size() != parent_sets.size())
        issues.push_back("observed name/cardinality/parent-set lists disagree in length");
    std::vector<bool> used(latent_count(), false);
    for (std::size_t x = 0; x < parent_sets.size(); ++x) {
        if (parent_sets[x].empty())
            issues.push_back("observed variable " + observed_names[x] + " has no latent parents");
        for (int j : parent_sets[x]) {
            if (j < 0 || static_cast<std::size_t>(j) >= latent_count())
                issues.push_back("parent set of " + observed_names[x] + " names a missing latent");
            else
                used[j] = true;
        }
    }
    for (std::size_t j = 0; j < used.size(); ++j)
        if (!used[j]) issues.push_back("latent " + latent_names[j] + " has no children");
    for (int d : cardinalities)
        if (d <= 0) issues.push_back("cardinalities must be positive");
    return issues;
}

CausalStructure CorrelationScenario::to_structure() const {
    CausalStructure s;
    for (const auto& name : latent_names) s.nodes.push_back({name, NodeKind::Latent, 0});
    for (std::size_t x = 0; x < observed_names.size(); ++x)
        s.nodes.push_back({observed_names[x], NodeKind::Observed, cardinalities[x]});
    for (std::size_t x = 0; x < observed_names.size(); ++x)
        for (int j : parent_sets[x]) s.edges.emplace_back(latent_names[j], observed_names[x]);
    return s;
}

std::vector<std::string> Distribution::check() const {
    std::vector<std::string> issues;
    const std::uint64_t outcomes = outcome_space().size();
    const std::uint64_t slices = given_space().size();
    if (table.size() != outcomes * slices) {
        issues.push_back("table has " + std::to_string(table.size()) + " entries, expected " +
                         std::to_string(outcomes * slices));
        return issues;
    }
    for (double v : table)
        if (!(v >= 0.0)) {
            issues.push_back("negative or non-finite entry in table");
            break;
        }
    for (std::uint64_t s = 0; s < slices; ++s) {
        long double sum = 0.0L;
        for (std::uint64_t o = 0; o < outcomes; ++o) sum += table[s * outcomes + o];
        if (std::fabs(static_cast<double>(sum) - 1.0) > kNormalizationTolerance)
            issues.push_back("conditioning slice " + std::to_string(s) + " sums to " +
                             std::to_string(static_cast<double>(sum)) + ", not 1");
    }
    return issues;
}

std::vector<std::string> EventTable::check() const {
    std::vector<std::string> issues;
    const std::uint64_t outcomes = outcome_space().size();
    for (const auto& event : events) {
        if (event.members.empty())
            issues.push_back("event " + event.name + " has an empty outcome set");
        if (!(event.probability >= 0.0 && event.probability <= 1.0))
            issues.push_back("event " + event.name + " has probability outside [0,1]");
        for (std::uint64_t m : event.members)
            if (m >= outcomes) {
                issues.push_back("event " + event.name + " references an outcome outside the space");
                break;
            }
    }
    return issues;
}

OutcomeSpace Polynomial::lifted_space() const {
    const std::uint64_t joint = base_space().size();
    std::vector<int> lifted(static_cast<std::size_t>(degree), static_cast<int>(joint));
    return OutcomeSpace(lifted);
}

std::vector<std::string> Polynomial::check() const {
    std::vector<std::string> issues;
    if (degree < 1) issues.push_back("polynomial degree must be >= 1");
    std::uint64_t expected = 1;
    const std::uint64_t joint = base_space().size();
    for (int i = 0; i < degree; ++i) expected *= joint;
    if (coeffs.size() != expected)
        issues.push_back("coefficient array has " + std::to_string(coeffs.size()) +
                         " entries, expected " + std::to_string(expected));
    return issues;
}

Polynomial Polynomial::symmetrized() const {
    const std::uint64_t joint = base_space().size();
    const auto g = static_cast<std::size_t>(degree);
    Polynomial out = *this;
    std::fill(out.coeffs.begin(), out.coeffs.end(), 0.0);

    std::vector<std::size_t> perm(g);
    for (std::size_t i = 0; i < g; ++i) perm[i] = i;
    std::vector<int> blocks(g), permuted(g);
    const OutcomeSpace lifted = lifted_space();
    std::uint64_t factorial = 1;
    for (std::size_t i = 2; i <= g; ++i) factorial *= i;

    do {
        for (std::uint64_t t = 0; t < coeffs.size(); ++t) {
            lifted.decode(t, blocks);
            for (std::size_t i = 0; i < g; ++i) permuted[i] = blocks[perm[i]];
            out.coeffs[lifted.encode(permuted)] += coeffs[t];
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (double& c : out.coeffs) c /= static_cast<double>(factorial);
    (void)joint;
    return out;
}

double Polynomial::value_at(const Distribution& p) const {
    if (p.conditional()) throw std::invalid_argument("polynomial evaluation needs an unconditional distribution");
    const OutcomeSpace lifted = lifted_space();
    std::vector<int> blocks(static_cast<std::size_t>(degree));
    long double total = 0.0L;
    for (std::uint64_t t = 0; t < coeffs.size(); ++t) {
        if (coeffs[t] == 0.0) continue;
        lifted.decode(t, blocks);
        long double prod = coeffs[t];
        for (int b : blocks) prod *= p.table[static_cast<std::uint64_t>(b)];
        total += prod;
    }
    return static_cast<double>(total);
}

Distribution lift(const Distribution& p, int degree) {
    if (p.conditional()) throw std::invalid_argument("lift requires an unconditional distribution");
    if (degree < 1) throw std::invalid_argument("lift degree must be >= 1");
    Distribution out;
    for (int copy = 0; copy < degree; ++copy) {
        for (std::size_t i = 0; i < p.names.size(); ++i) {
            out.names.push_back(p.names[i] + "#" + std::to_string(copy + 1));
            out.cards.push_back(p.cards[i]);
        }
    }
    const std::uint64_t joint = p.outcome_space().size();
    std::uint64_t total = 1;
    for (int i = 0; i < degree; ++i) total *= joint;
    out.table.resize(total);
    std::vector<int> blocks(static_cast<std::size_t>(degree), 0);
    OutcomeSpace block_space(std::vector<int>(static_cast<std::size_t>(degree), static_cast<int>(joint)));
    for (std::uint64_t t = 0; t < total; ++t) {
        block_space.decode(t, blocks);
        double prod = 1.0;
        for (int b : blocks) prod *= p.table[static_cast<std::uint64_t>(b)];
        out.table[t] = prod;
    }
    return out;
}

}  // namespace infl
