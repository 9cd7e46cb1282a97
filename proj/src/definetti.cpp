#include "infl/definetti.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infl {

std::vector<double> symmetrize(const std::vector<double>& q, const InflationProblem& problem,
                               std::uint64_t budget) {
    const OutcomeSpace space = problem.assignment_space();
    if (space.size() > budget) throw ResourceError(space.size());
    if (q.size() != space.size())
        throw std::invalid_argument("distribution size does not match the inflation outcome space");
    long double total = 0.0L;
    for (double v : q) total += v;
    if (std::fabs(static_cast<double>(total) - 1.0) > 1e-7)
        throw std::invalid_argument("symmetrize input must be normalized");

    const auto perms = problem.group_variable_permutations();
    std::vector<std::uint64_t> strides(space.rank());
    {
        std::uint64_t s = 1;
        for (std::size_t i = space.rank(); i-- > 0;) {
            strides[i] = s;
            s *= static_cast<std::uint64_t>(space.cardinality(i));
        }
    }

    std::vector<double> out(q.size(), 0.0);
    const double share = 1.0 / static_cast<double>(perms.size());
    std::vector<int> digits(space.rank());
    for (std::uint64_t raw = 0; raw < space.size(); ++raw) {
        if (q[raw] == 0.0) continue;
        space.decode(raw, digits);
        const double mass = q[raw] * share;
        for (const auto& perm : perms) {
            std::uint64_t flat = 0;
            for (std::size_t v = 0; v < digits.size(); ++v)
                flat += static_cast<std::uint64_t>(digits[v]) * strides[perm[v]];
            out[flat] += mass;
        }
    }
    return out;
}

namespace {

/// Ordered selections of g distinct values from {0..n-1}, lexicographic.
std::vector<std::vector<int>> distinct_tuples(int n, int g) {
    OutcomeSpace space(std::vector<int>(static_cast<std::size_t>(g), n));
    std::vector<std::vector<int>> out;
    std::vector<int> tuple(static_cast<std::size_t>(g), 0);
    for (std::uint64_t t = 0; t < space.size(); ++t) {
        space.decode(t, tuple);
        bool distinct = true;
        for (std::size_t a = 0; a < tuple.size() && distinct; ++a)
            for (std::size_t b = a + 1; b < tuple.size(); ++b)
                if (tuple[a] == tuple[b]) {
                    distinct = false;
                    break;
                }
        if (distinct) out.push_back(tuple);
    }
    return out;
}

std::vector<std::string> block_names(const CorrelationScenario& scenario, int g) {
    std::vector<std::string> names;
    for (int copy = 0; copy < g; ++copy)
        for (const auto& name : scenario.observed_names)
            names.push_back(name + "#" + std::to_string(copy + 1));
    return names;
}

/// Accumulates the marginal over g diagonal blocks from sums over per-latent
/// index tuples drawn from `tuples`, weighting each combination equally.
Distribution accumulate_marginal(const DeterministicAssignment& assignment,
                                 const CorrelationScenario& scenario, int n, int g,
                                 const std::vector<std::vector<int>>& tuples,
                                 const std::vector<std::size_t>& family_offset) {
    const std::size_t latent_count = scenario.latent_count();
    const OutcomeSpace joint = scenario.joint_space();

    Distribution out;
    out.names = block_names(scenario, g);
    for (int copy = 0; copy < g; ++copy)
        out.cards.insert(out.cards.end(), scenario.cardinalities.begin(), scenario.cardinalities.end());
    std::uint64_t lifted = 1;
    for (int i = 0; i < g; ++i) lifted *= joint.size();
    out.table.assign(lifted, 0.0);

    std::vector<std::size_t> choice(latent_count, 0);
    std::vector<int> block(scenario.observed_count());
    double combos = 1.0;
    for (std::size_t j = 0; j < latent_count; ++j) combos *= static_cast<double>(tuples.size());

    while (true) {
        std::uint64_t index = 0;
        for (int t = 0; t < g; ++t) {
            for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
                const auto& parents = scenario.parent_sets[x];
                std::uint64_t tuple_flat = 0;
                for (std::size_t k = 0; k < parents.size(); ++k)
                    tuple_flat = tuple_flat * static_cast<std::uint64_t>(n) +
                                 static_cast<std::uint64_t>(tuples[choice[parents[k]]][t]);
                block[x] = assignment.values[family_offset[x] + tuple_flat];
            }
            index = index * joint.size() + joint.encode(block);
        }
        out.table[index] += 1.0;

        std::size_t j = latent_count;
        bool done = latent_count == 0;
        while (j-- > 0) {
            if (++choice[j] < tuples.size()) break;
            choice[j] = 0;
            if (j == 0) done = true;
        }
        if (done) break;
    }

    for (double& v : out.table) v /= combos;
    return out;
}

}  // namespace

ClosedFormMarginals diagonal_marginal_closed_form(const DeterministicAssignment& assignment,
                                                  const CorrelationScenario& scenario, int n, int g) {
    if (g < 1 || g > n) throw std::invalid_argument("closed form requires 1 <= g <= n");
    if (const auto issues = scenario.check(); !issues.empty())
        throw std::invalid_argument("invalid correlation scenario: " + issues.front());

    std::vector<std::size_t> family_offset;
    std::size_t offset = 0;
    std::vector<std::uint64_t> family_size;
    for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
        family_offset.push_back(offset);
        std::uint64_t size = 1;
        for (std::size_t k = 0; k < scenario.parent_sets[x].size(); ++k)
            size *= static_cast<std::uint64_t>(n);
        family_size.push_back(size);
        offset += size;
    }
    if (assignment.values.size() != offset)
        throw std::invalid_argument("assignment length does not match the order-" + std::to_string(n) +
                                    " inflation variable count");

    ClosedFormMarginals result;
    result.degree_g = accumulate_marginal(assignment, scenario, n, g, distinct_tuples(n, g), family_offset);
    result.degree_1 = accumulate_marginal(assignment, scenario, n, 1, distinct_tuples(n, 1), family_offset);
    result.degree_1.names = scenario.observed_names;

    result.model.latent_cards.assign(scenario.latent_count(), n);
    for (std::size_t j = 0; j < scenario.latent_count(); ++j)
        result.model.weights.emplace_back(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    for (std::size_t x = 0; x < scenario.observed_count(); ++x)
        result.model.responses.emplace_back(assignment.values.begin() + family_offset[x],
                                            assignment.values.begin() + family_offset[x] + family_size[x]);
    return result;
}

double convergence_bound(int latent_count, int n, int g) {
    if (g < 1 || g > n) throw std::invalid_argument("convergence bound requires 1 <= g <= n");
    double ratio = 1.0;
    for (int k = 0; k < g; ++k) ratio *= static_cast<double>(n - k) / static_cast<double>(n);
    double power = 1.0;
    for (int j = 0; j < latent_count; ++j) power *= ratio;
    return 2.0 * (1.0 - power);
}

double tv_distance(const std::vector<double>& q1, const std::vector<double>& q2) {
    if (q1.size() != q2.size()) throw std::invalid_argument("tv_distance: outcome spaces differ");
    long double total = 0.0L;
    for (std::size_t i = 0; i < q1.size(); ++i) total += std::fabs(q1[i] - q2[i]);
    return static_cast<double>(total);
}

}  // namespace infl
