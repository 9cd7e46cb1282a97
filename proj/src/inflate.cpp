#include "infl/inflate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace infl {

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

struct VariableLookup {
    std::vector<std::size_t> family_offset;  // per observed variable
    std::vector<OutcomeSpace> tuple_space;   // copy tuples of each family

    std::uint32_t index(int observed, std::span<const int> tuple) const {
        return static_cast<std::uint32_t>(family_offset[observed] + tuple_space[observed].encode(tuple));
    }
};

VariableLookup make_lookup(const InflationProblem& problem) {
    VariableLookup lookup;
    const auto& scenario = problem.scenario;
    std::size_t offset = 0;
    for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
        lookup.family_offset.push_back(offset);
        std::vector<int> radices(scenario.parent_sets[x].size(), problem.order);
        lookup.tuple_space.emplace_back(radices);
        offset += lookup.tuple_space.back().size();
    }
    return lookup;
}

}  // namespace

OutcomeSpace InflationProblem::assignment_space() const {
    std::vector<int> cards;
    cards.reserve(variables.size());
    for (const auto& v : variables) cards.push_back(scenario.cardinalities[v.observed]);
    return OutcomeSpace(cards);
}

double InflationProblem::group_order() const {
    double factorial = 1.0;
    for (int i = 2; i <= order; ++i) factorial *= i;
    return std::pow(factorial, static_cast<double>(scenario.latent_count()));
}

std::vector<std::vector<std::uint32_t>> InflationProblem::group_variable_permutations() const {
    const auto perms = all_permutations(order);
    const std::size_t latent_count = scenario.latent_count();
    const VariableLookup lookup = make_lookup(*this);

    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::size_t> choice(latent_count, 0);  // permutation index per latent
    std::vector<int> mapped;
    while (true) {
        std::vector<std::uint32_t> var_perm(variables.size());
        for (std::size_t v = 0; v < variables.size(); ++v) {
            const auto& var = variables[v];
            const auto& parents = scenario.parent_sets[var.observed];
            mapped.resize(var.copy_tuple.size());
            for (std::size_t k = 0; k < parents.size(); ++k)
                mapped[k] = perms[choice[parents[k]]][var.copy_tuple[k]];
            var_perm[v] = lookup.index(var.observed, mapped);
        }
        out.push_back(std::move(var_perm));

        std::size_t j = latent_count;
        while (j-- > 0) {
            if (++choice[j] < perms.size()) break;
            choice[j] = 0;
            if (j == 0) return out;
        }
        if (latent_count == 0) return out;
    }
}

std::vector<std::uint32_t> InflationProblem::diagonal_positions(int g) const {
    const VariableLookup lookup = make_lookup(*this);
    std::vector<std::uint32_t> out;
    for (int block = 0; block < g; ++block) {
        for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
            std::vector<int> tuple(scenario.parent_sets[x].size(), block);
            out.push_back(lookup.index(static_cast<int>(x), tuple));
        }
    }
    return out;
}

InflationProblem build_inflation(const CorrelationScenario& scenario, int order) {
    if (order < 1) throw std::invalid_argument("inflation order must be >= 1");
    if (const auto issues = scenario.check(); !issues.empty())
        throw std::invalid_argument("invalid correlation scenario: " + issues.front());

    InflationProblem problem;
    problem.scenario = scenario;
    problem.order = order;
    for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
        std::vector<int> radices(scenario.parent_sets[x].size(), order);
        OutcomeSpace tuples(radices);
        std::vector<int> tuple(radices.size(), 0);
        for (std::uint64_t t = 0; t < tuples.size(); ++t) {
            tuples.decode(t, tuple);
            problem.variables.push_back({static_cast<int>(x), tuple});
        }
    }
    return problem;
}

namespace {

/// Applies a variable permutation to an assignment given as digits, returning
/// the flat index of the permuted assignment.
std::uint64_t permuted_flat(std::span<const int> digits, std::span<const std::uint32_t> perm,
                            std::span<const std::uint64_t> strides) {
    std::uint64_t flat = 0;
    for (std::size_t v = 0; v < digits.size(); ++v)
        flat += static_cast<std::uint64_t>(digits[v]) * strides[perm[v]];
    return flat;
}

std::vector<std::uint64_t> space_strides(const OutcomeSpace& space) {
    std::vector<std::uint64_t> strides(space.rank());
    std::uint64_t s = 1;
    for (std::size_t i = space.rank(); i-- > 0;) {
        strides[i] = s;
        s *= static_cast<std::uint64_t>(space.cardinality(i));
    }
    return strides;
}

}  // namespace

OrbitIndex orbits(const InflationProblem& problem, std::uint64_t budget) {
    const OutcomeSpace space = problem.assignment_space();
    if (space.size() > budget) throw ResourceError(space.size());

    const auto perms = problem.group_variable_permutations();
    const auto strides = space_strides(space);
    const std::uint64_t raw_count = space.size();

    OrbitIndex index;
    std::vector<bool> visited(raw_count, false);
    std::vector<int> digits(space.rank());
    std::vector<std::uint64_t> members;
    members.reserve(perms.size());

    for (std::uint64_t raw = 0; raw < raw_count; ++raw) {
        if (visited[raw]) continue;
        space.decode(raw, digits);
        members.clear();
        for (const auto& perm : perms) members.push_back(permuted_flat(digits, perm, strides));
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (std::uint64_t m : members) visited[m] = true;
        index.representatives.push_back(raw);
        index.sizes.push_back(members.size());
    }
    return index;
}

DiagonalCounts diagonal_counts(const InflationProblem& problem, const OrbitIndex& index, int g,
                               std::uint64_t budget) {
    if (g < 1 || g > problem.order) throw std::invalid_argument("diagonal degree must satisfy 1 <= g <= n");
    const OutcomeSpace space = problem.assignment_space();
    if (space.size() > budget) throw ResourceError(space.size());

    const auto perms = problem.group_variable_permutations();
    const auto strides = space_strides(space);
    const auto diag = problem.diagonal_positions(g);
    const std::size_t m = problem.scenario.observed_count();
    const OutcomeSpace joint = problem.scenario.joint_space();

    DiagonalCounts counts;
    counts.degree = g;
    counts.row_count = 1;
    for (int i = 0; i < g; ++i) counts.row_count *= joint.size();
    counts.by_orbit.resize(index.count());

    std::vector<int> digits(space.rank());
    std::vector<int> block(m);
    std::vector<std::uint64_t> members;
    std::map<std::uint64_t, std::uint64_t> acc;

    for (std::size_t w = 0; w < index.count(); ++w) {
        space.decode(index.representatives[w], digits);
        members.clear();
        for (const auto& perm : perms) members.push_back(permuted_flat(digits, perm, strides));
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());

        acc.clear();
        std::vector<int> member_digits(space.rank());
        for (std::uint64_t member : members) {
            space.decode(member, member_digits);
            std::uint64_t row = 0;
            for (int i = 0; i < g; ++i) {
                for (std::size_t x = 0; x < m; ++x)
                    block[x] = member_digits[diag[static_cast<std::size_t>(i) * m + x]];
                row = row * joint.size() + joint.encode(block);
            }
            ++acc[row];
        }
        counts.by_orbit[w].assign(acc.begin(), acc.end());
    }
    return counts;
}

namespace {

ConstraintSet counts_to_rows(const InflationProblem& problem, const OrbitIndex& index,
                             const DiagonalCounts& counts) {
    ConstraintSet set;
    set.variable_count = static_cast<std::uint32_t>(index.count());
    set.degree = counts.degree;

    SparseRow normalization;
    normalization.rhs = 1.0;
    for (std::uint32_t w = 0; w < index.count(); ++w) normalization.coeffs.emplace_back(w, 1.0);
    set.rows.push_back(std::move(normalization));
    set.info.push_back({RowInfo::Kind::Normalization, 0, {}});

    std::vector<SparseRow> product_rows(counts.row_count);
    for (std::uint32_t w = 0; w < index.count(); ++w) {
        const double size = static_cast<double>(index.sizes[w]);
        for (const auto& [row, count] : counts.by_orbit[w])
            product_rows[row].coeffs.emplace_back(w, static_cast<double>(count) / size);
    }
    for (std::uint64_t d = 0; d < counts.row_count; ++d) {
        set.rows.push_back(std::move(product_rows[d]));
        set.info.push_back({RowInfo::Kind::DiagonalProduct, d, {}});
    }
    (void)problem;
    return set;
}

}  // namespace

ConstraintSet diagonal_constraints(const InflationProblem& problem, const OrbitIndex& index,
                                   const Distribution& p, int g, std::uint64_t budget) {
    if (g < 1 || g > problem.order) throw std::invalid_argument("product-row degree must satisfy 1 <= g <= n");
    if (p.conditional()) throw std::invalid_argument("diagonal constraints need an unconditional distribution");
    if (p.cards != problem.scenario.cardinalities)
        throw std::invalid_argument("distribution signature does not match the scenario");

    const DiagonalCounts counts = diagonal_counts(problem, index, g, budget);
    ConstraintSet set = counts_to_rows(problem, index, counts);

    const OutcomeSpace joint = problem.scenario.joint_space();
    std::vector<int> blocks(static_cast<std::size_t>(g));
    OutcomeSpace block_space(std::vector<int>(static_cast<std::size_t>(g), static_cast<int>(joint.size())));
    for (std::size_t r = 1; r < set.rows.size(); ++r) {
        block_space.decode(set.info[r].diag_index, blocks);
        double rhs = 1.0;
        for (int b : blocks) rhs *= p.table[static_cast<std::uint64_t>(b)];
        set.rows[r].rhs = rhs;
    }
    return set;
}

ConstraintSet event_constraints(const InflationProblem& problem, const OrbitIndex& index,
                                const EventTable& events, std::uint64_t budget) {
    if (events.cards != problem.scenario.cardinalities)
        throw std::invalid_argument("event table outcome space does not match the scenario");
    const int n = problem.order;
    const std::size_t event_count = events.events.size();
    std::uint64_t row_count = 1;
    for (int i = 0; i < n; ++i) {
        row_count *= event_count;
        if (row_count > budget) throw ResourceError(row_count);
    }

    const OutcomeSpace joint = problem.scenario.joint_space();
    std::vector<std::vector<int>> events_of_outcome(joint.size());
    for (std::size_t e = 0; e < event_count; ++e)
        for (std::uint64_t member : events.events[e].members)
            events_of_outcome[member].push_back(static_cast<int>(e));

    const DiagonalCounts counts = diagonal_counts(problem, index, n, budget);

    ConstraintSet set;
    set.variable_count = static_cast<std::uint32_t>(index.count());
    set.degree = n;
    SparseRow normalization;
    normalization.rhs = 1.0;
    for (std::uint32_t w = 0; w < index.count(); ++w) normalization.coeffs.emplace_back(w, 1.0);
    set.rows.push_back(std::move(normalization));
    set.info.push_back({RowInfo::Kind::Normalization, 0, {}});

    // row index over event tuples, block 0 most significant
    std::vector<std::map<std::uint32_t, std::uint64_t>> row_counts(row_count);
    std::vector<int> block_outcomes(static_cast<std::size_t>(n));
    for (std::uint32_t w = 0; w < index.count(); ++w) {
        for (const auto& [diag, count] : counts.by_orbit[w]) {
            std::uint64_t rest = diag;
            for (int i = n - 1; i >= 0; --i) {
                block_outcomes[i] = static_cast<int>(rest % joint.size());
                rest /= joint.size();
            }
            // distribute the count to every event tuple containing this diagonal assignment
            std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
            bool any_empty = false;
            for (int i = 0; i < n; ++i)
                if (events_of_outcome[block_outcomes[i]].empty()) any_empty = true;
            if (any_empty) continue;
            while (true) {
                std::uint64_t row = 0;
                for (int i = 0; i < n; ++i)
                    row = row * event_count + events_of_outcome[block_outcomes[i]][pick[i]];
                row_counts[row][w] += count;
                int j = n;
                bool done = false;
                while (j-- > 0) {
                    if (++pick[j] < events_of_outcome[block_outcomes[j]].size()) break;
                    pick[j] = 0;
                    if (j == 0) done = true;
                }
                if (done) break;
            }
        }
    }

    std::vector<int> tuple(static_cast<std::size_t>(n));
    for (std::uint64_t r = 0; r < row_count; ++r) {
        SparseRow row;
        for (const auto& [w, count] : row_counts[r])
            row.coeffs.emplace_back(w, static_cast<double>(count) / static_cast<double>(index.sizes[w]));
        std::uint64_t rest = r;
        for (int i = n - 1; i >= 0; --i) {
            tuple[i] = static_cast<int>(rest % event_count);
            rest /= event_count;
        }
        double rhs = 1.0;
        for (int i = 0; i < n; ++i) rhs *= events.events[tuple[i]].probability;
        row.rhs = rhs;
        set.rows.push_back(std::move(row));
        set.info.push_back({RowInfo::Kind::EventProduct, r, tuple});
    }
    return set;
}

LinearProgram ConstraintSet::to_linear_program() const {
    LinearProgram lp;
    lp.num_vars = variable_count;
    lp.objective.assign(variable_count, 0.0);
    lp.rows = rows;
    return lp;
}

}  // namespace infl
