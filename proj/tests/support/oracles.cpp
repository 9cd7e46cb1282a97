#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "infl/outcome_space.hpp"
#include "infl/sampling.hpp"

namespace oracles {

using namespace infl;

namespace {

std::vector<std::vector<int>> permutations_of(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

std::uint64_t burnside_orbit_count(const CorrelationScenario& scenario, int order) {
    // independent variable indexing: family-major, copy tuples lexicographic
    std::vector<std::uint64_t> family_offset;
    std::uint64_t variable_count = 0;
    for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
        family_offset.push_back(variable_count);
        std::uint64_t size = 1;
        for (std::size_t k = 0; k < scenario.parent_sets[x].size(); ++k)
            size *= static_cast<std::uint64_t>(order);
        variable_count += size;
    }

    const auto perms = permutations_of(order);
    std::vector<std::size_t> choice(scenario.latent_count(), 0);
    long double fixed_sum = 0.0L;
    std::uint64_t group_size = 0;

    while (true) {
        ++group_size;
        // variable permutation for this group element
        std::vector<std::uint64_t> image(variable_count);
        for (std::size_t x = 0; x < scenario.observed_count(); ++x) {
            const auto& parents = scenario.parent_sets[x];
            std::uint64_t family_size = 1;
            for (std::size_t k = 0; k < parents.size(); ++k) family_size *= order;
            for (std::uint64_t t = 0; t < family_size; ++t) {
                std::uint64_t rest = t, mapped = 0;
                std::vector<int> tuple(parents.size());
                for (std::size_t k = parents.size(); k-- > 0;) {
                    tuple[k] = static_cast<int>(rest % order);
                    rest /= order;
                }
                for (std::size_t k = 0; k < parents.size(); ++k)
                    mapped = mapped * order + perms[choice[parents[k]]][tuple[k]];
                image[family_offset[x] + t] = family_offset[x] + mapped;
            }
        }
        // Fix(g) = prod over cycles of the family's cardinality
        std::vector<bool> seen(variable_count, false);
        long double fixed = 1.0L;
        for (std::uint64_t v = 0; v < variable_count; ++v) {
            if (seen[v]) continue;
            std::uint64_t w = v;
            while (!seen[w]) {
                seen[w] = true;
                w = image[w];
            }
            std::size_t family = 0;
            while (family + 1 < family_offset.size() && family_offset[family + 1] <= v) ++family;
            fixed *= scenario.cardinalities[family];
        }
        fixed_sum += fixed;

        std::size_t j = scenario.latent_count();
        bool done = scenario.latent_count() == 0;
        while (j-- > 0) {
            if (++choice[j] < perms.size()) break;
            choice[j] = 0;
            if (j == 0) done = true;
        }
        if (done) break;
    }
    return static_cast<std::uint64_t>(std::llround(static_cast<double>(fixed_sum / group_size)));
}

bool strategy_mixture_feasible(const CausalStructure& structure, const Distribution& p) {
    // endogenous observed variables in node order, with observable parents
    struct Var {
        std::size_t node;
        int cardinality;
        std::vector<std::size_t> parents;  // node indices of observable parents
        OutcomeSpace parent_space{std::vector<int>{}};
        std::uint64_t response_count = 0;
    };
    std::vector<Var> endo;
    std::vector<std::size_t> exo_nodes;
    for (std::size_t i = 0; i < structure.nodes.size(); ++i) {
        if (structure.nodes[i].kind == NodeKind::ExogenousObserved) exo_nodes.push_back(i);
        if (structure.nodes[i].kind != NodeKind::Observed) continue;
        Var var;
        var.node = i;
        var.cardinality = structure.nodes[i].cardinality;
        std::vector<int> parent_cards;
        for (std::size_t parent : structure.parents_of(i)) {
            if (structure.nodes[parent].kind == NodeKind::Latent) continue;
            var.parents.push_back(parent);
        }
        std::sort(var.parents.begin(), var.parents.end());
        var.parents.erase(std::unique(var.parents.begin(), var.parents.end()), var.parents.end());
        for (std::size_t parent : var.parents) parent_cards.push_back(structure.nodes[parent].cardinality);
        var.parent_space = OutcomeSpace(parent_cards);
        var.response_count = 1;
        for (std::uint64_t v = 0; v < var.parent_space.size(); ++v)
            var.response_count *= static_cast<std::uint64_t>(var.cardinality);
        endo.push_back(std::move(var));
    }

    std::uint64_t strategy_count = 1;
    for (const Var& var : endo) strategy_count *= var.response_count;
    if (strategy_count > (1ull << 22)) throw std::runtime_error("strategy space too large for the oracle");

    std::vector<int> endo_cards, exo_cards;
    for (const Var& var : endo) endo_cards.push_back(var.cardinality);
    for (std::size_t i : exo_nodes) exo_cards.push_back(structure.nodes[i].cardinality);
    const OutcomeSpace endo_space(endo_cards), exo_space(exo_cards);

    // map node index -> position in (endo | exo)
    std::map<std::size_t, std::pair<bool, std::size_t>> position;
    for (std::size_t k = 0; k < endo.size(); ++k) position[endo[k].node] = {false, k};
    for (std::size_t k = 0; k < exo_nodes.size(); ++k) position[exo_nodes[k]] = {true, k};

    // evaluation order: parents before children (endogenous only)
    std::vector<std::size_t> order;
    {
        std::vector<bool> placed(endo.size(), false);
        bool progress = true;
        while (order.size() < endo.size() && progress) {
            progress = false;
            for (std::size_t k = 0; k < endo.size(); ++k) {
                if (placed[k]) continue;
                bool ready = true;
                for (std::size_t parent : endo[k].parents) {
                    const auto& [is_exo, idx] = position.at(parent);
                    if (!is_exo && !placed[idx]) ready = false;
                }
                if (!ready) continue;
                order.push_back(k);
                placed[k] = true;
                progress = true;
            }
        }
        if (order.size() != endo.size()) throw std::runtime_error("cyclic observable dependencies");
    }

    LinearProgram lp;
    lp.num_vars = static_cast<std::uint32_t>(strategy_count);
    lp.objective.assign(lp.num_vars, 0.0);
    std::vector<SparseRow> rows(exo_space.size() * endo_space.size());

    std::vector<int> x_bar(exo_cards.size()), a_bar(endo_cards.size());
    std::vector<std::uint64_t> response_index(endo.size());
    for (std::uint64_t s = 0; s < strategy_count; ++s) {
        std::uint64_t rest = s;
        for (std::size_t k = endo.size(); k-- > 0;) {
            response_index[k] = rest % endo[k].response_count;
            rest /= endo[k].response_count;
        }
        for (std::uint64_t xi = 0; xi < exo_space.size(); ++xi) {
            exo_space.decode(xi, x_bar);
            for (std::size_t k : order) {
                std::vector<int> parent_values;
                for (std::size_t parent : endo[k].parents) {
                    const auto& [is_exo, idx] = position.at(parent);
                    parent_values.push_back(is_exo ? x_bar[idx] : a_bar[idx]);
                }
                const std::uint64_t slot = endo[k].parent_space.encode(parent_values);
                // response table digit `slot` of response_index, radix cardinality
                std::uint64_t r = response_index[k];
                for (std::uint64_t skip = slot + 1; skip < endo[k].parent_space.size(); ++skip)
                    r /= static_cast<std::uint64_t>(endo[k].cardinality);
                a_bar[k] = static_cast<int>(r % static_cast<std::uint64_t>(endo[k].cardinality));
            }
            rows[xi * endo_space.size() + endo_space.encode(a_bar)].coeffs.emplace_back(
                static_cast<std::uint32_t>(s), 1.0);
        }
    }

    for (std::uint64_t xi = 0; xi < exo_space.size(); ++xi)
        for (std::uint64_t ai = 0; ai < endo_space.size(); ++ai) {
            rows[xi * endo_space.size() + ai].rhs = p.table[xi * endo_space.size() + ai];
            lp.rows.push_back(std::move(rows[xi * endo_space.size() + ai]));
        }
    SparseRow total;
    total.rhs = 1.0;
    for (std::uint32_t s = 0; s < lp.num_vars; ++s) total.coeffs.emplace_back(s, 1.0);
    lp.rows.push_back(std::move(total));

    return solve(lp).status == SolveStatus::Optimal;
}

bool three_on_line_feasible(const Distribution& p) {
    // marginals of the outer variables
    double pa[2] = {0, 0}, pc[2] = {0, 0};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                pa[a] += p.table[a * 4 + b * 2 + c];
                pc[c] += p.table[a * 4 + b * 2 + c];
            }

    // strategies f: (a,c) -> b, outer variables copying their latents
    LinearProgram lp;
    lp.num_vars = 16;
    lp.objective.assign(16, 0.0);
    std::vector<SparseRow> rows(8);
    for (std::uint32_t s = 0; s < 16; ++s) {
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c) {
                const int b = (s >> (a * 2 + c)) & 1;
                rows[a * 4 + b * 2 + c].coeffs.emplace_back(s, pa[a] * pc[c]);
            }
    }
    for (int i = 0; i < 8; ++i) {
        rows[i].rhs = p.table[i];
        lp.rows.push_back(std::move(rows[i]));
    }
    SparseRow total;
    total.rhs = 1.0;
    for (std::uint32_t s = 0; s < 16; ++s) total.coeffs.emplace_back(s, 1.0);
    lp.rows.push_back(std::move(total));

    return solve(lp).status == SolveStatus::Optimal;
}

namespace {

/// Variable permutations of the adjacent copy-index transpositions, one set
/// per latent, computed from the problem's public variable list.
std::vector<std::vector<std::uint32_t>> generator_permutations(const InflationProblem& problem) {
    std::vector<std::vector<std::uint32_t>> generators;
    const auto& scenario = problem.scenario;
    const int n = problem.order;

    // lookup from (observed, tuple) to variable index
    std::map<std::pair<int, std::vector<int>>, std::uint32_t> lookup;
    for (std::uint32_t v = 0; v < problem.variables.size(); ++v)
        lookup[{problem.variables[v].observed, problem.variables[v].copy_tuple}] = v;

    for (std::size_t latent = 0; latent < scenario.latent_count(); ++latent) {
        for (int k = 0; k + 1 < n; ++k) {
            std::vector<std::uint32_t> perm(problem.variables.size());
            for (std::uint32_t v = 0; v < problem.variables.size(); ++v) {
                const auto& var = problem.variables[v];
                const auto& parents = scenario.parent_sets[var.observed];
                std::vector<int> tuple = var.copy_tuple;
                for (std::size_t idx = 0; idx < parents.size(); ++idx) {
                    if (parents[idx] != static_cast<int>(latent)) continue;
                    if (tuple[idx] == k)
                        tuple[idx] = k + 1;
                    else if (tuple[idx] == k + 1)
                        tuple[idx] = k;
                }
                perm[v] = lookup.at({var.observed, tuple});
            }
            generators.push_back(std::move(perm));
        }
    }
    return generators;
}

}  // namespace

LinearProgram unreduced_inflation_lp(const InflationProblem& problem, const Distribution& p) {
    const OutcomeSpace space = problem.assignment_space();
    const OutcomeSpace joint = problem.scenario.joint_space();
    const int n = problem.order;
    const std::size_t m = problem.scenario.observed_count();
    const auto diag = problem.diagonal_positions(n);

    LinearProgram lp;
    lp.num_vars = static_cast<std::uint32_t>(space.size());
    lp.objective.assign(lp.num_vars, 0.0);

    SparseRow normalization;
    normalization.rhs = 1.0;
    for (std::uint32_t v = 0; v < lp.num_vars; ++v) normalization.coeffs.emplace_back(v, 1.0);
    lp.rows.push_back(std::move(normalization));

    // degree-n product rows over raw assignments
    std::uint64_t row_count = 1;
    for (int i = 0; i < n; ++i) row_count *= joint.size();
    std::vector<SparseRow> product_rows(row_count);
    std::vector<int> digits(space.rank()), block(m);
    for (std::uint64_t raw = 0; raw < space.size(); ++raw) {
        space.decode(raw, digits);
        std::uint64_t row = 0;
        for (int i = 0; i < n; ++i) {
            for (std::size_t x = 0; x < m; ++x) block[x] = digits[diag[static_cast<std::size_t>(i) * m + x]];
            row = row * joint.size() + joint.encode(block);
        }
        product_rows[row].coeffs.emplace_back(static_cast<std::uint32_t>(raw), 1.0);
    }
    OutcomeSpace block_space(std::vector<int>(static_cast<std::size_t>(n), static_cast<int>(joint.size())));
    std::vector<int> blocks(static_cast<std::size_t>(n));
    for (std::uint64_t d = 0; d < row_count; ++d) {
        block_space.decode(d, blocks);
        double rhs = 1.0;
        for (int b : blocks) rhs *= p.table[static_cast<std::uint64_t>(b)];
        product_rows[d].rhs = rhs;
        lp.rows.push_back(std::move(product_rows[d]));
    }

    // symmetry equalities, row by row, for the generating transpositions
    std::vector<std::uint64_t> strides(space.rank());
    {
        std::uint64_t s = 1;
        for (std::size_t i = space.rank(); i-- > 0;) {
            strides[i] = s;
            s *= static_cast<std::uint64_t>(space.cardinality(i));
        }
    }
    for (const auto& perm : generator_permutations(problem)) {
        for (std::uint64_t raw = 0; raw < space.size(); ++raw) {
            space.decode(raw, digits);
            std::uint64_t image = 0;
            for (std::size_t v = 0; v < digits.size(); ++v)
                image += static_cast<std::uint64_t>(digits[v]) * strides[perm[v]];
            if (image <= raw) continue;
            SparseRow row;
            row.coeffs.emplace_back(static_cast<std::uint32_t>(raw), 1.0);
            row.coeffs.emplace_back(static_cast<std::uint32_t>(image), -1.0);
            row.rhs = 0.0;
            lp.rows.push_back(std::move(row));
        }
    }
    return lp;
}

std::vector<double> expand_orbit_solution(const InflationProblem& problem, const OrbitIndex& index,
                                          const std::vector<double>& orbit_masses) {
    const OutcomeSpace space = problem.assignment_space();
    const auto perms = problem.group_variable_permutations();
    std::vector<std::uint64_t> strides(space.rank());
    {
        std::uint64_t s = 1;
        for (std::size_t i = space.rank(); i-- > 0;) {
            strides[i] = s;
            s *= static_cast<std::uint64_t>(space.cardinality(i));
        }
    }
    std::vector<double> q(space.size(), 0.0);
    std::vector<int> digits(space.rank());
    std::vector<std::uint64_t> members;
    for (std::size_t w = 0; w < index.count(); ++w) {
        space.decode(index.representatives[w], digits);
        members.clear();
        for (const auto& perm : perms) {
            std::uint64_t flat = 0;
            for (std::size_t v = 0; v < digits.size(); ++v)
                flat += static_cast<std::uint64_t>(digits[v]) * strides[perm[v]];
            members.push_back(flat);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (std::uint64_t member : members)
            q[member] = orbit_masses[w] / static_cast<double>(members.size());
    }
    return q;
}

double local_search_minimum(const CorrelationScenario& scenario,
                            const std::function<double(const Distribution&)>& objective,
                            std::uint64_t seed, int restarts, int iterations) {
    std::mt19937_64 rng(seed);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        LatentModel model = sample_latent_model(scenario, rng, 4);
        double current = objective(realize(model, scenario));
        for (int it = 0; it < iterations; ++it) {
            LatentModel candidate = model;
            if (draw_index(rng, 2) == 0) {
                // reweight one latent value
                const std::size_t j = draw_index(rng, candidate.weights.size());
                const std::size_t v = draw_index(rng, candidate.weights[j].size());
                candidate.weights[j][v] *= std::exp(2.0 * draw_unit(rng) - 1.0);
                double sum = 0.0;
                for (double w : candidate.weights[j]) sum += w;
                for (double& w : candidate.weights[j]) w /= sum;
            } else {
                // flip one response entry
                const std::size_t x = draw_index(rng, candidate.responses.size());
                const std::size_t cell = draw_index(rng, candidate.responses[x].size());
                candidate.responses[x][cell] =
                    static_cast<int>(draw_index(rng, static_cast<std::uint64_t>(scenario.cardinalities[x])));
            }
            const double value = objective(realize(candidate, scenario));
            if (value < current) {
                current = value;
                model = std::move(candidate);
            }
        }
        best = std::min(best, current);
    }
    return best;
}

}  // namespace oracles
